//! The matching + Lovász-Local-Lemma coloring pipeline.
//!
//! Steps: classify sets as large (`|S ∩ Y| >= 6t`) or small; build the
//! bipartite graph between elements and large sets; if that graph is a
//! forest, delete one element per large set via the rootward charging scheme
//! so the reduced sets become pairwise disjoint; pair the reduced sets'
//! elements into a partial matching; then draw colorings consistent with the
//! matching and Moser-Tardos-resample until every small set's sum is below
//! the threshold. Any failure (a cycle among large sets, or resample cap
//! exhaustion) falls back to Beck-Fiala rounding, so the output always meets
//! the `2t - 1` bound.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rounding::beck_fiala_color;
use crate::sampler::stream_rng;
use crate::set_system::{Coloring, SetSystem};

/// Partition of the set indices by restricted size against the `6t`
/// threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeClassification {
    pub large: Vec<usize>,
    pub small: Vec<usize>,
}

/// `i` is large iff `|S_i ∩ Y| >= 6t`.
pub fn classify(sys: &SetSystem, subset: &[usize]) -> SizeClassification {
    let threshold = 6 * sys.sparsity();
    let mut in_subset = vec![false; sys.n()];
    for &x in subset {
        in_subset[x] = true;
    }
    let mut large = Vec::new();
    let mut small = Vec::new();
    for i in 0..sys.m() {
        let size = sys.row(i).iter().filter(|&&x| in_subset[x]).count();
        if size >= threshold && threshold > 0 {
            large.push(i);
        } else {
            small.push(i);
        }
    }
    SizeClassification { large, small }
}

/// Bipartite graph between the elements of `Y` and the large sets: the
/// induced subgraph G' of the incidence graph.
#[derive(Debug, Clone)]
pub struct LargeSetGraph {
    /// Large set indices, ascending.
    pub large: Vec<usize>,
    /// Per large set (parallel to `large`), its elements inside `Y`.
    pub neighbors: Vec<Vec<usize>>,
    /// Element -> positions into `large` of the large sets containing it.
    pub element_adj: HashMap<usize, Vec<usize>>,
}

pub fn large_set_graph(
    sys: &SetSystem,
    subset: &[usize],
    classification: &SizeClassification,
) -> LargeSetGraph {
    let mut in_subset = vec![false; sys.n()];
    for &x in subset {
        in_subset[x] = true;
    }
    let large = classification.large.clone();
    let mut neighbors = Vec::with_capacity(large.len());
    let mut element_adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for (pos, &i) in large.iter().enumerate() {
        let elems: Vec<usize> = sys
            .row(i)
            .iter()
            .copied()
            .filter(|&x| in_subset[x])
            .collect();
        for &x in &elems {
            element_adj.entry(x).or_default().push(pos);
        }
        neighbors.push(elems);
    }
    LargeSetGraph {
        large,
        neighbors,
        element_adj,
    }
}

/// A vertex of [`LargeSetGraph`], for cycle witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphVertex {
    Element(usize),
    /// Large set, by set index.
    LargeSet(usize),
}

/// A closed walk alternating elements and large sets, returned when the
/// graph is not a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleWitness {
    pub vertices: Vec<GraphVertex>,
}

/// Girth of G': length of the shortest cycle, or `None` for a forest.
/// Always even when finite, since the graph is bipartite.
pub fn girth_of_large_graph(g: &LargeSetGraph) -> Option<usize> {
    // BFS from every large-set vertex; the shortest cycle through a closest
    // pair of meeting BFS branches realizes the girth. Starting only from
    // one side suffices: every cycle passes through a large set.
    let sets = g.large.len();
    let elements: Vec<usize> = {
        let mut v: Vec<usize> = g.element_adj.keys().copied().collect();
        v.sort_unstable();
        v
    };
    let elem_pos: HashMap<usize, usize> =
        elements.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let total = sets + elements.len();
    let vertex_neighbors = |v: usize| -> Vec<usize> {
        if v < sets {
            g.neighbors[v].iter().map(|x| sets + elem_pos[x]).collect()
        } else {
            g.element_adj[&elements[v - sets]].to_vec()
        }
    };
    let mut best: Option<usize> = None;
    for start in 0..sets {
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = std::collections::VecDeque::new();
        dist[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                // cycles through deeper vertices cannot beat the best
                if 2 * dist[u] >= b {
                    continue;
                }
            }
            for w in vertex_neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w && parent[w] != u {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b) {
                        best = Some(len);
                    }
                }
            }
        }
    }
    best
}

/// Deleted element `x_i` per large set, with the reduced sets
/// `A'_i = (S_i ∩ Y) \ {x_i}` pairwise disjoint.
#[derive(Debug, Clone)]
pub struct DeletionScheme {
    /// Parallel to the graph's `large`: the deleted element per large set.
    pub deleted: Vec<usize>,
    /// Parallel to `large`: the reduced sets.
    pub reduced: Vec<Vec<usize>>,
}

/// Outcome of the forest charging scheme.
#[derive(Debug, Clone)]
pub enum DeletionOutcome {
    Scheme(DeletionScheme),
    Cycle(CycleWitness),
}

/// Runs the rootward charging scheme: per tree of G', root at the
/// smallest-index large-set vertex, orient edges away from the root, delete
/// each non-root large set's parent element, and delete the root's smallest
/// element. If G' contains a cycle, returns it as a witness instead.
pub fn choose_deletions(g: &LargeSetGraph) -> Result<DeletionOutcome> {
    let sets = g.large.len();
    let elements: Vec<usize> = {
        let mut v: Vec<usize> = g.element_adj.keys().copied().collect();
        v.sort_unstable();
        v
    };
    let elem_pos: HashMap<usize, usize> =
        elements.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let total = sets + elements.len();

    for (pos, elems) in g.neighbors.iter().enumerate() {
        if elems.is_empty() {
            return Err(Error::Internal(format!(
                "large set {} has empty neighborhood",
                g.large[pos]
            )));
        }
    }

    // vertex ids: 0..sets are large sets (ascending set index), the rest are
    // elements
    let mut parent = vec![usize::MAX; total];
    let mut visited = vec![false; total];
    let mut deleted = vec![usize::MAX; sets];

    for root in 0..sets {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        parent[root] = root;
        deleted[root] = *g.neighbors[root].iter().min().expect("nonempty");
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let nbrs: Vec<usize> = if u < sets {
                g.neighbors[u].iter().map(|x| sets + elem_pos[x]).collect()
            } else {
                g.element_adj[&elements[u - sets]].to_vec()
            };
            for w in nbrs {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = u;
                    if w < sets {
                        // non-root large set: delete its parent element
                        deleted[w] = elements[parent[w] - sets];
                    }
                    queue.push_back(w);
                } else if parent[u] != w {
                    // cycle: join the two tree paths at their meeting point
                    return Ok(DeletionOutcome::Cycle(reconstruct_cycle(
                        g, &elements, &parent, sets, u, w,
                    )));
                }
            }
        }
    }

    let mut reduced = Vec::with_capacity(sets);
    for (pos, elems) in g.neighbors.iter().enumerate() {
        reduced.push(
            elems
                .iter()
                .copied()
                .filter(|&x| x != deleted[pos])
                .collect::<Vec<usize>>(),
        );
    }

    // Invariant the whole pipeline rests on: reduced sets pairwise disjoint.
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for (pos, a) in reduced.iter().enumerate() {
        for &x in a {
            if let Some(&other) = seen.get(&x) {
                return Err(Error::Internal(format!(
                    "element {x} survives in large sets {} and {}",
                    g.large[other], g.large[pos]
                )));
            }
            seen.insert(x, pos);
        }
    }

    Ok(DeletionOutcome::Scheme(DeletionScheme { deleted, reduced }))
}

fn reconstruct_cycle(
    g: &LargeSetGraph,
    elements: &[usize],
    parent: &[usize],
    sets: usize,
    u: usize,
    w: usize,
) -> CycleWitness {
    let to_vertex = |v: usize| -> GraphVertex {
        if v < sets {
            GraphVertex::LargeSet(g.large[v])
        } else {
            GraphVertex::Element(elements[v - sets])
        }
    };
    let path_to_root = |mut v: usize| -> Vec<usize> {
        let mut path = vec![v];
        while parent[v] != v {
            v = parent[v];
            path.push(v);
        }
        path
    };
    let pu = path_to_root(u);
    let pw = path_to_root(w);
    // trim the common suffix down to the meeting vertex
    let mut i = pu.len();
    let mut j = pw.len();
    while i > 1 && j > 1 && pu[i - 2] == pw[j - 2] {
        i -= 1;
        j -= 1;
    }
    let mut vertices: Vec<GraphVertex> = pu[..i].iter().map(|&v| to_vertex(v)).collect();
    vertices.extend(pw[..j - 1].iter().rev().map(|&v| to_vertex(v)));
    CycleWitness { vertices }
}

/// Disjoint element pairs, each inside a unique large set, plus the at most
/// two leftover elements `B_i` per large set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMatching {
    /// Pairs `(a_j, b_j)` of distinct elements.
    pub pairs: Vec<(usize, usize)>,
    /// Parallel to `pairs`: the owning large set index.
    pub owner: Vec<usize>,
    /// Per large set: `(set index, B_i)` with `|B_i| <= 2`.
    pub leftovers: Vec<(usize, Vec<usize>)>,
}

impl PartialMatching {
    pub fn empty() -> Self {
        PartialMatching {
            pairs: Vec::new(),
            owner: Vec::new(),
            leftovers: Vec::new(),
        }
    }

    /// Element -> pair index, for resampling.
    pub fn pair_of(&self) -> HashMap<usize, usize> {
        let mut map = HashMap::new();
        for (j, &(a, b)) in self.pairs.iter().enumerate() {
            map.insert(a, j);
            map.insert(b, j);
        }
        map
    }
}

/// Splits each large set `S_i ∩ Y` into an even pairable part `A_i` and a
/// leftover `B_i` with `|B_i| <= 2`: the deleted element goes to `B_i` (when
/// it lies in `Y`), and if the remainder has odd size its largest element
/// joins it. `A_i` is paired consecutively in sorted order.
pub fn build_matching(
    sys: &SetSystem,
    subset: &[usize],
    g: &LargeSetGraph,
    scheme: &DeletionScheme,
) -> Result<PartialMatching> {
    let mut in_subset = vec![false; sys.n()];
    for &x in subset {
        in_subset[x] = true;
    }
    let mut matching = PartialMatching::empty();
    let mut used = vec![false; sys.n()];
    for (pos, &i) in g.large.iter().enumerate() {
        let restricted: Vec<usize> = sys
            .row(i)
            .iter()
            .copied()
            .filter(|&x| in_subset[x])
            .collect();
        let x_i = scheme.deleted[pos];
        let mut b = Vec::new();
        let mut a: Vec<usize> = restricted
            .iter()
            .copied()
            .filter(|&x| x != x_i || !in_subset[x_i])
            .collect();
        if in_subset.get(x_i).copied().unwrap_or(false) && restricted.contains(&x_i) {
            b.push(x_i);
        }
        if a.len() % 2 == 1 {
            let largest = a.pop().expect("odd length is nonzero");
            b.push(largest);
        }
        for pair in a.chunks_exact(2) {
            let (p, q) = (pair[0], pair[1]);
            if used[p] || used[q] {
                return Err(Error::Internal(format!(
                    "reduced sets not disjoint at pair ({p}, {q})"
                )));
            }
            used[p] = true;
            used[q] = true;
            matching.pairs.push((p, q));
            matching.owner.push(i);
        }
        debug_assert!(b.len() <= 2);
        matching.leftovers.push((i, b));
    }
    Ok(matching)
}

/// Uniform coloring of `Y` consistent with the matching: each pair gets
/// opposite signs, unmatched elements get independent uniform signs.
pub fn sample_consistent(matching: &PartialMatching, subset: &[usize], seed: u64) -> Coloring {
    let mut rng = stream_rng(seed, 2);
    let n = subset.iter().copied().max().map_or(0, |x| x + 1);
    let mut chi = Coloring::new(n);
    draw_consistent(matching, subset, &mut chi, &mut rng);
    chi
}

fn draw_consistent(
    matching: &PartialMatching,
    subset: &[usize],
    chi: &mut Coloring,
    rng: &mut impl Rng,
) {
    let paired = matching.pair_of();
    for &(a, b) in &matching.pairs {
        let s: i8 = if rng.random::<bool>() { 1 } else { -1 };
        chi.set(a, s);
        chi.set(b, -s);
    }
    for &x in subset {
        if !paired.contains_key(&x) {
            chi.set(x, if rng.random::<bool>() { 1 } else { -1 });
        }
    }
}

/// Small-set deviation threshold `T(t) = ceil(sqrt(3 t ln(200 t^2)))`: the
/// smallest bound making a sum of at most `6t` independent signs exceed it
/// with probability at most `1 / (100 t^2)`, by the additive tail bound.
pub fn small_set_threshold(t: usize) -> Result<u64> {
    if t < 2 {
        return Err(Error::SparsityOutOfRange {
            t,
            min: 2,
            max: usize::MAX,
        });
    }
    let tf = t as f64;
    let val = (3.0 * tf * (200.0 * tf * tf).ln()).sqrt();
    Ok(val.ceil() as u64)
}

/// Result of Moser-Tardos resampling.
#[derive(Debug, Clone)]
pub enum MtOutcome {
    /// Every small set's absolute sum is below the threshold.
    Success { chi: Coloring, resamples: u64 },
    /// Resample budget exhausted; the caller should fall back.
    CapExhausted { resamples: u64 },
}

/// Moser-Tardos resampling over the small sets: sample a consistent
/// coloring, then repeatedly take the lowest-index small set with
/// `|χ(S_i ∩ Y)| >= threshold` and redraw exactly its underlying random
/// variables (the bits of pairs meeting the set, and the signs of its
/// unmatched elements).
#[allow(clippy::too_many_arguments)]
pub fn moser_tardos_color(
    sys: &SetSystem,
    subset: &[usize],
    matching: &PartialMatching,
    small: &[usize],
    threshold: u64,
    seed: u64,
    max_resamples: u64,
) -> Result<MtOutcome> {
    if threshold < 2 {
        return Err(Error::Config(format!("threshold {threshold} below 2")));
    }
    let mut rng = stream_rng(seed, 2);
    let mut chi = Coloring::new(sys.n());
    draw_consistent(matching, subset, &mut chi, &mut rng);
    let paired = matching.pair_of();

    let mut sums: Vec<i64> = (0..sys.m())
        .map(|i| sys.set_sum(&chi, i).expect("index in range"))
        .collect();
    let mut resamples = 0u64;
    loop {
        let violator = small
            .iter()
            .copied()
            .find(|&i| sums[i].unsigned_abs() >= threshold);
        let Some(i) = violator else {
            return Ok(MtOutcome::Success { chi, resamples });
        };
        if resamples >= max_resamples {
            return Ok(MtOutcome::CapExhausted { resamples });
        }
        resamples += 1;

        // the random variables underlying event i: pair bits of pairs
        // meeting S_i ∩ Y, and sign bits of its unmatched elements
        let mut touched: Vec<usize> = Vec::new();
        let mut seen_pairs = std::collections::HashSet::new();
        for &x in sys.row(i) {
            if chi.sign(x).is_none() {
                continue; // outside Y
            }
            match paired.get(&x) {
                Some(&j) => {
                    if seen_pairs.insert(j) {
                        let (a, b) = matching.pairs[j];
                        let s: i8 = if rng.random::<bool>() { 1 } else { -1 };
                        if chi.sign(a) != Some(s) {
                            touched.push(a);
                            touched.push(b);
                            chi.set(a, s);
                            chi.set(b, -s);
                        }
                    }
                }
                None => {
                    let s: i8 = if rng.random::<bool>() { 1 } else { -1 };
                    if chi.sign(x) != Some(s) {
                        touched.push(x);
                        chi.set(x, s);
                    }
                }
            }
        }
        for &x in &touched {
            let delta = 2 * i64::from(chi.sign(x).expect("just set"));
            for &k in sys.column(x) {
                sums[k] += delta;
            }
        }
        // consistency with the matching must survive every resample
        debug_assert!(matching
            .pairs
            .iter()
            .all(|&(a, b)| chi.sign(a) == chi.sign(b).map(|s| -s)));
    }
}

/// Why a pipeline run ended on the Beck-Fiala path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FallbackReason {
    /// `t < 2`: the threshold is undefined and Beck-Fiala is already tight.
    SparsityBelowTwo,
    /// G' contains a cycle, so the charging scheme does not apply.
    CycleFound,
    /// Moser-Tardos exhausted its resample budget.
    ResampleCapExhausted,
    /// The matching-path coloring exceeded `2t - 1`; rounding is sounder.
    BoundExceeded,
}

/// Which route produced the returned coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PipelinePath {
    Matching,
    Fallback(FallbackReason),
}

/// Diagnostics for a single pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub path: PipelinePath,
    pub cycle_witness: Option<CycleWitness>,
    pub resamples: u64,
    pub threshold: u64,
    pub large_sets: usize,
}

impl PipelineReport {
    pub fn took_fallback(&self) -> bool {
        matches!(self.path, PipelinePath::Fallback(_))
    }
}

/// Tuning knobs for [`color_pipeline`].
#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineConfig {
    /// Resample budget; defaults to `100 * (#small sets) + 1000`.
    pub max_resamples: Option<u64>,
}

/// Full classify/delete/match/resample pipeline with rounding fallback. The
/// output always has
/// discrepancy at most `2t - 1`; on the matching path it is at most
/// `max(T(t), 2)`.
pub fn color_pipeline(
    sys: &SetSystem,
    subset: &[usize],
    seed: u64,
    cfg: &PipelineConfig,
) -> Result<(Coloring, PipelineReport)> {
    let t = sys.sparsity();
    if t < 2 {
        let chi = beck_fiala_color(sys, subset)?;
        return Ok((
            chi,
            PipelineReport {
                path: PipelinePath::Fallback(FallbackReason::SparsityBelowTwo),
                cycle_witness: None,
                resamples: 0,
                threshold: 0,
                large_sets: 0,
            },
        ));
    }
    let threshold = small_set_threshold(t)?.max(2);
    let classification = classify(sys, subset);
    let graph = large_set_graph(sys, subset, &classification);
    let large_sets = graph.large.len();

    let fallback = |reason: FallbackReason,
                    witness: Option<CycleWitness>,
                    resamples: u64|
     -> Result<(Coloring, PipelineReport)> {
        let chi = beck_fiala_color(sys, subset)?;
        Ok((
            chi,
            PipelineReport {
                path: PipelinePath::Fallback(reason),
                cycle_witness: witness,
                resamples,
                threshold,
                large_sets,
            },
        ))
    };

    let scheme = match choose_deletions(&graph)? {
        DeletionOutcome::Scheme(s) => s,
        DeletionOutcome::Cycle(w) => {
            return fallback(FallbackReason::CycleFound, Some(w), 0);
        }
    };
    let matching = build_matching(sys, subset, &graph, &scheme)?;
    let max_resamples = cfg
        .max_resamples
        .unwrap_or(100 * classification.small.len() as u64 + 1000);
    match moser_tardos_color(
        sys,
        subset,
        &matching,
        &classification.small,
        threshold,
        seed,
        max_resamples,
    )? {
        MtOutcome::Success { chi, resamples } => {
            let disc = sys.coloring_discrepancy(&chi);
            if disc > 2 * t as i64 - 1 {
                // possible for small t, where T(t) > 2t - 1
                return fallback(FallbackReason::BoundExceeded, None, resamples);
            }
            // matching-path guarantees
            for &(i, ref b) in &matching.leftovers {
                let s = sys.set_sum(&chi, i)?;
                debug_assert!(b.len() <= 2);
                assert!(
                    s.unsigned_abs() <= 2,
                    "large set {i} has |sum| {s} > 2 on the matching path"
                );
            }
            assert!(disc <= threshold as i64);
            Ok((
                chi,
                PipelineReport {
                    path: PipelinePath::Matching,
                    cycle_witness: None,
                    resamples,
                    threshold,
                    large_sets,
                },
            ))
        }
        MtOutcome::CapExhausted { resamples } => {
            fallback(FallbackReason::ResampleCapExhausted, None, resamples)
        }
    }
}
