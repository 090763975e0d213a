//! Beck-Fiala iterative rounding: the unconditional `2t - 1` coloring.
//!
//! All elements start at the fractional value 0. A set is *active* while it
//! contains more than `t` floating (non-frozen) elements. Because every
//! element lies in at most `t` sets, the active constraint system always has
//! fewer equations than floating variables, so a nonzero kernel direction
//! exists; moving along it keeps every active set's sum fixed and drives at
//! least one variable to ±1, where it freezes. Once a set goes inactive it
//! has at most `t` floating elements, each of which can still drift by less
//! than 2, so the final integer sum has absolute value at most `2t - 1`.
//!
//! The kernel step uses exact rational arithmetic; outputs are exactly ±1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::set_system::{Coloring, SetSystem};

/// Per-element fractional state during rounding. Frozen entries are exactly
/// ±1 and never move again; floating entries lie strictly inside (-1, 1).
#[derive(Debug, Clone)]
pub struct FractionalColoring {
    pub values: Vec<BigRational>,
    pub frozen: Vec<bool>,
}

impl FractionalColoring {
    fn new(n: usize) -> Self {
        FractionalColoring {
            values: vec![BigRational::zero(); n],
            frozen: vec![false; n],
        }
    }
}

/// Colors the elements of `subset` with signs in `{-1, +1}` such that the
/// restriction of `sys` to `subset` has discrepancy at most `2t - 1`.
pub fn beck_fiala_color(sys: &SetSystem, subset: &[usize]) -> Result<Coloring> {
    let t = sys.sparsity();
    let n = sys.n();
    for &x in subset {
        if x >= n {
            return Err(Error::ElementOutOfRange { index: x, n });
        }
    }

    let mut in_subset = vec![false; n];
    for &x in subset {
        in_subset[x] = true;
    }

    let mut state = FractionalColoring::new(n);
    let mut floating: Vec<bool> = in_subset.clone();
    // per-set count of floating elements inside the subset
    let mut float_count: Vec<usize> = sys
        .rows()
        .iter()
        .map(|row| row.iter().filter(|&&x| floating[x]).count())
        .collect();

    let one = BigRational::one();
    let minus_one = -one.clone();

    loop {
        let active: Vec<usize> = (0..sys.m()).filter(|&i| float_count[i] > t).collect();

        // Variables in no active set can be snapped straight to the nearest
        // boundary: every set containing them is inactive, so the per-element
        // drift stays below 2. Snapping may deactivate further sets, hence
        // the loop.
        let mut snapped_any = false;
        let mut in_active = vec![false; n];
        for &i in &active {
            for &x in sys.row(i) {
                if floating[x] {
                    in_active[x] = true;
                }
            }
        }
        for x in 0..n {
            if floating[x] && !in_active[x] {
                let v = if state.values[x] >= BigRational::zero() {
                    one.clone()
                } else {
                    minus_one.clone()
                };
                state.values[x] = v;
                state.frozen[x] = true;
                floating[x] = false;
                for &i in sys.column(x) {
                    float_count[i] -= 1;
                }
                snapped_any = true;
            }
        }
        if snapped_any {
            continue;
        }
        if !floating.iter().any(|&f| f) {
            break;
        }

        // Every floating variable sits in some active set. A kernel vector
        // of the active incidence matrix restricted to any column subset C
        // (zero-extended) still annihilates every active row: rows outside
        // the ones C touches are identically zero there. So grow C greedily,
        // sparsest columns first, until it outnumbers the touched rows; that
        // keeps the elimination small even when hundreds of sets are active.
        let mut active_degree = vec![0usize; n];
        for &i in &active {
            for &x in sys.row(i) {
                if floating[x] {
                    active_degree[x] += 1;
                }
            }
        }
        let mut by_degree: Vec<usize> = (0..n).filter(|&x| floating[x]).collect();
        by_degree.sort_by_key(|&x| (active_degree[x], x));
        let mut float_vars: Vec<usize> = Vec::new();
        let mut touched: std::collections::HashSet<usize> = std::collections::HashSet::new();
        for &x in &by_degree {
            float_vars.push(x);
            for &i in sys.column(x) {
                if float_count[i] > t {
                    touched.insert(i);
                }
            }
            if float_vars.len() > touched.len() {
                break;
            }
        }
        debug_assert!(float_vars.len() > touched.len());
        let col_of: std::collections::HashMap<usize, usize> = float_vars
            .iter()
            .enumerate()
            .map(|(j, &x)| (x, j))
            .collect();
        let mut touched: Vec<usize> = touched.into_iter().collect();
        touched.sort_unstable();
        let rows: Vec<Vec<BigRational>> = touched
            .iter()
            .map(|&i| {
                let mut row = vec![BigRational::zero(); float_vars.len()];
                for &x in sys.row(i) {
                    if let Some(&j) = col_of.get(&x) {
                        row[j] = one.clone();
                    }
                }
                row
            })
            .collect();
        let direction = kernel_direction(rows, float_vars.len())?;

        // Smallest positive step driving some variable to ±1; freeze every
        // variable that hits the boundary at that step.
        let mut step: Option<BigRational> = None;
        for (j, d) in direction.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let x = float_vars[j];
            let target = if d.is_positive() { &one } else { &minus_one };
            let lambda = (target - &state.values[x]) / BigRational::from(d.clone());
            debug_assert!(lambda.is_positive());
            match &step {
                Some(s) if *s <= lambda => {}
                _ => step = Some(lambda),
            }
        }
        let step =
            step.ok_or_else(|| Error::Internal("kernel direction has empty support".into()))?;
        for (j, d) in direction.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let x = float_vars[j];
            state.values[x] += &step * BigRational::from(d.clone());
            if state.values[x] == one || state.values[x] == minus_one {
                state.frozen[x] = true;
                floating[x] = false;
                for &i in sys.column(x) {
                    float_count[i] -= 1;
                }
            } else {
                debug_assert!(state.values[x].abs() < one);
            }
        }
    }

    let mut chi = Coloring::new(n);
    for &x in subset {
        let v = &state.values[x];
        debug_assert!(state.frozen[x]);
        chi.set(x, if *v == one { 1 } else { -1 });
    }

    // The 2t - 1 guarantee is unconditional; a violation means the rounding
    // logic is wrong.
    if t >= 1 {
        let disc = sys.coloring_discrepancy(&chi);
        assert!(
            disc < 2 * t as i64,
            "Beck-Fiala output discrepancy {disc} exceeds 2t-1 = {}",
            2 * t as i64 - 1
        );
    }
    Ok(chi)
}

/// Nonzero integer kernel vector of the given row system, supported on the
/// lexicographically first free column and the pivot columns before it.
fn kernel_direction(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Vec<BigInt>> {
    if rows.len() >= cols {
        return Err(Error::Internal(format!(
            "active system has {} rows but only {} floating variables",
            rows.len(),
            cols
        )));
    }
    let mut working = rows;
    let mut pivots: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut free_col = None;
    for col in 0..cols {
        match working.iter().position(|r| !r[col].is_zero()) {
            Some(idx) => {
                let mut prow = working.swap_remove(idx);
                let inv = prow[col].clone();
                for v in prow.iter_mut().skip(col) {
                    if !v.is_zero() {
                        *v = &*v / &inv;
                    }
                }
                for r in working.iter_mut() {
                    if !r[col].is_zero() {
                        let factor = r[col].clone();
                        for j in col..cols {
                            if !prow[j].is_zero() {
                                let delta = &factor * &prow[j];
                                r[j] -= delta;
                            }
                        }
                    }
                }
                pivots.push((col, prow));
            }
            None => {
                free_col = Some(col);
                break;
            }
        }
    }
    let free_col =
        free_col.ok_or_else(|| Error::Internal("no free column in active system".into()))?;

    // Rows pivoting after `free_col` have zero entries on the support of the
    // kernel vector, so back-substitution over the earlier pivots suffices.
    let mut d = vec![BigRational::zero(); cols];
    d[free_col] = BigRational::one();
    for (col, row) in pivots.iter().rev() {
        let mut acc = BigRational::zero();
        for j in (col + 1)..=free_col {
            if !row[j].is_zero() && !d[j].is_zero() {
                acc += &row[j] * &d[j];
            }
        }
        d[*col] = -acc;
    }

    // Clear denominators to get an integer direction.
    let mut lcm = BigInt::one();
    for v in &d {
        if !v.is_zero() {
            lcm = num_integer::lcm(lcm, v.denom().clone());
        }
    }
    let mut int_dir: Vec<BigInt> = d
        .iter()
        .map(|v| (v * BigRational::from(lcm.clone())).to_integer())
        .collect();
    let mut gcd = BigInt::zero();
    for v in &int_dir {
        if !v.is_zero() {
            gcd = num_integer::gcd(gcd, v.abs());
        }
    }
    if gcd > BigInt::one() {
        for v in int_dir.iter_mut() {
            *v = &*v / &gcd;
        }
    }
    Ok(int_dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{sample_t_sparse, SampleConfig};

    #[test]
    fn singleton_set() {
        let sys = SetSystem::new(1, vec![vec![0]]).unwrap();
        let chi = beck_fiala_color(&sys, &[0]).unwrap();
        assert!(sys.coloring_discrepancy(&chi) <= 1);
        assert_eq!(chi.domain_len(), 1);
    }

    #[test]
    fn triangle_within_bound() {
        let sys = crate::set_system::triangle();
        let chi = beck_fiala_color(&sys, &[0, 1, 2]).unwrap();
        // t = 2, so the guarantee is 3; the optimum (brute force over all 8
        // colorings) is 2
        assert!(sys.coloring_discrepancy(&chi) <= 3);
        assert_eq!(crate::oracle::exact_discrepancy(&sys).unwrap(), 2);
    }

    #[test]
    fn empty_subset() {
        let sys = crate::set_system::triangle();
        let chi = beck_fiala_color(&sys, &[]).unwrap();
        assert_eq!(chi.domain_len(), 0);
        assert_eq!(sys.coloring_discrepancy(&chi), 0);
    }

    #[test]
    fn random_instances_meet_bound() {
        for seed in 0..10 {
            let t = 2 + (seed as usize % 4);
            let cfg = SampleConfig {
                n: 40,
                m: 40,
                t,
                seed,
            };
            let sys = sample_t_sparse(&cfg).unwrap();
            let all: Vec<usize> = (0..sys.n()).collect();
            let chi = beck_fiala_color(&sys, &all).unwrap();
            assert!(sys.coloring_discrepancy(&chi) < 2 * t as i64);
            assert_eq!(chi.domain_len(), sys.n());
        }
    }

    #[test]
    fn restricted_subset_meet_bound() {
        let cfg = SampleConfig {
            n: 30,
            m: 30,
            t: 3,
            seed: 8,
        };
        let sys = sample_t_sparse(&cfg).unwrap();
        let subset: Vec<usize> = (0..30).step_by(2).collect();
        let chi = beck_fiala_color(&sys, &subset).unwrap();
        assert_eq!(chi.domain_len(), subset.len());
        assert!(sys.coloring_discrepancy(&chi) <= 5);
    }

    #[test]
    fn deterministic() {
        let cfg = SampleConfig {
            n: 25,
            m: 25,
            t: 3,
            seed: 4,
        };
        let sys = sample_t_sparse(&cfg).unwrap();
        let all: Vec<usize> = (0..25).collect();
        let a = beck_fiala_color(&sys, &all).unwrap();
        let b = beck_fiala_color(&sys, &all).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_direction_annihilates_rows() {
        let one = BigRational::one();
        let zero = BigRational::zero();
        let rows = vec![
            vec![one.clone(), one.clone(), zero.clone(), one.clone()],
            vec![zero.clone(), one.clone(), one.clone(), one.clone()],
        ];
        let d = kernel_direction(rows.clone(), 4).unwrap();
        assert!(d.iter().any(|v| !v.is_zero()));
        for row in &rows {
            let dot: BigRational = row
                .iter()
                .zip(&d)
                .map(|(a, b)| a * BigRational::from(b.clone()))
                .sum();
            assert!(dot.is_zero());
        }
    }
}
