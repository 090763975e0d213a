//! Exact brute-force discrepancy and hereditary discrepancy for small
//! instances, plus certificate checking. Ground truth for everything the
//! faster algorithms claim.

use crate::error::{Error, Result};
use crate::set_system::{Coloring, SetSystem};

const ENUM_LIMIT: usize = 24;
const MITM_LIMIT: usize = 28;
const HERDISC_LIMIT: usize = 14;

/// Minimum over all ±1 colorings of the maximum absolute set sum.
///
/// Full enumeration up to `n = 24`; meet-in-the-middle beyond that up to
/// `n = 28`. Both strategies agree wherever both run.
pub fn exact_discrepancy(sys: &SetSystem) -> Result<i64> {
    if sys.n() <= ENUM_LIMIT {
        enumerate_discrepancy(sys)
    } else {
        mitm_discrepancy(sys)
    }
}

/// Exhaustive enumeration over all sign vectors, with χ(0) fixed to +1
/// (discrepancy is invariant under global negation). Gray-code order keeps
/// each step to one flip.
pub fn enumerate_discrepancy(sys: &SetSystem) -> Result<i64> {
    let n = sys.n();
    if n > ENUM_LIMIT {
        return Err(Error::InstanceTooLarge {
            n,
            limit: ENUM_LIMIT,
        });
    }
    if sys.m() == 0 {
        return Ok(0);
    }
    // start from the all +1 coloring
    let mut sums: Vec<i64> = (0..sys.m()).map(|i| sys.row(i).len() as i64).collect();
    let mut signs = vec![1i64; n];
    let mut best = sums.iter().map(|s| s.abs()).max().unwrap_or(0);
    if n <= 1 {
        return Ok(best);
    }
    let free = n - 1; // element 0 stays +1
    for step in 1u64..(1u64 << free) {
        // element flipped between gray(step-1) and gray(step)
        let x = 1 + step.trailing_zeros() as usize;
        let delta = -2 * signs[x];
        signs[x] = -signs[x];
        for &i in sys.column(x) {
            sums[i] += delta;
        }
        let worst = sums.iter().map(|s| s.abs()).max().unwrap_or(0);
        best = best.min(worst);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// Meet-in-the-middle: enumerate partial set-sum vectors of the right half
/// once, then scan left-half vectors against them, pruning by the current
/// best. χ(0) is fixed to +1.
pub fn mitm_discrepancy(sys: &SetSystem) -> Result<i64> {
    let n = sys.n();
    if n > MITM_LIMIT {
        return Err(Error::InstanceTooLarge {
            n,
            limit: MITM_LIMIT,
        });
    }
    let m = sys.m();
    if m == 0 || n == 0 {
        return Ok(0);
    }
    let half = n / 2;
    let right: Vec<usize> = (half..n).collect();
    let right_sums = half_sums(sys, &right);
    // max possible |right contribution| per set
    let rmax: Vec<i64> = (0..m)
        .map(|i| sys.row(i).iter().filter(|&&x| x >= half).count() as i64)
        .collect();
    let left: Vec<usize> = (0..half).collect();
    let left_sums = half_sums(sys, &left);

    let mut best = i64::MAX;
    for (k, l) in left_sums.iter().enumerate() {
        // χ(0) = +1: the first left element never flips to -1
        if n > 0 && half > 0 && (k & 1) == 1 {
            continue;
        }
        // no right completion can fix a coordinate further than rmax away
        let lower = (0..m).map(|i| (l[i].abs() - rmax[i]).max(0)).max().unwrap();
        if lower >= best {
            continue;
        }
        'rights: for r in &right_sums {
            let mut worst = 0i64;
            for i in 0..m {
                worst = worst.max((l[i] + r[i]).abs());
                if worst >= best {
                    continue 'rights;
                }
            }
            best = worst;
            if best == 0 {
                return Ok(0);
            }
        }
    }
    if half == 0 {
        // no left elements: only right completions matter
        best = right_sums
            .iter()
            .map(|r| r.iter().map(|v| v.abs()).max().unwrap_or(0))
            .min()
            .unwrap_or(0);
    }
    Ok(best)
}

/// All per-set sum vectors over sign assignments of `elements`, indexed so
/// that bit `b` of the position flips `elements[b]` (bit 0 = +1, 1 = -1,
/// Gray-code traversal).
fn half_sums(sys: &SetSystem, elements: &[usize]) -> Vec<Vec<i64>> {
    let m = sys.m();
    let k = elements.len();
    let mut out = vec![vec![0i64; m]; 1usize << k];
    let mut sums = vec![0i64; m];
    let mut signs = vec![1i64; k];
    for &x in elements {
        for &i in sys.column(x) {
            sums[i] += 1;
        }
    }
    let mut gray_prev = 0usize;
    out[0].copy_from_slice(&sums);
    for step in 1usize..(1usize << k) {
        let gray = step ^ (step >> 1);
        let bit = (gray ^ gray_prev).trailing_zeros() as usize;
        gray_prev = gray;
        let x = elements[bit];
        let delta = -2 * signs[bit];
        signs[bit] = -signs[bit];
        for &i in sys.column(x) {
            sums[i] += delta;
        }
        out[gray].copy_from_slice(&sums);
    }
    out
}

/// Max of `exact_discrepancy` over all element subsets.
pub fn exact_hereditary_discrepancy(sys: &SetSystem) -> Result<i64> {
    let n = sys.n();
    if n > HERDISC_LIMIT {
        return Err(Error::InstanceTooLarge {
            n,
            limit: HERDISC_LIMIT,
        });
    }
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let subset: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
        let r = sys.restrict(&subset)?;
        best = best.max(enumerate_discrepancy(&r.system)?);
    }
    Ok(best)
}

/// Checks a coloring against a bound; on failure returns a worst set as
/// witness.
pub fn verify_coloring(sys: &SetSystem, chi: &Coloring, bound: i64) -> (bool, Option<usize>) {
    let witness = (0..sys.m()).max_by_key(|&i| sys.set_sum(chi, i).expect("index in range").abs());
    let disc = sys.coloring_discrepancy(chi);
    (disc <= bound, witness)
}
