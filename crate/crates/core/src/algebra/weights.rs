//! Quasi-homogeneity detection.
//!
//! A polynomial is quasi-homogeneous for positive weights `w` when all of its
//! exponent vectors share one weighted degree, i.e. `w` is orthogonal to every
//! difference of exponent vectors. Over two variables the difference lattice
//! has rank 0, 1 or 2. Rank 1 pins `w` down to a primitive vector (which must
//! have both entries positive), rank 2 admits no weights at all, and rank 0 —
//! a single monomial — admits every weight vector; there we return the
//! lexicographically smallest positive primitive choice, all ones.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::mpoly::MPoly;

/// Primitive positive weights, one per variable, and the common weighted
/// degree when attached to a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightVector {
    pub weights: Vec<u64>,
    pub degree: Option<u64>,
}

impl WeightVector {
    pub fn new(weights: Vec<u64>, degree: Option<u64>) -> Self {
        WeightVector { weights, degree }
    }
}

/// Integer row reduction of exponent differences; returns a basis of the
/// difference lattice (as rational row echelon rows over Z).
fn difference_rows(exps: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let base = &exps[0];
    let mut rows: Vec<Vec<i64>> = exps[1..]
        .iter()
        .map(|e| e.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    // fraction-free elimination to echelon form
    let n = base.len();
    let mut echelon: Vec<Vec<i64>> = Vec::new();
    for col in 0..n {
        let Some(pos) = rows.iter().position(|r| r[col] != 0) else {
            continue;
        };
        let pivot = rows.swap_remove(pos);
        for r in rows.iter_mut() {
            if r[col] != 0 {
                let (a, b) = (pivot[col], r[col]);
                for k in 0..n {
                    r[k] = r[k] * a - pivot[k] * b;
                }
                let g = r.iter().fold(0i64, |g, &v| g.gcd(&v));
                if g > 1 {
                    r.iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        echelon.push(pivot);
    }
    echelon
}

/// Finds the weights making every term of `constraints` (one exponent list
/// per polynomial) of equal weighted degree within each polynomial.
///
/// Returns `None` when no positive weights work, or when the solution is not
/// unique up to scaling (only possible with three or more variables).
pub fn common_weights(nvars: usize, constraints: &[Vec<Vec<u32>>]) -> Option<Vec<u64>> {
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for exps in constraints {
        if exps.len() < 2 {
            continue;
        }
        let as_i: Vec<Vec<i64>> = exps
            .iter()
            .map(|e| e.iter().map(|&k| k as i64).collect())
            .collect();
        rows.extend(difference_rows(&as_i));
    }
    if rows.is_empty() {
        return Some(vec![1; nvars]);
    }
    let rows = difference_rows(
        &std::iter::once(vec![0i64; nvars])
            .chain(rows)
            .collect::<Vec<_>>(),
    );
    let rank = rows.len();
    if rank >= nvars {
        return None;
    }
    if rank + 1 != nvars {
        return None;
    }
    // One-dimensional kernel: solve by back substitution with rational
    // arithmetic on i128 to stay exact.
    let mut pivots = Vec::new();
    for r in &rows {
        pivots.push(r.iter().position(|&v| v != 0).expect("nonzero row"));
    }
    let free = (0..nvars).find(|c| !pivots.contains(c)).expect("kernel exists");
    // w[free] = L (common multiple), solve upward
    let mut num = vec![0i128; nvars];
    let mut den = vec![1i128; nvars];
    num[free] = 1;
    for (r, &p) in rows.iter().zip(&pivots).rev() {
        // r[p] * w[p] + sum_{k>p} r[k] * w[k] = 0
        let mut sn: i128 = 0;
        let mut sd: i128 = 1;
        for k in p + 1..nvars {
            if r[k] == 0 {
                continue;
            }
            let (an, ad) = (r[k] as i128 * num[k], den[k]);
            sn = sn * ad + an * sd;
            sd *= ad;
            let g = sn.gcd(&sd);
            if g > 1 {
                sn /= g;
                sd /= g;
            }
        }
        let (mut wn, mut wd) = (-sn, sd * r[p] as i128);
        if wd < 0 {
            wn = -wn;
            wd = -wd;
        }
        let g = wn.gcd(&wd).max(1);
        num[p] = wn / g;
        den[p] = wd / g;
    }
    let l = den.iter().fold(1i128, |acc, &d| acc.lcm(&d));
    let mut w: Vec<i128> = num.iter().zip(&den).map(|(n, d)| n * (l / d)).collect();
    if w.iter().all(|&v| v <= 0) {
        w.iter_mut().for_each(|v| *v = -*v);
    }
    if w.iter().any(|&v| v <= 0) {
        return None;
    }
    let g = w.iter().fold(0i128, |g, &v| g.gcd(&v));
    Some(w.into_iter().map(|v| (v / g) as u64).collect())
}

/// The primitive positive weights (and degree) for which `p` is
/// quasi-homogeneous, if any. See the module docs for the single-monomial
/// convention.
pub fn detect_quasi_homogeneity(p: &MPoly) -> Option<WeightVector> {
    if p.is_zero() {
        return None;
    }
    let exps: Vec<Vec<u32>> = p.terms().map(|(e, _)| e.clone()).collect();
    let w = common_weights(p.nvars(), &[exps])?;
    let d = p.weighted_degree(&w)?;
    Some(WeightVector::new(w, Some(d)))
}
