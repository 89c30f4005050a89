//! Resultants by fraction-free elimination.
//!
//! Two routes are provided. [`resultant`] builds the classical Sylvester
//! matrix and runs Bareiss elimination over the polynomial ring (every
//! division is exact). When the first argument is monic in the eliminated
//! variable, [`resultant_monic`] instead takes the determinant of
//! multiplication-by-`q` on `K[..][v]/(p)`, a `deg p × deg p` matrix instead
//! of a `(deg p + deg q)`-square one. Both give the same polynomial with the
//! same sign: `Res(p, q) = ∏_{p(r)=0} q(r)` for monic `p`.

use num_traits::One;

use super::mpoly::MPoly;
use super::rational::Rational;
use crate::error::AlgebraError;

/// Determinant of a square matrix of polynomials by Bareiss elimination.
pub fn det_bareiss(mut m: Vec<Vec<MPoly>>, unit: &MPoly) -> MPoly {
    let n = m.len();
    if n == 0 {
        return unit.clone();
    }
    let mut negate = false;
    let mut prev = unit.clone();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return unit.zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss step must divide exactly");
            }
            m[i][k] = unit.zero_like();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn eliminated_vars(p: &MPoly, var: usize) -> Vec<String> {
    p.vars()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != var)
        .map(|(_, v)| v.clone())
        .collect()
}

fn drop_var(p: &MPoly, var: usize) -> MPoly {
    let names = eliminated_vars(p, var);
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    p.remap(&refs).expect("eliminated variable no longer occurs")
}

fn locate(p: &MPoly, q: &MPoly, var: &str) -> Result<usize, AlgebraError> {
    if p.is_zero() || q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    assert_eq!(p.vars(), q.vars(), "resultant of polynomials over different rings");
    p.var_index(var)
        .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))
}

/// Sylvester resultant of `p` and `q` with respect to `var`.
///
/// The result lives over the remaining variables. Constant-in-`var` inputs
/// follow the usual conventions `Res(c, q) = c^{deg q}`; both constant is an
/// error.
pub fn resultant(p: &MPoly, q: &MPoly, var: &str) -> Result<MPoly, AlgebraError> {
    let v = locate(p, q, var)?;
    let pc = p.coefficients_in(v);
    let qc = q.coefficients_in(v);
    let (dp, dq) = (pc.len() - 1, qc.len() - 1);
    if dp == 0 && dq == 0 {
        return Err(AlgebraError::ResultantUndefined(var.to_string()));
    }
    let size = dp + dq;
    let zero = p.zero_like();
    let mut m = vec![vec![zero.clone(); size]; size];
    for r in 0..dq {
        for (k, c) in pc.iter().enumerate() {
            m[r][r + dp - k] = c.clone();
        }
    }
    for r in 0..dp {
        for (k, c) in qc.iter().enumerate() {
            m[dq + r][r + dq - k] = c.clone();
        }
    }
    let det = det_bareiss(m, &p.constant_like(Rational::one()));
    Ok(drop_var(&det, v))
}

/// The resultant normalized to its canonical unit multiple: primitive
/// integer coefficients and a positive graded-lex leading coefficient.
pub fn resultant_canonical(p: &MPoly, q: &MPoly, var: &str) -> Result<MPoly, AlgebraError> {
    Ok(resultant(p, q, var)?.primitive_part())
}

/// Reduces a coefficient vector (low to high in the eliminated variable)
/// modulo the monic polynomial with coefficients `modulus`.
fn reduce_monic(mut r: Vec<MPoly>, modulus: &[MPoly]) -> Vec<MPoly> {
    let d = modulus.len() - 1;
    for k in (d..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut r[k], modulus[0].zero_like());
        for i in 0..d {
            if !modulus[i].is_zero() {
                r[k - d + i] = &r[k - d + i] - &(&c * &modulus[i]);
            }
        }
    }
    r.truncate(d);
    while r.len() < d {
        r.push(modulus[0].zero_like());
    }
    r
}

/// Resultant for `p` monic in `var`, as the determinant of multiplication by
/// `q` modulo `p`. Agrees exactly (including sign) with [`resultant`].
pub fn resultant_monic(p: &MPoly, q: &MPoly, var: &str) -> Result<MPoly, AlgebraError> {
    let v = locate(p, q, var)?;
    if !p.is_monic_in(v) {
        return resultant(p, q, var);
    }
    let pc = p.coefficients_in(v);
    let d = pc.len() - 1;
    if d == 0 {
        if q.degree_in(v) == Some(0) {
            return Err(AlgebraError::ResultantUndefined(var.to_string()));
        }
        return Ok(drop_var(&p.constant_like(Rational::one()), v));
    }
    let unit = p.constant_like(Rational::one());
    let mut column = reduce_monic(q.coefficients_in(v), &pc);
    let mut m = vec![vec![p.zero_like(); d]; d];
    for j in 0..d {
        for i in 0..d {
            m[i][j] = column[i].clone();
        }
        if j + 1 < d {
            let mut shifted = Vec::with_capacity(d + 1);
            shifted.push(p.zero_like());
            shifted.extend(column);
            column = reduce_monic(shifted, &pc);
        }
    }
    let det = det_bareiss(m, &unit);
    Ok(drop_var(&det, v))
}

/// True when the resultant vanishes identically, i.e. `p` and `q` share a
/// factor involving `var`.
pub fn have_common_factor(p: &MPoly, q: &MPoly, var: &str) -> Result<bool, AlgebraError> {
    Ok(resultant(p, q, var)?.is_zero())
}
