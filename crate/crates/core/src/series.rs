//! Truncated univariate power series over Q.
//!
//! A [`Series`] stores its coefficients densely below an explicit truncation
//! order `N`: the value is known modulo `u^N` and nothing beyond. Binary
//! operations require equal truncation orders; no operation ever extends
//! `N`, and the few that lose precision (normalization divides by `u^n`)
//! say so by returning a smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::mpoly::format_rational;
use crate::algebra::{MPoly, Rational};
use crate::error::SeriesError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    /// Builds a series truncated at `n`; coefficients beyond `n` are dropped
    /// and missing ones are zero.
    pub fn new(mut coeffs: Vec<Rational>, n: usize) -> Self {
        coeffs.resize(n, Rational::zero());
        Series { coeffs }
    }

    pub fn zero(n: usize) -> Self {
        Series::new(Vec::new(), n)
    }

    pub fn one(n: usize) -> Self {
        Series::monomial(0, Rational::one(), n)
    }

    /// The parameter `u` itself.
    pub fn var(n: usize) -> Self {
        Series::monomial(1, Rational::one(), n)
    }

    pub fn monomial(k: usize, c: Rational, n: usize) -> Self {
        let mut s = Series::zero(n);
        if k < n {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_ints(c: &[i64], n: usize) -> Self {
        Series::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect(), n)
    }

    /// Sparse constructor from `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: &[(usize, Rational)], n: usize) -> Self {
        let mut s = Series::zero(n);
        for (k, c) in terms {
            if *k < n {
                s.coeffs[*k] += c;
            }
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Exponents carrying nonzero coefficients.
    pub fn support(&self) -> Vec<usize> {
        self.terms().map(|(k, _)| k).collect()
    }

    /// Lowest exponent with a nonzero coefficient; `None` means the series
    /// vanishes to the available precision.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    /// Same series known to a smaller order.
    pub fn truncate(&self, n: usize) -> Series {
        assert!(n <= self.truncation(), "truncate cannot extend precision");
        Series::new(self.coeffs[..n].to_vec(), n)
    }

    fn check(&self, other: &Series) -> Result<usize, SeriesError> {
        if self.truncation() != other.truncation() {
            return Err(SeriesError::TruncationMismatch(
                self.truncation(),
                other.truncation(),
            ));
        }
        Ok(self.truncation())
    }

    pub fn try_add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check(other)?;
        Ok(Series {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Series) -> Result<Series, SeriesError> {
        let n = self.check(other)?;
        let mut out = vec![Rational::zero(); n];
        let (oa, ob) = match (self.order(), other.order()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(Series::zero(n)),
        };
        for i in oa..n {
            let a = &self.coeffs[i];
            if a.is_zero() {
                continue;
            }
            for j in ob..n - i {
                let b = &other.coeffs[j];
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Series { coeffs: out })
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    /// Multiplication by `u^k`.
    pub fn shift_up(&self, k: usize) -> Series {
        let n = self.truncation();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n.saturating_sub(k) {
            out[i + k] = self.coeffs[i].clone();
        }
        Series { coeffs: out }
    }

    /// Division by `u^k` for a series of order `≥ k`. Precision drops to
    /// `N - k`.
    pub fn shift_down(&self, k: usize) -> Series {
        debug_assert!(self.coeffs[..k.min(self.truncation())].iter().all(|c| c.is_zero()));
        let n = self.truncation().saturating_sub(k);
        Series::new(self.coeffs[k.min(self.truncation())..].to_vec(), n)
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut result = Series::one(self.truncation());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Series, SeriesError> {
        let n = self.truncation();
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(SeriesError::NotNormalizedUnit);
        }
        let inv0 = c0.recip();
        let mut out = vec![Rational::zero(); n];
        if n > 0 {
            out[0] = inv0.clone();
        }
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[k - j];
                }
            }
            out[k] = -acc * &inv0;
        }
        Ok(Series { coeffs: out })
    }

    /// `s^α` for a unit `s` with constant term 1 and rational `α`.
    ///
    /// This is the generalized binomial series `Σ C(α,k) (s−1)^k`, evaluated
    /// through the recurrence `k·g_k = Σ_{j=1..k} (α·j − (k−j)) s_j g_{k−j}`
    /// obtained from `s·g' = α·s'·g`, which costs O(N²) instead of O(N³).
    pub fn pow_rational(&self, alpha: &Rational) -> Result<Series, SeriesError> {
        let n = self.truncation();
        if n == 0 {
            return Ok(self.clone());
        }
        if !self.coeff(0).is_one() {
            return Err(SeriesError::NotNormalizedUnit);
        }
        let mut g = vec![Rational::zero(); n];
        g[0] = Rational::one();
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let sj = &self.coeffs[j];
                if sj.is_zero() {
                    continue;
                }
                let factor = alpha * Rational::from_integer(BigInt::from(j))
                    - Rational::from_integer(BigInt::from(k - j));
                acc += factor * sj * &g[k - j];
            }
            g[k] = acc / Rational::from_integer(BigInt::from(k));
        }
        Ok(Series { coeffs: g })
    }

    /// The unique `ξ` with constant term 1 and `ξⁿ = s`.
    pub fn nth_root_unit(&self, n: u32) -> Result<Series, SeriesError> {
        if n == 0 {
            return Err(SeriesError::ZeroRootIndex);
        }
        self.pow_rational(&Rational::new(BigInt::one(), BigInt::from(n)))
    }

    /// `self(inner(u))`; requires `order(inner) ≥ 1`.
    pub fn compose(&self, inner: &Series) -> Result<Series, SeriesError> {
        let n = self.check(inner)?;
        if !inner.coeff(0).is_zero() {
            return Err(SeriesError::InnerSeriesNotInMaximalIdeal);
        }
        let mut acc = Series::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = &acc * inner;
            if n > 0 {
                acc.coeffs[0] += c;
            }
        }
        Ok(acc)
    }

    /// Coefficients `a_k` with `self = Σ a_k ψ^k` modulo `u^N`, for `ψ` of
    /// order exactly 1. Equivalently the coefficients of `self ∘ ψ⁻¹`.
    fn reexpand(&self, psi: &Series) -> Result<Series, SeriesError> {
        let n = self.check(psi)?;
        if !psi.coeff(0).is_zero() || psi.coeff(1).is_zero() {
            return Err(SeriesError::InnerSeriesNotInMaximalIdeal);
        }
        let inv1 = psi.coeff(1).recip();
        let mut rest = self.clone();
        let mut out = vec![Rational::zero(); n];
        let start = rest.order().unwrap_or(n);
        if start >= n {
            return Ok(Series::zero(n));
        }
        // power = ψ^k, starting at k = start
        let mut power = psi.pow(start as u32);
        let mut inv_k = num_traits::pow(inv1.clone(), start);
        for k in start..n {
            let r = rest.coeffs[k].clone();
            if !r.is_zero() {
                let a = &r * &inv_k;
                for j in k..n {
                    let p = &power.coeffs[j];
                    if !p.is_zero() {
                        rest.coeffs[j] -= &a * p;
                    }
                }
                out[k] = a;
            }
            if k + 1 < n {
                power = &power * psi;
                inv_k *= &inv1;
            }
        }
        Ok(Series { coeffs: out })
    }

    /// Compositional inverse of a series of order exactly 1.
    pub fn revert(&self) -> Result<Series, SeriesError> {
        Series::var(self.truncation()).reexpand(self)
    }
}

/// Evaluates the two-variable polynomial `p` at `(s₁, s₂)`.
pub fn substitute(p: &MPoly, s1: &Series, s2: &Series) -> Result<Series, SeriesError> {
    let n = s1.check(s2)?;
    assert_eq!(p.nvars(), 2, "substitute expects a polynomial in two variables");
    let dx = p.degree_in(0).unwrap_or(0) as usize;
    let dy = p.degree_in(1).unwrap_or(0) as usize;
    let powers = |s: &Series, d: usize| {
        let mut v = vec![Series::one(n)];
        for k in 1..=d {
            let next = &v[k - 1] * s;
            v.push(next);
        }
        v
    };
    let px = powers(s1, dx);
    let py = powers(s2, dy);
    let mut acc = Series::zero(n);
    for (e, c) in p.terms() {
        let t = (&px[e[0] as usize] * &py[e[1] as usize]).scale(c);
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Puiseux normalization of a parametrized branch `(first, second)`.
///
/// With `first = c·uⁿ·ε(u)`, `ε(0) = 1`, the new parameter `ψ = u·ε^{1/n}`
/// makes the first coordinate exactly `c·ψⁿ`; the target is rescaled by
/// `1/c` so it becomes `ψⁿ`. The returned series is `second ∘ ψ⁻¹`, computed
/// exactly by re-expanding `second` in powers of `ψ`.
///
/// Dividing by `uⁿ` costs `n` orders of precision in `ε`, hence in `ψ⁻¹`.
/// When `order(second) ≥ n` the composite is still exact modulo `u^N`; in
/// general it is exact modulo `u^{N−n+min(order(second), n)}`, which is the
/// truncation of the returned series.
pub fn normalize_puiseux(first: &Series, second: &Series) -> Result<(usize, Series), SeriesError> {
    let n_trunc = first.check(second)?;
    let n = first.order().ok_or(SeriesError::VanishesToTruncation)?;
    if n == 0 {
        return Err(SeriesError::InnerSeriesNotInMaximalIdeal);
    }
    if n + 1 >= n_trunc {
        return Err(SeriesError::VanishesToTruncation);
    }
    let c = first.coeff(n);
    let eps = first.shift_down(n).scale(&c.recip());
    let xi = eps.nth_root_unit(n as u32)?;
    let keep = match second.order() {
        Some(o) => n_trunc - n + o.min(n),
        None => n_trunc,
    };
    // ψ = u·ξ, known modulo u^{N-n+1}; pad to the working order with zeros.
    let psi_known = Series::new(xi.shift_up_into(1), n_trunc - n + 1);
    let psi = Series::new(psi_known.coeffs, keep);
    let target = second.truncate(keep);
    let out = target.reexpand(&psi)?;
    Ok((n, out))
}

impl Series {
    /// Coefficients of `u^k · self` without truncating at the current order
    /// (the result has `N + k` slots).
    fn shift_up_into(&self, k: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        v
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            let neg = c.is_negative();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let a = c.abs();
            let mon = match k {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{k}"),
            };
            if k == 0 {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{}*{mon}", format_rational(&a))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(u^{})", self.truncation())
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &'a Series) -> Series {
        self.try_add(rhs).expect("series truncation orders must match")
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &'a Series) -> Series {
        self.try_add(&-rhs).expect("series truncation orders must match")
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, rhs: &'a Series) -> Series {
        self.try_mul(rhs).expect("series truncation orders must match")
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::algebra::rational::{frac, rat};

    const XY: &[&str] = &["x", "y"];

    #[test]
    fn substitution_along_curves() {
        let n = 12;
        let p = parse_poly("y^2", XY).unwrap();
        let s = substitute(&p, &Series::zero(n), &Series::var(n)).unwrap();
        assert_eq!(s, Series::monomial(2, rat(1), n));

        let p = parse_poly("x^2*y - x*y^5", XY).unwrap();
        let s = substitute(&p, &Series::var(n), &Series::monomial(4, rat(1), n)).unwrap();
        assert_eq!(s, Series::monomial(6, rat(1), n));

        let n = 30;
        let p = parse_poly("y^6 + x^5*y", XY).unwrap();
        let s = substitute(&p, &Series::monomial(4, rat(1), n), &Series::var(n)).unwrap();
        assert_eq!(s.support(), vec![6, 21]);
    }

    #[test]
    fn truncation_mismatch_is_reported() {
        let p = parse_poly("x*y", XY).unwrap();
        assert_eq!(
            substitute(&p, &Series::var(5), &Series::var(6)),
            Err(SeriesError::TruncationMismatch(5, 6))
        );
    }

    #[test]
    fn roots_of_units() {
        let one = Series::one(10);
        assert_eq!(one.nth_root_unit(5).unwrap(), one);
        let sq = Series::from_ints(&[1, 2, 1], 10);
        assert_eq!(sq.nth_root_unit(2).unwrap(), Series::from_ints(&[1, 1], 10));
        // 1 + b u^3: leading correction b/n
        let s = Series::from_terms(&[(0, rat(1)), (3, rat(5))], 10);
        let r = s.nth_root_unit(4).unwrap();
        assert_eq!(r.coeff(3), frac(5, 4));
        assert_eq!(r.inverse().unwrap().coeff(3), frac(-5, 4));
        assert_eq!(r.pow(4), s);
        assert_eq!(Series::from_ints(&[2, 1], 4).nth_root_unit(2), Err(SeriesError::NotNormalizedUnit));
        assert_eq!(s.nth_root_unit(0), Err(SeriesError::ZeroRootIndex));
    }

    #[test]
    fn reversion_and_composition() {
        let n = 9;
        let s = Series::from_ints(&[0, 1, 3, -2, 1], n);
        let r = s.revert().unwrap();
        assert_eq!(s.compose(&r).unwrap(), Series::var(n));
        assert_eq!(r.compose(&s).unwrap(), Series::var(n));
        assert_eq!(
            s.compose(&Series::one(n)),
            Err(SeriesError::InnerSeriesNotInMaximalIdeal)
        );
    }

    #[test]
    fn puiseux_normalization() {
        let n = 10;
        let (k, out) =
            normalize_puiseux(&Series::monomial(2, rat(1), n), &Series::monomial(3, rat(1), n))
                .unwrap();
        assert_eq!((k, out), (2, Series::monomial(3, rat(1), n)));

        let first = Series::from_terms(&[(4, rat(1)), (6, rat(1))], 16);
        let (k, out) = normalize_puiseux(&first, &Series::monomial(6, rat(1), 16)).unwrap();
        assert_eq!(k, 4);
        assert_eq!(out.coeff(6), rat(1));
        assert_eq!(out.coeff(7), rat(0));
        assert_eq!(out.coeff(8), frac(-6, 4));

        let first = Series::from_ints(&[0, 0, 1, 1], 12);
        let (k, out) = normalize_puiseux(&first, &Series::monomial(3, rat(1), 12)).unwrap();
        assert_eq!(k, 2);
        assert_eq!(out.coeff(3), rat(1));
        assert_eq!(out.coeff(4), frac(-3, 2));
        assert_eq!(out.truncation(), 12);
    }

    #[test]
    fn normalization_matches_explicit_inverse() {
        let n = 14;
        let first = Series::from_terms(&[(3, rat(2)), (4, rat(1)), (7, rat(-3))], n);
        let second = Series::from_terms(&[(4, rat(1)), (5, rat(2)), (9, frac(1, 3))], n);
        let (k, out) = normalize_puiseux(&first, &second).unwrap();
        assert_eq!(k, 3);
        let eps = first.shift_down(3).scale(&frac(1, 2));
        let psi = Series::new(eps.nth_root_unit(3).unwrap().shift_up_into(1), n);
        let direct = second.compose(&psi.revert().unwrap()).unwrap();
        assert_eq!(out, direct.truncate(out.truncation()));
        // the first coordinate becomes exactly u^3 after the target rescaling
        let back = first.scale(&frac(1, 2)).compose(&psi.revert().unwrap()).unwrap();
        assert_eq!(back.truncate(n - 3), Series::monomial(3, rat(1), n - 3));
    }

    #[test]
    fn display_ascends() {
        let s = Series::from_terms(&[(2, rat(1)), (3, frac(-3, 2))], 6);
        assert_eq!(s.to_string(), "u^2 - 3/2*u^3 + O(u^6)");
    }
}
