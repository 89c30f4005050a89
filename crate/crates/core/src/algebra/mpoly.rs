//! Sparse multivariate polynomials over Q.
//!
//! Terms live in a `BTreeMap` from exponent vectors to nonzero rational
//! coefficients. Every polynomial carries its ordered variable list; binary
//! operations require both operands to share it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, Rational};
use crate::error::AlgebraError;

pub type Monomial = Vec<u32>;

/// Graded lexicographic comparison: total degree first, then lex with the
/// first variable largest.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_like(&self) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: Rational) -> Self {
        let mut p = self.zero_like();
        p.add_term(vec![0; self.vars.len()], c);
        p
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: &[&str], name: &str) -> Result<Self, AlgebraError> {
        let idx = vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Ok(Self::monomial(vars, e, Rational::one()))
    }

    pub fn monomial(vars: &[&str], exps: Monomial, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent arity mismatch");
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent arity mismatch");
            p.add_term(e, c);
        }
        p
    }

    /// Same as [`MPoly::from_terms`] with small integer coefficients.
    pub fn from_int_terms(vars: &[&str], terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(vars, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c))))
    }

    pub(crate) fn with_vars_of(&self, terms: BTreeMap<Monomial, Rational>) -> Self {
        MPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Adds `c * x^e` in place.
    pub fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max()
    }

    /// Lowest total degree among the terms (the order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).min()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Leading term under graded lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    /// Terms sorted by descending graded lex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    fn check_compatible(&self, other: &MPoly) {
        assert_eq!(self.vars, other.vars, "polynomials over different variable lists");
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return self.zero_like();
        }
        self.with_vars_of(self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect())
    }

    pub fn mul_monomial(&self, e: &[u32], c: &Rational) -> MPoly {
        if c.is_zero() {
            return self.zero_like();
        }
        self.with_vars_of(
            self.terms
                .iter()
                .map(|(m, v)| (m.iter().zip(e).map(|(a, b)| a + b).collect(), v * c))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut result = self.constant_like(Rational::one());
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

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                out.add_term(ne, c * rat(e[var] as i64));
            }
        }
        out
    }

    /// Coefficients with respect to `var`: entry `k` is the coefficient of
    /// `var^k`, as a polynomial over the same variable list (with `var`
    /// absent).
    pub fn coefficients_in(&self, var: usize) -> Vec<MPoly> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![self.zero_like(); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut ne = e.clone();
            ne[var] = 0;
            out[k].terms.insert(ne, c.clone());
        }
        out
    }

    /// Inverse of [`MPoly::coefficients_in`].
    pub fn from_coefficients_in(var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = coeffs[0].zero_like();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut ne = e.clone();
                ne[var] += k as u32;
                out.add_term(ne, v.clone());
            }
        }
        out
    }

    /// Substitutes `var := value`, where `value` lives over the same variables.
    pub fn substitute(&self, var: usize, value: &MPoly) -> MPoly {
        self.check_compatible(value);
        let coeffs = self.coefficients_in(var);
        // Horner
        let mut acc = self.zero_like();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Evaluates `var := value` (a rational number).
    pub fn eval_var(&self, var: usize, value: &Rational) -> MPoly {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let k = ne[var];
            ne[var] = 0;
            out.add_term(ne, c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(v.clone(), k as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-expresses the polynomial over another variable list, matching by
    /// name. Fails if a variable actually used is missing from `vars`.
    pub fn remap(&self, vars: &[&str]) -> Result<MPoly, AlgebraError> {
        let mut idx = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.iter().enumerate() {
            match vars.iter().position(|v| v == name) {
                Some(j) => idx.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] > 0) {
                        return Err(AlgebraError::UnknownVariable(name.clone()));
                    }
                    idx.push(None);
                }
            }
        }
        let mut out = MPoly::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if let Some(j) = idx[i] {
                    ne[j] += k;
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        self.check_compatible(divisor);
        if divisor.is_zero() {
            return None;
        }
        let (lm_d, lc_d) = divisor.leading_term().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = self.zero_like();
        while let Some((lm, lc)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if !lm.iter().zip(&lm_d).all(|(a, b)| a >= b) {
                return None;
            }
            let qe: Monomial = lm.iter().zip(&lm_d).map(|(a, b)| a - b).collect();
            let qc = lc / &lc_d;
            rem = &rem - &divisor.mul_monomial(&qe, &qc);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// The rational content scaled so that the primitive part has coprime
    /// integer coefficients and a positive graded-lex leading coefficient.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        content
    }

    /// Canonical unit-normalized representative: integer coefficients with
    /// gcd 1 and positive leading coefficient (graded lex).
    pub fn primitive_part(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Drops terms of total degree `>= bound`.
    pub fn truncate_degree(&self, bound: u32) -> MPoly {
        self.with_vars_of(
            self.terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() < bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        )
    }

    /// Weighted degrees of all terms, sorted and deduplicated.
    pub fn weighted_degrees(&self, weights: &[u64]) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(&k, &w)| k as u64 * w).sum())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The common weighted degree if all terms share one.
    pub fn weighted_degree(&self, weights: &[u64]) -> Option<u64> {
        let d = self.weighted_degrees(weights);
        if d.len() == 1 {
            Some(d[0])
        } else {
            None
        }
    }

    /// True when the leading coefficient in `var` is the constant 1.
    pub fn is_monic_in(&self, var: usize) -> bool {
        match self.coefficients_in(var).last() {
            Some(lc) => lc.is_constant() && lc.constant_term().is_one(),
            None => false,
        }
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({})", self.vars.join(","), self)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !abs.is_one() || is_const {
                factors.push(format_rational(&abs));
            }
            for (v, &k) in self.vars.iter().zip(e) {
                match k {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{k}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

pub(crate) fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        self.check_compatible(rhs);
        let mut out = self.zero_like();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(self, rhs: MPoly) -> MPoly {
        &self + &rhs
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        &self - &rhs
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        &self * &rhs
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::frac;

    const XY: &[&str] = &["x", "y"];

    #[test]
    fn display_uses_descending_grlex() {
        let p = MPoly::from_int_terms(
            XY,
            &[(&[0, 6], 1), (&[1, 5], 4), (&[3, 3], -5), (&[5, 1], 1)],
        );
        assert_eq!(p.to_string(), "x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6");
        let q = MPoly::constant(XY, frac(-1, 2));
        assert_eq!(q.to_string(), "-1/2");
    }

    #[test]
    fn exact_division() {
        let x = MPoly::var(XY, "x").unwrap();
        let y = MPoly::var(XY, "y").unwrap();
        let a = &(&x - &y) * &(&(&x * &x) + &y);
        let q = a.div_exact(&(&x - &y)).unwrap();
        assert_eq!(q, &(&x * &x) + &y);
        assert!(a.div_exact(&(&x + &y)).is_none());
    }

    #[test]
    fn primitive_part_is_canonical() {
        let p = MPoly::from_terms(
            XY,
            vec![(vec![1, 0], frac(-3, 4)), (vec![0, 1], frac(3, 2))],
        );
        // -3/4 x + 3/2 y: grlex leading term is x, so normalize sign on x.
        assert_eq!(p.primitive_part().to_string(), "x - 2*y");
    }

    #[test]
    fn substitution_and_derivative() {
        let p = MPoly::from_int_terms(XY, &[(&[2, 1], 1), (&[1, 5], -1)]);
        let dy = p.derivative(1);
        assert_eq!(dy.to_string(), "-5*x*y^4 + x^2");
        let y = MPoly::var(XY, "y").unwrap();
        let s = p.substitute(0, &y);
        assert_eq!(s.to_string(), "-y^6 + y^3");
    }
}
