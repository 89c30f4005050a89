//! Dense univariate polynomials over Q, used for dehomogenized double point
//! factors `λ(1, t)` and their root bookkeeping.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mpoly::{format_rational, MPoly};
use super::rational::Rational;

/// Coefficients from the constant term upwards; never has a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The monomial `c t^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `t - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// Reads a polynomial in which only variable `var` occurs.
    pub fn from_mpoly(p: &MPoly, var: usize) -> Option<Self> {
        let mut coeffs = vec![Rational::zero(); p.degree_in(var).unwrap_or(0) as usize + 1];
        for (e, c) in p.terms() {
            if e.iter().enumerate().any(|(i, &k)| i != var && k != 0) {
                return None;
            }
            coeffs[e[var] as usize] = c.clone();
        }
        Some(Self::new(coeffs))
    }

    /// Embeds into the polynomial ring over `vars` as a polynomial in `var`.
    pub fn to_mpoly(&self, vars: &[&str], var: usize) -> MPoly {
        MPoly::from_terms(
            vars,
            self.coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; vars.len()];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest exponent carrying a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = &r[k] * &inv;
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                r[k - dd + i] -= t;
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    /// Exact division, `None` when there is a remainder.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `p / gcd(p, p')`, monic.
    pub fn square_free_part(&self) -> UPoly {
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// `p(q(t))`.
    pub fn compose(&self, q: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// `t^k p(1/t)` with `k = deg p`.
    pub fn reversed(&self) -> UPoly {
        let mut c = self.coeffs.clone();
        c.reverse();
        UPoly::new(c)
    }

    /// The monic square root if the polynomial is a perfect square up to a
    /// constant factor.
    pub fn sqrt_monic(&self) -> Option<UPoly> {
        let p = self.monic();
        let d = p.degree()?;
        if d % 2 == 1 {
            return None;
        }
        let h = d / 2;
        // Solve s = t^h + ..., top coefficients first.
        let mut s = vec![Rational::zero(); h + 1];
        s[h] = Rational::one();
        let two = Rational::from_integer(BigInt::from(2));
        for k in (0..h).rev() {
            // coefficient of t^{h+k} in s^2, with s[k] unknown, equals p[h+k]
            let mut acc = Rational::zero();
            for i in k + 1..=h {
                let j = h + k - i;
                if j > k && j <= h {
                    acc += &s[i] * &s[j];
                }
            }
            s[k] = (p.coeff(h + k) - acc) / &two;
        }
        let s = UPoly::new(s);
        (&s * &s == p).then_some(s)
    }

    /// Clears denominators and content: integer coefficients with gcd 1 and
    /// positive leading coefficient.
    pub fn integer_primitive(&self) -> Vec<BigInt> {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if self.lc().is_negative() { -1 } else { 1 };
        ints.into_iter().map(|c| c / &g * sign).collect()
    }

    /// All rational roots, each once. Candidates come from the rational root
    /// theorem; integers too large to factor by trial division are skipped,
    /// so the list may omit roots of enormous height (callers must tolerate
    /// this and treat such roots as irrational).
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let mut p = self.clone();
        if p.coeff(0).is_zero() {
            out.push(Rational::zero());
            let k = p.order().unwrap_or(0);
            p = UPoly::new(p.coeffs[k..].to_vec());
        }
        if p.degree().unwrap_or(0) == 0 {
            return out;
        }
        let ints = p.integer_primitive();
        let (Some(num_div), Some(den_div)) = (
            divisors(&ints[0].abs()),
            divisors(&ints[ints.len() - 1].abs()),
        ) else {
            return out;
        };
        for a in &num_div {
            for b in &den_div {
                for sgn in [1i32, -1] {
                    let r = Rational::new(a * BigInt::from(sgn), b.clone());
                    if !out.contains(&r) && p.eval(&r).is_zero() {
                        out.push(r);
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// Positive divisors of a nonzero integer, or `None` when trial division up
/// to 10⁶ leaves an unfactored cofactor above 10¹².
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut rest = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= rest && d < BigInt::from(1_000_000) {
        let mut k = 0;
        while (&rest % &d).is_zero() {
            rest /= &d;
            k += 1;
        }
        if k > 0 {
            primes.push((d.clone(), k));
        }
        d += 1;
    }
    if rest > BigInt::one() {
        if &d * &d <= rest && rest > BigInt::from(1_000_000_000_000u64) {
            return None;
        }
        primes.push((rest, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in primes {
        let mut next = Vec::new();
        for dv in &divs {
            let mut pw = BigInt::one();
            for _ in 0..=k {
                next.push(dv * &pw);
                pw *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly({self})")
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
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
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if k == 0 {
                write!(f, "{}", format_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{}*{mon}", format_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, rhs: &'a UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &'a UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &'a UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}
