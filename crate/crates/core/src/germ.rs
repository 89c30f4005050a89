//! Map germs `f = (f₁, f₂, f₃) : (C², 0) → (C³, 0)` in the corank-1 normal
//! form
//!
//! ```text
//! f(x, y) = (x, yⁿ + x·p(x, y), β·yᵐ + x·q(x, y)),   p(x, 0) = q(x, 0) = 0.
//! ```
//!
//! Inputs are expected to arrive already in this shape; we validate it rather
//! than search for the coordinate changes that would produce it. The only
//! normalizations applied are target-side: permuting the last two
//! coordinates so that the lower pure-`y` order comes first, and rescaling
//! each of them so the lowest pure-`y` coefficient is 1.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::weights::common_weights;
use crate::algebra::{parse_poly, MPoly, Rational, UPoly};
use crate::error::GermError;

/// Source variables, in order.
pub const XY: &[&str] = &["x", "y"];

#[derive(Clone, PartialEq, Eq)]
pub struct MapGerm {
    pub f: [MPoly; 3],
}

impl MapGerm {
    /// Builds a germ from three polynomials over `(x, y)`, checking that each
    /// vanishes at the origin.
    pub fn new(f1: MPoly, f2: MPoly, f3: MPoly) -> Result<Self, GermError> {
        let mut f = [f1, f2, f3];
        for fi in f.iter_mut() {
            if fi.var_names() != XY {
                *fi = fi.remap(XY)?;
            }
            if !fi.constant_term().is_zero() {
                return Err(GermError::NotOriginPreserving);
            }
        }
        Ok(MapGerm { f })
    }

    pub fn parse(f1: &str, f2: &str, f3: &str) -> Result<Self, GermError> {
        Self::new(parse_poly(f1, XY)?, parse_poly(f2, XY)?, parse_poly(f3, XY)?)
    }

    /// Linear parts at the origin as a 3×2 matrix (rows `fᵢ`, columns `x, y`).
    fn linear_part(&self) -> [[Rational; 2]; 3] {
        let row = |p: &MPoly| [p.coeff(&[1, 0]), p.coeff(&[0, 1])];
        [row(&self.f[0]), row(&self.f[1]), row(&self.f[2])]
    }

    /// `2 − rank df(0)`.
    pub fn corank_at_origin(&self) -> u8 {
        let m = self.linear_part();
        let nonzero_row = m.iter().any(|r| !r[0].is_zero() || !r[1].is_zero());
        if !nonzero_row {
            return 2;
        }
        let independent = (0..3).any(|i| {
            (i + 1..3).any(|j| !(&m[i][0] * &m[j][1] - &m[i][1] * &m[j][0]).is_zero())
        });
        if independent {
            0
        } else {
            1
        }
    }

    /// Pulls the germ back along the source substitution `x ↦ value`.
    pub fn substitute_x(&self, value: &MPoly) -> MapGerm {
        MapGerm {
            f: [
                self.f[0].substitute(0, value),
                self.f[1].substitute(0, value),
                self.f[2].substitute(0, value),
            ],
        }
    }
}

impl fmt::Display for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.f[0], self.f[1], self.f[2])
    }
}

impl fmt::Debug for MapGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MapGerm{self}")
    }
}

/// The validated normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    /// The germ after target normalization (swap, rescaling).
    pub germ: MapGerm,
    /// Multiplicity: lowest pure-`y` order of the second coordinate.
    pub n: u32,
    /// Lowest pure-`y` order of the third coordinate; `None` when `β = 0`.
    pub m: Option<u32>,
    /// `1` after rescaling, or `0`.
    pub beta: Rational,
    pub p: MPoly,
    pub q: MPoly,
    /// True when the second and third input coordinates were exchanged.
    pub swapped: bool,
}

/// Splits `f` into its pure-`y` part `f(0, y)` and `(f − f(0, y))/x`.
fn split_pure_y(f: &MPoly) -> (UPoly, MPoly) {
    let pure = f.eval_var(0, &Rational::zero());
    let rest = f - &pure;
    let quotient = rest
        .div_exact(&MPoly::var(XY, "x").expect("x"))
        .expect("remaining terms contain x");
    (UPoly::from_mpoly(&pure, 1).expect("only y remains"), quotient)
}

/// Validates the corank-1 normal form and returns its data.
pub fn validate_normal_form(g: &MapGerm) -> Result<NormalForm, GermError> {
    let corank = g.corank_at_origin();
    if corank != 1 {
        return Err(GermError::UnsupportedCorank(corank));
    }
    if g.f[0] != MPoly::var(XY, "x")? {
        return Err(GermError::NotInNormalForm(format!(
            "first coordinate must be exactly x, got {}",
            g.f[0]
        )));
    }
    for (i, fi) in g.f.iter().enumerate().skip(1) {
        if !fi.eval_var(1, &Rational::zero()).is_zero() {
            return Err(GermError::NotInNormalForm(format!(
                "coordinate f{} has pure x terms (needs f(x, 0) = 0)",
                i + 1
            )));
        }
    }
    let (h2, _) = split_pure_y(&g.f[1]);
    let (h3, _) = split_pure_y(&g.f[2]);
    let (o2, o3) = (h2.order(), h3.order());
    let swapped = match (o2, o3) {
        (None, None) => {
            return Err(GermError::NotInNormalForm(
                "both coordinates vanish on x = 0, so the germ is not finite".into(),
            ))
        }
        (None, Some(_)) => true,
        (Some(a), Some(b)) => b < a,
        _ => false,
    };
    let (mut f2, mut f3) = (g.f[1].clone(), g.f[2].clone());
    if swapped {
        std::mem::swap(&mut f2, &mut f3);
    }
    let (h2, _) = split_pure_y(&f2);
    let n = h2.order().expect("nonzero") as u32;
    f2 = f2.scale(&h2.coeff(n as usize).recip());
    let (h3, _) = split_pure_y(&f3);
    let (m, beta) = match h3.order() {
        Some(k) => {
            f3 = f3.scale(&h3.coeff(k).recip());
            (Some(k as u32), Rational::one())
        }
        None => (None, Rational::zero()),
    };
    if n < 2 {
        return Err(GermError::NotInNormalForm(format!(
            "pure y order {n} of the second coordinate must be at least 2"
        )));
    }
    if let Some(m) = m {
        if m % n == 0 {
            return Err(GermError::NotInNormalForm(format!(
                "y^{m} in the third coordinate is a power of y^{n}; subtract it by a target change first"
            )));
        }
    } else if n > 2 {
        return Err(GermError::BetaZeroHighMultiplicity(n));
    }
    let germ = MapGerm {
        f: [g.f[0].clone(), f2, f3],
    };
    let (_, p) = split_pure_y(&germ.f[1]);
    let (_, q) = split_pure_y(&germ.f[2]);
    Ok(NormalForm {
        germ,
        n,
        m,
        beta,
        p,
        q,
        swapped,
    })
}

/// Weights `(a, b)` of `(x, y)` and degrees `d₁ = a, d₂, d₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QHSignature {
    pub d1: u64,
    pub d2: u64,
    pub d3: u64,
    pub a: u64,
    pub b: u64,
}

impl QHSignature {
    /// Multiplicity `n = d₂ / b`.
    pub fn n(&self) -> u64 {
        self.d2 / self.b
    }

    /// `m = d₃ / b` when that is an integer.
    pub fn m(&self) -> Option<u64> {
        (self.d3 % self.b == 0).then(|| self.d3 / self.b)
    }

    /// `c = min(a, d₂)`.
    pub fn c(&self) -> u64 {
        self.a.min(self.d2)
    }

    /// `[d₁, d₂, d₃, a, b]`, the layout used by corpus files.
    pub fn as_array(&self) -> [u64; 5] {
        [self.d1, self.d2, self.d3, self.a, self.b]
    }
}

impl fmt::Display for QHSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{};{},{})", self.d1, self.d2, self.d3, self.a, self.b)
    }
}

/// The common quasi-homogeneous type of a normal form, if any.
///
/// `d₂` is always the degree of the coordinate carrying `yⁿ`. With `β ≠ 0`
/// the normal form already guarantees `d₂ = nb ≤ mb = d₃`.
pub fn infer_qh_signature(nf: &NormalForm) -> Option<QHSignature> {
    let exps: Vec<Vec<Vec<u32>>> = nf
        .germ
        .f
        .iter()
        .map(|p| p.terms().map(|(e, _)| e.clone()).collect())
        .collect();
    let w = common_weights(2, &exps)?;
    let d: Vec<u64> = nf
        .germ
        .f
        .iter()
        .map(|p| p.weighted_degree(&w))
        .collect::<Option<Vec<_>>>()?;
    debug_assert_eq!(d[0], w[0]);
    Some(QHSignature {
        d1: d[0],
        d2: d[1],
        d3: d[2],
        a: w[0],
        b: w[1],
    })
}

/// `f` restricted to the line `x = 0`, and the derived flag `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisRestriction {
    pub second: UPoly,
    pub third: UPoly,
    /// 0 when the restriction is generically one-to-one, 1 otherwise.
    pub s: u8,
}

/// `s = 0` iff the exponents occurring in `f₂(0,u)`, `f₃(0,u)` have gcd 1.
pub fn restriction_to_axis(nf: &NormalForm) -> AxisRestriction {
    let (second, _) = split_pure_y(&nf.germ.f[1]);
    let (third, _) = split_pure_y(&nf.germ.f[2]);
    let g = second
        .coeffs()
        .iter()
        .enumerate()
        .chain(third.coeffs().iter().enumerate())
        .filter(|(_, c)| !c.is_zero())
        .fold(0usize, |g, (k, _)| g.gcd(&k));
    AxisRestriction {
        second,
        third,
        s: if g == 1 { 0 } else { 1 },
    }
}
