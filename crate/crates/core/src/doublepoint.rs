//! The double point curve `D(f) = V(λ)` and its components.
//!
//! `λ` is obtained by lifting to `D²(f)`: with the divided differences
//!
//! ```text
//! P = (f₂(x,y) − f₂(x,y′)) / (y − y′),   Q = (f₃(x,y) − f₃(x,y′)) / (y − y′)
//! ```
//!
//! the curve is the image of `V(P, Q)` under `(x, y, y′) ↦ (x, y)`, and its
//! defining equation is `Res_{y′}(P, Q)`.
//!
//! For a quasi-homogeneous germ of type `(d₁,d₂,d₃; a,b)` the curve is
//! quasi-homogeneous of degree `(d₂−b)(d₃−b)/b` and factors as
//! `λ = x^s · y^v · ∏ (yᵃ − αᵢ xᵇ)`. Every branch `yᵃ = α xᵇ` is parametrized
//! by `u ↦ (uᵃ, ρ uᵇ)` with `ρᵃ = α`, and along it
//!
//! ```text
//! fᵢ(uᵃ, ρ uᵇ) = u^{dᵢ} · ρ^{rᵢ} · Fᵢ(α),   where fᵢ(1, t) = t^{rᵢ} Fᵢ(tᵃ).
//! ```
//!
//! So the image of a branch is `(uᵃ, A u^{d₂}, B u^{d₃})` with `A = 0` iff
//! `F₂(α) = 0` (likewise `B`), and the branch is a fold exactly when the
//! exponents that survive share the factor 2. Two branches have the same
//! image iff the values `α^{(i r₂ + j r₃)/a} F₂(α)^i F₃(α)^j` agree for all
//! `(i, j)` with `a | i d₂ + j d₃`; these are the invariants of the
//! reparametrizations `u ↦ ζu`, `ζᵃ = 1`. Pairing therefore reduces to
//! polynomial identities in `α`, and irrational roots never need numerical
//! approximation.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::gcd::is_reduced_at_origin;
use crate::algebra::resultant::resultant_monic;
use crate::algebra::{square_free_part, MPoly, Rational, UPoly, WeightVector};
use crate::germ::{restriction_to_axis, NormalForm, QHSignature, XY};
use crate::error::{AlgebraError, GermError};

/// Variables of the lifted space `D²(f)`.
pub const XYY: &[&str] = &["x", "y", "y'"];

/// `P` and `Q` over `(x, y, y′)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DividedDifferences {
    pub p: MPoly,
    pub q: MPoly,
}

/// `(f(x,y) − f(x,y′)) / (y − y′)`, termwise:
/// `(yᵏ − y′ᵏ)/(y − y′) = Σ_{i+j=k−1} yⁱ y′ʲ`.
fn divided_difference(f: &MPoly) -> MPoly {
    let mut out = MPoly::zero(XYY);
    for (e, c) in f.terms() {
        let (i, k) = (e[0], e[1]);
        for j in 0..k {
            out.add_term(vec![i, j, k - 1 - j], c.clone());
        }
    }
    out
}

pub fn divided_differences(nf: &NormalForm) -> DividedDifferences {
    DividedDifferences {
        p: divided_difference(&nf.germ.f[1]),
        q: divided_difference(&nf.germ.f[2]),
    }
}

/// Whether a branch of `D(f)` is mapped one-to-one (and glued to a partner)
/// or two-to-one onto its image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Identification,
    Fold,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Identification => write!(f, "identification"),
            ComponentKind::Fold => write!(f, "fold"),
        }
    }
}

/// One entry of the component list. Entries with `count > 1` stand for a
/// block of conjugate irrational branches sharing a defining polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Defining polynomial in `(x, y)` (the product over the block).
    pub factor: MPoly,
    /// Number of irreducible branches over C represented by this entry.
    pub count: usize,
    pub kind: ComponentKind,
    /// Index of the partner entry for identification components; equals
    /// the entry's own index when the block pairs up internally.
    pub partner: Option<usize>,
    /// Multiplicity at 0 of the image of each branch.
    pub image_multiplicity: u64,
    /// Parametrization of the image, when it has rational coefficients.
    pub image: Option<String>,
}

/// `λ = x^s y^v ∏ (yᵃ − αᵢ xᵇ)`, stored with the product dehomogenized as
/// `F(T)`, `T = yᵃ / xᵇ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub s: u32,
    pub v: u32,
    pub r: u64,
    /// Monic `F(T) = ∏ (T − αᵢ)`.
    pub cofactor: UPoly,
    /// Rational `αᵢ`, ascending.
    pub rational_roots: Vec<Rational>,
    /// Square-free factor of `F` with no rational root, if nonconstant.
    pub irrational_part: Option<UPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoublePointCurve {
    /// Canonical (primitive, positive leading coefficient) generator.
    pub lambda: MPoly,
    /// `λ` has no repeated factor.
    pub is_square_free: bool,
    /// The germ of `V(λ)` at the origin is reduced.
    pub is_reduced: bool,
    /// Weights and degree of `λ` when the germ is quasi-homogeneous.
    pub qh_type: Option<WeightVector>,
    pub decomposition: Option<Decomposition>,
    pub components: Vec<Component>,
}

impl DoublePointCurve {
    /// Total image multiplicity over all branches.
    pub fn image_multiplicity_sum(&self) -> u64 {
        self.components
            .iter()
            .map(|c| c.image_multiplicity * c.count as u64)
            .sum()
    }

    /// Number of branches over C.
    pub fn branch_count(&self) -> usize {
        self.components.iter().map(|c| c.count).sum()
    }
}

/// `λ` from the resultant of the divided differences.
pub fn lambda_raw(nf: &NormalForm) -> Result<MPoly, GermError> {
    let dd = divided_differences(nf);
    let res = resultant_monic(&dd.p, &dd.q, "y'")?;
    let lambda = res.remap(XY)?.primitive_part();
    if lambda.is_zero() {
        return Err(GermError::NotFinitelyDetermined(
            "the double point curve vanishes identically (f is not generically one-to-one)"
                .into(),
        ));
    }
    Ok(lambda)
}

/// Computes `λ`, its reducedness and, for quasi-homogeneous germs, the
/// factorization data. The degree identity `deg_w λ = (d₂−b)(d₃−b)/b` is
/// checked and a mismatch is reported as an inconsistency.
pub fn lambda_of(nf: &NormalForm, sig: Option<&QHSignature>) -> Result<DoublePointCurve, GermError> {
    let lambda = lambda_raw(nf)?;
    let (_, is_square_free) = square_free_part(&lambda);
    let is_reduced = is_square_free || is_reduced_at_origin(&lambda);
    let mut out = DoublePointCurve {
        lambda,
        is_square_free,
        is_reduced,
        qh_type: None,
        decomposition: None,
        components: Vec::new(),
    };
    if let Some(sig) = sig {
        let w = [sig.a, sig.b];
        let expected = Rational::new(
            ((sig.d2 - sig.b) * (sig.d3 - sig.b)).into(),
            sig.b.into(),
        );
        let degree = out.lambda.weighted_degree(&w);
        let matches = degree.map(|d| Rational::from_integer(d.into()) == expected);
        if matches != Some(true) {
            return Err(GermError::Inconsistency(format!(
                "double point curve {} is not quasi-homogeneous of degree {} for weights ({},{})",
                out.lambda, expected, sig.a, sig.b
            )));
        }
        out.qh_type = Some(WeightVector::new(w.to_vec(), degree));
        out.decomposition = Some(decompose(&out.lambda, sig)?);
    }
    Ok(out)
}

fn decompose(lambda: &MPoly, sig: &QHSignature) -> Result<Decomposition, GermError> {
    let s = lambda.terms().map(|(e, _)| e[0]).min().unwrap_or(0);
    let v = lambda.terms().map(|(e, _)| e[1]).min().unwrap_or(0);
    let a = sig.a as u32;
    // Cofactor R = λ / (x^s y^v); R(1, t) = c·F(tᵃ).
    let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
    for (e, c) in lambda.terms() {
        let j = e[1] - v;
        if j % a != 0 {
            return Err(GermError::Inconsistency(format!(
                "term y^{} of the double point cofactor is not a power of y^{a}",
                j
            )));
        }
        coeffs.insert((j / a) as usize, c.clone());
    }
    let deg = coeffs.keys().max().copied().unwrap_or(0);
    let mut dense = vec![Rational::zero(); deg + 1];
    for (k, c) in coeffs {
        dense[k] = c;
    }
    let cofactor = UPoly::new(dense).monic();
    let r = cofactor.degree().unwrap_or(0) as u64;
    let expected = (sig.d2 - sig.b) * (sig.d3 - sig.b) / sig.b;
    if s as u64 * sig.a + v as u64 * sig.b + r * sig.a * sig.b != expected {
        return Err(GermError::Inconsistency(format!(
            "branch count mismatch: s·a + v·b + r·a·b = {} but the degree is {}",
            s as u64 * sig.a + v as u64 * sig.b + r * sig.a * sig.b,
            expected
        )));
    }
    let rational_roots = cofactor.rational_roots();
    let mut rest = cofactor.clone();
    for root in &rational_roots {
        rest = rest.div_exact(&UPoly::linear_root(root)).unwrap_or(rest);
    }
    let irrational_part = (rest.degree().unwrap_or(0) > 0).then(|| rest.square_free_part());
    Ok(Decomposition {
        s,
        v,
        r,
        cofactor,
        rational_roots,
        irrational_part,
    })
}

/// `fᵢ(1, t) = t^{rᵢ} Fᵢ(tᵃ)`.
fn axis_split(f: &MPoly, a: u64) -> Result<(u64, UPoly), GermError> {
    let on_line = UPoly::from_mpoly(&f.eval_var(0, &Rational::one()), 1).expect("only y remains");
    let support: Vec<usize> = on_line
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, _)| k)
        .collect();
    let r = support.first().copied().unwrap_or(0) as u64 % a;
    if support.iter().any(|&k| k as u64 % a != r) {
        return Err(GermError::Inconsistency(
            "coordinate is not quasi-homogeneous for the detected weights".into(),
        ));
    }
    let mut coeffs = vec![Rational::zero(); support.last().map_or(0, |&k| k / a as usize + 1)];
    for &k in &support {
        coeffs[(k - r as usize) / a as usize] = on_line.coeff(k);
    }
    Ok((r, UPoly::new(coeffs)))
}

/// Pairs `(i, j)` generating the invariants of `u ↦ ζu` on
/// `(A u^{d₂}, B u^{d₃})`, restricted to the nonvanishing coordinates.
fn invariant_exponents(sig: &QHSignature, a_live: bool, b_live: bool) -> Vec<(u64, u64)> {
    let a = sig.a;
    let mut out = Vec::new();
    for i in 0..=a {
        for j in 0..=a {
            if (i == 0 && j == 0) || (i > 0 && !a_live) || (j > 0 && !b_live) {
                continue;
            }
            if (i * sig.d2 + j * sig.d3) % a == 0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// The data needed to classify a branch from its root `α`.
struct BranchModel<'a> {
    sig: &'a QHSignature,
    r2: u64,
    r3: u64,
    f2: UPoly,
    f3: UPoly,
}

impl BranchModel<'_> {
    /// `gcd` of the surviving exponents of `(uᵃ, A u^{d₂}, B u^{d₃})`, and the
    /// smallest of them.
    fn fold_degree(&self, a_live: bool, b_live: bool) -> (u64, u64) {
        let mut exps = vec![self.sig.a];
        if a_live {
            exps.push(self.sig.d2);
        }
        if b_live {
            exps.push(self.sig.d3);
        }
        let g = exps.iter().fold(0, |g, &e| g.gcd(&e));
        (g, *exps.iter().min().expect("nonempty"))
    }

    /// Invariant polynomial `T^{(i r₂ + j r₃)/a} F₂(T)^i F₃(T)^j`.
    fn invariant(&self, i: u64, j: u64) -> UPoly {
        let e = (i * self.r2 + j * self.r3) / self.sig.a;
        let mut p = UPoly::monomial(e as usize, Rational::one());
        for _ in 0..i {
            p = &p * &self.f2;
        }
        for _ in 0..j {
            p = &p * &self.f3;
        }
        p
    }

    fn kind_of(&self, a_live: bool, b_live: bool) -> Result<(ComponentKind, u64), GermError> {
        let (k, lowest) = self.fold_degree(a_live, b_live);
        match k {
            1 => Ok((ComponentKind::Identification, lowest)),
            2 => Ok((ComponentKind::Fold, lowest / 2)),
            _ => Err(GermError::Inconsistency(format!(
                "a branch of the double point curve maps {k}-to-1 onto its image"
            ))),
        }
    }
}

fn mono(e: [u32; 2], c: Rational) -> MPoly {
    MPoly::monomial(XY, e.to_vec(), c)
}

/// `x^{b·deg G} G(yᵃ/xᵇ)` for a monic `G`.
fn homogenize(g: &UPoly, a: u64, b: u64) -> MPoly {
    let d = g.degree().unwrap_or(0) as u64;
    let mut out = MPoly::zero(XY);
    for (k, c) in g.coeffs().iter().enumerate() {
        let k = k as u64;
        out.add_term(vec![(b * (d - k)) as u32, (a * k) as u32], c.clone());
    }
    out.primitive_part()
}

/// Exact rational `a`-th root, if one exists.
fn rational_root(alpha: &Rational, a: u64) -> Option<Rational> {
    fn int_root(n: &num_bigint::BigInt, a: u32) -> Option<num_bigint::BigInt> {
        let neg = n < &num_bigint::BigInt::zero();
        if neg && a % 2 == 0 {
            return None;
        }
        let m = if neg { -n } else { n.clone() };
        let r = m.nth_root(a);
        (num_traits::pow(r.clone(), a as usize) == m).then(|| if neg { -r } else { r })
    }
    let a = a as u32;
    Some(Rational::new(int_root(alpha.numer(), a)?, int_root(alpha.denom(), a)?))
}

fn image_string(a: u64, d2: u64, d3: u64, coeffs: Option<(Rational, Rational)>) -> Option<String> {
    let (ca, cb) = coeffs?;
    let term = |c: &Rational, e: u64| -> String {
        if c.is_zero() {
            "0".to_string()
        } else {
            Monomial1(c.clone(), e).to_string()
        }
    };
    Some(format!("u -> ({}, {}, {})", term(&Rational::one(), a), term(&ca, d2), term(&cb, d3)))
}

/// `c·uᵉ` for image parametrizations.
struct Monomial1(Rational, u64);

impl fmt::Display for Monomial1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = match self.1 {
            0 => String::new(),
            1 => "u".into(),
            e => format!("u^{e}"),
        };
        if self.0.is_one() {
            write!(f, "{mono}")
        } else if self.0 == -Rational::one() {
            write!(f, "-{mono}")
        } else {
            write!(f, "{}*{mono}", crate::algebra::mpoly::format_rational(&self.0))
        }
    }
}

/// Deterministic random combination coefficients for pairing tests.
fn combination(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len)
        .map(|_| {
            let mut v = 0i64;
            while v == 0 {
                v = rng.gen_range(-9..=9);
            }
            Rational::from_integer(v.into())
        })
        .collect()
}

/// Characteristic polynomial of multiplication by `l` on `Q[T]/(c)`:
/// `∏_{c(α)=0} (z − l(α))`.
///
/// The power sums `Σ l(α)ᵏ` are traces of `lᵏ mod c`, which are linear in
/// the power sums `Σ αʲ` of the roots of `c`; Newton's identities turn them
/// into coefficients.
fn charpoly(c: &UPoly, l: &UPoly) -> Result<UPoly, GermError> {
    let c = c.monic();
    let n = c.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    let cc = c.coeffs();
    // root power sums s_j = Σ αʲ, j < n
    let mut root_sums = vec![Rational::from_integer(n.into())];
    for k in 1..n {
        let mut acc = Rational::from_integer(k.into()) * &cc[n - k];
        for i in 1..k {
            acc += &cc[n - i] * &root_sums[k - i];
        }
        root_sums.push(-acc);
    }
    let trace = |g: &UPoly| -> Rational {
        g.coeffs()
            .iter()
            .zip(&root_sums)
            .map(|(a, b)| a * b)
            .fold(Rational::zero(), |x, y| x + y)
    };
    let (_, l) = l.div_rem(&c);
    let mut power = UPoly::constant(Rational::one());
    let mut sums = Vec::with_capacity(n);
    for _ in 0..n {
        power = (&power * &l).div_rem(&c).1;
        sums.push(trace(&power));
    }
    // elementary symmetric functions e_k of the values l(α)
    let mut e = vec![Rational::one()];
    for k in 1..=n {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &sums[i - 1];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / Rational::from_integer(k.into()));
    }
    let mut coeffs = vec![Rational::zero(); n + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { ek } else { -ek };
    }
    Ok(UPoly::new(coeffs))
}

/// Decides whether the roots of the square-free `block` split into pairs
/// with equal invariant values. Two independent random combinations must
/// both give a characteristic polynomial `S(z)²` with `S` square-free.
fn block_pairs_up(
    block: &UPoly,
    invariants: &[UPoly],
    rng: &mut ChaCha8Rng,
) -> Result<bool, GermError> {
    let mut confirmations = 0;
    for _attempt in 0..8 {
        let coeffs = combination(rng, invariants.len());
        let mut l = UPoly::zero();
        for (c, inv) in coeffs.iter().zip(invariants) {
            l = &l + &inv.scale(c);
        }
        let (_, l) = l.div_rem(block);
        let chi = charpoly(block, &l)?;
        match chi.sqrt_monic() {
            Some(s) if s.is_square_free() => {
                confirmations += 1;
                if confirmations == 2 {
                    return Ok(true);
                }
            }
            // A perfect square with a repeated factor can be an accidental
            // collision of two pairs; a non-square may be a collision of a
            // pair with a third root. Both are retried with fresh weights.
            _ => continue,
        }
    }
    Ok(false)
}

/// Classifies the branches of a reduced quasi-homogeneous double point curve
/// into folds and identification pairs.
pub fn classify_components(
    nf: &NormalForm,
    sig: &QHSignature,
    curve: &mut DoublePointCurve,
) -> Result<(), GermError> {
    if !curve.is_reduced {
        return Err(GermError::NotFinitelyDetermined(format!(
            "double point curve {} is not reduced",
            curve.lambda
        )));
    }
    let dec = curve
        .decomposition
        .clone()
        .ok_or(GermError::NotQuasiHomogeneous)?;
    let (a, b) = (sig.a, sig.b);
    let (r2, f2) = axis_split(&nf.germ.f[1], a)?;
    let (r3, f3) = axis_split(&nf.germ.f[2], a)?;
    let model = BranchModel { sig, r2, r3, f2, f3 };
    let mut comps: Vec<Component> = Vec::new();
    let mut unpaired: Vec<usize> = Vec::new();

    if dec.s > 0 {
        let axis = restriction_to_axis(nf);
        let support: Vec<usize> = axis
            .second
            .coeffs()
            .iter()
            .enumerate()
            .chain(axis.third.coeffs().iter().enumerate())
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect();
        let k = support.iter().fold(0usize, |g, &e| g.gcd(&e)) as u64;
        let lowest = *support.iter().min().expect("finite germ") as u64;
        if k != 2 {
            return Err(GermError::Inconsistency(format!(
                "the branch x = 0 lies in the double point curve but maps {k}-to-1 onto its image"
            )));
        }
        let image = (axis.third.degree().unwrap_or(0) <= 1 || axis.third.is_zero())
            .then(|| format!("u -> (0, {}, {})", axis.second.to_string().replace('t', "u"),
                if axis.third.is_zero() { "0".to_string() } else { axis.third.to_string().replace('t', "u") }));
        comps.push(Component {
            factor: mono([1, 0], Rational::one()),
            count: 1,
            kind: ComponentKind::Fold,
            partner: None,
            image_multiplicity: lowest / 2,
            image,
        });
    }

    // Image key for rational branches: zero pattern plus invariant values.
    type Key = (bool, bool, Vec<Rational>);
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let key_string = |k: &Key| format!("{:?}", k);

    if dec.v > 0 {
        // y = 0 maps onto the X-axis, one-to-one.
        let idx = comps.len();
        comps.push(Component {
            factor: mono([0, 1], Rational::one()),
            count: 1,
            kind: ComponentKind::Identification,
            partner: None,
            image_multiplicity: 1,
            image: Some("u -> (u, 0, 0)".into()),
        });
        if a == 1 {
            let inv = invariant_exponents(sig, false, false);
            debug_assert!(inv.is_empty());
            groups.entry(key_string(&(false, false, Vec::new()))).or_default().push(idx);
        } else {
            unpaired.push(idx);
        }
    }

    for alpha in &dec.rational_roots {
        let a_live = !model.f2.eval(alpha).is_zero();
        let b_live = !model.f3.eval(alpha).is_zero();
        let (kind, mult) = model.kind_of(a_live, b_live)?;
        let factor = &mono([0, a as u32], Rational::one()) - &mono([b as u32, 0], alpha.clone());
        let rho = rational_root(alpha, a);
        let coeffs = rho.map(|rho| {
            let ca = num_traits::pow(rho.clone(), r2 as usize) * model.f2.eval(alpha);
            let cb = num_traits::pow(rho, r3 as usize) * model.f3.eval(alpha);
            (ca, cb)
        });
        let idx = comps.len();
        comps.push(Component {
            factor: factor.primitive_part(),
            count: 1,
            kind,
            partner: None,
            image_multiplicity: mult,
            image: image_string(a, sig.d2, sig.d3, coeffs),
        });
        if kind == ComponentKind::Identification {
            let values: Vec<Rational> = invariant_exponents(sig, a_live, b_live)
                .into_iter()
                .map(|(i, j)| model.invariant(i, j).eval(alpha))
                .collect();
            groups
                .entry(key_string(&(a_live, b_live, values)))
                .or_default()
                .push(idx);
        }
    }

    for members in groups.values() {
        match members.as_slice() {
            [i, j] => {
                comps[*i].partner = Some(*j);
                comps[*j].partner = Some(*i);
            }
            _ => unpaired.extend(members.iter().copied()),
        }
    }
    if let Some(&i) = unpaired.first() {
        return Err(GermError::Inconsistency(format!(
            "identification component V({}) has no partner with the same image",
            comps[i].factor
        )));
    }

    if let Some(irr) = &dec.irrational_part {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0b1e);
        let g2 = irr.gcd(&model.f2);
        let g3 = irr.gcd(&model.f3);
        let both = g2.gcd(&g3);
        let only_a_dead = g2.div_exact(&both).expect("divides");
        let only_b_dead = g3.div_exact(&both).expect("divides");
        let any_dead = &(&only_a_dead * &only_b_dead) * &both;
        let live = irr.div_exact(&any_dead).expect("square-free split");
        let classes = [
            (both, false, false),
            (only_a_dead, false, true),
            (only_b_dead, true, false),
            (live, true, true),
        ];
        for (block, a_live, b_live) in classes {
            let Some(d) = block.degree() else { continue };
            if d == 0 {
                continue;
            }
            let (kind, mult) = model.kind_of(a_live, b_live)?;
            let idx = comps.len();
            let mut partner = None;
            if kind == ComponentKind::Identification {
                let invariants: Vec<UPoly> = invariant_exponents(sig, a_live, b_live)
                    .into_iter()
                    .map(|(i, j)| model.invariant(i, j))
                    .collect();
                let paired = d % 2 == 0
                    && !invariants.is_empty()
                    && block_pairs_up(&block, &invariants, &mut rng)?;
                if !paired {
                    return Err(GermError::Inconsistency(format!(
                        "the identification branches over the roots of {block} do not pair up"
                    )));
                }
                partner = Some(idx);
            }
            comps.push(Component {
                factor: homogenize(&block.monic(), a, b),
                count: d,
                kind,
                partner,
                image_multiplicity: mult,
                image: None,
            });
        }
    }
    curve.components = comps;
    Ok(())
}

/// `f` is finitely determined iff `μ(D(f), 0) < ∞`, i.e. iff `λ ≠ 0` and the
/// germ of `V(λ)` at the origin is reduced.
pub fn is_finitely_determined(nf: &NormalForm) -> Result<bool, GermError> {
    match lambda_raw(nf) {
        Ok(lambda) => Ok(is_reduced_at_origin(&lambda)),
        Err(GermError::NotFinitelyDetermined(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::germ::{infer_qh_signature, validate_normal_form, MapGerm};

    fn nf(a: &str, b: &str, c: &str) -> NormalForm {
        validate_normal_form(&MapGerm::parse(a, b, c).unwrap()).unwrap()
    }

    fn curve(a: &str, b: &str, c: &str) -> DoublePointCurve {
        let n = nf(a, b, c);
        let sig = infer_qh_signature(&n);
        let mut d = lambda_of(&n, sig.as_ref()).unwrap();
        if let Some(sig) = sig {
            if d.is_reduced {
                classify_components(&n, &sig, &mut d).unwrap();
            }
        }
        d
    }

    #[test]
    fn divided_differences_by_hand() {
        let p = |s: &str| parse_poly(s, XYY).unwrap();
        let d = divided_differences(&nf("x", "y^2", "x*y"));
        assert_eq!((d.p, d.q), (p("y + y'"), p("x")));
        let d = divided_differences(&nf("x", "y^2", "x*y^3 - x^5*y"));
        assert_eq!(d.q, p("x*(y^2 + y*y' + y'^2) - x^5"));
        let d = divided_differences(&nf("x", "y^3 + x*y", "y^4"));
        assert_eq!(d.p, p("y^2 + y*y' + y'^2 + x"));
        assert_eq!(d.q, p("(y + y')*(y^2 + y'^2)"));
    }

    #[test]
    fn fold_plus_identification_pair() {
        let d = curve("x", "y^2", "x*y^3 - x^5*y");
        assert_eq!(d.lambda.to_string(), "x^5 - x*y^2");
        let dec = d.decomposition.as_ref().unwrap();
        assert_eq!((dec.s, dec.v, dec.r), (1, 0, 2));
        assert_eq!(dec.rational_roots.len(), 2);
        let folds: Vec<_> = d.components.iter().filter(|c| c.kind == ComponentKind::Fold).collect();
        assert_eq!(folds.len(), 1);
        assert_eq!(folds[0].factor.to_string(), "x");
        let ids: Vec<_> = d
            .components
            .iter()
            .enumerate()
            .filter(|(_, c)| c.kind == ComponentKind::Identification)
            .collect();
        assert_eq!(ids.len(), 2);
        assert_eq!(ids[0].1.partner, Some(ids[1].0));
        assert_eq!(ids[0].1.image, ids[1].1.image);
        assert_eq!(ids[0].1.image.as_deref(), Some("u -> (u, u^4, 0)"));
    }

    #[test]
    fn two_folds() {
        let d = curve("x", "y^2", "x^2*y - x*y^5");
        assert_eq!(d.lambda, parse_poly("x*(x - y^4)", XY).unwrap().primitive_part());
        assert!(d.is_reduced);
        assert_eq!(d.components.len(), 2);
        assert!(d.components.iter().all(|c| c.kind == ComponentKind::Fold));
    }

    #[test]
    fn cross_cap_is_one_fold() {
        let d = curve("x", "y^2", "x*y");
        assert_eq!(d.lambda.to_string(), "x");
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].kind, ComponentKind::Fold);
        assert_eq!(d.components[0].image.as_deref(), Some("u -> (0, u^2, 0)"));
    }

    #[test]
    fn axis_fold_for_even_gcd() {
        let d = curve("x", "y^4", "x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6");
        assert_eq!(d.decomposition.as_ref().unwrap().s, 1);
        assert_eq!(d.components[0].factor.to_string(), "x");
        assert_eq!(d.components[0].kind, ComponentKind::Fold);
        assert_eq!(d.components[0].image_multiplicity, 2);
    }

    #[test]
    fn irrational_branches_pair() {
        // y² = −x folds onto (u², 0, u⁴); the two branches over T² + 1
        // are conjugate and glued to each other.
        let d = curve("x", "y^3 + x*y", "y^4");
        assert!(d.is_reduced);
        assert_eq!(d.branch_count(), 3);
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.components[0].factor.to_string(), "y^2 + x");
        assert_eq!(d.components[0].kind, ComponentKind::Fold);
        assert_eq!(d.components[1].factor.to_string(), "y^4 + x^2");
        assert_eq!(d.components[1].count, 2);
        assert_eq!(d.components[1].partner, Some(1));
        assert_eq!(d.components[1].image_multiplicity, 2);

        let d = curve("x", "y^3", "x*y + y^5");
        assert_eq!(d.branch_count(), 2);
        assert_eq!(d.components[0].kind, ComponentKind::Identification);
    }

    #[test]
    fn non_reduced_witness() {
        let n = nf("x", "y^2", "x^2*y");
        let d = lambda_of(&n, None).unwrap();
        assert_eq!(d.lambda.to_string(), "x^2");
        assert!(!d.is_reduced);
        assert!(!is_finitely_determined(&n).unwrap());
        assert!(is_finitely_determined(&nf("x", "y^2", "x^2*y - x*y^5")).unwrap());
    }

    #[test]
    fn charpoly_agrees_with_the_resultant() {
        const ZT: &[&str] = &["z", "T"];
        let cases = [
            (UPoly::from_ints(&[-2, 0, 1]), UPoly::from_ints(&[1, 3])),
            (UPoly::from_ints(&[1, 1, 0, 1]), UPoly::from_ints(&[0, -1, 2])),
            (UPoly::from_ints(&[3, -1, 4, 1, 5, 2]), UPoly::from_ints(&[2, 0, 0, 7, 1, 1, 3])),
        ];
        for (c, l) in cases {
            let z = MPoly::var(ZT, "z").unwrap();
            let res = resultant_monic(&c.monic().to_mpoly(ZT, 1), &(&z - &l.to_mpoly(ZT, 1)), "T")
                .unwrap()
                .remap(&["z"])
                .unwrap();
            let expected = UPoly::from_mpoly(&res, 0).unwrap().monic();
            assert_eq!(charpoly(&c, &l).unwrap(), expected);
        }
    }
}
