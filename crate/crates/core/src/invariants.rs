//! Colengths of ideals in the local ring `O₂ = C{x,y}`: Milnor and Tjurina
//! numbers of plane curves, the cross-cap number `C(f)` and Saito's test.
//!
//! The engine works in `K[x,y]/m^D` with the local degree order (lower total
//! degree leads, ties broken towards higher powers of `x`). Modulo `m^D` every
//! monomial chain is finite, so Buchberger's algorithm with top-reduction
//! terminates and yields the leading ideal of `I + m^D`. When its staircase has
//! no monomial of degree `D − 1`, then `m^{D−1} ⊂ I + m·m^{D−1}`, hence
//! `m^{D−1} ⊂ I` by Nakayama, and the staircase size is `dim O₂/I` exactly.
//! Otherwise `D` is doubled. This is Mora's tangent-cone method with the
//! highest corner found by certification instead of a priori bounds.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::gcd::{gcd, is_reduced_at_origin};
use crate::algebra::{detect_quasi_homogeneity, MPoly, Rational, WeightVector};
use crate::error::GermError;
use crate::germ::MapGerm;

/// Default cap on reduction steps.
pub const DEFAULT_MAX_REDUCTIONS: u64 = 10_000_000;

/// Computation budget with cooperative cancellation.
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_reductions: u64,
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_reductions: DEFAULT_MAX_REDUCTIONS,
            cancel: None,
        }
    }
}

impl Budget {
    pub fn with_max(max_reductions: u64) -> Self {
        Budget {
            max_reductions,
            cancel: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Finite(u64),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<u64> {
        match self {
            Dimension::Finite(d) => Some(d),
            Dimension::Infinite => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Dimension::Finite(d) => s.serialize_u64(*d),
            Dimension::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for Dimension {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Finite(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Finite(n) => Ok(Dimension::Finite(n)),
            Raw::Text(t) if t == "infinite" => Ok(Dimension::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid dimension '{t}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalAlgebraReport {
    pub generators: Vec<MPoly>,
    pub dimension: Dimension,
    /// Exponents `(i, j)` of the monomials `xⁱyʲ` spanning `O₂/I`; empty when
    /// the dimension is infinite.
    pub staircase: Vec<(u32, u32)>,
    /// Reduction steps spent.
    pub reductions: u64,
    /// The power `D` of the maximal ideal the computation worked modulo.
    pub truncation: u32,
}

/// Monomial key ordered so that the first key of a polynomial leads:
/// `(total degree, exponent of y)`.
type Key = (u32, u32);

fn divides(a: Key, b: Key) -> bool {
    a.1 <= b.1 && a.0 - a.1 <= b.0 - b.1
}

fn quotient(b: Key, a: Key) -> Key {
    (b.0 - a.0, b.1 - a.1)
}

#[derive(Debug, Clone)]
struct LocalPoly {
    terms: BTreeMap<Key, Rational>,
}

impl LocalPoly {
    fn from_mpoly(p: &MPoly, bound: u32) -> Self {
        let terms = p
            .terms()
            .filter(|(e, _)| e[0] + e[1] < bound)
            .map(|(e, c)| ((e[0] + e[1], e[1]), c.clone()))
            .collect();
        LocalPoly { terms }
    }

    fn lead(&self) -> Option<(Key, &Rational)> {
        self.terms.iter().next().map(|(k, c)| (*k, c))
    }

    fn make_monic(&mut self) {
        if let Some((_, c)) = self.lead() {
            let inv = c.recip();
            for v in self.terms.values_mut() {
                *v *= &inv;
            }
        }
    }

    /// `self −= c · m · other`, dropping terms of degree `≥ bound`.
    fn sub_scaled(&mut self, c: &Rational, m: Key, other: &LocalPoly, bound: u32) {
        for (k, v) in &other.terms {
            let key = (k.0 + m.0, k.1 + m.1);
            if key.0 >= bound {
                // keys are sorted by degree
                break;
            }
            let delta = c * v;
            match self.terms.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(-delta);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() -= delta;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }
}

struct Meter<'a> {
    budget: &'a Budget,
    used: u64,
}

impl Meter<'_> {
    fn tick(&mut self) -> Result<(), GermError> {
        self.used += 1;
        if self.used > self.budget.max_reductions {
            return Err(GermError::BudgetExhausted(self.budget.max_reductions));
        }
        if self.used % 1024 == 1 {
            if let Some(flag) = &self.budget.cancel {
                if flag.load(Ordering::Relaxed) {
                    return Err(GermError::Cancelled);
                }
            }
        }
        Ok(())
    }
}

fn top_reduce(
    mut h: LocalPoly,
    polys: &[LocalPoly],
    active: &[usize],
    bound: u32,
    meter: &mut Meter<'_>,
) -> Result<LocalPoly, GermError> {
    while let Some((lm, lc)) = h.lead() {
        let Some(g) = active
            .iter()
            .map(|&k| &polys[k])
            .find(|g| divides(g.lead().expect("nonzero").0, lm))
        else {
            break;
        };
        meter.tick()?;
        let (glm, glc) = g.lead().expect("nonzero");
        let c = lc / glc;
        h.sub_scaled(&c, quotient(lm, glm), g, bound);
    }
    Ok(h)
}

fn lcm(a: Key, b: Key) -> Key {
    let y = a.1.max(b.1);
    let x = (a.0 - a.1).max(b.0 - b.1);
    (x + y, y)
}

fn coprime(a: Key, b: Key) -> bool {
    lcm(a, b).0 == a.0 + b.0
}

/// Buchberger state: every polynomial ever kept, the current basis (indices)
/// and the critical pairs ordered by lcm, lowest degree first.
struct StandardBasis {
    polys: Vec<LocalPoly>,
    active: Vec<usize>,
    pairs: BTreeSet<(Key, usize, usize)>,
}

impl StandardBasis {
    fn lm(&self, k: usize) -> Key {
        self.polys[k].lead().expect("nonzero").0
    }

    /// Gebauer–Möller update: adds `h`, keeps only the pairs not covered by
    /// the product and chain criteria, and retires basis elements whose
    /// leading monomial `h` divides.
    fn insert(&mut self, mut h: LocalPoly) {
        h.make_monic();
        let lh = h.lead().expect("nonzero").0;
        let idx = self.polys.len();
        self.polys.push(h);
        let cands: Vec<(usize, Key)> = self
            .active
            .iter()
            .map(|&g| (g, lcm(lh, self.lm(g))))
            .collect();
        let mut kept: Vec<(usize, Key)> = Vec::new();
        for (k, &(g1, l1)) in cands.iter().enumerate() {
            let covered = cands[k + 1..].iter().any(|&(_, l2)| divides(l2, l1))
                || kept.iter().any(|&(_, l2)| divides(l2, l1));
            if coprime(lh, self.lm(g1)) || !covered {
                kept.push((g1, l1));
            }
        }
        let polys = &self.polys;
        let lm = |k: usize| polys[k].lead().expect("nonzero").0;
        self.pairs.retain(|&(l, g1, g2)| {
            !(divides(lh, l) && lcm(lm(g1), lh) != l && lcm(lh, lm(g2)) != l)
        });
        for (g, l) in kept {
            if !coprime(lh, lm(g)) {
                self.pairs.insert((l, g, idx));
            }
        }
        self.active.retain(|&g| !divides(lh, lm(g)));
        self.active.push(idx);
    }
}

/// Leading monomials of a standard basis of `I + m^bound`.
fn leading_ideal(
    gens: &[MPoly],
    bound: u32,
    meter: &mut Meter<'_>,
) -> Result<Vec<Key>, GermError> {
    let mut sb = StandardBasis {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: BTreeSet::new(),
    };
    for g in gens {
        let h = top_reduce(LocalPoly::from_mpoly(g, bound), &sb.polys, &sb.active, bound, meter)?;
        if h.lead().is_some() {
            sb.insert(h);
        }
    }
    while let Some((l, i, j)) = sb.pairs.pop_first() {
        if l.0 >= bound {
            continue;
        }
        let (li, lj) = (sb.lm(i), sb.lm(j));
        let mut s = LocalPoly {
            terms: BTreeMap::new(),
        };
        s.sub_scaled(&-Rational::one(), quotient(l, li), &sb.polys[i], bound);
        s.sub_scaled(&Rational::one(), quotient(l, lj), &sb.polys[j], bound);
        let h = top_reduce(s, &sb.polys, &sb.active, bound, meter)?;
        if h.lead().is_some() {
            sb.insert(h);
        }
    }
    Ok(sb.active.iter().map(|&k| sb.lm(k)).collect())
}

fn staircase(leads: &[Key], bound: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for d in 0..bound {
        for j in 0..=d {
            if !leads.iter().any(|&l| divides(l, (d, j))) {
                out.push((d - j, j));
            }
        }
    }
    out
}

/// Whether the ideal has finite colength at the origin. In two variables this
/// holds iff the gcd of the generators does not vanish at 0.
fn is_zero_dimensional_at_origin(gens: &[MPoly]) -> bool {
    let mut it = gens.iter();
    let Some(first) = it.next() else { return false };
    let g = it.fold(first.clone(), |acc, p| gcd(&acc, p));
    !g.constant_term().is_zero()
}

fn colength(
    gens: &[MPoly],
    budget: &Budget,
    known_finite: Option<bool>,
) -> Result<LocalAlgebraReport, GermError> {
    let gens: Vec<MPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    let mut meter = Meter { budget, used: 0 };
    let report = |dimension, staircase, used, truncation| LocalAlgebraReport {
        generators: gens.clone(),
        dimension,
        staircase,
        reductions: used,
        truncation,
    };
    if gens.iter().any(|g| !g.constant_term().is_zero()) {
        return Ok(report(Dimension::Finite(0), Vec::new(), 0, 0));
    }
    if gens.is_empty() || known_finite == Some(false) {
        return Ok(report(Dimension::Infinite, Vec::new(), 0, 0));
    }
    let mut finiteness = known_finite;
    let start = gens.iter().filter_map(|g| g.order()).min().unwrap_or(1);
    let mut bound = (2 * start + 2).max(8);
    loop {
        let leads = leading_ideal(&gens, bound, &mut meter)?;
        let stairs = staircase(&leads, bound);
        if stairs.iter().all(|&(i, j)| i + j + 1 < bound) {
            let n = stairs.len() as u64;
            return Ok(report(Dimension::Finite(n), stairs, meter.used, bound));
        }
        if bound >= 32 && finiteness.is_none() {
            finiteness = Some(is_zero_dimensional_at_origin(&gens));
        }
        if finiteness == Some(false) {
            return Ok(report(Dimension::Infinite, Vec::new(), meter.used, bound));
        }
        bound *= 2;
    }
}

/// `dim O₂/I` for polynomial generators of `I`.
pub fn local_dimension(ideal: &[MPoly]) -> Result<LocalAlgebraReport, GermError> {
    colength(ideal, &Budget::default(), None)
}

pub fn local_dimension_with(ideal: &[MPoly], budget: &Budget) -> Result<LocalAlgebraReport, GermError> {
    colength(ideal, budget, None)
}

/// `dim K[x,y]/(I + m^n)` by dense elimination on all monomial multiples of
/// the generators. Shares no code with the standard-basis engine and serves
/// as its cross-check; for `n` past the highest corner it equals `dim O₂/I`.
pub fn truncated_colength(ideal: &[MPoly], n: u32) -> u64 {
    let index = |i: u32, j: u32| -> usize {
        let d = (i + j) as usize;
        d * (d + 1) / 2 + j as usize
    };
    let cols = (n as usize) * (n as usize + 1) / 2;
    let mut pivots: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
    for g in ideal {
        for a in 0..n {
            for b in 0..n - a {
                let mut row: BTreeMap<usize, Rational> = BTreeMap::new();
                for (e, c) in g.terms() {
                    let (i, j) = (e[0] + a, e[1] + b);
                    if i + j < n {
                        row.insert(index(i, j), c.clone());
                    }
                }
                // eliminate against existing pivots, lowest column first
                loop {
                    let Some((&col, _)) = row.iter().next() else { break };
                    let Some(prow) = pivots.get(&col) else { break };
                    let factor = row[&col].clone();
                    for (k, v) in prow {
                        let e = row.entry(*k).or_insert_with(Rational::zero);
                        *e -= &factor * v;
                        if e.is_zero() {
                            row.remove(k);
                        }
                    }
                }
                if let Some((&col, lead)) = row.iter().next() {
                    let inv = lead.recip();
                    let normalized: Vec<(usize, Rational)> =
                        row.iter().map(|(k, v)| (*k, v * &inv)).collect();
                    pivots.insert(col, normalized);
                }
            }
        }
    }
    (cols - pivots.len()) as u64
}

/// Milnor number of a quasi-homogeneous isolated plane curve singularity of
/// weighted degree `d` for weights `(a, b)`: `(d − a)(d − b)/(ab)`.
pub fn milnor_qh_plane(wv: &WeightVector) -> Result<u64, GermError> {
    let (a, b) = match wv.weights.as_slice() {
        [a, b] => (*a as i128, *b as i128),
        _ => {
            return Err(GermError::Inconsistency(
                "plane Milnor formula needs two weights".into(),
            ))
        }
    };
    let d = wv
        .degree
        .ok_or_else(|| GermError::Inconsistency("weight vector without degree".into()))? as i128;
    let num = (d - a) * (d - b);
    if num < 0 || num % (a * b) != 0 {
        return Err(GermError::Inconsistency(format!(
            "(d−a)(d−b)/(ab) is not a non-negative integer for d={d}, (a,b)=({a},{b})"
        )));
    }
    Ok((num / (a * b)) as u64)
}

fn jacobian(p: &MPoly) -> [MPoly; 2] {
    [p.derivative(0), p.derivative(1)]
}

/// `μ = dim O₂/⟨∂p/∂x, ∂p/∂y⟩` by the standard-basis engine.
pub fn milnor(p: &MPoly, budget: &Budget) -> Result<Dimension, GermError> {
    let hint = is_reduced_at_origin(p).then_some(true);
    Ok(colength(&jacobian(p), budget, hint)?.dimension)
}

/// `τ = dim O₂/⟨p, ∂p/∂x, ∂p/∂y⟩`.
pub fn tjurina(p: &MPoly, budget: &Budget) -> Result<Dimension, GermError> {
    let [px, py] = jacobian(p);
    let hint = Some(is_reduced_at_origin(p));
    Ok(colength(&[px, py, p.clone()], budget, hint)?.dimension)
}

/// `(μ, τ)` together.
pub fn milnor_tjurina(p: &MPoly, budget: &Budget) -> Result<(Dimension, Dimension), GermError> {
    if !is_reduced_at_origin(p) {
        return Ok((Dimension::Infinite, Dimension::Infinite));
    }
    let [px, py] = jacobian(p);
    let mu = colength(&[px.clone(), py.clone()], budget, Some(true))?;
    let tau = colength(&[px, py, p.clone()], budget, Some(true))?;
    Ok((mu.dimension, tau.dimension))
}

/// The ideal of 2×2 minors of the Jacobian matrix of `f`.
pub fn ramification_ideal(g: &MapGerm) -> Vec<MPoly> {
    let d: Vec<[MPoly; 2]> = g.f.iter().map(jacobian).collect();
    let minor = |i: usize, j: usize| &(&d[i][0] * &d[j][1]) - &(&d[i][1] * &d[j][0]);
    vec![minor(0, 1), minor(0, 2), minor(1, 2)]
}

/// `C(f) = dim O₂/J(f)`, the number of cross-caps in a stabilization.
pub fn crosscap_count(g: &MapGerm, budget: &Budget) -> Result<Dimension, GermError> {
    Ok(colength(&ramification_ideal(g), budget, None)?.dimension)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaitoVerdict {
    pub mu: Dimension,
    pub tau: Dimension,
    /// `μ` came from the weighted-degree formula.
    pub mu_from_weights: bool,
    pub quasi_homogeneous: bool,
}

/// Saito's criterion: an isolated plane curve singularity is
/// quasi-homogeneous in suitable coordinates iff `μ = τ`.
pub fn saito_qh_test(p: &MPoly, budget: &Budget) -> Result<SaitoVerdict, GermError> {
    let (mu, tau, mu_from_weights) = match detect_quasi_homogeneity(p) {
        Some(wv) if is_reduced_at_origin(p) => {
            (Dimension::Finite(milnor_qh_plane(&wv)?), tjurina(p, budget)?, true)
        }
        _ => {
            let (mu, tau) = milnor_tjurina(p, budget)?;
            (mu, tau, false)
        }
    };
    Ok(SaitoVerdict {
        mu,
        tau,
        mu_from_weights,
        quasi_homogeneous: mu == tau && mu != Dimension::Infinite,
    })
}
