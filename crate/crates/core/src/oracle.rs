//! Brute-force slice topology, independent of the closed-form classifier.
//!
//! A plane `H = {X = c₂Y + c₃Z}` never contains the X-axis (the image of
//! `df₀`), so `f⁻¹(H)` is a smooth curve `x = σ(y)`. Substituting gives a
//! parametrization `u ↦ (f₂(σ(u),u), f₃(σ(u),u))` of the slice in the
//! `(Y, Z)` coordinates of `H`. After a random unimodular change of those
//! coordinates, Puiseux normalization and a gcd scan of the exponents give
//! the characteristic exponents.
//!
//! Genericity of `H` is handled statistically: several seeded random planes,
//! each checked under two coordinate mixes and with adaptive truncation,
//! must agree.

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{MPoly, Rational};
use crate::error::{GermError, SeriesError};
use crate::germ::NormalForm;
use crate::series::{normalize_puiseux, Series};

/// The plane `X = c₂Y + c₃Z`, with the seed it was drawn from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicePlane {
    #[serde(with = "rational_string")]
    pub c2: Rational,
    #[serde(with = "rational_string")]
    pub c3: Rational,
    pub seed: Option<u64>,
}

pub(crate) mod rational_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::algebra::rational::parse_rational(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid rational '{s}'")))
    }
}

impl SlicePlane {
    pub fn new(c2: Rational, c3: Rational) -> Self {
        SlicePlane { c2, c3, seed: None }
    }
}

/// `p(σ(u), u)` for a polynomial in `(x, y)`.
fn on_graph(p: &MPoly, sigma: &Series) -> Series {
    let n = sigma.truncation();
    let dx = p.degree_in(0).unwrap_or(0) as usize;
    let mut powers = vec![Series::one(n)];
    for k in 1..=dx {
        let next = &powers[k - 1] * sigma;
        powers.push(next);
    }
    let mut acc = Series::zero(n);
    for (e, c) in p.terms() {
        let t = powers[e[0] as usize].shift_up(e[1] as usize).scale(c);
        acc = &acc + &t;
    }
    acc
}

/// The preimage curve `x = σ(y)` of the plane, modulo `y^N`, by Newton
/// iteration on `F(x, y) = x − c₂f₂ − c₃f₃` with doubling precision.
pub fn solve_preimage(nf: &NormalForm, h: &SlicePlane, n: usize) -> Result<Series, GermError> {
    let f = &nf.germ.f;
    let big_f = &(&f[0] - &f[1].scale(&h.c2)) - &f[2].scale(&h.c3);
    let fx = big_f.derivative(0);
    if !(fx.constant_term() - Rational::one()).is_zero() || !big_f.constant_term().is_zero() {
        return Err(GermError::Inconsistency(
            "the plane is not transverse to the X-axis".into(),
        ));
    }
    // Every term of F other than x lies in m², so σ ≡ 0 mod y².
    let mut prec = 2.min(n);
    let mut sigma = Series::zero(prec);
    while prec < n {
        prec = (2 * prec).min(n);
        let s = Series::new(sigma.coeffs().to_vec(), prec);
        let value = on_graph(&big_f, &s);
        let slope = on_graph(&fx, &s).inverse()?;
        sigma = &s - &(&value * &slope);
    }
    let residual = on_graph(&big_f, &sigma);
    if !residual.is_zero() {
        return Err(GermError::Inconsistency(format!(
            "preimage iteration did not converge: residual {residual}"
        )));
    }
    Ok(sigma)
}

/// `(Y(u), Z(u)) = (f₂(σ(u), u), f₃(σ(u), u))`.
pub fn slice_parametrization(
    nf: &NormalForm,
    h: &SlicePlane,
    n: usize,
) -> Result<(Series, Series), GermError> {
    let sigma = solve_preimage(nf, h, n)?;
    Ok((on_graph(&nf.germ.f[1], &sigma), on_graph(&nf.germ.f[2], &sigma)))
}

/// Result of the gcd scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scan {
    /// The gcd reached 1: the exponents are exact.
    Complete(Vec<u64>),
    /// The truncation ran out first; the exponents found so far.
    Incomplete(Vec<u64>),
}

impl Scan {
    pub fn exponents(&self) -> &[u64] {
        match self {
            Scan::Complete(e) | Scan::Incomplete(e) => e,
        }
    }
}

/// Characteristic exponents of the branch `u ↦ (Y(u), Z(u))`.
///
/// The coordinate of smaller order is normalized to `ψ^{e₀}`; then the
/// support of the other, in increasing order, contributes every exponent not
/// divisible by the running gcd.
pub fn characteristic_exponents(y: &Series, z: &Series) -> Result<Scan, GermError> {
    let (first, second) = match (y.order(), z.order()) {
        (None, None) => return Ok(Scan::Incomplete(Vec::new())),
        (Some(_), None) => (y, z),
        (None, Some(_)) => (z, y),
        (Some(a), Some(b)) if b < a => (z, y),
        _ => (y, z),
    };
    let (e0, normalized) = match normalize_puiseux(first, second) {
        Ok(v) => v,
        Err(SeriesError::VanishesToTruncation) => {
            return Ok(Scan::Incomplete(first.order().map(|o| vec![o as u64]).unwrap_or_default()))
        }
        Err(e) => return Err(e.into()),
    };
    let mut exps = vec![e0 as u64];
    let mut g = e0 as u64;
    for k in normalized.support() {
        if g == 1 {
            break;
        }
        let k = k as u64;
        if k % g != 0 {
            exps.push(k);
            g = g.gcd(&k);
        }
    }
    Ok(if g == 1 {
        Scan::Complete(exps)
    } else {
        Scan::Incomplete(exps)
    })
}

/// An integer matrix of determinant 1.
fn unimodular(rng: &mut ChaCha8Rng) -> [[i64; 2]; 2] {
    let a = nonzero(rng);
    let b = nonzero(rng);
    // [[1, a], [0, 1]] · [[1, 0], [b, 1]]
    [[1 + a * b, a], [b, 1]]
}

fn nonzero(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let v = rng.gen_range(-9..=9);
        if v != 0 {
            return v;
        }
    }
}

fn mix(m: &[[i64; 2]; 2], y: &Series, z: &Series) -> (Series, Series) {
    let r = |v: i64| Rational::from_integer(v.into());
    (
        &y.scale(&r(m[0][0])) + &z.scale(&r(m[0][1])),
        &y.scale(&r(m[1][0])) + &z.scale(&r(m[1][1])),
    )
}

/// One plane examined at one truncation, under two coordinate mixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub plane: SlicePlane,
    pub exponents: Vec<u64>,
    pub truncation: usize,
    /// Both mixes completed the scan and agreed.
    pub complete: bool,
}

/// Exponents of the slice cut by `plane` at a fixed truncation.
pub fn slice_at_plane(
    nf: &NormalForm,
    plane: &SlicePlane,
    n: usize,
    mixes: &[[[i64; 2]; 2]],
) -> Result<SampleRecord, GermError> {
    let (y, z) = slice_parametrization(nf, plane, n)?;
    let mut found: Vec<Scan> = Vec::new();
    if mixes.is_empty() {
        found.push(characteristic_exponents(&y, &z)?);
    }
    for m in mixes {
        let (a, b) = mix(m, &y, &z);
        found.push(characteristic_exponents(&a, &b)?);
    }
    let complete = found.iter().all(|s| matches!(s, Scan::Complete(_)))
        && found.windows(2).all(|w| w[0] == w[1]);
    let exponents = found
        .iter()
        .map(|s| s.exponents().to_vec())
        .max_by_key(|e| e.len())
        .unwrap_or_default();
    Ok(SampleRecord {
        plane: plane.clone(),
        exponents,
        truncation: n,
        complete,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOptions {
    pub samples: usize,
    pub seed: u64,
    /// First truncation tried; 16 when unset. Any truncation at which the
    /// scan completes gives exact exponents, so this only affects cost.
    pub start_truncation: Option<usize>,
    pub max_truncation: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            samples: 5,
            seed: 0x51ce,
            start_truncation: None,
            max_truncation: 4096,
        }
    }
}

impl OracleOptions {
    /// Starts just past the last predicted exponent.
    pub fn expecting(mut self, exponents: &[u64]) -> Self {
        let last = exponents.last().copied().unwrap_or(0) as usize;
        self.start_truncation = Some((last + 1).max(16));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    /// The majority exponent list.
    pub exponents: Vec<u64>,
    /// Largest truncation used.
    pub truncation: usize,
    pub samples: Vec<SampleRecord>,
    /// All samples agree.
    pub stable: bool,
    pub seed: u64,
}

fn sample_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64)
}

/// Adaptive run for one random plane: doubles the truncation until both
/// mixes complete and agree.
fn adaptive_sample(
    nf: &NormalForm,
    seed: u64,
    start: usize,
    cap: usize,
) -> Result<SampleRecord, GermError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c2 = Rational::from_integer(nonzero(&mut rng).into());
    let c3 = Rational::from_integer(nonzero(&mut rng).into());
    let plane = SlicePlane {
        c2,
        c3,
        seed: Some(seed),
    };
    let mixes = [unimodular(&mut rng), unimodular(&mut rng)];
    let mut n = start.min(cap);
    loop {
        let rec = slice_at_plane(nf, &plane, n, &mixes)?;
        if rec.complete || n >= cap {
            return Ok(rec);
        }
        n = (2 * n).min(cap);
    }
}

/// Characteristic exponents of the transversal slice from random planes.
///
/// Fails with [`GermError::Undecided`] when no sample completes below the
/// truncation cap.
pub fn oracle_slice(nf: &NormalForm, opts: &OracleOptions) -> Result<OracleResult, GermError> {
    let start = opts.start_truncation.unwrap_or(16);
    let mut records = Vec::with_capacity(opts.samples);
    for i in 0..opts.samples.max(1) {
        records.push(adaptive_sample(nf, sample_seed(opts.seed, i), start, opts.max_truncation)?);
    }
    let majority = |records: &[SampleRecord]| -> Option<Vec<u64>> {
        let mut counts: Vec<(Vec<u64>, usize)> = Vec::new();
        for r in records.iter().filter(|r| r.complete) {
            match counts.iter_mut().find(|(e, _)| *e == r.exponents) {
                Some((_, c)) => *c += 1,
                None => counts.push((r.exponents.clone(), 1)),
            }
        }
        // ties go to the earliest seed
        counts
            .into_iter()
            .rev()
            .max_by_key(|(_, c)| *c)
            .map(|(e, _)| e)
    };
    let Some(mut winner) = majority(&records) else {
        return Err(GermError::Undecided(opts.max_truncation));
    };
    // Dissenting samples get one more chance at twice the truncation.
    for i in 0..records.len() {
        if records[i].complete && records[i].exponents == winner {
            continue;
        }
        let n = (2 * records[i].truncation).min(opts.max_truncation);
        let mixes = {
            let mut rng = ChaCha8Rng::seed_from_u64(records[i].plane.seed.expect("seeded"));
            nonzero(&mut rng);
            nonzero(&mut rng);
            [unimodular(&mut rng), unimodular(&mut rng)]
        };
        records[i] = slice_at_plane(nf, &records[i].plane.clone(), n, &mixes)?;
    }
    if let Some(w) = majority(&records) {
        winner = w;
    }
    let stable = records.iter().all(|r| r.complete && r.exponents == winner);
    Ok(OracleResult {
        exponents: winner,
        truncation: records.iter().map(|r| r.truncation).max().unwrap_or(0),
        samples: records,
        stable,
        seed: opts.seed,
    })
}

/// Necessary conditions for a finitely determined germ to be
/// quasi-homogeneous in some coordinates: the slice has at most three
/// characteristic exponents, and `μ(D(f)) = τ(D(f))`. Returns the violated
/// conditions; empty means no obstruction was found.
pub fn quasi_homogeneity_obstructions(
    exponents: &[u64],
    milnor_tjurina: Option<(u64, u64)>,
) -> Vec<String> {
    let mut out = Vec::new();
    if exponents.len() > 3 {
        out.push(format!(
            "the transversal slice has {} characteristic exponents (at most 3 for quasi-homogeneous germs)",
            exponents.len()
        ));
    }
    if let Some((mu, tau)) = milnor_tjurina {
        if mu != tau {
            out.push(format!(
                "μ(D(f)) = {mu} ≠ {tau} = τ(D(f)), so D(f) is not quasi-homogeneous"
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::germ::{validate_normal_form, MapGerm};

    fn nf(a: &str, b: &str, c: &str) -> NormalForm {
        validate_normal_form(&MapGerm::parse(a, b, c).unwrap()).unwrap()
    }

    #[test]
    fn preimage_of_the_cross_cap() {
        let plane = SlicePlane::new(rat(2), rat(3));
        let s = solve_preimage(&nf("x", "y^2", "x*y"), &plane, 6).unwrap();
        // x = 2y² + 3xy  ⇒  σ = 2y² + 6y³ + 18y⁴ + 54y⁵ + …
        assert_eq!(s, Series::from_ints(&[0, 0, 2, 6, 18, 54], 6));
        let zero = solve_preimage(&nf("x", "y^2", "x*y"), &SlicePlane::new(rat(0), rat(0)), 6);
        assert!(zero.unwrap().is_zero());
    }

    #[test]
    fn preimage_order_two() {
        let plane = SlicePlane::new(rat(1), rat(1));
        let s = solve_preimage(&nf("x", "y^2", "y^7 + x^2*y"), &plane, 9).unwrap();
        assert_eq!(s.order(), Some(2));
        assert_eq!(s.coeff(2), rat(1));
    }

    #[test]
    fn gcd_scan() {
        let n = 12;
        let scan = |y: &[i64], z: &[i64]| {
            characteristic_exponents(&Series::from_ints(y, n), &Series::from_ints(z, n)).unwrap()
        };
        assert_eq!(scan(&[0, 0, 1], &[0, 0, 0, 1]), Scan::Complete(vec![2, 3]));
        assert_eq!(
            scan(&[0, 0, 0, 0, 1], &[0, 0, 0, 0, 0, 0, 1, 0, 0, 1]),
            Scan::Complete(vec![4, 6, 9])
        );
        assert_eq!(scan(&[0, 0, 0, 1], &[0, 0, 0, 0, 1, 1]), Scan::Complete(vec![3, 4]));
        assert_eq!(scan(&[0, 0, 0, 1], &[0, 0, 1]), Scan::Complete(vec![2, 3]));
        assert_eq!(scan(&[0, 0, 1], &[0, 0, 0, 0, 1]), Scan::Incomplete(vec![2]));
    }

    #[test]
    fn intro_plane_gives_three_four() {
        let g = nf("x", "y^3", "x*y + y^5");
        let rec = slice_at_plane(&g, &SlicePlane::new(rat(1), rat(0)), 16, &[]).unwrap();
        assert!(rec.complete);
        assert_eq!(rec.exponents, vec![3, 4]);
    }

    #[test]
    fn small_oracle_runs() {
        let cases = [
            (("x", "y^2", "x*y"), vec![2, 3]),
            (("x", "y^2", "x^2*y - x*y^5"), vec![2, 5]),
            (("x", "y^3 + x*y", "y^4"), vec![3, 4]),
            (("x", "y^4", "x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6"), vec![4, 6, 9]),
        ];
        for ((a, b, c), expected) in cases {
            let r = oracle_slice(&nf(a, b, c), &OracleOptions::default()).unwrap();
            assert!(r.stable, "{a},{b},{c}");
            assert_eq!(r.exponents, expected, "{a},{b},{c}");
            assert_eq!(r.samples.len(), 5);
        }
    }

    #[test]
    fn degenerate_plane_is_visible() {
        let g = nf("x", "y^2", "x^2*y - x*y^5");
        let rec = slice_at_plane(&g, &SlicePlane::new(rat(0), rat(0)), 64, &[[[1, 0], [0, 1]]]).unwrap();
        assert!(!rec.complete);
        assert_ne!(rec.exponents, vec![2, 5]);
    }

    #[test]
    fn seeds_reproduce() {
        let g = nf("x", "y^2", "x*y");
        let a = oracle_slice(&g, &OracleOptions::default()).unwrap();
        let b = oracle_slice(&g, &OracleOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn obstructions() {
        assert!(quasi_homogeneity_obstructions(&[2, 3], Some((7, 7))).is_empty());
        assert_eq!(quasi_homogeneity_obstructions(&[8, 12, 14, 15], Some((5978, 4575))).len(), 2);
    }
}
