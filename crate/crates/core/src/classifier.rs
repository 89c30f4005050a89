//! Closed-form topology of the transversal slice of a quasi-homogeneous
//! finitely determined corank-1 germ of type `(d₁,d₂,d₃; a,b)`.
//!
//! With `n = d₂/b`, `m = d₃/b`, `c = min(a, d₂)` and `s ∈ {0,1}` recording
//! whether `x = 0` lies in the double point curve, the slice `γ` is an
//! irreducible plane curve whose characteristic exponents are:
//!
//! | case | condition | exponents |
//! |---|---|---|
//! | multiplicity 2 | `n = 2` | `2, (d₃−b)c/(ab) + (2b−c)s/b + 1` |
//! | A | `n ≥ 3`, `a ≤ d₂`, `gcd(n,m) = 1` | `n, m` |
//! | B | `n ≥ 3`, `a ≤ d₂`, `gcd(n,m) = 2` (forces `b = 1`) | `d₂, d₃, d₂+d₃−a` |
//! | C | `n ≥ 3`, `a > d₂` | `n, (d₃−b)d₂/(ab) + 1` |
//!
//! and its Milnor number is `μ(γ) = ((d₂−b)(d₃−b)c + sab(d₂−c)) / (ab²)`.
//! In the two-exponent cases `μ = (n−1)(k−1)`, which gives the single formula
//! `k = ((d₂−b)(d₃−b)c + (d₂−c)sab) / (ab(d₂−b)) + 1`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::GermError;
use crate::germ::QHSignature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SliceCase {
    Mult2,
    A,
    B,
    C,
}

impl fmt::Display for SliceCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SliceCase::Mult2 => "multiplicity 2",
            SliceCase::A => "A",
            SliceCase::B => "B",
            SliceCase::C => "C",
        };
        write!(f, "{s}")
    }
}

/// Topological data of an irreducible plane curve germ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchTopology {
    /// Characteristic exponents `e₀ < e₁ < …`.
    pub exponents: Vec<u64>,
    /// `gcd(e₀, e₁)`, or `e₀` for a single exponent.
    pub e: u64,
    /// Minimal generators of the value semigroup.
    pub generators: Vec<u64>,
    pub conductor: u64,
    /// Number of gaps of the semigroup.
    pub gaps: u64,
    pub mu: u64,
    /// Set when produced by the closed-form classification.
    pub case: Option<SliceCase>,
}

fn exact(num: i128, den: i128, what: &str) -> Result<u64, GermError> {
    if den == 0 || num % den != 0 || num / den < 0 {
        return Err(GermError::Inconsistency(format!(
            "{what} = {num}/{den} is not a non-negative integer"
        )));
    }
    Ok((num / den) as u64)
}

fn parts(sig: &QHSignature) -> (i128, i128, i128, i128, i128) {
    (
        sig.d2 as i128,
        sig.d3 as i128,
        sig.a as i128,
        sig.b as i128,
        sig.c() as i128,
    )
}

/// `μ(γ)` from weights and degrees.
pub fn milnor_gamma(sig: &QHSignature, s: u8) -> Result<u64, GermError> {
    let (d2, d3, a, b, c) = parts(sig);
    let s = s as i128;
    exact(
        (d2 - b) * (d3 - b) * c + s * a * b * (d2 - c),
        a * b * b,
        "μ(γ)",
    )
}

/// The second exponent `k` for the two-exponent cases, from the single
/// formula valid for all of them.
pub fn unified_k(sig: &QHSignature, s: u8) -> Result<u64, GermError> {
    let (d2, d3, a, b, c) = parts(sig);
    let s = s as i128;
    if d2 == b {
        return Err(GermError::Inconsistency("multiplicity 1: no singular slice".into()));
    }
    let k1 = exact(
        (d2 - b) * (d3 - b) * c + (d2 - c) * s * a * b,
        a * b * (d2 - b),
        "k − 1",
    )?;
    Ok(k1 + 1)
}

/// Characteristic exponents and semigroup of the slice, by case analysis.
pub fn classify_slice(sig: &QHSignature, s: u8) -> Result<BranchTopology, GermError> {
    let (d2, d3, a, b, c) = parts(sig);
    if d2 % b != 0 {
        return Err(GermError::Inconsistency(format!(
            "d₂ = {d2} is not a multiple of b = {b}"
        )));
    }
    let n = d2 / b;
    let (case, exponents) = if n < 2 {
        return Err(GermError::NotInNormalForm(
            "the slice is smooth: multiplicity 1".into(),
        ));
    } else if n == 2 {
        let s = s as i128;
        let k = exact(
            (d3 - b) * c * b + (2 * b - c) * s * a * b,
            a * b * b,
            "second exponent",
        )? + 1;
        (SliceCase::Mult2, vec![2, k])
    } else {
        if d3 % b != 0 {
            return Err(GermError::Inconsistency(format!(
                "d₃ = {d3} is not a multiple of b = {b}"
            )));
        }
        let m = d3 / b;
        let g = n.gcd(&m);
        if g > 2 {
            return Err(GermError::NotFinitelyDetermined(format!(
                "gcd(n, m) = gcd({n}, {m}) = {g} > 2: x = 0 maps {g}-to-1"
            )));
        }
        if a > d2 {
            let k = exact((d3 - b) * d2, a * b, "second exponent")? + 1;
            (SliceCase::C, vec![n as u64, k])
        } else if g == 1 {
            (SliceCase::A, vec![n as u64, m as u64])
        } else {
            if b != 1 {
                return Err(GermError::Inconsistency(format!(
                    "gcd(n, m) = 2 requires b = 1, found b = {b}"
                )));
            }
            let third = exact(d2 + d3 - a, 1, "third exponent")?;
            (SliceCase::B, vec![d2 as u64, d3 as u64, third])
        }
    };
    let mut bt = semigroup_of(&exponents)?;
    bt.case = Some(case);
    let expected = milnor_gamma(sig, s)?;
    if bt.mu != expected {
        return Err(GermError::Inconsistency(format!(
            "exponents {:?} give μ = {} but the weighted formula gives {}",
            bt.exponents, bt.mu, expected
        )));
    }
    Ok(bt)
}

/// Membership table of the numeric semigroup generated by `gens` on `0..len`.
fn members(gens: &[u64], len: usize) -> Vec<bool> {
    let mut inside = vec![false; len];
    if len > 0 {
        inside[0] = true;
    }
    for v in 1..len {
        inside[v] = gens
            .iter()
            .any(|&g| g as usize <= v && inside[v - g as usize]);
    }
    inside
}

/// Value semigroup from characteristic exponents `β₀ < β₁ < … < β_g`:
/// `v̄₀ = β₀`, `v̄₁ = β₁`, `v̄ᵢ₊₁ = nᵢ v̄ᵢ + βᵢ₊₁ − βᵢ` with `nᵢ = eᵢ₋₁/eᵢ`,
/// `eᵢ = gcd(β₀,…,βᵢ)`. The conductor and gaps are enumerated and checked
/// against `Σ (nᵢ − 1) v̄ᵢ − β₀ + 1`.
pub fn semigroup_of(exponents: &[u64]) -> Result<BranchTopology, GermError> {
    let Some(&e0) = exponents.first() else {
        return Err(GermError::Inconsistency("no characteristic exponents".into()));
    };
    if exponents.windows(2).any(|w| w[0] >= w[1]) {
        return Err(GermError::Inconsistency(format!(
            "characteristic exponents {exponents:?} are not increasing"
        )));
    }
    let mut es = vec![e0];
    for &beta in &exponents[1..] {
        es.push(es.last().copied().expect("nonempty").gcd(&beta));
    }
    if *es.last().expect("nonempty") != 1 {
        return Err(GermError::Inconsistency(format!(
            "characteristic exponents {exponents:?} do not reach gcd 1"
        )));
    }
    if es.windows(2).any(|w| w[0] == w[1]) {
        return Err(GermError::Inconsistency(format!(
            "characteristic exponents {exponents:?} contain a non-characteristic term"
        )));
    }
    let mut gens = vec![e0];
    if exponents.len() > 1 {
        gens.push(exponents[1]);
    }
    for i in 1..exponents.len().saturating_sub(1) {
        let ni = es[i - 1] / es[i];
        gens.push(ni * gens[i] + exponents[i + 1] - exponents[i]);
    }
    let formula: i128 = (1..exponents.len())
        .map(|i| ((es[i - 1] / es[i]) as i128 - 1) * gens[i] as i128)
        .sum::<i128>()
        - e0 as i128
        + 1;
    let formula = formula.max(0) as u64;
    // Every integer ≥ conductor is attained; scan a little past it.
    let len = formula as usize + 2 * e0 as usize + 2;
    let inside = members(&gens, len);
    let conductor = (0..len)
        .rev()
        .find(|&v| !inside[v])
        .map_or(0, |v| v as u64 + 1);
    if conductor != formula {
        return Err(GermError::Inconsistency(format!(
            "semigroup ⟨{gens:?}⟩ has conductor {conductor}, expected {formula}"
        )));
    }
    let gaps = inside[..conductor as usize].iter().filter(|&&x| !x).count() as u64;
    if 2 * gaps != conductor {
        return Err(GermError::Inconsistency(format!(
            "semigroup ⟨{gens:?}⟩ is not symmetric: {gaps} gaps, conductor {conductor}"
        )));
    }
    Ok(BranchTopology {
        exponents: exponents.to_vec(),
        e: es.get(1).copied().unwrap_or(e0),
        generators: gens,
        conductor,
        gaps,
        mu: conductor,
        case: None,
    })
}

/// `μ = (e₂−e₁)e + (e₁−1)e₀ − e₂ + 1` for three characteristic exponents.
pub fn milnor_three_exponents(e0: u64, e1: u64, e2: u64) -> u64 {
    let e = e0.gcd(&e1);
    (e2 - e1) * e + (e1 - 1) * e0 + 1 - e2
}
