//! One-parameter unfoldings `F(x, y, t) = f(x, y) + Σ tᵖ·g(x, y)` of a
//! quasi-homogeneous germ.
//!
//! An unfolding that only adds terms of the same weighted degrees as the
//! coordinates they are added to is Whitney equisingular. That is taken as a
//! theorem; [`whitney_report`] recomputes the invariants it predicts to be
//! constant at a few parameter values, so an implementation error anywhere
//! in the pipeline shows up as an alarm.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{MPoly, Rational, WeightVector};
use crate::classifier::classify_slice;
use crate::doublepoint::lambda_of;
use crate::error::GermError;
use crate::germ::{
    infer_qh_signature, restriction_to_axis, validate_normal_form, MapGerm, NormalForm,
    QHSignature, XY,
};
use crate::invariants::{milnor, Budget, Dimension};
use crate::oracle::{oracle_slice, OracleOptions};

/// A term `tᵖ·g(x, y)` added to one coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddedTerm {
    /// Target coordinate, 0-based.
    pub coordinate: usize,
    pub poly: MPoly,
    pub power: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unfolding {
    pub base: MapGerm,
    pub added: Vec<AddedTerm>,
}

impl Unfolding {
    /// Checks that the added terms vanish at the origin and really depend on
    /// the parameter (`p ≥ 1`), so that `t = 0` gives back the base germ.
    pub fn new(base: MapGerm, added: Vec<AddedTerm>) -> Result<Self, GermError> {
        let mut checked = Vec::with_capacity(added.len());
        for mut term in added {
            if term.coordinate > 2 {
                return Err(GermError::NotInNormalForm(format!(
                    "coordinate index {} out of range (expected 0, 1 or 2)",
                    term.coordinate
                )));
            }
            if term.power == 0 {
                return Err(GermError::NotInNormalForm(
                    "added terms must carry a positive power of the parameter".into(),
                ));
            }
            if term.poly.var_names() != XY {
                term.poly = term.poly.remap(XY)?;
            }
            if !term.poly.constant_term().is_zero() {
                return Err(GermError::NotOriginPreserving);
            }
            checked.push(term);
        }
        Ok(Unfolding { base, added: checked })
    }

    /// The germ `f_t` at a fixed parameter value.
    pub fn at(&self, t: &Rational) -> MapGerm {
        let mut f = self.base.f.clone();
        for term in &self.added {
            let coeff = num_traits::pow(t.clone(), term.power as usize);
            f[term.coordinate] = &f[term.coordinate] + &term.poly.scale(&coeff);
        }
        MapGerm { f }
    }
}

/// Which added terms count as admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    /// Every added term has weighted degree exactly `dᵢ`.
    #[default]
    Strict,
    /// Weighted degrees `≥ dᵢ` are also accepted.
    Upper,
}

/// Whether every added term has the weighted degree of its coordinate (or,
/// in [`DegreeMode::Upper`], at least that degree). The parameter has
/// weight 0.
pub fn is_same_degree_unfolding(u: &Unfolding, sig: &QHSignature, mode: DegreeMode) -> bool {
    let w = [sig.a, sig.b];
    let d = [sig.d1, sig.d2, sig.d3];
    u.added.iter().all(|term| {
        term.poly
            .weighted_degrees(&w)
            .into_iter()
            .all(|deg| match mode {
                DegreeMode::Strict => deg == d[term.coordinate],
                DegreeMode::Upper => deg >= d[term.coordinate],
            })
    })
}

/// Brings `(x + h(y), f₂, f₃)` back to a first coordinate `x` by the source
/// change `x ↦ x − h(y)`.
fn straighten_first_coordinate(g: &MapGerm) -> Result<MapGerm, GermError> {
    let x = MPoly::var(XY, "x")?;
    let h = &g.f[0] - &x;
    if h.is_zero() {
        return Ok(g.clone());
    }
    if h.degree_in(0).unwrap_or(0) > 0 {
        return Err(GermError::NotInNormalForm(format!(
            "first coordinate {} is not of the form x + h(y)",
            g.f[0]
        )));
    }
    let straightened = g.substitute_x(&(&x - &h));
    debug_assert_eq!(straightened.f[0], x);
    Ok(straightened)
}

/// Invariants recomputed at one parameter value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleCheck {
    #[serde(serialize_with = "display")]
    pub t: Rational,
    pub germ: String,
    pub lambda: String,
    pub lambda_reduced: bool,
    pub lambda_qh_type: Option<WeightVector>,
    pub double_point_mu: Dimension,
    pub exponents: Vec<u64>,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "reasons")]
pub enum WhitneyVerdict {
    /// Same-degree unfolding, and every sampled invariant is constant.
    Equisingular,
    /// Accepted only as an upper unfolding: the invariants are constant at
    /// the samples, but equisingularity is not claimed.
    ConstantAtSamples,
    /// The added terms do not have the required degrees; nothing computed.
    NotSameDegree,
    /// Some sampled invariant changed, which contradicts the theorem.
    Alarm(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WhitneyReport {
    pub mode: DegreeMode,
    pub signature: QHSignature,
    /// Closed-form slice exponents of the base germ.
    pub predicted_exponents: Vec<u64>,
    /// `t = 0` first, then the requested samples in order.
    pub samples: Vec<SampleCheck>,
    pub verdict: WhitneyVerdict,
}

#[derive(Debug, Clone, Default)]
pub struct WhitneyOptions {
    pub mode: DegreeMode,
    pub budget: Budget,
    pub oracle: OracleOptions,
}

fn check_at(
    u: &Unfolding,
    t: &Rational,
    opts: &WhitneyOptions,
    predicted: &[u64],
) -> Result<SampleCheck, GermError> {
    let germ = straighten_first_coordinate(&u.at(t))?;
    let nf: NormalForm = validate_normal_form(&germ)?;
    let sig = infer_qh_signature(&nf);
    let curve = lambda_of(&nf, sig.as_ref())?;
    let double_point_mu = milnor(&curve.lambda, &opts.budget)?;
    let oracle = oracle_slice(&nf, &opts.oracle.clone().expecting(predicted))?;
    Ok(SampleCheck {
        t: t.clone(),
        germ: germ.to_string(),
        lambda: curve.lambda.to_string(),
        lambda_reduced: curve.is_reduced,
        lambda_qh_type: curve.qh_type,
        double_point_mu,
        exponents: oracle.exponents,
    })
}

/// Recomputes `λ_t`, `μ(D(f_t))` and the oracle slice exponents at `t = 0`
/// and at each sample, and compares them.
///
/// The base germ must be quasi-homogeneous and finitely determined. In
/// strict mode the quasi-homogeneous type of `λ_t` is also compared; an upper
/// unfolding generally destroys quasi-homogeneity of `f_t`, so there only
/// the topological invariants are.
pub fn whitney_report(
    u: &Unfolding,
    t_samples: &[Rational],
    opts: &WhitneyOptions,
) -> Result<WhitneyReport, GermError> {
    let base = validate_normal_form(&u.base)?;
    let sig = infer_qh_signature(&base).ok_or(GermError::NotQuasiHomogeneous)?;
    let s = restriction_to_axis(&base).s;
    let predicted = classify_slice(&sig, s)?.exponents;
    if !is_same_degree_unfolding(u, &sig, opts.mode) {
        return Ok(WhitneyReport {
            mode: opts.mode,
            signature: sig,
            predicted_exponents: predicted,
            samples: Vec::new(),
            verdict: WhitneyVerdict::NotSameDegree,
        });
    }
    let mut ts = vec![Rational::from_integer(0.into())];
    ts.extend(t_samples.iter().cloned());
    let samples = ts
        .par_iter()
        .map(|t| check_at(u, t, opts, &predicted))
        .collect::<Result<Vec<_>, _>>()?;

    let reference = &samples[0];
    let mut alarms = Vec::new();
    for c in &samples {
        if !c.lambda_reduced {
            alarms.push(format!("λ is not reduced at t = {}: {}", c.t, c.lambda));
        }
        if c.double_point_mu != reference.double_point_mu {
            alarms.push(format!(
                "μ(D(f_t)) = {} at t = {} but {} at t = 0",
                c.double_point_mu, c.t, reference.double_point_mu
            ));
        }
        if c.exponents != predicted {
            alarms.push(format!(
                "slice exponents {:?} at t = {} differ from the predicted {:?}",
                c.exponents, c.t, predicted
            ));
        }
        if opts.mode == DegreeMode::Strict && c.lambda_qh_type != reference.lambda_qh_type {
            alarms.push(format!(
                "quasi-homogeneous type of λ changed at t = {}: {:?} vs {:?}",
                c.t, c.lambda_qh_type, reference.lambda_qh_type
            ));
        }
    }
    let verdict = if !alarms.is_empty() {
        WhitneyVerdict::Alarm(alarms)
    } else if opts.mode == DegreeMode::Strict {
        WhitneyVerdict::Equisingular
    } else {
        WhitneyVerdict::ConstantAtSamples
    };
    Ok(WhitneyReport {
        mode: opts.mode,
        signature: sig,
        predicted_exponents: predicted,
        samples,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, parse_poly, rat};

    fn unfolding(base: (&str, &str, &str), added: &[(usize, &str, u32)]) -> Unfolding {
        let base = MapGerm::parse(base.0, base.1, base.2).unwrap();
        let added = added
            .iter()
            .map(|&(coordinate, p, power)| AddedTerm {
                coordinate,
                poly: parse_poly(p, XY).unwrap(),
                power,
            })
            .collect();
        Unfolding::new(base, added).unwrap()
    }

    fn sig_of(u: &Unfolding) -> QHSignature {
        infer_qh_signature(&validate_normal_form(&u.base).unwrap()).unwrap()
    }

    #[test]
    fn degree_test_follows_weights() {
        let base = ("x", "y^2", "x^2*y - x*y^5");
        let accept = |term: &str, mode| {
            let u = unfolding(base, &[(2, term, 1)]);
            is_same_degree_unfolding(&u, &sig_of(&u), mode)
        };
        assert!(accept("x*y^5", DegreeMode::Strict));
        assert!(accept("y^9", DegreeMode::Strict));
        assert!(!accept("y^10", DegreeMode::Strict));
        assert!(accept("y^10", DegreeMode::Upper));
        assert!(!accept("y^7", DegreeMode::Upper));

        let f4 = unfolding(("x", "y^2", "y^5 + x^3*y"), &[(2, "x*y^3", 1)]);
        assert!(!is_same_degree_unfolding(&f4, &sig_of(&f4), DegreeMode::Strict));
    }

    #[test]
    fn specialization() {
        let u = unfolding(("x", "y^2", "x*y"), &[(2, "y^3", 2)]);
        assert_eq!(u.at(&rat(0)), u.base);
        assert_eq!(u.at(&rat(3)).f[2].to_string(), "9*y^3 + x*y");
        let bad = Unfolding::new(
            u.base.clone(),
            vec![AddedTerm { coordinate: 1, poly: MPoly::one(XY), power: 1 }],
        );
        assert_eq!(bad, Err(GermError::NotOriginPreserving));
    }

    #[test]
    fn first_coordinate_is_straightened() {
        let g = MapGerm::parse("x - y^2", "y^2", "x*y").unwrap();
        let h = straighten_first_coordinate(&g).unwrap();
        assert_eq!(h.to_string(), "(x, y^2, y^3 + x*y)");
        let g = MapGerm::parse("x + x*y", "y^2", "x*y").unwrap();
        assert!(straighten_first_coordinate(&g).is_err());
    }

    #[test]
    fn constant_unfolding_is_equisingular() {
        let u = unfolding(("x", "y^2", "x*y"), &[]);
        let r = whitney_report(&u, &[rat(1)], &WhitneyOptions::default()).unwrap();
        assert_eq!(r.verdict, WhitneyVerdict::Equisingular);
        assert_eq!(r.samples.len(), 2);
    }

    #[test]
    fn same_degree_unfolding_of_example_germ() {
        let u = unfolding(("x", "y^2", "x^2*y - x*y^5"), &[(2, "y^9", 1)]);
        let r = whitney_report(&u, &[rat(1), frac(1, 2), rat(-2)], &WhitneyOptions::default())
            .unwrap();
        assert_eq!(r.verdict, WhitneyVerdict::Equisingular, "{r:#?}");
        assert_eq!(r.predicted_exponents, vec![2, 5]);
        // two smooth branches x = 0, x = y⁴ with contact 4
        assert!(r.samples.iter().all(|c| c.double_point_mu == Dimension::Finite(7)));
    }

    #[test]
    fn degenerate_parameter_value_raises_an_alarm() {
        // at t = 1 the x·y⁵ terms cancel and f₁ = (x, y², x²y) is not
        // finitely determined
        let u = unfolding(("x", "y^2", "x^2*y - x*y^5"), &[(2, "x*y^5", 1)]);
        let ok = whitney_report(&u, &[frac(1, 2), rat(-2)], &WhitneyOptions::default()).unwrap();
        assert_eq!(ok.verdict, WhitneyVerdict::Equisingular);
        let bad = whitney_report(&u, &[rat(1)], &WhitneyOptions::default()).unwrap();
        let WhitneyVerdict::Alarm(reasons) = bad.verdict else {
            panic!("expected an alarm");
        };
        assert!(reasons.iter().any(|r| r.contains("not reduced")));
    }

    #[test]
    fn rejected_unfolding_computes_nothing() {
        let u = unfolding(("x", "y^2", "y^5 + x^3*y"), &[(2, "x*y^3", 1)]);
        let r = whitney_report(&u, &[rat(1)], &WhitneyOptions::default()).unwrap();
        assert_eq!(r.verdict, WhitneyVerdict::NotSameDegree);
        assert!(r.samples.is_empty());
    }

    #[test]
    fn upper_unfolding_in_the_first_coordinate() {
        let u = unfolding(
            ("x", "y^4", "x^5*y - 5*x^3*y^3 + 4*x*y^5 + y^6"),
            &[(0, "-y^4", 1)],
        );
        let strict = whitney_report(&u, &[rat(1)], &WhitneyOptions::default()).unwrap();
        assert_eq!(strict.verdict, WhitneyVerdict::NotSameDegree);
        let opts = WhitneyOptions { mode: DegreeMode::Upper, ..Default::default() };
        let r = whitney_report(&u, &[rat(1), frac(1, 2)], &opts).unwrap();
        assert_eq!(r.verdict, WhitneyVerdict::ConstantAtSamples, "{r:#?}");
        let mu0 = &r.samples[0].double_point_mu;
        assert!(r.samples.iter().all(|c| &c.double_point_mu == mu0));
        assert_eq!(r.predicted_exponents, vec![4, 6, 9]);
    }
}
