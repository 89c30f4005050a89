//! The full analysis of one germ: normal form, double point curve,
//! invariants, closed-form slice classification and the Puiseux oracle.

use std::collections::BTreeMap;
use std::time::Instant;

use germslice::algebra::WeightVector;
use germslice::classifier::{classify_slice, BranchTopology};
use germslice::doublepoint::{classify_components, lambda_of, ComponentKind, DoublePointCurve};
use germslice::error::GermError;
use germslice::germ::{infer_qh_signature, restriction_to_axis, validate_normal_form, QHSignature};
use germslice::invariants::{crosscap_count, saito_qh_test, Budget, Dimension, SaitoVerdict};
use germslice::oracle::{oracle_slice, quasi_homogeneity_obstructions, OracleOptions, OracleResult};
use serde::{Deserialize, Serialize};

use crate::input::GermInput;

/// Bumped whenever the JSON layout changes.
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormReport {
    /// The germ after target normalization.
    pub germ: [String; 3],
    pub n: u32,
    pub m: Option<u32>,
    pub beta: String,
    /// The second and third input coordinates were exchanged.
    pub swapped: bool,
    /// 1 when `f` restricted to `x = 0` is generically two-to-one.
    pub s: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QhField {
    Signature(QHSignature),
    NotQuasiHomogeneous(String),
}

impl QhField {
    pub fn signature(&self) -> Option<&QHSignature> {
        match self {
            QhField::Signature(s) => Some(s),
            QhField::NotQuasiHomogeneous(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub factor: String,
    pub count: usize,
    pub kind: ComponentKind,
    pub partner: Option<usize>,
    pub image_multiplicity: u64,
    pub image: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublePointReport {
    pub lambda: String,
    pub square_free: bool,
    pub reduced: bool,
    pub finitely_determined: bool,
    pub qh_type: Option<WeightVector>,
    /// Exponents of `x` and `y` in `λ` and the number of `(yᵃ − αxᵇ)`
    /// factors, for quasi-homogeneous germs.
    pub s: Option<u32>,
    pub v: Option<u32>,
    pub r: Option<u64>,
    pub components: Vec<ComponentReport>,
}

impl DoublePointReport {
    fn new(curve: &DoublePointCurve) -> Self {
        let dec = curve.decomposition.as_ref();
        DoublePointReport {
            lambda: curve.lambda.to_string(),
            square_free: curve.is_square_free,
            reduced: curve.is_reduced,
            finitely_determined: curve.is_reduced,
            qh_type: curve.qh_type.clone(),
            s: dec.map(|d| d.s),
            v: dec.map(|d| d.v),
            r: dec.map(|d| d.r),
            components: curve
                .components
                .iter()
                .map(|c| ComponentReport {
                    factor: c.factor.to_string(),
                    count: c.count,
                    kind: c.kind,
                    partner: c.partner,
                    image_multiplicity: c.image_multiplicity,
                    image: c.image.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QhVerdict {
    pub verdict: String,
    /// Violated necessary conditions for quasi-homogeneity.
    pub obstructions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    /// `μ(D(f))`, `τ(D(f))` and Saito's test on them.
    pub saito: Option<SaitoVerdict>,
    /// `C(f)`, the colength of the ramification ideal.
    pub crosscaps: Option<Dimension>,
    pub quasi_homogeneity: QhVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: GermInput,
    pub corank: u8,
    pub normal_form: NormalFormReport,
    pub qh_signature: QhField,
    pub double_point: Option<DoublePointReport>,
    pub invariants: InvariantsReport,
    pub classifier: Option<BranchTopology>,
    pub oracle: Option<OracleResult>,
    /// Set only when both the classifier and the oracle produced exponents.
    pub agreement: Option<bool>,
    /// Why a stage was skipped or failed.
    pub diagnostics: Vec<String>,
    /// Milliseconds per stage, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub version: u32,
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub skip_oracle: bool,
    pub oracle: OracleOptions,
    pub budget: Budget,
    pub timings: bool,
}

/// A finished report and the most severe failure met on the way.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: AnalysisReport,
    pub failures: Vec<GermError>,
}

/// Process exit code for an error: 1 for bad or unsupported input, 2 for a
/// mathematical inconsistency, 3 when a computation budget ran out.
pub fn exit_code(e: &GermError) -> i32 {
    match e {
        GermError::Algebra(_)
        | GermError::NotOriginPreserving
        | GermError::UnsupportedCorank(_)
        | GermError::NotInNormalForm(_)
        | GermError::BetaZeroHighMultiplicity(_)
        | GermError::NotFinitelyDetermined(_)
        | GermError::NotQuasiHomogeneous => 1,
        GermError::Inconsistency(_) | GermError::Series(_) => 2,
        GermError::BudgetExhausted(_) | GermError::Cancelled | GermError::Undecided(_) => 3,
    }
}

impl Analysis {
    pub fn exit_code(&self) -> i32 {
        let codes: Vec<i32> = self.failures.iter().map(exit_code).collect();
        [2, 1, 3].into_iter().find(|c| codes.contains(c)).unwrap_or(0)
    }
}

fn fail(e: GermError, failures: &mut Vec<GermError>, diagnostics: &mut Vec<String>) {
    diagnostics.push(e.to_string());
    failures.push(e);
}

struct Clock {
    enabled: bool,
    laps: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.laps
                .insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

/// Runs the pipeline. Errors before a normal form exists (parse errors,
/// wrong corank, malformed normal form) are returned directly; later
/// failures are recorded in the report and in [`Analysis::failures`].
pub fn analyze(input: &GermInput, opts: &AnalyzeOptions) -> Result<Analysis, GermError> {
    let mut clock = Clock {
        enabled: opts.timings,
        laps: BTreeMap::new(),
    };
    let germ = input.germ()?;
    let corank = germ.corank_at_origin();
    let nf = validate_normal_form(&germ)?;
    let s = restriction_to_axis(&nf).s;
    let sig = infer_qh_signature(&nf);
    let mut failures = Vec::new();
    let mut diagnostics = Vec::new();

    let curve = clock.time("double_point", || -> Result<DoublePointCurve, GermError> {
        let mut curve = lambda_of(&nf, sig.as_ref())?;
        if let (Some(sig), true) = (&sig, curve.is_reduced) {
            classify_components(&nf, sig, &mut curve)?;
        }
        Ok(curve)
    });
    let curve = match curve {
        Ok(c) => Some(c),
        Err(e) => {
            fail(e, &mut failures, &mut diagnostics);
            None
        }
    };
    let finitely_determined = curve.as_ref().map(|c| c.is_reduced);

    let saito = curve.as_ref().and_then(|c| {
        match clock.time("saito", || saito_qh_test(&c.lambda, &opts.budget)) {
            Ok(v) => Some(v),
            Err(e) => {
                fail(e, &mut failures, &mut diagnostics);
                None
            }
        }
    });
    let crosscaps = match clock.time("crosscaps", || crosscap_count(&nf.germ, &opts.budget)) {
        Ok(d) => Some(d),
        Err(e) => {
            fail(e, &mut failures, &mut diagnostics);
            None
        }
    };

    let mut classifier = None;
    match (finitely_determined, &sig) {
        (Some(false), _) => fail(
            GermError::NotFinitelyDetermined(format!(
                "the double point curve {} is not reduced; the slice is not classified",
                curve.as_ref().map(|c| c.lambda.to_string()).unwrap_or_default()
            )),
            &mut failures,
            &mut diagnostics,
        ),
        (None, _) => {}
        (Some(true), None) => diagnostics.push(
            "not quasi-homogeneous: the closed-form classification does not apply".into(),
        ),
        (Some(true), Some(sig)) => match clock.time("classifier", || classify_slice(sig, s)) {
            Ok(bt) => classifier = Some(bt),
            Err(e) => fail(e, &mut failures, &mut diagnostics),
        },
    }

    let mut oracle = None;
    if opts.skip_oracle {
        diagnostics.push("oracle skipped on request".into());
    } else if finitely_determined == Some(true) {
        let oracle_opts = match &classifier {
            Some(bt) => opts.oracle.clone().expecting(&bt.exponents),
            None => opts.oracle.clone(),
        };
        match clock.time("oracle", || oracle_slice(&nf, &oracle_opts)) {
            Ok(r) => {
                if !r.stable {
                    diagnostics.push(
                        "oracle samples disagree; the majority exponents are reported".into(),
                    );
                }
                oracle = Some(r)
            }
            Err(e) => fail(e, &mut failures, &mut diagnostics),
        }
    }

    let agreement = match (&classifier, &oracle) {
        (Some(c), Some(o)) => Some(c.exponents == o.exponents),
        _ => None,
    };
    if agreement == Some(false) {
        fail(
            GermError::Inconsistency(format!(
                "classifier exponents {:?} differ from oracle exponents {:?}",
                classifier.as_ref().map(|c| &c.exponents).unwrap(),
                oracle.as_ref().map(|o| &o.exponents).unwrap()
            )),
            &mut failures,
            &mut diagnostics,
        );
    }

    let exponents = oracle
        .as_ref()
        .map(|o| o.exponents.clone())
        .or_else(|| classifier.as_ref().map(|c| c.exponents.clone()));
    let obstructions = quasi_homogeneity_obstructions(
        exponents.as_deref().unwrap_or(&[]),
        saito.and_then(|v| Some((v.mu.finite()?, v.tau.finite()?))),
    );
    let verdict = if let Some(sig) = &sig {
        format!("quasi-homogeneous of type {sig}")
    } else if !obstructions.is_empty() {
        "cannot be quasi-homogeneous".to_string()
    } else {
        "not quasi-homogeneous in the given coordinates; no obstruction found".to_string()
    };

    let report = AnalysisReport {
        input: input.clone(),
        corank,
        normal_form: NormalFormReport {
            germ: nf.germ.f.clone().map(|p| p.to_string()),
            n: nf.n,
            m: nf.m,
            beta: nf.beta.to_string(),
            swapped: nf.swapped,
            s,
        },
        qh_signature: match sig {
            Some(s) => QhField::Signature(s),
            None => QhField::NotQuasiHomogeneous("not QH".into()),
        },
        double_point: curve.as_ref().map(DoublePointReport::new),
        invariants: InvariantsReport {
            saito,
            crosscaps,
            quasi_homogeneity: QhVerdict {
                verdict,
                obstructions,
            },
        },
        classifier,
        oracle,
        agreement,
        diagnostics,
        timings: opts.timings.then_some(clock.laps),
        version: REPORT_VERSION,
    };
    Ok(Analysis { report, failures })
}
