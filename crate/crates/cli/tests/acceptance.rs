//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p germslice-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use germslice::algebra::{frac, parse_poly, MPoly, Rational};
use germslice::classifier::{
    classify_slice, milnor_gamma, milnor_three_exponents, semigroup_of, unified_k, SliceCase,
};
use germslice::doublepoint::{classify_components, lambda_of, ComponentKind, DoublePointCurve};
use germslice::error::GermError;
use germslice::generate::seeded_germ;
use germslice::germ::{
    infer_qh_signature, restriction_to_axis, validate_normal_form, NormalForm, XY,
};
use germslice::invariants::{saito_qh_test, Budget, Dimension};
use germslice::oracle::{oracle_slice, slice_at_plane, OracleOptions, SlicePlane};
use germslice::unfolding::{whitney_report, DegreeMode, WhitneyOptions, WhitneyVerdict};
use germslice_cli::corpus::{load_rows, verify_corpus, VerifyOptions};
use germslice_cli::input::{read_file, unfolding_from_toml};
use germslice_cli::{analyze, AnalyzeOptions, GermInput};

enum Outcome {
    Pass(String),
    Fail(String),
    Skipped(String),
}

type Check = Result<Outcome, String>;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn normal_form(rel: &str) -> Result<NormalForm, String> {
    let input = GermInput::load(&data(rel)).map_err(|e| e.to_string())?;
    let germ = input.germ().map_err(|e| e.to_string())?;
    validate_normal_form(&germ).map_err(|e| e.to_string())
}

fn poly(s: &str) -> MPoly {
    parse_poly(s, XY).expect("valid polynomial")
}

/// `p` equals `q` up to a nonzero constant.
fn same_up_to_unit(p: &MPoly, q: &MPoly) -> bool {
    let (p, q) = (p.primitive_part(), q.primitive_part());
    p == q || p == q.scale(&Rational::from_integer((-1).into()))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("{what} took {:.1} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

fn classified_curve(nf: &NormalForm) -> Result<DoublePointCurve, String> {
    let sig = infer_qh_signature(nf).ok_or("not quasi-homogeneous")?;
    let mut curve = lambda_of(nf, Some(&sig)).map_err(|e| e.to_string())?;
    classify_components(nf, &sig, &mut curve).map_err(|e| e.to_string())?;
    Ok(curve)
}

fn corpus() -> Check {
    let start = Instant::now();
    let rows = load_rows(&data("mond.toml")).map_err(|e| e.to_string())?;
    let outcomes = verify_corpus(&rows, &VerifyOptions::default());
    within(start.elapsed(), Duration::from_secs(30), "corpus")?;
    let failed: Vec<_> = outcomes
        .iter()
        .filter(|o| !o.passed() || o.classifier != o.oracle)
        .map(|o| format!("{}: {}", o.row.input.label(), o.mismatches.join("; ")))
        .collect();
    ensure(failed.is_empty(), failed.join(" | "))?;
    Ok(Outcome::Pass(format!(
        "{}/{} rows, classifier = oracle, {:.1} s",
        outcomes.len(),
        rows.len(),
        start.elapsed().as_secs_f64()
    )))
}

fn h2_oracle() -> Check {
    let nf = normal_form("germs/h2.toml")?;
    let oracle = oracle_slice(&nf, &OracleOptions::default()).map_err(|e| e.to_string())?;
    ensure(oracle.exponents == [3, 4], format!("oracle gave {:?}", oracle.exponents))?;
    Ok(Outcome::Pass("H_2 slice (u^3, u^4): exponents [3, 4]".into()))
}

fn two_branch_fold() -> Check {
    let nf = normal_form("germs/two_branch_fold.toml")?;
    let curve = classified_curve(&nf)?;
    ensure(
        same_up_to_unit(&curve.lambda, &poly("x*(x - y^4)")),
        format!("λ = {}", curve.lambda),
    )?;
    ensure(curve.is_reduced, "λ not reduced, so not finitely determined")?;
    let sig = infer_qh_signature(&nf).ok_or("not QH")?;
    let bt = classify_slice(&sig, restriction_to_axis(&nf).s).map_err(|e| e.to_string())?;
    ensure(bt.exponents == [2, 5], format!("classifier gave {:?}", bt.exponents))?;
    let oracle = oracle_slice(&nf, &OracleOptions::default()).map_err(|e| e.to_string())?;
    ensure(oracle.exponents == [2, 5], format!("oracle gave {:?}", oracle.exponents))?;
    let zero = Rational::from_integer(0.into());
    let plane = SlicePlane::new(zero.clone(), zero);
    let rec = slice_at_plane(&nf, &plane, 64, &[[[1, 0], [0, 1]]]).map_err(|e| e.to_string())?;
    ensure(!rec.complete, "the plane X = 0 should not give a complete scan")?;
    Ok(Outcome::Pass(format!(
        "λ = {}, reduced, [2, 5]; plane X = 0 is not generic (scan incomplete at 64)",
        curve.lambda
    )))
}

fn case_b() -> Check {
    let nf = normal_form("germs/case_b.toml")?;
    let sig = infer_qh_signature(&nf).ok_or("not QH")?;
    let s = restriction_to_axis(&nf).s;
    let bt = classify_slice(&sig, s).map_err(|e| e.to_string())?;
    ensure(bt.exponents == [4, 6, 9], format!("classifier gave {:?}", bt.exponents))?;
    ensure(bt.case == Some(SliceCase::B), format!("case {:?}", bt.case))?;
    let gamma = milnor_gamma(&sig, s).map_err(|e| e.to_string())?;
    let three = milnor_three_exponents(4, 6, 9);
    let gaps = semigroup_of(&[4, 6, 9]).map_err(|e| e.to_string())?.gaps;
    ensure(
        gamma == 18 && three == 18 && 2 * gaps == 18,
        format!("μ: gamma {gamma}, three-exponent formula {three}, 2·gaps {}", 2 * gaps),
    )?;
    let oracle = oracle_slice(&nf, &OracleOptions::default().expecting(&bt.exponents))
        .map_err(|e| e.to_string())?;
    ensure(oracle.exponents == [4, 6, 9], format!("oracle gave {:?}", oracle.exponents))?;
    Ok(Outcome::Pass("[4, 6, 9], case B, μ = 18 three ways, oracle agrees".into()))
}

fn non_qh() -> Check {
    let nf = normal_form("germs/non_qh.toml")?;
    let start = Instant::now();
    let oracle = oracle_slice(&nf, &OracleOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60), "oracle")?;
    ensure(
        oracle.exponents == [8, 12, 14, 15],
        format!("oracle gave {:?}", oracle.exponents),
    )?;
    ensure(infer_qh_signature(&nf).is_none(), "germ was found quasi-homogeneous")?;
    let curve = lambda_of(&nf, None).map_err(|e| e.to_string())?;
    let oracle_line = format!("[8, 12, 14, 15] in {:.1} s", elapsed.as_secs_f64());
    match saito_qh_test(&curve.lambda, &Budget::default()) {
        Ok(v) => {
            ensure(
                v.mu == Dimension::Finite(5978) && v.tau == Dimension::Finite(4575),
                format!("μ = {}, τ = {}", v.mu, v.tau),
            )?;
            ensure(!v.quasi_homogeneous, "Saito's test reports quasi-homogeneous")?;
            Ok(Outcome::Pass(format!(
                "{oracle_line}; μ(D) = 5978 ≠ τ(D) = 4575, not quasi-homogeneous"
            )))
        }
        Err(GermError::BudgetExhausted(_)) => Ok(Outcome::Skipped(format!(
            "{oracle_line}; μ/τ skipped: reduction budget exhausted"
        ))),
        Err(e) => Err(e.to_string()),
    }
}

fn c5_components() -> Check {
    let nf = normal_form("germs/c5.toml")?;
    let curve = classified_curve(&nf)?;
    ensure(
        same_up_to_unit(&curve.lambda, &poly("x*y^2 - x^5")),
        format!("λ = {}", curve.lambda),
    )?;
    let folds: usize = curve
        .components
        .iter()
        .filter(|c| c.kind == ComponentKind::Fold)
        .map(|c| c.count)
        .sum();
    ensure(folds == 1, format!("{folds} fold branches"))?;
    let ids: Vec<_> = curve
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == ComponentKind::Identification)
        .collect();
    ensure(
        ids.iter().map(|(_, c)| c.count).sum::<usize>() == 2,
        "expected two identification branches",
    )?;
    let paired = ids.iter().all(|(i, c)| match c.partner {
        Some(p) if p == *i => c.count == 2,
        Some(p) => curve.components[p].partner == Some(*i) && curve.components[p].image == c.image,
        None => false,
    });
    ensure(paired, "identification branches are not paired with a common image")?;
    let image = ids[0].1.image.clone().unwrap_or_else(|| "-".into());
    Ok(Outcome::Pass(format!(
        "λ = {}; one fold, one identification pair with image {image}",
        curve.lambda
    )))
}

/// Checks (i)–(v) on one random germ; `Ok(None)` when the draw is discarded.
fn random_checks(seed: u64) -> Result<Option<()>, String> {
    let (_, germ) = seeded_germ(seed);
    let Ok(nf) = validate_normal_form(&germ) else { return Ok(None) };
    let Some(sig) = infer_qh_signature(&nf) else { return Ok(None) };
    let Ok(mut curve) = lambda_of(&nf, Some(&sig)) else { return Ok(None) };
    if !curve.is_square_free {
        return Ok(None);
    }
    let ctx = |what: &str| format!("seed {seed}, {} {}: {what}", nf.germ, sig);
    let s = restriction_to_axis(&nf).s;

    // (i) classifier against the oracle
    let bt = classify_slice(&sig, s).map_err(|e| ctx(&e.to_string()))?;
    let opts = OracleOptions { samples: 3, ..OracleOptions::default() }.expecting(&bt.exponents);
    let oracle = oracle_slice(&nf, &opts).map_err(|e| ctx(&e.to_string()))?;
    ensure(oracle.exponents == bt.exponents, ctx("classifier and oracle differ"))?;

    // (ii) weighted type of λ and its decomposition
    let degree = curve.lambda.weighted_degree(&[sig.a, sig.b]).ok_or_else(|| ctx("λ not QH"))?;
    ensure(degree * sig.b == (sig.d2 - sig.b) * (sig.d3 - sig.b), ctx("degree of λ"))?;
    let dec = curve.decomposition.clone().ok_or_else(|| ctx("no decomposition"))?;
    ensure(
        dec.s as u64 * sig.a + dec.v as u64 * sig.b + dec.r * sig.a * sig.b == degree && dec.s <= 1,
        ctx("decomposition of λ"),
    )?;

    // (iii) the axis V(x) and its kind
    classify_components(&nf, &sig, &mut curve).map_err(|e| ctx(&e.to_string()))?;
    if let (Some(m), true) = (nf.m, nf.n > 2) {
        let on_axis = dec.s == 1;
        ensure(on_axis == (gcd(nf.n, m) == 2), ctx("V(x) ⊂ D(f) iff gcd(n, m) = 2"))?;
        if on_axis {
            ensure(sig.b == 1 && sig.a % 2 == 1, ctx("axis component needs b = 1, a odd"))?;
            let x = poly("x");
            let axis = curve.components.iter().find(|c| c.factor == x);
            ensure(
                axis.is_some_and(|c| c.kind == ComponentKind::Fold),
                ctx("V(x) is not a fold"),
            )?;
        }
    }

    // (iv) Milnor number of the slice, and its semigroup recomputed
    let gamma = milnor_gamma(&sig, s).map_err(|e| ctx(&e.to_string()))?;
    ensure(bt.mu == gamma && bt.mu == 2 * bt.gaps && bt.mu == bt.conductor, ctx("μ identities"))?;
    let brute = semigroup_of(&bt.exponents).map_err(|e| ctx(&e.to_string()))?;
    ensure(
        brute.conductor == bt.conductor && brute.generators == bt.generators,
        ctx("semigroup"),
    )?;
    if let [e0, e1] = bt.exponents[..] {
        ensure(bt.mu == (e0 - 1) * (e1 - 1), ctx("μ = (e0 - 1)(e1 - 1)"))?;
        // (v) the single k formula against the case dispatch
        ensure(unified_k(&sig, s).ok() == Some(e1), ctx("unified k"))?;
    } else {
        ensure(bt.case == Some(SliceCase::B), ctx("three exponents outside case B"))?;
    }
    Ok(Some(()))
}

fn random_germs() -> Check {
    const WANTED: usize = 200;
    let start = Instant::now();
    let mut accepted = 0;
    let mut seed = 0u64;
    while accepted < WANTED {
        if seed > 100_000 {
            return Err(format!("only {accepted} usable germs in {seed} draws"));
        }
        if random_checks(seed)?.is_some() {
            accepted += 1;
        }
        seed += 1;
    }
    within(start.elapsed(), Duration::from_secs(300), "random germs")?;
    Ok(Outcome::Pass(format!(
        "{accepted} germs ({seed} draws) pass (i)-(v) in {:.1} s",
        start.elapsed().as_secs_f64()
    )))
}

fn not_finitely_determined() -> Check {
    let input = GermInput::load(&data("germs/not_fd.toml")).map_err(|e| e.to_string())?;
    let analysis = analyze(&input, &AnalyzeOptions::default()).map_err(|e| e.to_string())?;
    ensure(analysis.exit_code() == 1, format!("exit code {}", analysis.exit_code()))?;
    let dp = analysis.report.double_point.as_ref().ok_or("no double point report")?;
    ensure(same_up_to_unit(&poly(&dp.lambda), &poly("x^2")), format!("λ = {}", dp.lambda))?;
    ensure(analysis.report.classifier.is_none(), "classifier produced exponents")?;
    Ok(Outcome::Pass("λ = x^2, exit code 1, classifier refuses".into()))
}

fn unfoldings() -> Check {
    let ts = [frac(1, 1), frac(1, 2), frac(-2, 1)];
    let load = |rel: &str| {
        read_file(&data(rel))
            .and_then(|text| unfolding_from_toml(&text))
            .map(|(_, u)| u)
            .map_err(|e| e.to_string())
    };
    let mut passed = Vec::new();
    for rel in ["unfoldings/b4.toml", "unfoldings/c5.toml", "unfoldings/t4.toml"] {
        let report = whitney_report(&load(rel)?, &ts, &WhitneyOptions::default())
            .map_err(|e| format!("{rel}: {e}"))?;
        ensure(
            report.verdict == WhitneyVerdict::Equisingular,
            format!("{rel}: {:?}", report.verdict),
        )?;
        passed.push(report.signature.to_string());
    }
    let higher = load("unfoldings/b4_higher_degree.toml")?;
    let strict = whitney_report(&higher, &ts, &WhitneyOptions::default()).map_err(|e| e.to_string())?;
    ensure(
        strict.verdict == WhitneyVerdict::NotSameDegree,
        format!("y^10 term accepted in strict mode: {:?}", strict.verdict),
    )?;
    let upper = WhitneyOptions { mode: DegreeMode::Upper, ..WhitneyOptions::default() };
    let loose = whitney_report(&higher, &ts, &upper).map_err(|e| e.to_string())?;
    ensure(
        loose.verdict == WhitneyVerdict::ConstantAtSamples,
        format!("upper mode: {:?}", loose.verdict),
    )?;
    Ok(Outcome::Pass(format!(
        "{} equisingular at t = 1, 1/2, -2; y^10 rejected as same-degree",
        passed.len()
    )))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("corpus of simple germs reproduced", corpus),
        ("H_2 slice exponents from the oracle", h2_oracle),
        ("two-branch fold germ", two_branch_fold),
        ("three-exponent slice (case B)", case_b),
        ("non-quasi-homogeneous germ", non_qh),
        ("C_5 component structure", c5_components),
        ("random quasi-homogeneous germs", random_germs),
        ("non-finitely-determined input", not_finitely_determined),
        ("same-degree unfoldings", unfoldings),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(Ok(o)) => o,
            Ok(Err(msg)) => Outcome::Fail(msg),
            Err(_) => Outcome::Fail("panicked".into()),
        };
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Skipped(d) => ("SKIPPED", d),
        };
        println!("criterion {}: {tag} — {name} ({secs:.1} s): {detail}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
