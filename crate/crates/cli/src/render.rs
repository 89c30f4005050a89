//! Plain-text rendering of reports.

use std::fmt::Write;

use germslice::unfolding::{WhitneyReport, WhitneyVerdict};

use crate::report::{AnalysisReport, QhField};

fn list(v: &[u64]) -> String {
    let items: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    format!("[{}]", items.join(", "))
}

pub fn analysis_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "germ          {}", r.input.label());
    let nf = &r.normal_form;
    let _ = writeln!(
        s,
        "normal form   ({}, {}, {})  n = {}, m = {}, beta = {}{}",
        nf.germ[0],
        nf.germ[1],
        nf.germ[2],
        nf.n,
        nf.m.map_or("-".into(), |m| m.to_string()),
        nf.beta,
        if nf.swapped { " (coordinates 2 and 3 exchanged)" } else { "" }
    );
    match &r.qh_signature {
        QhField::Signature(sig) => {
            let _ = writeln!(s, "qh type       {sig}  c = {}, s = {}", sig.c(), nf.s);
        }
        QhField::NotQuasiHomogeneous(t) => {
            let _ = writeln!(s, "qh type       {t}");
        }
    }
    if let Some(dp) = &r.double_point {
        let _ = writeln!(
            s,
            "lambda        {}  ({}reduced)",
            dp.lambda,
            if dp.reduced { "" } else { "not " }
        );
        let _ = writeln!(s, "fin. det.     {}", dp.finitely_determined);
        for (i, c) in dp.components.iter().enumerate() {
            let partner = match (c.partner, c.kind) {
                (Some(p), _) if p == i => " paired within the block".to_string(),
                (Some(p), _) => format!(" paired with #{p}"),
                _ => String::new(),
            };
            let _ = writeln!(
                s,
                "  #{i} {:<20} x{} {:<14} image mult {}{}{}",
                c.factor,
                c.count,
                c.kind.to_string(),
                c.image_multiplicity,
                c.image.as_ref().map_or(String::new(), |im| format!(", {im}")),
                partner
            );
        }
    }
    let inv = &r.invariants;
    if let Some(v) = &inv.saito {
        let _ = writeln!(
            s,
            "mu(D), tau(D) {}, {}  (Saito: {})",
            v.mu,
            v.tau,
            if v.quasi_homogeneous { "mu = tau" } else { "mu != tau" }
        );
    }
    if let Some(c) = &inv.crosscaps {
        let _ = writeln!(s, "C(f)          {c}");
    }
    if let Some(bt) = &r.classifier {
        let _ = writeln!(
            s,
            "classifier    {}  case {}, semigroup <{}>, conductor {}, mu {}",
            list(&bt.exponents),
            bt.case.map_or("-".into(), |c| c.to_string()),
            bt.generators
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(","),
            bt.conductor,
            bt.mu
        );
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(
            s,
            "oracle        {}  {} samples, truncation {}, {}",
            list(&o.exponents),
            o.samples.len(),
            o.truncation,
            if o.stable { "stable" } else { "UNSTABLE" }
        );
    }
    if let Some(a) = r.agreement {
        let _ = writeln!(s, "agreement     {}", if a { "yes" } else { "NO" });
    }
    let _ = writeln!(s, "qh verdict    {}", inv.quasi_homogeneity.verdict);
    for o in &inv.quasi_homogeneity.obstructions {
        let _ = writeln!(s, "  - {o}");
    }
    for d in &r.diagnostics {
        let _ = writeln!(s, "note          {d}");
    }
    if let Some(t) = &r.timings {
        for (stage, ms) in t {
            let _ = writeln!(s, "time          {stage:<14} {ms:>10.1} ms");
        }
    }
    s
}

pub fn whitney_text(r: &WhitneyReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "base type {}  predicted slice {}  mode {:?}",
        r.signature,
        list(&r.predicted_exponents),
        r.mode
    );
    for c in &r.samples {
        let _ = writeln!(
            s,
            "t = {:<6} mu(D) = {:<6} slice {:<12} lambda {}{}",
            c.t.to_string(),
            c.double_point_mu.to_string(),
            list(&c.exponents),
            c.lambda,
            if c.lambda_reduced { "" } else { "  (not reduced)" }
        );
    }
    let verdict = match &r.verdict {
        WhitneyVerdict::Equisingular => {
            "Whitney equisingular: same-degree unfolding, invariants constant at all samples".into()
        }
        WhitneyVerdict::ConstantAtSamples => {
            "upper unfolding: invariants constant at all samples (equisingularity not claimed)"
                .into()
        }
        WhitneyVerdict::NotSameDegree => {
            "rejected: some added term has a different weighted degree".into()
        }
        WhitneyVerdict::Alarm(reasons) => format!("ALARM:\n  {}", reasons.join("\n  ")),
    };
    let _ = writeln!(s, "{verdict}");
    s
}
