//! Corpus files: germs with their expected type, `c`, `s` and slice
//! exponents. Families indexed by `k` are written once with `{expr}`
//! placeholders and expanded at load time.
//!
//! ```toml
//! [[germ]]
//! name = "S_{k}"
//! k = [1, 3]
//! f2 = "y^2"
//! f3 = "y^3 + x^{k+1}*y"
//! qh_type = [1, "{k+1}", "{3/2*(k+1)}", 1, "{1/2*(k+1)}"]
//! c = 1
//! s = 0
//! exponents = [2, 3]
//! ```
//!
//! Other parameters go in `params` (exact rationals, as strings) with
//! optional forbidden values in `excluded`.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use germslice::algebra::Rational;
use germslice::classifier::classify_slice;
use germslice::doublepoint::lambda_of;
use germslice::error::GermError;
use germslice::germ::{infer_qh_signature, restriction_to_axis, validate_normal_form};
use germslice::oracle::{oracle_slice, OracleOptions};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::input::{instantiate, parse_rational_arg, read_file, GermInput, InputError};

/// An integer, or a template evaluating to one.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Field {
    Int(i64),
    Template(String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    #[serde(default = "default_f1")]
    pub f1: String,
    pub f2: String,
    pub f3: String,
    #[serde(default)]
    pub k: Vec<i64>,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub excluded: BTreeMap<String, Vec<String>>,
    pub qh_type: [Field; 5],
    pub c: Field,
    pub s: Field,
    pub exponents: Vec<Field>,
}

fn default_f1() -> String {
    "x".into()
}

#[derive(Debug, Clone, Deserialize)]
pub struct CorpusFile {
    pub germ: Vec<CorpusEntry>,
}

/// One concrete row with its expected values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusRow {
    pub input: GermInput,
    pub qh_type: [u64; 5],
    pub c: u64,
    pub s: u8,
    pub exponents: Vec<u64>,
}

fn eval_field(f: &Field, env: &[(String, Rational)], what: &str) -> Result<u64, InputError> {
    let text = match f {
        Field::Int(v) => v.to_string(),
        Field::Template(t) => instantiate(t, env)?,
    };
    text.trim()
        .parse::<u64>()
        .map_err(|_| InputError::Invalid(format!("{what} = '{text}' is not a non-negative integer")))
}

impl CorpusEntry {
    fn expand(&self) -> Result<Vec<CorpusRow>, InputError> {
        let mut base: Vec<(String, Rational)> = Vec::new();
        for (name, value) in &self.params {
            let v = parse_rational_arg(value)?;
            if let Some(bad) = self.excluded.get(name) {
                for b in bad {
                    if parse_rational_arg(b)? == v {
                        return Err(InputError::Invalid(format!(
                            "{}: parameter {name} = {v} is one of the excluded values {bad:?}",
                            self.name
                        )));
                    }
                }
            }
            base.push((name.clone(), v));
        }
        let ks: Vec<Option<i64>> = if self.k.is_empty() {
            vec![None]
        } else {
            self.k.iter().copied().map(Some).collect()
        };
        ks.into_iter()
            .map(|k| {
                let mut env = base.clone();
                if let Some(k) = k {
                    env.push(("k".into(), Rational::from_integer(k.into())));
                }
                let qh: Vec<u64> = self
                    .qh_type
                    .iter()
                    .map(|f| eval_field(f, &env, "qh_type entry"))
                    .collect::<Result<_, _>>()?;
                let s = eval_field(&self.s, &env, "s")?;
                Ok(CorpusRow {
                    input: GermInput {
                        name: Some(instantiate(&self.name, &env)?),
                        f1: instantiate(&self.f1, &env)?,
                        f2: instantiate(&self.f2, &env)?,
                        f3: instantiate(&self.f3, &env)?,
                    },
                    qh_type: qh.try_into().expect("five entries"),
                    c: eval_field(&self.c, &env, "c")?,
                    s: u8::try_from(s)
                        .ok()
                        .filter(|&s| s <= 1)
                        .ok_or_else(|| InputError::Invalid(format!("s = {s} must be 0 or 1")))?,
                    exponents: self
                        .exponents
                        .iter()
                        .map(|f| eval_field(f, &env, "exponent"))
                        .collect::<Result<_, _>>()?,
                })
            })
            .collect()
    }
}

pub fn rows_from_toml(text: &str) -> Result<Vec<CorpusRow>, InputError> {
    let file: CorpusFile = toml::from_str(text)?;
    let mut rows = Vec::new();
    for entry in &file.germ {
        rows.extend(entry.expand()?);
    }
    Ok(rows)
}

pub fn load_rows(path: &Path) -> Result<Vec<CorpusRow>, InputError> {
    rows_from_toml(&read_file(path)?)
}

/// What the pipeline found for one row, and how it compares.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowOutcome {
    pub row: CorpusRow,
    pub qh_type: Option<[u64; 5]>,
    pub c: Option<u64>,
    pub s: Option<u8>,
    pub classifier: Option<Vec<u64>>,
    pub oracle: Option<Vec<u64>>,
    pub mismatches: Vec<String>,
    pub millis: u64,
}

impl RowOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub skip_oracle: bool,
    pub oracle: OracleOptions,
}

fn compare<T: PartialEq + std::fmt::Debug>(
    what: &str,
    expected: &T,
    found: &Option<T>,
    out: &mut Vec<String>,
) {
    match found {
        Some(f) if f == expected => {}
        Some(f) => out.push(format!("{what}: expected {expected:?}, found {f:?}")),
        None => out.push(format!("{what}: expected {expected:?}, not computed")),
    }
}

pub fn verify_row(row: &CorpusRow, opts: &VerifyOptions) -> RowOutcome {
    let start = Instant::now();
    let mut out = RowOutcome {
        row: row.clone(),
        qh_type: None,
        c: None,
        s: None,
        classifier: None,
        oracle: None,
        mismatches: Vec::new(),
        millis: 0,
    };
    let result = (|| -> Result<(), GermError> {
        let nf = validate_normal_form(&row.input.germ()?)?;
        let sig = infer_qh_signature(&nf).ok_or(GermError::NotQuasiHomogeneous)?;
        let s = restriction_to_axis(&nf).s;
        out.qh_type = Some(sig.as_array());
        out.c = Some(sig.c());
        out.s = Some(s);
        let curve = lambda_of(&nf, Some(&sig))?;
        if !curve.is_reduced {
            return Err(GermError::NotFinitelyDetermined(format!(
                "double point curve {} is not reduced",
                curve.lambda
            )));
        }
        let bt = classify_slice(&sig, s)?;
        out.classifier = Some(bt.exponents.clone());
        if !opts.skip_oracle {
            let oracle = oracle_slice(&nf, &opts.oracle.clone().expecting(&bt.exponents))?;
            out.oracle = Some(oracle.exponents);
        }
        Ok(())
    })();
    if let Err(e) = result {
        out.mismatches.push(format!("error: {e}"));
    }
    compare("qh_type", &row.qh_type, &out.qh_type, &mut out.mismatches);
    compare("c", &row.c, &out.c, &mut out.mismatches);
    compare("s", &row.s, &out.s, &mut out.mismatches);
    compare("classifier", &row.exponents, &out.classifier, &mut out.mismatches);
    if !opts.skip_oracle {
        compare("oracle", &row.exponents, &out.oracle, &mut out.mismatches);
    }
    out.millis = start.elapsed().as_millis() as u64;
    out
}

/// Verifies all rows concurrently; the output keeps the row order.
pub fn verify_corpus(rows: &[CorpusRow], opts: &VerifyOptions) -> Vec<RowOutcome> {
    rows.par_iter().map(|r| verify_row(r, opts)).collect()
}

/// A fixed-width summary table, one line per row, followed by the diffs of
/// failing rows.
pub fn summary_table(outcomes: &[RowOutcome]) -> String {
    let show = |v: &Option<Vec<u64>>| match v {
        Some(e) => e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
        None => "-".into(),
    };
    let mut s = format!(
        "{:<12} {:<16} {:>2} {:>2} {:<10} {:<10} {:>7}  {}\n",
        "germ", "qh type", "c", "s", "classifier", "oracle", "ms", "status"
    );
    for o in outcomes {
        let qh = o
            .qh_type
            .map(|q| format!("({},{},{};{},{})", q[0], q[1], q[2], q[3], q[4]))
            .unwrap_or_else(|| "-".into());
        s.push_str(&format!(
            "{:<12} {:<16} {:>2} {:>2} {:<10} {:<10} {:>7}  {}\n",
            o.row.input.label(),
            qh,
            o.c.map_or("-".into(), |c| c.to_string()),
            o.s.map_or("-".into(), |c| c.to_string()),
            show(&o.classifier),
            show(&o.oracle),
            o.millis,
            if o.passed() { "ok" } else { "FAIL" }
        ));
    }
    for o in outcomes.iter().filter(|o| !o.passed()) {
        s.push_str(&format!("\n{}:\n", o.row.input.label()));
        for m in &o.mismatches {
            s.push_str(&format!("  {m}\n"));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    s.push_str(&format!("\n{passed}/{} rows match\n", outcomes.len()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const FAMILY: &str = r#"
[[germ]]
name = "S_{k}"
k = [1, 3]
f2 = "y^2"
f3 = "y^3 + x^{k+1}*y"
qh_type = [1, "{k+1}", "{3/2*(k+1)}", 1, "{1/2*(k+1)}"]
c = 1
s = 0
exponents = [2, 3]
"#;

    #[test]
    fn families_expand() {
        let rows = rows_from_toml(FAMILY).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].input.name.as_deref(), Some("S_1"));
        assert_eq!(rows[0].input.f3, "y^3 + x^2*y");
        assert_eq!(rows[0].qh_type, [1, 2, 3, 1, 1]);
        // k = 2 gives a non-integral weight: the even rows use other formulas
        assert!(rows_from_toml(&FAMILY.replace("k = [1, 3]", "k = [2]"))
            .is_err_and(|e| e.to_string().contains("not a non-negative integer")));
    }

    #[test]
    fn excluded_parameters_are_refused() {
        let text = r#"
[[germ]]
name = "P_3"
f2 = "y^3 + x*y"
f3 = "{c}*y^4 + x*y^2"
params = { c = "PLACEHOLDER" }
excluded = { c = ["0", "1/2", "1", "3/2"] }
qh_type = [2, 3, 4, 2, 1]
c = 2
s = 0
exponents = [3, 4]
"#;
        let rows = rows_from_toml(&text.replace("PLACEHOLDER", "2")).unwrap();
        assert_eq!(rows[0].input.f3, "2*y^4 + x*y^2");
        assert!(rows_from_toml(&text.replace("PLACEHOLDER", "3/2")).is_err());
        assert!(rows_from_toml(&text.replace("PLACEHOLDER", "0")).is_err());
    }

    #[test]
    fn mismatches_are_reported() {
        let mut rows = rows_from_toml(FAMILY.replace("k = [1, 3]", "k = [1]").as_str()).unwrap();
        let ok = verify_row(&rows[0], &VerifyOptions::default());
        assert!(ok.passed(), "{:?}", ok.mismatches);
        rows[0].exponents = vec![2, 5];
        let bad = verify_row(&rows[0], &VerifyOptions::default());
        assert_eq!(bad.mismatches.len(), 2);
        assert!(summary_table(&[bad]).contains("FAIL"));
    }
}
