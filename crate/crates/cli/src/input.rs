//! Germ and unfolding files.
//!
//! A germ file is TOML with three polynomial strings:
//!
//! ```toml
//! name = "C5"
//! f1 = "x"
//! f2 = "y^2"
//! f3 = "x*y^3 + x^5*y"
//! ```
//!
//! An unfolding file adds `[[unfold]]` tables, each naming a 1-based
//! coordinate, a polynomial and the power of the parameter multiplying it.

use std::path::Path;

use germslice::algebra::{parse_poly, Rational};
use germslice::error::GermError;
use germslice::germ::{MapGerm, XY};
use germslice::unfolding::{AddedTerm, Unfolding};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Germ(#[from] GermError),
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// The three coordinate strings as given, plus an optional name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GermInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub f1: String,
    pub f2: String,
    pub f3: String,
}

impl GermInput {
    pub fn new(f1: &str, f2: &str, f3: &str) -> Self {
        GermInput {
            name: None,
            f1: f1.into(),
            f2: f2.into(),
            f3: f3.into(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, InputError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, InputError> {
        Self::from_toml(&read_file(path)?)
    }

    pub fn germ(&self) -> Result<MapGerm, GermError> {
        MapGerm::parse(&self.f1, &self.f2, &self.f3)
    }

    pub fn label(&self) -> String {
        self.name
            .clone()
            .unwrap_or_else(|| format!("({}, {}, {})", self.f1, self.f2, self.f3))
    }
}

#[derive(Debug, Clone, Deserialize)]
struct AddedTermInput {
    coordinate: usize,
    term: String,
    #[serde(default = "one")]
    power: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
struct UnfoldingFile {
    #[serde(default)]
    name: Option<String>,
    f1: String,
    f2: String,
    f3: String,
    #[serde(default)]
    unfold: Vec<AddedTermInput>,
}

/// Reads a germ file with `[[unfold]]` entries.
pub fn unfolding_from_toml(text: &str) -> Result<(GermInput, Unfolding), InputError> {
    let file: UnfoldingFile = toml::from_str(text)?;
    let input = GermInput {
        name: file.name,
        f1: file.f1,
        f2: file.f2,
        f3: file.f3,
    };
    let mut added = Vec::with_capacity(file.unfold.len());
    for t in file.unfold {
        if !(1..=3).contains(&t.coordinate) {
            return Err(InputError::Invalid(format!(
                "unfold coordinate must be 1, 2 or 3, got {}",
                t.coordinate
            )));
        }
        added.push(AddedTerm {
            coordinate: t.coordinate - 1,
            poly: parse_poly(&t.term, XY).map_err(GermError::from)?,
            power: t.power,
        });
    }
    let unfolding = Unfolding::new(input.germ()?, added)?;
    Ok((input, unfolding))
}

/// Parses `p/q` or an integer.
pub fn parse_rational_arg(s: &str) -> Result<Rational, InputError> {
    germslice::algebra::rational::parse_rational(s.trim())
        .ok_or_else(|| InputError::Invalid(format!("'{s}' is not a rational number")))
}

/// Replaces each `{expr}` in `template` by the value of `expr`, an
/// arithmetic expression in the named parameters.
pub fn instantiate(template: &str, env: &[(String, Rational)]) -> Result<String, InputError> {
    let names: Vec<&str> = env.iter().map(|(n, _)| n.as_str()).collect();
    let point: Vec<Rational> = env.iter().map(|(_, v)| v.clone()).collect();
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| InputError::Invalid(format!("unclosed '{{' in '{template}'")))?
            + open;
        let expr = &rest[open + 1..close];
        let value = parse_poly(expr, &names)
            .map_err(|e| InputError::Invalid(format!("in '{{{expr}}}': {e}")))?
            .eval(&point);
        out.push_str(&value.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use germslice::algebra::{frac, rat};

    #[test]
    fn germ_file() {
        let g = GermInput::from_toml("name = \"cross-cap\"\nf1 = \"x\"\nf2 = \"y^2\"\nf3 = \"x*y\"\n")
            .unwrap();
        assert_eq!(g.label(), "cross-cap");
        assert_eq!(g.germ().unwrap().to_string(), "(x, y^2, x*y)");
        assert!(GermInput::from_toml("f1 = \"x\"").is_err());
    }

    #[test]
    fn templates() {
        let env = vec![("k".to_string(), rat(3)), ("c".to_string(), frac(1, 3))];
        assert_eq!(instantiate("y^3 + x^{k+1}*y", &env).unwrap(), "y^3 + x^4*y");
        assert_eq!(instantiate("{3/2*(k+1)}", &env).unwrap(), "6");
        assert_eq!(instantiate("{c}*y^4", &env).unwrap(), "1/3*y^4");
        assert!(instantiate("x^{k", &env).is_err());
        assert!(instantiate("x^{j}", &env).is_err());
    }

    #[test]
    fn unfolding_file() {
        let text = "f1 = \"x\"\nf2 = \"y^2\"\nf3 = \"x^2*y - x*y^5\"\n\n[[unfold]]\ncoordinate = 3\nterm = \"y^9\"\n";
        let (_, u) = unfolding_from_toml(text).unwrap();
        assert_eq!(u.added.len(), 1);
        assert_eq!(u.added[0].coordinate, 2);
        assert_eq!(u.added[0].power, 1);
        let bad = text.replace("coordinate = 3", "coordinate = 0");
        assert!(unfolding_from_toml(&bad).is_err());
    }
}
