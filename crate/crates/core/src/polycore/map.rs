use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::mpoly::MPoly;
use super::parse::{parse_poly_list, ParseError};
use crate::error::Error;

/// A polynomial map ℂⁿ → ℂᵐ with named source variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMap {
    vars: Vec<String>,
    components: Vec<MPoly>,
}

impl PolyMap {
    pub fn new(vars: Vec<String>, components: Vec<MPoly>) -> Result<Self, Error> {
        let n = vars.len();
        if components.is_empty() || components.len() > n {
            return Err(Error::InvalidMap(format!(
                "need 1 <= m <= n, got m = {} components for n = {n} variables",
                components.len()
            )));
        }
        if let Some(c) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::ArityMismatch { expected: n, got: c.nvars() });
        }
        Ok(PolyMap { vars, components })
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn components(&self) -> &[MPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &MPoly {
        &self.components[i]
    }

    pub fn evaluate(&self, point: &[num_complex::Complex64]) -> Result<Vec<num_complex::Complex64>, Error> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    /// Canonical text form in the input grammar.
    pub fn to_text(&self) -> String {
        self.components.iter().map(|c| format_poly(c, &self.vars)).collect::<Vec<_>>().join("; ")
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parse `text` as a map over `variables`, e.g. `"z; z*t^2 + w"` over `(z, w, t)`.
pub fn parse_poly_map<S: AsRef<str>>(text: &str, variables: &[S]) -> Result<PolyMap, Error> {
    let comps = parse_poly_list(text, variables)?;
    PolyMap::new(variables.iter().map(|s| s.as_ref().to_string()).collect(), comps)
}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

/// Canonical printing: terms in descending graded-lex order.
pub fn format_poly<S: AsRef<str>>(p: &MPoly, names: &[S]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let mono: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| if e == 1 { names[j].as_ref().to_string() } else { format!("{}^{e}", names[j].as_ref()) })
            .collect();
        let mono = mono.join("*");
        // real and pure imaginary coefficients carry their sign into the joiner
        let negative = c.re.is_negative() && c.im.is_zero() || c.re.is_zero() && c.im.is_negative();
        let mag = if negative { -c.clone() } else { c.clone() };
        let body = if mono.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            mono
        } else if mag.re.is_zero() && mag.im.is_one() {
            format!("i*{mono}")
        } else {
            format!("{mag}*{mono}")
        };
        match (k, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

/// Serializable form of a map: canonical text plus variable names.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MapText {
    pub text: String,
    pub vars: Vec<String>,
}

impl From<&PolyMap> for MapText {
    fn from(g: &PolyMap) -> Self {
        MapText { text: g.to_text(), vars: g.vars.clone() }
    }
}
