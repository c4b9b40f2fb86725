//! Plain-text automaton files.
//!
//! ```toml
//! name = "nilpotent"
//! alphabet = ["a", "b"]
//! n = 2
//! alpha = [1.0, 0.0]
//! beta = [0.0, 1.0]
//!
//! [[transition]]
//! symbol = "a"
//! matrix = [[0.0, 1.0], [0.0, 0.0]]
//!
//! [[transition]]
//! symbol = "b"
//! matrix = [[0.0, 0.0], [0.0, 1.0]]
//! ```
//!
//! Floats are written in shortest round-trip form, so parse → write → parse
//! reproduces every number exactly.

use std::collections::HashSet;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use wfa_aak::{Wfa, Word};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WfaDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub alphabet: Vec<String>,
    pub n: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    #[serde(rename = "transition")]
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transition {
    pub symbol: String,
    pub matrix: Vec<Vec<f64>>,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

impl WfaDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: WfaDocument = toml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("documents always serialize")
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_text())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    fn validate(&self) -> Result<(), CliError> {
        let n = self.n;
        if n == 0 {
            return Err(parse_err("n must be at least 1"));
        }
        if self.alphabet.is_empty() {
            return Err(parse_err("alphabet is empty"));
        }
        let mut seen = HashSet::new();
        for label in &self.alphabet {
            if label.is_empty() || label.chars().any(|c| c.is_whitespace() || c == ',') {
                return Err(parse_err(format!("invalid symbol label {label:?}")));
            }
            if label == "ε" {
                return Err(parse_err("ε is reserved for the empty word"));
            }
            if !seen.insert(label) {
                return Err(parse_err(format!("duplicate symbol label {label:?}")));
            }
        }
        if self.alpha.len() != n || self.beta.len() != n {
            return Err(parse_err(format!(
                "alpha has {} and beta {} entries, n = {n}",
                self.alpha.len(),
                self.beta.len()
            )));
        }
        let mut covered = HashSet::new();
        for t in &self.transitions {
            if !seen.contains(&t.symbol) {
                return Err(parse_err(format!("transition for unknown symbol {:?}", t.symbol)));
            }
            if !covered.insert(&t.symbol) {
                return Err(parse_err(format!("two transitions for symbol {:?}", t.symbol)));
            }
            if t.matrix.len() != n || t.matrix.iter().any(|row| row.len() != n) {
                return Err(parse_err(format!("matrix for {:?} is not {n}x{n}", t.symbol)));
            }
        }
        if covered.len() != self.alphabet.len() {
            return Err(parse_err("every symbol needs exactly one transition matrix"));
        }
        let finite = self.alpha.iter().chain(&self.beta).all(|x| x.is_finite())
            && self
                .transitions
                .iter()
                .flat_map(|t| t.matrix.iter().flatten())
                .all(|x| x.is_finite());
        if !finite {
            return Err(parse_err("entries must be finite"));
        }
        Ok(())
    }

    pub fn to_wfa(&self) -> Result<Wfa, CliError> {
        let n = self.n;
        let transitions = self
            .alphabet
            .iter()
            .map(|label| {
                let t = self
                    .transitions
                    .iter()
                    .find(|t| &t.symbol == label)
                    .expect("validated");
                DMatrix::from_fn(n, n, |i, j| t.matrix[i][j])
            })
            .collect();
        Wfa::new(
            DVector::from_column_slice(&self.alpha),
            transitions,
            DVector::from_column_slice(&self.beta),
        )
        .map_err(|e| parse_err(e.to_string()))
    }

    /// Document for `wfa` with the given symbol labels.
    pub fn from_wfa(wfa: &Wfa, alphabet: &[String], name: Option<String>) -> Result<Self, CliError> {
        if alphabet.len() != wfa.alphabet_size() {
            return Err(CliError::Usage(format!(
                "{} labels for an alphabet of size {}",
                alphabet.len(),
                wfa.alphabet_size()
            )));
        }
        let rows = |m: &DMatrix<f64>| {
            (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect()
        };
        Ok(WfaDocument {
            name,
            comment: None,
            alphabet: alphabet.to_vec(),
            n: wfa.num_states(),
            alpha: wfa.alpha().iter().copied().collect(),
            beta: wfa.beta().iter().copied().collect(),
            transitions: alphabet
                .iter()
                .zip(wfa.transitions())
                .map(|(label, m)| Transition {
                    symbol: label.clone(),
                    matrix: rows(m),
                })
                .collect(),
        })
    }

    /// Parses a word over this alphabet.
    ///
    /// `""` and `"ε"` are the empty word. Labels may be separated by spaces or
    /// commas; without separators every character is one label.
    pub fn parse_word(&self, text: &str) -> Result<Word, CliError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::empty());
        }
        let tokens: Vec<String> = if text.contains(|c: char| c.is_whitespace() || c == ',') {
            text.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect()
        } else {
            text.chars().map(String::from).collect()
        };
        tokens
            .iter()
            .map(|t| {
                self.alphabet
                    .iter()
                    .position(|l| l == t)
                    .ok_or_else(|| CliError::Usage(format!("unknown symbol {t:?} in word {text:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NILPOTENT: &str = r#"
name = "nilpotent"
alphabet = ["a", "b"]
n = 2
alpha = [1.0, 0.0]
beta = [0.0, 1.0]

[[transition]]
symbol = "a"
matrix = [[0.0, 1.0], [0.0, 0.0]]

[[transition]]
symbol = "b"
matrix = [[0.0, 0.0], [0.0, 1.0]]
"#;

    #[test]
    fn parses_and_evaluates() {
        let doc = WfaDocument::parse(NILPOTENT).unwrap();
        let f = doc.to_wfa().unwrap();
        assert_eq!(f.evaluate(&doc.parse_word("ab").unwrap()).unwrap(), 1.0);
        assert_eq!(f.evaluate(&doc.parse_word("a b b").unwrap()).unwrap(), 1.0);
        assert_eq!(f.evaluate(&doc.parse_word("").unwrap()).unwrap(), 0.0);
        assert!(matches!(doc.parse_word("ac"), Err(CliError::Usage(_))));
    }

    #[test]
    fn round_trip_is_exact() {
        let doc = WfaDocument::parse(NILPOTENT).unwrap();
        let mut awkward = doc.clone();
        awkward.alpha = vec![0.1 + 0.2, -1.0 / 3.0];
        awkward.transitions[0].matrix[0][1] = std::f64::consts::PI * 1e-17;
        let back = WfaDocument::parse(&awkward.to_text()).unwrap();
        assert_eq!(back, awkward);
        let again = WfaDocument::from_wfa(&back.to_wfa().unwrap(), &back.alphabet, back.name.clone())
            .unwrap();
        assert_eq!(again, back);
    }

    #[test]
    fn rejects_bad_shapes_and_labels() {
        let bad = NILPOTENT.replace("beta = [0.0, 1.0]", "beta = [0.0]");
        assert!(matches!(WfaDocument::parse(&bad), Err(CliError::Parse(_))));
        let dup = NILPOTENT.replace(r#"["a", "b"]"#, r#"["a", "a"]"#);
        assert!(WfaDocument::parse(&dup).is_err());
        let missing = NILPOTENT.replace(r#"symbol = "b""#, r#"symbol = "a""#);
        assert!(WfaDocument::parse(&missing).is_err());
        assert!(WfaDocument::parse("n = 1").is_err());
    }
}
