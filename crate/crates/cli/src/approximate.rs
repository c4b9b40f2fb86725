use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use wfa_aak::linalg::singular_values;
use wfa_aak::{
    aak_approximate, build_hankel, spectral_norm, spectral_recover, svd_truncate, Wfa,
    DEFAULT_RANK_TOL,
};

use crate::{CliError, WfaDocument};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Optimal Hankel-norm approximation (one-letter automata only).
    Aak,
    /// Truncated SVD of a finite Hankel block plus spectral recovery.
    Svd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub attained: bool,
    /// Relative to `sigmas[0]`.
    pub tol: f64,
    /// `|achieved_error - sigma_k|`.
    pub gap: f64,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub mode: Mode,
    pub k: usize,
    pub input_states: usize,
    pub output_states: usize,
    /// Evaluation block: prefixes and suffixes of length at most this.
    pub block_length: usize,
    /// Hankel singular values: from Gramians (aak) or of the evaluation block (svd).
    pub sigmas: Vec<f64>,
    /// Optimal error (aak) or truncated-block error `σ_k(H_L)` (svd).
    pub sigma_k: f64,
    /// `‖H_L(f) − H_L(f̂)‖₂` for the written automaton `f̂`.
    pub achieved_error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ApproximationReport {
    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("reports always serialize")
    }
}

/// `‖H_L(f) − H_L(g)‖₂` over prefixes and suffixes of length `<= length`.
pub fn block_error(f: &Wfa, g: &Wfa, length: usize) -> Result<f64, CliError> {
    let hf = build_hankel(f, length, length)?;
    let hg = build_hankel(g, length, length)?;
    Ok(spectral_norm(&(hf.entries() - hg.entries()))?)
}

/// Default evaluation block: a 64 × 64 block for one letter, `(n, n)` otherwise.
fn default_length(f: &Wfa) -> usize {
    if f.alphabet_size() == 1 {
        63
    } else {
        f.num_states()
    }
}

pub fn approximate(
    doc: &WfaDocument,
    k: usize,
    mode: Mode,
    length: Option<usize>,
    tol: f64,
) -> Result<(WfaDocument, ApproximationReport), CliError> {
    let f = doc.to_wfa()?;
    let n = f.num_states();
    if k >= n {
        return Err(CliError::Usage(format!(
            "k = {k} must be smaller than the state count {n}"
        )));
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let length = length.unwrap_or_else(|| default_length(&f));
    let (g, mut report) = match mode {
        Mode::Aak => aak_mode(&f, k, length, tol)?,
        Mode::Svd => svd_mode(&f, k, length)?,
    };
    report.achieved_error = block_error(&f, &g, length)?;
    if let Some(cert) = report.certificate.as_mut() {
        cert.gap = (report.achieved_error - report.sigma_k).abs();
        cert.attained = cert.gap <= tol * report.sigmas[0];
        cert.statement = if cert.attained {
            format!("attained sigma_{k} within {tol:e}")
        } else {
            format!("NOT attained: gap {:e} exceeds {tol:e} x sigma_0", cert.gap)
        };
    }
    let name = Some(format!(
        "{}-{}-k{k}",
        doc.name.as_deref().unwrap_or("wfa"),
        match mode {
            Mode::Aak => "aak",
            Mode::Svd => "svd",
        }
    ));
    let mut out = WfaDocument::from_wfa(&g, &doc.alphabet, name)?;
    if g.num_states() != k {
        out.comment = Some(format!("zero function, stored with {} state", g.num_states()));
    }
    Ok((out, report))
}

fn aak_mode(f: &Wfa, k: usize, length: usize, tol: f64) -> Result<(Wfa, ApproximationReport), CliError> {
    if f.alphabet_size() != 1 {
        return Err(CliError::Usage(format!(
            "aak mode needs a one-letter alphabet (got {} letters): optimal Hankel-norm \
             approximation over larger alphabets is an open problem; use --mode svd",
            f.alphabet_size()
        )));
    }
    let a = aak_approximate(f, k)?;
    let report = ApproximationReport {
        mode: Mode::Aak,
        k,
        input_states: f.num_states(),
        output_states: a.approx_wfa.num_states(),
        block_length: length,
        sigmas: a.sigmas.clone(),
        sigma_k: a.error,
        achieved_error: f64::NAN,
        certificate: Some(Certificate {
            attained: false,
            tol,
            gap: f64::NAN,
            statement: String::new(),
        }),
        warnings: a.warnings.iter().map(|w| format!("{w:?}")).collect(),
    };
    Ok((a.approx_wfa, report))
}

fn svd_mode(f: &Wfa, k: usize, length: usize) -> Result<(Wfa, ApproximationReport), CliError> {
    let h = build_hankel(f, length, length)?;
    let (_, sigma_k) = svd_truncate(&h, k)?;
    let g = spectral_recover(&h, f, k, DEFAULT_RANK_TOL)?;
    let mut sigmas = singular_values(h.entries())?;
    sigmas.truncate(f.num_states());
    let report = ApproximationReport {
        mode: Mode::Svd,
        k,
        input_states: f.num_states(),
        output_states: g.num_states(),
        block_length: length,
        sigmas,
        sigma_k,
        achieved_error: f64::NAN,
        certificate: None,
        warnings: Vec::new(),
    };
    Ok((g, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> WfaDocument {
        WfaDocument::parse(text).unwrap()
    }

    const E1: &str = r#"
alphabet = ["a"]
n = 1
alpha = [1.0]
beta = [1.0]
[[transition]]
symbol = "a"
matrix = [[0.5]]
"#;

    #[test]
    fn geometric_rank_zero() {
        let (out, report) = approximate(&doc(E1), 0, Mode::Aak, None, 1e-6).unwrap();
        assert!((report.sigma_k - 4.0 / 3.0).abs() < 1e-12);
        assert!(report.certificate.unwrap().attained);
        assert!(out.alpha.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn usage_errors() {
        let e = approximate(&doc(E1), 1, Mode::Aak, None, 1e-6).unwrap_err();
        assert!(matches!(e, CliError::Usage(_)));
        let two = E1
            .replace(r#"["a"]"#, r#"["a", "b"]"#)
            .replace("matrix = [[0.5]]", "matrix = [[0.5]]\n[[transition]]\nsymbol = \"b\"\nmatrix = [[0.1]]");
        let two = doc(&two);
        let e = approximate(&two, 0, Mode::Aak, None, 1e-6).unwrap_err();
        assert!(e.to_string().contains("open problem"));
    }
}
