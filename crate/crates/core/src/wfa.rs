//! Weighted finite automata over an index alphabet `0..d` with real weights.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::linalg::{dot, row_times_into, spectral_norm, spectral_radius};

/// A finite word, stored as symbol indices. The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Checks every symbol against an alphabet of size `d`.
    pub fn validate(&self, d: usize) -> Result<()> {
        match self.0.iter().find(|&&s| s >= d) {
            Some(s) => invalid(format!("symbol {s} out of range for alphabet of size {d}")),
            None => Ok(()),
        }
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

impl From<&[usize]> for Word {
    fn from(v: &[usize]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    /// Symbols `0..26` print as `a..z`; the empty word prints as `ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for &s in &self.0 {
            if s < 26 {
                write!(f, "{}", (b'a' + s as u8) as char)?;
            } else {
                write!(f, "<{s}>")?;
            }
        }
        Ok(())
    }
}

/// Anything that assigns a real value to every word over `0..d`.
///
/// Hankel blocks and the spectral method only need this view, so a black box
/// can stand in for an automaton.
pub trait SeriesOracle: Sync {
    fn alphabet_size(&self) -> usize;

    /// Value on a word; symbols are assumed to be in range.
    fn value(&self, word: &[usize]) -> f64;
}

/// `f(x) = alpha^T A_{x_1} ... A_{x_t} beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wfa {
    alpha: DVector<f64>,
    beta: DVector<f64>,
    transitions: Vec<DMatrix<f64>>,
}

impl Wfa {
    pub fn new(
        alpha: DVector<f64>,
        transitions: Vec<DMatrix<f64>>,
        beta: DVector<f64>,
    ) -> Result<Self> {
        let n = alpha.len();
        if n == 0 {
            return invalid("an automaton needs at least one state");
        }
        if transitions.is_empty() {
            return invalid("an automaton needs at least one symbol");
        }
        if beta.len() != n {
            return invalid(format!("beta has length {}, expected {n}", beta.len()));
        }
        for (a, m) in transitions.iter().enumerate() {
            if m.shape() != (n, n) {
                return invalid(format!(
                    "transition {a} has shape {:?}, expected ({n}, {n})",
                    m.shape()
                ));
            }
        }
        Ok(Wfa {
            alpha,
            beta,
            transitions,
        })
    }

    /// One-letter automaton `(alpha, A, beta)`.
    pub fn one_letter(alpha: DVector<f64>, a: DMatrix<f64>, beta: DVector<f64>) -> Result<Self> {
        Self::new(alpha, vec![a], beta)
    }

    /// The zero function on `d` symbols with a single state.
    pub fn zero(d: usize) -> Self {
        Wfa {
            alpha: DVector::zeros(1),
            beta: DVector::zeros(1),
            transitions: vec![DMatrix::zeros(1, 1); d.max(1)],
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_states(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    pub fn beta(&self) -> &DVector<f64> {
        &self.beta
    }

    pub fn transitions(&self) -> &[DMatrix<f64>] {
        &self.transitions
    }

    pub fn transition(&self, symbol: usize) -> &DMatrix<f64> {
        &self.transitions[symbol]
    }

    /// `f(x)`; symbols outside the alphabet are an input error.
    pub fn evaluate(&self, x: &Word) -> Result<f64> {
        x.validate(self.alphabet_size())?;
        Ok(self.eval_symbols(x.symbols()))
    }

    fn eval_symbols(&self, x: &[usize]) -> f64 {
        let mut row: Vec<f64> = self.alpha.iter().copied().collect();
        let mut next = vec![0.0; row.len()];
        for &s in x {
            row_times_into(&row, &self.transitions[s], &mut next);
            std::mem::swap(&mut row, &mut next);
        }
        dot(&row, self.beta.as_slice())
    }

    /// Same function with `beta` replaced.
    pub fn with_beta(&self, beta: DVector<f64>) -> Result<Self> {
        Self::new(self.alpha.clone(), self.transitions.clone(), beta)
    }

    /// Same function with `alpha` replaced.
    pub fn with_alpha(&self, alpha: DVector<f64>) -> Result<Self> {
        Self::new(alpha, self.transitions.clone(), self.beta.clone())
    }

    /// `sum_j ||A_j||_2^2`.
    pub fn transition_norm_sq_sum(&self) -> Result<f64> {
        self.transitions
            .iter()
            .map(|a| spectral_norm(a).map(|s| s * s))
            .sum()
    }
}

impl SeriesOracle for Wfa {
    fn alphabet_size(&self) -> usize {
        self.transitions.len()
    }

    fn value(&self, word: &[usize]) -> f64 {
        self.eval_symbols(word)
    }
}

/// Seeded random automaton with contractive transitions.
///
/// For `d == 1` the transition matrix is rescaled to spectral radius `radius_bound`;
/// for `d > 1` the matrices are rescaled so that `sum_j ||A_j||_2^2 == radius_bound`.
pub fn random_stable_wfa(d: usize, n: usize, seed: u64, radius_bound: f64) -> Result<Wfa> {
    if !(radius_bound > 0.0 && radius_bound < 1.0) {
        return invalid(format!("radius bound must lie in (0, 1), got {radius_bound}"));
    }
    if d == 0 || n == 0 {
        return invalid("alphabet size and state count must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut normal = |len: usize| -> Vec<f64> {
        (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let alpha = DVector::from_vec(normal(n));
    let beta = DVector::from_vec(normal(n));
    let mut transitions: Vec<DMatrix<f64>> = (0..d)
        .map(|_| DMatrix::from_vec(n, n, normal(n * n)))
        .collect();

    if d == 1 {
        let rho = spectral_radius(&transitions[0])?;
        if rho > 0.0 {
            transitions[0] *= radius_bound / rho;
        }
    } else {
        let total: f64 = transitions
            .iter()
            .map(|a| spectral_norm(a).map(|s| s * s))
            .sum::<Result<f64>>()?;
        if total > 0.0 {
            let scale = (radius_bound / total).sqrt();
            for a in &mut transitions {
                *a *= scale;
            }
        }
    }
    Wfa::new(alpha, transitions, beta)
}
