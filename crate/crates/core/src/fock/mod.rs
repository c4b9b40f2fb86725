//! Truncated Fock space over `d` generators.
//!
//! Basis vectors `e_α` are indexed by words `α` of length at most `D` in
//! graded-lexicographic order, the same order used by Hankel blocks. A
//! [`FockVector`] is at once a square-summable sequence over words and the
//! coefficient list of a noncommutative power series `Σ f_α z^α`.
//!
//! Shift-type operators cannot see past degree `D`. Every operation here
//! therefore either refuses input that would be pushed past the cutoff
//! ([`crate::Error::Truncation`]) or, for matrix forms, is only compared on the
//! interior where truncation provably does not interfere.

mod free_group;
mod nc_hankel;
mod rational;
mod shifts;
mod two_sided;
mod verify;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::wfa::Word;
use crate::words::WordIndex;

pub use free_group::{
    free_group_counterexample, FreeGroupReport, FreeGroupVector, FreeLetter, InequalityCase,
    ReducedWord,
};
pub use nc_hankel::{
    flipped_symbol_coefficients, hankel_equation_columns, multiplier_from_flipped_symbol,
    nc_hankel_matrix,
    right_multiplication_matrix, verify_hankel_equation, verify_multiplier_intertwining,
    FlippedSymbol, HankelEquationReport, IntertwiningReport,
};
pub use rational::{
    nc_rational_eval, random_contractive_substitution, ConvergenceDiagnostics,
    NcRationalRealization,
};
pub use shifts::{
    flip, flip_matrix, left_shift, left_shift_adj, left_shift_matrix, right_shift,
    right_shift_adj, right_shift_matrix,
};
pub use two_sided::{bilateral_shift, project_minus, TwoSidedVector};
pub use verify::{verify_shift_inequalities, ShiftInequalityReport};

/// Basis `{e_α : |α| <= D}` of the truncated Fock space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    words: WordIndex,
}

impl FockBasis {
    pub fn new(alphabet_size: usize, degree: usize) -> Result<Self> {
        Ok(FockBasis {
            words: WordIndex::new(alphabet_size, degree)?,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.words.alphabet_size()
    }

    pub fn degree(&self) -> usize {
        self.words.max_length()
    }

    /// `Σ_{k <= D} d^k`.
    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &WordIndex {
        &self.words
    }

    pub fn index_of(&self, symbols: &[usize]) -> Option<usize> {
        self.words.index_of(symbols)
    }
}

/// Coefficients over a [`FockBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    basis: FockBasis,
    coeffs: DVector<f64>,
}

impl FockVector {
    pub fn zeros(basis: &FockBasis) -> Self {
        FockVector {
            basis: basis.clone(),
            coeffs: DVector::zeros(basis.dim()),
        }
    }

    pub fn from_coeffs(basis: &FockBasis, coeffs: DVector<f64>) -> Result<Self> {
        if coeffs.len() != basis.dim() {
            return invalid(format!(
                "{} coefficients for a basis of dimension {}",
                coeffs.len(),
                basis.dim()
            ));
        }
        Ok(FockVector {
            basis: basis.clone(),
            coeffs,
        })
    }

    /// `e_α`.
    pub fn basis_vector(basis: &FockBasis, word: &Word) -> Result<Self> {
        let mut v = Self::zeros(basis);
        match basis.index_of(word.symbols()) {
            Some(i) => v.coeffs[i] = 1.0,
            None => return invalid(format!("word {word} is outside the truncated basis")),
        }
        Ok(v)
    }

    /// Gaussian coefficients on words of length `<= max_degree`, zero above.
    pub fn random<R: Rng>(basis: &FockBasis, max_degree: usize, rng: &mut R) -> Self {
        let cut = basis.words().up_to(max_degree).end;
        let coeffs = DVector::from_fn(basis.dim(), |i, _| {
            if i < cut {
                rng.sample(StandardNormal)
            } else {
                0.0
            }
        });
        FockVector {
            basis: basis.clone(),
            coeffs,
        }
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn coeff(&self, word: &[usize]) -> Option<f64> {
        self.basis.index_of(word).map(|i| self.coeffs[i])
    }

    /// Longest word carrying a nonzero coefficient.
    pub fn support_degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|&c| c != 0.0)
            .map(|i| self.basis.words().length_of(i))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.norm_squared()
    }

    pub fn dot(&self, other: &FockVector) -> f64 {
        self.coeffs.dot(&other.coeffs)
    }

    pub fn add(&self, other: &FockVector) -> Result<FockVector> {
        if self.basis != other.basis {
            return invalid("adding vectors over different bases");
        }
        Ok(FockVector {
            basis: self.basis.clone(),
            coeffs: &self.coeffs + &other.coeffs,
        })
    }

    pub fn scale(&self, s: f64) -> FockVector {
        FockVector {
            basis: self.basis.clone(),
            coeffs: &self.coeffs * s,
        }
    }
}

/// Operator between truncated Fock spaces, as a dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    domain: FockBasis,
    codomain: FockBasis,
    entries: DMatrix<f64>,
}

impl FockMatrix {
    pub fn new(domain: &FockBasis, codomain: &FockBasis, entries: DMatrix<f64>) -> Result<Self> {
        if entries.shape() != (codomain.dim(), domain.dim()) {
            return invalid(format!(
                "matrix shape {:?} does not match ({}, {})",
                entries.shape(),
                codomain.dim(),
                domain.dim()
            ));
        }
        Ok(FockMatrix {
            domain: domain.clone(),
            codomain: codomain.clone(),
            entries,
        })
    }

    pub fn identity(basis: &FockBasis) -> Self {
        FockMatrix {
            domain: basis.clone(),
            codomain: basis.clone(),
            entries: DMatrix::identity(basis.dim(), basis.dim()),
        }
    }

    pub fn domain(&self) -> &FockBasis {
        &self.domain
    }

    pub fn codomain(&self) -> &FockBasis {
        &self.codomain
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.basis() != &self.domain {
            return invalid("vector basis differs from the operator domain");
        }
        FockVector::from_coeffs(&self.codomain, &self.entries * v.coeffs())
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &FockMatrix) -> Result<FockMatrix> {
        if rhs.codomain != self.domain {
            return invalid("composing operators over mismatched bases");
        }
        FockMatrix::new(&rhs.domain, &self.codomain, &self.entries * &rhs.entries)
    }

    /// Adjoint, i.e. the transpose.
    pub fn adjoint(&self) -> FockMatrix {
        FockMatrix {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries: self.entries.transpose(),
        }
    }
}
