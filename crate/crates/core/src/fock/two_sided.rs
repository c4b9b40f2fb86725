//! `H = F₀² ⊕ F²`: a negative part indexed by nonempty words and a
//! positive part indexed by all words, each truncated at degree `D`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::{right_shift, FockBasis, FockVector};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedVector {
    basis: FockBasis,
    // index i holds the word at basis index i + 1
    negative: DVector<f64>,
    positive: DVector<f64>,
}

impl TwoSidedVector {
    pub fn zeros(basis: &FockBasis) -> Self {
        TwoSidedVector {
            basis: basis.clone(),
            negative: DVector::zeros(basis.dim() - 1),
            positive: DVector::zeros(basis.dim()),
        }
    }

    /// Embeds a vector of `F²` as the positive component.
    pub fn from_positive(v: &FockVector) -> Self {
        let mut out = Self::zeros(v.basis());
        out.positive.copy_from(v.coeffs());
        out
    }

    /// `e_α` in the negative component; `α` must be nonempty.
    pub fn negative_basis_vector(basis: &FockBasis, word: &[usize]) -> Result<Self> {
        let idx = match basis.index_of(word) {
            Some(0) => return invalid("the negative part has no empty word"),
            Some(i) => i,
            None => return invalid("word outside the truncated basis"),
        };
        let mut out = Self::zeros(basis);
        out.negative[idx - 1] = 1.0;
        Ok(out)
    }

    /// Gaussian coefficients: negative part on all nonempty words, positive part up to `positive_degree`.
    pub fn random<R: Rng>(basis: &FockBasis, positive_degree: usize, rng: &mut R) -> Self {
        let pos = FockVector::random(basis, positive_degree, rng);
        let neg = FockVector::random(basis, basis.degree(), rng);
        TwoSidedVector {
            basis: basis.clone(),
            negative: neg.coeffs().rows(1, basis.dim() - 1).into_owned(),
            positive: pos.coeffs().clone(),
        }
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn negative(&self) -> &DVector<f64> {
        &self.negative
    }

    pub fn positive(&self) -> FockVector {
        FockVector::from_coeffs(&self.basis, self.positive.clone()).expect("matching dimension")
    }

    pub fn norm_squared(&self) -> f64 {
        self.negative.norm_squared() + self.positive.norm_squared()
    }

    pub fn add(&self, other: &TwoSidedVector) -> Result<TwoSidedVector> {
        if self.basis != other.basis {
            return invalid("adding vectors over different bases");
        }
        Ok(TwoSidedVector {
            basis: self.basis.clone(),
            negative: &self.negative + &other.negative,
            positive: &self.positive + &other.positive,
        })
    }

    /// Negative coefficients followed by positive ones.
    pub fn flatten(&self) -> DVector<f64> {
        let mut v = DVector::zeros(self.negative.len() + self.positive.len());
        v.rows_mut(0, self.negative.len()).copy_from(&self.negative);
        v.rows_mut(self.negative.len(), self.positive.len())
            .copy_from(&self.positive);
        v
    }

    /// Matrix of `P₋` in the [`flatten`](Self::flatten) coordinates.
    pub fn projection_matrix(basis: &FockBasis) -> DMatrix<f64> {
        let neg = basis.dim() - 1;
        let total = neg + basis.dim();
        DMatrix::from_fn(total, total, |i, j| if i == j && i < neg { 1.0 } else { 0.0 })
    }
}

/// `P₋`: keeps the negative component, zeroes the positive one.
pub fn project_minus(h: &TwoSidedVector) -> TwoSidedVector {
    TwoSidedVector {
        basis: h.basis.clone(),
        negative: h.negative.clone(),
        positive: DVector::zeros(h.positive.len()),
    }
}

/// Bilateral shift `R̄_i`: `R_i` on the positive part, `R_i^*` on the negative part.
///
/// On the negative part `e_{α'i}` goes to `e_{α'}` (landing on `e_ε` in the
/// positive part when `α'` is empty) and words not ending in `i` are annihilated.
pub fn bilateral_shift(i: usize, h: &TwoSidedVector) -> Result<TwoSidedVector> {
    let basis = &h.basis;
    let pos = right_shift(i, &h.positive())?;
    let mut out = TwoSidedVector {
        basis: basis.clone(),
        negative: DVector::zeros(h.negative.len()),
        positive: pos.coeffs().clone(),
    };
    for (k, &c) in h.negative.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let word = basis.words().symbols(k + 1);
        if word.last() == Some(&i) {
            let stem = &word[..word.len() - 1];
            if stem.is_empty() {
                out.positive[0] += c;
            } else {
                let t = basis.index_of(stem).expect("shorter word stays in range");
                out.negative[t - 1] += c;
            }
        }
    }
    Ok(out)
}
