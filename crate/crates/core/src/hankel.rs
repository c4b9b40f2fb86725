//! Finite blocks of the Hankel matrix `H_f(p, s) = f(ps)`, their numerical
//! rank, the SVD truncation baseline, and spectral-method recovery of an
//! automaton from a block.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::linalg::Svd;
use crate::par;
use crate::wfa::{SeriesOracle, Wfa, Word};
use crate::words::WordIndex;

/// Largest block the builders will allocate.
pub const MAX_BLOCK_ENTRIES: usize = 10_000_000;

/// Default relative rank tolerance: singular values below `1e-9 * sigma_max` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// A `|prefixes| x |suffixes|` block with rows and columns indexed by words.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelBlock {
    prefixes: WordIndex,
    suffixes: WordIndex,
    entries: DMatrix<f64>,
}

impl HankelBlock {
    /// Wraps an arbitrary matrix; the Hankel constraint is not checked here
    /// (see [`check_hankel_property`]).
    pub fn from_parts(
        prefixes: WordIndex,
        suffixes: WordIndex,
        entries: DMatrix<f64>,
    ) -> Result<Self> {
        if prefixes.alphabet_size() != suffixes.alphabet_size() {
            return invalid("prefix and suffix alphabets differ");
        }
        if entries.shape() != (prefixes.len(), suffixes.len()) {
            return invalid(format!(
                "entries have shape {:?}, index sets need ({}, {})",
                entries.shape(),
                prefixes.len(),
                suffixes.len()
            ));
        }
        Ok(HankelBlock {
            prefixes,
            suffixes,
            entries,
        })
    }

    pub fn prefixes(&self) -> &WordIndex {
        &self.prefixes
    }

    pub fn suffixes(&self) -> &WordIndex {
        &self.suffixes
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn alphabet_size(&self) -> usize {
        self.prefixes.alphabet_size()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.entries.shape()
    }

    /// Same index sets, different entries.
    pub fn with_entries(&self, entries: DMatrix<f64>) -> Result<Self> {
        Self::from_parts(self.prefixes.clone(), self.suffixes.clone(), entries)
    }
}

fn guard(rows: usize, cols: usize) -> Result<()> {
    match rows.checked_mul(cols) {
        Some(e) if e <= MAX_BLOCK_ENTRIES => Ok(()),
        Some(e) => Err(Error::TooLarge {
            entries: e,
            limit: MAX_BLOCK_ENTRIES,
        }),
        None => Err(Error::TooLarge {
            entries: usize::MAX,
            limit: MAX_BLOCK_ENTRIES,
        }),
    }
}

/// Fills `M(p, s) = f(p · infix · s)` over the given index sets.
pub(crate) fn fill_block<O: SeriesOracle + ?Sized>(
    oracle: &O,
    prefixes: &WordIndex,
    suffixes: &WordIndex,
    infix: &[usize],
) -> Result<DMatrix<f64>> {
    let rows = prefixes.len();
    let cols = suffixes.len();
    guard(rows, cols)?;
    let suffix_words: Vec<Vec<usize>> = suffixes.words().collect();
    let mut data = vec![0.0; rows * cols];
    par::fill_chunks(&mut data, cols, |r, row| {
        let mut word = prefixes.symbols(r);
        word.extend_from_slice(infix);
        let base = word.len();
        for (c, slot) in row.iter_mut().enumerate() {
            word.truncate(base);
            word.extend_from_slice(&suffix_words[c]);
            *slot = oracle.value(&word);
        }
    });
    Ok(DMatrix::from_row_slice(rows, cols, &data))
}

/// Block of `H_f` over prefixes of length `<= max_prefix` and suffixes of length `<= max_suffix`.
pub fn build_hankel_from<O: SeriesOracle + ?Sized>(
    oracle: &O,
    max_prefix: usize,
    max_suffix: usize,
) -> Result<HankelBlock> {
    let d = oracle.alphabet_size();
    let prefixes = WordIndex::new(d, max_prefix)?;
    let suffixes = WordIndex::new(d, max_suffix)?;
    let entries = fill_block(oracle, &prefixes, &suffixes, &[])?;
    HankelBlock::from_parts(prefixes, suffixes, entries)
}

pub fn build_hankel(wfa: &Wfa, max_prefix: usize, max_suffix: usize) -> Result<HankelBlock> {
    build_hankel_from(wfa, max_prefix, max_suffix)
}

/// Number of singular values above `tol * sigma_max` (0 for the zero block).
pub fn hankel_rank(h: &HankelBlock, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return invalid(format!("rank tolerance must be positive, got {tol}"));
    }
    Ok(Svd::new(h.entries())?.rank(tol))
}

/// Best rank-`k` approximation of the block in spectral norm and its error
/// `sigma_k` (zero once `k` reaches the rank). The result is generally not Hankel.
pub fn svd_truncate(h: &HankelBlock, k: usize) -> Result<(DMatrix<f64>, f64)> {
    let (r, c) = h.shape();
    if k > r.min(c) {
        return invalid(format!("k = {k} exceeds min{:?}", h.shape()));
    }
    let svd = Svd::new(h.entries())?;
    let err = svd.singular_values.get(k).copied().unwrap_or(0.0);
    Ok((svd.truncated(k), err))
}

/// Spectral-method recovery of a `k`-state automaton from a Hankel block.
///
/// With `H ≈ U_k D_k V_k^T`, the factorization `P = U_k D_k^{1/2}`,
/// `S = D_k^{1/2} V_k^T` gives
/// `A_a = D^{-1/2} U^T H_a V D^{-1/2}`, `alpha = D^{-1/2} V^T H(ε, :)^T` and
/// `beta = D^{-1/2} U^T H(:, ε)`. The shifted blocks `H_a(p, s) = f(pas)` are
/// filled from `oracle` over the block's own index sets.
pub fn spectral_recover<O: SeriesOracle + ?Sized>(
    h: &HankelBlock,
    oracle: &O,
    k: usize,
    tol: f64,
) -> Result<Wfa> {
    let d = h.alphabet_size();
    if oracle.alphabet_size() != d {
        return invalid("oracle alphabet differs from the block's");
    }
    if k == 0 {
        return Ok(Wfa::zero(d));
    }
    let (r, c) = h.shape();
    if k > r.min(c) {
        return invalid(format!("k = {k} exceeds min{:?}", h.shape()));
    }
    let svd = Svd::new(h.entries())?;
    let smax = svd.sigma_max();
    let sk = svd.singular_values[k - 1];
    if smax == 0.0 || sk <= tol * smax {
        return Err(Error::Degenerate(format!(
            "singular value {} = {sk:e} is below tolerance {:e}; block has numerical rank {}",
            k - 1,
            tol * smax,
            svd.rank(tol)
        )));
    }
    let u = svd.u.columns(0, k).into_owned();
    let v = svd.v_t.rows(0, k).transpose();
    let inv_sqrt = DVector::from_iterator(k, svd.singular_values.rows(0, k).iter().map(|s| 1.0 / s.sqrt()));
    let scale = DMatrix::from_diagonal(&inv_sqrt);

    let left = &scale * u.transpose();
    let right = &v * &scale;

    let eps_row = h.entries().row(0).transpose();
    let eps_col = h.entries().column(0).into_owned();
    let alpha = &scale * (v.transpose() * eps_row);
    let beta = &left * eps_col;

    let transitions = (0..d)
        .map(|a| {
            let ha = fill_block(oracle, h.prefixes(), h.suffixes(), &[a])?;
            Ok(&left * ha * &right)
        })
        .collect::<Result<Vec<_>>>()?;
    Wfa::new(alpha, transitions, beta)
}

/// Outcome of a Hankel-constraint scan.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelCheck {
    pub holds: bool,
    /// Largest disagreement between two factorizations of the same word.
    pub max_violation: f64,
    /// First violating pair `(p, s, p', s')` with `ps = p's'`.
    pub witness: Option<(Word, Word, Word, Word)>,
}

/// Checks `H(p, s) = H(p', s')` whenever `ps = p's'`, within absolute `tol`.
pub fn check_hankel_property(h: &HankelBlock, tol: f64) -> HankelCheck {
    let mut first: HashMap<Vec<usize>, (usize, usize, f64)> = HashMap::new();
    let mut max_violation = 0.0f64;
    let mut witness = None;
    let suffix_words: Vec<Vec<usize>> = h.suffixes().words().collect();
    for r in 0..h.prefixes().len() {
        let p = h.prefixes().symbols(r);
        for (c, s) in suffix_words.iter().enumerate() {
            let mut w = p.clone();
            w.extend_from_slice(s);
            let val = h.entries()[(r, c)];
            match first.get(&w) {
                None => {
                    first.insert(w, (r, c, val));
                }
                Some(&(r0, c0, v0)) => {
                    let gap = (val - v0).abs();
                    if gap.is_nan() || gap > max_violation {
                        max_violation = if gap.is_nan() { f64::INFINITY } else { gap };
                    }
                    if witness.is_none() && !(gap <= tol) {
                        witness = Some((
                            h.prefixes().word(r0),
                            h.suffixes().word(c0),
                            h.prefixes().word(r),
                            h.suffixes().word(c),
                        ));
                    }
                }
            }
        }
    }
    HankelCheck {
        holds: witness.is_none(),
        max_violation,
        witness,
    }
}

impl Wfa {
    /// Rank of the block over all prefixes and suffixes of length `<= n`.
    pub fn hankel_rank(&self, tol: f64) -> Result<usize> {
        let n = self.num_states();
        hankel_rank(&build_hankel(self, n, n)?, tol)
    }

    /// Whether the automaton is minimal, i.e. its Hankel rank equals its state count.
    pub fn is_minimal(&self, tol: f64) -> Result<bool> {
        Ok(self.hankel_rank(tol)? == self.num_states())
    }

    /// Errors with a diagnostic unless the automaton is minimal.
    pub fn require_minimal(&self, tol: f64) -> Result<()> {
        let r = self.hankel_rank(tol)?;
        if r != self.num_states() {
            return Err(Error::Degenerate(format!(
                "automaton is not minimal: {} states but Hankel rank {r}",
                self.num_states()
            )));
        }
        Ok(())
    }
}
