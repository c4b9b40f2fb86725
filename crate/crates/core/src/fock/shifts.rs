use nalgebra::DMatrix;

use super::{FockBasis, FockMatrix, FockVector};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn check_symbol(basis: &FockBasis, i: usize) -> Result<()> {
    if i >= basis.alphabet_size() {
        return invalid(format!(
            "symbol {i} out of range for alphabet of size {}",
            basis.alphabet_size()
        ));
    }
    Ok(())
}

fn extend(word: &[usize], i: usize, side: Side) -> Vec<usize> {
    let mut w = Vec::with_capacity(word.len() + 1);
    match side {
        Side::Left => {
            w.push(i);
            w.extend_from_slice(word);
        }
        Side::Right => {
            w.extend_from_slice(word);
            w.push(i);
        }
    }
    w
}

fn shift(i: usize, v: &FockVector, side: Side) -> Result<FockVector> {
    let basis = v.basis();
    check_symbol(basis, i)?;
    if let Some(deg) = v.support_degree() {
        if deg >= basis.degree() {
            return Err(Error::Truncation {
                degree: basis.degree(),
            });
        }
    }
    let mut out = FockVector::zeros(basis);
    for (idx, word) in basis.words().words().enumerate() {
        let c = v.coeffs()[idx];
        if c != 0.0 {
            let target = basis
                .index_of(&extend(&word, i, side))
                .expect("interior support stays in range");
            out.coeffs[target] = c;
        }
    }
    Ok(out)
}

fn shift_adj(i: usize, v: &FockVector, side: Side) -> Result<FockVector> {
    let basis = v.basis();
    check_symbol(basis, i)?;
    let mut out = FockVector::zeros(basis);
    for (idx, word) in basis.words().words().enumerate() {
        if let Some(src) = basis.index_of(&extend(&word, i, side)) {
            out.coeffs[idx] = v.coeffs()[src];
        }
    }
    Ok(out)
}

/// `S_i e_α = e_{iα}`. Input reaching degree `D` is a truncation error.
pub fn left_shift(i: usize, v: &FockVector) -> Result<FockVector> {
    shift(i, v, Side::Left)
}

/// `R_i e_α = e_{αi}`. Input reaching degree `D` is a truncation error.
pub fn right_shift(i: usize, v: &FockVector) -> Result<FockVector> {
    shift(i, v, Side::Right)
}

/// `S_i^* e_{iα} = e_α`, and `S_i^* e_β = 0` when `β` does not start with `i`.
pub fn left_shift_adj(i: usize, v: &FockVector) -> Result<FockVector> {
    shift_adj(i, v, Side::Left)
}

/// `R_i^* e_{αi} = e_α`, and `R_i^* e_β = 0` when `β` does not end with `i`.
pub fn right_shift_adj(i: usize, v: &FockVector) -> Result<FockVector> {
    shift_adj(i, v, Side::Right)
}

/// Word reversal on basis labels; an involutive permutation.
pub fn flip(v: &FockVector) -> FockVector {
    let basis = v.basis();
    let mut out = FockVector::zeros(basis);
    for (idx, mut word) in basis.words().words().enumerate() {
        word.reverse();
        let target = basis.index_of(&word).expect("reversal keeps the length");
        out.coeffs[target] = v.coeffs()[idx];
    }
    out
}

fn shift_matrix(basis: &FockBasis, i: usize, side: Side) -> Result<FockMatrix> {
    check_symbol(basis, i)?;
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (idx, word) in basis.words().words().enumerate() {
        // columns of degree D map outside the truncation and are dropped
        if let Some(target) = basis.index_of(&extend(&word, i, side)) {
            m[(target, idx)] = 1.0;
        }
    }
    FockMatrix::new(basis, basis, m)
}

/// Truncated matrix of `S_i`: columns at degree `D` are zero.
pub fn left_shift_matrix(basis: &FockBasis, i: usize) -> Result<FockMatrix> {
    shift_matrix(basis, i, Side::Left)
}

/// Truncated matrix of `R_i`: columns at degree `D` are zero.
pub fn right_shift_matrix(basis: &FockBasis, i: usize) -> Result<FockMatrix> {
    shift_matrix(basis, i, Side::Right)
}

/// Permutation matrix of the flip `U`.
pub fn flip_matrix(basis: &FockBasis) -> FockMatrix {
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for (idx, mut word) in basis.words().words().enumerate() {
        word.reverse();
        m[(basis.index_of(&word).unwrap(), idx)] = 1.0;
    }
    FockMatrix::new(basis, basis, m).expect("square by construction")
}
