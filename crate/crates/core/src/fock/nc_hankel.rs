//! The NC Hankel operator of a WFA, the equation `H S_i = R_i^* H`, and
//! the flipped symbol read off its first column.

use nalgebra::DMatrix;

use super::{flip_matrix, left_shift_matrix, right_shift_matrix, FockBasis, FockMatrix, FockVector};
use crate::error::{invalid, Result};
use crate::hankel::build_hankel;
use crate::wfa::{Wfa, Word};

/// `H e_α = Σ_β f(βα) e_β`, rows `|β| <= rows_degree`, columns `|α| <= cols_degree`.
pub fn nc_hankel_matrix(wfa: &Wfa, rows_degree: usize, cols_degree: usize) -> Result<FockMatrix> {
    let d = wfa.alphabet_size();
    let block = build_hankel(wfa, rows_degree, cols_degree)?;
    FockMatrix::new(
        &FockBasis::new(d, cols_degree)?,
        &FockBasis::new(d, rows_degree)?,
        block.into_entries(),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct HankelEquationReport {
    pub degree: usize,
    /// Max `|(H S_i - R_i^* H)(β, α)|` over the interior, per symbol.
    pub per_symbol: Vec<f64>,
    /// Interior entries compared per symbol.
    pub entries_compared: usize,
}

impl HankelEquationReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.per_symbol.iter().fold(0.0, |m, &x| m.max(x))
    }

    /// Exact equality, with no tolerance.
    pub fn holds(&self) -> bool {
        self.max_discrepancy() == 0.0
    }
}

fn interior_max_diff(lhs: &DMatrix<f64>, rhs: &DMatrix<f64>, rows: usize, cols: usize) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..cols {
        for i in 0..rows {
            worst = worst.max((lhs[(i, j)] - rhs[(i, j)]).abs());
        }
    }
    worst
}

/// Compares `H S_i` with `R_i^* H` on rows and columns of degree `<= D - 1`,
/// where neither side sees the truncation.
pub fn verify_hankel_equation(wfa: &Wfa, degree: usize) -> Result<HankelEquationReport> {
    if degree < 2 {
        return invalid("the Hankel equation needs degree >= 2 for a nonempty interior");
    }
    let h = nc_hankel_matrix(wfa, degree, degree)?;
    let basis = h.domain().clone();
    let interior = basis.words().up_to(degree - 1).len();
    let per_symbol = (0..wfa.alphabet_size())
        .map(|i| {
            let s = left_shift_matrix(&basis, i)?;
            let r_adj = right_shift_matrix(&basis, i)?.adjoint();
            let lhs = h.compose(&s)?;
            let rhs = r_adj.compose(&h)?;
            Ok(interior_max_diff(lhs.entries(), rhs.entries(), interior, interior))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HankelEquationReport {
        degree,
        per_symbol,
        entries_compared: interior * interior,
    })
}

/// Interior column `α` of `H S_i` and of `R_i^* H`, as two coefficient lists
/// over rows `|β| <= D - 1`. Requires `|α| <= D - 1`.
pub fn hankel_equation_columns(
    wfa: &Wfa,
    symbol: usize,
    column: &Word,
    degree: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if degree < 2 || column.len() >= degree {
        return invalid(format!(
            "column {column} is not interior at degree {degree}"
        ));
    }
    column.validate(wfa.alphabet_size())?;
    symbol_check(wfa, symbol)?;
    let h = nc_hankel_matrix(wfa, degree, degree)?;
    let basis = h.domain().clone();
    let e = FockVector::basis_vector(&basis, column)?;
    let lhs = h.compose(&left_shift_matrix(&basis, symbol)?)?.apply(&e)?;
    let rhs = right_shift_matrix(&basis, symbol)?
        .adjoint()
        .compose(&h)?
        .apply(&e)?;
    let rows = basis.words().up_to(degree - 1).len();
    Ok((
        lhs.coeffs().rows(0, rows).iter().copied().collect(),
        rhs.coeffs().rows(0, rows).iter().copied().collect(),
    ))
}

fn symbol_check(wfa: &Wfa, symbol: usize) -> Result<()> {
    if symbol >= wfa.alphabet_size() {
        return invalid(format!("symbol {symbol} outside the alphabet"));
    }
    Ok(())
}

/// `φ = Σ_a f(a) z^a`, the part of `Uθ = φ + c` a WFA determines.
///
/// The companion term `c` is not pinned down by the automaton and is left
/// undetermined; nothing here claims to construct it.
#[derive(Debug, Clone, PartialEq)]
pub struct FlippedSymbol {
    pub phi: FockVector,
}

impl FlippedSymbol {
    pub fn from_wfa(wfa: &Wfa, degree: usize) -> Result<Self> {
        Ok(FlippedSymbol {
            phi: flipped_symbol_coefficients(wfa, degree)?,
        })
    }

    /// Always `false`: `c` is outside what the automaton specifies.
    pub fn c_is_determined(&self) -> bool {
        false
    }
}

/// Coefficient of `z^a` is `f(a)` for `|a| <= D`; the first column of `H`.
pub fn flipped_symbol_coefficients(wfa: &Wfa, degree: usize) -> Result<FockVector> {
    let basis = FockBasis::new(wfa.alphabet_size(), degree)?;
    let coeffs = basis
        .words()
        .words()
        .map(|w| wfa.evaluate(&Word::new(w)))
        .collect::<Result<Vec<_>>>()?;
    FockVector::from_coeffs(&basis, coeffs.into())
}

/// Right multiplication by a series: `e_α ↦ Σ_{|αβ| <= D} θ_β e_{αβ}`.
pub fn right_multiplication_matrix(theta: &FockVector) -> FockMatrix {
    let basis = theta.basis();
    let dim = basis.dim();
    let mut m = DMatrix::zeros(dim, dim);
    let words: Vec<Vec<usize>> = basis.words().words().collect();
    for (col, alpha) in words.iter().enumerate() {
        let room = basis.degree() - alpha.len();
        for row_b in basis.words().up_to(room) {
            let mut w = alpha.clone();
            w.extend_from_slice(&words[row_b]);
            let target = basis.index_of(&w).expect("length within the cutoff");
            m[(target, col)] = theta.coeffs()[row_b];
        }
    }
    FockMatrix::new(basis, basis, m).expect("square by construction")
}

/// `U R_φ`: after flipping back it is right multiplication by `φ`, which
/// commutes with every left shift.
pub fn multiplier_from_flipped_symbol(phi: &FockVector) -> FockMatrix {
    flip_matrix(phi.basis())
        .compose(&right_multiplication_matrix(phi))
        .expect("shared basis")
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntertwiningReport {
    /// Max interior entry of `U·op·S_a − S_a·U·op`, per symbol.
    pub per_symbol: Vec<f64>,
}

impl IntertwiningReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.per_symbol.iter().fold(0.0, |m, &x| m.max(x))
    }
}

/// Compares `U·op·S_a` with `S_a·U·op` on columns of degree `<= D - 1`.
pub fn verify_multiplier_intertwining(op: &FockMatrix) -> Result<IntertwiningReport> {
    let basis = op.domain().clone();
    if op.codomain() != &basis {
        return invalid("intertwining needs a square operator on one basis");
    }
    if basis.degree() == 0 {
        return invalid("degree 0 has no interior");
    }
    let u = flip_matrix(&basis);
    let uop = u.compose(op)?;
    let interior = basis.words().up_to(basis.degree() - 1).len();
    let per_symbol = (0..basis.alphabet_size())
        .map(|a| {
            let s = left_shift_matrix(&basis, a)?;
            let lhs = uop.compose(&s)?;
            let rhs = s.compose(&uop)?;
            Ok(interior_max_diff(lhs.entries(), rhs.entries(), basis.dim(), interior))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntertwiningReport { per_symbol })
}
