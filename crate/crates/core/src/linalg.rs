//! Dense linear-algebra contracts shared by every module: Kronecker products,
//! spectral radius and norm, and a descending-order SVD.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{invalid, Error, Result};

const SVD_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 10_000;

/// Kronecker product, entry `(i*p' + i', j*q' + j') = m(i, j) * n(i', j')`.
pub fn kronecker(m: &DMatrix<f64>, n: &DMatrix<f64>) -> DMatrix<f64> {
    let (p, q) = m.shape();
    let (pp, qq) = n.shape();
    DMatrix::from_fn(p * pp, q * qq, |r, c| {
        m[(r / pp, c / qq)] * n[(r % pp, c % qq)]
    })
}

/// Eigenvalues of a square real matrix.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if !m.is_square() {
        return invalid(format!("expected a square matrix, got {:?}", m.shape()));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::Schur::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(m: &DMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues(m)?
        .into_iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Thin SVD with singular values sorted in descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v_t: DMatrix<f64>,
}

impl Svd {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        if m.is_empty() {
            return Ok(Svd {
                u: DMatrix::zeros(m.nrows(), 0),
                singular_values: DVector::zeros(0),
                v_t: DMatrix::zeros(0, m.ncols()),
            });
        }
        let svd = nalgebra::SVD::try_new(m.clone(), true, true, SVD_EPS, MAX_SWEEPS)
            .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
        Ok(Svd {
            u: svd.u.expect("requested U"),
            singular_values: svd.singular_values,
            v_t: svd.v_t.expect("requested V^T"),
        })
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.iter().copied().fold(0.0, f64::max)
    }

    /// Number of singular values above `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let smax = self.sigma_max();
        if smax == 0.0 {
            return 0;
        }
        self.singular_values
            .iter()
            .filter(|&&s| s > rel_tol * smax)
            .count()
    }

    /// `U_k D_k V_k^T`.
    pub fn truncated(&self, k: usize) -> DMatrix<f64> {
        let k = k.min(self.singular_values.len());
        let uk = self.u.columns(0, k);
        let vtk = self.v_t.rows(0, k);
        let dk = DMatrix::from_diagonal(&self.singular_values.rows(0, k).into_owned());
        uk * dk * vtk
    }
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let sv = nalgebra::SVD::try_new(m.clone(), false, false, SVD_EPS, MAX_SWEEPS)
        .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
    let mut s: Vec<f64> = sv.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Operator 2-norm.
pub fn spectral_norm(m: &DMatrix<f64>) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Row vector times matrix, accumulated left to right. Every word evaluation
/// goes through this so identical words give bitwise identical values.
pub(crate) fn row_times(row: &[f64], m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = vec![0.0; m.ncols()];
    row_times_into(row, m, &mut out);
    out
}

/// [`row_times`] into a caller-owned buffer of length `m.ncols()`.
pub(crate) fn row_times_into(row: &[f64], m: &DMatrix<f64>, out: &mut [f64]) {
    for (j, o) in out.iter_mut().enumerate() {
        let col = m.column(j);
        let mut acc = 0.0;
        for (i, r) in row.iter().enumerate() {
            acc += r * col[i];
        }
        *o = acc;
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}
