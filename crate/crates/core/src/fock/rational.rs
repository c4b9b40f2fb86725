//! Noncommutative rational functions `r(z) = c^T (1 - Σ A_j z_j)^{-1} b`
//! evaluated at tuples of square matrices.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::linalg::{dot, kronecker, row_times, spectral_norm, spectral_radius};
use crate::wfa::Wfa;
use crate::words::WordIndex;

#[derive(Debug, Clone, PartialEq)]
pub struct NcRationalRealization {
    c: DVector<f64>,
    a: Vec<DMatrix<f64>>,
    b: DVector<f64>,
}

impl NcRationalRealization {
    pub fn new(c: DVector<f64>, a: Vec<DMatrix<f64>>, b: DVector<f64>) -> Result<Self> {
        let wfa = Wfa::new(c, a, b)?;
        Ok(Self::from_wfa(&wfa))
    }

    pub fn from_wfa(wfa: &Wfa) -> Self {
        NcRationalRealization {
            c: wfa.alpha().clone(),
            a: wfa.transitions().to_vec(),
            b: wfa.beta().clone(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.a.len()
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// `c^T A_α b`.
    pub fn coefficient(&self, word: &[usize]) -> f64 {
        let mut row: Vec<f64> = self.c.iter().copied().collect();
        for &s in word {
            row = row_times(&row, &self.a[s]);
        }
        dot(&row, self.b.as_slice())
    }

    fn check_point(&self, z: &[DMatrix<f64>]) -> Result<usize> {
        if z.len() != self.a.len() {
            return invalid(format!(
                "{} matrices supplied for {} variables",
                z.len(),
                self.a.len()
            ));
        }
        let m = z.first().map_or(0, |z0| z0.nrows());
        if m == 0 || z.iter().any(|zi| zi.shape() != (m, m)) {
            return invalid("substitution must be nonempty square matrices of one size");
        }
        Ok(m)
    }

    /// `K = Σ A_j ⊗ z_j`.
    pub fn kronecker_sum(&self, z: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
        let m = self.check_point(z)?;
        let n = self.dim();
        let mut k = DMatrix::zeros(n * m, n * m);
        for (aj, zj) in self.a.iter().zip(z) {
            k += kronecker(aj, zj);
        }
        Ok(k)
    }

    pub fn diagnostics(&self, z: &[DMatrix<f64>]) -> Result<ConvergenceDiagnostics> {
        let k = self.kronecker_sum(z)?;
        let gram = z
            .iter()
            .map(|zi| spectral_norm(&(zi * zi.transpose())))
            .sum::<Result<f64>>()?;
        Ok(ConvergenceDiagnostics {
            spectral_radius: spectral_radius(&k)?,
            kronecker_norm: spectral_norm(&k)?,
            gram_norm_sum: gram,
        })
    }

    /// `Σ_{|α| <= D} (c^T A_α b) z_α`, built up word by word.
    pub fn truncated_series(&self, z: &[DMatrix<f64>], degree: usize) -> Result<DMatrix<f64>> {
        let m = self.check_point(z)?;
        let words = WordIndex::new(self.alphabet_size(), degree)?;
        // z_α for the previous layer, in graded-lex order
        let mut layer = vec![DMatrix::<f64>::identity(m, m)];
        let mut total = DMatrix::identity(m, m) * self.coefficient(&[]);
        for len in 1..=degree {
            let mut next = Vec::with_capacity(layer.len() * self.alphabet_size());
            for prev in &layer {
                for zj in z {
                    next.push(prev * zj);
                }
            }
            for (idx, za) in words.layer(len).zip(&next) {
                total += za * self.coefficient(&words.symbols(idx));
            }
            layer = next;
        }
        Ok(total)
    }

    /// `‖c‖ ‖b‖ ‖K‖^{D+1} / (1 - ‖K‖)`; infinite when `‖K‖ >= 1`.
    pub fn tail_bound(&self, z: &[DMatrix<f64>], degree: usize) -> Result<f64> {
        let kn = spectral_norm(&self.kronecker_sum(z)?)?;
        if kn >= 1.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.c.norm() * self.b.norm() * kn.powi(degree as i32 + 1) / (1.0 - kn))
    }
}

/// Quantities governing convergence of the series at a substitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceDiagnostics {
    /// `ρ(Σ A_j ⊗ z_j)`; the evaluation requires this below 1.
    pub spectral_radius: f64,
    pub kronecker_norm: f64,
    /// `Σ ‖z_i z_i^*‖`, the sufficient condition on the substitution alone.
    pub gram_norm_sum: f64,
}

/// `(c^T ⊗ 1_m)(1 - Σ A_j ⊗ z_j)^{-1}(b ⊗ 1_m)`, an `m × m` matrix.
pub fn nc_rational_eval(r: &NcRationalRealization, z: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let m = r.check_point(z)?;
    let n = r.dim();
    let k = r.kronecker_sum(z)?;
    let rho = spectral_radius(&k)?;
    if rho >= 1.0 {
        return Err(Error::Divergent { rho });
    }
    let sys = DMatrix::identity(n * m, n * m) - k;
    let rhs = DMatrix::from_fn(n * m, m, |row, q| if row % m == q { r.b[row / m] } else { 0.0 });
    let x = sys
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric(format!("1 - K is singular (spectral radius {rho})")))?;
    Ok(DMatrix::from_fn(m, m, |p, q| {
        (0..n).fold(0.0, |acc, i| acc + r.c[i] * x[(i * m + p, q)])
    }))
}

/// `d` Gaussian `m × m` matrices scaled so that `Σ ‖z_i z_i^*‖ = gram_sum`.
pub fn random_contractive_substitution(
    d: usize,
    m: usize,
    gram_sum: f64,
    seed: u64,
) -> Result<Vec<DMatrix<f64>>> {
    if d == 0 || m == 0 {
        return invalid("need at least one variable and m >= 1");
    }
    if !(gram_sum > 0.0) {
        return invalid("gram_sum must be positive");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<DMatrix<f64>> = (0..d)
        .map(|_| DMatrix::from_fn(m, m, |_, _| rng.sample(StandardNormal)))
        .collect();
    let total = z
        .iter()
        .map(|zi| spectral_norm(zi).map(|s| s * s))
        .sum::<Result<f64>>()?;
    if total == 0.0 {
        return Err(Error::Degenerate("all sampled matrices vanished".into()));
    }
    let s = (gram_sum / total).sqrt();
    Ok(z.into_iter().map(|zi| zi * s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aak::{symbol_coefficients, RationalSymbol};
    use crate::wfa::random_stable_wfa;

    #[test]
    fn zero_point_gives_empty_word_term() {
        let f = random_stable_wfa(2, 4, 3, 0.9).unwrap();
        let r = NcRationalRealization::from_wfa(&f);
        let z = vec![DMatrix::zeros(1, 1); 2];
        let v = nc_rational_eval(&r, &z).unwrap();
        assert_eq!(v[(0, 0)], f.evaluate(&crate::Word::empty()).unwrap());
    }

    #[test]
    fn one_letter_scalar_is_geometric_resummation() {
        let f = random_stable_wfa(1, 3, 4, 0.8).unwrap();
        let r = NcRationalRealization::from_wfa(&f);
        let z = 0.6;
        let v = nc_rational_eval(&r, &[DMatrix::from_element(1, 1, z)]).unwrap()[(0, 0)];
        let coeffs = symbol_coefficients(&RationalSymbol::from_wfa(&f).unwrap(), 200);
        let sum: f64 = coeffs.iter().enumerate().map(|(k, c)| c * z.powi(k as i32)).sum();
        assert!((v - sum).abs() < 1e-12, "{v} vs {sum}");
    }

    #[test]
    fn series_within_tail_bound() {
        let f = random_stable_wfa(2, 3, 12, 0.7).unwrap();
        let r = NcRationalRealization::from_wfa(&f);
        for seed in 0..5 {
            let z = random_contractive_substitution(2, 2, 0.6, seed).unwrap();
            let diag = r.diagnostics(&z).unwrap();
            assert!(diag.spectral_radius <= diag.kronecker_norm + 1e-12);
            assert!((diag.gram_norm_sum - 0.6).abs() < 1e-12);
            let exact = nc_rational_eval(&r, &z).unwrap();
            let series = r.truncated_series(&z, 8).unwrap();
            let bound = r.tail_bound(&z, 8).unwrap();
            assert!(bound.is_finite());
            assert!(spectral_norm(&(exact - series)).unwrap() <= bound);
        }
    }

    #[test]
    fn coefficients_match_wfa() {
        let f = random_stable_wfa(3, 2, 1, 0.9).unwrap();
        let r = NcRationalRealization::from_wfa(&f);
        let word = [2, 0, 1, 1];
        assert_eq!(r.coefficient(&word), f.evaluate(&crate::Word::new(word.to_vec())).unwrap());
    }

    #[test]
    fn divergent_point_is_rejected() {
        let f = Wfa::one_letter(
            DVector::from_element(1, 1.0),
            DMatrix::from_element(1, 1, 1.0),
            DVector::from_element(1, 1.0),
        )
        .unwrap();
        let r = NcRationalRealization::from_wfa(&f);
        assert!(matches!(
            nc_rational_eval(&r, &[DMatrix::from_element(1, 1, 2.0)]),
            Err(Error::Divergent { .. })
        ));
        assert!(nc_rational_eval(&r, &[]).is_err());
    }
}
