//! Randomized checks of the two norm inequalities for the shift tuples
//! `(S_1, …, S_d)` and `(R̄_1, …, R̄_d)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{bilateral_shift, left_shift, FockBasis, FockVector, TwoSidedVector};
use crate::error::{invalid, Result};
use crate::par;

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftInequalityReport {
    pub alphabet_size: usize,
    pub degree: usize,
    pub trials: usize,
    /// Max `|‖Σ S_i y_i‖² − Σ ‖y_i‖²|`.
    pub max_deviation_a: f64,
    /// Max `|‖Σ R̄_i h_i‖² − Σ ‖h_i‖²|` with every `h_i` in the positive part.
    pub max_deviation_b: f64,
    /// Max of `‖Σ R̄_i h_i‖² − Σ ‖h_i‖²` when the `h_i` also carry negative
    /// components. Positive values mean the inequality fails there.
    pub full_space_max_excess: f64,
    /// `(lhs, rhs)` for `h_1 = e⁻_{1}`, `h_2 = e⁻_{2}`, whose images both
    /// land on `e_ε`. Present when `d >= 2`.
    pub overlap_witness: Option<(f64, f64)>,
}

impl ShiftInequalityReport {
    /// Equality in (a) and in (b) on the positive part, within `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation_a <= tol && self.max_deviation_b <= tol
    }
}

struct Trial {
    dev_a: f64,
    dev_b: f64,
    excess: f64,
}

fn run_trial(basis: &FockBasis, rng: &mut ChaCha8Rng) -> Result<Trial> {
    let d = basis.alphabet_size();
    let interior = basis.degree() - 1;

    let ys: Vec<FockVector> = (0..d).map(|_| FockVector::random(basis, interior, rng)).collect();
    let mut image = FockVector::zeros(basis);
    for (i, y) in ys.iter().enumerate() {
        image = image.add(&left_shift(i, y)?)?;
    }
    let rhs: f64 = ys.iter().map(FockVector::norm_squared).sum();
    let dev_a = (image.norm_squared() - rhs).abs();

    let hs: Vec<TwoSidedVector> = (0..d)
        .map(|_| TwoSidedVector::from_positive(&FockVector::random(basis, interior, rng)))
        .collect();
    let (lhs, rhs) = bilateral_sides(basis, &hs)?;
    let dev_b = (lhs - rhs).abs();

    let hs: Vec<TwoSidedVector> = (0..d)
        .map(|_| TwoSidedVector::random(basis, interior, rng))
        .collect();
    let (lhs, rhs) = bilateral_sides(basis, &hs)?;
    Ok(Trial {
        dev_a,
        dev_b,
        excess: lhs - rhs,
    })
}

fn bilateral_sides(basis: &FockBasis, hs: &[TwoSidedVector]) -> Result<(f64, f64)> {
    let mut image = TwoSidedVector::zeros(basis);
    for (i, h) in hs.iter().enumerate() {
        image = image.add(&bilateral_shift(i, h)?)?;
    }
    Ok((
        image.norm_squared(),
        hs.iter().map(TwoSidedVector::norm_squared).sum(),
    ))
}

/// Runs `trials` seeded random trials; trial `t` draws from stream `t` of the
/// seed, so results do not depend on scheduling.
pub fn verify_shift_inequalities(
    d: usize,
    degree: usize,
    trials: usize,
    seed: u64,
) -> Result<ShiftInequalityReport> {
    if trials == 0 {
        return invalid("at least one trial is required");
    }
    if degree == 0 {
        return invalid("degree 0 leaves no room to shift");
    }
    let basis = FockBasis::new(d, degree)?;
    let results = par::map_range(trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        run_trial(&basis, &mut rng)
    });
    let mut report = ShiftInequalityReport {
        alphabet_size: d,
        degree,
        trials,
        max_deviation_a: 0.0,
        max_deviation_b: 0.0,
        full_space_max_excess: f64::NEG_INFINITY,
        overlap_witness: None,
    };
    for r in results {
        let r = r?;
        report.max_deviation_a = report.max_deviation_a.max(r.dev_a);
        report.max_deviation_b = report.max_deviation_b.max(r.dev_b);
        report.full_space_max_excess = report.full_space_max_excess.max(r.excess);
    }
    if d >= 2 {
        let mut hs = vec![TwoSidedVector::zeros(&basis); d];
        hs[0] = TwoSidedVector::negative_basis_vector(&basis, &[0])?;
        hs[1] = TwoSidedVector::negative_basis_vector(&basis, &[1])?;
        report.overlap_witness = Some(bilateral_sides(&basis, &hs)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wfa::Word;

    #[test]
    fn equality_on_random_trials() {
        let r = verify_shift_inequalities(3, 4, 30, 7).unwrap();
        assert!(r.passes(1e-12), "{r:?}");
        assert_eq!(r.overlap_witness, Some((4.0, 2.0)));
    }

    #[test]
    fn deterministic_per_seed() {
        let a = verify_shift_inequalities(2, 3, 8, 1).unwrap();
        let b = verify_shift_inequalities(2, 3, 8, 1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn one_letter_bilateral_shift_is_isometric() {
        let r = verify_shift_inequalities(1, 5, 10, 3).unwrap();
        assert!(r.passes(1e-12));
        assert!(r.full_space_max_excess.abs() < 1e-12);
        assert!(r.overlap_witness.is_none());
    }

    #[test]
    fn orthogonal_unit_images() {
        let b = FockBasis::new(2, 2).unwrap();
        let eps = FockVector::basis_vector(&b, &Word::empty()).unwrap();
        let image = left_shift(0, &eps).unwrap().add(&left_shift(1, &eps).unwrap()).unwrap();
        assert_eq!(image.norm_squared(), 2.0);
        let zero = FockVector::zeros(&b);
        assert_eq!(left_shift(0, &zero).unwrap().norm_squared(), 0.0);
    }

    #[test]
    fn rejects_degenerate_arguments() {
        assert!(verify_shift_inequalities(2, 3, 0, 0).is_err());
        assert!(verify_shift_inequalities(2, 0, 1, 0).is_err());
    }
}
