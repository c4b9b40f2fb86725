//! The multi-letter machinery specializes to the one-letter routines at d = 1.

use nalgebra::{Complex, DMatrix, DVector};

use wfa_aak::aak::{gramians, schmidt_pairs, RationalSymbol};
use wfa_aak::fock::{
    flipped_symbol_coefficients, nc_hankel_matrix, nc_rational_eval, verify_hankel_equation,
    NcRationalRealization,
};
use wfa_aak::linalg::singular_values;
use wfa_aak::{
    aak_approximate, build_hankel, hankel_singular_values, random_stable_wfa, symbol_coefficients,
    Wfa, Word,
};

fn e2() -> Wfa {
    Wfa::one_letter(
        DVector::from_vec(vec![1.0, 1.0]),
        DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, -0.3])),
        DVector::from_vec(vec![1.0, 1.0]),
    )
    .unwrap()
}

#[test]
fn nc_hankel_is_the_classical_hankel_matrix_at_one_letter() {
    let f = random_stable_wfa(1, 4, 21, 0.8).unwrap();
    let nc = nc_hankel_matrix(&f, 12, 12).unwrap();
    let coeffs = symbol_coefficients(&RationalSymbol::from_wfa(&f).unwrap(), 25);
    let classical = DMatrix::from_fn(13, 13, |i, j| coeffs[i + j]);
    assert_eq!(nc.entries(), &classical);
    assert_eq!(nc.entries(), build_hankel(&f, 12, 12).unwrap().entries());
    // HS = S^*H
    assert!(verify_hankel_equation(&f, 12).unwrap().holds());
}

#[test]
fn flipped_symbol_is_the_symbol_at_one_letter() {
    let f = e2();
    let phi = flipped_symbol_coefficients(&f, 9).unwrap();
    let coeffs = symbol_coefficients(&RationalSymbol::from_wfa(&f).unwrap(), 10);
    assert_eq!(phi.coeffs().as_slice(), coeffs.as_slice());
    // 0.5^k + (-0.3)^k
    for (k, c) in coeffs.iter().enumerate() {
        let want = 0.5f64.powi(k as i32) + (-0.3f64).powi(k as i32);
        assert!((c - want).abs() < 1e-15);
    }
}

// c^T (1 - zA)^{-1} b = w · alpha^T (wI - A)^{-1} beta with w = 1/z
#[test]
fn scalar_rational_evaluation_matches_the_resolvent() {
    let f = random_stable_wfa(1, 3, 8, 0.8).unwrap();
    let r = NcRationalRealization::from_wfa(&f);
    let sym = RationalSymbol::from_wfa(&f).unwrap();
    for z in [-0.9, -0.4, 0.3, 0.95] {
        let nc = nc_rational_eval(&r, &[DMatrix::from_element(1, 1, z)]).unwrap()[(0, 0)];
        let w = Complex::new(1.0 / z, 0.0);
        let res = sym.eval(w).unwrap() * w;
        assert!((nc - res.re).abs() < 1e-12 && res.im.abs() < 1e-15, "{nc} vs {res}");
    }
}

#[test]
fn geometric_scalar_oracle_values() {
    let f = Wfa::one_letter(
        DVector::from_element(1, 1.0),
        DMatrix::from_element(1, 1, 0.5),
        DVector::from_element(1, 1.0),
    )
    .unwrap();
    let g = gramians(&f, 1e-14).unwrap();
    assert!((g.p[(0, 0)] - 4.0 / 3.0).abs() < 1e-14);
    assert!((g.q[(0, 0)] - 4.0 / 3.0).abs() < 1e-14);
    let s = hankel_singular_values(&f).unwrap();
    assert!((s[0] - 4.0 / 3.0).abs() < 1e-14);
    let a = aak_approximate(&f, 0).unwrap();
    assert!((a.error - 4.0 / 3.0).abs() < 1e-12);
    assert!(a.approximant_block(8).unwrap().entries().iter().all(|&x| x == 0.0));
}

#[test]
fn e2_singular_values_and_rank_one_certificate() {
    let f = e2();
    let sigmas = hankel_singular_values(&f).unwrap();
    let block = singular_values(build_hankel(&f, 63, 63).unwrap().entries()).unwrap();
    for (s, b) in sigmas.iter().zip(&block) {
        assert!((s - b).abs() < 1e-8);
    }
    let a = aak_approximate(&f, 1).unwrap();
    assert!(a.certifies(1e-6 * sigmas[0]), "{} vs {}", a.achieved_error, a.error);
    assert_eq!(a.approx_wfa.num_states(), 1);
    // the recovered one-state automaton reproduces the approximant's coefficients
    let g = a.symbol.coefficients(6);
    for (k, gk) in g.iter().enumerate() {
        let v = a.approx_wfa.evaluate(&Word::new(vec![0; k])).unwrap();
        assert!((v - gk).abs() < 1e-9);
    }
    // Schmidt pair of σ_1 really is one
    let pairs = schmidt_pairs(&f).unwrap();
    assert!((pairs[1].sigma - sigmas[1]).abs() < 1e-15);
}
