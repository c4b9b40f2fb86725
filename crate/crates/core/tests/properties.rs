use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use wfa_aak::fock::{
    flip, flip_matrix, left_shift, left_shift_adj, right_shift, right_shift_adj, FockBasis,
    FockVector,
};
use wfa_aak::linalg::{singular_values, Svd};
use wfa_aak::{
    build_hankel, check_hankel_property, hankel_singular_values, random_stable_wfa, spectral_norm,
    spectral_recover, svd_truncate, Wfa, Word, WordIndex, DEFAULT_RANK_TOL,
};

// fixed seed: failures reproduce run to run
fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn automaton() -> impl Strategy<Value = Wfa> {
    (1usize..=3, 1usize..=4, any::<u64>())
        .prop_map(|(d, n, seed)| random_stable_wfa(d, n, seed, 0.9).unwrap())
}

fn word_for(d: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..d, 0..=max_len).prop_map(Word::new)
}

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

proptest! {
    #![proptest_config(config(48))]

    // f(uv) = Σ_i (α^T A_u)_i (A_v β)_i
    #[test]
    fn evaluation_factorizes_over_concatenation(
        (f, u, v) in automaton().prop_flat_map(|f| {
            let d = f.alphabet_size();
            (Just(f), word_for(d, 5), word_for(d, 5))
        })
    ) {
        let n = f.num_states();
        let mut split = 0.0;
        for i in 0..n {
            let left = f.with_beta(unit(n, i)).unwrap().evaluate(&u).unwrap();
            let right = f.with_alpha(unit(n, i)).unwrap().evaluate(&v).unwrap();
            split += left * right;
        }
        let whole = f.evaluate(&u.concat(&v)).unwrap();
        prop_assert!((whole - split).abs() <= 1e-12 * (1.0 + whole.abs()));
    }

    #[test]
    fn evaluation_is_linear_in_beta(
        (f, x, seed) in automaton().prop_flat_map(|f| {
            let d = f.alphabet_size();
            (Just(f), word_for(d, 6), any::<u64>())
        })
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = f.num_states();
        let b1 = gaussian(n, 1, &mut rng).column(0).into_owned();
        let b2 = gaussian(n, 1, &mut rng).column(0).into_owned();
        let lhs = f.with_beta(&b1 * 2.0 - &b2).unwrap().evaluate(&x).unwrap();
        let rhs = 2.0 * f.with_beta(b1).unwrap().evaluate(&x).unwrap()
            - f.with_beta(b2).unwrap().evaluate(&x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn built_blocks_are_exactly_hankel(f in automaton(), lp in 0usize..=3, ls in 0usize..=3) {
        let h = build_hankel(&f, lp, ls).unwrap();
        let check = check_hankel_property(&h, 0.0);
        prop_assert!(check.holds);
        prop_assert_eq!(check.max_violation, 0.0);
    }

    #[test]
    fn spectral_recovery_round_trip(f in automaton()) {
        let n = f.num_states();
        let h = build_hankel(&f, n, n).unwrap();
        let g = spectral_recover(&h, &f, n, DEFAULT_RANK_TOL).unwrap();
        for w in WordIndex::new(f.alphabet_size(), n + 2).unwrap().words() {
            let w = Word::new(w);
            prop_assert!((f.evaluate(&w).unwrap() - g.evaluate(&w).unwrap()).abs() < 1e-9);
        }
    }

    // truncation error is σ_k, and no random rank-k matrix does better
    #[test]
    fn eckart_young(seed in any::<u64>(), rows in 2usize..8, cols in 2usize..8, k in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = k.min(rows.min(cols) - 1);
        let m = gaussian(rows, cols, &mut rng);
        let svd = Svd::new(&m).unwrap();
        let sk = svd.singular_values[k];
        let err = spectral_norm(&(&m - svd.truncated(k))).unwrap();
        prop_assert!((err - sk).abs() <= 1e-10 * svd.sigma_max());
        for _ in 0..10 {
            let cand = gaussian(rows, k, &mut rng) * gaussian(k, cols, &mut rng);
            prop_assert!(spectral_norm(&(&m - cand)).unwrap() >= sk * (1.0 - 1e-12));
        }
    }

    #[test]
    fn svd_truncate_reports_next_singular_value(f in automaton(), k in 0usize..4) {
        let h = build_hankel(&f, 2, 2).unwrap();
        let sv = singular_values(h.entries()).unwrap();
        let k = k.min(sv.len() - 1);
        let (low, next) = svd_truncate(&h, k).unwrap();
        prop_assert!((next - sv[k]).abs() <= 1e-12 * sv[0].max(1e-300));
        let err = spectral_norm(&(h.entries() - low)).unwrap();
        prop_assert!((err - sv[k]).abs() <= 1e-10 * sv[0].max(1e-300));
    }

    #[test]
    fn flip_is_an_isometric_involution(d in 1usize..=3, deg in 0usize..=4, seed in any::<u64>()) {
        let b = FockBasis::new(d, deg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = FockVector::random(&b, deg, &mut rng);
        prop_assert_eq!(flip(&flip(&v)), v.clone());
        prop_assert!((flip(&v).norm() - v.norm()).abs() <= 1e-12 * (1.0 + v.norm()));
        prop_assert_eq!(flip_matrix(&b).apply(&v).unwrap(), flip(&v));
    }

    #[test]
    fn shift_adjoints(d in 1usize..=3, deg in 1usize..=4, seed in any::<u64>()) {
        let b = FockBasis::new(d, deg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = FockVector::random(&b, deg - 1, &mut rng);
        let v = FockVector::random(&b, deg, &mut rng);
        for i in 0..d {
            let l = left_shift(i, &u).unwrap().dot(&v) - u.dot(&left_shift_adj(i, &v).unwrap());
            let r = right_shift(i, &u).unwrap().dot(&v) - u.dot(&right_shift_adj(i, &v).unwrap());
            prop_assert!(l.abs() <= 1e-12 && r.abs() <= 1e-12);
            // left shifts are isometries on the interior
            prop_assert!((left_shift(i, &u).unwrap().norm() - u.norm()).abs() <= 1e-12 * (1.0 + u.norm()));
        }
    }

    #[test]
    fn word_index_is_a_bijection(d in 1usize..=4, len in 0usize..=4) {
        let idx = WordIndex::new(d, len).unwrap();
        for (i, w) in idx.words().enumerate() {
            prop_assert_eq!(idx.index_of(&w), Some(i));
            prop_assert_eq!(idx.length_of(i), w.len());
        }
    }
}

proptest! {
    #![proptest_config(config(16))]

    // Gramian singular values against a long truncated block
    #[test]
    fn gramian_sigmas_match_block_svd(n in 1usize..=4, seed in any::<u64>()) {
        let f = random_stable_wfa(1, n, seed, 0.7).unwrap();
        let Ok(sigmas) = hankel_singular_values(&f) else {
            // numerically non-minimal draws are rejected, which is the contract
            return Ok(());
        };
        let block = singular_values(build_hankel(&f, 79, 79).unwrap().entries()).unwrap();
        for (s, b) in sigmas.iter().zip(&block) {
            prop_assert!((s - b).abs() <= 1e-8 * sigmas[0], "{} vs {}", s, b);
        }
    }
}
