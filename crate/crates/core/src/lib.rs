//! Weighted finite automata, their Hankel matrices, and Hankel-norm
//! approximation.
//!
//! * [`wfa`], [`words`]: automata and the graded-lexicographic word order.
//! * [`hankel`]: finite Hankel blocks, rank, and spectral recovery.
//! * [`aak`]: optimal Hankel-norm approximation for one-letter automata.
//! * [`fock`]: truncated Fock-space operators for the multi-letter case.
//!
//! With the default `parallel` feature, block fills and sampling loops run on
//! rayon; without it everything runs sequentially with identical results.

pub mod aak;
pub mod error;
pub mod fock;
pub mod hankel;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod wfa;
pub mod words;

pub use aak::{
    aak_approximate, aak_approximate_with, gramians, hankel_singular_values, schmidt_pairs,
    symbol_coefficients, AakApproximation, AakOptions, AakWarning, RationalSymbol,
};
pub use error::{Error, Result};
pub use hankel::{
    build_hankel, build_hankel_from, check_hankel_property, hankel_rank, spectral_recover,
    svd_truncate, HankelBlock, HankelCheck, DEFAULT_RANK_TOL,
};
pub use linalg::{kronecker, spectral_norm, spectral_radius};
pub use wfa::{random_stable_wfa, SeriesOracle, Wfa, Word};
pub use words::WordIndex;
