//! One-letter approximate minimization in the spectral norm.
//!
//! A one-letter automaton `(alpha, A, beta)` with `rho(A) < 1` has Hankel matrix
//! `H(i, j) = f(i + j)`, the matrix of the Hankel operator whose symbol has
//! negative part `alpha^T (zI - A)^{-1} beta`. Its singular values come exactly
//! from the controllability/observability Gramians. The optimal rank-`k` Hankel
//! approximation subtracts the error symbol `e = sigma_k * w(z) / v(z)` built from
//! the `sigma_k` Schmidt pair; `e` has constant modulus `sigma_k` on the circle.
//!
//! The negative Fourier coefficients of `e` are extracted exactly: the zeros of
//! `v` are split into those inside and outside the unit disc, the rational
//! function is split into partial fractions over the two groups (a Bezout
//! identity), and the inside part is expanded by long division. The remaining
//! approximant `P_-(phi - e)` is reduced to a fraction of degree `k`.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::hankel::{spectral_recover, HankelBlock, DEFAULT_RANK_TOL};
use crate::linalg::{dot, eigenvalues, kronecker, row_times, spectral_norm, spectral_radius, Svd};
use crate::par;
use crate::poly::{bezout, laurent_tail, Poly};
use crate::wfa::{SeriesOracle, Wfa};
use crate::words::WordIndex;

/// Realization `(alpha, A, beta)` of the negative part of a symbol,
/// `alpha^T (zI - A)^{-1} beta = sum_{n >= 0} alpha^T A^n beta z^{-n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSymbol {
    alpha: DVector<f64>,
    a: DMatrix<f64>,
    beta: DVector<f64>,
}

impl RationalSymbol {
    /// Requires a one-letter automaton with `rho(A) < 1`.
    pub fn from_wfa(wfa: &Wfa) -> Result<Self> {
        let a = one_letter_matrix(wfa)?;
        let rho = spectral_radius(a)?;
        if rho >= 1.0 {
            return Err(Error::Divergent { rho });
        }
        Ok(RationalSymbol {
            alpha: wfa.alpha().clone(),
            a: a.clone(),
            beta: wfa.beta().clone(),
        })
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn beta(&self) -> &DVector<f64> {
        &self.beta
    }

    /// `phi_hat(-1), ..., phi_hat(-m)`, i.e. `f(0), ..., f(m - 1)`.
    pub fn coefficients(&self, m: usize) -> Vec<f64> {
        power_sequence(&self.alpha, &self.a, &self.beta, m)
    }

    /// `alpha^T (zI - A)^{-1} beta` at a point outside the spectrum.
    pub fn eval(&self, z: Complex<f64>) -> Result<Complex<f64>> {
        resolvent_form(&self.alpha, &self.a, &self.beta, z)
    }
}

/// `phi_hat(-1), ..., phi_hat(-m)` of the symbol.
pub fn symbol_coefficients(symbol: &RationalSymbol, m: usize) -> Vec<f64> {
    symbol.coefficients(m)
}

fn one_letter_matrix(wfa: &Wfa) -> Result<&DMatrix<f64>> {
    if wfa.alphabet_size() != 1 {
        return invalid(format!(
            "one-letter routine called on an alphabet of size {}",
            wfa.alphabet_size()
        ));
    }
    Ok(wfa.transition(0))
}

// l^T M^i r for i = 0..m
fn power_sequence(l: &DVector<f64>, m: &DMatrix<f64>, r: &DVector<f64>, count: usize) -> Vec<f64> {
    // same accumulation order as word evaluation, so values match bitwise
    let mut out = Vec::with_capacity(count);
    let mut row: Vec<f64> = l.iter().copied().collect();
    for _ in 0..count {
        out.push(dot(&row, r.as_slice()));
        row = row_times(&row, m);
    }
    out
}

// l^T (zI - M)^{-1} r
fn resolvent_form(
    l: &DVector<f64>,
    m: &DMatrix<f64>,
    r: &DVector<f64>,
    z: Complex<f64>,
) -> Result<Complex<f64>> {
    let n = m.nrows();
    let mut shifted: DMatrix<Complex<f64>> = m.map(|x| Complex::new(-x, 0.0));
    for i in 0..n {
        shifted[(i, i)] += z;
    }
    let rhs: DVector<Complex<f64>> = r.map(|x| Complex::new(x, 0.0));
    let sol = shifted
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric(format!("zI - A is singular at z = {z}")))?;
    Ok(l.iter().zip(sol.iter()).map(|(a, b)| b * *a).sum())
}

/// Controllability and observability Gramians of a stable one-letter automaton:
/// `P = A P A^T + beta beta^T`, `Q = A^T Q A + alpha alpha^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianPair {
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
}

impl GramianPair {
    /// Max of the two fixed-point residuals (Frobenius norm).
    pub fn residual(&self, wfa: &Wfa) -> f64 {
        let a = wfa.transition(0);
        let bb = wfa.beta() * wfa.beta().transpose();
        let aa = wfa.alpha() * wfa.alpha().transpose();
        let rp = &self.p - a * &self.p * a.transpose() - bb;
        let rq = &self.q - a.transpose() * &self.q * a - aa;
        rp.norm().max(rq.norm())
    }
}

/// Solves both Stein equations through their vectorized form
/// `(I - A ⊗ A) vec(P) = vec(beta beta^T)`.
pub fn gramians(wfa: &Wfa, tol: f64) -> Result<GramianPair> {
    let a = one_letter_matrix(wfa)?;
    let rho = spectral_radius(a)?;
    if rho >= 1.0 {
        return Err(Error::Divergent { rho });
    }
    let n = a.nrows();
    let p = stein_solve(a, &(wfa.beta() * wfa.beta().transpose()))?;
    let at = a.transpose();
    let q = stein_solve(&at, &(wfa.alpha() * wfa.alpha().transpose()))?;
    let g = GramianPair { p, q };
    let res = g.residual(wfa);
    let scale = 1.0f64.max(g.p.norm()).max(g.q.norm());
    if res > tol * scale {
        return Err(Error::Numeric(format!(
            "Gramian residual {res:e} exceeds {:e} (n = {n}, rho = {rho})",
            tol * scale
        )));
    }
    Ok(g)
}

// X = M X M^T + C
fn stein_solve(m: &DMatrix<f64>, c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let sys = DMatrix::identity(n * n, n * n) - kronecker(m, m);
    let rhs = DVector::from_column_slice(c.as_slice());
    let x = sys
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric("Stein equation is singular".into()))?;
    let x = DMatrix::from_column_slice(n, n, x.as_slice());
    Ok((&x + x.transpose()) * 0.5)
}

/// Symmetric square root of a positive-semidefinite matrix.
fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(m.clone());
    let d = eig.eigenvalues.map(|x| x.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
}

/// Hankel singular values with their `QP` eigenvectors, descending.
fn sigma_decomposition(g: &GramianPair) -> Result<(Vec<f64>, DMatrix<f64>)> {
    // With symmetric square roots Rp, Rq and Rq Rp = U S V^T, the singular values
    // are S and x = Rq u satisfies QP x = s^2 x. Working with the factors avoids
    // squaring the small singular values.
    let rp = psd_sqrt(&g.p);
    let rq = psd_sqrt(&g.q);
    let svd = Svd::new(&(&rq * &rp))?;
    let sigmas: Vec<f64> = svd.singular_values.iter().copied().collect();
    let xs = &rq * &svd.u;
    Ok((sigmas, xs))
}

/// `sigma_0 >= ... >= sigma_{n-1} > 0`, square roots of the eigenvalues of `PQ`.
///
/// A non-minimal automaton has zero singular values and is rejected.
pub fn hankel_singular_values(wfa: &Wfa) -> Result<Vec<f64>> {
    let g = gramians(wfa, 1e-8)?;
    let (sigmas, _) = sigma_decomposition(&g)?;
    check_minimal_sigmas(&sigmas)?;
    Ok(sigmas)
}

fn check_minimal_sigmas(sigmas: &[f64]) -> Result<()> {
    let s0 = sigmas.first().copied().unwrap_or(0.0);
    let last = sigmas.last().copied().unwrap_or(0.0);
    if s0 == 0.0 || last <= DEFAULT_RANK_TOL * s0 {
        return Err(Error::Degenerate(format!(
            "automaton is not minimal: smallest Hankel singular value {last:e} vs largest {s0:e}"
        )));
    }
    Ok(())
}

/// Schmidt pair `(v, w)` of the Hankel operator for one singular value.
///
/// `v_j = beta^T (A^T)^j x` and `w_i = alpha^T A^i P x / sigma`, so that
/// `v(z) = beta^T (I - z A^T)^{-1} x` and `w(z) = sigma^{-1} alpha^T (zI - A)^{-1} P x`.
/// `x` is scaled so that `||v|| = ||w|| = 1`.
#[derive(Debug, Clone)]
pub struct SchmidtPair {
    pub sigma: f64,
    pub x: DVector<f64>,
    alpha: DVector<f64>,
    a: DMatrix<f64>,
    beta: DVector<f64>,
    px: DVector<f64>,
}

impl SchmidtPair {
    /// `v_0, ..., v_{m-1}`.
    pub fn v_coefficients(&self, m: usize) -> Vec<f64> {
        power_sequence(&self.x, &self.a, &self.beta, m)
    }

    /// `w_0, ..., w_{m-1}`, the coefficients of `z^{-1}, ..., z^{-m}` in `w(z)`.
    pub fn w_coefficients(&self, m: usize) -> Vec<f64> {
        power_sequence(&self.alpha, &self.a, &self.px, m)
            .into_iter()
            .map(|c| c / self.sigma)
            .collect()
    }

    /// `v(z) = beta^T (I - z A^T)^{-1} x`.
    pub fn v_hat(&self, z: Complex<f64>) -> Result<Complex<f64>> {
        // (I - zA^T)^{-1} = z^{-1} (z^{-1} I - A^T)^{-1}
        if z == Complex::new(0.0, 0.0) {
            return Ok(Complex::new(self.beta.dot(&self.x), 0.0));
        }
        let zi = z.inv();
        Ok(resolvent_form(&self.beta, &self.a.transpose(), &self.x, zi)? * zi)
    }

    /// `w(z) = sigma^{-1} alpha^T (zI - A)^{-1} P x`.
    pub fn w_hat(&self, z: Complex<f64>) -> Result<Complex<f64>> {
        Ok(resolvent_form(&self.alpha, &self.a, &self.px, z)? / self.sigma)
    }
}

/// Schmidt pairs for every Hankel singular value, in descending order.
pub fn schmidt_pairs(wfa: &Wfa) -> Result<Vec<SchmidtPair>> {
    let g = gramians(wfa, 1e-8)?;
    let (sigmas, xs) = sigma_decomposition(&g)?;
    check_minimal_sigmas(&sigmas)?;
    let a = wfa.transition(0).clone();
    Ok(sigmas
        .iter()
        .enumerate()
        .map(|(i, &sigma)| {
            let mut x = xs.column(i).into_owned();
            // ||v||^2 = x^T P x
            let norm = x.dot(&(&g.p * &x)).sqrt();
            x /= norm;
            let px = &g.p * &x;
            SchmidtPair {
                sigma,
                x,
                alpha: wfa.alpha().clone(),
                a: a.clone(),
                beta: wfa.beta().clone(),
                px,
            }
        })
        .collect())
}

/// The AAK error symbol `e(z) = sigma_k * w(z) / v(z)` in polynomial form
/// `sigma * num_w(z) * det(I - zA) / (det(zI - A) * num_v(z))`.
#[derive(Debug, Clone)]
pub struct ErrorSymbol {
    sigma: f64,
    w_num: Poly,
    v_num: Poly,
    char_poly: Poly,
    rev_char_poly: Poly,
}

impl ErrorSymbol {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn eval(&self, z: Complex<f64>) -> Complex<f64> {
        let num = self.w_num.eval(z) * self.rev_char_poly.eval(z);
        let den = self.char_poly.eval(z) * self.v_num.eval(z);
        num / den * self.sigma
    }

    /// Max of `|e(z)|` over `samples` equispaced points on the unit circle.
    pub fn sampled_sup_norm(&self, samples: usize) -> f64 {
        let vals = par::map_range(samples, |i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
            self.eval(Complex::from_polar(1.0, t)).norm()
        });
        vals.into_iter().fold(0.0, f64::max)
    }

    /// Min of `|e(z)|` over the same sample points.
    pub fn sampled_min_modulus(&self, samples: usize) -> f64 {
        let vals = par::map_range(samples, |i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
            self.eval(Complex::from_polar(1.0, t)).norm()
        });
        vals.into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Negative-coefficient generator of the optimal approximant,
/// `P_- g = num(z) / den(z)` with `deg den = k`.
#[derive(Debug, Clone)]
pub struct ApproximantSymbol {
    num: Poly,
    den: Poly,
}

impl ApproximantSymbol {
    /// `g_hat(-1), ..., g_hat(-m)`.
    pub fn coefficients(&self, m: usize) -> Vec<f64> {
        if self.num.is_zero() {
            return vec![0.0; m];
        }
        laurent_tail(&self.num, &self.den, m)
    }

    /// McMillan degree of the approximant symbol.
    pub fn degree(&self) -> usize {
        self.den.degree().unwrap_or(0)
    }

    /// `G(i, j) = g_hat(-i-j-1)` for `0 <= i, j < size`.
    pub fn hankel_block(&self, size: usize) -> Result<HankelBlock> {
        sequence_block(&self.coefficients(2 * size.max(1) - 1), size)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }
}

/// One-letter series given by an explicit coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceOracle(pub Vec<f64>);

impl SeriesOracle for SequenceOracle {
    fn alphabet_size(&self) -> usize {
        1
    }

    fn value(&self, word: &[usize]) -> f64 {
        self.0[word.len()]
    }
}

/// `size x size` one-letter Hankel block `M(i, j) = seq[i + j]`.
pub fn sequence_block(seq: &[f64], size: usize) -> Result<HankelBlock> {
    if size == 0 || seq.len() < 2 * size - 1 {
        return invalid("sequence too short for the requested block");
    }
    let idx = WordIndex::new(1, size - 1)?;
    let m = DMatrix::from_fn(size, size, |i, j| seq[i + j]);
    HankelBlock::from_parts(idx.clone(), idx, m)
}

/// Conditions that do not stop the construction but weaken its guarantees.
#[derive(Debug, Clone, PartialEq)]
pub enum AakWarning {
    /// `sigma_k` coincides with a neighbour within tolerance; uniqueness is at risk.
    RepeatedSingularValue { k: usize, neighbour: usize, gap: f64 },
    /// The approximant symbol has a different number of poles than `k`.
    DegreeMismatch { expected: usize, found: usize },
    /// Adaptive truncation hit its size cap before the error estimate settled.
    TruncationCap { size: usize, last_change: f64 },
}

/// Knobs for [`aak_approximate_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct AakOptions {
    /// First truncation size; defaults to `max(4n, 16)` when `None`.
    pub start_size: Option<usize>,
    /// Stop doubling once successive error estimates differ by less than this, relatively.
    pub settle_tol: f64,
    pub max_size: usize,
    /// Zeros of `v` within this distance of the unit circle are an error.
    pub circle_tol: f64,
    /// Relative tolerance for the rank and spectral-recovery steps.
    pub rank_tol: f64,
}

impl Default for AakOptions {
    fn default() -> Self {
        AakOptions {
            start_size: None,
            settle_tol: 1e-9,
            max_size: 1024,
            circle_tol: 1e-8,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

/// Result of the one-letter AAK construction.
#[derive(Debug, Clone)]
pub struct AakApproximation {
    pub k: usize,
    /// All Hankel singular values of the input, descending.
    pub sigmas: Vec<f64>,
    /// `sigma_k`, the optimal spectral-norm error.
    pub error: f64,
    pub symbol: ApproximantSymbol,
    pub error_symbol: ErrorSymbol,
    /// Truncation size `N` at which the error estimate settled.
    pub truncation: usize,
    /// `||H_N - G_N||_2` at that size.
    pub achieved_error: f64,
    /// `sigma_k(H_N)`, the Eckart-Young lower bound at that size.
    pub lower_bound: f64,
    /// The `k`-state automaton recovered from `G` by the spectral method.
    pub approx_wfa: Wfa,
    /// Max entry gap between `G_N` and the block of `approx_wfa`.
    pub reproduction_error: f64,
    /// Relative remainder when the stable poles cancel out of the approximant.
    pub cancellation_residual: f64,
    pub warnings: Vec<AakWarning>,
}

impl AakApproximation {
    /// `G_N` for an arbitrary truncation size.
    pub fn approximant_block(&self, size: usize) -> Result<HankelBlock> {
        self.symbol.hankel_block(size)
    }

    /// Attained error equals `sigma_k` within `tol` (absolute).
    pub fn certifies(&self, tol: f64) -> bool {
        (self.achieved_error - self.error).abs() <= tol
    }
}

pub fn aak_approximate(wfa: &Wfa, k: usize) -> Result<AakApproximation> {
    aak_approximate_with(wfa, k, &AakOptions::default())
}

/// Optimal rank-`k` Hankel approximation of a minimal, stable one-letter automaton.
pub fn aak_approximate_with(wfa: &Wfa, k: usize, opts: &AakOptions) -> Result<AakApproximation> {
    let a = one_letter_matrix(wfa)?;
    let n = wfa.num_states();
    if k >= n {
        return invalid(format!("k = {k} must be smaller than the state count {n}"));
    }
    let pairs = schmidt_pairs(wfa)?;
    let sigmas: Vec<f64> = pairs.iter().map(|p| p.sigma).collect();
    let pair = &pairs[k];
    let sigma = pair.sigma;
    let mut warnings = Vec::new();
    for nb in [k.checked_sub(1), Some(k + 1)].into_iter().flatten() {
        if let Some(&s) = sigmas.get(nb) {
            let gap = (s - sigma).abs();
            if gap <= 1e-8 * sigmas[0] {
                warnings.push(AakWarning::RepeatedSingularValue {
                    k,
                    neighbour: nb,
                    gap,
                });
            }
        }
    }

    // det(zI - A) and det(I - zA)
    let char_poly = Poly::from_roots(&eigenvalues(a)?);
    let rev_char_poly = char_poly.reversed(n);

    // numerators: w(z) = w_num / char_poly, v(z) = v_num / rev_char_poly,
    // P_- phi = phi_num / char_poly
    let w_seq = pair.w_coefficients(n);
    let v_seq = pair.v_coefficients(n);
    let f_seq = power_sequence(wfa.alpha(), a, wfa.beta(), n);
    let w_num = strictly_proper_numerator(&char_poly, &w_seq);
    let phi_num = strictly_proper_numerator(&char_poly, &f_seq);
    let v_num = Poly::new(
        (0..n)
            .map(|j| (0..=j).map(|l| rev_char_poly.coeff(l) * v_seq[j - l]).sum())
            .collect(),
    )
    .trimmed(1e-13);
    if v_num.is_zero() {
        return Err(Error::Numeric("Schmidt vector v vanishes identically".into()));
    }

    // split the zeros of v around the unit circle
    let roots = v_num.roots()?;
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for r in roots {
        let m = r.norm();
        if (m - 1.0).abs() <= opts.circle_tol {
            return Err(Error::Numeric(format!(
                "v has a zero on the unit circle at {r} (|z| = {m})"
            )));
        }
        if m < 1.0 {
            inside.push(r);
        } else {
            outside.push(r);
        }
    }
    let v_in = Poly::from_roots(&inside);
    let v_out = Poly::from_roots(&outside).scale(v_num.leading());

    // e / sigma = w_num * rev_char / (char * v_in * v_out); keep the part with poles inside
    let q_in = char_poly.mul(&v_in);
    let numer = w_num.mul(&rev_char_poly);
    let (_, numer_red) = numer.div_rem(&q_in.mul(&v_out));
    let (r_in, _r_out) = bezout(&v_out, &q_in, &numer_red)?;

    // P_- g = phi_num / char - sigma r_in / (char v_in) = (phi_num v_in - sigma r_in) / (char v_in)
    let g_num_full = phi_num.mul(&v_in).sub(&r_in.scale(sigma));
    let (g_num, rem) = g_num_full.div_rem(&char_poly);
    let cancellation_residual = rem.max_abs() / g_num_full.max_abs().max(f64::MIN_POSITIVE);
    let symbol = ApproximantSymbol {
        num: g_num,
        den: v_in,
    };
    if symbol.degree() != k {
        warnings.push(AakWarning::DegreeMismatch {
            expected: k,
            found: symbol.degree(),
        });
    }
    let error_symbol = ErrorSymbol {
        sigma,
        w_num,
        v_num,
        char_poly,
        rev_char_poly,
    };

    // adaptive truncation of ||H_N - G_N||
    let mut size = opts.start_size.unwrap_or((4 * n).max(16)).max(1);
    let mut prev: Option<f64> = None;
    let (achieved_error, lower_bound, last_size) = loop {
        let (err, lb) = truncated_error(wfa, &symbol, size, k)?;
        if let Some(p) = prev {
            let change = (err - p).abs();
            if change <= opts.settle_tol * err.max(f64::MIN_POSITIVE) {
                break (err, lb, size);
            }
            if size * 2 > opts.max_size {
                warnings.push(AakWarning::TruncationCap {
                    size,
                    last_change: change,
                });
                break (err, lb, size);
            }
        }
        prev = Some(err);
        size *= 2;
    };

    let g_coeffs = symbol.coefficients(2 * last_size + 1);
    let g_block = sequence_block(&g_coeffs, last_size)?;
    let oracle = SequenceOracle(g_coeffs);
    let approx_wfa = if k == 0 {
        Wfa::zero(1)
    } else {
        spectral_recover(&g_block, &oracle, k, opts.rank_tol)?
    };
    let rec = approx_wfa_block(&approx_wfa, last_size);
    let reproduction_error = (&rec - g_block.entries()).amax();

    Ok(AakApproximation {
        k,
        sigmas,
        error: sigma,
        symbol,
        error_symbol,
        truncation: last_size,
        achieved_error,
        lower_bound,
        approx_wfa,
        reproduction_error,
        cancellation_residual,
        warnings,
    })
}

// numerator of sum_i s_i z^{-i-1} over a monic degree-n denominator
fn strictly_proper_numerator(den: &Poly, seq: &[f64]) -> Poly {
    let n = den.degree().unwrap_or(0);
    Poly::new(
        (0..n)
            .map(|j| {
                ((j + 1)..=n)
                    .map(|l| den.coeff(l) * seq[l - j - 1])
                    .sum()
            })
            .collect(),
    )
}

fn approx_wfa_block(wfa: &Wfa, size: usize) -> DMatrix<f64> {
    let seq = power_sequence(wfa.alpha(), wfa.transition(0), wfa.beta(), 2 * size);
    DMatrix::from_fn(size, size, |i, j| seq[i + j])
}

// (||H_N - G_N||_2, sigma_k(H_N))
fn truncated_error(wfa: &Wfa, symbol: &ApproximantSymbol, size: usize, k: usize) -> Result<(f64, f64)> {
    let f = power_sequence(wfa.alpha(), wfa.transition(0), wfa.beta(), 2 * size);
    let g = symbol.coefficients(2 * size);
    let diff = DMatrix::from_fn(size, size, |i, j| f[i + j] - g[i + j]);
    let h = DMatrix::from_fn(size, size, |i, j| f[i + j]);
    let err = spectral_norm(&diff)?;
    let svd = Svd::new(&h)?;
    let lb = svd.singular_values.get(k).copied().unwrap_or(0.0);
    Ok((err, lb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{build_hankel, check_hankel_property, hankel_rank};
    use crate::linalg::singular_values;
    use crate::wfa::random_stable_wfa;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn scalar(a: f64, c: f64) -> Wfa {
        Wfa::one_letter(
            DVector::from_element(1, 1.0),
            DMatrix::from_element(1, 1, a),
            DVector::from_element(1, c),
        )
        .unwrap()
    }

    pub(super) fn e2() -> Wfa {
        Wfa::one_letter(
            DVector::from_vec(vec![1.0, 1.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, -0.3])),
            DVector::from_vec(vec![1.0, 1.0]),
        )
        .unwrap()
    }

    fn big_block_svd(wfa: &Wfa, size: usize) -> Vec<f64> {
        let h = build_hankel(wfa, size - 1, size - 1).unwrap();
        singular_values(h.entries()).unwrap()
    }

    // fixed-point iteration P <- A P A^T + bb^T from zero, an independent route
    fn iterate_gramian(a: &DMatrix<f64>, b: &DVector<f64>) -> DMatrix<f64> {
        let n = a.nrows();
        let mut p = DMatrix::zeros(n, n);
        for _ in 0..2000 {
            p = a * &p * a.transpose() + b * b.transpose();
        }
        p
    }

    #[test]
    fn geometric_coefficients() {
        let s = RationalSymbol::from_wfa(&scalar(0.5, 1.0)).unwrap();
        assert_eq!(symbol_coefficients(&s, 4), vec![1.0, 0.5, 0.25, 0.125]);
        let z = RationalSymbol::from_wfa(&scalar(0.5, 0.0)).unwrap();
        assert!(z.coefficients(5).iter().all(|&c| c == 0.0));
    }

    #[test]
    fn scalar_symbol_powers() {
        for a in [-0.9, -0.3, 0.0, 0.4, 0.95] {
            let s = RationalSymbol::from_wfa(&scalar(a, 1.0)).unwrap();
            for (n, c) in s.coefficients(12).into_iter().enumerate() {
                assert_abs_diff_eq!(c, f64::powi(a, n as i32), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn symbol_eval_matches_series() {
        let w = random_stable_wfa(1, 3, 4, 0.7).unwrap();
        let s = RationalSymbol::from_wfa(&w).unwrap();
        let z = Complex::from_polar(1.0, 0.9);
        let coeffs = s.coefficients(200);
        let series: Complex<f64> = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| z.powi(-(k as i32) - 1) * *c)
            .sum();
        assert!((s.eval(z).unwrap() - series).norm() < 1e-12);
    }

    #[test]
    fn rejects_unstable_and_multi_letter() {
        assert!(matches!(
            RationalSymbol::from_wfa(&scalar(1.2, 1.0)),
            Err(Error::Divergent { .. })
        ));
        assert!(matches!(gramians(&scalar(1.0, 1.0), 1e-10), Err(Error::Divergent { .. })));
        let two = random_stable_wfa(2, 2, 0, 0.5).unwrap();
        assert!(gramians(&two, 1e-10).is_err());
    }

    #[test]
    fn scalar_gramians() {
        let g = gramians(&scalar(0.5, 1.0), 1e-12).unwrap();
        assert_abs_diff_eq!(g.p[(0, 0)], 4.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(g.q[(0, 0)], 4.0 / 3.0, epsilon = 1e-14);
        let z = gramians(&scalar(0.5, 0.0), 1e-12).unwrap();
        assert_eq!(z.p[(0, 0)], 0.0);
    }

    #[test]
    fn diagonal_gramian_closed_form() {
        let (a1, a2) = (0.6, -0.45);
        let w = Wfa::one_letter(
            DVector::from_vec(vec![0.3, -1.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![a1, a2])),
            DVector::from_vec(vec![1.0, 1.0]),
        )
        .unwrap();
        let g = gramians(&w, 1e-12).unwrap();
        let a = [a1, a2];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(g.p[(i, j)], 1.0 / (1.0 - a[i] * a[j]), epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn gramians_match_fixed_point_iteration() {
        let w = random_stable_wfa(1, 4, 17, 0.8).unwrap();
        let g = gramians(&w, 1e-10).unwrap();
        let p = iterate_gramian(w.transition(0), w.beta());
        let q = iterate_gramian(&w.transition(0).transpose(), w.alpha());
        assert_abs_diff_eq!(g.p, p, epsilon = 1e-10 * p.norm());
        assert_abs_diff_eq!(g.q, q, epsilon = 1e-10 * q.norm());
        assert!(g.residual(&w) < 1e-10);
    }

    #[test]
    fn geometric_singular_value() {
        let s = hankel_singular_values(&scalar(0.5, 1.0)).unwrap();
        assert_eq!(s.len(), 1);
        assert_abs_diff_eq!(s[0], 4.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn singular_values_scale_with_beta() {
        let w = random_stable_wfa(1, 3, 2, 0.7).unwrap();
        let s = hankel_singular_values(&w).unwrap();
        let scaled = w.with_beta(w.beta() * 2.5).unwrap();
        let s2 = hankel_singular_values(&scaled).unwrap();
        for (a, b) in s.iter().zip(&s2) {
            assert_relative_eq!(*b, 2.5 * a, max_relative = 1e-10);
        }
    }

    #[test]
    fn e2_singular_values_match_truncated_svd() {
        let s = hankel_singular_values(&e2()).unwrap();
        let big = big_block_svd(&e2(), 64);
        assert_abs_diff_eq!(s[0], big[0], epsilon = 1e-8);
        assert_abs_diff_eq!(s[1], big[1], epsilon = 1e-8);
    }

    #[test]
    fn non_minimal_is_rejected() {
        // the second state is unreachable from alpha
        let w = Wfa::one_letter(
            DVector::from_vec(vec![1.0, 0.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 0.2])),
            DVector::from_vec(vec![1.0, 1.0]),
        )
        .unwrap();
        assert!(matches!(hankel_singular_values(&w), Err(Error::Degenerate(_))));
        assert!(matches!(aak_approximate(&w, 0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn schmidt_pairs_satisfy_hankel_relations() {
        let w = random_stable_wfa(1, 3, 9, 0.75).unwrap();
        let size = 96;
        let h = build_hankel(&w, size - 1, size - 1).unwrap();
        for pair in schmidt_pairs(&w).unwrap() {
            let v = DVector::from_vec(pair.v_coefficients(size));
            let wv = DVector::from_vec(pair.w_coefficients(size));
            let hv = h.entries() * &v;
            let hw = h.entries().transpose() * &wv;
            assert!((hv - &wv * pair.sigma).amax() < 1e-10);
            let gap = (hw - &v * pair.sigma).amax();
            assert!(gap < 1e-10, "sigma {} gap {gap:e} wnorm {}", pair.sigma, wv.norm());
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn schmidt_functions_match_coefficients() {
        let w = random_stable_wfa(1, 3, 12, 0.6).unwrap();
        let pair = &schmidt_pairs(&w).unwrap()[1];
        let z = Complex::from_polar(0.9, 0.4);
        let v: Complex<f64> = pair
            .v_coefficients(300)
            .iter()
            .enumerate()
            .map(|(j, c)| z.powi(j as i32) * *c)
            .sum();
        assert!((pair.v_hat(z).unwrap() - v).norm() < 1e-12);
        let zo = Complex::from_polar(1.1, -0.7);
        let ww: Complex<f64> = pair
            .w_coefficients(400)
            .iter()
            .enumerate()
            .map(|(i, c)| zo.powi(-(i as i32) - 1) * *c)
            .sum();
        assert!((pair.w_hat(zo).unwrap() - ww).norm() < 1e-12);
    }

    #[test]
    fn rank_zero_approximation_of_geometric() {
        let r = aak_approximate(&scalar(0.5, 1.0), 0).unwrap();
        assert_abs_diff_eq!(r.error, 4.0 / 3.0, epsilon = 1e-12);
        assert!(r.symbol.coefficients(10).iter().all(|&c| c == 0.0));
        assert_abs_diff_eq!(r.achieved_error, 4.0 / 3.0, epsilon = 1e-9);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn e2_rank_one() {
        let w = e2();
        let r = aak_approximate(&w, 1).unwrap();
        let s = hankel_singular_values(&w).unwrap();
        let g = r.approximant_block(64).unwrap();
        let h = build_hankel(&w, 63, 63).unwrap();
        let err = spectral_norm(&(h.entries() - g.entries())).unwrap();
        assert!((err - s[1]).abs() <= 1e-6 * s[0], "err {err} vs sigma_1 {}", s[1]);
        assert_eq!(r.approx_wfa.num_states(), 1);
        assert!(r.reproduction_error < 1e-10);
        assert!(check_hankel_property(&g, 0.0).holds);
        assert_eq!(hankel_rank(&g, DEFAULT_RANK_TOL).unwrap(), 1);
    }

    #[test]
    fn error_symbol_has_constant_modulus() {
        let w = random_stable_wfa(1, 4, 33, 0.8).unwrap();
        for k in 1..4 {
            let r = aak_approximate(&w, k).unwrap();
            let hi = r.error_symbol.sampled_sup_norm(1024);
            let lo = r.error_symbol.sampled_min_modulus(1024);
            assert_relative_eq!(hi, r.error, max_relative = 1e-6);
            assert_relative_eq!(lo, r.error, max_relative = 1e-6);
        }
    }

    #[test]
    fn error_symbol_matches_resolvent_route() {
        let w = random_stable_wfa(1, 3, 5, 0.8).unwrap();
        let r = aak_approximate(&w, 1).unwrap();
        let pair = &schmidt_pairs(&w).unwrap()[1];
        for t in [0.1, 1.3, 2.9, 4.4] {
            let z = Complex::from_polar(1.0, t);
            let direct = pair.w_hat(z).unwrap() / pair.v_hat(z).unwrap() * pair.sigma;
            assert!((direct - r.error_symbol.eval(z)).norm() < 1e-10 * r.error);
        }
    }

    #[test]
    fn k_must_be_below_state_count() {
        assert!(matches!(aak_approximate(&e2(), 2), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn approximant_independent_of_start_size() {
        let w = random_stable_wfa(1, 4, 8, 0.8).unwrap();
        let a = aak_approximate_with(&w, 2, &AakOptions { start_size: Some(16), ..Default::default() }).unwrap();
        let b = aak_approximate_with(&w, 2, &AakOptions { start_size: Some(48), ..Default::default() }).unwrap();
        let ga = a.approximant_block(40).unwrap();
        let gb = b.approximant_block(40).unwrap();
        assert_abs_diff_eq!(ga.entries(), gb.entries(), epsilon = 1e-12);
    }
}
