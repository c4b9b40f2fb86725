//! Real polynomials in ascending coefficient order, with just enough algebra
//! for rational-symbol manipulation: products, division, root splitting,
//! Bezout identities, and Laurent expansion of proper fractions.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::eigenvalues;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly(Vec<f64>);

impl Poly {
    /// `coeffs[i]` multiplies `z^i`. Trailing zeros are dropped.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Poly(coeffs);
        p.strip();
        p
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![1.0])
    }

    fn strip(&mut self) {
        while matches!(self.0.last(), Some(&c) if c == 0.0) {
            self.0.pop();
        }
    }

    /// Drops leading coefficients below `rel * max|c|`.
    pub fn trimmed(&self, rel: f64) -> Self {
        let scale = self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut v = self.0.clone();
        while matches!(v.last(), Some(c) if c.abs() <= rel * scale) {
            v.pop();
        }
        Poly(v)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0)
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.0.get(i).copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, z: Complex<f64>) -> Complex<f64> {
        self.0
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// `z^deg p(1/z)` for a declared degree `deg >= degree(p)`.
    pub fn reversed(&self, deg: usize) -> Poly {
        let mut v = vec![0.0; deg + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[deg - i] = c;
        }
        Poly::new(v)
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), Poly::new(rem));
        }
        let mut quot = vec![0.0; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd] / lead;
            quot[i] = c;
            for (j, &dc) in divisor.0.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
            rem[i + dd] = 0.0;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic polynomial with the given roots; complex roots must come in conjugate pairs.
    pub fn from_roots(roots: &[Complex<f64>]) -> Poly {
        let mut c = vec![Complex::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= ci * r;
            }
            c = next;
        }
        Poly::new(c.into_iter().map(|z| z.re).collect())
    }

    /// Roots as eigenvalues of the companion matrix.
    pub fn roots(&self) -> Result<Vec<Complex<f64>>> {
        let deg = match self.degree() {
            None => return Err(Error::InvalidInput("roots of the zero polynomial".into())),
            Some(d) => d,
        };
        if deg == 0 {
            return Ok(Vec::new());
        }
        let lead = self.leading();
        let mut comp = DMatrix::zeros(deg, deg);
        for i in 0..deg {
            comp[(0, i)] = -self.0[deg - 1 - i] / lead;
        }
        for i in 1..deg {
            comp[(i, i - 1)] = 1.0;
        }
        eigenvalues(&comp)
    }
}

/// Solves `x * a + y * b = c` with `deg x < deg b`, `deg y < deg a`.
///
/// `a` and `b` must be coprime and `deg c < deg a + deg b`.
pub fn bezout(a: &Poly, b: &Poly, c: &Poly) -> Result<(Poly, Poly)> {
    let da = a.degree().unwrap_or(0);
    let db = b.degree().unwrap_or(0);
    let size = da + db;
    if size == 0 {
        // both constants: x * a = c
        return Ok((c.scale(1.0 / a.leading()), Poly::zero()));
    }
    if c.degree().is_some_and(|d| d >= size) {
        return Err(Error::InvalidInput("Bezout right-hand side degree too high".into()));
    }
    // unknowns: x_0..x_{db-1}, y_0..y_{da-1}
    let mut m = DMatrix::zeros(size, size);
    for j in 0..db {
        for (i, &ac) in a.coeffs().iter().enumerate() {
            m[(i + j, j)] += ac;
        }
    }
    for j in 0..da {
        for (i, &bc) in b.coeffs().iter().enumerate() {
            m[(i + j, db + j)] += bc;
        }
    }
    let rhs = DVector::from_iterator(size, (0..size).map(|i| c.coeff(i)));
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numeric("Bezout system is singular (common roots)".into()))?;
    let x = Poly::new(sol.rows(0, db).iter().copied().collect());
    let y = Poly::new(sol.rows(db, da).iter().copied().collect());
    Ok((x, y))
}

/// First `count` coefficients `h_m` of `num / den = sum_{m >= 0} h_m z^{-m-1}`,
/// the expansion valid outside the largest root of `den`. Requires `deg num < deg den`.
pub fn laurent_tail(num: &Poly, den: &Poly, count: usize) -> Vec<f64> {
    let p = den.degree().expect("zero denominator");
    assert!(
        num.degree().is_none_or(|d| d < p),
        "numerator must have lower degree than denominator"
    );
    let lead = den.leading();
    let mut h = Vec::with_capacity(count);
    for t in 0..count {
        // coefficient of z^{p-1-t} in den(z) * sum h_m z^{-m-1}
        let mut acc = if t < p { num.coeff(p - 1 - t) } else { 0.0 };
        let lo = p.saturating_sub(t);
        for l in lo..p {
            acc -= den.coeff(l) * h[l + t - p];
        }
        h.push(acc / lead);
    }
    h
}
