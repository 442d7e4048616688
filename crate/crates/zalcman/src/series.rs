//! Truncated Taylor coefficients of normalized analytic functions and the
//! generalized Zalcman coefficient functional.
//!
//! A [`CoefficientSeries`] holds the coefficients a_1..a_N of
//! f(z) = z + a_2 z^2 + ... with a_1 = 1 (class A normalization).
//! Coefficients are stored dense from index 1; a_0 is an implicit 0 and is
//! never stored.  Everything here is a pure function on immutable values.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default truncation order used by generators when callers do not ask for
/// a specific one.  Desk-scale queries (n, m <= 32) fit comfortably.
pub const DEFAULT_ORDER: usize = 64;

/// Truncated Taylor coefficients a_1..a_N of a normalized analytic function.
///
/// Invariants: a_1 = 1 exactly and N >= 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeries {
    coeffs: Vec<Complex64>,
}

impl CoefficientSeries {
    /// Build from explicit coefficients `a_1..a_N` (index 0 of the vector is
    /// a_1).  Rejects series shorter than two terms or with a_1 != 1.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::OrderTooSmall {
                required: 2,
                got: coeffs.len(),
            });
        }
        let a1 = coeffs[0];
        if a1 != Complex64::new(1.0, 0.0) {
            return Err(Error::NotNormalized { got: a1 });
        }
        Ok(Self { coeffs })
    }

    /// Build from real coefficients `a_1..a_N`.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Build a_n = f(n) for n = 2..=order, with a_1 forced to exactly 1.
    pub fn from_fn(order: usize, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        if order < 2 {
            return Err(Error::OrderTooSmall {
                required: 2,
                got: order,
            });
        }
        let mut coeffs = Vec::with_capacity(order);
        coeffs.push(Complex64::new(1.0, 0.0));
        coeffs.extend((2..=order).map(f));
        Ok(Self { coeffs })
    }

    /// The identity function z (a_k = 0 for k >= 2).
    pub fn identity(order: usize) -> Result<Self> {
        Self::from_fn(order, |_| Complex64::new(0.0, 0.0))
    }

    /// Truncation order N: coefficients a_1..a_N are known.
    pub fn truncation_order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient a_n for 1 <= n <= N.
    pub fn coeff(&self, n: usize) -> Result<Complex64> {
        if n == 0 || n > self.coeffs.len() {
            return Err(Error::TruncationTooShort {
                required: n,
                actual: self.coeffs.len(),
            });
        }
        Ok(self.coeffs[n - 1])
    }

    /// Coefficient a_n with the a_0 = 0 convention; n beyond the truncation
    /// is an error, n = 0 is not.
    pub fn coeff_or_zero(&self, n: usize) -> Result<Complex64> {
        if n == 0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            self.coeff(n)
        }
    }

    /// The raw slice `[a_1, .., a_N]`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Largest |Im a_n| over the stored coefficients.
    pub fn max_imag_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.im.abs()))
    }
}

/// Indices and weight of one functional evaluation: phi = |lambda a_n a_m - a_{n+m-1}|.
///
/// `lambda` is the real weight; the same field serves as the mu of the
/// close-to-convex theorems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalQuery {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
}

impl FunctionalQuery {
    pub fn new(n: usize, m: usize, lambda: f64) -> Result<Self> {
        if n < 2 || m < 2 {
            return Err(Error::BadQueryIndex { n, m });
        }
        Ok(Self { n, m, lambda })
    }

    /// Highest coefficient index the functional touches.
    pub fn required_order(&self) -> usize {
        self.n + self.m - 1
    }
}

/// |lambda a_n a_m - a_{n+m-1}| in double precision.
pub fn eval_functional(series: &CoefficientSeries, q: &FunctionalQuery) -> Result<f64> {
    let an = series.coeff(q.n)?;
    let am = series.coeff(q.m)?;
    let atop = series.coeff(q.required_order())?;
    Ok((q.lambda * an * am - atop).norm())
}

/// Rotation g(z) = e^{-i theta} f(e^{i theta} z): multiplies a_n by
/// e^{i(n-1) theta}.  Leaves the functional invariant.
pub fn rotate(series: &CoefficientSeries, theta: f64) -> CoefficientSeries {
    let coeffs = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            if idx == 0 {
                a
            } else {
                a * Complex64::from_polar(1.0, idx as f64 * theta)
            }
        })
        .collect();
    CoefficientSeries { coeffs }
}

/// Inverse Alexander transform a_n -> a_n / n: carries starlike-hull
/// extremals onto convex-hull extremals.
pub fn alexander(series: &CoefficientSeries) -> CoefficientSeries {
    let coeffs = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(idx, &a)| a / (idx + 1) as f64)
        .collect();
    CoefficientSeries { coeffs }
}

/// Coefficients b_0..b_N of (1-z)^{-c}: b_0 = 1, b_k = b_{k-1} (c+k-1)/k.
///
/// Any real exponent is allowed; c <= 0 gives terminating or alternating
/// sequences.
pub fn binomial_series(c: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    for k in 1..=n_max {
        let prev = out[k - 1];
        out.push((prev * (c + (k - 1) as f64)) / k as f64);
    }
    out
}

/// Truncated Cauchy product of two power series indexed from power 0.
pub fn mul_trunc(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Truncated division num/den for series indexed from power 0; den[0] must be
/// nonzero.
pub fn div_trunc(num: &[f64], den: &[f64], len: usize) -> Vec<f64> {
    assert!(den[0] != 0.0, "series division needs a unit constant term");
    let mut out = vec![0.0; len];
    for i in 0..len {
        let mut acc = if i < num.len() { num[i] } else { 0.0 };
        for j in 1..=i.min(den.len() - 1) {
            acc -= den[j] * out[i - j];
        }
        out[i] = acc / den[0];
    }
    out
}
