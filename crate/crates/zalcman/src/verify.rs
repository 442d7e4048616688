//! Membership and sharpness checks: truncated Hermitian forms, the
//! Caratheodory-Toeplitz positivity signal, and brute-force grid oracles for
//! the two moment lemmas.
//!
//! The Hermitian forms are infinite in the source inequalities, but a
//! finitely supported z-sequence kills every omitted term, so the truncated
//! evaluation here is exact.  Positivity for *all* admissible sequences is
//! what characterizes membership; sampling sequences therefore gives a
//! necessary-condition battery, and reports say so.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::bounds::{bound, ValidBound};
use crate::classes::{
    caratheodory_from_measure, extremal_series, series_from_measure, AtomicMeasure,
    CaratheodorySeries, ClassSpec, ExtremalSpec,
};
use crate::error::{Error, Result};
use crate::series::{eval_functional, CoefficientSeries, FunctionalQuery};

/// Outcome of one bound-vs-functional comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    /// margin >= -tolerance.
    pub passed: bool,
    /// bound - phi, signed.
    pub margin: f64,
    pub bound_used: ValidBound,
    pub functional_value: f64,
}

/// Compare phi(series, q) against the class bound.  Domain holes propagate
/// as errors since there is no bound to compare against.
pub fn check_bound(
    series: &CoefficientSeries,
    spec: &ClassSpec,
    q: &FunctionalQuery,
    tol: f64,
) -> Result<CheckReport> {
    let result = bound(spec, q)?;
    let valid = result.require_valid()?.clone();
    let phi = eval_functional(series, q)?;
    let margin = valid.value - phi;
    Ok(CheckReport {
        passed: margin >= -tol,
        margin,
        bound_used: valid,
        functional_value: phi,
    })
}

/// bound - phi(extremal); zero (to tolerance) for every claimed-sharp
/// (branch, extremal) pair.
pub fn sharpness_gap(ex: &ExtremalSpec, spec: &ClassSpec, q: &FunctionalQuery) -> Result<f64> {
    let valid = bound(spec, q)?.require_valid()?.clone();
    let series = extremal_series(ex, q.required_order())?;
    Ok(valid.value - eval_functional(&series, q)?)
}

/// Truncated positivity form for the Caratheodory class:
/// sum_j ( |2 z_j + sum_{k>=1} c_k z_{k+j}|^2 - |sum_{k>=0} c_{k+1} z_{k+j}|^2 ).
///
/// Nonnegative (up to rounding) exactly when p belongs to the class; needs
/// c_1..c_{M+1} for a z-sequence supported on 0..=M.
pub fn hermitian_form_p(c: &CaratheodorySeries, zseq: &[Complex64]) -> Result<f64> {
    if zseq.is_empty() {
        return Ok(0.0);
    }
    let m_top = zseq.len() - 1;
    if c.len() < m_top + 1 {
        return Err(Error::TruncationTooShort {
            required: m_top + 1,
            actual: c.len(),
        });
    }
    let mut total = 0.0;
    for j in 0..=m_top {
        let mut first = 2.0 * zseq[j];
        for k in 1..=(m_top - j) {
            first += c.coeffs()[k - 1] * zseq[k + j];
        }
        let mut second = Complex64::new(0.0, 0.0);
        for k in 0..=(m_top - j) {
            second += c.coeffs()[k] * zseq[k + j];
        }
        total += first.norm_sqr() - second.norm_sqr();
    }
    Ok(total)
}

/// Truncated positivity form for typically real functions, built from the
/// difference sequences a_{k+1} - a_{k-1} and a_{k+2} - a_k with a_0 := 0.
///
/// Needs a_1..a_{M+2} for a z-sequence supported on 0..=M.
pub fn hermitian_form_t(a: &CoefficientSeries, zseq: &[f64]) -> Result<f64> {
    if zseq.is_empty() {
        return Ok(0.0);
    }
    let m_top = zseq.len() - 1;
    if a.truncation_order() < m_top + 2 {
        return Err(Error::TruncationTooShort {
            required: m_top + 2,
            actual: a.truncation_order(),
        });
    }
    let mut total = 0.0;
    for j in 0..=m_top {
        let mut first = Complex64::new(2.0 * zseq[j], 0.0);
        for k in 1..=(m_top - j) {
            let diff = a.coeff_or_zero(k + 1)? - a.coeff_or_zero(k - 1)?;
            first += diff * zseq[k + j];
        }
        let mut second = Complex64::new(0.0, 0.0);
        for k in 0..=(m_top - j) {
            let diff = a.coeff_or_zero(k + 2)? - a.coeff_or_zero(k)?;
            second += diff * zseq[k + j];
        }
        total += first.norm_sqr() - second.norm_sqr();
    }
    Ok(total)
}

/// Minimum eigenvalue of the (N+1)x(N+1) Hermitian Toeplitz matrix with
/// diagonal 2 and first row c_1..c_N: the finite-section membership signal.
/// Values >= -1e-10 are consistent with membership; a genuine violator such
/// as c_1 = 3 goes clearly negative.
pub fn toeplitz_min_eig(c: &CaratheodorySeries) -> f64 {
    let size = c.len() + 1;
    // Hermitian H embedded as the real symmetric [[Re, -Im], [Im, Re]];
    // the embedding doubles multiplicities but keeps the spectrum.
    let mut m = DMatrix::<f64>::zeros(2 * size, 2 * size);
    for i in 0..size {
        for j in 0..size {
            let h = if i == j {
                Complex64::new(2.0, 0.0)
            } else if i > j {
                c.coeffs()[i - j - 1]
            } else {
                c.coeffs()[j - i - 1].conj()
            };
            m[(i, j)] = h.re;
            m[(i + size, j + size)] = h.re;
            m[(i, j + size)] = -h.im;
            m[(i + size, j)] = h.im;
        }
    }
    let eigen = m.symmetric_eigenvalues();
    eigen.iter().fold(f64::INFINITY, |acc, &x| acc.min(x))
}

/// Grid resolution for the brute-force oracles: `angles` points on [0, 2pi)
/// and `weights` convex weights for two-atom measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub angles: usize,
    pub weights: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            angles: 721,
            weights: 101,
        }
    }
}

/// Sharp value of |mu c_n c_m - c_{n+m}| over the Caratheodory class:
/// 2 inside 0 <= mu <= 1, 2|2 mu - 1| elsewhere.
pub fn caratheodory_product_bound(mu: f64) -> f64 {
    if (0.0..=1.0).contains(&mu) {
        2.0
    } else {
        2.0 * (2.0 * mu - 1.0).abs()
    }
}

/// Sharp value of the probability-moment functional: 1 inside
/// 0 <= lambda <= 2, |lambda - 1| elsewhere.
pub fn moment_functional_bound(lambda: f64) -> f64 {
    if (0.0..=2.0).contains(&lambda) {
        1.0
    } else {
        (lambda - 1.0).abs()
    }
}

/// Maximize `eval(sigma_n, sigma_m, sigma_{n+m})` over all one- and two-atom
/// probability measures on the grid, where sigma_k is the k-th moment
/// integral of e^{ikt}.  The reduction is a plain maximum, which is
/// order-independent, so parallel partitioning cannot change the result.
fn grid_max<F>(n: usize, m: usize, grid: &GridSpec, eval: F) -> f64
where
    F: Fn(Complex64, Complex64, Complex64) -> f64 + Sync,
{
    let angles = grid.angles.max(1);
    let weights = grid.weights.max(2);
    let step = std::f64::consts::TAU / angles as f64;
    let e_n: Vec<Complex64> = (0..angles)
        .map(|j| Complex64::from_polar(1.0, n as f64 * (j as f64 * step)))
        .collect();
    let e_m: Vec<Complex64> = (0..angles)
        .map(|j| Complex64::from_polar(1.0, m as f64 * (j as f64 * step)))
        .collect();
    let e_s: Vec<Complex64> = (0..angles)
        .map(|j| Complex64::from_polar(1.0, (n + m) as f64 * (j as f64 * step)))
        .collect();

    let single = (0..angles)
        .into_par_iter()
        .map(|j| eval(e_n[j], e_m[j], e_s[j]))
        .reduce(|| f64::NEG_INFINITY, f64::max);

    let double = (0..angles)
        .into_par_iter()
        .map(|j1| {
            let mut best = f64::NEG_INFINITY;
            for j2 in (j1 + 1)..angles {
                for wi in 0..weights {
                    let w = wi as f64 / (weights - 1) as f64;
                    let sn = w * e_n[j1] + (1.0 - w) * e_n[j2];
                    let sm = w * e_m[j1] + (1.0 - w) * e_m[j2];
                    let ss = w * e_s[j1] + (1.0 - w) * e_s[j2];
                    best = best.max(eval(sn, sm, ss));
                }
            }
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);

    single.max(double)
}

/// Brute-force maximum of |mu c_n c_m - c_{n+m}| over grid measures, with
/// c_k the Herglotz coefficients 2 sigma_k.  Never exceeds
/// [`caratheodory_product_bound`] and approaches it as the grid refines.
pub fn oracle_caratheodory_product(mu: f64, n: usize, m: usize, grid: &GridSpec) -> f64 {
    grid_max(n, m, grid, |sn, sm, ss| {
        (mu * (2.0 * sn) * (2.0 * sm) - 2.0 * ss).norm()
    })
}

/// Brute-force maximum of |lambda sigma_n sigma_m - sigma_{n+m}| over grid
/// measures.  Never exceeds [`moment_functional_bound`].
pub fn oracle_moment_functional(lambda: f64, n: usize, m: usize, grid: &GridSpec) -> f64 {
    grid_max(n, m, grid, |sn, sm, ss| (lambda * sn * sm - ss).norm())
}

/// Replay the exact two-entry Hermitian form each theorem's proof plugs into
/// the positivity characterization; nonnegative (up to rounding) for every
/// measure-generated member.
pub fn proof_form_replay(
    spec: &ClassSpec,
    measure: &AtomicMeasure,
    q: &FunctionalQuery,
) -> Result<f64> {
    spec.validate()?;
    let (n, m) = (q.n, q.m);
    match spec {
        ClassSpec::R { beta } | ClassSpec::F1 { beta } | ClassSpec::F2 { beta } => {
            let c = caratheodory_from_measure(measure, n + m - 2)?;
            let series = series_from_measure(spec, measure, q.required_order())?;
            let am = series.coeff(m)?;
            let mut z = vec![Complex64::new(0.0, 0.0); n + m - 2];
            z[n - 2] = q.lambda * (1.0 - beta) * am;
            z[n + m - 3] = if matches!(spec, ClassSpec::R { .. }) {
                Complex64::new(-(n as f64) * (1.0 - beta) / (n + m - 1) as f64, 0.0)
            } else {
                Complex64::new(-(1.0 - beta), 0.0)
            };
            hermitian_form_p(&c, &z)
        }
        ClassSpec::TypicallyReal => {
            let series = series_from_measure(spec, measure, q.required_order())?;
            let am = series.coeff(m)?.re;
            let mut z = vec![0.0; n + m - 2];
            z[n - 2] = q.lambda * am;
            z[n + m - 3] = -1.0;
            hermitian_form_t(&series, &z)
        }
        other => Err(Error::UnsupportedClass(other.name().into())),
    }
}
