//! Numerical maximization of the functional over the discretized measure
//! space of a class: multistart Nelder-Mead on (softmax weights, angles).
//!
//! phi is piecewise-smooth in the measure parameters and the parameter count
//! is small, so derivative-free simplex descent with seeded random restarts
//! is the right tool; restarts handle multimodality.  Every restart derives
//! its generator from (seed, restart index), runs independently (possibly in
//! parallel), and the reduction is a maximum with ties broken by the lowest
//! restart index, so results are bitwise reproducible.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{bound, BoundResult, DomainCode, ValidBound};
use crate::classes::{series_from_measure, AtomicMeasure, ClassSpec};
use crate::error::{Error, Result};
use crate::series::{eval_functional, FunctionalQuery};

/// Clamp for softmax logits; beyond this the weights are saturated far past
/// any tolerance in play.
const LOGIT_CLAMP: f64 = 60.0;

/// Knobs for one search: K atoms, restart count, iteration budget, seed and
/// stopping tolerances.  A fixed seed makes the whole search bitwise
/// reproducible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub atoms: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop when the simplex value spread falls below this (relative).
    pub ftol: f64,
    /// Stop when the simplex collapses below this diameter.
    pub xtol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            atoms: 6,
            restarts: 200,
            max_iters: 500,
            seed: 42,
            ftol: 1e-13,
            xtol: 1e-10,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.atoms < 1 {
            return Err(Error::InvalidConfig("atoms must be >= 1".into()));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be >= 1".into()));
        }
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
        }
        if !(self.ftol > 0.0) || !(self.xtol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// One restart's outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartSummary {
    pub index: usize,
    pub value: f64,
    pub iterations: usize,
}

/// Outcome of a full multistart search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    /// phi of the series generated from `best_measure` (recomputed).
    pub best_value: f64,
    pub best_measure: AtomicMeasure,
    /// bound - best_value, when the theorems cover the query.
    pub bound_gap: Option<f64>,
    /// Iterations summed over all restarts.
    pub iterations_used: usize,
    pub restart_trace: Vec<RestartSummary>,
}

/// One row of a lambda sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    /// The bound when the theorems cover the cell.
    pub bound: Option<ValidBound>,
    /// Why the cell is uncovered, when it is.
    pub outside: Option<DomainCode>,
    pub best_found: f64,
    pub gap: Option<f64>,
}

fn softmax_weights(logits: &[f64], k: usize) -> Vec<f64> {
    debug_assert_eq!(logits.len(), k - 1);
    let mx = logits
        .iter()
        .fold(0.0f64, |a, &u| a.max(u.clamp(-LOGIT_CLAMP, LOGIT_CLAMP)));
    let mut e: Vec<f64> = logits
        .iter()
        .map(|&u| (u.clamp(-LOGIT_CLAMP, LOGIT_CLAMP) - mx).exp())
        .collect();
    e.push((-mx).exp());
    let total: f64 = e.iter().sum();
    let mut w: Vec<f64> = e.iter().map(|&x| x / total).collect();
    // Pin the sum to 1 so the measure validator never sees drift.
    let rest: f64 = w[..k - 1].iter().sum();
    w[k - 1] = (1.0 - rest).max(0.0);
    w
}

/// Decode a parameter vector into a measure.  Parameters are K-1 softmax
/// logits followed by K angles; for symmetric classes every atom (w, t) is
/// paired with (w, 2pi - t), halving into w/2 each.
fn measure_from_params(params: &[f64], k: usize, symmetric: bool) -> Result<AtomicMeasure> {
    let weights = softmax_weights(&params[..k - 1], k);
    let angles = &params[k - 1..];
    if symmetric {
        let mut atoms = Vec::with_capacity(2 * k);
        for (w, &t) in weights.iter().zip(angles) {
            atoms.push((w / 2.0, t));
            atoms.push((w / 2.0, -t));
        }
        AtomicMeasure::new_symmetric(atoms)
    } else {
        AtomicMeasure::new(weights.into_iter().zip(angles.iter().copied()))
    }
}

/// Maximize phi(f, n, m; lambda) over measure-generated members of `spec`.
pub fn maximize_functional(
    spec: &ClassSpec,
    q: &FunctionalQuery,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    spec.validate()?;
    cfg.validate()?;
    if !spec.has_representation() {
        return Err(Error::UnsupportedClass(spec.name().into()));
    }
    let symmetric = spec.needs_symmetric_measure();
    let k = cfg.atoms;
    let dims = 2 * k - 1;
    let order = q.required_order();

    let objective = |params: &[f64]| -> f64 {
        let measure = measure_from_params(params, k, symmetric).expect("decoded measure");
        let series = series_from_measure(spec, &measure, order).expect("representable class");
        -eval_functional(&series, q).expect("order sized to query")
    };

    let restarts: Vec<(RestartSummary, Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(index as u64);
            let mut x0 = Vec::with_capacity(dims);
            for _ in 0..k - 1 {
                x0.push(rng.random_range(-1.0..1.0));
            }
            for _ in 0..k {
                x0.push(rng.random_range(0.0..std::f64::consts::TAU));
            }
            let (x, fx, iterations) = nelder_mead(&objective, x0, 0.6, cfg);
            (
                RestartSummary {
                    index,
                    value: -fx,
                    iterations,
                },
                x,
            )
        })
        .collect();

    let mut best_idx = 0;
    for i in 1..restarts.len() {
        if restarts[i].0.value > restarts[best_idx].0.value {
            best_idx = i;
        }
    }
    let best_params = &restarts[best_idx].1;
    let best_measure = measure_from_params(best_params, k, symmetric)?;
    let best_series = series_from_measure(spec, &best_measure, order)?;
    let best_value = eval_functional(&best_series, q)?;

    let bound_gap = match bound(spec, q)? {
        BoundResult::Valid(v) => Some(v.value - best_value),
        BoundResult::OutsideDomain(_) => None,
    };

    Ok(SearchResult {
        best_value,
        best_measure,
        bound_gap,
        iterations_used: restarts.iter().map(|(s, _)| s.iterations).sum(),
        restart_trace: restarts.into_iter().map(|(s, _)| s).collect(),
    })
}

/// One search per lambda; every row is reproducible from (seed, row index)
/// alone, independent of the other rows.
pub fn sweep(
    spec: &ClassSpec,
    n: usize,
    m: usize,
    lambda_grid: &[f64],
    cfg: &SearchConfig,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(lambda_grid.len());
    for (row_index, &lambda) in lambda_grid.iter().enumerate() {
        let q = FunctionalQuery::new(n, m, lambda)?;
        let row_cfg = SearchConfig {
            seed: derive_row_seed(cfg.seed, row_index as u64),
            ..*cfg
        };
        let result = maximize_functional(spec, &q, &row_cfg)?;
        let (bound_val, outside) = match bound(spec, &q)? {
            BoundResult::Valid(v) => (Some(v), None),
            BoundResult::OutsideDomain(code) => (None, Some(code)),
        };
        rows.push(SweepRow {
            lambda,
            gap: bound_val.as_ref().map(|v| v.value - result.best_value),
            bound: bound_val,
            outside,
            best_found: result.best_value,
        });
    }
    Ok(rows)
}

/// SplitMix64 step: decorrelates per-row seeds from a base seed.
pub fn derive_row_seed(seed: u64, row: u64) -> u64 {
    let mut z = seed
        .wrapping_add(row.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Plain Nelder-Mead minimization with standard coefficients and a shrink
/// step; returns (best point, best value, iterations run).
fn nelder_mead(
    f: &(impl Fn(&[f64]) -> f64 + ?Sized),
    x0: Vec<f64>,
    step: f64,
    cfg: &SearchConfig,
) -> (Vec<f64>, f64, usize) {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let dims = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dims + 1);
    simplex.push(x0.clone());
    for i in 0..dims {
        let mut p = x0.clone();
        p[i] += step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let mut iterations = 0;
    while iterations < cfg.max_iters {
        iterations += 1;
        let mut order: Vec<usize> = (0..=dims).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[dims];
        let second_worst = order[dims - 1];

        let spread = values[worst] - values[best];
        if spread <= cfg.ftol * (1.0 + values[best].abs()) {
            break;
        }
        let diameter = simplex
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&simplex[best])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if diameter <= cfg.xtol {
            break;
        }

        let mut centroid = vec![0.0; dims];
        for &i in order.iter().take(dims) {
            for (c, &x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x;
            }
        }
        for c in &mut centroid {
            *c /= dims as f64;
        }

        let reflect: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(&c, &w)| c + ALPHA * (c - w))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[best] {
            let expand: Vec<f64> = centroid
                .iter()
                .zip(&reflect)
                .map(|(&c, &r)| c + GAMMA * (r - c))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[worst] = expand;
                values[worst] = f_expand;
            } else {
                simplex[worst] = reflect;
                values[worst] = f_reflect;
            }
            continue;
        }
        if f_reflect < values[second_worst] {
            simplex[worst] = reflect;
            values[worst] = f_reflect;
            continue;
        }

        let contract: Vec<f64> = centroid
            .iter()
            .zip(&simplex[worst])
            .map(|(&c, &w)| c + RHO * (w - c))
            .collect();
        let f_contract = f(&contract);
        if f_contract < values[worst] {
            simplex[worst] = contract;
            values[worst] = f_contract;
            continue;
        }

        let anchor = simplex[best].clone();
        for i in 0..=dims {
            if i == best {
                continue;
            }
            let shrunk: Vec<f64> = anchor
                .iter()
                .zip(&simplex[i])
                .map(|(&b, &x)| b + SIGMA * (x - b))
                .collect();
            values[i] = f(&shrunk);
            simplex[i] = shrunk;
        }
    }

    let mut best = 0;
    for i in 1..values.len() {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex.swap_remove(best), values[best], iterations)
}
