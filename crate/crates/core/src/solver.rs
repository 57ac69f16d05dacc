//! Load-incremented Newton–Raphson with convergence-rate bookkeeping.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::assembly::Problem;
use crate::error::{Error, Result};
use crate::linalg::solve_banded;

/// Default iteration cap per increment.
pub const DEFAULT_MAX_ITER: usize = 30;

/// Default cap of the powers-of-two increment search.
pub const DEFAULT_SEARCH_CAP: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tol: f64,
    pub n_increments: usize,
    pub max_iter: usize,
}

impl SolverConfig {
    pub fn new(tol: f64, n_increments: usize) -> Self {
        Self { tol, n_increments, max_iter: DEFAULT_MAX_ITER }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tolerance {} must be positive", self.tol)));
        }
        if self.n_increments == 0 {
            return Err(Error::Config("at least one load increment is required".into()));
        }
        if self.max_iter < 3 {
            return Err(Error::Config("max_iter must be at least 3".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IncrementReport {
    pub increment: usize,
    pub t: f64,
    /// Number of linear solves; zero when the predictor already satisfies the criterion.
    pub iterations: usize,
    /// Local quadratic convergence rate, when at least three iterates exist.
    pub rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonReport {
    pub increments: Vec<IncrementReport>,
    pub max_iter: usize,
}

impl NewtonReport {
    /// Arithmetic mean and population standard deviation of iteration counts.
    pub fn iteration_stats(&self) -> (f64, f64) {
        let v: Vec<f64> = self.increments.iter().map(|i| i.iterations as f64).collect();
        mean_std(&v)
    }

    /// Geometric mean and geometric standard deviation of the positive rates.
    pub fn rate_stats(&self) -> Option<(f64, f64)> {
        let logs: Vec<f64> = self.increments.iter().filter_map(|i| i.rate).filter(|&r| r > 0.0).map(f64::ln).collect();
        if logs.is_empty() {
            return None;
        }
        let (m, s) = mean_std(&logs);
        Some((m.exp(), s.exp()))
    }
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    (m, var.sqrt())
}

/// Converged state at one load parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub t: f64,
    pub x: DVector<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub steps: Vec<Step>,
    pub report: NewtonReport,
}

impl Solution {
    pub fn final_state(&self) -> &DVector<f64> {
        &self.steps.last().expect("a solution has at least one step").x
    }
}

/// `r = ‖x_{m−1} − x_m‖ / ‖x_{m−2} − x_m‖²` from the last three iterates.
pub fn convergence_rate(history: &[DVector<f64>]) -> Result<f64> {
    let m = history.len();
    if m < 3 {
        return Err(Error::InsufficientHistory(m));
    }
    let (a, b, c) = (&history[m - 3], &history[m - 2], &history[m - 1]);
    let num = (b - c).norm();
    if num == 0.0 {
        return Ok(0.0);
    }
    Ok(num / (a - c).norm_squared())
}

/// Newton iteration at a fixed load parameter starting from `x`.
/// Returns the iteration count and the last three iterates.
fn newton_increment(
    problem: &Problem,
    x: &mut DVector<f64>,
    t: f64,
    cfg: &SolverConfig,
    increment: usize,
    ukeys: &[f64],
    ekeys: &[f64],
) -> Result<(usize, Vec<DVector<f64>>)> {
    let threshold = cfg.tol * (x.len() as f64).sqrt();
    let mut history = vec![x.clone()];
    let mut iterations = 0;
    loop {
        let (f, jac) = problem.residual_and_jacobian(x, t)?;
        let norm = f.norm();
        if !norm.is_finite() {
            return Err(Error::NonConvergence { increment, iterations });
        }
        if norm < threshold {
            return Ok((iterations, history));
        }
        if iterations == cfg.max_iter {
            return Err(Error::NonConvergence { increment, iterations });
        }
        let dx = solve_banded(&jac, &f, ukeys, ekeys)?;
        *x -= dx;
        iterations += 1;
        history.push(x.clone());
        if history.len() > 3 {
            history.remove(0);
        }
    }
}

/// Uniform load stepping `t_k = k / n_increments` from the state `x0`.
pub fn newton_solve(problem: &Problem, x0: &DVector<f64>, cfg: &SolverConfig) -> Result<Solution> {
    cfg.validate()?;
    if x0.len() != problem.n_unknowns() {
        return Err(Error::DimensionMismatch { expected: problem.n_unknowns(), got: x0.len() });
    }
    let ukeys = problem.unknown_keys();
    let ekeys = problem.equation_keys();
    let mut x = x0.clone();
    let mut steps = Vec::with_capacity(cfg.n_increments);
    let mut increments = Vec::with_capacity(cfg.n_increments);
    for k in 1..=cfg.n_increments {
        let t = k as f64 / cfg.n_increments as f64;
        let (iterations, history) = newton_increment(problem, &mut x, t, cfg, k, &ukeys, &ekeys)?;
        increments.push(IncrementReport { increment: k, t, iterations, rate: convergence_rate(&history).ok() });
        steps.push(Step { t, x: x.clone() });
    }
    Ok(Solution { steps, report: NewtonReport { increments, max_iter: cfg.max_iter } })
}

/// Smallest power of two `n ≤ cap` for which uniform stepping converges.
pub fn min_increment_search(problem: &Problem, x0: &DVector<f64>, template: &SolverConfig, cap: usize) -> Result<usize> {
    template.validate()?;
    let mut n = 1;
    while n <= cap {
        let cfg = SolverConfig { n_increments: n, ..*template };
        match newton_solve(problem, x0, &cfg) {
            Ok(_) => return Ok(n),
            Err(Error::DimensionMismatch { expected, got }) => return Err(Error::DimensionMismatch { expected, got }),
            Err(_) => n *= 2,
        }
    }
    Err(Error::SearchExhausted(cap))
}
