//! Shift search for τ ∈ [T,2T] with |ζ^{(k)}(σ+iτ;α) − a_k| < ε, and the
//! function-approximation workflow built on it.

mod approx;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::afe::truncated_value;
use crate::error::{Error, Result};
use crate::fit::TargetSpec;
use crate::zeta::scan::ShiftEvaluator;
use crate::zeta::ComplexPoint;

pub use approx::{approx_function, choose_delta, delta_residual, taylor_coeffs, ApproxJob, ApproxReport, TermCheck};

/// Heights up to this use the Euler–Maclaurin evaluator; beyond it the
/// truncated Dirichlet sum with cutoff t^{1/3} is used.
pub const ORACLE_LIMIT: f64 = 1e4;

/// Degree whose truncation length t^{1/d} is used beyond [`ORACLE_LIMIT`].
const TRUNCATION_DEGREE: u32 = 3;

const CHUNK: usize = 1024;

/// The window [T, 2T] with its scan resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchWindow {
    pub t: f64,
    pub grid_points: usize,
    pub refine_iters: usize,
}

impl SearchWindow {
    pub fn new(t: f64, grid_points: usize) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("T = {t} must be positive")));
        }
        if grid_points < 10 {
            return Err(Error::Domain(format!("grid_points = {grid_points} must be at least 10")));
        }
        Ok(SearchWindow {
            t,
            grid_points,
            refine_iters: 60,
        })
    }

    pub fn step(&self) -> f64 {
        self.t / (self.grid_points - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.grid_points {
            2.0 * self.t
        } else {
            self.t + j as f64 * self.step()
        }
    }
}

impl Default for SearchWindow {
    fn default() -> Self {
        SearchWindow {
            t: 1e3,
            grid_points: 200_000,
            refine_iters: 60,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPath {
    Oracle,
    Truncated,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub tau_best: f64,
    pub errors_per_k: Vec<f64>,
    pub max_error: f64,
    pub satisfied: bool,
    /// ζ^{(k)}(σ+iτ_best;α) for k = 0..=N.
    pub values: Vec<Complex64>,
    pub grid_best_tau: f64,
    pub grid_best_error: f64,
    /// Smallest grid height already meeting ε, if any.
    pub first_satisfying_tau: Option<f64>,
    pub path: EvalPath,
}

/// ζ^{(k)}(σ+iτ;α), k ≤ N, along the evaluation path chosen by height.
pub(crate) struct ShiftValues {
    sigma: f64,
    alpha: f64,
    max_k: usize,
    oracle: Option<ShiftEvaluator>,
}

impl ShiftValues {
    pub(crate) fn new(sigma: f64, alpha: f64, max_k: usize, t_max: f64) -> Result<Self> {
        // Headroom for grid nodes t0 + j·h that round a few ulps past t_max.
        let t_max = t_max.min(ORACLE_LIMIT) * (1.0 + 1e-12);
        let oracle = if t_max >= 1.0 {
            Some(ShiftEvaluator::new(sigma, alpha, max_k, t_max)?)
        } else {
            None
        };
        Ok(ShiftValues {
            sigma,
            alpha,
            max_k,
            oracle,
        })
    }

    fn truncated(&self, t: f64) -> Vec<Complex64> {
        let s = ComplexPoint::new(self.sigma, t);
        (0..=self.max_k)
            .map(|k| truncated_value(s, self.alpha, TRUNCATION_DEGREE, k as u32))
            .collect()
    }

    pub(crate) fn eval(&self, t: f64) -> Result<Vec<Complex64>> {
        match &self.oracle {
            Some(o) if t.abs() <= o.t_max() => o.eval(t),
            _ => Ok(self.truncated(t)),
        }
    }

    fn sweep(&self, t0: f64, h: f64, count: usize) -> Result<Vec<Vec<Complex64>>> {
        let t_last = t0 + h * (count.saturating_sub(1)) as f64;
        match &self.oracle {
            Some(o) if t_last <= o.t_max() => o.sweep(t0, h, count),
            _ => (0..count).map(|j| self.eval(t0 + j as f64 * h)).collect(),
        }
    }
}

fn max_error(values: &[Complex64], targets: &[Complex64]) -> f64 {
    values
        .iter()
        .zip(targets)
        .map(|(v, a)| (v - a).norm())
        .fold(0.0, f64::max)
}

/// Scans the grid on [T,2T], refines the best node by golden-section search
/// on its bracketing neighbours and reports whether max_k error < ε.
pub fn search_shift(targets: &TargetSpec, alpha: f64, window: &SearchWindow) -> Result<SearchResult> {
    let t_hi = 2.0 * window.t;
    let values = ShiftValues::new(targets.sigma, alpha, targets.order(), t_hi)?;
    let path = if t_hi <= ORACLE_LIMIT {
        EvalPath::Oracle
    } else if window.t > ORACLE_LIMIT {
        EvalPath::Truncated
    } else {
        EvalPath::Mixed
    };
    if path != EvalPath::Oracle {
        log::info!("heights above {ORACLE_LIMIT:e} use the truncated sum with cutoff t^(1/{TRUNCATION_DEGREE})");
    }
    let h = window.step();
    let n = window.grid_points;
    let eps = targets.epsilon;

    // (best error, best index, first satisfying index) per chunk, reduced in order.
    let chunks: Vec<(f64, usize, Option<usize>)> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<(f64, usize, Option<usize>)> {
            let start = c * CHUNK;
            let count = CHUNK.min(n - start);
            let vals = values.sweep(window.t + start as f64 * h, h, count)?;
            let mut best = (f64::INFINITY, start);
            let mut first = None;
            for (i, v) in vals.iter().enumerate() {
                let e = max_error(v, &targets.a);
                if e < best.0 {
                    best = (e, start + i);
                }
                if first.is_none() && e < eps {
                    first = Some(start + i);
                }
            }
            Ok((best.0, best.1, first))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut grid_best = (f64::INFINITY, 0usize);
    let mut first = None;
    for (e, j, f) in chunks {
        if e < grid_best.0 {
            grid_best = (e, j);
        }
        if first.is_none() {
            first = f;
        }
    }
    let j = grid_best.1;
    let grid_tau = window.node(j);

    let objective = |t: f64| -> Result<f64> { Ok(max_error(&values.eval(t)?, &targets.a)) };
    let lo = window.node(j.saturating_sub(1));
    let hi = window.node((j + 1).min(n - 1));
    let (mut tau, mut err) = golden_section(objective, lo, hi, window.refine_iters)?;
    let grid_err = objective(grid_tau)?;
    if !(err < grid_err) {
        tau = grid_tau;
        err = grid_err;
    }
    let vals = values.eval(tau)?;
    let errors_per_k: Vec<f64> = vals.iter().zip(&targets.a).map(|(v, a)| (v - a).norm()).collect();
    Ok(SearchResult {
        tau_best: tau,
        errors_per_k,
        max_error: err,
        satisfied: err < eps,
        values: vals,
        grid_best_tau: grid_tau,
        grid_best_error: grid_err,
        first_satisfying_tau: first.map(|i| window.node(i)),
        path,
    })
}

/// Minimizes `f` on [a,b]; returns the best point seen.
fn golden_section(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, iters: usize) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    // Probes can round past the bracket; the bracket end may be the edge of the window.
    let (lo, hi) = (a, b);
    let mut c = (b - inv_phi * (b - a)).clamp(lo, hi);
    let mut d = (a + inv_phi * (b - a)).clamp(lo, hi);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = (b - inv_phi * (b - a)).clamp(lo, hi);
            fc = f(c)?;
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = (a + inv_phi * (b - a)).clamp(lo, hi);
            fd = f(d)?;
            if fd < best.1 {
                best = (d, fd);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = golden_section(|x| Ok((x - 0.3) * (x - 0.3)), 0.0, 1.0, 60).unwrap();
        assert!((x - 0.3).abs() < 1e-9 && fx < 1e-18);
    }

    #[test]
    fn window_nodes() {
        let w = SearchWindow::new(10.0, 11).unwrap();
        assert_eq!(w.node(0), 10.0);
        assert_eq!(w.node(10), 20.0);
        assert!((w.node(5) - 15.0).abs() < 1e-12);
        assert!(SearchWindow::new(10.0, 5).is_err());
    }

    #[test]
    fn huge_epsilon_first_point() {
        let alpha = std::f64::consts::SQRT_2 - 1.0;
        let t = TargetSpec::new(vec![Complex64::new(0.0, 0.0)], 1.0, 1e6, 0.1).unwrap();
        let w = SearchWindow::new(50.0, 200).unwrap();
        let r = search_shift(&t, alpha, &w).unwrap();
        assert!(r.satisfied);
        assert_eq!(r.first_satisfying_tau, Some(50.0));
    }

    #[test]
    fn planted_target_small() {
        let alpha = std::f64::consts::SQRT_2 - 1.0;
        let tau_star = 61.234_567;
        let ev = ShiftEvaluator::new(1.0, alpha, 1, 100.0).unwrap();
        let a = ev.eval(tau_star).unwrap();
        let t = TargetSpec::new(a, 1.0, 1e-3, 0.1).unwrap();
        let w = SearchWindow::new(50.0, 50_000).unwrap();
        let r = search_shift(&t, alpha, &w).unwrap();
        assert!(r.satisfied, "{r:?}");
        assert!((r.tau_best - tau_star).abs() < 1e-6);
        assert!(r.max_error <= r.grid_best_error);
    }
}
