use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{search_shift, SearchResult, SearchWindow};
use crate::error::{Error, Result};
use crate::fit::TargetSpec;
use crate::zeta::{hurwitz_zeta_f64, ComplexPoint, MAX_DERIVATIVE};

const CONTOUR_NODES: usize = 512;
const DISK_SAMPLES: usize = 1000;
const QUADRATURE_TOL: f64 = 1e-8;
const DELTA_RESIDUAL_TOL: f64 = 1e-10;
const ZETA_TOL: f64 = 1e-10;

pub type TargetFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A target function f analytic on |s − s₀| ≤ r, to be approximated by a
/// vertical shift of ζ(s;α) on a smaller disk.
#[derive(Clone)]
pub struct ApproxJob {
    pub s0: ComplexPoint,
    pub r: f64,
    pub f: TargetFn,
    pub epsilon: f64,
    pub delta0: f64,
    /// Fixed Taylor order; `None` selects the smallest order whose Cauchy
    /// tail bound is below ε.
    pub n: Option<usize>,
}

impl fmt::Debug for ApproxJob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxJob")
            .field("s0", &self.s0)
            .field("r", &self.r)
            .field("epsilon", &self.epsilon)
            .field("delta0", &self.delta0)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

impl ApproxJob {
    pub fn new(s0: ComplexPoint, r: f64, f: TargetFn, epsilon: f64, delta0: f64, n: Option<usize>) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("r = {r} must be positive")));
        }
        if !(delta0 > 0.0 && delta0 < 1.0) {
            return Err(Error::Domain(format!("delta0 = {delta0} outside (0,1)")));
        }
        if !(epsilon > 0.0) {
            return Err(Error::Domain(format!("epsilon = {epsilon} must be positive")));
        }
        if let Some(n) = n {
            if n > MAX_DERIVATIVE as usize {
                return Err(Error::Domain(format!("N = {n} exceeds {MAX_DERIVATIVE}")));
            }
        }
        Ok(ApproxJob {
            s0,
            r,
            f,
            epsilon,
            delta0,
            n,
        })
    }

    fn center(&self) -> Complex64 {
        self.s0.to_complex()
    }
}

/// Values of f at the m-th roots of unity scaled to the circle |s−s₀| = r.
fn circle_samples(job: &ApproxJob, m: usize) -> Vec<Complex64> {
    let c = job.center();
    (0..m)
        .into_par_iter()
        .map(|j| (job.f)(c + Complex64::from_polar(job.r, 2.0 * PI * j as f64 / m as f64)))
        .collect()
}

/// c_k = (1/m) Σ_j f(s₀ + r ω^j) (r ω^j)^{−k}, k = 0..=n.
fn coeffs_from_samples(samples: &[Complex64], r: f64, n: usize) -> Vec<Complex64> {
    let m = samples.len();
    (0..=n)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((j * k) % m) as f64 / m as f64))
                .sum();
            sum / (m as f64 * r.powi(k as i32))
        })
        .collect()
}

fn checked_coeffs(job: &ApproxJob, samples: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    let coarse = coeffs_from_samples(samples, job.r, n);
    let fine = coeffs_from_samples(&circle_samples(job, 2 * CONTOUR_NODES), job.r, n);
    let diff = coarse.iter().zip(&fine).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if !(diff <= QUADRATURE_TOL) {
        return Err(Error::QuadratureInconsistency { diff });
    }
    Ok(coarse)
}

/// Smallest N with M·δ₀^{N+1}/(1−δ₀) < ε, capped at the largest supported order.
fn select_order(m_f: f64, delta0: f64, epsilon: f64) -> usize {
    (0..=MAX_DERIVATIVE as usize)
        .find(|&n| m_f * delta0.powi(n as i32 + 1) / (1.0 - delta0) < epsilon)
        .unwrap_or(MAX_DERIVATIVE as usize)
}

fn max_norm(samples: &[Complex64]) -> f64 {
    samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn resolve_order(job: &ApproxJob, samples: &[Complex64]) -> usize {
    job.n
        .unwrap_or_else(|| select_order(max_norm(samples), job.delta0, job.epsilon))
}

/// Taylor coefficients f^{(k)}(s₀)/k!, k = 0..=N, by the trapezoidal rule on
/// the circle with 512 nodes, cross-checked against 1024 nodes.
pub fn taylor_coeffs(job: &ApproxJob) -> Result<Vec<Complex64>> {
    let samples = circle_samples(job, CONTOUR_NODES);
    let n = resolve_order(job, &samples);
    checked_coeffs(job, &samples, n)
}

/// M·δ^N/(1−δ) − ε(2 − exp(δr)).
pub fn delta_residual(delta: f64, m_tau: f64, n: usize, r: f64, epsilon: f64) -> f64 {
    m_tau * delta.powi(n as i32) / (1.0 - delta) - epsilon * (2.0 - (delta * r).exp())
}

/// Root δ of M·δ^N/(1−δ) = ε(2 − exp(δr)) on (0, min(1, ln 2 / r)).
pub fn choose_delta(m_tau: f64, n: usize, r: f64, epsilon: f64) -> Result<f64> {
    if !(m_tau > 0.0 && epsilon > 0.0 && r > 0.0) {
        return Err(Error::Domain(format!(
            "need M > 0, epsilon > 0, r > 0 (got {m_tau}, {epsilon}, {r})"
        )));
    }
    let g = |d: f64| delta_residual(d, m_tau, n, r, epsilon);
    let mut lo = 0.0;
    let mut hi = (LN_2 / r).min(1.0);
    let bracket = format!("(0, {hi})");
    if !(g(lo) < 0.0) {
        return Err(Error::NoRoot(format!("{bracket}: residual at 0 is {:e}", g(lo))));
    }
    // At hi the right side is 0 (or the left side is infinite), so g(hi) > 0.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if gm.abs() < DELTA_RESIDUAL_TOL {
            return Ok(mid);
        }
        if gm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let d = 0.5 * (lo + hi);
    if g(d).abs() < DELTA_RESIDUAL_TOL {
        Ok(d)
    } else {
        Err(Error::NoRoot(format!("{bracket}: residual {:e} at the limit of resolution", g(d))))
    }
}

/// A measured term of the three-part error split next to its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermCheck {
    pub measured: f64,
    pub bound: f64,
    pub holds: bool,
}

impl TermCheck {
    fn new(measured: f64, bound: f64) -> Self {
        TermCheck {
            measured,
            bound,
            holds: measured < bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub n: usize,
    /// τ = t₁ − t₀, the shift applied to s.
    pub tau: f64,
    /// Height t₁ ∈ [T,2T] found by the search.
    pub t1: f64,
    pub delta: f64,
    /// Root of the δ equation before capping at δ₀.
    pub delta_root: f64,
    pub m_f: f64,
    pub m_tau: f64,
    pub coefficients: Vec<Complex64>,
    pub search: SearchResult,
    /// |f − Taylor_N f| on the disk.
    pub sigma1: TermCheck,
    /// |Taylor_N ζ(·+iτ) − Taylor_N f| on the disk.
    pub sigma2: TermCheck,
    /// |ζ(·+iτ) − Taylor_N ζ(·+iτ)| on the disk.
    pub sigma3: TermCheck,
    pub max_error_on_disk: f64,
    pub bound_3eps_ok: bool,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Points of the disk |z| ≤ ρ on a Vogel spiral.
fn disk_points(rho: f64, count: usize) -> Vec<Complex64> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|j| Complex64::from_polar(rho * ((j as f64 + 0.5) / count as f64).sqrt(), j as f64 * golden_angle))
        .collect()
}

/// ζ(s+iτ;α) to ZETA_TOL, or to twice the attainable radius when rounding
/// at large heights puts ZETA_TOL out of reach.
fn shifted_zeta(s: Complex64, tau: f64, alpha: f64) -> Result<Complex64> {
    let p = ComplexPoint::new(s.re, s.im + tau);
    match hurwitz_zeta_f64(p, alpha, 0, ZETA_TOL) {
        Err(Error::PrecisionUnachievable { achieved, .. }) => hurwitz_zeta_f64(p, alpha, 0, 2.0 * achieved),
        r => r,
    }
}

/// Finds τ with max_{|s−s₀|≤δr} |ζ(s+iτ;α) − f(s)| < 3ε: Taylor coefficients of
/// f become derivative targets at σ₀ + it₁, t₁ ∈ [T,2T]; δ solves
/// M(τ)δ^N/(1−δ) = ε(2 − exp(δr)) and is capped at δ₀.
pub fn approx_function(job: &ApproxJob, alpha: f64, window: &SearchWindow) -> Result<ApproxReport> {
    if !(window.t > job.r) {
        return Err(Error::Domain(format!("T = {} must exceed r = {}", window.t, job.r)));
    }
    let samples = circle_samples(job, CONTOUR_NODES);
    let m_f = max_norm(&samples);
    let n = resolve_order(job, &samples);
    let coefficients = checked_coeffs(job, &samples, n)?;
    let f0 = coefficients[0].norm();
    if !(job.epsilon < f0) {
        return Err(Error::Domain(format!("epsilon = {} must be below |f(s0)| = {f0}", job.epsilon)));
    }

    let a: Vec<Complex64> = coefficients.iter().enumerate().map(|(k, c)| c * factorial(k)).collect();
    let targets = TargetSpec::new(a, job.s0.sigma, job.epsilon, alpha.min(1.0))?;
    let search = search_shift(&targets, alpha, window)?;
    let t1 = search.tau_best;
    let tau = t1 - job.s0.t;
    let center = job.center();

    let m_tau = (0..CONTOUR_NODES)
        .into_par_iter()
        .map(|j| {
            let s = center + Complex64::from_polar(job.r, 2.0 * PI * j as f64 / CONTOUR_NODES as f64);
            shifted_zeta(s, tau, alpha).map(|v| v.norm())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    // N = 0 would make the left side exceed ε at δ = 0; its exact tail has exponent 1.
    let exponent = n.max(1);
    let delta_root = choose_delta(m_tau, exponent, job.r, job.epsilon)?;
    let delta = delta_root.min(job.delta0);

    let zeta_taylor: Vec<Complex64> = search.values.iter().enumerate().map(|(k, v)| v / factorial(k)).collect();
    let diff_taylor: Vec<Complex64> = zeta_taylor.iter().zip(&coefficients).map(|(z, c)| z - c).collect();

    let terms = disk_points(delta * job.r, DISK_SAMPLES)
        .into_par_iter()
        .map(|z| -> Result<[f64; 4]> {
            let s = center + z;
            let fs = (job.f)(s);
            let zs = shifted_zeta(s, tau, alpha)?;
            Ok([
                (fs - horner(&coefficients, z)).norm(),
                horner(&diff_taylor, z).norm(),
                (zs - horner(&zeta_taylor, z)).norm(),
                (zs - fs).norm(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = |i: usize| terms.iter().map(|t| t[i]).fold(0.0, f64::max);

    let eps = job.epsilon;
    let sigma1 = TermCheck::new(worst(0), m_f * job.delta0.powi(n as i32 + 1) / (1.0 - job.delta0));
    let sigma2 = TermCheck::new(worst(1), eps * (delta * job.r).exp());
    let sigma3 = TermCheck::new(worst(2), m_tau * delta.powi(exponent as i32) / (1.0 - delta));
    let max_error_on_disk = worst(3);
    Ok(ApproxReport {
        n,
        tau,
        t1,
        delta,
        delta_root,
        m_f,
        m_tau,
        coefficients,
        search,
        sigma1,
        sigma2,
        sigma3,
        max_error_on_disk,
        bound_3eps_ok: max_error_on_disk < 3.0 * eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(f: TargetFn, n: usize) -> ApproxJob {
        ApproxJob::new(ComplexPoint::new(0.0, 0.0), 1.0, f, 1e-3, 0.5, Some(n)).unwrap()
    }

    #[test]
    fn polynomial_coefficients() {
        let c = taylor_coeffs(&job(Arc::new(|s| s * s), 4)).unwrap();
        for (k, v) in c.iter().enumerate() {
            let want = if k == 2 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-14);
        }
    }

    #[test]
    fn exponential_coefficients() {
        let c = taylor_coeffs(&job(Arc::new(|s: Complex64| s.exp()), 8)).unwrap();
        for (k, v) in c.iter().enumerate() {
            assert!((v - 1.0 / factorial(k)).norm() < 1e-10);
        }
    }

    #[test]
    fn pole_near_contour_is_inconsistent() {
        let f: TargetFn = Arc::new(|s: Complex64| 1.0 / (1.0 + 1e-9 - s));
        assert!(matches!(taylor_coeffs(&job(f, 3)), Err(Error::QuadratureInconsistency { .. })));
    }

    #[test]
    fn delta_example() {
        let d = choose_delta(1.0, 5, 1.0, 0.1).unwrap();
        assert!((d - 0.465).abs() < 0.01);
        assert!(delta_residual(d, 1.0, 5, 1.0, 0.1).abs() < 1e-10);
        assert!(matches!(choose_delta(1.0, 0, 1.0, 0.1), Err(Error::NoRoot(_))));
    }

    #[test]
    fn order_selection() {
        assert_eq!(select_order(1.0, 0.5, 0.1), 4);
        assert_eq!(select_order(1e30, 0.5, 1e-3), MAX_DERIVATIVE as usize);
    }
}
