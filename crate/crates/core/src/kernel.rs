//! The bump mollifier λ, the product kernel Λ_Q on the Q-torus, the curve
//! γ_Q(τ,α) = (τ·log(n+α)/2π)_n and numeric kernel mass along it.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{PhaseVector, TargetSpec};
use crate::zeta::scan::ShiftEvaluator;

/// Trapezoid nodes on [−1,1]; the bump is flat to all orders at ±1, so the
/// rule converges faster than any power of the node count.
const TRAPEZOID_NODES: usize = 4096;

/// Largest |n| accepted by [`fourier_coeff`].
pub const MAX_FOURIER_INDEX: i64 = 1_000_000;

/// Nodes per Simpson block; blocks are summed in order for determinism.
const BLOCK: usize = 1 << 14;

fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

fn bump_second_derivative(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        return 0.0;
    }
    let u = 1.0 - x * x;
    let g1 = -2.0 * x / (u * u);
    let g2 = -2.0 / (u * u) - 8.0 * x * x / (u * u * u);
    bump(x) * (g1 * g1 + g2)
}

fn trapezoid(f: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let h = 2.0 / nodes as f64;
    (1..nodes).map(|j| f(-1.0 + j as f64 * h)).sum::<f64>() * h
}

/// λ(x) = c·exp(−1/(1−x²)) on (−1,1), with c chosen so that ∫λ = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mollifier {
    pub normalization_constant: f64,
}

impl Mollifier {
    pub fn get() -> &'static Mollifier {
        static CELL: OnceLock<Mollifier> = OnceLock::new();
        CELL.get_or_init(|| Mollifier {
            normalization_constant: 1.0 / trapezoid(bump, TRAPEZOID_NODES),
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.normalization_constant * bump(x)
    }

    /// sup λ = λ(0) = c/e.
    pub fn peak(&self) -> f64 {
        self.normalization_constant / std::f64::consts::E
    }

    /// C_λ = ∫|λ''|/(4π²). Two integrations by parts give
    /// |c_n| ≤ C_λ/(n²δ) ≤ C_λ/(n²δ²) for δ ≤ 1.
    pub fn decay_constant(&self) -> f64 {
        self.normalization_constant * trapezoid(|x| bump_second_derivative(x).abs(), 4 * TRAPEZOID_NODES)
            / (4.0 * PI * PI)
    }
}

pub fn mollifier_eval(x: f64) -> f64 {
    Mollifier::get().eval(x)
}

/// Q ≥ 2 with δ = Q⁻².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    q: usize,
    delta: f64,
}

impl KernelConfig {
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::Domain(format!("Q = {q} must be at least 2")));
        }
        let qf = q as f64;
        Ok(KernelConfig {
            q,
            delta: 1.0 / (qf * qf),
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Largest quadrature step resolving Λ_Q(γ_Q(τ,α)):
    /// δ·2π/(10·log(Q+1)).
    pub fn max_step(&self) -> f64 {
        self.delta * TAU / (10.0 * (self.q as f64 + 1.0).ln())
    }
}

/// Signed distance from θ to the nearest integer, in [−1/2, 1/2].
fn torus_offset(theta: f64) -> f64 {
    theta - theta.round()
}

/// c_n = ∫₀¹ λ(θ/δ) e(−nθ) dθ for the 1-periodic extension of λ(·/δ).
pub fn fourier_coeff(n: i64, cfg: &KernelConfig) -> Result<Complex64> {
    if n.abs() > MAX_FOURIER_INDEX {
        return Err(Error::CapExceeded {
            what: "|n|".into(),
            value: n.abs() as f64,
            cap: MAX_FOURIER_INDEX as f64,
        });
    }
    let m = Mollifier::get();
    let delta = cfg.delta;
    // Substituting θ = δx: δ∫λ(x)e(−nδx)dx; λ is even so the sine part cancels.
    let freq = TAU * n as f64 * delta;
    let nodes = TRAPEZOID_NODES.max((8.0 * freq.abs()) as usize * 64);
    let re = delta * trapezoid(|x| m.eval(x) * (freq * x).cos(), nodes);
    Ok(Complex64::new(re, 0.0))
}

/// max over n ∈ [1, n_max] and the given Q of |c_n|·n²·δ².
pub fn calibrate_decay_constant(qs: &[usize], n_max: i64) -> Result<f64> {
    let mut best: f64 = 0.0;
    for &q in qs {
        let cfg = KernelConfig::new(q)?;
        for n in 1..=n_max {
            let c = fourier_coeff(n, &cfg)?.norm();
            best = best.max(c * (n * n) as f64 * cfg.delta * cfg.delta);
        }
    }
    Ok(best)
}

/// Λ_Q(θ) = Π_n λ(θ_n/δ) with each factor extended 1-periodically.
pub fn big_lambda(theta: &PhaseVector, cfg: &KernelConfig) -> Result<f64> {
    big_lambda_raw(theta.as_slice(), cfg)
}

/// Same as [`big_lambda`] on unreduced coordinates.
pub fn big_lambda_raw(theta: &[f64], cfg: &KernelConfig) -> Result<f64> {
    if theta.len() != cfg.q {
        return Err(Error::Domain(format!(
            "phase vector has length {}, expected Q = {}",
            theta.len(),
            cfg.q
        )));
    }
    let m = Mollifier::get();
    let mut prod = 1.0;
    for &t in theta {
        let x = torus_offset(t) / cfg.delta;
        if x.abs() >= 1.0 {
            return Ok(0.0);
        }
        prod *= m.eval(x);
    }
    Ok(prod)
}

/// γ_Q(τ,α) = (τ·log(n+α)/2π mod 1)_{n<Q}.
pub fn curve_gamma(tau: f64, alpha: f64, q: usize) -> Result<PhaseVector> {
    if q == 0 {
        return Err(Error::Domain("Q must be at least 1".into()));
    }
    PhaseVector::new((0..q).map(|n| tau * (n as f64 + alpha).ln() / TAU).collect())
}

/// (1/(δ^Q T))∫_T^{2T} Λ_Q(γ_Q(τ,α) − θ₁) dτ by composite Simpson at the
/// largest resolving step.
pub fn kernel_mass(cfg: &KernelConfig, alpha: f64, theta1: &[f64], t: f64) -> Result<f64> {
    kernel_mass_with_step(cfg, alpha, theta1, t, cfg.max_step())
}

/// As [`kernel_mass`] with an explicit step, which may not exceed
/// [`KernelConfig::max_step`]. The step is shrunk to split [T,2T] into an
/// even number of panels.
pub fn kernel_mass_with_step(cfg: &KernelConfig, alpha: f64, theta1: &[f64], t: f64, step: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("T = {t} must be positive")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0,1]")));
    }
    if theta1.len() != cfg.q {
        return Err(Error::Domain(format!(
            "theta1 has length {}, expected Q = {}",
            theta1.len(),
            cfg.q
        )));
    }
    let max = cfg.max_step();
    if !(step > 0.0) || step > max {
        return Err(Error::StepTooCoarse { step, max });
    }
    let mut panels = (t / step).ceil() as usize;
    panels += panels % 2;
    let h = t / panels as f64;
    let freqs: Vec<f64> = (0..cfg.q).map(|n| (n as f64 + alpha).ln() / TAU).collect();
    let shift: Vec<f64> = theta1.iter().map(|x| x - x.floor()).collect();
    let m = Mollifier::get();
    let integrand = |tau: f64| -> f64 {
        let mut prod = 1.0;
        for (f, s) in freqs.iter().zip(&shift) {
            let x = torus_offset(tau * f - s) / cfg.delta;
            if x.abs() >= 1.0 {
                return 0.0;
            }
            prod *= m.eval(x);
        }
        prod
    };
    let blocks = panels.div_ceil(BLOCK);
    let partial: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = ((b + 1) * BLOCK).min(panels + 1);
            (lo..hi)
                .map(|j| {
                    let w = if j == 0 || j == panels {
                        1.0
                    } else if j % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    w * integrand(t + j as f64 * h)
                })
                .sum::<f64>()
        })
        .collect();
    let integral = partial.iter().sum::<f64>() * h / 3.0;
    Ok(integral / (cfg.delta.powi(cfg.q as i32) * t))
}

/// Fraction of the grid τ_j ∈ [T,2T] (endpoints included) where
/// max_k |ζ^{(k)}(σ+iτ_j;α) − a_k| < √(2(Q²+1)/(Q²−1))·ε.
pub fn empirical_density(cfg: &KernelConfig, alpha: f64, targets: &TargetSpec, t: f64, grid: usize) -> Result<f64> {
    if grid < 1000 {
        return Err(Error::Domain(format!("grid = {grid} must be at least 1000")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("T = {t} must be positive")));
    }
    let q2 = (cfg.q * cfg.q) as f64;
    let threshold = (2.0 * (q2 + 1.0) / (q2 - 1.0)).sqrt() * targets.epsilon;
    let eval = ShiftEvaluator::new(targets.sigma, alpha, targets.order(), 2.0 * t)?;
    let h = t / (grid - 1) as f64;
    let chunk = 512;
    let hits: usize = (0..grid.div_ceil(chunk))
        .into_par_iter()
        .map(|c| -> Result<usize> {
            let start = c * chunk;
            let count = chunk.min(grid - start);
            let values = eval.sweep(t + start as f64 * h, h, count)?;
            Ok(values
                .iter()
                .filter(|v| {
                    v.iter()
                        .zip(&targets.a)
                        .map(|(z, a)| (z - a).norm())
                        .fold(0.0, f64::max)
                        < threshold
                })
                .count())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(hits as f64 / grid as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mollifier_basics() {
        let m = Mollifier::get();
        assert_eq!(mollifier_eval(1.0), 0.0);
        assert_eq!(mollifier_eval(-1.0), 0.0);
        assert!(m.peak() <= 1.0);
        assert!((trapezoid(|x| m.eval(x), 8192) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeroth_coefficient() {
        for q in 2..=4 {
            let cfg = KernelConfig::new(q).unwrap();
            let c0 = fourier_coeff(0, &cfg).unwrap();
            assert!((c0.re - cfg.delta()).abs() < 1e-10);
        }
    }

    #[test]
    fn coefficient_symmetry() {
        let cfg = KernelConfig::new(3).unwrap();
        for n in 1..6 {
            let a = fourier_coeff(n, &cfg).unwrap();
            let b = fourier_coeff(-n, &cfg).unwrap();
            assert!((a - b.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn decay_constant_dominates() {
        let cal = calibrate_decay_constant(&[2, 3], 100).unwrap();
        assert!(cal <= Mollifier::get().decay_constant());
        let cfg = KernelConfig::new(2).unwrap();
        let c5 = fourier_coeff(5, &cfg).unwrap().norm();
        assert!(c5 <= cal / (25.0 * cfg.delta() * cfg.delta()));
    }

    #[test]
    fn lambda_support_and_center() {
        let cfg = KernelConfig::new(3).unwrap();
        let off = PhaseVector::new(vec![0.0, 0.2, 0.0]).unwrap();
        assert_eq!(big_lambda(&off, &cfg).unwrap(), 0.0);
        let zero = PhaseVector::zeros(3);
        let expect = mollifier_eval(0.0).powi(3);
        assert!((big_lambda(&zero, &cfg).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn gamma_values() {
        let alpha = std::f64::consts::SQRT_2 - 1.0;
        let g = curve_gamma(TAU, alpha, 2).unwrap();
        let want = [alpha.ln(), (1.0 + alpha).ln()];
        for (a, b) in g.as_slice().iter().zip(want) {
            assert!((a - (b - b.floor())).abs() < 1e-14);
        }
        assert!(curve_gamma(0.0, alpha, 4).unwrap().as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn coarse_step_rejected() {
        let cfg = KernelConfig::new(2).unwrap();
        let r = kernel_mass_with_step(&cfg, 0.5, &[0.0, 0.0], 10.0, 2.0 * cfg.max_step());
        assert!(matches!(r, Err(Error::StepTooCoarse { .. })));
    }

    #[test]
    fn rational_shift_blocks_mass() {
        let cfg = KernelConfig::new(2).unwrap();
        let mass = kernel_mass(&cfg, 1.0, &[0.5, 0.5], 1000.0).unwrap();
        assert_eq!(mass, 0.0);
    }
}
