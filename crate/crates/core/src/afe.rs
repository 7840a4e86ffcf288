//! Truncated Dirichlet sums for ζ^{(k)}(s;α) near σ = 1, the strip edge
//! A(μ) = 1 − θμ², the degree condition and the growth-bound checks.

use num::complex::Complex64;
use num::rational::BigRational;
use num::{BigInt, One};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zeta::{hurwitz_zeta, zeta_one, ComplexPoint, Precision};

/// Smallest height at which the truncation statements are applied.
pub const T1: f64 = 2.0;

/// Offsets around a nominal height used for median comparisons of the
/// oscillatory truncation error.
pub const MEDIAN_OFFSETS: [f64; 5] = [-0.74, -0.37, 0.0, 0.37, 0.74];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripConstants {
    pub eta: f64,
    pub theta: f64,
    pub xi: f64,
}

impl StripConstants {
    pub const ETA: f64 = 4.45;

    /// ξ = 2⁸·5²/(3·19²·89²) = 6400/8578443 as an exact rational.
    pub fn xi_exact() -> BigRational {
        BigRational::new(
            BigInt::from(256 * 25),
            BigInt::from(3) * BigInt::from(19 * 19) * BigInt::from(89 * 89),
        )
    }
}

impl Default for StripConstants {
    fn default() -> Self {
        let eta = Self::ETA;
        StripConstants {
            eta,
            theta: 4.0 / (27.0 * eta * eta),
            xi: 6400.0 / 8_578_443.0,
        }
    }
}

/// A(μ) = 1 − θμ².
pub fn strip_lower_edge(mu: f64) -> Result<f64> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::Domain(format!("mu = {mu} outside (0,1)")));
    }
    Ok(1.0 - StripConstants::default().theta * mu * mu)
}

fn degree_lhs(d: u32) -> f64 {
    d as f64 + 1.0 / (2.0 * d as f64)
}

/// d + 1/(2d) ≤ (40/267)·(3(1−σ))^{−1/2}; every d ≥ 3 is admissible at σ = 1.
/// A relative slack of 10⁻¹² absorbs rounding at the boundary.
pub fn degree_admissible(d: u32, sigma: f64) -> bool {
    if d < 3 || !(sigma > 0.5 && sigma <= 1.0) {
        return false;
    }
    if sigma == 1.0 {
        return true;
    }
    let rhs = 40.0 / 267.0 * (1.0 / (3.0 * (1.0 - sigma))).sqrt();
    degree_lhs(d) <= rhs * (1.0 + 1e-12)
}

/// Exact form of the degree condition for rational σ ∈ (1/2, 1]:
/// 3(1−σ)(d + 1/(2d))²·267² ≤ 40².
pub fn degree_admissible_exact(d: u32, sigma: &BigRational) -> bool {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let one = BigRational::one();
    if d < 3 || sigma <= &half || sigma > &one {
        return false;
    }
    if sigma == &one {
        return true;
    }
    let d = BigRational::from_integer(BigInt::from(d));
    let lhs = &d + BigRational::one() / (BigRational::from_integer(BigInt::from(2)) * &d);
    let gap = &one - sigma;
    let value = BigRational::from_integer(BigInt::from(3 * 267 * 267)) * gap * &lhs * &lhs;
    value <= BigRational::from_integer(BigInt::from(1600))
}

/// Largest σ-gap 1 − σ for which degree d is admissible.
pub fn admissible_gap(d: u32) -> f64 {
    let l = degree_lhs(d);
    (40.0 / 267.0f64).powi(2) / (3.0 * l * l)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationReport {
    pub truncated_value: Complex64,
    pub reference_value: Complex64,
    pub abs_error: f64,
    pub cutoff: u64,
}

/// ⌊x⌋ with values within 10⁻⁹ (relative) of an integer snapped to it, so
/// that e.g. (10³)^{1/3} = 9.999… gives 10.
fn snapped_floor(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

/// ⌊t^μ⌋.
pub fn cutoff(t: f64, mu: f64) -> u64 {
    snapped_floor(t.powf(mu))
}

/// Σ_{0≤n≤cutoff}(−log(n+α))^k (n+α)^{−s}.
pub fn truncated_sum(s: ComplexPoint, alpha: f64, cutoff: u64, k: u32) -> Complex64 {
    (0..=cutoff)
        .map(|n| {
            let l = (n as f64 + alpha).ln();
            let mag = (-s.sigma * l).exp() * (-l).powi(k as i32);
            let (sin, cos) = (s.t * l).sin_cos();
            Complex64::new(mag * cos, -mag * sin)
        })
        .sum()
}

fn reference_precision() -> Precision {
    Precision::double(1e-8).expect("valid precision")
}

fn report(s: ComplexPoint, alpha: f64, mu: f64, k: u32) -> Result<TruncationReport> {
    let n = cutoff(s.t, mu);
    let truncated_value = truncated_sum(s, alpha, n, k);
    let reference_value = hurwitz_zeta(s, &alpha, k, &reference_precision())?.value;
    Ok(TruncationReport {
        truncated_value,
        reference_value,
        abs_error: (truncated_value - reference_value).norm(),
        cutoff: n,
    })
}

fn check_height(t: f64) -> Result<()> {
    if !(t >= T1) || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} below t₁ = {T1}")));
    }
    Ok(())
}

/// Truncation Σ_{0≤n≤t^μ}(n+α)^{−s} against the reference value, for
/// A(μ) < σ ≤ 2.
pub fn truncated_zeta(s: ComplexPoint, alpha: f64, mu: f64) -> Result<TruncationReport> {
    check_height(s.t)?;
    let edge = strip_lower_edge(mu)?;
    if s.sigma <= edge || s.sigma > 2.0 {
        return Err(Error::StripViolation {
            sigma: s.sigma,
            edge,
        });
    }
    report(s, alpha, mu, 0)
}

/// Derivative truncation Σ_{n≤t^{1/d}}(−log(n+α))^k(n+α)^{−s}, for
/// A((d + 1/(2d))⁻¹) ≤ σ ≤ 1.
pub fn truncated_zeta_deriv(s: ComplexPoint, alpha: f64, d: u32, k: u32) -> Result<TruncationReport> {
    check_height(s.t)?;
    if d < 3 {
        return Err(Error::Domain(format!("d = {d} must be at least 3")));
    }
    let edge = derivative_strip_edge(d);
    if s.sigma < edge || s.sigma > 1.0 {
        return Err(Error::StripViolation {
            sigma: s.sigma,
            edge,
        });
    }
    report(s, alpha, 1.0 / d as f64, k)
}

/// A((d + 1/(2d))⁻¹).
pub fn derivative_strip_edge(d: u32) -> f64 {
    let mu = 1.0 / degree_lhs(d);
    1.0 - StripConstants::default().theta * mu * mu
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median truncation error over the five heights t + MEDIAN_OFFSETS.
pub fn median_truncation_error(sigma: f64, t: f64, alpha: f64, mu: f64, k: u32) -> Result<f64> {
    let errors: Result<Vec<f64>> = MEDIAN_OFFSETS
        .iter()
        .map(|dt| report(ComplexPoint::new(sigma, t + dt), alpha, mu, k).map(|r| r.abs_error))
        .collect();
    Ok(median(errors?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub heights: Vec<f64>,
    pub median_errors: Vec<f64>,
    /// ν̂ = −slope of log(median error) against log t.
    pub nu_hat: f64,
}

/// Fits a decay exponent to the median truncation errors at the given
/// heights by least squares in log-log coordinates.
pub fn fit_decay_exponent(sigma: f64, alpha: f64, mu: f64, k: u32, heights: &[f64]) -> Result<DecayFit> {
    if heights.len() < 2 {
        return Err(Error::Domain("need at least two heights".into()));
    }
    for &t in heights {
        check_height(t - 1.0)?;
    }
    let medians: Result<Vec<f64>> = heights
        .par_iter()
        .map(|&t| median_truncation_error(sigma, t, alpha, mu, k))
        .collect();
    let medians = medians?;
    let xs: Vec<f64> = heights.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = medians.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(DecayFit {
        heights: heights.to_vec(),
        median_errors: medians,
        nu_hat: -sxy / sxx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub observed: f64,
    pub bound: f64,
    pub holds: bool,
}

/// t^{η(1−σ)^{3/2}}(log t)^{2/3}.
pub fn growth_shape(sigma: f64, t: f64) -> f64 {
    let eta = StripConstants::ETA;
    t.powf(eta * (1.0 - sigma).max(0.0).powf(1.5)) * t.ln().powf(2.0 / 3.0)
}

/// |ζ₁(σ+it;α)| against calib_c·t^{η(1−σ)^{3/2}}(log t)^{2/3}.
pub fn growth_bound_check(sigma: f64, t: f64, alpha: f64, calib_c: f64) -> Result<GrowthReport> {
    if !(t >= 3.0) {
        return Err(Error::Domain(format!("t = {t} must be at least 3")));
    }
    if !(0.5..=1.0).contains(&sigma) {
        return Err(Error::Domain(format!("sigma = {sigma} outside [1/2, 1]")));
    }
    let observed = zeta_one(ComplexPoint::new(sigma, t), &alpha, &reference_precision())?
        .value
        .norm();
    let bound = calib_c * growth_shape(sigma, t);
    Ok(GrowthReport {
        observed,
        bound,
        holds: observed <= bound,
    })
}

/// Empirical constant for the growth bound: 1.25 times the largest ratio
/// |ζ₁|/shape over `samples` evenly spaced heights in [3, t_max].
pub fn calibrate_growth_constant(sigma: f64, alpha: f64, t_max: f64, samples: usize) -> Result<f64> {
    if samples < 2 || !(t_max > 3.0) {
        return Err(Error::Domain("need t_max > 3 and at least two samples".into()));
    }
    let step = (t_max - 3.0) / (samples - 1) as f64;
    let ratios: Result<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = 3.0 + step * i as f64;
            let v = zeta_one(ComplexPoint::new(sigma, t), &alpha, &reference_precision())?
                .value
                .norm();
            Ok(v / growth_shape(sigma, t))
        })
        .collect();
    Ok(1.25 * ratios?.into_iter().fold(0.0, f64::max))
}

/// Value of the truncated sum used as an evaluation path at large heights.
pub fn truncated_value(s: ComplexPoint, alpha: f64, d: u32, k: u32) -> Complex64 {
    truncated_sum(s, alpha, cutoff(s.t, 1.0 / d as f64), k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_edge_values() {
        assert!((strip_lower_edge(1.0 / 3.0).unwrap() - 0.999_168_7).abs() < 1e-7);
        assert!((1.0 - strip_lower_edge(1e-8).unwrap()) < 1e-15);
        let c = StripConstants::default();
        assert!(((1.0 - c.theta) - 0.992_519).abs() < 1e-6);
        assert!(strip_lower_edge(1.0).is_err());
    }

    #[test]
    fn degree_condition_examples() {
        assert!(degree_admissible(3, 1.0));
        let xi = StripConstants::default().xi;
        assert!(degree_admissible(3, 1.0 - xi));
        assert!(!degree_admissible(3, 0.99));
        let sigma = BigRational::one() - StripConstants::xi_exact();
        assert!(degree_admissible_exact(3, &sigma));
        let slightly_left = &sigma - BigRational::new(BigInt::one(), BigInt::from(10).pow(15));
        assert!(!degree_admissible_exact(3, &slightly_left));
        assert!((admissible_gap(3) - xi).abs() < 1e-18);
    }

    #[test]
    fn cutoff_snaps_near_integers() {
        assert_eq!(cutoff(1000.0, 1.0 / 3.0), 10);
        assert_eq!(cutoff(100.0, 1.0 / 3.0), 4);
        assert_eq!(cutoff(1e4, 1.0 / 4.0), 10);
    }

    #[test]
    fn derivative_form_matches_plain_form_at_k0() {
        let s = ComplexPoint::new(1.0, 1000.0);
        let a = truncated_zeta(s, 0.5, 1.0 / 3.0).unwrap();
        let b = truncated_zeta_deriv(s, 0.5, 3, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn strip_violations() {
        let s = ComplexPoint::new(0.99, 100.0);
        assert!(matches!(truncated_zeta(s, 0.5, 1.0 / 3.0), Err(Error::StripViolation { .. })));
        assert!(matches!(truncated_zeta_deriv(s, 0.5, 3, 1), Err(Error::StripViolation { .. })));
    }

    #[test]
    fn absolutely_convergent_tail_bound() {
        let r = truncated_zeta(ComplexPoint::new(2.0, 10.0), 1.0, 0.9).unwrap();
        assert_eq!(r.cutoff, 7);
        // Σ_{n≥9} n^{-2} ≤ 1/8.
        assert!(r.abs_error <= 1.0 / 8.0);
    }

    #[test]
    fn growth_shape_at_sigma_one() {
        let t: f64 = 500.0;
        assert!((growth_shape(1.0, t) - t.ln().powf(2.0 / 3.0)).abs() < 1e-12);
    }
}
