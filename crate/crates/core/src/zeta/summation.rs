//! Elementary estimates: the log-ratio inequality, partial sums of n^{-σ},
//! and the off-diagonal pair sums.

use serde::{Deserialize, Serialize};

use super::{hurwitz_zeta, ComplexPoint, Precision};
use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogRatioReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares |log(x/y)|⁻¹ with max{x,y}/|x−y|.
pub fn log_ratio_bound(x: f64, y: f64) -> Result<LogRatioReport> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!("x = {x}, y = {y} must be positive")));
    }
    if x == y {
        return Err(Error::Degenerate("x = y".into()));
    }
    // ln(x/y) through ln_1p keeps precision when x and y are close.
    let (hi, lo) = if x > y { (x, y) } else { (y, x) };
    let lhs = 1.0 / ((hi - lo) / lo).ln_1p();
    let rhs = hi / (hi - lo);
    Ok(LogRatioReport {
        lhs,
        rhs,
        holds: lhs < rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSumReport {
    pub sum: f64,
    pub predicted: f64,
    pub residual: f64,
}

/// Σ_{n≤T} n^{-σ} against log T + γ (σ = 1) or T^{1−σ}/(1−σ) + ζ(σ).
pub fn partial_sum_asymptotics(t: f64, sigma: f64) -> Result<PartialSumReport> {
    if !(t >= 2.0) || !t.is_finite() {
        return Err(Error::Domain(format!("T = {t} must be at least 2")));
    }
    if !(sigma > 0.0 && sigma <= 2.0) {
        return Err(Error::Domain(format!("sigma = {sigma} outside (0,2]")));
    }
    let n_max = t.floor() as u64;
    let sum: f64 = (1..=n_max).rev().map(|n| (n as f64).powf(-sigma)).sum();
    let predicted = if sigma == 1.0 {
        t.ln() + EULER_GAMMA
    } else {
        let zeta = hurwitz_zeta(
            ComplexPoint::new(sigma, 0.0),
            &1.0,
            0,
            &Precision::double(1e-13)?,
        )?
        .value
        .re;
        t.powf(1.0 - sigma) / (1.0 - sigma) + zeta
    };
    Ok(PartialSumReport {
        sum,
        predicted,
        residual: sum - predicted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSumReport {
    pub sum: f64,
    pub ratio: f64,
}

/// Σ_{1≤m≠n≤T} (m+α)^{-σ}(n+α)^{-σ}|log((n+α)/(m+α))|^{-j} and its ratio
/// to T^{2−2σ}(log T)^j.
pub fn pair_sum_bound(t: f64, sigma: f64, alpha: f64, j: u32) -> Result<PairSumReport> {
    if j > 1 {
        return Err(Error::Domain(format!("j = {j} must be 0 or 1")));
    }
    if !(t >= 2.0) || !t.is_finite() {
        return Err(Error::Domain(format!("T = {t} must be at least 2")));
    }
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    let n_max = t.floor() as usize;
    let logs: Vec<f64> = (1..=n_max).map(|n| (n as f64 + alpha).ln()).collect();
    let weights: Vec<f64> = logs.iter().map(|l| (-sigma * l).exp()).collect();
    let mut sum = 0.0;
    for n in 1..n_max {
        let mut row = 0.0;
        for m in 0..n {
            let w = weights[m] * weights[n];
            row += if j == 0 { w } else { w / (logs[n] - logs[m]) };
        }
        sum += 2.0 * row;
    }
    let ratio = sum / (t.powf(2.0 - 2.0 * sigma) * t.ln().powi(j as i32));
    Ok(PairSumReport { sum, ratio })
}
