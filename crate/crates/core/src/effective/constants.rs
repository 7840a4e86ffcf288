use num::rational::BigRational;
use num::{BigInt, One};

use crate::error::{Error, Result};

/// The constant E(R,Q,σ) controlling the solvability of the polydisc system.
///
/// σ < 1: R^{1−σ}/(2^{3+σ}(1−σ))·[(Q/(R+1))^{(1−σ)/(4N³)} − 1];
/// σ = 1: log(Q/(R+1))/(2⁵N³).
pub fn capital_e(r: u64, q: u64, sigma: f64, n: usize) -> Result<f64> {
    if q <= r + 1 {
        return Err(Error::Domain(format!("need Q > R+1, got R = {r}, Q = {q}")));
    }
    if !(sigma > 0.5 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} outside (1/2,1]")));
    }
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let n3 = (n as f64).powi(3);
    let log_ratio = (q as f64 / (r as f64 + 1.0)).ln();
    if sigma == 1.0 {
        return Ok(log_ratio / (32.0 * n3));
    }
    let one_minus = 1.0 - sigma;
    let bracket = (one_minus / (4.0 * n3) * log_ratio).exp_m1();
    Ok((r as f64).powf(one_minus) / (2f64.powf(3.0 + sigma) * one_minus) * bracket)
}

/// (1/2)·Q^{−2Q}·(1 − Q^{−2}) as an exact rational.
pub fn density_lower_bound(q: u32) -> Result<BigRational> {
    if q < 2 {
        return Err(Error::Domain(format!("Q = {q} must be at least 2")));
    }
    let qb = BigInt::from(q);
    let q2 = &qb * &qb;
    let num = &q2 - BigInt::one();
    let den = BigInt::from(2) * num::pow(qb, 2 * q as usize) * q2;
    Ok(BigRational::new(num, den))
}

/// Smallest integer U₀ ≥ exp(N/σ), beyond which (log x)^k/x^σ decreases for every k ≤ N.
pub fn monotonicity_threshold(n: usize, sigma: f64) -> u64 {
    (n as f64 / sigma).exp().ceil() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn e_sigma_one() {
        let e = capital_e(1, 200, 1.0, 1).unwrap();
        assert!((e - 100f64.ln() / 32.0).abs() < 1e-14);
    }

    #[test]
    fn e_three_quarters() {
        let e = capital_e(16, 17 * 65536, 0.75, 1).unwrap();
        let expect = 2.0 / (2f64.powf(3.75) * 0.25);
        assert!((e - expect).abs() < 1e-12, "{e} vs {expect}");
        assert!((e - 0.5946).abs() < 1e-4);
    }

    #[test]
    fn e_left_limit_is_half() {
        let one = capital_e(3, 5000, 1.0, 2).unwrap();
        let near = capital_e(3, 5000, 1.0 - 1e-6, 2).unwrap();
        assert!((near / one - 0.5).abs() < 0.025);
    }

    #[test]
    fn e_domain() {
        assert!(capital_e(5, 6, 1.0, 1).is_err());
    }

    #[test]
    fn density_values() {
        let d2 = density_lower_bound(2).unwrap();
        assert_eq!(d2, BigRational::new(BigInt::from(3), BigInt::from(128)));
        let d3 = density_lower_bound(3).unwrap().to_f64().unwrap();
        assert!((d3 - 4.0 / 6561.0).abs() < 1e-18);
    }

    #[test]
    fn threshold() {
        assert_eq!(monotonicity_threshold(2, 1.0), 8);
        assert_eq!(monotonicity_threshold(0, 1.0), 1);
    }
}
