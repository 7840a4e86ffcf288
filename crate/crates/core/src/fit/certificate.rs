use num::complex::Complex64;
use serde::Serialize;

use super::{tail_offsets, TargetSpec};
use crate::effective::{capital_e, monotonicity_threshold};
use crate::error::{Error, Result};

/// Interpolation data and the sufficient condition |A_k| ≤ systine_rhs[k].
///
/// `good_lhs ≤ good_rhs` is the Lagrange/Markov chain evaluated at the
/// direction ℓ = conj(A) (ℓ = e₀ when all offsets vanish). N = 0 is certified
/// with the degree-one partition, since constants are polynomials of degree ≤ 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolationCertificate {
    pub x_nodes: Vec<f64>,
    pub s: f64,
    pub good_lhs: f64,
    pub good_rhs: f64,
    pub e_value: f64,
    pub systine_rhs: Vec<f64>,
    pub offsets_abs: Vec<f64>,
    /// U₀ = ⌈exp(N/σ)⌉; for R > U₀ the certificate is uniform in α ≥ A_floor.
    pub u0: u64,
    pub passes: bool,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Certificate for the offsets A_k of `targets` at (R,Q).
pub fn feasibility_certificate(
    r: usize,
    q: usize,
    targets: &TargetSpec,
    alpha: f64,
) -> Result<InterpolationCertificate> {
    targets.check_alpha(alpha)?;
    let offsets = tail_offsets(targets, r, alpha)?;
    certify_offsets(r, q, targets.sigma, targets.order(), alpha, &offsets)
}

/// Certificate for explicitly given offsets.
pub fn certify_offsets(
    r: usize,
    q: usize,
    sigma: f64,
    n: usize,
    alpha: f64,
    offsets: &[Complex64],
) -> Result<InterpolationCertificate> {
    if r == 0 || q <= r {
        return Err(Error::Domain(format!("need Q > R ≥ 1, got R = {r}, Q = {q}")));
    }
    if offsets.len() != n + 1 {
        return Err(Error::Domain(format!(
            "expected {} offsets, got {}",
            n + 1,
            offsets.len()
        )));
    }
    let deg = n.max(1);
    let degf = deg as f64;
    let log_q = (q as f64).ln();
    let log_span = (q as f64 / (r as f64 + alpha)).ln();
    let x0 = (r as f64 + alpha).ln();
    let x_nodes: Vec<f64> = (0..=deg).map(|k| x0 + k as f64 / degf * log_span).collect();
    let s = log_span / (4.0 * degf.powi(3));

    let mut ell: Vec<Complex64> = offsets.iter().map(|a| a.conj()).collect();
    ell.resize(deg + 1, Complex64::new(0.0, 0.0));
    if ell.iter().all(|l| l.norm() == 0.0) {
        ell[0] = Complex64::new(1.0, 0.0);
    }
    let scale = (log_span / (2.0 * degf * log_q)).powi(deg as i32);
    let good_lhs = scale / (degf + 1.0)
        * ell
            .iter()
            .enumerate()
            .map(|(j, l)| factorial(j) * l.norm() * factorial(deg - j) * log_q.powi(j as i32))
            .sum::<f64>();
    let good_rhs = x_nodes
        .iter()
        .map(|&x| {
            ell.iter()
                .enumerate()
                .map(|(k, l)| l * (-x).powi(k as i32))
                .sum::<Complex64>()
                .norm()
        })
        .sum();

    let e_value = if q > r + 1 {
        capital_e(r as u64, q as u64, sigma, deg)?
    } else {
        0.0
    };
    let systine_scale = ((q as f64 / (r as f64 + 1.0)).ln() / (2.0 * degf * log_q)).powi(deg as i32);
    let systine_rhs: Vec<f64> = (0..=n)
        .map(|k| e_value * systine_scale * factorial(k) * factorial(deg - k) * log_q.powi(k as i32))
        .collect();
    let offsets_abs: Vec<f64> = offsets.iter().map(|a| a.norm()).collect();
    let passes = offsets_abs.iter().zip(&systine_rhs).all(|(a, b)| a <= b);
    Ok(InterpolationCertificate {
        x_nodes,
        s,
        good_lhs,
        good_rhs,
        e_value,
        systine_rhs,
        offsets_abs,
        u0: monotonicity_threshold(n, sigma),
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systine_example() {
        let zero = [Complex64::new(0.0, 0.0); 2];
        let c = certify_offsets(1, 200, 1.0, 1, 1.0, &zero).unwrap();
        assert!(c.passes);
        let e = 100f64.ln() / 32.0;
        assert!((c.e_value - e).abs() < 1e-14);
        let rhs0 = e * 100f64.ln() / (2.0 * 200f64.ln());
        assert!((c.systine_rhs[0] - rhs0).abs() < 1e-14);
    }

    #[test]
    fn node_spacing() {
        let a = [Complex64::new(0.3, 0.1); 4];
        let alpha = 0.4142;
        let c = certify_offsets(5, 3000, 0.9, 3, alpha, &a).unwrap();
        let step = (3000.0 / (5.0 + alpha)).ln() / 3.0;
        for w in c.x_nodes.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-12);
        }
        assert!((c.x_nodes[3] - 3000f64.ln()).abs() < 1e-12);
        assert!((c.s - step * 3.0 / 108.0).abs() < 1e-14);
        assert!(c.good_lhs <= c.good_rhs);
    }
}
