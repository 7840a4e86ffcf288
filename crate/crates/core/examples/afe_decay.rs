//! Truncation error of Σ_{n ≤ t^μ}(n+α)^{−s} on σ = 1 and its fitted decay
//! exponent, together with the admissible degrees for a few abscissae.

use hurwitz_dense::afe::{degree_admissible, derivative_strip_edge, fit_decay_exponent, truncated_zeta, StripConstants};
use hurwitz_dense::zeta::ComplexPoint;

fn main() -> hurwitz_dense::Result<()> {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let strip = StripConstants::default();
    println!("eta = {}, theta = {:.6e}, xi = {:.6e}", strip.eta, strip.theta, strip.xi);
    for d in 3..=6 {
        println!("d = {d}: derivative strip edge {:.9}", derivative_strip_edge(d));
    }
    for sigma in [0.999, 0.9999, 1.0] {
        let ds: Vec<u32> = (3..=8).filter(|&d| degree_admissible(d, sigma)).collect();
        println!("sigma = {sigma}: admissible d in 3..=8: {ds:?}");
    }

    for t in [1e2, 1e3, 1e4] {
        let r = truncated_zeta(ComplexPoint::new(1.0, t), alpha, 1.0 / 3.0)?;
        println!("t = {t:e}: cutoff {}, |error| = {:.4e}", r.cutoff, r.abs_error);
    }
    let fit = fit_decay_exponent(1.0, alpha, 1.0 / 3.0, 0, &[1e2, 1e3, 1e4])?;
    println!("median errors {:?}, nu_hat = {:.4}", fit.median_errors, fit.nu_hat);
    Ok(())
}
