//! Approximates f(s) = ζ(s + iτ*; α) near s₀ = 1 by a shift of ζ(s; α) and
//! prints the three-part error split on the disk |s − s₀| ≤ δr.

use std::sync::Arc;

use hurwitz_dense::search::{approx_function, ApproxJob, SearchWindow};
use hurwitz_dense::zeta::{hurwitz_zeta_f64, ComplexPoint};
use num::complex::Complex64;

fn main() -> hurwitz_dense::Result<()> {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let tau_star = 150.345_678;
    let f = Arc::new(move |s: Complex64| {
        hurwitz_zeta_f64(ComplexPoint::new(s.re, s.im + tau_star), alpha, 0, 1e-11).expect("off the pole")
    });
    let job = ApproxJob::new(ComplexPoint::new(1.0, 0.0), 0.5, f, 0.01, 0.5, None)?;
    let window = SearchWindow::new(100.0, 100_000)?;
    let report = approx_function(&job, alpha, &window)?;
    println!("N = {}, tau = {:.9} (planted {tau_star})", report.n, report.tau);
    println!("delta = {:.6} (root {:.6}), M(tau) = {:.4}", report.delta, report.delta_root, report.m_tau);
    for (name, t) in [("sigma1", report.sigma1), ("sigma2", report.sigma2), ("sigma3", report.sigma3)] {
        println!("  {name}: measured {:.3e} < bound {:.3e}: {}", t.measured, t.bound, t.holds);
    }
    println!(
        "max error on disk {:.3e}, below 3 epsilon: {}",
        report.max_error_on_disk, report.bound_3eps_ok
    );
    Ok(())
}
