//! Kernel mass of Λ_Q along the curve γ_Q(τ,α) over [T,2T] for Q = 2, and the
//! Fourier decay of the scaled mollifier.

use hurwitz_dense::kernel::{calibrate_decay_constant, fourier_coeff, kernel_mass, kernel_mass_with_step, KernelConfig, Mollifier};

fn main() -> hurwitz_dense::Result<()> {
    let cfg = KernelConfig::new(2)?;
    let m = Mollifier::get();
    println!("normalization c = {:.12}, peak = {:.6}", m.normalization_constant, m.peak());
    println!("c_0 = {:.3e} (delta = {})", fourier_coeff(0, &cfg)?.re, cfg.delta());
    println!("calibrated |c_n| n^2 delta^2 <= {:.4e}", calibrate_decay_constant(&[2, 3], 100)?);

    let t = 1e5;
    let cases = [
        ("sqrt2-1", std::f64::consts::SQRT_2 - 1.0),
        ("golden", (5f64.sqrt() - 1.0) / 2.0),
    ];
    for (name, alpha) in cases {
        for theta1 in [[0.0, 0.0], [0.3, 0.7], [0.11, 0.52]] {
            let mass = kernel_mass(&cfg, alpha, &theta1, t)?;
            let half = kernel_mass_with_step(&cfg, alpha, &theta1, t, cfg.max_step() / 2.0)?;
            println!(
                "{name:8} theta1 = {theta1:?}: mass = {mass:.6}, |mass-1| = {:.4}, halving diff = {:.2e}",
                (mass - 1.0).abs(),
                (mass - half).abs()
            );
        }
    }
    Ok(())
}
