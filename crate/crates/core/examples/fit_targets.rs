//! Fits (ζ_Q, ζ_Q', ζ_Q'') at σ = 1 to the targets (1+i, 0, 0.5) with a
//! twisted Dirichlet polynomial, letting the planner choose R and Q.

use std::time::Instant;

use hurwitz_dense::fit::{plan_fit, FitCaps, TargetSpec};
use num::complex::Complex64;

fn main() -> hurwitz_dense::Result<()> {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let targets = TargetSpec::new(
        vec![
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
        ],
        1.0,
        0.1,
        0.4,
    )?;
    let start = Instant::now();
    let plan = plan_fit(&targets, alpha, &FitCaps::default())?;
    for a in &plan.attempts {
        println!("R = {:3}  Q = {:8}  residual = {:.3e}", a.r, a.q, a.residual);
    }
    let out = &plan.outcome;
    println!("chosen R = {}, Q = {}", out.r, out.q);
    println!("systine certificate passes: {}", out.certificate.passes);
    println!("rounding: {:.4e} <= {:.4e}", out.rounding_lhs, out.rounding_rhs);
    for (k, e) in out.achieved.iter().enumerate() {
        println!("|d^{k} zeta_Q - a_{k}| = {e:.4e}");
    }
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
