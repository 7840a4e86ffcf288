//! Plans the full parameter budget (R, Q₀, Q, M, log T) for fitting
//! (1+i, 0, 0.5) at σ = 1 with α = √2 − 1, and prints the audit.

use hurwitz_dense::algebraic::AlgebraicParameter;
use hurwitz_dense::effective::{capital_e, density_lower_bound, plan_budget, ConstantsRegistry};
use hurwitz_dense::fit::TargetSpec;
use num::complex::Complex64;

fn main() -> hurwitz_dense::Result<()> {
    println!("E(1, 200, 1, 1) = {:.12}", capital_e(1, 200, 1.0, 1)?);
    println!("density lower bound at Q = 2: {}", density_lower_bound(2)?);

    let targets = TargetSpec::new(
        vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        1.0,
        0.1,
        0.4,
    )?;
    let alpha = AlgebraicParameter::sqrt2_minus_1();
    let registry = ConstantsRegistry {
        nu: Some(0.127),
        ..ConstantsRegistry::default()
    };
    let budget = plan_budget(&targets, 3, &alpha, &registry)?;
    println!("R = {}, Q0 = {}, Q = {}", budget.r, budget.q0, budget.q);
    println!("ln M = {}, ln K = {}, ln T >= {}", budget.log_m, budget.log_k, budget.log_t);
    for c in &budget.audit.checks {
        println!("  [{}] {}", if c.holds { "ok" } else { "FAIL" }, c.name);
    }
    println!("{}", serde_json::to_string_pretty(&budget).expect("budget serializes"));
    Ok(())
}
