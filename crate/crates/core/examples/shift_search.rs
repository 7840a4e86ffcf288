//! Searches [T, 2T] for a vertical shift with |ζ(1+iτ; √2−1) − a| < ε, first
//! for a planted value and then for a few free targets.

use std::time::Instant;

use hurwitz_dense::fit::TargetSpec;
use hurwitz_dense::search::{search_shift, SearchWindow};
use hurwitz_dense::zeta::scan::ShiftEvaluator;
use num::complex::Complex64;

fn main() -> hurwitz_dense::Result<()> {
    let alpha = std::f64::consts::SQRT_2 - 1.0;

    let tau_star = 1_234.567_891;
    let planted = ShiftEvaluator::new(1.0, alpha, 1, 2e3)?.eval(tau_star)?;
    let targets = TargetSpec::new(planted, 1.0, 1e-3, 0.1)?;
    let window = SearchWindow::new(1e3, 1_000_000)?;
    let r = search_shift(&targets, alpha, &window)?;
    println!(
        "planted tau* = {tau_star}: found {:.9}, max error {:.3e}, satisfied {}",
        r.tau_best, r.max_error, r.satisfied
    );

    let window = SearchWindow::new(1e3, 200_000)?;
    for a in [Complex64::new(1.2, 0.0), Complex64::new(0.8, 0.5), Complex64::new(1.5, -0.7)] {
        let start = Instant::now();
        let targets = TargetSpec::new(vec![a], 1.0, 0.05, 0.1)?;
        let r = search_shift(&targets, alpha, &window)?;
        println!(
            "a = {a}: tau = {:.6}, error {:.3e} (grid {:.3e}), satisfied {} [{:.1?}]",
            r.tau_best,
            r.max_error,
            r.grid_best_error,
            r.satisfied,
            start.elapsed()
        );
    }
    Ok(())
}
