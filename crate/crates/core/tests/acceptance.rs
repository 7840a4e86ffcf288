//! Acceptance suite: one PASS/FAIL line per criterion with pinned tolerances.

mod common;

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use num::rational::BigRational;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{riemann_zeta, Sqrt2};
use hurwitz_dense::afe::{admissible_gap, fit_decay_exponent, StripConstants};
use hurwitz_dense::algebraic::{
    liouville_bound, membership_a, twist_polynomials, AlgebraicParameter, FamilyCaps, IntegerPolynomial, TwistIndex,
};
use hurwitz_dense::effective::{audit_budget, capital_e, density_lower_bound, plan_budget, ConstantsRegistry};
use hurwitz_dense::fit::{plan_fit, FitCaps, TargetSpec};
use hurwitz_dense::kernel::{
    fourier_coeff, kernel_mass, kernel_mass_with_step, mollifier_eval, KernelConfig, Mollifier,
};
use hurwitz_dense::search::{approx_function, delta_residual, search_shift, ApproxJob, SearchWindow};
use hurwitz_dense::zeta::scan::ShiftEvaluator;
use hurwitz_dense::zeta::{hurwitz_zeta_f64, log_ratio_bound, ComplexPoint};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn zeta(sigma: f64, t: f64, alpha: f64, k: u32) -> Complex64 {
    hurwitz_zeta_f64(ComplexPoint::new(sigma, t), alpha, k, 1e-12).expect("evaluation")
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn random_s(rng: &mut ChaCha8Rng, t_max: f64) -> Complex64 {
    loop {
        let s = Complex64::new(rng.gen_range(0.6..2.0), rng.gen_range(-t_max..t_max));
        if (s - 1.0).norm() > 0.1 {
            return s;
        }
    }
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let pi2 = (zeta(2.0, 0.0, 1.0, 0).re - std::f64::consts::PI.powi(2) / 6.0).abs();
    let mut worst: f64 = pi2;
    for _ in 0..20 {
        let s = random_s(&mut rng, 100.0);
        let oracle = riemann_zeta(s);
        worst = worst.max((zeta(s.re, s.im, 1.0, 0) - oracle).norm());
        let half = zeta(s.re, s.im, 0.5, 0);
        worst = worst.max((half - (common::pow(2.0, s) - 1.0) * oracle).norm());
    }
    let elapsed = start.elapsed();
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(10),
        format!("max deviation {worst:.2e} (tol 1e-10), {elapsed:.2?} (limit 10 s)"),
    )
}

fn derivative_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = 1e-3;
    let stencil = |f: &dyn Fn(f64) -> Complex64, x: f64| {
        (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
    };
    let mut worst_k: f64 = 0.0;
    let mut worst_alpha: f64 = 0.0;
    for _ in 0..10 {
        let s = random_s(&mut rng, 30.0);
        let alpha = rng.gen_range(0.2..1.0);
        for k in 1..=2u32 {
            let fd = stencil(&|x| zeta(x, s.im, alpha, k - 1), s.re);
            worst_k = worst_k.max(rel(fd, zeta(s.re, s.im, alpha, k)));
        }
        let ha = 1e-5;
        let fd = (zeta(s.re, s.im, alpha + ha, 0) - zeta(s.re, s.im, alpha - ha, 0)) / (2.0 * ha);
        let exact = -s * zeta(s.re + 1.0, s.im, alpha, 0);
        worst_alpha = worst_alpha.max(rel(fd, exact));
    }
    outcome(
        worst_k < 1e-6 && worst_alpha < 1e-6,
        format!("k = 1, 2 relative {worst_k:.2e}; parameter derivative relative {worst_alpha:.2e} (tol 1e-6)"),
    )
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pair_violations = 0;
    for _ in 0..10_000 {
        let x: f64 = 10f64.powf(rng.gen_range(-6.0..6.0));
        let y: f64 = 10f64.powf(rng.gen_range(-6.0..6.0));
        if x == y {
            continue;
        }
        let r = log_ratio_bound(x, y).expect("positive pair");
        if !r.holds || 1.0 / (x / y).ln().abs() >= x.max(y) / (x - y).abs() * (1.0 + 1e-12) {
            pair_violations += 1;
        }
    }
    let params = [
        AlgebraicParameter::sqrt2_minus_1(),
        AlgebraicParameter::golden_conjugate(),
        AlgebraicParameter::cubic_root(),
    ];
    let mut poly_violations = 0;
    let mut polys = 0;
    while polys < 1000 {
        let deg = rng.gen_range(1..=6);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-50..=50)).collect();
        if coeffs[deg] == 0 {
            continue;
        }
        let p = IntegerPolynomial::from_i64(&coeffs);
        let alpha = &params[polys % 3];
        if alpha.is_root_of(&p) {
            continue;
        }
        polys += 1;
        let r = liouville_bound(&p, alpha).expect("nonzero value");
        // Direct Horner evaluation as the independent value.
        let direct = coeffs.iter().rev().fold(0.0, |acc, &c| acc * alpha.value() + c as f64).abs();
        if !r.holds || direct < r.bound * (1.0 - 1e-9) {
            poly_violations += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        pair_violations == 0 && poly_violations == 0 && elapsed < Duration::from_secs(30),
        format!(
            "{pair_violations} violations in 10^4 pairs, {poly_violations} in 10^3 polynomials, {elapsed:.2?} (limit 30 s)"
        ),
    )
}

fn afe_decay() -> Outcome {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let fit = fit_decay_exponent(1.0, alpha, 1.0 / 3.0, 0, &[1e2, 1e3, 1e4]).expect("decay fit");
    let (low, high) = (fit.median_errors[0], fit.median_errors[2]);
    outcome(
        high < low && fit.nu_hat > 0.0,
        format!("median error {high:.4e} near 1e4 vs {low:.4e} near 1e2, nu_hat = {:.4}", fit.nu_hat),
    )
}

fn fit_pipeline() -> Outcome {
    let start = Instant::now();
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let targets = TargetSpec::new(
        vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        1.0,
        0.1,
        alpha,
    )
    .expect("targets");
    let plan = plan_fit(&targets, alpha, &FitCaps::default()).expect("fit");
    let o = &plan.outcome;
    let elapsed = start.elapsed();
    outcome(
        o.within(0.1) && o.rounding_lhs <= o.rounding_rhs && elapsed < Duration::from_secs(60),
        format!(
            "R = {}, Q = {}, errors {:?}, rounding {:.3e} <= {:.3e}, {elapsed:.2?} (limit 60 s)",
            o.r,
            o.q,
            o.achieved.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>(),
            o.rounding_lhs,
            o.rounding_rhs
        ),
    )
}

fn kernel_suite() -> Outcome {
    let integral = quadrature::double_exponential::integrate(mollifier_eval, -1.0, 1.0, 1e-13).integral;
    let mut c0_dev: f64 = 0.0;
    for q in 2..=4 {
        let cfg = KernelConfig::new(q).expect("config");
        c0_dev = c0_dev.max((fourier_coeff(0, &cfg).expect("c0").re - cfg.delta()).abs());
    }
    let cfg = KernelConfig::new(2).expect("config");
    let d2 = cfg.delta().powi(2);
    let decay = (1..=100)
        .map(|n| fourier_coeff(n, &cfg).expect("c_n").norm() * (n * n) as f64 * d2)
        .fold(0.0, f64::max);
    let decay_bound = Mollifier::get().decay_constant();
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let theta1 = [0.3, 0.7];
    let mass = kernel_mass(&cfg, alpha, &theta1, 1e5).expect("mass");
    let half = kernel_mass_with_step(&cfg, alpha, &theta1, 1e5, cfg.max_step() / 2.0).expect("mass");
    let pass = (integral - 1.0).abs() < 1e-8
        && c0_dev < 1e-10
        && decay <= decay_bound
        && (mass - 1.0).abs() < 0.25
        && (mass - half).abs() < 1e-4;
    outcome(
        pass,
        format!(
            "integral {:.2e} off, c0 {c0_dev:.1e} off, max |c_n| n^2 delta^2 = {decay:.3e} <= {decay_bound:.3e}, mass {mass:.6}, halving {:.1e}",
            (integral - 1.0).abs(),
            (mass - half).abs()
        ),
    )
}

fn effective_constants() -> Outcome {
    let e = capital_e(1, 200, 1.0, 1).expect("E");
    let e_ok = (e - 100f64.ln() / 32.0).abs() < 1e-12;
    let density = density_lower_bound(2).expect("density");
    let density_ok = density == BigRational::new(BigInt::from(3), BigInt::from(128));
    // 3ξ(d + 1/(2d))²·267² = 40² at d = 3, exactly and in floating point.
    let xi = StripConstants::xi_exact();
    let l = BigRational::new(BigInt::from(19), BigInt::from(6));
    let exact = BigRational::from_integer(BigInt::from(3 * 267 * 267)) * xi * &l * &l
        == BigRational::from_integer(BigInt::from(1600));
    let xi_f = StripConstants::default().xi;
    let xi_ok = exact && ((admissible_gap(3) - xi_f) / xi_f).abs() < 1e-12;

    let targets = TargetSpec::new(
        vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        1.0,
        0.1,
        0.4,
    )
    .expect("targets");
    let alpha = AlgebraicParameter::sqrt2_minus_1();
    let registry = ConstantsRegistry {
        nu: Some(0.127),
        ..ConstantsRegistry::default()
    };
    let budget = plan_budget(&targets, 3, &alpha, &registry).expect("budget");
    let recheck = audit_budget(&budget, &targets, &alpha, &registry);
    // R ≥ c₀ε^{4/(1−2σ)} at σ = 1, checked directly.
    let r_ok = budget.r as f64 >= 0.1f64.powi(-4) * (1.0 - 1e-12);
    let audit_ok = budget.audit.all_hold && recheck.all_hold && r_ok;
    outcome(
        e_ok && density_ok && xi_ok && audit_ok,
        format!(
            "E = {e:.15}, density = {density}, xi exact {exact}, audit {} of {} checks, R = {}",
            recheck.checks.iter().filter(|c| c.holds).count(),
            recheck.checks.len(),
            budget.r
        ),
    )
}

fn search_recovery() -> Outcome {
    let start = Instant::now();
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let tau_star = 150.345_678;
    let planted = ShiftEvaluator::new(1.0, alpha, 1, 200.0)
        .expect("evaluator")
        .eval(tau_star)
        .expect("planted values");
    let targets = TargetSpec::new(planted, 1.0, 1e-3, alpha).expect("targets");
    let r = search_shift(&targets, alpha, &SearchWindow::new(100.0, 100_000).expect("window")).expect("search");
    let planted_ok = r.max_error < 1e-3;

    let window = SearchWindow::new(1e3, 200_000).expect("window");
    let mut free = Vec::new();
    for a in [Complex64::new(1.2, 0.0), Complex64::new(0.8, 0.5), Complex64::new(1.5, -0.7)] {
        let t = TargetSpec::new(vec![a], 1.0, 0.05, alpha).expect("targets");
        let r = search_shift(&t, alpha, &window).expect("search");
        free.push((r.satisfied, r.max_error));
    }
    let elapsed = start.elapsed();
    outcome(
        planted_ok && free.iter().any(|f| f.0) && elapsed < Duration::from_secs(600),
        format!(
            "planted error {:.1e} at tau {:.6}; free targets {:?}; {elapsed:.2?} (limit 10 min)",
            r.max_error,
            r.tau_best,
            free.iter().map(|f| format!("{}:{:.2e}", f.0, f.1)).collect::<Vec<_>>()
        ),
    )
}

fn function_approximation() -> Outcome {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let tau_star = 150.345_678;
    let f = Arc::new(move |s: Complex64| {
        hurwitz_zeta_f64(ComplexPoint::new(s.re, s.im + tau_star), alpha, 0, 1e-10).expect("evaluation")
    });
    let eps = 0.01;
    let job = ApproxJob::new(ComplexPoint::new(1.0, 0.0), 0.5, f, eps, 0.5, None).expect("job");
    let r = approx_function(&job, alpha, &SearchWindow::new(100.0, 100_000).expect("window")).expect("approx");
    let residual = delta_residual(r.delta_root, r.m_tau, r.n.max(1), 0.5, eps).abs();
    outcome(
        r.max_error_on_disk < 3.0 * eps && r.bound_3eps_ok && residual < 1e-10,
        format!(
            "N = {}, delta = {:.6}, max error on disk {:.2e} < {:.2e}, delta residual {residual:.1e}",
            r.n,
            r.delta,
            r.max_error_on_disk,
            3.0 * eps
        ),
    )
}

fn membership_exactness() -> Outcome {
    let caps = FamilyCaps::default();
    let alpha = AlgebraicParameter::sqrt2_minus_1();
    let m = membership_a(&alpha, 2, 1, &caps).expect("membership");
    // Every reported witness is confirmed in Z[√2].
    let witness_ok = match &m.witness {
        None => true,
        Some(w) => {
            let polys = twist_polynomials(&TwistIndex::new(w.m.clone(), 1).expect("index"));
            let eval = |p: &IntegerPolynomial| {
                p.coeffs().iter().enumerate().fold(Sqrt2::int(0), |acc, (i, c)| {
                    let c: i128 = c.try_into().expect("small coefficient");
                    acc.add(Sqrt2::int(c).mul(Sqrt2::alpha().pow(i as u32)))
                })
            };
            let lhs = eval(&polys.qplus).mul(Sqrt2::int(w.y as i128).add(Sqrt2::alpha()));
            let rhs = eval(&polys.qminus).mul(Sqrt2::int(w.x as i128).add(Sqrt2::alpha()));
            lhs == rhs
        }
    };
    let quartic = membership_a(&AlgebraicParameter::quartic_root(), 2, 1, &caps).expect("membership");
    outcome(
        !m.in_a1 && m.float_only_conclusions == 0 && witness_ok && quartic.in_a1 && quartic.float_only_conclusions == 0,
        format!(
            "sqrt2-1: A1 {}, A2 {}, witness {:?} confirmed {witness_ok}, float-only {}; X^4+X-1 root in A1: {}",
            m.in_a1, m.in_a2, m.witness, m.float_only_conclusions, quartic.in_a1
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("identity suite", identity_suite),
        ("derivative correctness", derivative_suite),
        ("log-ratio and Liouville properties", property_suite),
        ("truncation decay", afe_decay),
        ("desk-scale polynomial fit", fit_pipeline),
        ("kernel suite", kernel_suite),
        ("effective constants", effective_constants),
        ("search recovery", search_recovery),
        ("function approximation", function_approximation),
        ("exceptional-set exactness", membership_exactness),
    ];
    let mut failed = Vec::new();
    let stdout = std::io::stdout();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let line = format!(
            "{} criterion {}: {name}: {}\n",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
        // Written to the raw handle so the lines survive output capture.
        stdout.lock().write_all(line.as_bytes()).expect("stdout");
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
