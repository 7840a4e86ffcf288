mod common;

use std::sync::Arc;

use num::complex::Complex64;

use hurwitz_dense::kernel::{fourier_coeff, mollifier_eval, KernelConfig};
use hurwitz_dense::search::{approx_function, choose_delta, taylor_coeffs, ApproxJob, SearchWindow};
use hurwitz_dense::zeta::{hurwitz_zeta, zeta_one, ComplexPoint, Precision};

#[test]
fn geometric_series_coefficients() {
    let f = Arc::new(|s: Complex64| 1.0 / (2.0 - s));
    let job = ApproxJob::new(ComplexPoint::new(0.0, 0.0), 1.0, f, 1e-3, 0.5, Some(10)).unwrap();
    for (k, c) in taylor_coeffs(&job).unwrap().iter().enumerate() {
        assert!((c - 0.5f64.powi(k as i32 + 1)).norm() < 1e-12, "k = {k}: {c}");
    }
}

#[test]
fn delta_root_against_secant() {
    let g = |d: f64| d.powi(5) / (1.0 - d) - 0.1 * (2.0 - d.exp());
    let (mut a, mut b) = (0.3, 0.6);
    for _ in 0..60 {
        let c = b - g(b) * (b - a) / (g(b) - g(a));
        a = b;
        b = c;
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    let d = choose_delta(1.0, 5, 1.0, 0.1).unwrap();
    assert!((d - b).abs() < 1e-9, "{d} vs secant {b}");
    assert!((d - 0.465).abs() < 0.01);
}

#[test]
fn delta_bounded_away_from_one() {
    for eps in [1.0, 2.0, 10.0] {
        let d = choose_delta(1.0, 1, 1.0, eps).unwrap();
        assert!(d < std::f64::consts::LN_2);
    }
}

#[test]
fn zeta_one_is_the_shifted_tail() {
    let alpha = 0.3;
    let prec = Precision::double(1e-12).unwrap();
    for (sigma, t) in [(1.5, 3.0), (0.8, 20.0), (2.0, -7.0)] {
        let s = ComplexPoint::new(sigma, t);
        let one = zeta_one(s, &alpha, &prec).unwrap();
        let full = hurwitz_zeta(s, &alpha, 0, &prec).unwrap();
        // Σ_{n≥1}(n+α)^{−s} = ζ(s; 1+α).
        let tail = common::hurwitz_oracle(s.to_complex(), 1.0 + alpha);
        let head = common::pow(alpha, -s.to_complex());
        assert!((one.value - tail).norm() <= one.error_radius + 1e-12, "{s:?}");
        assert!((full.value - head - one.value).norm() <= one.error_radius + full.error_radius + 1e-12);
    }
}

#[test]
fn fourier_coefficients_against_quadrature() {
    for q in [2, 3] {
        let cfg = KernelConfig::new(q).unwrap();
        let d = cfg.delta();
        for n in [1i64, 3, 10] {
            let w = 2.0 * std::f64::consts::PI * n as f64 * d;
            let oracle = d * quadrature::double_exponential::integrate(|x| mollifier_eval(x) * (w * x).cos(), -1.0, 1.0, 1e-13)
                .integral;
            let c = fourier_coeff(n, &cfg).unwrap();
            assert!((c.re - oracle).abs() < 1e-10 && c.im.abs() < 1e-12, "Q = {q}, n = {n}: {c} vs {oracle}");
        }
    }
}

#[test]
fn constant_function_reduces_to_value_search() {
    let alpha = std::f64::consts::SQRT_2 - 1.0;
    let c = Complex64::new(1.2, 0.0);
    let eps = 0.05;
    let job = ApproxJob::new(ComplexPoint::new(1.0, 0.0), 0.5, Arc::new(move |_| c), eps, 0.5, Some(0)).unwrap();
    let r = approx_function(&job, alpha, &SearchWindow::new(1e3, 200_000).unwrap()).unwrap();
    assert!(r.search.satisfied);
    assert!(r.bound_3eps_ok, "{r:?}");
    assert!(r.sigma1.measured < 1e-12);
    // Achieved derivative errors below ε give the partial-sum discrepancy below ε·exp(δr).
    assert!(r.sigma2.holds && r.sigma3.holds);
}
