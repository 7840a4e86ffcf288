//! Evaluates ζ^{(k)}(s;α) at α = √2 − 1 in double and extended precision and
//! checks ζ(s;1) against ζ(2) = π²/6.

use hurwitz_dense::algebraic::AlgebraicParameter;
use hurwitz_dense::zeta::{hurwitz_zeta, zeta_one, ComplexPoint, Precision};

fn main() -> hurwitz_dense::Result<()> {
    let z2 = hurwitz_zeta(ComplexPoint::new(2.0, 0.0), &1.0, 0, &Precision::double(1e-13)?)?;
    println!("zeta(2;1) = {:.15} (pi^2/6 = {:.15})", z2.value.re, std::f64::consts::PI.powi(2) / 6.0);

    let alpha = AlgebraicParameter::sqrt2_minus_1();
    let s = ComplexPoint::new(0.75, 14.0);
    for k in 0..=3 {
        let r = hurwitz_zeta(s, &alpha, k, &Precision::double(1e-10)?)?;
        println!("k = {k}: {:.12} +/- {:.1e} ({} terms)", r.value, r.error_radius, r.terms_used);
    }

    let wide = hurwitz_zeta(s, &alpha, 0, &Precision::new(40, 1e-35)?)?;
    if let Some((re, im)) = &wide.decimal {
        println!("40 digits: {re} + {im} i, radius {:.1e}", wide.error_radius);
    }
    let z1 = zeta_one(s, &alpha, &Precision::default())?;
    println!("zeta_1(s;alpha) = zeta(s;alpha) - alpha^-s = {:.12}", z1.value);
    Ok(())
}
