//! Reference evaluation of the Hurwitz zeta-function ζ(s;α) = Σ_{n≥0} (n+α)^{-s}
//! and its s-derivatives, with an explicit error radius.

mod euler_maclaurin;
pub(crate) mod scalar;
pub mod scan;
pub mod summation;

use num::complex::Complex64;
use num::rational::BigRational;
use num::{BigInt, FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use scalar::{with_mp_precision, Mp, Real};

pub use summation::{log_ratio_bound, pair_sum_bound, partial_sum_asymptotics};

/// Radius of the excluded neighbourhood around the pole s = 1.
pub const POLE_GUARD: f64 = 1e-12;
/// Largest supported derivative order.
pub const MAX_DERIVATIVE: u32 = 10;
const MAX_CUTOFF: usize = 1 << 22;

/// A point s = σ + it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        ComplexPoint { sigma, t }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn is_finite(&self) -> bool {
        self.sigma.is_finite() && self.t.is_finite()
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        ComplexPoint::new(z.re, z.im)
    }
}

/// Working precision and the absolute error the caller asks for.
///
/// Up to 16 working digits the evaluator runs in native `f64`; above that it
/// switches to a multiprecision backend with ⌈digits·log₂10⌉ + 8 bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    working_digits: u32,
    target_abs_error: f64,
}

impl Precision {
    pub fn new(working_digits: u32, target_abs_error: f64) -> Result<Self> {
        if working_digits < 15 {
            return Err(Error::InvalidPrecision(format!(
                "working_digits = {working_digits} < 15"
            )));
        }
        if !(target_abs_error > 0.0) || !target_abs_error.is_finite() {
            return Err(Error::InvalidPrecision(format!(
                "target_abs_error = {target_abs_error} must be positive"
            )));
        }
        let floor = 10f64.powi(1 - working_digits as i32);
        if target_abs_error < floor {
            return Err(Error::InvalidPrecision(format!(
                "target {target_abs_error:e} below what {working_digits} digits can deliver ({floor:e})"
            )));
        }
        Ok(Precision {
            working_digits,
            target_abs_error,
        })
    }

    /// Native double precision with the given target.
    pub fn double(target_abs_error: f64) -> Result<Self> {
        Precision::new(15, target_abs_error)
    }

    pub fn working_digits(&self) -> u32 {
        self.working_digits
    }

    pub fn target_abs_error(&self) -> f64 {
        self.target_abs_error
    }

    pub fn is_native(&self) -> bool {
        self.working_digits <= 16
    }

    fn bits(&self) -> usize {
        (self.working_digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            working_digits: 30,
            target_abs_error: 1e-12,
        }
    }
}

/// Value of an evaluation together with its error radius.
///
/// `error_radius` bounds the distance between the exact value and the
/// evaluator's working-precision result; `decimal` carries that result in
/// full when the multiprecision backend ran. `value` is its rounding to
/// double precision, which adds at most `|value|·2⁻⁵³`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub error_radius: f64,
    pub terms_used: usize,
    pub decimal: Option<(String, String)>,
}

impl EvalResult {
    /// Error radius valid for the `f64` value.
    pub fn f64_error_radius(&self) -> f64 {
        self.error_radius + self.value.norm() * f64::EPSILON / 2.0
    }
}

/// Anything usable as the shift parameter α.
pub trait ParameterValue {
    fn value_f64(&self) -> f64;
    /// Rational approximation within 2^{-bits}.
    fn rational_approx(&self, bits: u32) -> BigRational;
    /// Whether `value_f64` is the exact parameter.
    fn is_exact_in_f64(&self) -> bool {
        true
    }
}

impl ParameterValue for f64 {
    fn value_f64(&self) -> f64 {
        *self
    }
    fn rational_approx(&self, _bits: u32) -> BigRational {
        BigRational::from_f64(*self).unwrap_or_else(BigRational::zero)
    }
}

fn rational_to_mp(q: &BigRational) -> Mp {
    let num = Mp::from_decimal_str(&q.numer().to_string());
    let den = Mp::from_decimal_str(&q.denom().to_string());
    num.div(&den)
}

fn f64_to_mp(x: f64) -> Mp {
    match BigRational::from_f64(x) {
        Some(q) if q.denom() != &BigInt::from(1) => rational_to_mp(&q),
        _ => Mp::from_f64(x),
    }
}

fn check_inputs(s: ComplexPoint, alpha: f64, k: u32) -> Result<()> {
    if !s.is_finite() {
        return Err(Error::Domain("non-finite s".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!("alpha = {alpha} outside (0,1]")));
    }
    if k > MAX_DERIVATIVE {
        return Err(Error::Domain(format!("derivative order {k} > {MAX_DERIVATIVE}")));
    }
    if (s.sigma - 1.0).hypot(s.t) < POLE_GUARD {
        return Err(Error::PoleAtOne {
            sigma: s.sigma,
            t: s.t,
        });
    }
    if s.sigma + 2.0 * 5.0 - 1.0 <= 0.5 {
        return Err(Error::Domain(format!(
            "sigma = {} too far left for the Euler–Maclaurin order in use",
            s.sigma
        )));
    }
    Ok(())
}

/// Crude bound on |∂_α ζ^{(k)}(s;α)| ≤ |s|·(1+log X)^k·Σ(n+α)^{-σ-1}
/// (the k-th derivative also picks up a (−log)^{k−1} term, absorbed by the
/// extra factor k+1).
fn alpha_sensitivity(s: ComplexPoint, a: f64, k: usize, n: usize) -> f64 {
    let tail = if s.sigma > 0.0 {
        1.0 + 1.0 / s.sigma
    } else {
        2.0 * (n as f64).powf(-s.sigma)
    };
    (s.sigma.abs() + s.t.abs() + 1.0 + k as f64)
        * (1.0 + (n as f64 + 1.0).ln()).powi(k as i32)
        * (a.powf(-s.sigma - 1.0) + tail)
}

fn evaluate<A: ParameterValue + ?Sized>(
    s: ComplexPoint,
    alpha: &A,
    k: u32,
    prec: &Precision,
    skip_first: bool,
) -> Result<EvalResult> {
    let a = alpha.value_f64();
    check_inputs(s, a, k)?;
    let k = k as usize;
    let target = prec.target_abs_error;
    let mut n = (2 * s.t.abs().ceil() as usize).max(50);
    loop {
        let bound = euler_maclaurin::remainder_bound(s.sigma, s.t, a, k, n);
        if bound <= 0.5 * target {
            let (value, rounding, decimal) = if prec.is_native() {
                let v = euler_maclaurin::evaluate(&s.sigma, &s.t, &a, k, n, skip_first);
                let out = Complex64::new(v.value.re, v.value.im);
                let alpha_err = if alpha.is_exact_in_f64() {
                    0.0
                } else {
                    a * f64::EPSILON * alpha_sensitivity(s, a, k, n)
                };
                (out, v.rounding + alpha_err + out.norm() * f64::EPSILON, None)
            } else {
                let bits = prec.bits();
                let digits = prec.working_digits as usize;
                with_mp_precision(bits, || {
                    let q = alpha.rational_approx(bits as u32 + 16);
                    let am = rational_to_mp(&q);
                    let v = euler_maclaurin::evaluate(
                        &f64_to_mp(s.sigma),
                        &f64_to_mp(s.t),
                        &am,
                        k,
                        n,
                        skip_first,
                    );
                    let alpha_err = 2f64.powi(-(bits as i32) - 16) * alpha_sensitivity(s, a, k, n);
                    let dec = (v.value.re.to_decimal(digits), v.value.im.to_decimal(digits));
                    (v.value.to_c64(), v.rounding + alpha_err, Some(dec))
                })
            };
            let total = bound + rounding;
            if total <= target {
                return Ok(EvalResult {
                    value,
                    error_radius: total,
                    terms_used: n,
                    decimal,
                });
            }
            if rounding > 0.5 * target {
                return Err(Error::PrecisionUnachievable {
                    target,
                    achieved: total,
                });
            }
        }
        if n >= MAX_CUTOFF {
            return Err(Error::PrecisionUnachievable {
                target,
                achieved: bound,
            });
        }
        n *= 2;
    }
}

/// ζ^{(k)}(s;α) by Euler–Maclaurin summation, k ≤ 10, α ∈ (0,1].
pub fn hurwitz_zeta<A: ParameterValue + ?Sized>(
    s: ComplexPoint,
    alpha: &A,
    k: u32,
    prec: &Precision,
) -> Result<EvalResult> {
    evaluate(s, alpha, k, prec, false)
}

/// ζ₁(s;α) = ζ(s;α) − α^{-s}.
pub fn zeta_one<A: ParameterValue + ?Sized>(
    s: ComplexPoint,
    alpha: &A,
    prec: &Precision,
) -> Result<EvalResult> {
    evaluate(s, alpha, 0, prec, true)
}

/// Double-precision shortcut used by scans: ζ^{(k)}(s;α) with a target of
/// `target` and native arithmetic.
pub fn hurwitz_zeta_f64(s: ComplexPoint, alpha: f64, k: u32, target: f64) -> Result<Complex64> {
    Ok(hurwitz_zeta(s, &alpha, k, &Precision::double(target)?)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(sigma: f64, t: f64) -> ComplexPoint {
        ComplexPoint::new(sigma, t)
    }

    #[test]
    fn basel_and_half_shift() {
        let prec = Precision::double(1e-12).unwrap();
        let z = hurwitz_zeta(p(2.0, 0.0), &1.0, 0, &prec).unwrap();
        assert!((z.value.re - PI * PI / 6.0).abs() < 1e-12);
        assert!(z.error_radius <= 1e-12);
        let h = hurwitz_zeta(p(2.0, 0.0), &0.5, 0, &prec).unwrap();
        assert!((h.value.re - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn multiprecision_path_agrees_and_prints_digits() {
        let prec = Precision::new(30, 1e-25).unwrap();
        let z = hurwitz_zeta(p(2.0, 0.0), &1.0, 0, &prec).unwrap();
        let (re, _) = z.decimal.clone().unwrap();
        assert!(re.starts_with("1.64493406684822643647241516"), "{re}");
        assert!(z.error_radius <= 1e-25);
    }

    #[test]
    fn zeta_one_subtracts_first_term() {
        let prec = Precision::double(1e-12).unwrap();
        let z = zeta_one(p(2.0, 0.0), &0.5, &prec).unwrap();
        assert!((z.value.re - (PI * PI / 2.0 - 4.0)).abs() < 1e-11);
        let z = zeta_one(p(2.0, 0.0), &1.0, &prec).unwrap();
        assert!((z.value.re - (PI * PI / 6.0 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let prec = Precision::double(1e-10).unwrap();
        assert!(matches!(
            hurwitz_zeta(p(1.0, 0.0), &0.5, 0, &prec),
            Err(Error::PoleAtOne { .. })
        ));
        assert!(hurwitz_zeta(p(2.0, 0.0), &1.5, 0, &prec).is_err());
        assert!(hurwitz_zeta(p(2.0, 0.0), &0.5, 11, &prec).is_err());
        assert!(Precision::new(14, 1e-10).is_err());
        assert!(Precision::new(15, 1e-20).is_err());
    }

    #[test]
    fn unreachable_target_in_double_is_reported() {
        let prec = Precision::new(16, 1e-15).unwrap();
        let r = hurwitz_zeta(p(0.6, 90.0), &0.3, 3, &prec);
        assert!(matches!(r, Err(Error::PrecisionUnachievable { .. })));
    }
}
