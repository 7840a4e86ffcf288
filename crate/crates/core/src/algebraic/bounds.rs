//! Lower bounds for |P(α)| at algebraic α.

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::number::{rational_to_f64, AlgebraicParameter};
use super::poly::IntegerPolynomial;
use crate::error::{Error, Result};

fn ln_height(p: &IntegerPolynomial) -> f64 {
    let h = p.height();
    match h.to_f64() {
        Some(x) if x.is_finite() => x.ln(),
        _ => h.bits() as f64 * std::f64::consts::LN_2,
    }
}

/// Güting's bound for a zero α of `qpoly` of order `t`:
/// (n+1)^{1−m/t}(m+1)^{−n/(2t)} H(P)^{1−m/t} H(Q)^{−n/t} max{1,|α|}^n,
/// with n = deg P, m = deg Q.
pub fn guting_bound(p: &IntegerPolynomial, qpoly: &IntegerPolynomial, t: u32, alpha_abs: f64) -> Result<f64> {
    let n = p
        .degree()
        .ok_or_else(|| Error::Domain("P must be nonzero".into()))? as f64;
    let m = qpoly
        .degree()
        .ok_or_else(|| Error::Domain("Q must be nonzero".into()))? as f64;
    if t == 0 {
        return Err(Error::Domain("zero order t must be at least 1".into()));
    }
    let t = t as f64;
    let ln = (1.0 - m / t) * (n + 1.0).ln() - n / (2.0 * t) * (m + 1.0).ln()
        + (1.0 - m / t) * ln_height(p)
        - n / t * ln_height(qpoly)
        + n * alpha_abs.abs().max(1.0).ln();
    Ok(ln.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleReport {
    pub bound: f64,
    pub value: f64,
    /// Decided from a certified lower enclosure of |P(α)|.
    pub holds: bool,
}

/// ln of (n+1)^{1−d}(d+1)^{−n/2}H(P)^{1−d}H(α)^{−n}.
pub fn liouville_ln_bound(p: &IntegerPolynomial, alpha: &AlgebraicParameter) -> Result<f64> {
    let n = p
        .degree()
        .ok_or_else(|| Error::Domain("P must be nonzero".into()))? as f64;
    let d = alpha.degree() as f64;
    Ok((1.0 - d) * (n + 1.0).ln() - n / 2.0 * (d + 1.0).ln() + (1.0 - d) * ln_height(p)
        - n * alpha.height_f64().ln())
}

/// Compares |P(α)| with the Liouville-type lower bound. P(α) ≠ 0 is
/// established by exact divisibility before anything numeric happens.
pub fn liouville_bound(p: &IntegerPolynomial, alpha: &AlgebraicParameter) -> Result<LiouvilleReport> {
    let ln_bound = liouville_ln_bound(p, alpha)?;
    let iv = alpha.eval_enclosure(p, 60).ok_or(Error::ZeroValue)?;
    let lower = rational_to_f64(&iv.abs_lower());
    let value = rational_to_f64(&iv.mid()).abs();
    let bound = ln_bound.exp();
    // The enclosure is rigorous; the comparison keeps a relative margin for
    // the rounding of the bound itself.
    let holds = lower.ln() >= ln_bound + 1e-12 * ln_bound.abs().max(1.0);
    Ok(LiouvilleReport { bound, value, holds })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn liouville_example() {
        let a = AlgebraicParameter::sqrt2_minus_1();
        let p = IntegerPolynomial::from_i64(&[-1, 3]);
        let r = liouville_bound(&p, &a).unwrap();
        assert!((r.bound - 1.0 / (12.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((r.value - (3.0 * 2f64.sqrt() - 4.0).abs()).abs() < 1e-15);
        assert!(r.holds);
        assert_eq!(liouville_bound(a.minpoly(), &a), Err(Error::ZeroValue));
    }

    #[test]
    fn guting_with_simple_zero_matches_liouville() {
        let a = AlgebraicParameter::sqrt2_minus_1();
        let p = IntegerPolynomial::from_i64(&[-1, 3]);
        let g = guting_bound(&p, a.minpoly(), 1, a.value()).unwrap();
        let l = liouville_ln_bound(&p, &a).unwrap().exp();
        assert!((g - l).abs() < 1e-15);
    }

    #[test]
    fn guting_example_value() {
        // P = X − 1, Q = X² + 2X − 1, t = 1: 2^{-1}·3^{-1/2}·1·2^{-1}.
        let p = IntegerPolynomial::from_i64(&[-1, 1]);
        let q = IntegerPolynomial::from_i64(&[-1, 2, 1]);
        let g = guting_bound(&p, &q, 1, 0.41).unwrap();
        assert!((g - 1.0 / (4.0 * 3f64.sqrt())).abs() < 1e-15);
        // |α| > 1 contributes |α|^n.
        let g2 = guting_bound(&p, &q, 1, 2.0).unwrap();
        assert!((g2 / g - 2.0).abs() < 1e-12);
    }
}
