//! Exact real algebraic numbers in (0,1], given by a minimal polynomial and
//! an isolating interval.

use std::fmt;

use num::rational::BigRational;
use num::{BigInt, FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{count_roots, irreducibility, sturm_sequence, IntegerPolynomial, Irreducibility};
use crate::error::{Error, Result};
use crate::zeta::ParameterValue;

/// Bits of the cached refinement kept with every parameter.
const CACHED_BITS: u32 = 96;

/// Closed interval with rational endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn point(x: BigRational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn add(&self, o: &Self) -> Self {
        RationalInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn neg(&self) -> Self {
        RationalInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RationalInterval { lo, hi }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// +1, −1, or 0 when the sign is not determined.
    pub fn sign(&self) -> i8 {
        if self.lo.is_positive() {
            1
        } else if self.hi.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Lower bound of |x| over the interval.
    pub fn abs_lower(&self) -> BigRational {
        if self.contains_zero() {
            BigRational::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }
}

/// Horner evaluation of an integer polynomial over an interval.
pub fn eval_interval(p: &IntegerPolynomial, x: &RationalInterval) -> RationalInterval {
    let mut acc = RationalInterval::point(BigRational::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&RationalInterval::point(BigRational::from_integer(c.clone())));
    }
    acc
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // Scale so that both parts fit comfortably in f64 before dividing.
    let n = q.numer().bits() as i64;
    let d = q.denom().bits() as i64;
    let shift = (n.max(d) - 900).max(0) as usize;
    let num = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let den = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    num / den
}

fn bisect(p: &IntegerPolynomial, mut iv: RationalInterval, bits: u32) -> RationalInterval {
    let two = BigRational::from_integer(BigInt::from(2));
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits as usize);
    let lo_sign = p.eval_rational(&iv.lo).signum();
    while iv.width() > target {
        let mid = (&iv.lo + &iv.hi) / &two;
        let v = p.eval_rational(&mid);
        if v.is_zero() {
            return RationalInterval::point(mid);
        }
        if v.signum() == lo_sign {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
    iv
}

/// Algebraic irrational α ∈ (0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicParameter {
    minpoly: IntegerPolynomial,
    isolating: RationalInterval,
    refined: RationalInterval,
    degree: u32,
    height: BigInt,
    value: f64,
}

impl AlgebraicParameter {
    /// Validates the minimal polynomial and the isolating interval. The
    /// polynomial is normalised to be primitive with positive leading
    /// coefficient.
    pub fn new(minpoly: IntegerPolynomial, lo: BigRational, hi: BigRational) -> Result<Self> {
        let minpoly = minpoly.primitive_part();
        let degree = minpoly
            .degree()
            .ok_or_else(|| Error::InvalidAlgebraic("zero polynomial".into()))?;
        if degree < 2 {
            return Err(Error::InvalidAlgebraic(
                "degree < 2: the parameter must be irrational".into(),
            ));
        }
        match irreducibility(&minpoly) {
            Irreducibility::Irreducible => {}
            Irreducibility::Reducible => {
                return Err(Error::InvalidAlgebraic(format!("{minpoly} is reducible")))
            }
            Irreducibility::Unknown => {
                return Err(Error::InvalidAlgebraic(format!(
                    "could not certify irreducibility of {minpoly}"
                )))
            }
        }
        if lo >= hi {
            return Err(Error::InvalidAlgebraic("empty isolating interval".into()));
        }
        let seq = sturm_sequence(&minpoly);
        if count_roots(&seq, &lo, &hi) != 1 {
            return Err(Error::InvalidAlgebraic(format!(
                "interval does not isolate exactly one root of {minpoly}"
            )));
        }
        let zero = BigRational::zero();
        let one = BigRational::one();
        let clip_lo = if lo > zero { lo.clone() } else { zero };
        let clip_hi = if hi < one { hi.clone() } else { one };
        if clip_lo >= clip_hi || count_roots(&seq, &clip_lo, &clip_hi) != 1 {
            return Err(Error::InvalidAlgebraic("root is not in (0,1]".into()));
        }
        let isolating = RationalInterval { lo: clip_lo, hi: clip_hi };
        let refined = bisect(&minpoly, isolating.clone(), CACHED_BITS);
        let value = rational_to_f64(&refined.mid());
        let height = minpoly.height();
        Ok(AlgebraicParameter {
            minpoly,
            isolating,
            refined,
            degree: degree as u32,
            height,
            value,
        })
    }

    /// Convenience constructor from integer coefficients (ascending) and a
    /// floating-point interval, converted exactly.
    pub fn from_coeffs(coeffs: &[i64], interval: (f64, f64)) -> Result<Self> {
        let lo = BigRational::from_f64(interval.0)
            .ok_or_else(|| Error::InvalidAlgebraic("non-finite interval".into()))?;
        let hi = BigRational::from_f64(interval.1)
            .ok_or_else(|| Error::InvalidAlgebraic("non-finite interval".into()))?;
        Self::new(IntegerPolynomial::from_i64(coeffs), lo, hi)
    }

    /// √2 − 1, root of X² + 2X − 1.
    pub fn sqrt2_minus_1() -> Self {
        Self::from_coeffs(&[-1, 2, 1], (0.4, 0.5)).expect("valid preset")
    }

    /// (√5 − 1)/2, root of X² + X − 1.
    pub fn golden_conjugate() -> Self {
        Self::from_coeffs(&[-1, 1, 1], (0.6, 0.7)).expect("valid preset")
    }

    /// Real root of X³ + X − 1.
    pub fn cubic_root() -> Self {
        Self::from_coeffs(&[-1, 1, 0, 1], (0.6, 0.7)).expect("valid preset")
    }

    /// Root of X⁴ + X − 1 in (0,1).
    pub fn quartic_root() -> Self {
        Self::from_coeffs(&[-1, 1, 0, 0, 1], (0.7, 0.8)).expect("valid preset")
    }

    pub fn minpoly(&self) -> &IntegerPolynomial {
        &self.minpoly
    }

    pub fn isolating_interval(&self) -> &RationalInterval {
        &self.isolating
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn height(&self) -> &BigInt {
        &self.height
    }

    pub fn height_f64(&self) -> f64 {
        self.height.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Interval of width ≤ 2^{-bits} containing α.
    pub fn enclosure(&self, bits: u32) -> RationalInterval {
        if bits <= CACHED_BITS {
            self.refined.clone()
        } else {
            bisect(&self.minpoly, self.refined.clone(), bits)
        }
    }

    /// Whether P(α) = 0, decided by divisibility by the minimal polynomial.
    pub fn is_root_of(&self, p: &IntegerPolynomial) -> bool {
        self.minpoly.divides(p)
    }

    /// Enclosure of P(α) that excludes zero, refined until its relative width
    /// is below 2^{-rel_bits}. Returns `None` when P(α) = 0.
    pub fn eval_enclosure(&self, p: &IntegerPolynomial, rel_bits: u32) -> Option<RationalInterval> {
        if p.is_zero() || self.is_root_of(p) {
            return None;
        }
        let mut bits = CACHED_BITS;
        loop {
            let iv = eval_interval(p, &self.enclosure(bits));
            if !iv.contains_zero() {
                let rel = iv.width() / iv.abs_lower();
                let limit = BigRational::new(BigInt::one(), BigInt::one() << rel_bits as usize);
                if rel <= limit {
                    return Some(iv);
                }
            }
            bits *= 2;
        }
    }
}

impl ParameterValue for AlgebraicParameter {
    fn value_f64(&self) -> f64 {
        self.value
    }

    fn rational_approx(&self, bits: u32) -> BigRational {
        self.enclosure(bits).mid()
    }

    fn is_exact_in_f64(&self) -> bool {
        false
    }
}

impl fmt::Display for AlgebraicParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} ≈ {:.15}", self.minpoly, self.value)
    }
}

/// Configuration form: `{"minpoly": [-1, 2, 1], "interval": [0.4, 0.5]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicSpec {
    pub minpoly: Vec<i64>,
    pub interval: [f64; 2],
}

impl TryFrom<&AlgebraicSpec> for AlgebraicParameter {
    type Error = Error;
    fn try_from(s: &AlgebraicSpec) -> Result<Self> {
        AlgebraicParameter::from_coeffs(&s.minpoly, (s.interval[0], s.interval[1]))
    }
}

impl From<&AlgebraicParameter> for AlgebraicSpec {
    fn from(a: &AlgebraicParameter) -> Self {
        AlgebraicSpec {
            minpoly: a.minpoly.coeffs().iter().map(|c| c.to_i64().unwrap_or(0)).collect(),
            interval: [
                rational_to_f64(&a.isolating.lo),
                rational_to_f64(&a.isolating.hi),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_have_expected_values() {
        let a = AlgebraicParameter::sqrt2_minus_1();
        assert!((a.value() - (2f64.sqrt() - 1.0)).abs() < 3e-16);
        assert_eq!(a.degree(), 2);
        assert_eq!(a.height(), &BigInt::from(2));
        let g = AlgebraicParameter::golden_conjugate();
        assert!((g.value() - (5f64.sqrt() - 1.0) / 2.0).abs() < 3e-16);
        let q = AlgebraicParameter::quartic_root();
        assert!(q.minpoly().eval_f64(q.value()).abs() < 1e-15);
        assert_eq!(q.degree(), 4);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(AlgebraicParameter::from_coeffs(&[-1, 2, 1], (0.0, 1.0)).is_ok());
        assert!(AlgebraicParameter::from_coeffs(&[-1, 2, 1], (0.5, 0.9)).is_err());
        assert!(AlgebraicParameter::from_coeffs(&[-1, 0, 1], (0.5, 1.5)).is_err());
        assert!(AlgebraicParameter::from_coeffs(&[-1, 2], (0.0, 1.0)).is_err());
        // Root 1+√2 is not in (0,1].
        assert!(AlgebraicParameter::from_coeffs(&[-1, -2, 1], (2.0, 3.0)).is_err());
    }

    #[test]
    fn normalises_sign_and_content() {
        let a = AlgebraicParameter::from_coeffs(&[2, -4, -2], (0.4, 0.5)).unwrap();
        assert_eq!(a.minpoly(), &IntegerPolynomial::from_i64(&[-1, 2, 1]));
    }

    #[test]
    fn enclosures_are_tight_and_exclude_zero() {
        let a = AlgebraicParameter::sqrt2_minus_1();
        let e = a.enclosure(200);
        assert!(e.width() <= BigRational::new(BigInt::one(), BigInt::one() << 200usize));
        let p = IntegerPolynomial::from_i64(&[-4, 3]);
        let iv = a.eval_enclosure(&p, 60).unwrap();
        assert_eq!(iv.sign(), -1);
        assert!((rational_to_f64(&iv.mid()) - (3.0 * 2f64.sqrt() - 7.0)).abs() < 1e-15);
        assert!(a.eval_enclosure(&IntegerPolynomial::from_i64(&[-1, 2, 1]), 60).is_none());
    }
}
