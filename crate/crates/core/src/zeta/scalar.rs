//! Scalar backends for the Euler–Maclaurin evaluator: native `f64` and a
//! multiprecision float backed by `astro-float`.

use std::cell::RefCell;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) trait Real: Clone {
    fn from_f64(x: f64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn to_f64(&self) -> f64;
    /// Unit roundoff of the backend.
    fn unit_roundoff() -> f64;
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn unit_roundoff() -> f64 {
        f64::EPSILON / 2.0
    }
}

struct MpContext {
    bits: usize,
    consts: Consts,
}

thread_local! {
    static MP: RefCell<Option<MpContext>> = const { RefCell::new(None) };
}

/// Multiprecision real. Precision and the constants cache live in a
/// thread-local context installed by [`with_mp_precision`].
#[derive(Clone, Debug)]
pub(crate) struct Mp(pub(crate) BigFloat);

/// Runs `f` with the thread-local multiprecision context set to `bits`.
pub(crate) fn with_mp_precision<T>(bits: usize, f: impl FnOnce() -> T) -> T {
    let previous = MP.with(|ctx| {
        let mut ctx = ctx.borrow_mut();
        let consts = match ctx.take() {
            Some(c) => (Some(c.bits), c.consts),
            None => (None, Consts::new().expect("astro-float constants cache")),
        };
        *ctx = Some(MpContext {
            bits,
            consts: consts.1,
        });
        consts.0
    });
    let out = f();
    if let Some(bits) = previous {
        MP.with(|ctx| {
            if let Some(c) = ctx.borrow_mut().as_mut() {
                c.bits = bits;
            }
        });
    }
    out
}

fn mp_bits() -> usize {
    MP.with(|ctx| ctx.borrow().as_ref().map(|c| c.bits).unwrap_or(128))
}

fn with_consts<T>(f: impl FnOnce(usize, &mut Consts) -> T) -> T {
    MP.with(|ctx| {
        let mut ctx = ctx.borrow_mut();
        if ctx.is_none() {
            *ctx = Some(MpContext {
                bits: 128,
                consts: Consts::new().expect("astro-float constants cache"),
            });
        }
        let c = ctx.as_mut().unwrap();
        f(c.bits, &mut c.consts)
    })
}

impl Mp {
    /// Parses a decimal integer string exactly (up to the working precision).
    pub(crate) fn from_decimal_str(s: &str) -> Self {
        with_consts(|p, cc| Mp(BigFloat::parse(s, Radix::Dec, p, RM, cc)))
    }

    /// Decimal rendering with `digits` significant digits.
    pub(crate) fn to_decimal(&self, digits: usize) -> String {
        let full = format!("{}", self.0);
        trim_mantissa(&full, digits)
    }
}

fn trim_mantissa(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let neg = mant.starts_with('-');
    let body = mant.trim_start_matches('-');
    // body looks like "d.dddd"
    let keep = digits + 1; // plus the decimal point
    let trimmed: String = body.chars().take(keep.max(1)).collect();
    format!("{}{}{}", if neg { "-" } else { "" }, trimmed, exp)
}

impl Real for Mp {
    fn from_f64(x: f64) -> Self {
        Mp(BigFloat::from_f64(x, mp_bits().max(64)))
    }
    fn add(&self, o: &Self) -> Self {
        Mp(self.0.add(&o.0, mp_bits(), RM))
    }
    fn sub(&self, o: &Self) -> Self {
        Mp(self.0.sub(&o.0, mp_bits(), RM))
    }
    fn mul(&self, o: &Self) -> Self {
        Mp(self.0.mul(&o.0, mp_bits(), RM))
    }
    fn div(&self, o: &Self) -> Self {
        Mp(self.0.div(&o.0, mp_bits(), RM))
    }
    fn neg(&self) -> Self {
        Mp(self.0.neg())
    }
    fn ln(&self) -> Self {
        with_consts(|p, cc| Mp(self.0.ln(p, RM, cc)))
    }
    fn exp(&self) -> Self {
        with_consts(|p, cc| Mp(self.0.exp(p, RM, cc)))
    }
    fn sin_cos(&self) -> (Self, Self) {
        with_consts(|p, cc| (Mp(self.0.sin(p, RM, cc)), Mp(self.0.cos(p, RM, cc))))
    }
    fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        format!("{}", self.0).parse().unwrap_or(f64::NAN)
    }
    fn unit_roundoff() -> f64 {
        2f64.powi(-(mp_bits() as i32))
    }
}

/// Minimal complex number over a [`Real`] backend.
#[derive(Clone, Debug)]
pub(crate) struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    pub fn new(re: R, im: R) -> Self {
        Cx { re, im }
    }
    pub fn zero() -> Self {
        Cx::new(R::from_f64(0.0), R::from_f64(0.0))
    }
    pub fn real(x: R) -> Self {
        Cx::new(x, R::from_f64(0.0))
    }
    pub fn add(&self, o: &Self) -> Self {
        Cx::new(self.re.add(&o.re), self.im.add(&o.im))
    }
    pub fn mul(&self, o: &Self) -> Self {
        Cx::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }
    pub fn scale(&self, x: &R) -> Self {
        Cx::new(self.re.mul(x), self.im.mul(x))
    }
    pub fn recip(&self) -> Self {
        let d = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        Cx::new(self.re.div(&d), self.im.neg().div(&d))
    }
    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
    pub fn to_c64(&self) -> num::complex::Complex64 {
        num::complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mp_matches_f64_on_elementary_functions() {
        with_mp_precision(128, || {
            let x = Mp::from_f64(2.5);
            assert!((x.ln().to_f64() - 2.5f64.ln()).abs() < 1e-16);
            assert!((x.exp().to_f64() - 2.5f64.exp()).abs() < 1e-14);
            let (s, c) = x.sin_cos();
            assert!((s.to_f64() - 2.5f64.sin()).abs() < 1e-16);
            assert!((c.to_f64() - 2.5f64.cos()).abs() < 1e-16);
            assert!(Mp::unit_roundoff() < 1e-38);
        });
    }

    #[test]
    fn decimal_trimming() {
        assert_eq!(trim_mantissa("-1.23456e-3", 3), "-1.23e-3");
        assert_eq!(trim_mantissa("6.5e+0", 10), "6.5e+0");
    }
}
