//! Dense univariate polynomials with exact integer coefficients.

use std::fmt;

use num::integer::Integer;
use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Integer polynomial, coefficients in ascending order of degree, with no
/// trailing zeros (the zero polynomial has an empty coefficient list).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntegerPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntegerPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntegerPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The linear polynomial n + X.
    pub fn shifted_x(n: i64) -> Self {
        Self::from_i64(&[n, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Naive height: the largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Content-free version with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + o.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_rational(&self) -> RationalPolynomial {
        RationalPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Whether `self` divides `o` in ℚ[X].
    pub fn divides(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        o.to_rational().rem(&self.to_rational()).is_zero()
    }

    /// Rational roots (candidates p/q with p | a₀, q | a_n), used to detect
    /// reducibility cheaply.
    pub fn has_rational_root(&self) -> bool {
        let Some(deg) = self.degree() else {
            return true;
        };
        if deg == 0 {
            return false;
        }
        if self.coeffs[0].is_zero() {
            return true;
        }
        let a0 = self.coeffs[0].abs().to_u64();
        let an = self.coeffs[deg].abs().to_u64();
        let (Some(a0), Some(an)) = (a0, an) else {
            return false;
        };
        if a0 > 1_000_000 || an > 1_000_000 {
            return false;
        }
        let divisors = |n: u64| (1..=n).filter(move |d| n.is_multiple_of(*d));
        for p in divisors(a0) {
            for q in divisors(an) {
                for sign in [1i64, -1] {
                    let r = BigRational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                    if self.eval_rational(&r).is_zero() {
                        return true;
                    }
                }
            }
        }
        false
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial over ℚ, used for remainders and Sturm sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let q = &r[top] / &lead;
            if !q.is_zero() {
                for i in 0..=dd {
                    let delta = &q * &d.coeffs[i];
                    r[top - dd + i] -= delta;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(p: &IntegerPolynomial) -> Vec<RationalPolynomial> {
    let p0 = p.to_rational();
    let p1 = p0.derivative();
    let mut seq = vec![p0, p1];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        if r.is_zero() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn sign_changes(seq: &[RationalPolynomial], x: &BigRational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots in (a, b].
pub fn count_roots(seq: &[RationalPolynomial], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

// ---- arithmetic modulo a prime, for irreducibility certificates ----

type ModPoly = Vec<u64>;

fn trim(p: &mut ModPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mod_rem(a: &ModPoly, m: &ModPoly, p: u64) -> ModPoly {
    let mut r = a.clone();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let q = r[top] * inv % p;
        for i in 0..=dm {
            let sub = q * m[i] % p;
            r[top - dm + i] = (r[top - dm + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn mod_mul(a: &ModPoly, b: &ModPoly, m: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    mod_rem(&out, m, p)
}

fn mod_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = mod_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_sub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    let mut out: ModPoly = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut out);
    out
}

/// Degrees of the irreducible factors of f modulo p (distinct-degree
/// factorization), or `None` if p divides the leading coefficient or f is
/// not squarefree mod p.
fn factor_degrees_mod(f: &IntegerPolynomial, p: u64) -> Option<Vec<usize>> {
    let pb = BigInt::from(p);
    let mut m: ModPoly = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    trim(&mut m);
    if m.len() != f.coeffs().len() {
        return None;
    }
    let deriv: ModPoly = {
        let mut d: ModPoly = m.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect();
        trim(&mut d);
        d
    };
    if deriv.is_empty() || mod_gcd(&m, &deriv, p).len() > 1 {
        return None;
    }
    let mut degrees = Vec::new();
    let mut rest = m.clone();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            degrees.push(rest.len() - 1);
            break;
        }
        // h = X^{p^d} mod rest
        let mut acc = vec![1u64];
        let mut base = mod_rem(&h, &rest, p);
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mod_mul(&acc, &base, &rest, p);
            }
            base = mod_mul(&base, &base, &rest, p);
            e >>= 1;
        }
        h = acc;
        let g = mod_gcd(&rest, &mod_sub(&h, &x, p), p);
        if g.len() > 1 {
            let gd = g.len() - 1;
            for _ in 0..gd / d {
                degrees.push(d);
            }
            rest = mod_div_exact(&rest, &g, p);
            h = mod_rem(&h, &rest, p);
        }
    }
    Some(degrees)
}

fn mod_div_exact(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    while r.len() > db && !r.is_empty() {
        let top = r.len() - 1;
        let c = r[top] * inv % p;
        q[top - db] = c;
        for i in 0..=db {
            let sub = c * b[i] % p;
            r[top - db + i] = (r[top - db + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    q
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Outcome of the irreducibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

/// Certifies irreducibility over ℚ of a primitive polynomial. Factor-degree
/// patterns modulo small primes restrict the possible degrees of rational
/// factors; if only the trivial splitting survives, f is irreducible.
pub fn irreducibility(f: &IntegerPolynomial) -> Irreducibility {
    let Some(n) = f.degree() else {
        return Irreducibility::Reducible;
    };
    if n == 0 {
        return Irreducibility::Reducible;
    }
    if n == 1 {
        return Irreducibility::Irreducible;
    }
    if f.has_rational_root() {
        return Irreducibility::Reducible;
    }
    if n <= 3 {
        return Irreducibility::Irreducible;
    }
    // possible[k]: a rational factor of degree k is still conceivable.
    let mut possible = vec![true; n + 1];
    for &p in SMALL_PRIMES.iter() {
        let Some(degs) = factor_degrees_mod(f, p) else {
            continue;
        };
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degs {
            for k in (d..=n).rev() {
                if sums[k - d] {
                    sums[k] = true;
                }
            }
        }
        for k in 0..=n {
            possible[k] &= sums[k];
        }
        if (1..n).all(|k| !possible[k]) {
            return Irreducibility::Irreducible;
        }
    }
    Irreducibility::Unknown
}
