//! Test-side oracles, written independently of the library evaluators.
#![allow(dead_code)]

use num::complex::Complex64;

/// B₂, B₄, …, B₂₀.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// x^s for x > 0.
pub fn pow(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// ζ(s;a) for any a > 0 by Euler–Maclaurin with cutoff 40 + 2|t|,
/// independent of the library's cutoff rule.
pub fn hurwitz_oracle(s: Complex64, a: f64) -> Complex64 {
    let n = 40 + 2 * s.im.abs().ceil() as usize;
    let x = n as f64 + a;
    let one = Complex64::new(1.0, 0.0);
    let mut sum: Complex64 = (0..n).map(|k| pow(k as f64 + a, -s)).sum();
    sum += pow(x, one - s) / (s - one) + 0.5 * pow(x, -s);
    let mut rising = s;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let two_j = 2 * (j + 1);
        sum += b / fact * rising * pow(x, -s - (two_j as f64 - 1.0));
        rising *= (s + (two_j - 1) as f64) * (s + two_j as f64);
        fact *= ((two_j + 1) * (two_j + 2)) as f64;
    }
    sum
}

pub fn riemann_zeta(s: Complex64) -> Complex64 {
    hurwitz_oracle(s, 1.0)
}

/// a + b√2 with integer parts, for exact checks at α = √2 − 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sqrt2(pub i128, pub i128);

impl Sqrt2 {
    pub fn alpha() -> Self {
        Sqrt2(-1, 1)
    }
    pub fn int(a: i128) -> Self {
        Sqrt2(a, 0)
    }
    pub fn add(self, o: Self) -> Self {
        Sqrt2(self.0 + o.0, self.1 + o.1)
    }
    pub fn mul(self, o: Self) -> Self {
        Sqrt2(self.0 * o.0 + 2 * self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    pub fn pow(self, e: u32) -> Self {
        (0..e).fold(Sqrt2::int(1), |acc, _| acc.mul(self))
    }
}
