//! Euler–Maclaurin summation for ζ^{(k)}(s;α), generic over the scalar backend.
//!
//! With X = N + α,
//!
//! ζ(s;α) = Σ_{n<N} (n+α)^{-s} + X^{1-s}/(s-1) + X^{-s}/2
//!        + Σ_{j=1}^{M} B_{2j}/(2j)! · (s)_{2j-1} · X^{-s-2j+1} + R_M,
//!
//! where (s)_m is the rising factorial. Derivatives in s are taken on each
//! tail term through truncated Taylor jets.

use super::scalar::{Cx, Real};

/// Number of Bernoulli correction terms (B₂ … B₁₀).
pub(crate) const EM_ORDER: usize = 5;

/// (numerator, denominator) of B_{2j} for j = 1..=5.
const BERNOULLI: [(f64, f64); EM_ORDER] =
    [(1.0, 6.0), (-1.0, 30.0), (1.0, 42.0), (-1.0, 30.0), (5.0, 66.0)];

/// (2j)! for j = 1..=5.
const EVEN_FACTORIALS: [f64; EM_ORDER] = [2.0, 24.0, 720.0, 40320.0, 3628800.0];

type Jet<R> = Vec<Cx<R>>;

fn jet_mul<R: Real>(a: &Jet<R>, b: &Jet<R>) -> Jet<R> {
    let k = a.len();
    let mut out = vec![Cx::zero(); k];
    for i in 0..k {
        for j in 0..k - i {
            out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
        }
    }
    out
}

/// Jet of ε ↦ base · exp(-ε·ln X), i.e. coefficients base·(-ln X)^j / j!.
fn exp_jet<R: Real>(base: &Cx<R>, ln_x: &R, order: usize) -> Jet<R> {
    let mut out = Vec::with_capacity(order + 1);
    let mut c = base.clone();
    let neg_ln = ln_x.neg();
    for j in 0..=order {
        out.push(c.clone());
        c = c.scale(&neg_ln).scale(&R::from_f64(1.0 / (j + 1) as f64));
    }
    out
}

/// Jet of ε ↦ s₀ + shift + ε.
fn linear_jet<R: Real>(s: &Cx<R>, shift: f64, order: usize) -> Jet<R> {
    let mut out = vec![Cx::zero(); order + 1];
    out[0] = Cx::new(s.re.add(&R::from_f64(shift)), s.im.clone());
    if order >= 1 {
        out[1] = Cx::real(R::from_f64(1.0));
    }
    out
}

/// x^{-s} for real x > 0 given ln x.
fn power<R: Real>(ln_x: &R, s: &Cx<R>) -> Cx<R> {
    let mag = s.re.mul(ln_x).neg().exp();
    let (sin, cos) = s.im.mul(ln_x).sin_cos();
    Cx::new(mag.mul(&cos), mag.mul(&sin).neg())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn pairwise_sum<R: Real>(terms: &[Cx<R>]) -> Cx<R> {
    match terms.len() {
        0 => Cx::zero(),
        1 => terms[0].clone(),
        n => {
            let (a, b) = terms.split_at(n / 2);
            pairwise_sum(a).add(&pairwise_sum(b))
        }
    }
}

pub(crate) struct TailJet<R> {
    /// Tail contributions to ζ^{(i)}, i = 0..=k (already multiplied by i!).
    pub derivatives: Vec<Cx<R>>,
    /// Σ of |tail term| at the top order, before the k! factor.
    pub abs_top: f64,
    pub ln_x: f64,
}

/// Everything after the main sum: integral term, half term and the
/// Bernoulli corrections, as derivatives of orders 0..=k.
pub(crate) fn tail_jet<R: Real>(sigma: &R, t: &R, alpha: &R, k: usize, n_terms: usize) -> TailJet<R> {
    let s = Cx::new(sigma.clone(), t.clone());
    let x = R::from_f64(n_terms as f64).add(alpha);
    let ln_x = x.ln();
    let ln_xf = ln_x.to_f64();

    // X^{1-s}/(s-1)
    let one_minus_s_pow = power(&ln_x, &Cx::new(sigma.sub(&R::from_f64(1.0)), t.clone()));
    let mut inv = Vec::with_capacity(k + 1);
    let s_minus_one = Cx::new(sigma.sub(&R::from_f64(1.0)), t.clone());
    let r = s_minus_one.recip();
    let mut c = r.clone();
    for _ in 0..=k {
        inv.push(c.clone());
        c = c.mul(&r).scale(&R::from_f64(-1.0));
    }
    let integral = jet_mul(&exp_jet(&one_minus_s_pow, &ln_x, k), &inv);

    // X^{-s}/2
    let xs = power(&ln_x, &s);
    let half = exp_jet(&xs.scale(&R::from_f64(0.5)), &ln_x, k);

    let mut tail = vec![Cx::zero(); k + 1];
    for i in 0..=k {
        tail[i] = integral[i].add(&half[i]);
    }

    // Bernoulli corrections. rising holds the jet of (s)_{2j-1}.
    let mut rising = linear_jet(&s, 0.0, k);
    let mut tail_abs = integral[k].abs_f64() + half[k].abs_f64();
    for j in 1..=EM_ORDER {
        if j > 1 {
            let m = 2 * j - 1;
            rising = jet_mul(&rising, &linear_jet(&s, (m - 2) as f64, k));
            rising = jet_mul(&rising, &linear_jet(&s, (m - 1) as f64, k));
        }
        let (bn, bd) = BERNOULLI[j - 1];
        let coef = R::from_f64(bn).div(&R::from_f64(bd * EVEN_FACTORIALS[j - 1]));
        let shifted = Cx::new(sigma.add(&R::from_f64((2 * j - 1) as f64)), t.clone());
        let pow = power(&ln_x, &shifted).scale(&coef);
        let term = jet_mul(&rising, &exp_jet(&pow, &ln_x, k));
        tail_abs += term[k].abs_f64();
        for i in 0..=k {
            tail[i] = tail[i].add(&term[i]);
        }
    }

    let mut fact = 1.0;
    for (i, c) in tail.iter_mut().enumerate() {
        if i > 0 {
            fact *= i as f64;
        }
        *c = c.scale(&R::from_f64(fact));
    }
    TailJet {
        derivatives: tail,
        abs_top: tail_abs,
        ln_x: ln_xf,
    }
}

pub(crate) struct EmValue<R> {
    pub value: Cx<R>,
    /// Estimated accumulated rounding error of the whole evaluation.
    pub rounding: f64,
}

/// Evaluates the Euler–Maclaurin approximation with cutoff `n_terms`.
/// When `skip_first` is set the n = 0 term is omitted, giving ζ₁(s;α).
pub(crate) fn evaluate<R: Real>(
    sigma: &R,
    t: &R,
    alpha: &R,
    k: usize,
    n_terms: usize,
    skip_first: bool,
) -> EmValue<R> {
    let u = R::unit_roundoff();
    let s = Cx::new(sigma.clone(), t.clone());
    let (sigma_f, t_f) = (sigma.to_f64(), t.to_f64());
    let start = usize::from(skip_first);

    let mut terms = Vec::with_capacity(n_terms);
    let mut abs_weighted = 0.0;
    let mut abs_sum = 0.0;
    for n in start..n_terms {
        let x = R::from_f64(n as f64).add(alpha);
        let l = x.ln();
        let mut term = power(&l, &s);
        let neg_l = l.neg();
        for _ in 0..k {
            term = term.scale(&neg_l);
        }
        let lf = l.to_f64().abs();
        let a = term.abs_f64();
        abs_sum += a;
        abs_weighted += a * (2.0 * t_f.abs() * lf + 2.0 * sigma_f.abs() * lf + 10.0 + 2.0 * k as f64);
        terms.push(term);
    }
    let depth = (terms.len().max(2) as f64).log2().ceil();
    let main = pairwise_sum(&terms);

    let tail = tail_jet(sigma, t, alpha, k, n_terms);
    let tail_abs = tail.abs_top;
    let ln_xf = tail.ln_x;

    let kf = factorial(k);
    let value = main.add(&tail.derivatives[k]);
    let rounding = u
        * (abs_weighted
            + depth * abs_sum
            + kf * tail_abs * (2.0 * t_f.abs() * ln_xf + 2.0 * sigma_f.abs() * ln_xf + 60.0 + 4.0 * k as f64));
    EmValue { value, rounding }
}

/// Upper bound for |R_M^{(k)}|, the k-th s-derivative of the remainder.
pub(crate) fn remainder_bound(sigma: f64, t: f64, alpha: f64, k: usize, n_terms: usize) -> f64 {
    let two_m = 2 * EM_ORDER;
    let x = n_terms as f64 + alpha;
    let ln_x = x.ln();
    let c = sigma + two_m as f64 - 1.0;
    if c <= 0.0 {
        return f64::INFINITY;
    }
    // Taylor coefficients of P(s) = (s)_{2M} around s₀, in f64.
    let mut poly = vec![num::complex::Complex64::new(1.0, 0.0)];
    for i in 0..two_m {
        let a = num::complex::Complex64::new(sigma + i as f64, t);
        let mut next = vec![num::complex::Complex64::new(0.0, 0.0); poly.len() + 1];
        for (d, p) in poly.iter().enumerate() {
            next[d] += p * a;
            next[d + 1] += p;
        }
        poly = next;
    }
    let (bn, bd) = BERNOULLI[EM_ORDER - 1];
    let b_coef = (bn / bd).abs() / EVEN_FACTORIALS[EM_ORDER - 1];

    // I_m = ∫_X^∞ (ln u)^m u^{-c-1} du
    let integral = |m: usize| -> f64 {
        let mut acc = 0.0;
        let mut falling = 1.0;
        for i in 0..=m {
            if i > 0 {
                falling *= (m - i + 1) as f64;
            }
            acc += falling * ln_x.powi((m - i) as i32) * (-c * ln_x).exp() / c.powi(i as i32 + 1);
        }
        acc
    };

    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (k - j + 1) as f64 / j as f64;
        }
        let pj = if j < poly.len() { poly[j].norm() * factorial(j) } else { 0.0 };
        total += binom * pj * integral(k - j);
    }
    b_coef * total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basel_value_in_f64() {
        let v = evaluate(&2.0, &0.0, &1.0, 0, 50, false);
        assert!((v.value.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(v.value.im.abs() < 1e-15);
        assert!(remainder_bound(2.0, 0.0, 1.0, 0, 50) < 1e-15);
    }

    #[test]
    fn derivative_of_riemann_zeta_at_two() {
        // ζ'(2) = -0.93754825431584375370...
        let v = evaluate(&2.0, &0.0, &1.0, 1, 60, false);
        assert!((v.value.re + 0.937_548_254_315_843_8).abs() < 1e-13);
    }

    #[test]
    fn remainder_shrinks_with_cutoff() {
        let a = remainder_bound(0.7, 30.0, 0.3, 2, 100);
        let b = remainder_bound(0.7, 30.0, 0.3, 2, 200);
        assert!(b < a / 100.0);
    }
}
