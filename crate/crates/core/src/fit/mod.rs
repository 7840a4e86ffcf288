//! Twisted Dirichlet polynomials
//! ζ_Q(s,θ,α) = Σ_{n<Q} e(θ_n)(n+α)^{−s} and fitting of derivative targets.
//!
//! The pipeline is: tail offsets A_k, the interpolation certificate, a solve
//! of the polydisc system g_k(z,α) = A_k, and unimodular phase rounding.

mod certificate;
mod polydisc;
mod rounding;

use std::f64::consts::TAU;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zeta::ComplexPoint;

pub use certificate::{certify_offsets, feasibility_certificate, InterpolationCertificate};
pub use polydisc::{solve_polydisc, solve_polydisc_with, PolydiscOptions, PolydiscSolution, WarmStart};
pub use rounding::{round_phases, RoundedPhases};

/// Largest derivative order accepted by [`eval_twisted`].
pub const MAX_ORDER: u32 = 10;

/// e(x) = exp(2πix).
pub fn unit(theta: f64) -> Complex64 {
    let (s, c) = (TAU * theta).sin_cos();
    Complex64::new(c, s)
}

/// Phases in full turns, reduced to [0,1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector(Vec<f64>);

impl PhaseVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::Domain("phase vector must be non-empty".into()));
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("phases must be finite".into()));
        }
        Ok(PhaseVector(theta.into_iter().map(reduce_turn).collect()))
    }

    pub fn zeros(q: usize) -> Self {
        PhaseVector(vec![0.0; q.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

pub(crate) fn reduce_turn(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// ζ_Q(s,θ,α) together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedPolynomial {
    q: usize,
    theta: PhaseVector,
    alpha: f64,
}

impl TwistedPolynomial {
    pub fn new(theta: PhaseVector, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha = {alpha} outside (0,1]")));
        }
        Ok(TwistedPolynomial {
            q: theta.len(),
            theta,
            alpha,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn theta(&self) -> &PhaseVector {
        &self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// ∂^k_s ζ_Q(s,θ,α) = Σ_{n<Q} e(θ_n)(−log(n+α))^k (n+α)^{−s}.
pub fn eval_twisted(poly: &TwistedPolynomial, s: ComplexPoint, k: u32) -> Result<Complex64> {
    if k > MAX_ORDER {
        return Err(Error::Domain(format!("derivative order {k} exceeds {MAX_ORDER}")));
    }
    let s = s.to_complex();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, &theta) in poly.theta.as_slice().iter().enumerate() {
        let ln_x = (n as f64 + poly.alpha).ln();
        let term = (-s * ln_x).exp() * (-ln_x).powi(k as i32);
        acc += unit(theta) * term;
    }
    Ok(acc)
}

/// Targets a_0..a_N for ζ^{(k)}(σ+iτ;α) with tolerance ε and the lower
/// bound A_floor for admissible parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub a: Vec<Complex64>,
    pub sigma: f64,
    pub epsilon: f64,
    pub a_floor: f64,
}

impl TargetSpec {
    pub fn new(a: Vec<Complex64>, sigma: f64, epsilon: f64, a_floor: f64) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Domain("need at least one target".into()));
        }
        if !(sigma > 0.5 && sigma <= 1.0) {
            return Err(Error::Domain(format!("sigma = {sigma} outside (1/2,1]")));
        }
        if !(epsilon > 0.0) {
            return Err(Error::Domain(format!("epsilon = {epsilon} must be positive")));
        }
        if !(a_floor > 0.0 && a_floor <= 1.0) {
            return Err(Error::Domain(format!("A_floor = {a_floor} outside (0,1]")));
        }
        Ok(TargetSpec {
            a,
            sigma,
            epsilon,
            a_floor,
        })
    }

    /// N, the highest derivative order.
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }

    pub(crate) fn check_alpha(&self, alpha: f64) -> Result<()> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha = {alpha} outside (0,1]")));
        }
        if alpha < self.a_floor {
            return Err(Error::Domain(format!(
                "alpha = {alpha} below the floor {}",
                self.a_floor
            )));
        }
        Ok(())
    }
}

/// A_k = a_k − Σ_{n<R} (−1)^n (−log(n+α))^k (n+α)^{−σ}.
pub fn tail_offsets(targets: &TargetSpec, r: usize, alpha: f64) -> Result<Vec<Complex64>> {
    if r == 0 {
        return Err(Error::Domain("R must be at least 1".into()));
    }
    let k_len = targets.a.len();
    let mut prefix = vec![0.0; k_len];
    for n in 0..r {
        let ln_x = (n as f64 + alpha).ln();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let mut term = sign * (-targets.sigma * ln_x).exp();
        for p in prefix.iter_mut() {
            *p += term;
            term *= -ln_x;
        }
    }
    Ok(targets
        .a
        .iter()
        .zip(&prefix)
        .map(|(a, p)| a - p)
        .collect())
}

/// The real coefficient vectors v_n = ((−log(n+α))^k (n+α)^{−σ})_{k≤N} for
/// R ≤ n < Q, stored column-wise.
#[derive(Debug, Clone)]
pub struct CoefficientVectors {
    r: usize,
    dim: usize,
    data: Vec<f64>,
}

impl CoefficientVectors {
    pub fn new(r: usize, q: usize, sigma: f64, n: usize, alpha: f64) -> Result<Self> {
        if q <= r {
            return Err(Error::Domain(format!("need Q > R, got R = {r}, Q = {q}")));
        }
        let dim = n + 1;
        let mut data = Vec::with_capacity((q - r) * dim);
        for m in r..q {
            let ln_x = (m as f64 + alpha).ln();
            let mut term = (-sigma * ln_x).exp();
            for _ in 0..dim {
                data.push(term);
                term *= -ln_x;
            }
        }
        Ok(CoefficientVectors { r, dim, data })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors, Q − R.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// v_{R+i}.
    pub fn column(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn norm_sqr(&self, i: usize) -> f64 {
        self.column(i).iter().map(|x| x * x).sum()
    }

    /// Σ_n ‖v_n‖².
    pub fn total_norm_sqr(&self) -> f64 {
        (0..self.len()).map(|i| self.norm_sqr(i)).sum()
    }

    /// (g_k(z,α))_k = Σ_n z_n v_n.
    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (i, zi) in z.iter().enumerate() {
            for (o, v) in out.iter_mut().zip(self.column(i)) {
                *o += zi * v;
            }
        }
        out
    }
}

/// Outcome of [`fit_targets`].
#[derive(Debug, Clone, Serialize)]
pub struct FitOutcome {
    pub r: usize,
    pub q: usize,
    pub theta0: PhaseVector,
    pub achieved: Vec<f64>,
    pub certificate: InterpolationCertificate,
    pub residual: f64,
    pub solver_iterations: usize,
    pub best_effort: bool,
    pub rounding_lhs: f64,
    pub rounding_rhs: f64,
}

impl FitOutcome {
    pub fn max_error(&self) -> f64 {
        self.achieved.iter().cloned().fold(0.0, f64::max)
    }

    pub fn within(&self, epsilon: f64) -> bool {
        self.achieved.iter().all(|&e| e < epsilon)
    }
}

/// Runs certificate → polydisc solve → rounding for fixed R < Q and returns
/// θ₀ with θ_{0n} = n/2 for n < R and the achieved errors
/// |∂^k ζ_Q(σ,θ₀,α) − a_k|.
pub fn fit_targets(targets: &TargetSpec, alpha: f64, r: usize, q: usize) -> Result<FitOutcome> {
    fit_targets_with(targets, alpha, r, q, &PolydiscOptions::default())
}

pub fn fit_targets_with(
    targets: &TargetSpec,
    alpha: f64,
    r: usize,
    q: usize,
    options: &PolydiscOptions,
) -> Result<FitOutcome> {
    targets.check_alpha(alpha)?;
    if r == 0 || q <= r {
        return Err(Error::Domain(format!("need Q > R ≥ 1, got R = {r}, Q = {q}")));
    }
    let n = targets.order();
    let offsets = tail_offsets(targets, r, alpha)?;
    let certificate = certify_offsets(r, q, targets.sigma, n, alpha, &offsets)?;
    let vectors = CoefficientVectors::new(r, q, targets.sigma, n, alpha)?;
    let solution = solve_polydisc_with(&vectors, &offsets, certificate.passes, options)?;
    let rounded = round_phases(&solution, &vectors)?;

    let mut theta = Vec::with_capacity(q);
    theta.extend((0..r).map(|m| if m % 2 == 0 { 0.0 } else { 0.5 }));
    theta.extend_from_slice(rounded.theta.as_slice());
    let theta0 = PhaseVector::new(theta)?;
    let poly = TwistedPolynomial::new(theta0.clone(), alpha)?;
    let s = ComplexPoint::new(targets.sigma, 0.0);
    let achieved = (0..=n)
        .map(|k| eval_twisted(&poly, s, k as u32).map(|v| (v - targets.a[k]).norm()))
        .collect::<Result<Vec<_>>>()?;
    Ok(FitOutcome {
        r,
        q,
        theta0,
        achieved,
        certificate,
        residual: solution.residual,
        solver_iterations: solution.iterations,
        best_effort: solution.best_effort,
        rounding_lhs: rounded.certificate_lhs,
        rounding_rhs: rounded.certificate_rhs,
    })
}

/// Search limits for [`plan_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitCaps {
    pub max_r: usize,
    pub max_q: usize,
}

impl Default for FitCaps {
    fn default() -> Self {
        FitCaps {
            max_r: 64,
            max_q: 1 << 20,
        }
    }
}

/// One (R,Q) pair tried by the planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitAttempt {
    pub r: usize,
    pub q: usize,
    pub residual: f64,
    pub max_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitPlan {
    pub outcome: FitOutcome,
    pub attempts: Vec<FitAttempt>,
}

/// Chooses R and Q automatically: R = 1, 2, 4, … and Q = 2R, 4R, … until
/// the polydisc system is solved to tolerance and the rounded phases meet ε.
///
/// After the first solvable Q for a given R, up to two further doublings are
/// tried before R is doubled.
pub fn plan_fit(targets: &TargetSpec, alpha: f64, caps: &FitCaps) -> Result<FitPlan> {
    const EXTRA_DOUBLINGS: usize = 2;
    targets.check_alpha(alpha)?;
    let options = PolydiscOptions {
        max_iterations: 2_000,
        ..PolydiscOptions::default()
    };
    let mut attempts = Vec::new();
    let mut best: Option<FitOutcome> = None;
    let mut r = 1;
    while r <= caps.max_r {
        let mut q = 2 * r;
        let mut extra = 0;
        while q <= caps.max_q {
            let outcome = fit_targets_with(targets, alpha, r, q, &options)?;
            let solved = outcome.residual <= options.tol;
            attempts.push(FitAttempt {
                r,
                q,
                residual: outcome.residual,
                max_error: solved.then(|| outcome.max_error()),
            });
            log::debug!("fit R={r} Q={q} residual={:e}", outcome.residual);
            if solved {
                let done = outcome.within(targets.epsilon);
                if best.as_ref().is_none_or(|b| outcome.max_error() < b.max_error()) {
                    best = Some(outcome);
                }
                if done {
                    return Ok(FitPlan {
                        outcome: best.expect("just stored"),
                        attempts,
                    });
                }
                extra += 1;
                if extra > EXTRA_DOUBLINGS {
                    break;
                }
            }
            q *= 2;
        }
        r *= 2;
    }
    match best {
        Some(outcome) => Ok(FitPlan { outcome, attempts }),
        None => Err(Error::CapExceeded {
            what: "Q".into(),
            value: caps.max_q as f64,
            cap: caps.max_q as f64,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2m1() -> f64 {
        std::f64::consts::SQRT_2 - 1.0
    }

    #[test]
    fn single_term() {
        let p = TwistedPolynomial::new(PhaseVector::zeros(1), 1.0).unwrap();
        let v = eval_twisted(&p, ComplexPoint::new(2.0, 0.0), 0).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn alternating_pair() {
        let p = TwistedPolynomial::new(PhaseVector::new(vec![0.0, 0.5]).unwrap(), 1.0).unwrap();
        let v = eval_twisted(&p, ComplexPoint::new(1.0, 0.0), 0).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phases_reduced() {
        let p = PhaseVector::new(vec![1.25, -0.25, 3.0]).unwrap();
        assert_eq!(p.as_slice(), &[0.25, 0.75, 0.0]);
    }

    #[test]
    fn offsets_small_cases() {
        let t = TargetSpec::new(vec![Complex64::new(5.0, 0.0)], 1.0, 0.1, 0.1).unwrap();
        let a = tail_offsets(&t, 1, 1.0).unwrap();
        assert!((a[0] - Complex64::new(4.0, 0.0)).norm() < 1e-15);
        let t = TargetSpec::new(vec![Complex64::new(0.0, 0.0)], 1.0, 0.1, 0.1).unwrap();
        let a = tail_offsets(&t, 2, 1.0).unwrap();
        assert!((a[0] + 0.5).norm() < 1e-15);
    }

    #[test]
    fn self_generated_targets() {
        let alpha = sqrt2m1();
        let q = 400;
        let p = TwistedPolynomial::new(PhaseVector::zeros(q), alpha).unwrap();
        let s = ComplexPoint::new(1.0, 0.0);
        let a = (0..3).map(|k| eval_twisted(&p, s, k).unwrap()).collect();
        let t = TargetSpec::new(a, 1.0, 0.5, 0.1).unwrap();
        let out = fit_targets(&t, alpha, 1, q).unwrap();
        assert!(out.residual < 1e-9);
        assert!(out.rounding_lhs <= out.rounding_rhs);
        assert!(out.within(0.5), "{:?}", out.achieved);
    }
}
