use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{certify_offsets, CoefficientVectors};
use crate::error::{Error, Result};

/// Starting point for projected gradient descent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WarmStart {
    Zero,
    /// Minimum-norm solution of V z = A, clipped radially to the polydisc.
    MinNorm,
    /// Newton's method on the Huber-smoothed dual problem, whose optimality
    /// condition is V·sat(Vᵀμ) = A with sat(w) = w/max(1,|w|).
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolydiscOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub warm_start: WarmStart,
    pub dual_iterations: usize,
}

impl Default for PolydiscOptions {
    fn default() -> Self {
        PolydiscOptions {
            tol: 1e-9,
            max_iterations: 100_000,
            warm_start: WarmStart::Dual,
            dual_iterations: 200,
        }
    }
}

/// Coefficients z_n (n = R..Q−1) in the closed polydisc.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolydiscSolution {
    pub z: Vec<Complex64>,
    pub residual: f64,
    /// Projected-gradient iterations after the warm start.
    pub iterations: usize,
    pub dual_iterations: usize,
    /// Objective Σ_k |g_k(z,α) − A_k|² before each gradient step and at the end.
    pub trace: Vec<f64>,
    /// Set when the interpolation certificate did not pass.
    pub best_effort: bool,
}

/// Minimizes Σ_k |g_k(z,α) − A_k|² over |z_n| ≤ 1 for n = R..Q−1.
pub fn solve_polydisc(
    offsets: &[Complex64],
    r: usize,
    q: usize,
    sigma: f64,
    n: usize,
    alpha: f64,
    tol: f64,
) -> Result<PolydiscSolution> {
    let cert = certify_offsets(r, q, sigma, n, alpha, offsets)?;
    let vectors = CoefficientVectors::new(r, q, sigma, n, alpha)?;
    let options = PolydiscOptions {
        tol,
        ..PolydiscOptions::default()
    };
    solve_polydisc_with(&vectors, offsets, cert.passes, &options)
}

fn residual_vec(vectors: &CoefficientVectors, z: &[Complex64], offsets: &[Complex64]) -> Vec<Complex64> {
    vectors
        .apply(z)
        .into_iter()
        .zip(offsets)
        .map(|(g, a)| g - a)
        .collect()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

fn clip(z: Complex64) -> Complex64 {
    let m = z.norm();
    if m > 1.0 {
        z / m
    } else {
        z
    }
}

/// Projected gradient descent with step 1/L, L = 2Σ‖v_n‖², from the chosen
/// warm start. `certified` selects between a hard non-convergence error and
/// a best-effort result.
pub fn solve_polydisc_with(
    vectors: &CoefficientVectors,
    offsets: &[Complex64],
    certified: bool,
    options: &PolydiscOptions,
) -> Result<PolydiscSolution> {
    if offsets.len() != vectors.dim() {
        return Err(Error::Domain(format!(
            "expected {} offsets, got {}",
            vectors.dim(),
            offsets.len()
        )));
    }
    let m = vectors.len();
    let (mut z, dual_iterations) = match options.warm_start {
        WarmStart::Zero => (vec![Complex64::new(0.0, 0.0); m], 0),
        WarmStart::MinNorm => (min_norm_start(vectors, offsets), 0),
        WarmStart::Dual => {
            let (z, its) = dual_newton(vectors, offsets, options.tol, options.dual_iterations);
            (z, its)
        }
    };

    let lipschitz = 2.0 * vectors.total_norm_sqr();
    let step = 1.0 / lipschitz;
    let mut res = residual_vec(vectors, &z, offsets);
    let mut objective = norm_sqr(&res);
    let tol_sqr = options.tol * options.tol;
    let mut trace = vec![objective];
    let mut iterations = 0;
    while objective > tol_sqr && iterations < options.max_iterations {
        for (i, zi) in z.iter_mut().enumerate() {
            let grad: Complex64 = vectors
                .column(i)
                .iter()
                .zip(&res)
                .map(|(v, r)| r * (2.0 * v))
                .sum();
            *zi = clip(*zi - grad * step);
        }
        res = residual_vec(vectors, &z, offsets);
        objective = norm_sqr(&res);
        trace.push(objective);
        iterations += 1;
    }
    let residual = objective.sqrt();
    if residual > options.tol && certified {
        return Err(Error::NonConvergence {
            residual,
            iterations,
        });
    }
    Ok(PolydiscSolution {
        z,
        residual,
        iterations,
        dual_iterations,
        trace,
        best_effort: !certified,
    })
}

fn min_norm_start(vectors: &CoefficientVectors, offsets: &[Complex64]) -> Vec<Complex64> {
    let k = vectors.dim();
    let mut gram = DMatrix::<f64>::zeros(k, k);
    for i in 0..vectors.len() {
        let v = vectors.column(i);
        for a in 0..k {
            for b in 0..k {
                gram[(a, b)] += v[a] * v[b];
            }
        }
    }
    let re = DVector::from_iterator(k, offsets.iter().map(|a| a.re));
    let im = DVector::from_iterator(k, offsets.iter().map(|a| a.im));
    let (yr, yi) = match gram.clone().cholesky() {
        Some(ch) => (ch.solve(&re), ch.solve(&im)),
        None => match gram.pseudo_inverse(1e-14) {
            Ok(p) => (&p * re, &p * im),
            Err(_) => return vec![Complex64::new(0.0, 0.0); vectors.len()],
        },
    };
    (0..vectors.len())
        .map(|i| {
            let v = vectors.column(i);
            let w = Complex64::new(
                v.iter().zip(yr.iter()).map(|(a, b)| a * b).sum(),
                v.iter().zip(yi.iter()).map(|(a, b)| a * b).sum(),
            );
            clip(w)
        })
        .collect()
}

struct DualState {
    w: Vec<Complex64>,
}

impl DualState {
    fn new(vectors: &CoefficientVectors, mu: &[f64]) -> Self {
        let k = vectors.dim();
        let w = (0..vectors.len())
            .map(|i| {
                let v = vectors.column(i);
                let mut re = 0.0;
                let mut im = 0.0;
                for a in 0..k {
                    re += v[a] * mu[a];
                    im += v[a] * mu[k + a];
                }
                Complex64::new(re, im)
            })
            .collect();
        DualState { w }
    }

    fn value(&self, mu: &[f64], offsets: &[Complex64]) -> f64 {
        let k = offsets.len();
        let huber: f64 = self
            .w
            .iter()
            .map(|w| {
                let a = w.norm();
                if a <= 1.0 {
                    0.5 * a * a
                } else {
                    a - 0.5
                }
            })
            .sum();
        let linear: f64 = (0..k).map(|a| mu[a] * offsets[a].re + mu[k + a] * offsets[a].im).sum();
        huber - linear
    }
}

/// Returns sat(Vᵀμ) at the last iterate, which always lies in the polydisc.
fn dual_newton(
    vectors: &CoefficientVectors,
    offsets: &[Complex64],
    tol: f64,
    max_iterations: usize,
) -> (Vec<Complex64>, usize) {
    let k = vectors.dim();
    let dim = 2 * k;
    let mut mu = vec![0.0; dim];
    let mut state = DualState::new(vectors, &mu);
    let target = 0.01 * tol;
    let mut iterations = 0;
    loop {
        let z: Vec<Complex64> = state.w.iter().map(|w| clip(*w)).collect();
        let g = residual_vec(vectors, &z, offsets);
        if norm_sqr(&g).sqrt() <= target || iterations >= max_iterations {
            return (z, iterations);
        }
        let grad = DVector::from_iterator(dim, g.iter().map(|x| x.re).chain(g.iter().map(|x| x.im)));
        let mut hess = DMatrix::<f64>::zeros(dim, dim);
        for (i, w) in state.w.iter().enumerate() {
            let v = vectors.column(i);
            let a = w.norm();
            let (brr, bii, bri) = if a <= 1.0 {
                (1.0, 1.0, 0.0)
            } else {
                let (ur, ui) = (w.re / a, w.im / a);
                ((1.0 - ur * ur) / a, (1.0 - ui * ui) / a, -ur * ui / a)
            };
            for p in 0..k {
                for q in 0..k {
                    let vv = v[p] * v[q];
                    hess[(p, q)] += brr * vv;
                    hess[(k + p, k + q)] += bii * vv;
                    hess[(p, k + q)] += bri * vv;
                    hess[(k + p, q)] += bri * vv;
                }
            }
        }
        let reg = 1e-12 * hess.trace().max(f64::MIN_POSITIVE);
        for d in 0..dim {
            hess[(d, d)] += reg;
        }
        let step = match hess.cholesky() {
            Some(ch) => -ch.solve(&grad),
            None => -grad.clone(),
        };
        let slope = grad.dot(&step);
        let d0 = state.value(&mu, offsets);
        let mut t = 1.0;
        let accepted = loop {
            let trial: Vec<f64> = mu.iter().zip(step.iter()).map(|(m, s)| m + t * s).collect();
            let trial_state = DualState::new(vectors, &trial);
            if trial_state.value(&trial, offsets) <= d0 + 1e-4 * t * slope {
                break Some((trial, trial_state));
            }
            t *= 0.5;
            if t < 1e-14 {
                break None;
            }
        };
        iterations += 1;
        match accepted {
            Some((m, s)) => {
                mu = m;
                state = s;
            }
            None => {
                let z = state.w.iter().map(|w| clip(*w)).collect();
                return (z, iterations);
            }
        }
        if mu.iter().map(|x| x * x).sum::<f64>() > 1e24 {
            let z = state.w.iter().map(|w| clip(*w)).collect();
            return (z, iterations);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alpha() -> f64 {
        std::f64::consts::SQRT_2 - 1.0
    }

    fn random_disc(rng: &mut ChaCha8Rng, m: usize) -> Vec<Complex64> {
        (0..m)
            .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen::<f64>() * std::f64::consts::TAU))
            .collect()
    }

    #[test]
    fn zero_offsets() {
        let v = CoefficientVectors::new(1, 20, 1.0, 2, alpha()).unwrap();
        let s = solve_polydisc_with(&v, &[Complex64::new(0.0, 0.0); 3], true, &PolydiscOptions::default()).unwrap();
        assert_eq!(s.residual, 0.0);
        assert!(s.z.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn planted_solution_all_starts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = CoefficientVectors::new(1, 50, 1.0, 2, alpha()).unwrap();
        let zstar = random_disc(&mut rng, v.len());
        let a = v.apply(&zstar);
        for ws in [WarmStart::Zero, WarmStart::MinNorm, WarmStart::Dual] {
            let opts = PolydiscOptions {
                tol: 1e-8,
                warm_start: ws,
                ..PolydiscOptions::default()
            };
            let s = solve_polydisc_with(&v, &a, true, &opts).unwrap();
            assert!(s.residual < 1e-8, "{ws:?}: {}", s.residual);
            assert!(s.z.iter().all(|z| z.norm() <= 1.0 + 1e-12));
            for w in s.trace.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-300, "{ws:?} trace increased");
            }
        }
    }

    #[test]
    fn infeasible_is_best_effort() {
        let v = CoefficientVectors::new(1, 4, 1.0, 1, alpha()).unwrap();
        let a = [Complex64::new(50.0, 0.0), Complex64::new(0.0, 0.0)];
        let opts = PolydiscOptions {
            max_iterations: 50,
            ..PolydiscOptions::default()
        };
        let s = solve_polydisc_with(&v, &a, false, &opts).unwrap();
        assert!(s.best_effort && s.residual > 1.0);
        assert!(solve_polydisc_with(&v, &a, true, &opts).is_err());
    }
}
