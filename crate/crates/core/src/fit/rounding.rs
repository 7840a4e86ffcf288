use num::complex::Complex64;
use serde::Serialize;

use super::{reduce_turn, unit, CoefficientVectors, PhaseVector, PolydiscSolution};
use crate::error::{Error, Result};

const GRID: usize = 64;

/// Phases θ_n for n = R..Q−1 with ‖Σ(z_n − e(θ_n))v_n‖² ≤ 4Σ‖v_n‖².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundedPhases {
    pub theta: PhaseVector,
    pub certificate_lhs: f64,
    pub certificate_rhs: f64,
}

/// Greedy rounding: vectors are visited in decreasing ‖v_n‖ (ties by index)
/// and each phase minimizes the running error norm. The minimizer is taken
/// from a 64-point grid and then refined to the exact stationary phase
/// arg⟨c, v_n⟩, which is available in closed form because v_n is real.
pub fn round_phases(solution: &PolydiscSolution, vectors: &CoefficientVectors) -> Result<RoundedPhases> {
    let z = &solution.z;
    if z.len() != vectors.len() {
        return Err(Error::Domain(format!(
            "solution has {} coefficients, expected {}",
            z.len(),
            vectors.len()
        )));
    }
    if z.iter().any(|x| x.norm() > 1.0 + 1e-12) {
        return Err(Error::Domain("coefficients must lie in the closed unit disc".into()));
    }
    let dim = vectors.dim();
    let mut order: Vec<usize> = (0..z.len()).collect();
    order.sort_by(|&a, &b| vectors.norm_sqr(b).total_cmp(&vectors.norm_sqr(a)));

    let grid: Vec<Complex64> = (0..GRID).map(|j| unit(j as f64 / GRID as f64)).collect();
    let mut running = vec![Complex64::new(0.0, 0.0); dim];
    let mut phases = vec![0.0; z.len()];
    for &i in &order {
        let v = vectors.column(i);
        let c: Vec<Complex64> = running.iter().zip(v).map(|(r, vk)| r + z[i] * vk).collect();
        let p: Complex64 = c.iter().zip(v).map(|(ck, vk)| ck * vk).sum();
        // ‖c − e·v‖² = ‖c‖² + ‖v‖² − 2 Re(ē p): maximize Re(ē p).
        let score = |e: Complex64| (e.conj() * p).re;
        let mut best = 0;
        for j in 1..GRID {
            if score(grid[j]) > score(grid[best]) {
                best = j;
            }
        }
        let mut phase = best as f64 / GRID as f64;
        if p.norm() > 0.0 {
            let refined = reduce_turn(p.arg() / std::f64::consts::TAU);
            if score(unit(refined)) > score(grid[best]) {
                phase = refined;
            }
        }
        let e = unit(phase);
        for (r, (ck, vk)) in running.iter_mut().zip(c.iter().zip(v)) {
            *r = ck - e * vk;
        }
        phases[i] = phase;
    }

    let mut diff = vec![Complex64::new(0.0, 0.0); dim];
    for (i, (zi, th)) in z.iter().zip(&phases).enumerate() {
        let delta = zi - unit(*th);
        for (d, vk) in diff.iter_mut().zip(vectors.column(i)) {
            *d += delta * vk;
        }
    }
    let certificate_lhs: f64 = diff.iter().map(|d| d.norm_sqr()).sum();
    let certificate_rhs = 4.0 * vectors.total_norm_sqr();
    if certificate_lhs > certificate_rhs {
        return Err(Error::CertificateViolation {
            lhs: certificate_lhs,
            rhs: certificate_rhs,
        });
    }
    Ok(RoundedPhases {
        theta: PhaseVector::new(phases)?,
        certificate_lhs,
        certificate_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solution(z: Vec<Complex64>) -> PolydiscSolution {
        PolydiscSolution {
            z,
            residual: 0.0,
            iterations: 0,
            dual_iterations: 0,
            trace: vec![],
            best_effort: false,
        }
    }

    #[test]
    fn unimodular_input_is_kept() {
        let v = CoefficientVectors::new(1, 30, 1.0, 2, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let th: Vec<f64> = (0..v.len()).map(|_| rng.gen()).collect();
        let z = th.iter().map(|&t| unit(t)).collect();
        let out = round_phases(&solution(z), &v).unwrap();
        assert!(out.certificate_lhs < 1e-25);
        for (a, b) in out.theta.as_slice().iter().zip(&th) {
            let d = (a - b).abs();
            assert!(d.min(1.0 - d) < 1e-12);
        }
    }

    #[test]
    fn single_zero_vector() {
        let v = CoefficientVectors::new(3, 4, 1.0, 2, 0.5).unwrap();
        let out = round_phases(&solution(vec![Complex64::new(0.0, 0.0)]), &v).unwrap();
        assert!((out.certificate_lhs - v.norm_sqr(0)).abs() < 1e-15);
        assert!(out.certificate_lhs <= out.certificate_rhs);
    }

    #[test]
    fn random_disc_instance() {
        let alpha = std::f64::consts::SQRT_2 - 1.0;
        let v = CoefficientVectors::new(1, 100, 1.0, 2, alpha).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z = (0..v.len())
            .map(|_| Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen::<f64>() * std::f64::consts::TAU))
            .collect();
        let out = round_phases(&solution(z), &v).unwrap();
        assert!(out.certificate_lhs <= out.certificate_rhs);
    }
}
