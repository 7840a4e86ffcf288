//! Twist polynomials P_m = Q⁺_m − Q⁻_m, the family height H(Q,M), the
//! constant K(Q,M,α) and the membership test for 𝒜(Q,M) = 𝒜₁ ∪ 𝒜₂.

use num::rational::BigRational;
use num::{BigInt, FromPrimitive, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::number::{eval_interval, rational_to_f64, AlgebraicParameter, RationalInterval};
use super::poly::IntegerPolynomial;
use crate::error::{Error, Result};

/// Enumeration limits for the exact family computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyCaps {
    /// Largest Q·M for which ĥM is enumerated exhaustively.
    pub max_qm: u32,
    /// Largest admissible exp(2Q²) for the 𝒜₂ range.
    pub max_range: f64,
}

impl Default for FamilyCaps {
    fn default() -> Self {
        FamilyCaps {
            max_qm: 12,
            max_range: 1e4,
        }
    }
}

/// Exponent vector m ∈ [−M, M]^Q, not identically zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistIndex {
    m: Vec<i64>,
    bound: i64,
}

impl TwistIndex {
    pub fn new(m: Vec<i64>, bound: i64) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::Domain("twist index needs Q ≥ 1 entries".into()));
        }
        if m.iter().all(|&x| x == 0) {
            return Err(Error::Domain("twist index must not be identically zero".into()));
        }
        if let Some(x) = m.iter().find(|x| x.abs() > bound) {
            return Err(Error::Domain(format!("entry {x} exceeds the bound M = {bound}")));
        }
        Ok(TwistIndex { m, bound })
    }

    pub fn entries(&self) -> &[i64] {
        &self.m
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistPolynomials {
    pub qplus: IntegerPolynomial,
    pub qminus: IntegerPolynomial,
    pub p: IntegerPolynomial,
}

/// Q⁺ = ∏_{m_n>0}(n+X)^{m_n}, Q⁻ = ∏_{m_n<0}(n+X)^{−m_n}, P = Q⁺ − Q⁻.
pub fn twist_polynomials(index: &TwistIndex) -> TwistPolynomials {
    let mut qplus = IntegerPolynomial::one();
    let mut qminus = IntegerPolynomial::one();
    for (n, &e) in index.m.iter().enumerate() {
        let f = IntegerPolynomial::shifted_x(n as i64);
        if e > 0 {
            qplus = qplus.mul(&f.pow(e as u32));
        } else if e < 0 {
            qminus = qminus.mul(&f.pow((-e) as u32));
        }
    }
    let p = qplus.sub(&qminus);
    TwistPolynomials { qplus, qminus, p }
}

fn all_indices(q: usize, m: i64) -> impl ParallelIterator<Item = TwistIndex> {
    let base = (2 * m + 1) as u64;
    let total = base.pow(q as u32);
    (0..total).into_par_iter().filter_map(move |mut code| {
        let mut v = Vec::with_capacity(q);
        for _ in 0..q {
            v.push((code % base) as i64 - m);
            code /= base;
        }
        TwistIndex::new(v, m).ok()
    })
}

fn ordered_indices(q: usize, m: i64) -> Vec<TwistIndex> {
    let mut v: Vec<TwistIndex> = all_indices(q, m).collect();
    v.sort_by(|a, b| a.m.cmp(&b.m));
    v
}

fn check_qm(q: u32, m: u32, caps: &FamilyCaps) -> Result<()> {
    if q == 0 || m == 0 {
        return Err(Error::Domain("Q and M must be positive".into()));
    }
    if q * m > caps.max_qm {
        return Err(Error::CapExceeded {
            what: "Q·M (use family_height_ln_bound for a bound)".into(),
            value: (q * m) as f64,
            cap: caps.max_qm as f64,
        });
    }
    Ok(())
}

/// H(Q,M) = max over m ∈ [−M,M]^Q \ {0} of H(P_m), by exhaustive enumeration.
pub fn family_height(q: u32, m: u32, caps: &FamilyCaps) -> Result<BigInt> {
    check_qm(q, m, caps)?;
    Ok(all_indices(q as usize, m as i64)
        .map(|idx| twist_polynomials(&idx).p.height())
        .max()
        .unwrap_or_else(BigInt::zero))
}

/// ln of the coefficient-sum bound H(Q,M) ≤ (Q!)^M + 1.
pub fn family_height_ln_bound(q: u32, m: u32) -> f64 {
    let ln_fact: f64 = (1..=q).map(|k| (k as f64).ln()).sum();
    let a = m as f64 * ln_fact;
    a + (-a).exp().ln_1p()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    /// ln K(Q,M,α).
    pub ln_k: f64,
    pub ln_family_height: f64,
    /// Whether H(Q,M) was enumerated exactly (otherwise the bound was used).
    pub height_exact: bool,
}

/// K = [H(Q,M)(MQ+2)]^{d(α)−1}·[H(α)(d(α)+1)^{1/2}]^{MQ+1}, as ln K.
pub fn kappa_constant(q: u32, m: u32, alpha: &AlgebraicParameter, caps: &FamilyCaps) -> Result<KappaReport> {
    let (ln_h, exact) = match family_height(q, m, caps) {
        Ok(h) => (h.to_f64().unwrap_or(f64::INFINITY).ln(), true),
        Err(Error::CapExceeded { .. }) => (family_height_ln_bound(q, m), false),
        Err(e) => return Err(e),
    };
    Ok(KappaReport {
        ln_k: kappa_from_ln_height(ln_h, q, m, alpha),
        ln_family_height: ln_h,
        height_exact: exact,
    })
}

pub(crate) fn kappa_from_ln_height(ln_h: f64, q: u32, m: u32, alpha: &AlgebraicParameter) -> f64 {
    let d = alpha.degree() as f64;
    let mq = (m as f64) * (q as f64);
    (d - 1.0) * (ln_h + (mq + 2.0).ln())
        + (mq + 1.0) * (alpha.height_f64().ln() + 0.5 * (d + 1.0).ln())
}

/// A triple (m, x, y) with Q⁺_m(α)(y+α) = Q⁻_m(α)(x+α).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct A2Witness {
    pub m: Vec<i64>,
    pub x: u64,
    pub y: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub in_a1: bool,
    pub in_a2: bool,
    pub witness: Option<A2Witness>,
    /// Largest x, y examined: ⌈exp(2Q²)⌉.
    pub range_max: u64,
    pub indices_checked: usize,
    pub pairs_decided: usize,
    pub divisibility_checks: usize,
    pub sign_certificates: usize,
    /// Conclusions resting on floating point alone; always zero.
    pub float_only_conclusions: usize,
}

struct Counters {
    divisibility: usize,
    signs: usize,
}

/// Exact sign of F(α) where F(α) = qp·(y+α) − qm·(x+α). Interval arithmetic
/// first; if the enclosure straddles zero, the polynomial form decides.
fn certified_sign(
    alpha: &AlgebraicParameter,
    polys: &TwistPolynomials,
    iv: (&RationalInterval, &RationalInterval, &RationalInterval),
    x: u64,
    y: u64,
    counters: &mut Counters,
) -> i8 {
    let (a, qp, qm) = iv;
    let yi = RationalInterval::point(BigRational::from_u64(y).unwrap()).add(a);
    let xi = RationalInterval::point(BigRational::from_u64(x).unwrap()).add(a);
    let f = qp.mul(&yi).sub(&qm.mul(&xi));
    counters.signs += 1;
    let s = f.sign();
    if s != 0 {
        return s;
    }
    let poly = cross_polynomial(polys, x, y);
    counters.divisibility += 1;
    match alpha.eval_enclosure(&poly, 8) {
        None => 0,
        Some(iv) => iv.sign(),
    }
}

fn cross_polynomial(polys: &TwistPolynomials, x: u64, y: u64) -> IntegerPolynomial {
    polys
        .qplus
        .mul(&IntegerPolynomial::shifted_x(y as i64))
        .sub(&polys.qminus.mul(&IntegerPolynomial::shifted_x(x as i64)))
}

/// Decides α ∈ 𝒜₁ (d(α) > MQ+1) and α ∈ 𝒜₂ exactly.
///
/// For fixed m and y the map x ↦ Q⁺(α)(y+α) − Q⁻(α)(x+α) is strictly
/// decreasing, so at most one real x solves the equation. A floating-point
/// estimate proposes the nearest integer candidate; the candidate is decided
/// by divisibility of the cross-multiplied polynomial by the minimal
/// polynomial, and its integer neighbours by certified signs, which by
/// monotonicity settles every other x in range.
pub fn membership_a(alpha: &AlgebraicParameter, q: u32, m: u32, caps: &FamilyCaps) -> Result<MembershipReport> {
    check_qm(q, m, caps)?;
    let range = (2.0 * (q as f64).powi(2)).exp();
    if range > caps.max_range {
        return Err(Error::CapExceeded {
            what: "exp(2Q²)".into(),
            value: range,
            cap: caps.max_range,
        });
    }
    let range_max = range.ceil() as u64;
    let in_a1 = alpha.degree() > m * q + 1;
    let mut report = MembershipReport {
        in_a1,
        in_a2: false,
        witness: None,
        range_max,
        indices_checked: 0,
        pairs_decided: 0,
        divisibility_checks: 0,
        sign_certificates: 0,
        float_only_conclusions: 0,
    };
    if in_a1 {
        // 𝒜₂ is defined inside the complement of 𝒜₁.
        return Ok(report);
    }
    let a_iv = alpha.enclosure(128);
    let a_f = alpha.value();
    let mut counters = Counters {
        divisibility: 0,
        signs: 0,
    };
    for idx in ordered_indices(q as usize, m as i64) {
        let polys = twist_polynomials(&idx);
        let qp_iv = eval_interval(&polys.qplus, &a_iv);
        let qm_iv = eval_interval(&polys.qminus, &a_iv);
        let qp_f = rational_to_f64(&qp_iv.mid());
        let qm_f = rational_to_f64(&qm_iv.mid());
        report.indices_checked += 1;
        for y in 0..=range_max {
            let x_hat = qp_f * (y as f64 + a_f) / qm_f - a_f;
            let c = x_hat.round().clamp(0.0, range_max as f64) as u64;
            counters.divisibility += 1;
            if alpha.is_root_of(&cross_polynomial(&polys, c, y)) {
                report.witness = Some(A2Witness {
                    m: idx.entries().to_vec(),
                    x: c,
                    y,
                });
                report.pairs_decided += 1;
                report.divisibility_checks = counters.divisibility;
                report.sign_certificates = counters.signs;
                return Ok(report);
            }
            let ivs = (&a_iv, &qp_iv, &qm_iv);
            if c > 0 {
                let s = certified_sign(alpha, &polys, ivs, c - 1, y, &mut counters);
                if s != 1 {
                    return Err(Error::Domain(format!(
                        "monotonicity certificate failed at m = {:?}, x = {}, y = {y}",
                        idx.entries(),
                        c - 1
                    )));
                }
            }
            if c < range_max {
                let s = certified_sign(alpha, &polys, ivs, c + 1, y, &mut counters);
                if s != -1 {
                    return Err(Error::Domain(format!(
                        "monotonicity certificate failed at m = {:?}, x = {}, y = {y}",
                        idx.entries(),
                        c + 1
                    )));
                }
            }
            report.pairs_decided += 1;
        }
    }
    report.in_a2 = true;
    report.divisibility_checks = counters.divisibility;
    report.sign_certificates = counters.signs;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundChainReport {
    pub checked: usize,
    /// Indices with P_m(α) = 0 (excluded from the comparison).
    pub vanishing: usize,
    pub min_value: f64,
    pub inv_k: f64,
    pub violations: usize,
}

/// Checks |P_m(α)| > K⁻¹ for every m with P_m(α) ≠ 0, using certified lower
/// enclosures of |P_m(α)|.
pub fn lower_bound_chain(alpha: &AlgebraicParameter, q: u32, m: u32, caps: &FamilyCaps) -> Result<LowerBoundChainReport> {
    let kappa = kappa_constant(q, m, alpha, caps)?;
    let inv_k = (-kappa.ln_k).exp();
    let results: Vec<Option<(f64, f64)>> = ordered_indices(q as usize, m as i64)
        .par_iter()
        .map(|idx| {
            let p = twist_polynomials(idx).p;
            alpha.eval_enclosure(&p, 40).map(|iv| {
                (rational_to_f64(&iv.abs_lower()), rational_to_f64(&iv.mid()).abs())
            })
        })
        .collect();
    let mut report = LowerBoundChainReport {
        checked: results.len(),
        vanishing: 0,
        min_value: f64::INFINITY,
        inv_k,
        violations: 0,
    };
    for r in results {
        match r {
            None => report.vanishing += 1,
            Some((lower, value)) => {
                report.min_value = report.min_value.min(value);
                if lower.ln() <= -kappa.ln_k {
                    report.violations += 1;
                }
            }
        }
    }
    Ok(report)
}
