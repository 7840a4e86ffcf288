use serde::Serialize;

use super::constants::capital_e;
use super::registry::ConstantsRegistry;
use super::tower::Tower;
use crate::afe::{degree_admissible, fit_decay_exponent};
use crate::algebraic::{family_height_ln_bound, AlgebraicParameter};
use crate::error::{Error, Result};
use crate::fit::TargetSpec;
use crate::zeta::ParameterValue;

/// Integers below this are materialized exactly; larger ones stay in log-space.
const EXACT_LIMIT: f64 = 4.0e15;

/// Truncation exponent used when ν is fitted rather than supplied.
const FIT_MU: f64 = 1.0 / 3.0;
const FIT_HEIGHTS: [f64; 3] = [1e2, 1e3, 1e4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NuSource {
    Registry,
    Fitted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditCheck {
    pub name: String,
    pub lhs: Tower,
    pub rhs: Tower,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetAudit {
    pub checks: Vec<AuditCheck>,
    pub all_hold: bool,
}

/// Parameters instantiating every inequality of the main denseness theorem.
/// Magnitudes that overflow f64 are carried as [`Tower`]s; all `log*`
/// fields are natural logs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveBudget {
    pub sigma: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "A_floor")]
    pub a_floor: f64,
    pub epsilon: f64,
    pub d: u32,
    pub alpha_degree: u32,
    #[serde(rename = "R")]
    pub r: u64,
    #[serde(rename = "Q0")]
    pub q0: Tower,
    #[serde(rename = "Q")]
    pub q: Tower,
    #[serde(rename = "logM")]
    pub log_m: Tower,
    #[serde(rename = "E_value")]
    pub e_value: f64,
    #[serde(rename = "logK")]
    pub log_k: Tower,
    #[serde(rename = "logT")]
    pub log_t: Tower,
    /// 4d/(4(d − d(α)) − 3).
    pub exponent: f64,
    pub nu: f64,
    pub nu_source: NuSource,
    pub scale: &'static str,
    pub conditional_on_registry: bool,
    pub audit: BudgetAudit,
}

fn ln_factorial_small(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// ln E(R,Q,σ) from ln Q, valid far beyond the f64 range of Q.
pub(crate) fn ln_capital_e(r: f64, ln_q: f64, sigma: f64, n: usize) -> f64 {
    let span = ln_q - (r + 1.0).ln();
    if span <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let n3 = (n as f64).powi(3);
    if sigma == 1.0 {
        return span.ln() - (32.0 * n3).ln();
    }
    let one_minus = 1.0 - sigma;
    let y = one_minus / (4.0 * n3) * span;
    let ln_expm1 = if y > 30.0 {
        y + (-(-y).exp()).ln_1p()
    } else {
        y.exp_m1().ln()
    };
    one_minus * r.ln() - (3.0 + sigma) * 2f64.ln() - one_minus.ln() + ln_expm1
}

/// ln of the right-hand side E·(log(Q/(R+1))/(2N log Q))^N·k!(N−k)!(log Q)^k.
fn ln_systine_rhs(r: f64, ln_q: f64, sigma: f64, n: usize, k: usize) -> f64 {
    let nf = n as f64;
    let span = ln_q - (r + 1.0).ln();
    ln_capital_e(r, ln_q, sigma, n) + nf * (span.ln() - (2.0 * nf).ln() - ln_q.ln())
        + ln_factorial_small(k)
        + ln_factorial_small(n - k)
        + k as f64 * ln_q.ln()
}

fn systine_lhs(targets: &TargetSpec, c2: f64) -> Vec<f64> {
    targets
        .a
        .iter()
        .map(|a| c2 * (a.norm() + targets.a_floor.powf(-0.5)))
        .collect()
}

fn systine_holds(lhs: &[f64], r: f64, ln_q: f64, sigma: f64, n: usize) -> bool {
    lhs.iter()
        .enumerate()
        .all(|(k, l)| l.ln() <= ln_systine_rhs(r, ln_q, sigma, n, k))
}

/// ln Q! for a possibly huge Q.
fn ln_factorial(q: Tower) -> Tower {
    match q.to_f64() {
        Some(x) if x <= 20.0 => Tower::new(ln_factorial_small(x as usize)),
        Some(x) => {
            let v = x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln() + 1.0 / (12.0 * x);
            if v.is_finite() {
                Tower::new(v)
            } else {
                Tower::from_ln(x.ln() + (x.ln() - 1.0).ln())
            }
        }
        // Q·ln Q bounds ln Q! from above, which keeps K conservative.
        None => q.mul(&q.ln()),
    }
}

fn snap_ceil(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

fn materialize(ln_x: f64) -> Tower {
    let x = ln_x.exp();
    if x < EXACT_LIMIT {
        Tower::new(snap_ceil(x))
    } else {
        Tower::from_ln(ln_x)
    }
}

fn to_integer_tower(x: Tower) -> Tower {
    match x.to_f64() {
        Some(v) if v < EXACT_LIMIT => Tower::new(snap_ceil(v)),
        _ => x,
    }
}

/// The log-lower bound for T:
/// ln c₅ + max{e·(ln K + (M+2)·exp(Q²)), 2ν·ln(1/ε)}.
pub fn log_t_lower_bound(log_k: Tower, m: Tower, q: Tower, exponent: f64, nu: f64, epsilon: f64, c5: f64) -> Tower {
    let growth = m.add(&Tower::new(2.0)).mul(&q.mul(&q).exp());
    let big = log_k.add(&growth).scale(exponent);
    let small = Tower::new(2.0 * nu * (1.0 / epsilon).ln());
    shift_ln(big.max(small), c5.ln())
}

/// x + c for a possibly huge x and a small signed c.
fn shift_ln(x: Tower, c: f64) -> Tower {
    x.add_signed(&Tower::new(c))
}

fn ln_kappa(q: Tower, m: Tower, alpha: &AlgebraicParameter) -> Tower {
    let d = alpha.degree() as f64;
    let ln_h = match (q.to_f64(), m.to_f64()) {
        (Some(qv), Some(mv)) if qv <= u32::MAX as f64 && mv <= u32::MAX as f64 => {
            Tower::new(family_height_ln_bound(qv as u32, mv as u32))
        }
        _ => m.mul(&ln_factorial(q)),
    };
    let mq = m.mul(&q);
    let first = Tower::new(d - 1.0).mul(&ln_h.add(&mq.add(&Tower::new(2.0)).ln()));
    let per = alpha.height_f64().ln() + 0.5 * (d + 1.0).ln();
    let second = mq.add(&Tower::new(1.0)).mul(&Tower::new(per));
    first.add(&second)
}

fn geq(a: Tower, b: Tower) -> bool {
    a >= b || (a.height() == b.height() && a.top() >= b.top() - 1e-12 * b.top().abs())
}

fn check(name: impl Into<String>, lhs: Tower, rhs: Tower) -> AuditCheck {
    AuditCheck {
        name: name.into(),
        lhs,
        rhs,
        holds: geq(lhs, rhs),
    }
}

/// Smallest R, Q₀, Q, M and the matching bound on log T for the targets,
/// degree bound d and parameter α, with constants from `registry`.
pub fn plan_budget(
    targets: &TargetSpec,
    d: u32,
    alpha: &AlgebraicParameter,
    registry: &ConstantsRegistry,
) -> Result<EffectiveBudget> {
    registry.validate()?;
    let sigma = targets.sigma;
    let epsilon = targets.epsilon;
    if sigma <= 0.51 {
        return Err(Error::Domain(format!("sigma = {sigma} at or below the planner cap 0.51")));
    }
    if !degree_admissible(d, sigma) {
        return Err(Error::InadmissibleDegree { d, sigma });
    }
    let alpha_value = alpha.value_f64();
    targets.check_alpha(alpha_value)?;
    if alpha.degree() > d - 1 {
        return Err(Error::Domain(format!(
            "degree of alpha ({}) exceeds d − 1 = {}",
            alpha.degree(),
            d - 1
        )));
    }
    let n = targets.order();
    let n_eff = n.max(1);

    let r_real = registry.c0 * epsilon.powf(4.0 / (1.0 - 2.0 * sigma));
    let r = snap_ceil(r_real).max(1.0);
    if r > registry.caps.max_r {
        return Err(Error::CapExceeded {
            what: "R".into(),
            value: r,
            cap: registry.caps.max_r,
        });
    }

    let lhs = systine_lhs(targets, registry.c2);
    let ok = |ln_q: f64| systine_holds(&lhs, r, ln_q, sigma, n_eff);
    let q_start = snap_ceil(registry.c1 * r).max(r + 2.0);
    let mut lo = q_start.ln();
    let ln_q0 = if ok(lo) {
        lo
    } else {
        let mut hi = lo.max(1.0) * 2.0;
        while !ok(hi) {
            lo = hi;
            hi *= 2.0;
            if hi > registry.caps.max_ln_q0 {
                return Err(Error::CapExceeded {
                    what: "ln Q0".into(),
                    value: hi,
                    cap: registry.caps.max_ln_q0,
                });
            }
        }
        if hi.exp() < EXACT_LIMIT {
            let mut qlo = lo.exp().floor().max(q_start);
            let mut qhi = hi.exp().ceil();
            while !ok(qhi.ln()) {
                qhi += 1.0;
            }
            while qhi - qlo > 1.0 {
                let mid = ((qlo + qhi) / 2.0).floor();
                if ok(mid.ln()) {
                    qhi = mid;
                } else {
                    qlo = mid;
                }
            }
            if ok(qlo.ln()) {
                qlo.ln()
            } else {
                qhi.ln()
            }
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if ok(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
    };
    let q0 = materialize(ln_q0);
    let e_value = ln_capital_e(r, ln_q0, sigma, n_eff).exp();

    let q = to_integer_tower(q0.add(&Tower::new(epsilon.powi(-8))).scale(registry.c3));
    let log_m = shift_ln(q.mul(&q).scale(2.0), registry.c4.ln());
    let m = to_integer_tower(log_m.exp());
    let log_k = ln_kappa(q, m, alpha);
    let exponent = 4.0 * d as f64 / (4.0 * (d - alpha.degree()) as f64 - 3.0);

    let (nu, nu_source) = match registry.nu {
        Some(nu) => (nu, NuSource::Registry),
        None => {
            let fit = fit_decay_exponent(sigma, alpha_value, FIT_MU, 0, &FIT_HEIGHTS).map_err(|e| {
                Error::Domain(format!("cannot fit nu at sigma = {sigma} ({e}); set nu in the registry"))
            })?;
            (fit.nu_hat, NuSource::Fitted)
        }
    };
    let log_t = log_t_lower_bound(log_k, m, q, exponent, nu, epsilon, registry.c5);

    let mut budget = EffectiveBudget {
        sigma,
        n,
        a_floor: targets.a_floor,
        epsilon,
        d,
        alpha_degree: alpha.degree(),
        r: r as u64,
        q0,
        q,
        log_m,
        e_value,
        log_k,
        log_t,
        exponent,
        nu,
        nu_source,
        scale: "ln",
        conditional_on_registry: true,
        audit: BudgetAudit {
            checks: vec![],
            all_hold: false,
        },
    };
    budget.audit = audit_budget(&budget, targets, alpha, registry);
    Ok(budget)
}

/// Re-evaluates every inequality the budget claims, from its fields alone.
pub fn audit_budget(
    b: &EffectiveBudget,
    targets: &TargetSpec,
    alpha: &AlgebraicParameter,
    registry: &ConstantsRegistry,
) -> BudgetAudit {
    let mut checks = Vec::new();
    let r = b.r as f64;
    let r_bound = registry.c0 * b.epsilon.powf(4.0 / (1.0 - 2.0 * b.sigma));
    checks.push(check("R >= c0*eps^(4/(1-2sigma))", Tower::new(r), Tower::new(r_bound)));
    if b.r > 1 {
        checks.push(AuditCheck {
            name: "R - 1 < c0*eps^(4/(1-2sigma))".into(),
            lhs: Tower::new(r - 1.0),
            rhs: Tower::new(r_bound),
            holds: r - 1.0 < r_bound * (1.0 - 1e-12),
        });
    }
    let ln_q0 = b.q0.ln();
    checks.push(check("Q0 >= c1*R", b.q0, Tower::new(registry.c1 * r)));
    checks.push(check("Q0 >= R+2", b.q0, Tower::new(r + 2.0)));

    let n_eff = b.n.max(1);
    let lhs = systine_lhs(targets, registry.c2);
    for (k, l) in lhs.iter().enumerate() {
        // Direct evaluation when Q₀ is an ordinary integer, log-space otherwise.
        let rhs = match b.q0.to_f64() {
            Some(q0) if q0 < EXACT_LIMIT => {
                let e = capital_e(b.r, q0 as u64, b.sigma, n_eff).unwrap_or(0.0);
                let lq = q0.ln();
                let nf = n_eff as f64;
                let fact = |j: usize| (1..=j).map(|i| i as f64).product::<f64>();
                Tower::new(
                    e * ((q0 / (r + 1.0)).ln() / (2.0 * nf * lq)).powi(n_eff as i32)
                        * fact(k)
                        * fact(n_eff - k)
                        * lq.powi(k as i32),
                )
            }
            _ => Tower::from_ln(ln_systine_rhs(
                r,
                ln_q0.to_f64().unwrap_or(f64::INFINITY),
                b.sigma,
                n_eff,
                k,
            )),
        };
        checks.push(check(format!("systine k={k}"), rhs, Tower::new(*l)));
    }

    let q_bound = b.q0.add(&Tower::new(b.epsilon.powi(-8))).scale(registry.c3);
    checks.push(check("Q >= c3*(Q0 + eps^-8)", b.q, q_bound));
    let m_bound = shift_ln(b.q.mul(&b.q).scale(2.0), registry.c4.ln());
    checks.push(check("ln M >= ln c4 + 2Q^2", b.log_m, m_bound));
    checks.push(AuditCheck {
        name: "degree condition d + 1/(2d) <= (40/267)(3(1-sigma))^(-1/2)".into(),
        lhs: Tower::new(b.d as f64),
        rhs: Tower::new(b.d as f64),
        holds: degree_admissible(b.d, b.sigma),
    });
    checks.push(check(
        "d - 1 >= d(alpha)",
        Tower::new((b.d - 1) as f64),
        Tower::new(alpha.degree() as f64),
    ));
    checks.push(check("alpha >= A", Tower::new(alpha.value_f64()), Tower::new(b.a_floor)));
    let m = to_integer_tower(b.log_m.exp());
    let log_k = ln_kappa(b.q, m, alpha);
    let t_bound = log_t_lower_bound(log_k, m, b.q, b.exponent, b.nu, b.epsilon, registry.c5);
    checks.push(check("ln T >= BBB bound", b.log_t, t_bound));
    let all_hold = checks.iter().all(|c| c.holds);
    BudgetAudit { checks, all_hold }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::complex::Complex64;

    fn registry() -> ConstantsRegistry {
        ConstantsRegistry {
            nu: Some(0.1),
            ..ConstantsRegistry::default()
        }
    }

    fn targets(eps: f64) -> TargetSpec {
        TargetSpec::new(
            vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
            1.0,
            eps,
            0.4,
        )
        .unwrap()
    }

    #[test]
    fn ln_e_matches_direct() {
        for (r, q, s, n) in [(1u64, 200u64, 1.0, 1usize), (16, 17 * 65536, 0.75, 1), (3, 10_000, 0.9, 2)] {
            let direct = capital_e(r, q, s, n).unwrap();
            let via_ln = ln_capital_e(r as f64, (q as f64).ln(), s, n).exp();
            assert!((direct / via_ln - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_one_r() {
        let alpha = AlgebraicParameter::sqrt2_minus_1();
        let b = plan_budget(&targets(0.1), 3, &alpha, &registry()).unwrap();
        assert_eq!(b.r, 10_000);
        assert!(b.audit.all_hold, "{:#?}", b.audit);
        assert!(b.log_t.height() >= 2);
    }

    #[test]
    fn refuses_low_sigma_and_bad_degree() {
        let alpha = AlgebraicParameter::sqrt2_minus_1();
        let mut t = targets(0.1);
        t.sigma = 0.51;
        assert!(plan_budget(&t, 3, &alpha, &registry()).is_err());
        t.sigma = 0.9;
        assert!(matches!(
            plan_budget(&t, 3, &alpha, &registry()),
            Err(Error::InadmissibleDegree { .. })
        ));
    }

    #[test]
    fn log_t_monotone_in_m() {
        let q = Tower::new(5.0);
        let k = Tower::new(10.0);
        let mut last = None;
        for m in [1.0, 10.0, 1e3, 1e6] {
            let t = log_t_lower_bound(k, Tower::new(m), q, 1.5, 0.1, 0.1, 1.0);
            if let Some(prev) = last {
                assert!(t > prev);
            }
            last = Some(t);
        }
    }
}
