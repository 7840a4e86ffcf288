use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use hurwitz_dense::afe::{degree_admissible, fit_decay_exponent, truncated_zeta, StripConstants};
use hurwitz_dense::algebraic::{liouville_bound, membership_a, AlgebraicParameter, FamilyCaps, IntegerPolynomial};
use hurwitz_dense::effective::{capital_e, density_lower_bound, plan_budget, ConstantsRegistry};
use hurwitz_dense::fit::{plan_fit, FitCaps, TargetSpec};
use hurwitz_dense::kernel::{kernel_mass, KernelConfig};
use hurwitz_dense::search::{approx_function, choose_delta, search_shift, ApproxJob, SearchWindow};
use hurwitz_dense::zeta::scan::ShiftEvaluator;
use hurwitz_dense::zeta::{hurwitz_zeta, hurwitz_zeta_f64, ComplexPoint, Precision};
use hurwitz_dense::{Error, Result};

#[derive(Parser)]
#[command(name = "hurwitz", about = "Effective denseness toolkit for the Hurwitz zeta-function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct Common {
    /// Minimal polynomial coefficients of α, constant term first.
    #[arg(long, global = true, allow_hyphen_values = true)]
    alpha_minpoly: Option<String>,
    /// Isolating interval "lo,hi" for α.
    #[arg(long, global = true)]
    alpha_interval: Option<String>,
    #[arg(long, global = true, default_value_t = 1.0)]
    sigma: f64,
    /// Highest derivative order.
    #[arg(long = "N", global = true)]
    n: Option<usize>,
    #[arg(long, global = true, default_value_t = 0.1)]
    epsilon: f64,
    /// Targets "re,im;re,im;..." for k = 0, 1, ...
    #[arg(long, global = true, allow_hyphen_values = true)]
    targets: Option<String>,
    #[arg(long = "T", global = true, default_value_t = 1e3)]
    t: f64,
    #[arg(long, global = true, default_value_t = 200_000)]
    grid: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 15)]
    precision_digits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Out::Json)]
    out: Out,
    /// JSON file with the constants registry and caps.
    #[arg(long, global = true)]
    registry: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionKind {
    /// f(s) = ζ(s + iτ*; α).
    Planted,
    /// f ≡ first target value.
    Constant,
    Exp,
}

#[derive(Subcommand)]
enum Command {
    /// ζ^{(k)}(σ+it; α) with its error radius.
    Eval {
        #[arg(long, default_value_t = 10.0)]
        t: f64,
        #[arg(long, default_value_t = 0)]
        k: u32,
    },
    /// Truncation error of the t^μ-sum and its fitted decay exponent.
    AfeCheck {
        #[arg(long, default_value_t = 1.0 / 3.0)]
        mu: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1e2, 1e3, 1e4])]
        heights: Vec<f64>,
    },
    /// Fits the targets by a twisted Dirichlet polynomial.
    Fit {
        #[arg(long, default_value_t = 64)]
        max_r: usize,
        #[arg(long, default_value_t = 1 << 20)]
        max_q: usize,
    },
    /// Searches [T, 2T] for a shift meeting the targets.
    Search,
    /// Approximates a function on a disk by a shift of ζ(s; α).
    ApproxFn {
        #[arg(long, value_enum, default_value_t = FunctionKind::Planted)]
        function: FunctionKind,
        #[arg(long, default_value_t = 150.345_678)]
        tau_star: f64,
        /// Imaginary part of the disk centre.
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 0.5)]
        radius: f64,
        #[arg(long, default_value_t = 0.5)]
        delta0: f64,
    },
    /// Effective constants and, with targets, the full parameter budget.
    Constants {
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
    /// Liouville bound and 𝒜(Q,M) membership for α.
    Algebraic {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Kernel mass of Λ_Q along the log-curve over [T, 2T].
    KernelMass {
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Centre θ₁, comma separated; zeros by default.
        #[arg(long, value_delimiter = ',')]
        theta1: Vec<f64>,
    },
    /// Runs a quick desk-scale check of every module.
    VerifyAll,
}

/// Outcome of a subcommand: records to print and whether the result is satisfied.
struct Output {
    records: Vec<Value>,
    satisfied: bool,
}

impl Output {
    fn one(v: Value) -> Self {
        Output {
            records: vec![v],
            satisfied: true,
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("records serialize")
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
        .collect()
}

fn parse_targets(s: &str) -> Result<Vec<Complex64>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| match parse_list(p)?.as_slice() {
            [re, im] => Ok(Complex64::new(*re, *im)),
            _ => Err(Error::Parse(format!("target {p:?} is not re,im"))),
        })
        .collect()
}

impl Common {
    fn alpha(&self) -> Result<AlgebraicParameter> {
        match (&self.alpha_minpoly, &self.alpha_interval) {
            (None, None) => Ok(AlgebraicParameter::sqrt2_minus_1()),
            (Some(p), Some(i)) => {
                let coeffs = p
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{c:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                match parse_list(i)?.as_slice() {
                    [lo, hi] => AlgebraicParameter::from_coeffs(&coeffs, (*lo, *hi)),
                    _ => Err(Error::Parse("--alpha-interval needs lo,hi".into())),
                }
            }
            _ => Err(Error::Parse("--alpha-minpoly and --alpha-interval go together".into())),
        }
    }

    fn registry(&self) -> Result<ConstantsRegistry> {
        match &self.registry {
            Some(p) => ConstantsRegistry::from_path(p),
            None => Ok(ConstantsRegistry::default()),
        }
    }

    /// Explicit targets, or N+1 seeded draws (a₀ with positive real part).
    fn target_values(&self) -> Result<Vec<Complex64>> {
        if let Some(s) = &self.targets {
            let a = parse_targets(s)?;
            if let Some(n) = self.n {
                if n + 1 != a.len() {
                    return Err(Error::Parse(format!("--N {n} but {} targets given", a.len())));
                }
            }
            return Ok(a);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok((0..=self.n.unwrap_or(0))
            .map(|k| {
                let re = if k == 0 { rng.gen_range(0.5..2.0) } else { rng.gen_range(-1.0..1.0) };
                Complex64::new(re, rng.gen_range(-1.0..1.0))
            })
            .collect())
    }

    fn target_spec(&self, alpha: f64) -> Result<TargetSpec> {
        TargetSpec::new(self.target_values()?, self.sigma, self.epsilon, alpha.min(1.0))
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let c = &cli.common;
    let alpha = c.alpha()?;
    let a = alpha.value();
    match &cli.command {
        Command::Eval { t, k } => {
            let s = ComplexPoint::new(c.sigma, *t);
            let prec = Precision::new(c.precision_digits, 10f64.powi(3 - c.precision_digits as i32))?;
            let r = match hurwitz_zeta(s, &alpha, *k, &prec) {
                Err(Error::PrecisionUnachievable { achieved, .. }) => {
                    log::warn!("target {:e} not reachable, settling for {:e}", prec.target_abs_error(), 2.0 * achieved);
                    hurwitz_zeta(s, &alpha, *k, &Precision::new(c.precision_digits, 2.0 * achieved)?)?
                }
                r => r?,
            };
            Ok(Output::one(json!({
                "sigma": c.sigma, "t": t, "k": k, "alpha": a,
                "re": r.value.re, "im": r.value.im,
                "error_radius": r.error_radius, "terms_used": r.terms_used,
                "decimal_re": r.decimal.as_ref().map(|d| d.0.clone()),
                "decimal_im": r.decimal.as_ref().map(|d| d.1.clone()),
            })))
        }
        Command::AfeCheck { mu, heights } => {
            let fit = fit_decay_exponent(c.sigma, a, *mu, 0, heights)?;
            let mut records: Vec<Value> = heights
                .iter()
                .map(|&t| -> Result<Value> {
                    let r = truncated_zeta(ComplexPoint::new(c.sigma, t), a, *mu)?;
                    Ok(json!({"t": t, "cutoff": r.cutoff, "abs_error": r.abs_error}))
                })
                .collect::<Result<_>>()?;
            records.push(json!({
                "nu_hat": fit.nu_hat,
                "median_errors": fit.median_errors,
                "degree_3_admissible": degree_admissible(3, c.sigma),
                "strip": to_value(&StripConstants::default()),
            }));
            Ok(Output {
                records,
                satisfied: fit.nu_hat > 0.0,
            })
        }
        Command::Fit { max_r, max_q } => {
            let targets = c.target_spec(a)?;
            let plan = plan_fit(&targets, a, &FitCaps { max_r: *max_r, max_q: *max_q })?;
            let satisfied = plan.outcome.within(c.epsilon);
            Ok(Output {
                records: vec![to_value(&plan.outcome)],
                satisfied,
            })
        }
        Command::Search => {
            let targets = c.target_spec(a)?;
            let r = search_shift(&targets, a, &SearchWindow::new(c.t, c.grid)?)?;
            let mut v = to_value(&r);
            v["targets"] = to_value(&targets.a);
            Ok(Output {
                satisfied: r.satisfied,
                records: vec![v],
            })
        }
        Command::ApproxFn {
            function,
            tau_star,
            t0,
            radius,
            delta0,
        } => {
            let f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync> = match function {
                FunctionKind::Planted => {
                    let ts = *tau_star;
                    Arc::new(move |s: Complex64| {
                        let p = ComplexPoint::new(s.re, s.im + ts);
                        match hurwitz_zeta_f64(p, a, 0, 1e-10) {
                            Err(Error::PrecisionUnachievable { achieved, .. }) => hurwitz_zeta_f64(p, a, 0, 2.0 * achieved),
                            r => r,
                        }
                        .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
                    })
                }
                FunctionKind::Constant => {
                    let v = c.target_values()?[0];
                    Arc::new(move |_| v)
                }
                FunctionKind::Exp => Arc::new(|s: Complex64| s.exp()),
            };
            let job = ApproxJob::new(ComplexPoint::new(c.sigma, *t0), *radius, f, c.epsilon, *delta0, c.n)?;
            let r = approx_function(&job, a, &SearchWindow::new(c.t, c.grid)?)?;
            Ok(Output {
                satisfied: r.bound_3eps_ok,
                records: vec![to_value(&r)],
            })
        }
        Command::Constants { degree } => {
            let reg = c.registry()?;
            let mut records = vec![json!({
                "E(1,200,1,1)": capital_e(1, 200, 1.0, 1)?,
                "density_lower_bound(2)": density_lower_bound(2)?.to_string(),
                "registry": to_value(&reg),
            })];
            if c.targets.is_some() {
                let targets = c.target_spec(a)?;
                records.push(to_value(&plan_budget(&targets, *degree, &alpha, &reg)?));
            }
            Ok(Output {
                records,
                satisfied: true,
            })
        }
        Command::Algebraic { q, m } => {
            let p = IntegerPolynomial::from_i64(&[1, 1]);
            let liouville = liouville_bound(&p, &alpha)?;
            let membership = membership_a(&alpha, *q, *m, &FamilyCaps::default())?;
            Ok(Output::one(json!({
                "alpha": a,
                "degree": alpha.degree(),
                "height": alpha.height().to_string(),
                "liouville_1_plus_x": to_value(&liouville),
                "membership": to_value(&membership),
            })))
        }
        Command::KernelMass { q, theta1 } => {
            let cfg = KernelConfig::new(*q)?;
            let theta1 = if theta1.is_empty() { vec![0.0; *q] } else { theta1.clone() };
            let mass = kernel_mass(&cfg, a, &theta1, c.t)?;
            let bound = 1.0 / (*q as f64).powi(2);
            Ok(Output {
                records: vec![json!({
                    "q": q, "T": c.t, "alpha": a, "theta1": theta1,
                    "mass": mass, "deviation": (mass - 1.0).abs(), "q_inverse_square": bound,
                })],
                satisfied: (mass - 1.0).abs() < bound,
            })
        }
        Command::VerifyAll => verify_all(),
    }
}

fn check(name: &str, pass: bool, detail: Value) -> Value {
    json!({"check": name, "pass": pass, "detail": detail})
}

fn verify_all() -> Result<Output> {
    let alpha = AlgebraicParameter::sqrt2_minus_1();
    let a = alpha.value();
    let mut records = Vec::new();

    let z2 = hurwitz_zeta_f64(ComplexPoint::new(2.0, 0.0), 1.0, 0, 1e-12)?;
    let want = std::f64::consts::PI.powi(2) / 6.0;
    records.push(check("zeta(2;1) = pi^2/6", (z2.re - want).abs() < 1e-11, json!(z2.re)));

    let fit = fit_decay_exponent(1.0, a, 1.0 / 3.0, 0, &[1e2, 1e3, 1e4])?;
    records.push(check("truncation decay exponent > 0", fit.nu_hat > 0.0, json!(fit.nu_hat)));

    let targets = TargetSpec::new(
        vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        1.0,
        0.1,
        a,
    )?;
    let plan = plan_fit(&targets, a, &FitCaps::default())?;
    records.push(check(
        "fit (1+i, 0, 0.5) within 0.1",
        plan.outcome.within(0.1),
        json!(plan.outcome.achieved),
    ));

    let membership = membership_a(&AlgebraicParameter::quartic_root(), 2, 1, &FamilyCaps::default())?;
    records.push(check(
        "X^4+X-1 root in A1(2,1)",
        membership.in_a1 && membership.float_only_conclusions == 0,
        to_value(&membership),
    ));

    let mass = kernel_mass(&KernelConfig::new(2)?, a, &[0.0, 0.0], 1e4)?;
    records.push(check("kernel mass Q=2, T=1e4", (mass - 1.0).abs() < 0.25, json!(mass)));

    let e = capital_e(1, 200, 1.0, 1)?;
    records.push(check(
        "E(1,200,1,1) = ln(100)/32",
        (e - 100f64.ln() / 32.0).abs() < 1e-12,
        json!(e),
    ));

    let tau_star = 73.21;
    let planted = ShiftEvaluator::new(1.0, a, 0, 100.0)?.eval(tau_star)?;
    let r = search_shift(
        &TargetSpec::new(planted, 1.0, 1e-3, a)?,
        a,
        &SearchWindow::new(50.0, 50_000)?,
    )?;
    records.push(check("planted shift recovered", r.satisfied, json!(r.tau_best)));

    let d = choose_delta(1.0, 5, 1.0, 0.1)?;
    records.push(check("delta equation root", (d - 0.465).abs() < 0.01, json!(d)));

    let satisfied = records.iter().all(|r| r["pass"] == json!(true));
    Ok(Output { records, satisfied })
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
        Value::Null => {
            out.insert(prefix.to_string(), String::new());
        }
        other => {
            out.insert(prefix.to_string(), other.to_string());
        }
    }
}

fn emit(records: &[Value], out: Out) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    match out {
        Out::Json => {
            for r in records {
                writeln!(w, "{r}")?;
            }
        }
        Out::Csv => {
            let rows: Vec<BTreeMap<String, String>> = records
                .iter()
                .map(|r| {
                    let mut m = BTreeMap::new();
                    flatten("", r, &mut m);
                    m
                })
                .collect();
            let mut header: Vec<String> = Vec::new();
            for row in &rows {
                for k in row.keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let mut cw = csv::Writer::from_writer(w);
            cw.write_record(&header)?;
            for row in &rows {
                cw.write_record(header.iter().map(|k| row.get(k).map(String::as_str).unwrap_or("")))?;
            }
            cw.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if let Err(e) = emit(&output.records, cli.common.out) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if output.satisfied {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
