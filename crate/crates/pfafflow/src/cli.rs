//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pfafflow_core::bkp::{self, Equation, GSpec, TauSeries};
use pfafflow_core::matrixpp::{bures_tau, bures_tau_pf, time_weights, FiniteSpace, ProcessSpec};
use pfafflow_core::measure::{rho_brute_to_tol, rho_pf, SpecPair};
use pfafflow_core::pfaffian::{pfaffian_debruijn, pfaffian_even, SkewMatrix};
use pfafflow_core::rational::{parse_q, to_f64};
use pfafflow_core::schurq::{schur_p_at, schur_q_at};
use pfafflow_core::{Cap, Error, OddPoly, StrictPartition, Q};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Format, RunConfig};
use crate::render::{poly_terms, q_str, render, Term};
use crate::selftest::{self, Suite};
use crate::{Failure, UsageError};

#[derive(Parser, Debug)]
#[command(
    name = "pfafflow",
    version,
    about = "Exact Schur Q-functions, Pfaffian point processes and BKP identities"
)]
struct Cli {
    /// Output format: json or table.
    #[arg(long, global = true)]
    format: Option<String>,
    /// `key = value` configuration file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (overrides PFAFFLOW_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Schur Q- and P-functions at point specializations.
    Schurq {
        #[command(subcommand)]
        action: SchurqAction,
    },
    /// Correlations of the shifted Schur measure.
    Measure {
        #[command(subcommand)]
        action: MeasureAction,
    },
    /// Pfaffian point processes on finite spaces.
    Matrixpp {
        #[command(subcommand)]
        action: MatrixppAction,
    },
    /// BKP tau functions and bilinear identities.
    Bkp {
        #[command(subcommand)]
        action: BkpAction,
    },
    /// Pfaffian of a skew matrix read from JSON.
    Pfaffian {
        /// File holding `{"n": .., "upper": [[..], ..]}`.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Runs the built-in invariant checks.
    Selftest {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Subcommand, Debug)]
enum SchurqAction {
    Eval {
        /// Parts, e.g. `3,1`.
        #[arg(long)]
        lambda: String,
        /// Point values, e.g. `1/2,1/3`.
        #[arg(long)]
        x: String,
        /// `q` for Q_λ, `p` for P_λ.
        #[arg(long, default_value = "q")]
        kind: String,
    },
}

#[derive(Subcommand, Debug)]
enum MeasureAction {
    Rho {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Part set, e.g. `2,1`.
        #[arg(long = "A")]
        a: String,
        /// `pf`, `brute` or `both`.
        #[arg(long, default_value = "pf")]
        method: String,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long)]
    points: String,
    /// Defaults to unit weights.
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum MatrixppAction {
    Corr {
        #[command(flatten)]
        space: SpaceArgs,
        /// Point set; empty for the normalization.
        #[arg(long = "S", default_value = "")]
        s: String,
        /// `pf`, `direct` or `both`.
        #[arg(long, default_value = "pf")]
        method: String,
    },
    /// Bures partition function, optionally with time-dependent weights.
    Tau {
        #[command(flatten)]
        space: SpaceArgs,
        /// Use `ω(x)e^{Σ t_k x^k}` truncated at the configured degree.
        #[arg(long)]
        times: bool,
    },
}

#[derive(Subcommand, Debug)]
enum BkpAction {
    Check {
        #[arg(long)]
        equation: String,
        /// Group-like element, e.g. `c=1/2,r=2,s=1;c=1,r=3,s=0`.
        #[arg(long, default_value = "1")]
        g: String,
        /// Check `Q_λ(t/2)` instead of a group-like tau (residue form only).
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        neg_degree: Option<u32>,
        /// Spectral parameter for the partner tau.
        #[arg(long, default_value = "1/2")]
        z: String,
    },
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(UsageError(e.to_string()))
}

fn core_err(e: Error) -> Failure {
    match e {
        Error::IdentityMismatch(m) => Failure::Identity(m),
        Error::Tolerance { .. } => Failure::Identity(e.to_string()),
        other => usage(other),
    }
}

fn list_q(s: &str) -> Result<Vec<Q>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| parse_q(x).map_err(usage))
        .collect()
}

fn list_u32(s: &str) -> Result<Vec<u32>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<u32>()
                .map_err(|_| usage(format!("bad part {x:?}")))
        })
        .collect()
}

fn partition(s: &str) -> Result<StrictPartition, Failure> {
    StrictPartition::new(list_u32(s)?).map_err(usage)
}

#[derive(Serialize)]
struct ValueReport {
    lambda: Vec<u32>,
    value: String,
}

#[derive(Serialize)]
struct RhoReport {
    rho: f64,
    tail_bound: f64,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    discrepancy: Option<f64>,
}

#[derive(Serialize)]
struct CorrReport {
    value: String,
    method: &'static str,
}

#[derive(Serialize)]
struct TauReport {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<Term>>,
}

#[derive(Serialize)]
struct BkpReport {
    residual_zero: bool,
    max_degree_checked: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_neg_degree_checked: Option<i64>,
    nonzero_terms: Vec<Term>,
}

#[derive(Serialize)]
struct PfaffianReport {
    n: usize,
    pfaffian: String,
}

/// `{"n": 4, "upper": [[a01, a02, a03], [a12, a13], [a23]]}`; entries are
/// `"p/q"` strings or integers.
#[derive(Deserialize, Serialize, Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub upper: Vec<Vec<Value>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<SkewMatrix<Q>, UsageError> {
        let n = self.n;
        if self.upper.len() != n.saturating_sub(1) && !(n == 0 && self.upper.is_empty()) {
            return Err(UsageError(format!(
                "expected {} upper rows",
                n.saturating_sub(1)
            )));
        }
        let mut m = SkewMatrix::zeros(n);
        for (i, row) in self.upper.iter().enumerate() {
            if row.len() != n - 1 - i {
                return Err(UsageError(format!(
                    "upper row {i} needs {} entries",
                    n - 1 - i
                )));
            }
            for (k, v) in row.iter().enumerate() {
                let text = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(x) if x.is_i64() => x.to_string(),
                    other => {
                        return Err(UsageError(format!(
                            "entry {other} is not an exact rational"
                        )))
                    }
                };
                let q = parse_q(&text).map_err(|e| UsageError(e.to_string()))?;
                m.set(i, i + 1 + k, q);
            }
        }
        Ok(m)
    }

    pub fn from_matrix(m: &SkewMatrix<Q>) -> Self {
        let n = m.order();
        Self {
            n,
            upper: (0..n.saturating_sub(1))
                .map(|i| {
                    (i + 1..n)
                        .map(|j| Value::String(q_str(&m.get(i, j))))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Output plus whether every identity held.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn emit<T: Serialize>(r: &T, cfg: &RunConfig, ok: bool) -> Output {
    Output {
        text: render(r, cfg.format),
        ok,
    }
}

fn space_of(a: &SpaceArgs) -> Result<ProcessSpec, Failure> {
    let points = list_q(&a.points)?;
    let space = match &a.weights {
        Some(w) => FiniteSpace::new(points, list_q(w)?),
        None => FiniteSpace::uniform(points),
    }
    .map_err(usage)?;
    if a.n == 0 {
        return Err(usage("n must be positive"));
    }
    Ok(ProcessSpec::bures(space, a.n))
}

fn bkp_check(
    cfg: &RunConfig,
    equation: &str,
    g: &str,
    lambda: Option<&str>,
    z: &str,
) -> Result<Output, Failure> {
    let eq: Equation = equation.parse().map_err(usage)?;
    let g: GSpec = g.parse().map_err(usage)?;
    let z = parse_q(z).map_err(usage)?;
    let (d, dn) = (cfg.degree, cfg.neg_degree);
    let residual: OddPoly = match (eq, lambda) {
        (Equation::BkpResidue, Some(l)) => {
            let tau = TauSeries::schur_q(&partition(l)?).map_err(core_err)?;
            bkp::bkp_residue_check(&tau, d).map_err(core_err)?
        }
        (_, Some(_)) => return Err(usage("--lambda applies to bkp-residue only")),
        (eq, None) => bkp::check_equation(eq, &g, &z, d, dn).map_err(core_err)?,
    };
    let cap = residual.cap();
    let two_sided = matches!(eq, Equation::Negflow1 | Equation::Mixed1);
    let report = BkpReport {
        residual_zero: residual.is_empty(),
        max_degree_checked: cap.pos,
        max_neg_degree_checked: two_sided.then_some(cap.neg),
        nonzero_terms: poly_terms(&residual),
    };
    let ok = report.residual_zero;
    Ok(emit(&report, cfg, ok))
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Output, Failure> {
    match command {
        Command::Schurq {
            action: SchurqAction::Eval { lambda, x, kind },
        } => {
            let lam = partition(&lambda)?;
            let x = list_q(&x)?;
            let value = match kind.as_str() {
                "q" => schur_q_at(&lam, &x),
                "p" => schur_p_at(&lam, &x),
                other => return Err(usage(format!("unknown kind {other:?} (q or p)"))),
            }
            .map_err(core_err)?;
            let r = ValueReport {
                lambda: lam.parts().to_vec(),
                value: q_str(&value),
            };
            Ok(emit(&r, cfg, true))
        }
        Command::Measure {
            action:
                MeasureAction::Rho {
                    x,
                    y,
                    a,
                    method,
                    tol,
                },
        } => {
            let spec = SpecPair::new(list_q(&x)?, list_q(&y)?).map_err(usage)?;
            let a = list_u32(&a)?;
            let tol = tol.unwrap_or(cfg.tol);
            if !(tol > 0.0 && tol < 1.0) {
                return Err(usage("tolerance must lie in (0, 1)"));
            }
            let r = match method.as_str() {
                "pf" => {
                    let p = rho_pf(&a, &spec, tol).map_err(core_err)?;
                    RhoReport {
                        rho: p.value,
                        tail_bound: p.bound,
                        method: "pf",
                        discrepancy: None,
                    }
                }
                "brute" => {
                    let b = rho_brute_to_tol(&a, &spec, tol).map_err(core_err)?;
                    RhoReport {
                        rho: to_f64(&b.value),
                        tail_bound: to_f64(&b.tail_bound),
                        method: "brute",
                        discrepancy: None,
                    }
                }
                "both" => {
                    let p = rho_pf(&a, &spec, tol).map_err(core_err)?;
                    let b = rho_brute_to_tol(&a, &spec, tol).map_err(core_err)?;
                    let gap = (p.value - to_f64(&b.value)).abs();
                    let r = RhoReport {
                        rho: p.value,
                        tail_bound: p.bound.max(to_f64(&b.tail_bound)),
                        method: "both",
                        discrepancy: Some(gap),
                    };
                    return Ok(emit(&r, cfg, gap <= 2.0 * tol));
                }
                other => return Err(usage(format!("unknown method {other:?}"))),
            };
            Ok(emit(&r, cfg, true))
        }
        Command::Matrixpp {
            action: MatrixppAction::Corr { space, s, method },
        } => {
            let spec = space_of(&space)?;
            let s = list_q(&s)?;
            let (value, method, ok) = match method.as_str() {
                "pf" => (spec.corr_pf(&s).map_err(core_err)?, "pf", true),
                "direct" => (spec.corr_direct(&s).map_err(core_err)?, "direct", true),
                "both" => {
                    let a = spec.corr_pf(&s).map_err(core_err)?;
                    let b = spec.corr_direct(&s).map_err(core_err)?;
                    let ok = a == b;
                    (a, "both", ok)
                }
                other => return Err(usage(format!("unknown method {other:?}"))),
            };
            Ok(emit(
                &CorrReport {
                    value: q_str(&value),
                    method,
                },
                cfg,
                ok,
            ))
        }
        Command::Matrixpp {
            action: MatrixppAction::Tau { space, times },
        } => {
            let spec = space_of(&space)?;
            let sp = &spec.space;
            let r = if times {
                let w =
                    time_weights(sp, cfg.n_max, Cap::new(cfg.degree as i64)).map_err(core_err)?;
                let tau = bures_tau(sp.points(), &w, spec.n).map_err(core_err)?;
                TauReport {
                    n: spec.n,
                    value: None,
                    terms: Some(poly_terms(&tau)),
                }
            } else {
                let tau = bures_tau(sp.points(), sp.weights(), spec.n).map_err(core_err)?;
                debug_assert_eq!(
                    bures_tau_pf(sp.points(), sp.weights(), spec.n).ok(),
                    Some(tau.clone())
                );
                TauReport {
                    n: spec.n,
                    value: Some(q_str(&tau)),
                    terms: None,
                }
            };
            Ok(emit(&r, cfg, true))
        }
        Command::Bkp {
            action:
                BkpAction::Check {
                    equation,
                    g,
                    lambda,
                    degree,
                    neg_degree,
                    z,
                },
        } => {
            let mut cfg = cfg.clone();
            if let Some(d) = degree {
                cfg.degree = d;
            }
            if let Some(d) = neg_degree {
                cfg.neg_degree = d;
            }
            cfg.validate().map_err(Failure::Usage)?;
            bkp_check(&cfg, &equation, &g, lambda.as_deref(), &z)
        }
        Command::Pfaffian { matrix } => {
            let text = fs::read_to_string(&matrix)
                .map_err(|e| usage(format!("cannot read {}: {e}", matrix.display())))?;
            let file: MatrixFile = serde_json::from_str(&text).map_err(usage)?;
            let m = file.to_matrix().map_err(Failure::Usage)?;
            let pf = if m.order() % 2 == 0 {
                pfaffian_even(&m).map_err(core_err)?
            } else {
                pfaffian_debruijn(&m)
            };
            Ok(emit(
                &PfaffianReport {
                    n: m.order(),
                    pfaffian: q_str(&pf),
                },
                cfg,
                true,
            ))
        }
        Command::Selftest { suite } => {
            let suite: Suite = suite.parse().map_err(Failure::Usage)?;
            let r = selftest::run(suite, cfg);
            let ok = r.ok();
            Ok(emit(&r, cfg, ok))
        }
    }
}

fn configure(cli: &Cli) -> Result<RunConfig, UsageError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    cfg.apply_env()?;
    if let Some(f) = &cli.format {
        cfg.format = f.parse::<Format>()?;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Exit status: `0` success, `1` usage error, `2` failed identity check.
pub fn run<I, T>(argv: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn std::io::Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let cfg = match configure(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.0);
            return 1;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(cli.command, &cfg)) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text);
            if o.ok {
                0
            } else {
                2
            }
        }
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {}", e.0);
            1
        }
        Err(Failure::Identity(m)) => {
            let _ = writeln!(err, "identity check failed: {m}");
            2
        }
    }
}
