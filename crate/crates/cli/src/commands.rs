//! Subcommands and exit-code policy: 0 success, 2 no certificate found,
//! 3 bad input, 1 internal failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use efcert::algebra::{parse_rational, Integer, Rational};
use efcert::auxiliary::{construct, default_eps1, AuxiliaryError};
use efcert::efunction::{DiffSystem, EFunctionError};
use efcert::evalcert::{decimal, EvalError};
use efcert::forms::{adaptive_bound, ladder_length, BoundConfig, FormsError};
use efcert::logmeasure::{exponent_fit, fit_points, log_lower_bound, measure_scan, LogConfig, LogMeasureError};
use efcert::zeroestimate::{exponent_data, n0_bound, N0Bound, ZeroEstimateError};
use num_traits::{Signed, Zero};

use crate::report::{
    to_json, AttemptReport, BoundReport, Command, ConstructReport, LogBoundReport, N0Report, Parameters,
    ParamsReport, ScanReport,
};
use crate::system_file::{parse_system, InputError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_NOT_CERTIFIED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "efcert", version, about = "Certified lower bounds for linear forms in values of E-functions")]
pub struct Cli {
    /// Worker threads for parallel work (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Structural parameters and the n0 bound of a system.
    Params { system: PathBuf },
    /// Auxiliary polynomials of degree at most N.
    Construct {
        system: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        eps1: Option<String>,
    },
    /// Certified lower bound on |a1 f1(xi) + ... + am fm(xi)|.
    Bound {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 1)]
        n_start: usize,
        #[arg(long, allow_hyphen_values = true)]
        eps1: Option<String>,
        #[arg(long, default_value_t = 256)]
        precision: u64,
    },
    /// Certified lower bound on |ln f1(xi) - a/b|.
    Logbound {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long, allow_hyphen_values = true)]
        approx: String,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 256)]
        precision: u64,
        #[arg(long, allow_hyphen_values = true)]
        eps1: Option<String>,
    },
    /// Log-measure bounds for every reduced a/b with b <= BMAX near ln f1(xi).
    Scan {
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[arg(long)]
        bmax: u64,
        #[arg(long)]
        window: String,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 256)]
        precision: u64,
        #[arg(long, allow_hyphen_values = true)]
        eps1: Option<String>,
    },
    /// The n0 bound 2(q+1)m^2(E + (q+1)m + 1).
    N0 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, allow_hyphen_values = true)]
        exponent_bound: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) and runs the command,
/// capturing its output.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Execution {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Execution {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = Output::default();
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(|| run(&cli.command, &mut out)),
            Err(e) => Err(anyhow::Error::new(e).context("cannot start worker threads")),
        },
        None => run(&cli.command, &mut out),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            out.stderr.push_str(&format!("error: {e:#}\n"));
            classify(&e)
        }
    };
    Execution {
        code,
        stdout: out.stdout,
        stderr: out.stderr,
    }
}

#[derive(Default)]
struct Output {
    stdout: String,
    stderr: String,
}

impl Output {
    fn warn(&mut self, w: &str) {
        self.stderr.push_str(&format!("warning: {w}\n"));
    }
}

/// Exit code for an error, from the first recognised cause.
pub fn classify(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<InputError>()
            || cause.is::<EFunctionError>()
            || cause.is::<ZeroEstimateError>()
            || cause.is::<efcert::algebra::ParseRationalError>()
        {
            return EXIT_INPUT;
        }
        if let Some(e) = cause.downcast_ref::<FormsError>() {
            return forms_code(e);
        }
        if let Some(e) = cause.downcast_ref::<LogMeasureError>() {
            return match e {
                LogMeasureError::Forms(f) => forms_code(f),
                LogMeasureError::Eval(_) => EXIT_INTERNAL,
                LogMeasureError::System(_)
                | LogMeasureError::NonPositiveValue { .. }
                | LogMeasureError::SingularEvaluationPoint(_)
                | LogMeasureError::NonPositiveDenominator
                | LogMeasureError::EmptyScan
                | LogMeasureError::DegenerateFit { .. }
                | LogMeasureError::NoDefaultNMax(_) => EXIT_INPUT,
            };
        }
        if let Some(e) = cause.downcast_ref::<AuxiliaryError>() {
            return match e {
                AuxiliaryError::CutoffBelowOrder { .. } => EXIT_INTERNAL,
                _ => EXIT_INPUT,
            };
        }
        if cause.is::<EvalError>() {
            return EXIT_INTERNAL;
        }
    }
    EXIT_INTERNAL
}

fn forms_code(e: &FormsError) -> i32 {
    match e {
        FormsError::ExhaustedN { .. } => EXIT_NOT_CERTIFIED,
        FormsError::ZeroTarget | FormsError::TargetLength { .. } | FormsError::SingularEvaluationPoint(_) => {
            EXIT_INPUT
        }
        FormsError::Auxiliary(AuxiliaryError::EpsilonOutOfRange { .. } | AuxiliaryError::MissingGrowth) => EXIT_INPUT,
        FormsError::System(_) => EXIT_INPUT,
        _ => EXIT_INTERNAL,
    }
}

fn rational(name: &str, s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| InputError::Field {
        field: format!("--{name}"),
        message: e.to_string(),
    }
    .into())
}

fn load(path: &PathBuf, out: &mut Output) -> Result<DiffSystem> {
    let parsed = parse_system(path)?;
    for w in &parsed.warnings {
        out.warn(w);
    }
    Ok(parsed.system)
}

fn command(name: &'static str, args: &[(&'static str, String)]) -> Command {
    Command {
        name,
        args: args.iter().cloned().collect::<BTreeMap<_, _>>(),
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "default".to_string(), ToString::to_string)
}

fn system_n0(sys: &DiffSystem, q: usize) -> (Result<efcert::zeroestimate::ExponentData, String>, Option<N0Bound>) {
    match exponent_data(sys) {
        Ok(d) => {
            let n0 = n0_bound(sys.m(), q, d.ceil);
            (Ok(d), Some(n0))
        }
        Err(e) => (Err(e.to_string()), None),
    }
}

fn eps1_for(sys: &DiffSystem, eps1: &Option<String>) -> Result<Rational> {
    match eps1 {
        Some(s) => rational("eps1", s),
        None => Ok(default_eps1(sys.m())),
    }
}

fn run(cmd: &Cmd, out: &mut Output) -> Result<i32> {
    match cmd {
        Cmd::Params { system } => {
            let sys = load(system, out)?;
            let params = sys.params()?;
            let (exps, n0) = system_n0(&sys, params.q);
            let report = ParamsReport {
                command: command("params", &[("system", system.display().to_string())]),
                labels: sys.labels().to_vec(),
                parameters: Parameters::new(&sys, &params, exps.as_ref().map_err(Clone::clone), n0),
                default_eps1: efcert::algebra::format_rational(&default_eps1(sys.m())),
            };
            out.stdout.push_str(&to_json(&report));
            Ok(EXIT_OK)
        }
        Cmd::N0 { m, q, exponent_bound } => {
            let e = rational("exponent-bound", exponent_bound)?;
            if e.is_negative() {
                return Err(InputError::Field {
                    field: "--exponent-bound".into(),
                    message: "must be nonnegative".into(),
                }
                .into());
            }
            let ceil: u64 = e.ceil().to_integer().try_into().context("exponent bound too large")?;
            let b = n0_bound(*m, *q, ceil);
            let report = N0Report {
                command: command(
                    "n0",
                    &[("m", m.to_string()), ("q", q.to_string()), ("exponent-bound", exponent_bound.clone())],
                ),
                n0_bound: b.value.to_string(),
            };
            out.stdout.push_str(&to_json(&report));
            Ok(EXIT_OK)
        }
        Cmd::Construct { system, n, eps1 } => {
            let sys = load(system, out)?;
            let e1 = eps1_for(&sys, eps1)?;
            let params = sys.params()?;
            let basis = construct(&sys, *n, &e1)?;
            let len = ladder_length(sys.m(), params.q, params.p, *n, &e1);
            let report = ConstructReport::new(
                command(
                    "construct",
                    &[("system", system.display().to_string()), ("n", n.to_string()), ("eps1", opt(eps1))],
                ),
                &basis,
                len,
            );
            out.stdout.push_str(&to_json(&report));
            Ok(EXIT_OK)
        }
        Cmd::Bound {
            system,
            xi,
            target,
            n_max,
            n_start,
            eps1,
            precision,
        } => {
            let sys = load(system, out)?;
            let x = rational("xi", xi)?;
            let tgt = target
                .split(',')
                .map(|s| {
                    s.trim().parse::<Integer>().map_err(|_| InputError::Field {
                        field: "--target".into(),
                        message: format!("{s:?} is not an integer"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let config = BoundConfig {
                eps1: eps1.as_ref().map(|s| rational("eps1", s)).transpose()?,
                precision: *precision,
            };
            let params = sys.params()?;
            let (exps, n0) = system_n0(&sys, params.q);
            let n_max = match (n_max, n0) {
                (Some(n), _) => *n,
                (None, Some(b)) => usize::try_from(b.value.saturating_mul(4)).unwrap_or(usize::MAX),
                (None, None) => {
                    return Err(InputError::Field {
                        field: "--n-max".into(),
                        message: format!(
                            "required because the n0 bound is unavailable: {}",
                            exps.as_ref().err().cloned().unwrap_or_default()
                        ),
                    }
                    .into())
                }
            };
            let cmd = command(
                "bound",
                &[
                    ("system", system.display().to_string()),
                    ("xi", xi.clone()),
                    ("target", target.clone()),
                    ("n-max", n_max.to_string()),
                    ("n-start", n_start.to_string()),
                    ("eps1", opt(eps1)),
                    ("precision", precision.to_string()),
                ],
            );
            let height = tgt.iter().map(|a| a.abs()).max().unwrap_or_else(Integer::zero);
            let parameters = Parameters::new(&sys, &params, exps.as_ref().map_err(Clone::clone), n0);
            let mut report = BoundReport {
                command: cmd,
                parameters,
                target: tgt.iter().map(ToString::to_string).collect(),
                height: height.to_string(),
                n_start: *n_start,
                n_max,
                status: "Certified",
                attempts: Vec::new(),
                certificate: None,
            };
            let code = match adaptive_bound(&sys, &x, &tgt, *n_start, n_max, &config) {
                Ok(a) => {
                    report.attempts = a.attempts.iter().map(AttemptReport::from).collect();
                    report.certificate = Some((&a.certificate).into());
                    EXIT_OK
                }
                Err(FormsError::ExhaustedN { attempts, .. }) => {
                    report.status = "ExhaustedN";
                    report.attempts = attempts.iter().map(AttemptReport::from).collect();
                    EXIT_NOT_CERTIFIED
                }
                Err(e) => return Err(e.into()),
            };
            out.stdout.push_str(&to_json(&report));
            Ok(code)
        }
        Cmd::Logbound {
            system,
            xi,
            approx,
            n_max,
            precision,
            eps1,
        } => {
            let sys = load(system, out)?;
            let x = rational("xi", xi)?;
            let ab = rational("approx", approx)?;
            let config = log_config(eps1, *n_max, *precision)?;
            let res = log_lower_bound(&sys, &x, &ab, &config)?;
            let report = LogBoundReport {
                command: command(
                    "logbound",
                    &[
                        ("system", system.display().to_string()),
                        ("xi", xi.clone()),
                        ("approx", approx.clone()),
                        ("n-max", opt(n_max)),
                        ("precision", precision.to_string()),
                        ("eps1", opt(eps1)),
                    ],
                ),
                xi: efcert::algebra::format_rational(&x),
                status: "Certified",
                result: (&res).into(),
            };
            out.stdout.push_str(&to_json(&report));
            Ok(EXIT_OK)
        }
        Cmd::Scan {
            system,
            xi,
            bmax,
            window,
            csv,
            n_max,
            precision,
            eps1,
        } => {
            let sys = load(system, out)?;
            let x = rational("xi", xi)?;
            let w = rational("window", window)?;
            if w.is_negative() {
                return Err(InputError::Field {
                    field: "--window".into(),
                    message: "must be nonnegative".into(),
                }
                .into());
            }
            let config = log_config(eps1, *n_max, *precision)?;
            let table = measure_scan(&sys, &x, *bmax, &w, &config)?;
            let fit = exponent_fit(&fit_points(&table)).map_err(|e| e.to_string());
            let report = ScanReport::new(
                command(
                    "scan",
                    &[
                        ("system", system.display().to_string()),
                        ("xi", xi.clone()),
                        ("bmax", bmax.to_string()),
                        ("window", window.clone()),
                        ("csv", opt(&csv.as_ref().map(|p| p.display().to_string()))),
                        ("n-max", opt(n_max)),
                        ("precision", precision.to_string()),
                        ("eps1", opt(eps1)),
                    ],
                ),
                &table,
                fit,
            );
            if let Some(path) = csv {
                write_csv(path, &table).with_context(|| format!("writing {}", path.display()))?;
            }
            out.stdout.push_str(&to_json(&report));
            let failed = table.rows.iter().any(|r| r.outcome.is_err());
            Ok(if failed { EXIT_NOT_CERTIFIED } else { EXIT_OK })
        }
    }
}

fn log_config(eps1: &Option<String>, n_max: Option<usize>, precision: u64) -> Result<LogConfig> {
    Ok(LogConfig {
        bound: BoundConfig {
            eps1: eps1.as_ref().map(|s| rational("eps1", s)).transpose()?,
            precision,
        },
        n_start: 1,
        n_max,
    })
}

/// Scan rows as CSV: `b, a, bound, oracle_distance, path, n_used`.
pub fn scan_csv(table: &efcert::logmeasure::ScanTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["b", "a", "bound", "oracle_distance", "path", "n_used"])?;
    for r in &table.rows {
        let (bound, oracle, path, n_used) = match &r.outcome {
            Ok(res) => (
                efcert::algebra::format_rational(&res.bound),
                decimal(res.oracle.lo(), crate::report::DECIMAL_DIGITS),
                res.path.as_str().to_string(),
                res.n_used().map(|n| n.to_string()).unwrap_or_default(),
            ),
            Err(_) => (String::new(), String::new(), "failed".to_string(), String::new()),
        };
        w.write_record([r.b.to_string(), r.a.to_string(), bound, oracle, path, n_used])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn write_csv(path: &PathBuf, table: &efcert::logmeasure::ScanTable) -> Result<()> {
    std::fs::write(path, scan_csv(table)?)?;
    Ok(())
}
