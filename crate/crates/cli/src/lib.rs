//! Command dispatch for the `vqf` binary.
//!
//! [`run`] parses an argument vector, validates it, calls into `vq-core` and
//! returns the exit code together with what should go to stdout and stderr.
//! Keeping it free of process-level side effects lets the integration tests
//! drive it directly.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use vq_core::fueter::{expand_qn, mu_alpha, MultiIndex, PointH};
use vq_core::ops::{apply_vq, gleason_sum, mu_field, FdScheme, GLEASON_DEFAULT_NODES};
use vq_core::quat::min_eigenvalue;
use vq_core::rkhs::{format_rational, gram_matrix, kernel_eval, structural_defect, CoefficientFamily};
use vq_core::schur::{
    blaschke_realization, blaschke_restrict, blaschke_series, blaschke_tail_bound, rational_restrict,
    rational_series, rational_tail_bound, BlaschkePoint, Realization,
};
use vq_core::verify::{run_suite, Suite};

/// Exit code for successful runs.
pub const EXIT_OK: i32 = 0;
/// Exit code when `verify` finds a failing check.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for rejected input.
pub const EXIT_INVALID: i32 = 2;

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn invalid(msg: impl Into<String>) -> Self {
        let body = json!({ "error": msg.into() });
        Outcome { code: EXIT_INVALID, stdout: format!("{body}\n"), stderr: String::new() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "vqf", version, about = "Fueter variables, V_q operators, kernels and realizations")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Point `x0,x1,x2,x3`; repeat for verbs taking several points.
    #[arg(long, global = true, allow_hyphen_values = true)]
    point: Vec<String>,
    /// Multi-index `a1,a2,a3`.
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Truncation degree.
    #[arg(long, global = true, default_value_t = 12)]
    trunc: usize,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance; adds a `within_tol` field where meaningful.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// JSON input file.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Evaluate mu^alpha at a point.
    EvalMu,
    /// Print the series of q^n in the Fueter variables.
    ExpandQn {
        #[arg(long)]
        n: usize,
    },
    /// Finite-difference V_q mu^alpha at a point.
    ApplyVq,
    /// Gleason decomposition defect for mu^alpha between two points.
    Gleason {
        #[arg(long, default_value_t = GLEASON_DEFAULT_NODES)]
        nodes: usize,
    },
    /// Arveson kernel K(x, y) for two points.
    Kernel,
    /// Arveson Gram matrix for points given by `--point` or `--in`.
    Gram,
    /// Exact structural defect at alpha.
    Structural,
    /// Blaschke factor at a point of Omega_1.
    Blaschke {
        /// Slice point `x1,x2,x3` at which to evaluate.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Build a Blaschke realization or evaluate one read with `--in`.
    Realize {
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Run the identity suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Run one command line. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(e.to_string()),
                _ => Outcome::invalid(first_line(&e.render().to_string())),
            };
        }
    };
    let out_path = cli.common.out.clone();
    let mut outcome = match dispatch(&cli) {
        Ok(outcome) => outcome,
        Err(msg) => return Outcome::invalid(msg),
    };
    if let Some(path) = out_path {
        if let Err(e) = std::fs::write(&path, &outcome.stdout) {
            return Outcome::invalid(format!("cannot write {}: {e}", path.display()));
        }
        outcome.stdout.clear();
    }
    outcome
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("").trim_start_matches("error: ")
}

type CmdResult = std::result::Result<Outcome, String>;

fn emit(v: Value) -> CmdResult {
    Ok(Outcome::ok(format!("{v}\n")))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("core types serialize")
}

fn dispatch(cli: &Cli) -> CmdResult {
    let c = &cli.common;
    match &cli.verb {
        Verb::EvalMu => {
            let x = one_point(c)?;
            let alpha = alpha(c)?;
            emit(to_value(&mu_alpha(x, alpha).map_err(err)?))
        }
        Verb::ExpandQn { n } => emit(to_value(&expand_qn(*n).map_err(err)?)),
        Verb::ApplyVq => {
            let x = one_point(c)?;
            let alpha = alpha(c)?;
            let scheme = FdScheme::from_env().map_err(err)?;
            let v = apply_vq(&mu_field(alpha), x, &scheme).map_err(err)?;
            let mut body = json!({ "value": v, "norm": v.norm(), "h": scheme.h(), "order": scheme.order() });
            with_tol(&mut body, c.tol, v.norm());
            emit(body)
        }
        Verb::Gleason { nodes } => {
            let [a, b] = two_points(c)?;
            let alpha = alpha(c)?;
            let f = mu_field(alpha);
            let scheme = FdScheme::from_env().map_err(err)?;
            let sum = gleason_sum(&f, a, b, *nodes, &scheme).map_err(err)?;
            let diff = mu_alpha(b, alpha).map_err(err)? - mu_alpha(a, alpha).map_err(err)?;
            let defect = diff.dist(sum);
            let mut body = json!({ "difference": diff, "sum": sum, "defect": defect, "nodes": nodes });
            with_tol(&mut body, c.tol, defect);
            emit(body)
        }
        Verb::Kernel => {
            let [x, y] = two_points(c)?;
            let k = kernel_eval(&CoefficientFamily::Arveson, x, y, c.trunc).map_err(err)?;
            emit(json!({ "value": k.value, "tail_bound": k.tail_bound, "trunc": c.trunc }))
        }
        Verb::Gram => {
            let points = gram_points(c)?;
            let g = gram_matrix(&CoefficientFamily::Arveson, &points, c.trunc).map_err(err)?;
            let min_eig = min_eigenvalue(&g, 1e-10).map_err(err)?;
            emit(json!({ "gram": g, "min_eigenvalue": min_eig, "trunc": c.trunc }))
        }
        Verb::Structural => {
            let alpha = alpha(c)?;
            let d = structural_defect(&CoefficientFamily::Arveson, alpha).map_err(err)?;
            emit(json!({ "defect": format_rational(&d) }))
        }
        Verb::Blaschke { at } => {
            let a = BlaschkePoint::new(one_point(c)?).map_err(err)?;
            let mut body = json!({ "a": a.point(), "s": a.s(), "mu_a": a.mu() });
            if let Some(at) = at {
                let xv = slice_point(at)?;
                let exact = blaschke_restrict(&a, xv).map_err(err)?;
                let series = blaschke_series(&a, c.trunc.max(1)).map_err(err)?;
                let approx = series.eval(PointH::new(0.0, xv[0], xv[1], xv[2])).map_err(err)?;
                body["value"] = to_value(&exact);
                body["series_value"] = to_value(&approx);
                body["tail_bound"] = to_value(&blaschke_tail_bound(&a, xv, c.trunc.max(1)));
            }
            emit(body)
        }
        Verb::Realize { at } => match (&c.input, at) {
            (None, None) => {
                let a = BlaschkePoint::new(one_point(c)?).map_err(err)?;
                emit(to_value(&blaschke_realization(&a)))
            }
            (Some(path), Some(at)) => {
                let r: Realization = read_json(path)?;
                let xv = slice_point(at)?;
                let exact = rational_restrict(&r, xv).map_err(err)?;
                let series = rational_series(&r, c.trunc).map_err(err)?;
                let approx = series.eval(PointH::new(0.0, xv[0], xv[1], xv[2])).map_err(err)?;
                emit(json!({
                    "value": exact,
                    "series_value": approx,
                    "tail_bound": rational_tail_bound(&r, xv, c.trunc),
                    "trunc": c.trunc,
                }))
            }
            (Some(_), None) => Err("realize --in requires --at x1,x2,x3".into()),
            (None, Some(_)) => Err("realize --at requires --in R.json".into()),
        },
        Verb::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(err)?;
            let report = run_suite(suite, c.seed);
            let stderr: String = report.checks.iter().map(|ch| format!("{ch}\n")).collect();
            let code = if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED };
            Ok(Outcome { code, stdout: format!("{}\n", to_value(&report)), stderr })
        }
    }
}

fn err(e: vq_core::Error) -> String {
    e.to_string()
}

fn with_tol(body: &mut Value, tol: Option<f64>, value: f64) {
    if let Some(t) = tol {
        body["tol"] = json!(t);
        body["within_tol"] = json!(value <= t);
    }
}

fn parse_floats<const N: usize>(s: &str, what: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("{what} needs {N} comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(&parts) {
        let v: f64 = p.parse().map_err(|_| format!("{what}: {p:?} is not a number"))?;
        if !v.is_finite() {
            return Err(format!("{what}: {p:?} is not finite"));
        }
        *slot = v;
    }
    Ok(out)
}

fn parse_point(s: &str) -> std::result::Result<PointH, String> {
    Ok(PointH::from(parse_floats::<4>(s, "--point")?))
}

fn slice_point(s: &str) -> std::result::Result<[f64; 3], String> {
    parse_floats::<3>(s, "--at")
}

fn one_point(c: &Common) -> std::result::Result<PointH, String> {
    match c.point.as_slice() {
        [p] => parse_point(p),
        [] => Err("missing --point".into()),
        _ => Err("expected a single --point".into()),
    }
}

fn two_points(c: &Common) -> std::result::Result<[PointH; 2], String> {
    match c.point.as_slice() {
        [p, q] => Ok([parse_point(p)?, parse_point(q)?]),
        _ => Err(format!("expected exactly two --point flags, got {}", c.point.len())),
    }
}

fn alpha(c: &Common) -> std::result::Result<MultiIndex, String> {
    let s = c.alpha.as_deref().ok_or("missing --alpha")?;
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("--alpha needs 3 comma-separated integers, got {s:?}"));
    }
    let mut a = [0u32; 3];
    for (slot, p) in a.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| format!("--alpha: {p:?} is not a non-negative integer"))?;
    }
    Ok(MultiIndex::from(a))
}

fn gram_points(c: &Common) -> std::result::Result<Vec<PointH>, String> {
    let mut points: Vec<PointH> = c.point.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?;
    if let Some(path) = &c.input {
        points.extend(read_json::<Vec<PointH>>(path)?);
    }
    if points.is_empty() {
        return Err("gram needs points via --point or --in".into());
    }
    Ok(points)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> std::result::Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}
