//! The `mtw` command line: `check`, `eval`, `perturb`, `presets`.
//!
//! Exit codes: 0 success (A3s, A3w-only, perturbation holds), 1 the condition
//! fails, 2 invalid input or inadmissible cost, 3 numeric failure.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::checker::{self, CheckError, PerturbationOutcome, ScanConfig, ScanRow, Status, Verdict};
use crate::costlib::{presets, CostError, CostFunction, Expr};
use crate::geometry::{Curvature, GeometryError, SpaceForm};
use crate::mtwcore::{MtwError, MtwInput, ProfileEngine};
use crate::oracle::{self, OracleError, StencilConfig};

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "z,A,B,alpha,beta,gamma,delta,slack_min";
pub const DEFAULT_EVAL_DIAMETER: f64 = 3.0;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mtw", version, about = "MTW condition checks for radial costs l(d(x, y)) on space forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan the coefficient inequalities over [0, |l'(D)|] and report A3s / A3w-only / fails.
    Check(CheckArgs),
    /// Evaluate MTW(u, v, w) at the canonical base point by one or all routes.
    Eval(EvalArgs),
    /// Test the perturbation criterion for l = z^2/2 + eps * F with F' = z f.
    Perturb(PerturbArgs),
    /// List the built-in costs.
    Presets(PresetsArgs),
}

#[derive(Debug, Args)]
struct CostArgs {
    /// Preset name (see `presets`) or an expression in z.
    #[arg(long, allow_hyphen_values = true)]
    cost: String,
    /// Sectional curvature: -1, 0 or 1.
    #[arg(long = "K", allow_negative_numbers = true)]
    curvature: i8,
    /// Manifold dimension (>= 2).
    #[arg(long)]
    dim: usize,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    cost: CostArgs,
    /// Diameter D of the region; the scan covers [0, |l'(D)|].
    #[arg(long)]
    diameter: f64,
    #[arg(long, default_value_t = checker::DEFAULT_GRID)]
    grid: usize,
    /// Slack below which a strict inequality counts as only weak.
    #[arg(long, default_value_t = checker::DEFAULT_STRICT_MARGIN)]
    strict_margin: f64,
    /// Write one row per grid point.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Closed,
    Jacobi,
    Oracle,
    All,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    cost: CostArgs,
    #[arg(long, default_value_t = DEFAULT_EVAL_DIAMETER)]
    diameter: f64,
    /// Components of u in the orthonormal frame at the canonical base point.
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    #[arg(long, value_enum, default_value_t = Method::All)]
    method: Method,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct PerturbArgs {
    /// The perturbation direction f as an expression in z.
    #[arg(long, allow_hyphen_values = true)]
    f: String,
    #[arg(long, allow_negative_numbers = true)]
    k: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long, default_value_t = checker::DEFAULT_GRID)]
    grid: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct PresetsArgs {
    #[arg(long)]
    json: bool,
}

/// Echo of the inputs that produced a report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Invocation {
    pub cost: Option<String>,
    pub expression: Option<String>,
    pub curvature: Option<Curvature>,
    pub dim: Option<usize>,
    pub diameter: Option<f64>,
    pub grid: Option<usize>,
    pub strict_margin: Option<f64>,
    pub method: Option<String>,
    pub u: Option<Vec<f64>>,
    pub v: Option<Vec<f64>>,
    pub w: Option<Vec<f64>>,
    pub f: Option<String>,
    pub k: Option<f64>,
    pub b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub between: (String, String),
    pub absolute: f64,
    /// `absolute / max(1, |first|)`
    pub relative: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RouteValues {
    pub closed: Option<f64>,
    pub jacobi: Option<f64>,
    pub oracle: Option<f64>,
    pub deviations: Vec<Deviation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetEntry {
    pub name: String,
    pub expression: String,
    pub curvatures: Vec<i8>,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub invocation: Invocation,
    pub verdict: Option<Verdict>,
    pub values: Option<RouteValues>,
    pub perturbation: Option<PerturbationOutcome>,
    pub presets: Option<Vec<PresetEntry>>,
    pub error: Option<ErrorReport>,
    pub exit_code: i32,
    pub wall_time_ms: f64,
}

impl RunReport {
    fn new(command: &str, invocation: Invocation) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            invocation,
            verdict: None,
            values: None,
            perturbation: None,
            presets: None,
            error: None,
            exit_code: EXIT_OK,
            wall_time_ms: 0.0,
        }
    }
}

/// An error with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, kind: "invalid-input", message: message.into() }
    }
}

impl From<CostError> for Failure {
    fn from(e: CostError) -> Self {
        let (code, kind) = match &e {
            CostError::Admissibility(a) => (EXIT_INVALID, a.kind.name()),
            CostError::Parse(_) => (EXIT_INVALID, "parse"),
            CostError::Diameter(_) | CostError::SphereDiameter(_) | CostError::Grid(_) | CostError::OutOfRange { .. } => {
                (EXIT_INVALID, "invalid-input")
            }
            CostError::Jet(_) | CostError::ConvergenceFailure(_) => (EXIT_NUMERIC, "numeric"),
        };
        Self { code, kind, message: e.to_string() }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Cost(c) => c.into(),
            GeometryError::InjectivityRadius(_) | GeometryError::CutLocus(_) => {
                Self { code: EXIT_NUMERIC, kind: "numeric", message: e.to_string() }
            }
            _ => Self::invalid(e.to_string()),
        }
    }
}

impl From<MtwError> for Failure {
    fn from(e: MtwError) -> Self {
        match e {
            MtwError::Cost(c) => c.into(),
            MtwError::Geometry(g) => g.into(),
            MtwError::Limit { .. } => Self { code: EXIT_INVALID, kind: "inadmissible", message: e.to_string() },
            MtwError::ZeroVector | MtwError::OutOfRange { .. } | MtwError::CurvatureMismatch { .. } => {
                Self::invalid(e.to_string())
            }
            MtwError::Pole { .. } | MtwError::Jet(_) => Self { code: EXIT_NUMERIC, kind: "numeric", message: e.to_string() },
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Geometry(g) => g.into(),
            OracleError::Mtw(m) => m.into(),
            OracleError::InvalidStep(_) | OracleError::InvalidOrder(_) | OracleError::NoSteps => Self::invalid(e.to_string()),
            OracleError::StencilDegenerate { .. } => Self { code: EXIT_NUMERIC, kind: "numeric", message: e.to_string() },
        }
    }
}

impl From<CheckError> for Failure {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Cost(c) => c.into(),
            CheckError::Mtw(m) => m.into(),
            CheckError::Jet(_) => Self { code: EXIT_NUMERIC, kind: "numeric", message: e.to_string() },
            _ => Self::invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_INVALID, kind: "io", message: e.to_string() }
    }
}

fn curvature(k: i8) -> Result<Curvature, Failure> {
    Curvature::try_from(k).map_err(|e| Failure::invalid(e.to_string()))
}

fn parse_components(flag: &str, text: &str, dim: usize) -> Result<Vec<f64>, Failure> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::invalid(format!("--{flag}: {e}")))?;
    if values.len() != dim {
        return Err(Failure::invalid(format!("--{flag} needs {dim} components, got {}", values.len())));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Failure::invalid(format!("--{flag} has a non-finite component")));
    }
    Ok(values)
}

/// Runs one command. `args` includes the program name. Human-readable output
/// and JSON go to `out`; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let (json, mut report, result) = match cli.command {
        Command::Check(a) => {
            let mut report = RunReport::new("check", Invocation::default());
            let r = cmd_check(&a, &mut report, out);
            (a.json, report, r)
        }
        Command::Eval(a) => {
            let mut report = RunReport::new("eval", Invocation::default());
            let r = cmd_eval(&a, &mut report, out);
            (a.json, report, r)
        }
        Command::Perturb(a) => {
            let mut report = RunReport::new("perturb", Invocation::default());
            let r = cmd_perturb(&a, &mut report, out);
            (a.json, report, r)
        }
        Command::Presets(a) => {
            let mut report = RunReport::new("presets", Invocation::default());
            let r = cmd_presets(a.json, &mut report, out);
            (a.json, report, r)
        }
    };
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    report.exit_code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error ({}): {}", f.kind, f.message);
            report.error = Some(ErrorReport { kind: f.kind.to_string(), message: f.message });
            f.code
        }
    };
    if json {
        match serde_json::to_string_pretty(&report) {
            Ok(text) => {
                let _ = writeln!(out, "{text}");
            }
            Err(e) => {
                let _ = writeln!(err, "error (numeric): report is not serializable: {e}");
                return EXIT_NUMERIC;
            }
        }
    }
    report.exit_code
}

/// Prints only when JSON output is off.
struct Human<'a> {
    out: &'a mut dyn Write,
    quiet: bool,
}

impl Human<'_> {
    fn line(&mut self, text: impl AsRef<str>) {
        if !self.quiet {
            let _ = writeln!(self.out, "{}", text.as_ref());
        }
    }
}

fn cmd_check(a: &CheckArgs, report: &mut RunReport, out: &mut dyn Write) -> Result<i32, Failure> {
    report.invocation = Invocation {
        cost: Some(a.cost.cost.clone()),
        dim: Some(a.cost.dim),
        diameter: Some(a.diameter),
        grid: Some(a.grid),
        strict_margin: Some(a.strict_margin),
        ..Invocation::default()
    };
    let k = curvature(a.cost.curvature)?;
    report.invocation.curvature = Some(k);
    let cfg = ScanConfig::new(a.cost.dim, a.grid, a.strict_margin)?;
    let cost = CostFunction::resolve(&a.cost.cost, a.diameter)?;
    report.invocation.expression = Some(cost.expression().to_string());
    let scan = checker::scan_profile(&cost, k, &cfg)?;
    if let Some(path) = &a.csv {
        write_csv(path, &scan.rows)?;
    }
    let v = scan.verdict;
    report.verdict = Some(v);

    let mut h = Human { out, quiet: a.json };
    h.line(format!(
        "cost {} = {}, K = {}, n = {}, D = {}, grid {} over [0, {}]",
        cost.label(),
        cost.expression(),
        k,
        a.cost.dim,
        a.diameter,
        a.grid,
        v.interval_end
    ));
    h.line(v.status.to_string());
    let ms = &v.min_slacks;
    let mut mins = vec![("beta", ms.beta), ("gamma", ms.gamma)];
    if let Some(d) = ms.delta {
        mins.push(("delta", d));
    }
    mins.push(("combo", ms.combo));
    for (name, s) in mins {
        h.line(format!("  min slack {name:5} = {:+.6e} at z = {}", s.value, s.z));
    }
    if let Some(z) = v.witness {
        let what = if v.status == Status::Fails { "violated" } else { "tightest" };
        h.line(format!("  {what}: {} at z = {z}", v.binding));
    }
    Ok(match v.status {
        Status::Fails => EXIT_FAILS,
        _ => EXIT_OK,
    })
}

fn write_csv(path: &PathBuf, rows: &[ScanRow]) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        let p = &r.profile;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            p.z,
            p.a,
            p.b,
            p.alpha,
            p.beta,
            p.gamma,
            p.delta,
            r.classification.min_slack().1
        )?;
    }
    w.flush()?;
    Ok(())
}

fn deviation(a: (&str, f64), b: (&str, f64)) -> Deviation {
    let absolute = (a.1 - b.1).abs();
    Deviation {
        between: (a.0.to_string(), b.0.to_string()),
        absolute,
        relative: absolute / a.1.abs().max(1.0),
    }
}

fn cmd_eval(a: &EvalArgs, report: &mut RunReport, out: &mut dyn Write) -> Result<i32, Failure> {
    let dim = a.cost.dim;
    report.invocation = Invocation {
        cost: Some(a.cost.cost.clone()),
        dim: Some(dim),
        diameter: Some(a.diameter),
        method: Some(format!("{:?}", a.method).to_lowercase()),
        ..Invocation::default()
    };
    let k = curvature(a.cost.curvature)?;
    report.invocation.curvature = Some(k);
    let space = SpaceForm::new(k, dim)?;
    let (u, v, w) = (
        parse_components("u", &a.u, dim)?,
        parse_components("v", &a.v, dim)?,
        parse_components("w", &a.w, dim)?,
    );
    report.invocation.u = Some(u.clone());
    report.invocation.v = Some(v.clone());
    report.invocation.w = Some(w.clone());
    let cost = CostFunction::resolve(&a.cost.cost, a.diameter)?;
    report.invocation.expression = Some(cost.expression().to_string());
    let input = MtwInput::new(&space, space.frame_vector(&u)?, space.frame_vector(&v)?, space.frame_vector(&w)?)?;

    let wants = |m: Method| a.method == m || a.method == Method::All;
    let mut values = RouteValues::default();
    if wants(Method::Closed) || wants(Method::Jacobi) {
        let engine = ProfileEngine::new(&cost, k)?;
        if wants(Method::Closed) {
            values.closed = Some(engine.mtw_closed(&space, &input)?);
        }
        if wants(Method::Jacobi) {
            values.jacobi = Some(engine.mtw_via_jacobi(&space, &input)?);
        }
    }
    if wants(Method::Oracle) {
        values.oracle = Some(oracle::mtw_definitional(&cost, &space, &input, &StencilConfig::default())?);
    }
    let named = [("closed", values.closed), ("jacobi", values.jacobi), ("oracle", values.oracle)];
    let present: Vec<(&str, f64)> = named.iter().filter_map(|(n, v)| v.map(|x| (*n, x))).collect();
    for i in 0..present.len() {
        for j in i + 1..present.len() {
            values.deviations.push(deviation(present[i], present[j]));
        }
    }

    let mut h = Human { out, quiet: a.json };
    for (name, x) in &present {
        h.line(format!("{name:6} = {x:+.12e}"));
    }
    for d in &values.deviations {
        h.line(format!("|{} - {}| = {:.3e} (relative {:.3e})", d.between.0, d.between.1, d.absolute, d.relative));
    }
    report.values = Some(values);
    Ok(EXIT_OK)
}

fn cmd_perturb(a: &PerturbArgs, report: &mut RunReport, out: &mut dyn Write) -> Result<i32, Failure> {
    report.invocation = Invocation {
        f: Some(a.f.clone()),
        k: Some(a.k),
        b: Some(a.b),
        grid: Some(a.grid),
        ..Invocation::default()
    };
    let f = Expr::parse(&a.f).map_err(CostError::from)?;
    let outcome = checker::perturbation_check(&f, a.k, a.b, a.grid)?;
    report.perturbation = Some(outcome);

    let mut h = Human { out, quiet: a.json };
    h.line(format!("f = {f}, k = {}, (0, {}] on {} points", a.k, a.b, a.grid));
    h.line(if outcome.holds { "holds" } else { "fails" });
    h.line(format!("  max f''                          = {:+.6e}", outcome.max_second_derivative));
    h.line(format!("  max (z^2 f''' - z f'' + 2 f')/z  = {:+.6e}", outcome.max_combination));
    if let Some(wit) = outcome.witness {
        h.line(format!("  witness z = {}: {} = {} is not < {}", wit.z, wit.condition, wit.lhs, a.k));
    }
    Ok(if outcome.holds { EXIT_OK } else { EXIT_FAILS })
}

fn cmd_presets(json: bool, report: &mut RunReport, out: &mut dyn Write) -> Result<i32, Failure> {
    let entries: Vec<PresetEntry> = presets::catalog()
        .into_iter()
        .map(|p| PresetEntry {
            name: if p.name == "quartic" { "quartic(<eps>)".to_string() } else { p.name.to_string() },
            expression: if p.name == "quartic" {
                format!("z^2/2 - eps*z^4 (default eps = {})", presets::DEFAULT_QUARTIC_EPS)
            } else {
                p.text.clone()
            },
            curvatures: p.curvatures.to_vec(),
            expected: p.expected.to_string(),
        })
        .collect();
    let mut h = Human { out, quiet: json };
    for e in &entries {
        let ks: Vec<String> = e.curvatures.iter().map(|k| k.to_string()).collect();
        h.line(format!("{:16} {:44} K = {:5} {}", e.name, e.expression, ks.join(","), e.expected));
    }
    report.presets = Some(entries);
    Ok(EXIT_OK)
}
