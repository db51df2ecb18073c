//! Command-line front end: capacities, sweeps, verification suites and
//! channel dumps.
//!
//! Exit codes: 0 success, 1 domain or runtime error (including a failed
//! verification), 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::capacity::{
    capacity_ratio, classical_capacity_grassmann, quantum_capacity_grassmann, quantum_capacity_grassmann_w,
    quantum_capacity_unruh, unruh_capacity_approx, LogBase,
};
use crate::channels::grassmann_channel;
use crate::error::{Error, Result};
use crate::verify::{
    check_capacity_upper_bound, check_covariance, check_degradability_boundary, check_factorization,
    check_holevo_oracle, check_ppt_claims, check_quantum_oracle, check_unruh_rate, check_werner_holevo,
    check_wolf_eisert_form, VerificationReport,
};

#[derive(Parser, Debug)]
#[command(name = "grassmann", version, about = "Grassmann channel capacities, sweeps and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one capacity formula.
    Capacity(CapacityArgs),
    /// Evaluate a capacity family on a parameter grid and write CSV.
    Sweep(SweepArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Write the Kraus representation of a Grassmann channel as JSON.
    DumpChannel(DumpArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CapacityKind {
    /// Grassmann quantum capacity at squeezing `--r` (or `--w`).
    Quantum,
    /// Grassmann classical capacity at `--r`.
    Classical,
    /// Unruh quantum capacity at `--z`.
    Unruh,
    /// Leading-order Unruh approximation at `--z`.
    UnruhApprox,
    /// Limiting Grassmann/Unruh capacity ratio.
    Ratio,
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    #[arg(value_enum)]
    pub kind: CapacityKind,
    #[arg(long)]
    pub d: usize,
    #[arg(long, conflicts_with_all = ["w", "z"])]
    pub r: Option<f64>,
    #[arg(long, conflicts_with = "z")]
    pub w: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long, default_value = "d", value_parser = parse_base)]
    pub base: LogBase,
    /// Remainder tolerance for the Unruh series.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    GrassmannQ,
    GrassmannC,
    UnruhQ,
    Ratio,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::GrassmannQ => "grassmann-q",
            Family::GrassmannC => "grassmann-c",
            Family::UnruhQ => "unruh-q",
            Family::Ratio => "ratio",
        }
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<usize>,
    /// Grid parameter: `r` or `w` for grassmann-q, `r` for grassmann-c, `z`
    /// for unruh-q. Defaults to the family's natural parameter.
    #[arg(long)]
    pub param: Option<String>,
    /// Grid start (inclusive).
    #[arg(long)]
    pub start: Option<f64>,
    /// Grid stop (exclusive).
    #[arg(long)]
    pub stop: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Log bases to emit; repeat or comma-separate for several.
    #[arg(long, value_delimiter = ',', default_value = "d", value_parser = parse_base)]
    pub base: Vec<LogBase>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Degradable,
    Covariance,
    WolfEisert,
    WernerHolevo,
    Factorization,
    OracleQ,
    OracleC,
    Ppt,
    Rate,
}

impl Suite {
    const EACH: [Suite; 9] = [
        Suite::Degradable,
        Suite::Covariance,
        Suite::WolfEisert,
        Suite::WernerHolevo,
        Suite::Factorization,
        Suite::OracleQ,
        Suite::OracleC,
        Suite::Ppt,
        Suite::Rate,
    ];

    fn default_tol(self) -> f64 {
        match self {
            Suite::Factorization => 1e-12,
            Suite::WernerHolevo => 1e-10,
            Suite::OracleQ => 1e-6,
            Suite::OracleC => 1e-4,
            Suite::Ppt => 0.0,
            Suite::Rate => 0.2,
            _ => 1e-9,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Overrides each check's default tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DumpArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_base(s: &str) -> std::result::Result<LogBase, String> {
    s.parse::<LogBase>().map_err(|e| e.to_string())
}

/// Fixed-point rendering with twelve digits after the decimal point.
pub fn format_value(x: f64) -> String {
    let s = format!("{x:.12}");
    // Avoid "-0.000000000000" for tiny negative rounding noise.
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = if e.use_stderr() { e.render().to_string() } else { e.to_string() };
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Capacity(a) => cmd_capacity(&a).map(|s| (s, 0)),
        Command::Sweep(a) => SweepConfig::from_args(&a).and_then(|c| cmd_sweep(&c)).map(|s| (s, 0)),
        Command::Verify(a) => cmd_verify(&a),
        Command::DumpChannel(a) => cmd_dump_channel(&a).map(|s| (s, 0)),
    };
    match result {
        Ok((text, code)) => {
            if !text.is_empty() {
                let _ = writeln!(out, "{text}");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn main_with_args() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

pub fn cmd_capacity(a: &CapacityArgs) -> Result<String> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Error::domain(format!("{:?} needs --{flag}", a.kind)));
    let (key, param, value) = match a.kind {
        CapacityKind::Quantum => match (a.r, a.w) {
            (_, Some(w)) => ("w", Some(w), quantum_capacity_grassmann_w(a.d, w, a.base)?.value),
            (r, None) => {
                let r = need(r, "r")?;
                ("r", Some(r), quantum_capacity_grassmann(a.d, r, a.base)?.value)
            }
        },
        CapacityKind::Classical => {
            let r = need(a.r, "r")?;
            ("r", Some(r), classical_capacity_grassmann(a.d, r, a.base)?)
        }
        CapacityKind::Unruh => {
            let z = need(a.z, "z")?;
            ("z", Some(z), quantum_capacity_unruh(a.d, z, a.tol, a.base)?.value)
        }
        CapacityKind::UnruhApprox => {
            let z = need(a.z, "z")?;
            ("z", Some(z), unruh_capacity_approx(a.d, z, a.base)?)
        }
        CapacityKind::Ratio => ("r", None, capacity_ratio(a.d)?),
    };
    if a.json {
        let mut obj = serde_json::Map::new();
        obj.insert("d".into(), json!(a.d));
        obj.insert(key.into(), param.map_or(serde_json::Value::Null, |p| json!(p)));
        obj.insert("value".into(), json!(value));
        obj.insert("base".into(), json!(a.base.name()));
        Ok(serde_json::Value::Object(obj).to_string())
    } else {
        Ok(format_value(value))
    }
}

/// A capacity family evaluated over dimensions and a half-open parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub family: Family,
    pub ds: Vec<usize>,
    pub param_name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub bases: Vec<LogBase>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn from_args(a: &SweepArgs) -> Result<Self> {
        let (name, lo, hi) = match (a.family, a.param.as_deref()) {
            (Family::GrassmannQ | Family::GrassmannC, None | Some("r")) => ("r", 0.0, std::f64::consts::FRAC_PI_2),
            (Family::GrassmannQ, Some("w")) => ("w", 0.0, 1.0),
            (Family::UnruhQ, None | Some("z")) => ("z", 0.0, 1.0),
            (Family::Ratio, None | Some("d")) => ("d", 0.0, 1.0),
            (f, Some(p)) => return Err(Error::domain(format!("family {} has no parameter {p}", f.name()))),
        };
        let cfg = SweepConfig {
            family: a.family,
            ds: a.d.clone(),
            param_name: name.to_string(),
            start: a.start.unwrap_or(lo),
            stop: a.stop.unwrap_or(hi),
            points: a.points,
            bases: a.base.clone(),
            out: a.out.clone(),
            jobs: a.jobs,
            seed: a.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ds.is_empty() || self.bases.is_empty() {
            return Err(Error::domain("sweep needs at least one d and one base"));
        }
        if self.family != Family::Ratio {
            if self.points < 2 {
                return Err(Error::domain(format!("sweep needs at least 2 points, got {}", self.points)));
            }
            if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
                return Err(Error::domain(format!("invalid grid [{}, {})", self.start, self.stop)));
            }
        }
        Ok(())
    }

    /// `points` values `start + i (stop - start)/points`; `stop` is excluded.
    pub fn grid(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / self.points as f64;
        (0..self.points).map(|i| self.start + i as f64 * step).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub param: f64,
    pub base: LogBase,
    pub value: f64,
}

pub const SWEEP_HEADER: &str = "family,d,param_name,param,base,value";

fn sweep_value(cfg: &SweepConfig, d: usize, x: f64, base: LogBase) -> Result<f64> {
    match (cfg.family, cfg.param_name.as_str()) {
        (Family::GrassmannQ, "w") => Ok(quantum_capacity_grassmann_w(d, x, base)?.value),
        (Family::GrassmannQ, _) => Ok(quantum_capacity_grassmann(d, x, base)?.value),
        (Family::GrassmannC, _) => classical_capacity_grassmann(d, x, base),
        (Family::UnruhQ, _) => Ok(quantum_capacity_unruh(d, x, 1e-12, base)?.value),
        (Family::Ratio, _) => capacity_ratio(d),
    }
}

/// Evaluates the sweep. Rows come back sorted by `(d, param)` with bases in
/// the configured order, independent of the number of workers.
pub fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut tasks = Vec::new();
    for (di, &d) in cfg.ds.iter().enumerate() {
        let grid = if cfg.family == Family::Ratio { vec![d as f64] } else { cfg.grid() };
        let bases = if cfg.family == Family::Ratio { &cfg.bases[..1] } else { &cfg.bases[..] };
        for (gi, &x) in grid.iter().enumerate() {
            for (bi, &base) in bases.iter().enumerate() {
                tasks.push(((d, di, gi, bi), x, base));
            }
        }
    }
    type Keyed = ((usize, usize, usize, usize), SweepRow);
    let eval = || -> Vec<Result<Keyed>> {
        tasks
            .par_iter()
            .map(|&(key, x, base)| {
                let value = sweep_value(cfg, key.0, x, base)?;
                Ok((key, SweepRow { d: key.0, param: x, base, value }))
            })
            .collect()
    };
    let results = if cfg.jobs == 0 {
        eval()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::domain(format!("thread pool: {e}")))?
            .install(eval)
    };
    let mut keyed = results.into_iter().collect::<Result<Vec<_>>>()?;
    keyed.sort_by_key(|&((d, di, gi, bi), _)| (d, di, gi, bi));
    Ok(keyed.into_iter().map(|(_, row)| row).collect())
}

pub fn sweep_csv(cfg: &SweepConfig, rows: &[SweepRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    for row in rows {
        let base = if cfg.family == Family::Ratio { "e" } else { row.base.name() };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            cfg.family.name(),
            row.d,
            cfg.param_name,
            format_value(row.param),
            base,
            format_value(row.value)
        );
    }
    s
}

/// Runs the sweep; writes CSV to `cfg.out` (returning a one-line summary) or
/// returns the CSV itself when no path is set.
pub fn cmd_sweep(cfg: &SweepConfig) -> Result<String> {
    let rows = sweep_rows(cfg)?;
    let csv = sweep_csv(cfg, &rows);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            Ok(format!("wrote {} rows to {}", rows.len(), path.display()))
        }
        None => Ok(csv.trim_end().to_string()),
    }
}

fn suite_reports(suite: Suite, d: usize, r: f64, seed: u64, tol: Option<f64>) -> Result<Vec<VerificationReport>> {
    let tol = tol.unwrap_or(suite.default_tol());
    Ok(match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::EACH {
                all.extend(suite_reports(s, d, r, seed, None)?);
            }
            all
        }
        Suite::Degradable => vec![check_degradability_boundary(d, r, tol)?],
        Suite::Covariance => vec![check_covariance(d, r, 20, tol, seed)?],
        Suite::WolfEisert => (1..=d).map(|k| check_wolf_eisert_form(d, k, 50, tol, seed)).collect::<Result<_>>()?,
        Suite::WernerHolevo => vec![check_werner_holevo(d, tol)?],
        Suite::Factorization => vec![check_factorization(r, tol)?],
        Suite::OracleQ => {
            let mut v = vec![check_quantum_oracle(d, r, 8, tol, seed)?];
            if r <= std::f64::consts::FRAC_PI_4 {
                v.push(check_capacity_upper_bound(d, r, 200, 1e-9, seed)?);
            }
            v
        }
        Suite::OracleC => vec![check_holevo_oracle(d, r, 8, tol, seed)?],
        Suite::Ppt => vec![check_ppt_claims(d, tol)?],
        Suite::Rate => vec![check_unruh_rate(d, tol)?],
    })
}

/// Runs a suite; the exit code is 0 iff every report passes.
pub fn cmd_verify(a: &VerifyArgs) -> Result<(String, i32)> {
    let reports = suite_reports(a.suite, a.d, a.r, a.seed, a.tol)?;
    let pass = reports.iter().all(|r| r.pass);
    let suite = Suite::to_possible_value(&a.suite).map(|v| v.get_name().to_string()).unwrap_or_default();
    let doc = json!({
        "suite": suite,
        "d": a.d,
        "r": a.r,
        "seed": a.seed,
        "pass": pass,
        "reports": reports,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    if let Some(path) = &a.out {
        std::fs::write(path, &text)?;
    }
    Ok((text, if pass { 0 } else { 1 }))
}

pub fn cmd_dump_channel(a: &DumpArgs) -> Result<String> {
    let ch = grassmann_channel(a.d, a.r)?;
    ch.write_json(&a.out)?;
    Ok(format!("wrote {}", a.out.display()))
}
