//! The `ipvar` command line: `evaluate`, `minimize`, `scan` and `verify`.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 numerical failure,
//! 4 verification mismatch. Flags always win over config files.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::action::{action, critical_mu};
use crate::error::{Error, Result};
use crate::fermionic::{from_span, Mode};
use crate::io::{read_json, to_json_string, write_json, write_scan_csv, FrameJson};
use crate::optimize::{minimize, scan_infimum, MinimizeConfig, Objective, ScanTable};
use crate::verify::run_verification;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ipvar",
    version,
    about = "Spectral-weight actions of fermionic projectors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the action of the operator described by a frame file.
    Evaluate(EvaluateArgs),
    /// Minimize the action (or the constrained functional).
    Minimize(MinimizeArgs),
    /// Tabulate minimal actions over a range of space-time sizes.
    Scan(ScanArgs),
    /// Run the built-in reference suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Frame JSON file.
    pub frame: PathBuf,
    /// Coupling; a number or `critical` for 1/2n (the default).
    #[arg(long)]
    pub mu: Option<MuArg>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flags shared by `minimize` and `scan`.
#[derive(Debug, Args)]
pub struct RunFlags {
    #[arg(long)]
    pub mu: Option<MuArg>,
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub f: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    /// Optional config JSON; flags override its fields.
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: RunFlags,
    /// Switches to the constrained problem with this value of `Σ|A_xy|²`.
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: RunFlags,
    #[arg(long)]
    pub m_min: Option<usize>,
    #[arg(long)]
    pub m_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Print the itemized report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MuArg {
    Critical,
    Value(f64),
}

impl std::str::FromStr for MuArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "critical" {
            return Ok(MuArg::Critical);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(MuArg::Value)
            .ok_or_else(|| format!("expected a number or `critical`, got {s:?}"))
    }
}

impl MuArg {
    fn resolve(self, n: usize) -> f64 {
        match self {
            MuArg::Critical => critical_mu(n),
            MuArg::Value(v) => v,
        }
    }
}

/// Scan config: the minimizer settings plus the range of `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    #[serde(flatten)]
    pub base: MinimizeConfig,
    #[serde(default = "one")]
    pub m_min: usize,
    #[serde(default = "three")]
    pub m_max: usize,
}

fn one() -> usize {
    1
}

fn three() -> usize {
    3
}

fn apply_flags(cfg: &mut MinimizeConfig, flags: &RunFlags) -> Result<()> {
    if let Some(mode) = &flags.mode {
        cfg.mode = mode.parse()?;
    }
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(r) = flags.restarts {
        cfg.restarts = r;
    }
    if let Some(n) = flags.n {
        cfg.n = n;
    }
    if let Some(f) = flags.f {
        cfg.f = f;
    }
    if let Some(mu) = flags.mu {
        cfg.objective = Objective::Auxiliary {
            mu: mu.resolve(cfg.n),
        };
    }
    Ok(())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    writeln!(out, "{text}")?;
    Ok(())
}

fn evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<i32> {
    let frame: FrameJson = read_json(&args.frame)?;
    let st = frame.resolve_structure(args.m, args.n)?;
    let span = frame.to_span()?;
    let op = from_span(st.space(), &span)?;
    let mu = args.mu.unwrap_or(MuArg::Critical).resolve(st.n());
    let report = action(&st, op.matrix(), mu)?;
    if let Some(path) = &args.out {
        write_json(path, &report)?;
    }
    emit(out, &to_json_string(&report)?)?;
    Ok(EXIT_OK)
}

fn run_minimize(args: &MinimizeArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg: MinimizeConfig = match &args.config {
        Some(p) => read_json(p)?,
        None => MinimizeConfig::default(),
    };
    if let Some(m) = args.m {
        cfg.m = m;
    }
    apply_flags(&mut cfg, &args.flags)?;
    if let Some(kappa) = args.kappa {
        if args.flags.mu.is_some() {
            return Err(Error::InvalidInput(
                "--mu and --kappa are mutually exclusive".into(),
            ));
        }
        cfg.objective = Objective::Constrained { kappa };
    }
    let result = minimize(&cfg)?;
    if let Some(path) = &args.flags.out {
        write_json(path, &result)?;
    }
    emit(out, &to_json_string(&result)?)?;
    Ok(EXIT_OK)
}

/// Path of the projector table next to the main scan table.
pub fn projector_table_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".projector.csv");
    PathBuf::from(s)
}

fn run_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg: ScanConfig = match &args.config {
        Some(p) => read_json(p)?,
        None => ScanConfig {
            base: MinimizeConfig::default(),
            m_min: one(),
            m_max: three(),
        },
    };
    apply_flags(&mut cfg.base, &args.flags)?;
    if let Some(m) = args.m_min {
        cfg.m_min = m;
    }
    if let Some(m) = args.m_max {
        cfg.m_max = m;
    }
    if cfg.m_min == 0 || cfg.m_min > cfg.m_max {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m_min <= m_max, got {}..{}",
            cfg.m_min, cfg.m_max
        )));
    }
    let mu = match cfg.base.objective {
        Objective::Auxiliary { mu } => mu,
        Objective::Constrained { .. } => {
            return Err(Error::InvalidInput(
                "scan needs an auxiliary objective".into(),
            ))
        }
    };
    let ms: Vec<usize> = (cfg.m_min..=cfg.m_max).collect();
    let table: ScanTable = scan_infimum(cfg.base.f, cfg.base.n, &ms, mu, &cfg.base)?;
    match &args.flags.out {
        Some(path) => {
            write_scan_csv(std::fs::File::create(path)?, &table.infimum)?;
            if cfg.base.mode == Mode::Projector {
                write_scan_csv(
                    std::fs::File::create(projector_table_path(path))?,
                    &table.projector,
                )?;
            }
            for v in table.lemma_violations.iter().chain(&table.bound_violations) {
                eprintln!("warning: {v}");
            }
            emit(out, &to_json_string(&table)?)?;
        }
        None => emit(out, &to_json_string(&table)?)?,
    }
    Ok(EXIT_OK)
}

fn run_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let report = run_verification();
    if args.json {
        emit(out, &to_json_string(&report)?)?;
    } else {
        for c in &report.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            let mut line = format!(
                "{tag} {}: found {:.17e}, expected {:.17e} (tol {:.1e})",
                c.name, c.found, c.expected, c.tolerance
            );
            if let Some(d) = &c.detail {
                line.push_str(&format!(" [{d}]"));
            }
            emit(out, &line)?;
        }
        let failed = report.failures().count();
        emit(
            out,
            &format!("{} checks, {} failed", report.checks.len(), failed),
        )?;
    }
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

/// Maps a library error to its exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Evaluate(a) => evaluate(a, out),
        Command::Minimize(a) => run_minimize(a, out),
        Command::Scan(a) => run_scan(a, out),
        Command::Verify(a) => run_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_argument() {
        assert_eq!("critical".parse::<MuArg>().unwrap().resolve(2), 0.25);
        assert_eq!("0.1".parse::<MuArg>().unwrap(), MuArg::Value(0.1));
        assert!("nan".parse::<MuArg>().is_err());
    }

    #[test]
    fn bad_mode_exits_with_usage_code() {
        let mut buf = Vec::new();
        let code = run(["ipvar", "minimize", "--mode", "spinor"], &mut buf);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn projector_table_suffix() {
        assert_eq!(
            projector_table_path(Path::new("/tmp/scan.csv")),
            PathBuf::from("/tmp/scan.csv.projector.csv")
        );
    }
}
