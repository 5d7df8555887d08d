//! Command-line front end.
//!
//! Exit status: 0 success, 1 usage error, 2 configuration error, 3 grid
//! cells that could not be evaluated (output is still written, with a
//! `.warnings.txt` sidecar), 4 failed validation, 5 output not writable.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{design_report, AnalysisError};
use crate::config::{parse_config, ConfigError, GridConfig, ScenarioConfig};
use crate::emit::{emit_curve, emit_map, emit_report, emit_warnings, ReportFormat, TableFormat};
use crate::gain::{gain_curve, gain_map, Axis, GainError, NumericOptions, SampleWarning};
use crate::validation::{run_all, SuiteReport, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(
    name = "beamfocus",
    version,
    about = "Near-field beamfocusing gain for ULA and MLA receivers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Gain across the focal plane, x_t swept at z = F.
    CutX(RunArgs),
    /// Gain along the axis, z swept at x_t = 0.
    CutZ(RunArgs),
    /// Gain over the xz-plane.
    Map(RunArgs),
    /// Beam metrics and antenna-count design report.
    Design(RunArgs),
    /// Compare fast paths against independent quadrature.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output file, or `-` for stdout [default: <config stem>.<verb>.<ext>]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json for sweeps and maps (default csv); text or json for design (default text).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads: a positive integer or `auto`.
    #[arg(long, default_value = "auto", value_parser = parse_threads)]
    pub threads: Threads,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "auto", value_parser = parse_threads)]
    pub threads: Threads,
    /// Seed for the random scenarios.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Count(usize),
}

fn parse_threads(s: &str) -> Result<Threads, String> {
    if s == "auto" {
        return Ok(Threads::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Threads::Count(n)),
        _ => Err(format!("expected a positive integer or `auto`, got `{s}`")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Config { path: PathBuf, source: ConfigError },
    #[error("config {path} does not fit `{verb}`: {reason}")]
    VerbMismatch {
        path: PathBuf,
        verb: &'static str,
        reason: String,
    },
    #[error("cannot evaluate {path}: {reason}")]
    Scenario { path: PathBuf, reason: String },
    #[error("{count} grid cell(s) could not be evaluated; see {}", .sidecar.display())]
    Incomplete { count: usize, sidecar: PathBuf },
    #[error("validation failed: {}", .failed.join(", "))]
    ValidationFailed { failed: Vec<String> },
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::ConfigRead { .. }
            | CliError::Config { .. }
            | CliError::VerbMismatch { .. }
            | CliError::Scenario { .. } => 2,
            CliError::Incomplete { .. } => 3,
            CliError::ValidationFailed { .. } => 4,
            CliError::Output { .. } => 5,
        }
    }
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::CutX(_) => "cut-x",
            Verb::CutZ(_) => "cut-z",
            Verb::Map(_) => "map",
            Verb::Design(_) => "design",
            Verb::Validate(_) => "validate",
        }
    }
}

/// What a successful run produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub written: Vec<PathBuf>,
}

fn with_threads<T: Send>(threads: Threads, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let n = match threads {
        Threads::Auto => 0,
        Threads::Count(n) => n,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))?;
    Ok(pool.install(f))
}

fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text).map_err(|source| CliError::Config {
        path: path.to_path_buf(),
        source,
    })
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let result = if path == Path::new("-") {
        std::io::stdout().lock().write_all(bytes)
    } else {
        std::fs::write(path, bytes)
    };
    result.map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn default_output(config: &Path, verb: &str, ext: &str) -> PathBuf {
    let stem = config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "beamfocus".into());
    PathBuf::from(format!("{stem}.{verb}.{ext}"))
}

fn sidecar_path(out: &Path) -> PathBuf {
    if out == Path::new("-") {
        return PathBuf::from("stdout.warnings.txt");
    }
    let mut s = out.as_os_str().to_os_string();
    s.push(".warnings.txt");
    PathBuf::from(s)
}

fn table_format(format: Option<Format>) -> Result<TableFormat, CliError> {
    match format {
        None | Some(Format::Csv) => Ok(TableFormat::Csv),
        Some(Format::Json) => Ok(TableFormat::Json),
        Some(Format::Text) => Err(CliError::Usage(
            "--format text is only available for `design`".into(),
        )),
    }
}

fn meta(verb: &str, config: &ScenarioConfig) -> Value {
    json!({
        "tool": "beamfocus",
        "version": env!("CARGO_PKG_VERSION"),
        "verb": verb,
        "routes": config.routes.iter().map(|r| r.as_str()).collect::<Vec<_>>(),
        "config": config.to_json(),
    })
}

fn scenario_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Scenario {
        path: path.to_path_buf(),
        reason: e.to_string(),
    }
}

/// Writes the sidecar when cells were flagged and turns them into an error.
fn finish_table(
    out: PathBuf,
    bytes: &[u8],
    warnings: &[SampleWarning],
) -> Result<Outcome, CliError> {
    write_output(&out, bytes)?;
    let mut written = vec![out.clone()];
    if warnings.is_empty() {
        return Ok(Outcome { written });
    }
    let sidecar = sidecar_path(&out);
    write_output(&sidecar, &emit_warnings(warnings))?;
    written.push(sidecar.clone());
    Err(CliError::Incomplete {
        count: warnings.len(),
        sidecar,
    })
}

fn run_sweep(verb: &'static str, axis: Axis, args: &RunArgs) -> Result<Outcome, CliError> {
    let format = table_format(args.format)?;
    let config = load_config(&args.config)?;
    let mismatch = |reason: String| CliError::VerbMismatch {
        path: args.config.clone(),
        verb,
        reason,
    };
    let grid = match config.grid {
        Some(GridConfig::Sweep { axis: a, grid }) if a == axis => grid,
        Some(GridConfig::Sweep { axis: a, .. }) => {
            return Err(mismatch(format!(
                "[sweep] axis is \"{}\", expected \"{}\"",
                a.as_str(),
                axis.as_str()
            )))
        }
        _ => return Err(mismatch("needs a [sweep] section".into())),
    };
    let template = config
        .scenario()
        .map_err(|e| scenario_error(&args.config, e))?;
    let opts = NumericOptions::for_wavelength(config.wavelength());
    let curve = with_threads(args.threads, || {
        gain_curve(&template, axis, &grid, &config.routes, &opts)
    })?
    .map_err(|e: GainError| scenario_error(&args.config, e))?;
    let ext = if format == TableFormat::Csv {
        "csv"
    } else {
        "json"
    };
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| default_output(&args.config, verb, ext));
    let bytes = emit_curve(&curve, format, &meta(verb, &config));
    finish_table(out, &bytes, &curve.warnings)
}

fn run_map(args: &RunArgs) -> Result<Outcome, CliError> {
    let format = table_format(args.format)?;
    let config = load_config(&args.config)?;
    let Some(GridConfig::Map { x, z }) = config.grid else {
        return Err(CliError::VerbMismatch {
            path: args.config.clone(),
            verb: "map",
            reason: "needs a [map] section".into(),
        });
    };
    let template = config
        .scenario()
        .map_err(|e| scenario_error(&args.config, e))?;
    let opts = NumericOptions::for_wavelength(config.wavelength());
    let route = config.routes[0];
    let map = with_threads(args.threads, || gain_map(&template, &x, &z, route, &opts))?
        .map_err(|e| scenario_error(&args.config, e))?;
    let ext = if format == TableFormat::Csv {
        "csv"
    } else {
        "json"
    };
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| default_output(&args.config, "map", ext));
    let bytes = emit_map(&map, format, &meta("map", &config));
    finish_table(out, &bytes, &map.warnings)
}

fn run_design(args: &RunArgs) -> Result<Outcome, CliError> {
    let format = match args.format {
        None | Some(Format::Text) => ReportFormat::Text,
        Some(Format::Json) => ReportFormat::Json,
        Some(Format::Csv) => {
            return Err(CliError::Usage(
                "`design` writes text or json, not csv".into(),
            ))
        }
    };
    let config = load_config(&args.config)?;
    let report = design_report(&config.layout, &config.carrier, config.focus).map_err(
        |e: AnalysisError| match e {
            AnalysisError::NotModular => CliError::VerbMismatch {
                path: args.config.clone(),
                verb: "design",
                reason: e.to_string(),
            },
            other => scenario_error(&args.config, other),
        },
    )?;
    let ext = if format == ReportFormat::Text {
        "txt"
    } else {
        "json"
    };
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| default_output(&args.config, "design", ext));
    write_output(
        &out,
        &emit_report(&report, format, &meta("design", &config)),
    )?;
    Ok(Outcome { written: vec![out] })
}

/// Fixed-width table of suite results.
pub fn format_validation(reports: &[SuiteReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(
            s,
            "{status}  {:<34} cases={:<6} max_dev={:.3e} bound={:.0e} time={:.2}s",
            r.name,
            r.cases,
            r.max_deviation,
            r.bound,
            r.elapsed.as_secs_f64()
        )
        .unwrap();
        if !r.passed() {
            writeln!(s, "      worst: {}", r.worst_case).unwrap();
            for e in r.errors.iter().take(5) {
                writeln!(s, "      error: {e}").unwrap();
            }
        }
    }
    s
}

fn run_validate(args: &ValidateArgs) -> Result<Outcome, CliError> {
    let reports = with_threads(args.threads, || run_all(args.seed))?;
    let text = format_validation(&reports);
    print!("{text}");
    let mut outcome = Outcome::default();
    if let Some(out) = &args.out {
        write_output(out, text.as_bytes())?;
        outcome.written.push(out.clone());
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name.to_string())
        .collect();
    if failed.is_empty() {
        Ok(outcome)
    } else {
        Err(CliError::ValidationFailed { failed })
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.verb {
        Verb::CutX(a) => run_sweep("cut-x", Axis::Transverse, a),
        Verb::CutZ(a) => run_sweep("cut-z", Axis::Depth, a),
        Verb::Map(a) => run_map(a),
        Verb::Design(a) => run_design(a),
        Verb::Validate(a) => run_validate(a),
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let verb = cli.verb.name();
    match run(&cli) {
        Ok(outcome) => {
            for p in &outcome.written {
                if p != Path::new("-") {
                    eprintln!("wrote {}", p.display());
                }
            }
            0
        }
        Err(e) => {
            eprintln!("beamfocus {verb}: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_flag_values() {
        assert_eq!(parse_threads("auto"), Ok(Threads::Auto));
        assert_eq!(parse_threads("4"), Ok(Threads::Count(4)));
        assert!(parse_threads("0").is_err());
        assert!(parse_threads("many").is_err());
    }

    #[test]
    fn default_names_follow_the_config_stem() {
        assert_eq!(
            default_output(Path::new("configs/fig3a.toml"), "cut-x", "csv"),
            PathBuf::from("fig3a.cut-x.csv")
        );
        assert_eq!(
            sidecar_path(Path::new("out/a.csv")),
            PathBuf::from("out/a.csv.warnings.txt")
        );
    }

    #[test]
    fn usage_errors_exit_with_one() {
        assert_eq!(main_with_args(["beamfocus", "frobnicate"]), 1);
        assert_eq!(main_with_args(["beamfocus", "cut-x"]), 1);
        assert_eq!(
            main_with_args(["beamfocus", "cut-x", "--config", "x.toml", "--threads", "0"]),
            1
        );
    }

    #[test]
    fn missing_config_exits_with_two() {
        assert_eq!(
            main_with_args(["beamfocus", "design", "--config", "/nonexistent/cfg.toml"]),
            2
        );
    }
}
