//! Command layer of the `lz3` binary.
//!
//! Exit codes: `0` success, `1` usage, configuration or I/O error, `2` solver
//! failure. Files are written to a temporary sibling and renamed into place,
//! so a failed run never leaves a partial output.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{self, RunConfig};
use crate::error::{ConfigError, Error};
use crate::ica::ica_predict;
use crate::propagate::{propagate_nonhermitian_with, StateVector};
use crate::spectrum::{min_gap_reverse_with, min_gap_with};
use crate::sweep::{self, figure_preset, SweepSpec, SweepTable};

pub const THREADS_ENV: &str = "LZ3_THREADS";

#[derive(Debug, Parser)]
#[command(name = "lz3", version, about = "Detuned three-state Landau-Zener simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate from |1⟩ over [−T, T]; writes the trajectory CSV and prints
    /// the final population of |3⟩.
    Propagate(RunArgs),
    /// Minimum gap between the two highest adiabatic energies.
    Gap {
        #[command(flatten)]
        run: RunArgs,
        /// Gap for the reverse transfer |3⟩ → |1⟩ (Δ → −Δ).
        #[arg(long)]
        reverse: bool,
    },
    /// Independent-crossing prediction of the transfer efficiency.
    Ica(RunArgs),
    /// Run a sweep described by a configuration file.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compute a figure preset and write `<name>.csv` into the output
    /// directory.
    Figure {
        name: String,
        /// Output directory (default: current directory).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Solver(_) => 2,
                Error::Config(_) | Error::Io(_) => 1,
            }
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Propagate(args) => {
            let cfg = load_run_config(&args)?;
            let result = propagate_nonhermitian_with(&cfg.params, &StateVector::basis(1), &cfg.solver_options())?;
            let mut csv = String::new();
            csv.push_str("# format=lz3-trajectory\n");
            csv.push_str(&format!("# version={}\n", sweep::VERSION));
            csv.push_str(&format!("# tol={}\n", cfg.tol));
            for key in config::PARAM_KEYS {
                csv.push_str(&format!("# {key}={}\n", config::param_value(&cfg.params, key).expect("canonical key")));
            }
            csv.push_str("t,p1,p2,p3,norm\n");
            for s in &result.trajectory {
                let [p1, p2, p3] = s.populations;
                csv.push_str(&format!("{},{},{},{},{}\n", s.t, p1, p2, p3, s.norm));
            }
            emit(args.out.as_deref().or(cfg.out.as_deref()), &csv, stdout)?;
            let p3 = result.final_state.populations()[2].clamp(0.0, 1.0);
            writeln!(stdout, "{p3:.9}")?;
        }
        Command::Gap { run, reverse } => {
            let cfg = load_run_config(&run)?;
            let opts = cfg.gap_options();
            let g = if reverse { min_gap_reverse_with(&cfg.params, &opts) } else { min_gap_with(&cfg.params, &opts) };
            writeln!(stdout, "G={} t_min={} margin={}", g.gap, g.t_min, g.margin)?;
        }
        Command::Ica(args) => {
            let cfg = load_run_config(&args)?;
            let pred = ica_predict(&cfg.params).map_err(ConfigError::from)?;
            writeln!(stdout, "P3={:.9} xi={} regime={}", pred.p3, pred.xi, pred.regime)?;
        }
        Command::Sweep { run, threads } => {
            let path = run.config.as_ref().ok_or_else(|| ConfigError::Missing("--config".into()))?;
            let text = std::fs::read_to_string(path)?;
            let mut entries = config::parse_entries(&text)?;
            let out_entry = entries.iter().position(|e| e.key == "out").map(|i| entries.remove(i));
            let mut spec = SweepSpec::from_entries(&entries)?;
            if let Some(tol) = run.tol {
                spec.tol = flag_tol(tol)?;
            }
            let table = run_table(&spec, threads)?;
            let out = run.out.or(out_entry.map(|e| PathBuf::from(e.value)));
            emit(out.as_deref(), &table.to_csv(), stdout)?;
        }
        Command::Figure { name, out, tol, threads } => {
            let mut spec = figure_preset(&name)?;
            if let Some(tol) = tol {
                spec.tol = flag_tol(tol)?;
            }
            let dir = out.unwrap_or_else(|| PathBuf::from("."));
            let table = run_table(&spec, threads)?;
            let path = dir.join(format!("{name}.csv"));
            write_atomic(&path, &table.to_csv())?;
            writeln!(stdout, "{}", path.display())?;
        }
    }
    Ok(0)
}

fn load_run_config(args: &RunArgs) -> Result<RunConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(tol) = args.tol {
        cfg.tol = flag_tol(tol)?;
    }
    Ok(cfg)
}

fn flag_tol(tol: f64) -> Result<f64, ConfigError> {
    config::check_tol(tol).map_err(|reason| ConfigError::Value { key: "--tol".into(), value: tol.to_string(), reason })
}

/// `--threads`, else `LZ3_THREADS`, else the rayon default.
pub fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, ConfigError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => Ok(Some(config::parse_usize(THREADS_ENV, v.trim())?)),
        _ => Ok(None),
    }
}

fn run_table(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepTable, Error> {
    spec.validate()?;
    let table = match resolve_threads(threads)? {
        Some(n) => sweep::run_sweep_with_threads(spec, n)?,
        None => sweep::run_sweep(spec)?,
    };
    Ok(table)
}

fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Error> {
    match path {
        Some(p) => write_atomic(p, text),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), Error> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
