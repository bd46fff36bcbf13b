//! Command-line front end: `solve`, `convergence`, and `field` subcommands
//! driven by a TOML configuration file with flag overrides.
//!
//! Every failure exits nonzero after printing a single line of the form
//! `frackac: error[E_CODE]: message`.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use crate::config::{domain_kind_name, resolve, FileConfig, Overrides, RunConfig};
use crate::error::{Error, Result};
use crate::harness;
use crate::solver;

#[derive(Debug, Parser)]
#[command(
    name = "frackac",
    version,
    about = "Monte Carlo solver for space-time fractional diffusion on bounded domains",
    disable_help_subcommand = true
)]
struct Cli {
    /// Path to the TOML run configuration (defaults apply when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override solver.master_seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads (default: FRACKAC_WORKERS or available parallelism).
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Override output.dir.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Print the resolved configuration and exit without running.
    #[arg(long, global = true)]
    dry_run: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate u(t, x) at the configured points and write per-point CSV.
    Solve,
    /// Run a convergence sweep and fit the log-log rate.
    Convergence,
    /// Evaluate the solution on a 2-D grid, one CSV per requested time.
    Field,
}

/// Entry point: returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("invalid arguments").to_string();
            eprintln!("frackac: error[E_USAGE]: {first}");
            return 2;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("frackac: error[E_USAGE]: {e}");
            return 2;
        }
    };
    match try_run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("frackac: error[{}]: {msg}", e.code());
            1
        }
    }
}

fn try_run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => FileConfig::from_path(path)?,
        None => FileConfig::default(),
    };
    let overrides = Overrides { seed: cli.seed, workers: cli.workers, out: cli.out.clone() };
    let run_config = resolve(file, &overrides)?;

    if cli.dry_run {
        let echo = toml::to_string(&run_config.file)
            .map_err(|e| Error::Config(format!("cannot render resolved config: {e}")))?;
        println!("# resolved configuration (workers = {})", run_config.workers);
        print!("{echo}");
        return Ok(());
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run_config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Solve => cmd_solve(&run_config),
        Command::Convergence => cmd_convergence(&run_config),
        Command::Field => cmd_field(&run_config),
    })
}

#[derive(Debug, Serialize)]
struct RunMetadata<'a> {
    command: &'a str,
    workers: usize,
    wall_time_secs: f64,
    domain_kind: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    fitted_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slope_stderr: Option<f64>,
    config: &'a FileConfig,
}

fn write_metadata(
    cfg: &RunConfig,
    command: &str,
    name: &str,
    started: Instant,
    slope: Option<(f64, f64)>,
) -> Result<()> {
    let meta = RunMetadata {
        command,
        workers: cfg.workers,
        wall_time_secs: started.elapsed().as_secs_f64(),
        domain_kind: domain_kind_name(&cfg.problem.domain),
        fitted_slope: slope.map(|s| s.0),
        slope_stderr: slope.map(|s| s.1),
        config: &cfg.file,
    };
    let text = toml::to_string(&meta)
        .map_err(|e| Error::Config(format!("cannot render metadata: {e}")))?;
    std::fs::write(cfg.out_dir.join(name), text)?;
    Ok(())
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    Ok(())
}

fn cmd_solve(cfg: &RunConfig) -> Result<()> {
    let started = Instant::now();
    if cfg.file.solve.points.is_empty() {
        return Err(Error::Config("solve.points: at least one evaluation point required".into()));
    }
    let t = cfg.file.solve.time;
    let estimates = solver::estimate_field(&cfg.problem, t, &cfg.file.solve.points, &cfg.solver)?;
    ensure_out_dir(cfg)?;
    let dim = cfg.problem.domain.dim();
    let mut csv = String::new();
    for i in 0..dim {
        csv.push_str(&format!("x{i},"));
    }
    csv.push_str("estimate,std_error\n");
    for (x, est) in cfg.file.solve.points.iter().zip(&estimates) {
        for c in x {
            csv.push_str(&format!("{c},"));
        }
        csv.push_str(&format!("{},{}\n", est.mean, est.std_error));
    }
    std::fs::write(cfg.out_dir.join("solve.csv"), csv)?;
    write_metadata(cfg, "solve", "solve.meta.toml", started, None)?;
    println!(
        "solve: {} point(s) at t = {t}, output in {}",
        estimates.len(),
        cfg.out_dir.display()
    );
    Ok(())
}

fn cmd_convergence(cfg: &RunConfig) -> Result<()> {
    let started = Instant::now();
    if cfg.file.harness.sweep_values.is_empty() {
        return Err(Error::Config("harness.sweep_values: sweep values required".into()));
    }
    let t = cfg.file.solve.time;
    let table = harness::sweep(
        &cfg.problem,
        t,
        &cfg.solver,
        cfg.sweep_axis,
        &cfg.file.harness.sweep_values,
        cfg.file.harness.num_eval_points,
        cfg.file.harness.eval_seed,
    )?;
    ensure_out_dir(cfg)?;
    std::fs::write(cfg.out_dir.join("convergence.csv"), harness::convergence_csv(&table))?;
    write_metadata(
        cfg,
        "convergence",
        "convergence.meta.toml",
        started,
        Some((table.fitted_slope, table.slope_stderr)),
    )?;
    println!(
        "convergence: axis {} fitted slope {:.4} (stderr {:.4}), output in {}",
        table.axis,
        table.fitted_slope,
        table.slope_stderr,
        cfg.out_dir.display()
    );
    Ok(())
}

fn cmd_field(cfg: &RunConfig) -> Result<()> {
    let started = Instant::now();
    if cfg.problem.domain.dim() != 2 {
        return Err(Error::Config(format!(
            "field export is 2-D only; problem dimension is {}",
            cfg.problem.domain.dim()
        )));
    }
    let grid = cfg.file.field.grid;
    if grid < 2 {
        return Err(Error::Config(format!("field.grid: must be >= 2, got {grid}")));
    }
    if cfg.file.field.times.is_empty() {
        return Err(Error::Config("field.times: at least one time required".into()));
    }
    let (lo, hi) = cfg.problem.domain.bounding_box();
    let mut points = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let x = [
                lo[0] + (hi[0] - lo[0]) * (i as f64 + 0.5) / grid as f64,
                lo[1] + (hi[1] - lo[1]) * (j as f64 + 0.5) / grid as f64,
            ];
            if cfg.problem.domain.contains(&x)? {
                points.push(x.to_vec());
            }
        }
    }
    if points.is_empty() {
        return Err(Error::Config("field grid contains no interior points".into()));
    }
    ensure_out_dir(cfg)?;
    for (k, &t) in cfg.file.field.times.iter().enumerate() {
        let estimates = solver::estimate_field(&cfg.problem, t, &points, &cfg.solver)?;
        let mut csv = String::from("x0,x1,estimate\n");
        for (x, est) in points.iter().zip(&estimates) {
            csv.push_str(&format!("{},{},{}\n", x[0], x[1], est.mean));
        }
        std::fs::write(cfg.out_dir.join(format!("field_t{k:03}.csv")), csv)?;
    }
    write_metadata(cfg, "field", "field.meta.toml", started, None)?;
    println!(
        "field: {} interior grid point(s) x {} time(s), output in {}",
        points.len(),
        cfg.file.field.times.len(),
        cfg.out_dir.display()
    );
    Ok(())
}

/// Expose the axis type for config validation messages.
pub use crate::harness::Axis as SweepAxis;
