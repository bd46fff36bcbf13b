//! Experiment engine: L² error against manufactured solutions and
//! convergence sweeps in the path count or the time step, with a log-log
//! slope fit.
//!
//! Evaluation points are drawn with a seed of their own so that sweeps in M
//! vary only the estimator noise, never the point set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::solver::{estimate_field, Estimate, SolverConfig};
use crate::stable::RngStream;

/// Echo of everything that determines a measurement, for metadata sidecars.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub problem: String,
    pub alpha: f64,
    pub beta: f64,
    pub dim: usize,
    pub horizon: f64,
    pub eval_time: f64,
    pub dt: f64,
    pub num_paths: usize,
    pub master_seed: u64,
    pub eval_seed: u64,
    pub num_eval_points: usize,
}

/// One evaluation point with its exact value and estimate.
#[derive(Debug, Clone)]
pub struct PerPointRecord {
    pub point: Vec<f64>,
    pub exact: f64,
    pub estimate: f64,
    pub std_error: f64,
}

/// L² error measurement over a random point cloud.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub l2_error: f64,
    pub num_eval_points: usize,
    pub per_point: Vec<PerPointRecord>,
    pub echo: ConfigEcho,
}

/// Discrete L² error √(|Ω|/N_s Σ (exact − estimate)²), reduced in fixed
/// point order.
pub fn l2_error_from_records(volume: f64, records: &[PerPointRecord]) -> f64 {
    let n = records.len() as f64;
    let sum: f64 = records
        .iter()
        .map(|r| {
            let d = r.exact - r.estimate;
            d * d
        })
        .sum();
    (volume / n * sum).sqrt()
}

fn echo_for(problem: &Problem, t: f64, config: &SolverConfig, eval_seed: u64, n_pts: usize) -> ConfigEcho {
    ConfigEcho {
        problem: problem.name().to_string(),
        alpha: problem.orders.alpha,
        beta: problem.orders.beta,
        dim: problem.domain.dim(),
        horizon: problem.horizon,
        eval_time: t,
        dt: config.dt,
        num_paths: config.num_paths,
        master_seed: config.master_seed,
        eval_seed,
        num_eval_points: n_pts,
    }
}

/// Measure the L² error of the estimator against the exact solution at time
/// t over `num_eval_points` uniform interior points drawn from `eval_seed`.
pub fn measure_l2_error(
    problem: &Problem,
    t: f64,
    config: &SolverConfig,
    num_eval_points: usize,
    eval_seed: u64,
) -> Result<ErrorReport> {
    if !problem.has_exact() {
        return Err(Error::Usage(format!(
            "problem {} has no exact solution to measure against",
            problem.name()
        )));
    }
    let mut rng = RngStream::new(eval_seed, 0);
    let points = problem.domain.sample_interior_points(num_eval_points, &mut rng)?;
    let estimates = estimate_field(problem, t, &points, config)?;
    report_from_estimates(problem, t, config, eval_seed, points, &estimates)
}

/// Assemble a report from externally produced estimates (the estimator can
/// be swapped out in tests).
pub fn report_from_estimates(
    problem: &Problem,
    t: f64,
    config: &SolverConfig,
    eval_seed: u64,
    points: Vec<Vec<f64>>,
    estimates: &[Estimate],
) -> Result<ErrorReport> {
    let mut per_point = Vec::with_capacity(points.len());
    for (x, est) in points.into_iter().zip(estimates) {
        let exact = problem.exact(t, &x)?;
        per_point.push(PerPointRecord {
            point: x,
            exact,
            estimate: est.mean,
            std_error: est.std_error,
        });
    }
    let l2_error = l2_error_from_records(problem.domain.volume(), &per_point);
    let echo = echo_for(problem, t, config, eval_seed, per_point.len());
    Ok(ErrorReport { l2_error, num_eval_points: per_point.len(), per_point, echo })
}

/// Sweep axis: path count M or time step Δt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    NumPaths,
    Dt,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::NumPaths => write!(f, "num_paths"),
            Axis::Dt => write!(f, "dt"),
        }
    }
}

/// Convergence study: (axis value, L² error) rows plus a fitted log-log
/// slope with its least-squares standard error.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    pub axis: Axis,
    pub rows: Vec<(f64, f64)>,
    pub fitted_slope: f64,
    pub slope_stderr: f64,
}

/// Ordinary least squares y = a + s·x; returns (s, stderr of s).
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    if n < 3 || ys.len() != n {
        return Err(Error::Analysis(format!("slope fit needs >= 3 points, got {n}")));
    }
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::Analysis("slope fit: degenerate abscissa".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let mut ssr = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let r = y - (intercept + slope * x);
        ssr += r * r;
    }
    let stderr = if n > 2 { (ssr / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok((slope, stderr))
}

/// Run a convergence sweep: hold everything in `base_config` fixed except
/// the chosen axis, measure the L² error per value, and fit the log-log
/// slope. Values must have at least 3 entries spanning at least a decade.
pub fn sweep(
    problem: &Problem,
    t: f64,
    base_config: &SolverConfig,
    axis: Axis,
    values: &[f64],
    num_eval_points: usize,
    eval_seed: u64,
) -> Result<ConvergenceTable> {
    if values.len() < 3 {
        return Err(Error::Usage(format!(
            "sweep needs at least 3 axis values, got {}",
            values.len()
        )));
    }
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(min > 0.0) || max / min < 10.0 * (1.0 - 1e-12) {
        return Err(Error::Usage(format!(
            "sweep values must be positive and span at least one decade (got {min}..{max})"
        )));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut rows = Vec::with_capacity(sorted.len());
    for &v in &sorted {
        let mut config = base_config.clone();
        match axis {
            Axis::NumPaths => config.num_paths = v.round() as usize,
            Axis::Dt => config.dt = v,
        }
        let report = measure_l2_error(problem, t, &config, num_eval_points, eval_seed)?;
        rows.push((v, report.l2_error));
    }
    let fit: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(_, e)| e.is_finite() && *e > 0.0)
        .map(|&(v, e)| (v.ln(), e.ln()))
        .collect();
    if fit.len() < 3 {
        return Err(Error::Analysis(format!(
            "sweep produced only {} finite errors; cannot fit a slope",
            fit.len()
        )));
    }
    let xs: Vec<f64> = fit.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = fit.iter().map(|p| p.1).collect();
    let (fitted_slope, slope_stderr) = fit_line(&xs, &ys)?;
    Ok(ConvergenceTable { axis, rows, fitted_slope, slope_stderr })
}

/// CSV for an error report: point coordinates, exact value, estimate, and
/// standard error, one row per evaluation point. Floats print in shortest
/// round-trip form so outputs are byte-stable.
pub fn error_report_csv(report: &ErrorReport) -> String {
    let dim = report.per_point.first().map_or(0, |r| r.point.len());
    let mut out = String::new();
    for i in 0..dim {
        out.push_str(&format!("x{i},"));
    }
    out.push_str("exact,estimate,std_error\n");
    for r in &report.per_point {
        for c in &r.point {
            out.push_str(&format!("{c},"));
        }
        out.push_str(&format!("{},{},{}\n", r.exact, r.estimate, r.std_error));
    }
    out
}

/// CSV for a convergence table: axis value and L² error per row.
pub fn convergence_csv(table: &ConvergenceTable) -> String {
    let mut out = String::from(match table.axis {
        Axis::NumPaths => "num_paths,l2_error\n",
        Axis::Dt => "dt,l2_error\n",
    });
    for (v, e) in &table.rows {
        out.push_str(&format!("{v},{e}\n"));
    }
    out
}
