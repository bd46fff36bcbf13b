//! Run configuration: TOML file schema, defaults, flag overrides, and
//! validation into ready-to-run objects.
//!
//! Precedence is flags > file > defaults; the resolved configuration is
//! echoed verbatim into metadata sidecars.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, DomainKind, PolarCurve};
use crate::harness::Axis;
use crate::problems::{self, Problem};
use crate::solver::SolverConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemSection {
    /// example1 | example2 | example3 | example4
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    /// Spatial dimension (example1 only; the others are two-dimensional).
    pub dim: usize,
    /// Final time T.
    pub horizon: f64,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self { name: "example1".into(), alpha: 1.3, beta: 0.6, dim: 2, horizon: 1.0 }
    }
}

/// Optional domain record: kind plus numeric parameters. When present it
/// must agree with the chosen problem's canonical domain kind.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DomainSection {
    /// ball | l_shape | polar_star | hyper_rectangle
    pub kind: String,
    pub center: Option<Vec<f64>>,
    pub radius: Option<f64>,
    pub constant: Option<f64>,
    pub sin_terms: Option<Vec<(u32, f64)>>,
    pub cos_terms: Option<Vec<(u32, f64)>>,
    pub lo: Option<Vec<f64>>,
    pub hi: Option<Vec<f64>>,
}

impl Default for DomainSection {
    fn default() -> Self {
        Self {
            kind: "ball".into(),
            center: None,
            radius: None,
            constant: None,
            sin_terms: None,
            cos_terms: None,
            lo: None,
            hi: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub dt: f64,
    pub num_paths: usize,
    pub master_seed: u64,
    pub max_steps: Option<usize>,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self { dt: 1e-3, num_paths: 10_000, master_seed: 42, max_steps: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HarnessSection {
    pub num_eval_points: usize,
    pub eval_seed: u64,
    /// num_paths | dt
    pub sweep_axis: String,
    pub sweep_values: Vec<f64>,
}

impl Default for HarnessSection {
    fn default() -> Self {
        Self {
            num_eval_points: 200,
            eval_seed: 12345,
            sweep_axis: "num_paths".into(),
            sweep_values: vec![100.0, 316.0, 1000.0, 3162.0, 10000.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveSection {
    /// Evaluation time t ∈ (0, T].
    pub time: f64,
    pub points: Vec<Vec<f64>>,
}

impl Default for SolveSection {
    fn default() -> Self {
        Self { time: 1.0, points: vec![vec![0.0, 0.0]] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSection {
    /// Grid resolution per axis over the bounding box (2-D only).
    pub grid: usize,
    pub times: Vec<f64>,
}

impl Default for FieldSection {
    fn default() -> Self {
        Self { grid: 50, times: vec![0.5] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

/// The full on-disk configuration.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub problem: ProblemSection,
    pub domain: Option<DomainSection>,
    pub solver: SolverSection,
    pub harness: HarnessSection,
    pub solve: SolveSection,
    pub field: FieldSection,
    pub output: OutputSection,
}

impl FileConfig {
    /// Parse a TOML file; syntax and unknown-field errors carry the line
    /// and field name from the TOML parser.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            Error::Config(format!("config parse failed: {}", first_line(&e.to_string())))
        })
    }
}

fn first_line(s: &str) -> String {
    // TOML errors are multi-line ASCII art; keep the informative lines.
    s.lines()
        .filter(|l| !l.trim().is_empty())
        .take(3)
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Flag overrides (precedence above the file).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

/// A validated, ready-to-run configuration.
#[derive(Debug)]
pub struct RunConfig {
    /// Normalized file config after overrides; serialized into metadata.
    pub file: FileConfig,
    pub problem: Problem,
    pub solver: SolverConfig,
    pub sweep_axis: Axis,
    pub workers: usize,
    pub out_dir: PathBuf,
}

pub fn resolve(mut file: FileConfig, overrides: &Overrides) -> Result<RunConfig> {
    if let Some(seed) = overrides.seed {
        file.solver.master_seed = seed;
    }
    if let Some(out) = &overrides.out {
        file.output.dir = out.clone();
    }

    let p = &file.problem;
    if !(p.horizon > 0.0) || !p.horizon.is_finite() {
        return Err(Error::Config(format!(
            "problem.horizon: must be positive and finite, got {}",
            p.horizon
        )));
    }
    let problem = build_problem(&file)?;

    if !(file.solver.dt > 0.0) || !file.solver.dt.is_finite() {
        return Err(Error::Config(format!("solver.dt: must be positive, got {}", file.solver.dt)));
    }
    if file.solver.num_paths == 0 {
        return Err(Error::Config("solver.num_paths: must be >= 1".into()));
    }
    let mut solver = SolverConfig::new(file.solver.dt, file.solver.num_paths, file.solver.master_seed);
    solver.max_steps = file.solver.max_steps;

    let sweep_axis = match file.harness.sweep_axis.as_str() {
        "num_paths" => Axis::NumPaths,
        "dt" => Axis::Dt,
        other => {
            return Err(Error::Config(format!(
                "harness.sweep_axis: expected num_paths | dt, got '{other}'"
            )))
        }
    };
    if file.harness.num_eval_points == 0 {
        return Err(Error::Config("harness.num_eval_points: must be >= 1".into()));
    }

    if !(file.solve.time > 0.0) || file.solve.time > p.horizon {
        return Err(Error::Config(format!(
            "solve.time: must lie in (0, horizon = {}], got {}",
            p.horizon, file.solve.time
        )));
    }
    for (i, pt) in file.solve.points.iter().enumerate() {
        if pt.len() != problem.domain.dim() {
            return Err(Error::Config(format!(
                "solve.points[{i}]: dimension {} does not match problem dimension {}",
                pt.len(),
                problem.domain.dim()
            )));
        }
    }
    for (i, t) in file.field.times.iter().enumerate() {
        if !(*t > 0.0) || *t > p.horizon {
            return Err(Error::Config(format!(
                "field.times[{i}]: must lie in (0, horizon = {}], got {t}",
                p.horizon
            )));
        }
    }

    let workers = overrides
        .workers
        .or_else(|| {
            std::env::var("FRACKAC_WORKERS").ok().and_then(|v| v.parse::<usize>().ok())
        })
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
        })
        .max(1);

    let out_dir = file.output.dir.clone();
    Ok(RunConfig { file, problem, solver, sweep_axis, workers, out_dir })
}

fn build_problem(file: &FileConfig) -> Result<Problem> {
    let p = &file.problem;
    if matches!(p.name.as_str(), "example2" | "example3" | "example4") && p.dim != 2 {
        return Err(Error::Config(format!(
            "problem.dim: {} requires dim = 2, got {}",
            p.name, p.dim
        )));
    }
    let problem = problems::by_name(&p.name, p.alpha, p.beta, p.dim, p.horizon)
        .map_err(|e| Error::Config(format!("problem: {e}")))?;

    // An explicit [domain] record must describe the problem's canonical
    // domain; example4 may reshape the star boundary.
    if let Some(d) = &file.domain {
        let expected_kind = match p.name.as_str() {
            "example1" | "example2" => "ball",
            "example3" => "l_shape",
            "example4" => "polar_star",
            _ => unreachable!(),
        };
        if d.kind != expected_kind {
            return Err(Error::Config(format!(
                "domain.kind: {} requires '{expected_kind}', got '{}'",
                p.name, d.kind
            )));
        }
        match d.kind.as_str() {
            "ball" => {
                if let Some(r) = d.radius {
                    if (r - 1.0).abs() > 1e-12 {
                        return Err(Error::Config(format!(
                            "domain.radius: {} is posed on the unit ball, got radius {r}",
                            p.name
                        )));
                    }
                }
                if let Some(c) = &d.center {
                    if c.len() != p.dim || c.iter().any(|v| *v != 0.0) {
                        return Err(Error::Config(format!(
                            "domain.center: {} is posed on the origin-centered ball",
                            p.name
                        )));
                    }
                }
            }
            "polar_star" => {
                let curve = PolarCurve {
                    constant: d.constant.unwrap_or(1.0),
                    sin_terms: d.sin_terms.clone().unwrap_or_else(|| vec![(6, 0.9)]),
                    cos_terms: d.cos_terms.clone().unwrap_or_else(|| vec![(10, 0.1)]),
                };
                let domain = Domain::polar_star(curve)
                    .map_err(|e| Error::Config(format!("domain: {e}")))?;
                // Rebuild example4 on the reshaped star.
                let mut rebuilt = problems::example4(p.alpha, p.beta, p.horizon)?;
                rebuilt = Problem::from_data(
                    rebuilt.name().to_string(),
                    rebuilt.orders,
                    domain,
                    p.horizon,
                    {
                        let r = rebuilt.clone();
                        move |x: &[f64]| r.u0(x)
                    },
                    {
                        let r = rebuilt.clone();
                        move |t: f64, x: &[f64]| r.g(t, x)
                    },
                    {
                        let r = rebuilt.clone();
                        move |t: f64, x: &[f64]| r.source(t, x)
                    },
                    None,
                )?;
                return Ok(rebuilt);
            }
            _ => {}
        }
    }
    Ok(problem)
}

/// Kind tag of a domain, for metadata echoes.
pub fn domain_kind_name(domain: &Domain) -> &'static str {
    match domain.kind() {
        DomainKind::Ball { .. } => "ball",
        DomainKind::LShape => "l_shape",
        DomainKind::PolarStar { .. } => "polar_star",
        DomainKind::HyperRectangle { .. } => "hyper_rectangle",
    }
}
