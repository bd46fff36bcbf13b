//! The coupled Monte Carlo estimator: subordinator path and walk-on-spheres
//! path advanced together on the grid t_i = iΔt, classified by whichever
//! stop comes first, with a right-point quadrature of the source along the
//! way.
//!
//! Per step i the trajectory draws the subordinator increment, then the
//! jump direction, then the jump-radius variate (β = 1 skips the first,
//! α = 2 the last), advances both coordinates, accumulates Δt·f(t − Y_i, X_i),
//! and stops on the first index where either X_i leaves the domain (spatial,
//! payoff g) or Y_i reaches t (temporal, payoff u₀). A grid index triggering
//! both counts as spatial. Time arguments of f and g clamp at zero at the
//! stopping index.
//!
//! Trajectory j is a pure function of (master_seed, stream_index = j), so
//! any number of workers may fill the contribution buffer in any order;
//! the reduction runs in fixed index order and is bit-reproducible.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::stable::{increment_scale, sample_stable_unchecked, RngStream};
use crate::wos::{wos_step_in_place, SpatialState, WosParams};

/// Monte Carlo run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Time step Δt of the shared grid.
    pub dt: f64,
    /// Number of trajectories M.
    pub num_paths: usize,
    /// Master seed; trajectory j consumes the ChaCha stream (seed, j).
    pub master_seed: u64,
    /// Per-trajectory step cap; `None` resolves to ceil(20·max(t, 1)/Δt).
    pub max_steps: Option<usize>,
}

impl SolverConfig {
    pub fn new(dt: f64, num_paths: usize, master_seed: u64) -> Self {
        Self { dt, num_paths, master_seed, max_steps: None }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.num_paths == 0 {
            return Err(Error::Config("num_paths must be >= 1".into()));
        }
        Ok(())
    }

    fn resolved_max_steps(&self, t: f64) -> usize {
        self.max_steps
            .unwrap_or_else(|| (20.0 * t.max(1.0) / self.dt).ceil().min(4e9) as usize)
    }
}

/// How a trajectory stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopKind {
    /// The subordinator crossed the evaluation time strictly before any
    /// spatial exit: payoff from the initial datum.
    Temporal,
    /// The walk left the domain at or before the temporal crossing: payoff
    /// from the exterior datum.
    Spatial,
}

/// One simulated path: classification, payoff, and source quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryOutcome {
    pub stop_kind: StopKind,
    /// Grid index k at which the trajectory stopped (k ≥ 1).
    pub stop_index: usize,
    /// u₀ or g term.
    pub payoff: f64,
    /// Δt × Σ_{i=1}^{stop_index} f(t − Y_i, X_i).
    pub quadrature: f64,
    /// payoff + quadrature.
    pub contribution: f64,
}

/// Monte Carlo mean with its sample standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation / √num_paths; 0 for a single path or a
    /// degenerate (constant) sample.
    pub std_error: f64,
    /// Number of contributing trajectories.
    pub num_paths: usize,
    /// Trajectories that failed (step cap or non-finite data) and were
    /// excluded; bounded above by one per mille of the request.
    pub num_failed: usize,
}

/// Precomputed per-run state shared by all trajectories.
struct Engine<'a> {
    problem: &'a Problem,
    t: f64,
    params: WosParams,
    beta: f64,
    scale: f64,
    max_steps: usize,
    master_seed: u64,
    dt: f64,
}

impl<'a> Engine<'a> {
    fn new(problem: &'a Problem, t: f64, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        if !(t > 0.0) || t > problem.horizon {
            return Err(Error::Usage(format!(
                "evaluation time must satisfy 0 < t <= {}, got {t}",
                problem.horizon
            )));
        }
        let params = WosParams::new(problem.orders.alpha, problem.domain.dim(), config.dt)?;
        let beta = problem.orders.beta;
        let scale = if beta == 1.0 { 0.0 } else { increment_scale(beta, config.dt) };
        Ok(Self {
            problem,
            t,
            params,
            beta,
            scale,
            max_steps: config.resolved_max_steps(t),
            master_seed: config.master_seed,
            dt: config.dt,
        })
    }

    fn run(&self, stream_index: u64, state: &mut SpatialState, dir: &mut [f64]) -> Result<TrajectoryOutcome> {
        let mut rng = RngStream::new(self.master_seed, stream_index);
        let mut y = 0.0_f64;
        let mut quad_sum = 0.0_f64;
        let degenerate_clock = self.beta == 1.0;
        for i in 1..=self.max_steps {
            y = if degenerate_clock {
                i as f64 * self.dt
            } else {
                y + self.scale * sample_stable_unchecked(self.beta, &mut rng)
            };
            wos_step_in_place(state, &self.params, &mut rng, dir)?;
            quad_sum += self.problem.source(self.t - y, &state.position);
            let inside = self.problem.domain.contains_fast(&state.position);
            if !inside || y >= self.t {
                let (stop_kind, payoff) = if !inside {
                    (StopKind::Spatial, self.problem.g((self.t - y).max(0.0), &state.position))
                } else {
                    (StopKind::Temporal, self.problem.u0(&state.position))
                };
                let quadrature = self.dt * quad_sum;
                let contribution = payoff + quadrature;
                if !contribution.is_finite() {
                    return Err(Error::Trajectory(format!(
                        "non-finite contribution in stream {stream_index} at step {i}"
                    )));
                }
                return Ok(TrajectoryOutcome { stop_kind, stop_index: i, payoff, quadrature, contribution });
            }
        }
        Err(Error::Trajectory(format!(
            "stream {stream_index} exceeded max_steps = {}",
            self.max_steps
        )))
    }
}

/// Simulate a single trajectory for the given stream index.
pub fn simulate_trajectory(
    problem: &Problem,
    t: f64,
    x: &[f64],
    config: &SolverConfig,
    stream_index: u64,
) -> Result<TrajectoryOutcome> {
    if !problem.domain.contains(x)? {
        return Err(Error::Usage("evaluation point must lie inside the domain".into()));
    }
    let engine = Engine::new(problem, t, config)?;
    let mut state = SpatialState::new(x.to_vec());
    let mut dir = vec![0.0; problem.domain.dim()];
    engine.run(stream_index, &mut state, &mut dir)
}

/// Streaming mean/variance accumulator; exact for constant inputs.
struct Welford {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn new() -> Self {
        Self { count: 0, mean: 0.0, m2: 0.0 }
    }

    fn push(&mut self, v: f64) {
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    fn estimate(&self, num_failed: usize) -> Estimate {
        let std_error = if self.count > 1 {
            (self.m2 / (self.count as f64 - 1.0) / self.count as f64).sqrt()
        } else {
            0.0
        };
        Estimate { mean: self.mean, std_error, num_paths: self.count, num_failed }
    }
}

const FAILURE_FRACTION_LIMIT: f64 = 1e-3;

/// Fill `buf[i]` with the contribution of stream `base + i`; failures become
/// NaN sentinels. Chunked so each worker reuses its scratch state.
fn fill_contributions(engine: &Engine<'_>, x: &[f64], base: u64, buf: &mut [f64]) {
    let dim = x.len();
    buf.par_chunks_mut(64).enumerate().for_each(|(chunk_idx, chunk)| {
        let mut state = SpatialState::new(vec![0.0; dim]);
        let mut dir = vec![0.0; dim];
        let start = chunk_idx as u64 * 64;
        for (k, slot) in chunk.iter_mut().enumerate() {
            state.position.copy_from_slice(x);
            state.step_index = 0;
            *slot = match engine.run(base + start + k as u64, &mut state, &mut dir) {
                Ok(outcome) => outcome.contribution,
                Err(_) => f64::NAN,
            };
        }
    });
}

fn reduce(buf: &[f64], requested: usize) -> Result<Estimate> {
    let mut acc = Welford::new();
    let mut failed = 0usize;
    for &v in buf {
        if v.is_nan() {
            failed += 1;
        } else {
            acc.push(v);
        }
    }
    if failed as f64 >= FAILURE_FRACTION_LIMIT * requested as f64 && failed > 0 {
        return Err(Error::Trajectory(format!(
            "{failed} of {requested} trajectories failed (limit is one per mille)"
        )));
    }
    Ok(acc.estimate(failed))
}

/// Monte Carlo estimate of u(t, x) over `config.num_paths` trajectories
/// with stream indices 0..M−1.
///
/// Deterministic given (master_seed, M, Δt, problem, t, x) for any worker
/// count; rerunning with 2M reuses the first M contributions bit-exactly.
pub fn estimate_point(problem: &Problem, t: f64, x: &[f64], config: &SolverConfig) -> Result<Estimate> {
    if !problem.domain.contains(x)? {
        return Err(Error::Usage("evaluation point must lie inside the domain".into()));
    }
    let engine = Engine::new(problem, t, config)?;
    let mut buf = vec![0.0_f64; config.num_paths];
    fill_contributions(&engine, x, 0, &mut buf);
    reduce(&buf, config.num_paths)
}

/// Independent estimates at several points.
///
/// Point p uses stream indices p·M .. p·M + M − 1, so no two points share
/// randomness and the first point reproduces [`estimate_point`] exactly.
pub fn estimate_field(
    problem: &Problem,
    t: f64,
    points: &[Vec<f64>],
    config: &SolverConfig,
) -> Result<Vec<Estimate>> {
    for (i, x) in points.iter().enumerate() {
        if !problem.domain.contains(x)? {
            return Err(Error::Usage(format!("evaluation point {i} lies outside the domain")));
        }
    }
    let engine = Engine::new(problem, t, config)?;
    let m = config.num_paths;
    points
        .par_iter()
        .enumerate()
        .map(|(p, x)| {
            let mut buf = vec![0.0_f64; m];
            fill_contributions(&engine, x, (p * m) as u64, &mut buf);
            reduce(&buf, m)
        })
        .collect()
}
