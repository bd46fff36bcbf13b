//! Monte Carlo solver for space-time fractional diffusion problems on
//! bounded domains: a Caputo derivative of order β ∈ (0, 1] in time and an
//! integral fractional Laplacian of order α ∈ (0, 2] in space, with data
//! prescribed on the whole exterior of the domain.
//!
//! The estimator couples two samplers on a shared time grid: a one-sided
//! β-stable subordinator path that carries the fractional clock, and a
//! walk-on-spheres jump process for the symmetric α-stable motion. Each
//! trajectory is classified by whichever happens first — the subordinator
//! crossing the evaluation time (payoff from the initial data) or the walk
//! leaving the domain (payoff from the exterior data) — plus a right-point
//! quadrature of the source along the path. Averaging over independent
//! trajectories yields the point value together with its standard error.
//!
//! Crate layout follows the pipeline: [`specfun`] (special-function kernel),
//! [`stable`] (subordinator sampling), [`wos`] (spatial stepping),
//! [`geometry`] (domains), [`problems`] (benchmark problems), [`solver`]
//! (the estimator), [`harness`] (error measurement and convergence sweeps),
//! and [`cli`]/[`config`] (the command-line front end).

pub mod error;
pub mod specfun;
pub mod stable;
pub mod wos;
pub mod geometry;
pub mod problems;
pub mod solver;
pub mod harness;
pub mod config;
pub mod cli;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
