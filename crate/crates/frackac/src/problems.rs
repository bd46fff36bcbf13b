//! Problem definitions: fractional orders, initial/exterior/source data,
//! and the four benchmark problems with manufactured exact solutions.
//!
//! Source terms are assembled from closed forms; the gamma, hypergeometric
//! and Mittag-Leffler constants are precomputed once per problem so the
//! per-step evaluations in the trajectory loop stay cheap.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{Domain, PolarCurve};
use crate::specfun;

/// The order pair (α, β): spatial order α ∈ (0, 2], temporal order β ∈ (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOrders {
    pub alpha: f64,
    pub beta: f64,
}

impl FractionalOrders {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::Domain(format!("beta must lie in (0, 1], got {beta}")));
        }
        Ok(Self { alpha, beta })
    }
}

type SpaceFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type SpaceTimeFn = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;

/// An initial/exterior-value problem: data functions u₀, g, f on a bounded
/// domain, with an optional exact solution for error measurement.
#[derive(Clone)]
pub struct Problem {
    pub orders: FractionalOrders,
    pub domain: Domain,
    pub horizon: f64,
    u0: SpaceFn,
    g: SpaceTimeFn,
    f: SpaceTimeFn,
    exact: Option<SpaceTimeFn>,
    name: String,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("orders", &self.orders)
            .field("horizon", &self.horizon)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl Problem {
    /// Assemble a problem from raw data functions.
    pub fn from_data(
        name: impl Into<String>,
        orders: FractionalOrders,
        domain: Domain,
        horizon: f64,
        u0: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
        f: impl Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
        exact: Option<SpaceTimeFn>,
    ) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::Usage(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self {
            orders,
            domain,
            horizon,
            u0: Arc::new(u0),
            g: Arc::new(g),
            f: Arc::new(f),
            exact,
            name: name.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Initial datum u₀(x).
    #[inline]
    pub fn u0(&self, x: &[f64]) -> f64 {
        (self.u0)(x)
    }

    /// Exterior datum g(t, y), y ∈ Ω^c.
    #[inline]
    pub fn g(&self, t: f64, x: &[f64]) -> f64 {
        (self.g)(t, x)
    }

    /// Source f(t, x). Negative times clamp to 0 so the right-point
    /// quadrature stays total at the stopping index.
    #[inline]
    pub fn source(&self, t: f64, x: &[f64]) -> f64 {
        (self.f)(t.max(0.0), x)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact solution u(t, x) when the problem is manufactured.
    pub fn exact(&self, t: f64, x: &[f64]) -> Result<f64> {
        match &self.exact {
            Some(u) => Ok(u(t, x)),
            None => Err(Error::Usage(format!("problem {} has no exact solution", self.name))),
        }
    }

    /// Rescale all data by a constant (payoffs scale linearly with data).
    pub fn scaled(&self, factor: f64) -> Self {
        let u0 = self.u0.clone();
        let g = self.g.clone();
        let f = self.f.clone();
        let exact = self.exact.clone();
        Self {
            orders: self.orders,
            domain: self.domain.clone(),
            horizon: self.horizon,
            u0: Arc::new(move |x| factor * u0(x)),
            g: Arc::new(move |t, x| factor * g(t, x)),
            f: Arc::new(move |t, x| factor * f(t, x)),
            exact: exact.map(|e| -> SpaceTimeFn { Arc::new(move |t, x| factor * e(t, x)) }),
            name: format!("{}*{}", self.name, factor),
        }
    }
}

#[inline]
fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Positive part (1 − |x|²)₊^{α/2}.
#[inline]
fn bump(alpha: f64, q: f64) -> f64 {
    let w = 1.0 - q;
    if w <= 0.0 {
        0.0
    } else {
        w.powf(alpha / 2.0)
    }
}

/// u(t, x) = t^β (1 − |x|²)₊^{α/2} on the unit ball in ℝⁿ, zero exterior
/// datum, manufactured source
/// f = Γ(β+1)(1 − |x|²)₊^{α/2} + t^β 2^α Γ(1+α/2) Γ((n+α)/2) / Γ(n/2).
pub fn example1(alpha: f64, beta: f64, dim: usize, horizon: f64) -> Result<Problem> {
    let orders = FractionalOrders::new(alpha, beta)?;
    let domain = Domain::unit_ball(dim)?;
    let n = dim as f64;
    let gamma_b1 = specfun::gamma(beta + 1.0)?;
    // 2^α Γ(1+α/2) Γ((n+α)/2) / Γ(n/2), in log scale for n = 100.
    let frac_lap_const = (alpha * std::f64::consts::LN_2
        + specfun::ln_gamma(1.0 + alpha / 2.0)?
        + specfun::ln_gamma((n + alpha) / 2.0)?
        - specfun::ln_gamma(n / 2.0)?)
    .exp();
    let exact: SpaceTimeFn = Arc::new(move |t: f64, x: &[f64]| t.powf(beta) * bump(alpha, norm_sq(x)));
    Problem::from_data(
        "example1",
        orders,
        domain,
        horizon,
        |_x| 0.0,
        |_t, _x| 0.0,
        move |t, x| gamma_b1 * bump(alpha, norm_sq(x)) + t.powf(beta) * frac_lap_const,
        Some(exact),
    )
}

/// u(t, x) = E_{β,1}(−t^β)(1 − |x|²)₊^{α/2} on the unit disk, zero exterior
/// datum, u₀ = (1 − |x|²)₊^{α/2}, source
/// f = E_{β,1}(−t^β) [2^α Γ²(1+α/2) − (1 − |x|²)₊^{α/2}].
pub fn example2(alpha: f64, beta: f64, horizon: f64) -> Result<Problem> {
    let orders = FractionalOrders::new(alpha, beta)?;
    let domain = Domain::unit_ball(2)?;
    let ml = specfun::MittagLefflerSeries::new(beta)?;
    let ml2 = ml.clone();
    let g1a = specfun::gamma(1.0 + alpha / 2.0)?;
    let frac_lap_const = 2.0_f64.powf(alpha) * g1a * g1a;
    // E_{β,1}(−t^β); the series argument lies in [−T^β, 0] ⊆ [−1, 0] for
    // horizons up to 1. Larger horizons would need the general evaluator.
    if horizon > 1.0 {
        return Err(Error::Usage(format!(
            "example2: horizon must satisfy T <= 1, got {horizon}"
        )));
    }
    let relax = move |t: f64| ml.eval(-(t.max(0.0).powf(beta))).unwrap_or(f64::NAN);
    let relax2 = move |t: f64| ml2.eval(-(t.max(0.0).powf(beta))).unwrap_or(f64::NAN);
    let exact: SpaceTimeFn = Arc::new(move |t: f64, x: &[f64]| relax2(t) * bump(alpha, norm_sq(x)));
    Problem::from_data(
        "example2",
        orders,
        domain,
        horizon,
        move |x| bump(alpha, norm_sq(x)),
        |_t, _x| 0.0,
        move |t, x| {
            let e = relax(t);
            e * (frac_lap_const - bump(alpha, norm_sq(x)))
        },
        Some(exact),
    )
}

/// u(t, x) = t^a (1 + |x|²)^{−7/2} with a = 1.2 on the L-shaped domain, with
/// the (time-varying, nonzero) exterior datum g = u on Ω^c and source
/// f = Γ(a+1) t^{a−β} / Γ(a+1−β) (1 + |x|²)^{−7/2}
///   + t^a 2^α Γ((α+7)/2) Γ((α+2)/2) / Γ(7/2) ₂F₁((2+α)/2, (7+α)/2; 1; −|x|²).
pub fn example3(alpha: f64, beta: f64, horizon: f64) -> Result<Problem> {
    const A_POWER: f64 = 1.2;
    let orders = FractionalOrders::new(alpha, beta)?;
    let domain = Domain::l_shape();
    let caputo_const = specfun::gamma(A_POWER + 1.0)? / specfun::gamma(A_POWER + 1.0 - beta)?;
    let frac_lap_const = (alpha * std::f64::consts::LN_2
        + specfun::ln_gamma((alpha + 7.0) / 2.0)?
        + specfun::ln_gamma((alpha + 2.0) / 2.0)?
        - specfun::ln_gamma(3.5)?)
    .exp();
    let ha = (2.0 + alpha) / 2.0;
    let hb = (7.0 + alpha) / 2.0;
    let profile = |q: f64| (1.0 + q).powf(-3.5);
    let exact_fn = move |t: f64, x: &[f64]| t.powf(A_POWER) * profile(norm_sq(x));
    let exact: SpaceTimeFn = Arc::new(exact_fn);
    Problem::from_data(
        "example3",
        orders,
        domain,
        horizon,
        |_x| 0.0,
        exact_fn,
        move |t, x| {
            let q = norm_sq(x);
            let hyp = specfun::gauss_2f1(ha, hb, 1.0, -q).unwrap_or(f64::NAN);
            caputo_const * t.powf(A_POWER - beta) * profile(q)
                + frac_lap_const * t.powf(A_POWER) * hyp
        },
        Some(exact),
    )
}

/// Deterministic pseudo-random field on [−2, −1]: a hash of the coordinate
/// bit patterns, so repeated evaluations agree and runs reproduce.
fn rough_field(x: &[f64]) -> f64 {
    fn splitmix64(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E3779B97F4A7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }
    let mut h: u64 = 0x8000_0000_0000_0001;
    for &c in x {
        h = splitmix64(h ^ c.to_bits());
    }
    -2.0 + (h >> 11) as f64 / (1u64 << 53) as f64
}

/// The hexagonal hailstone domain with source
/// f = cos(t)/(1 + 10t²) (cos(π/3 x₁² − x₁x₂) + sin(π/6 x₂² + x₁x₂)),
/// zero exterior datum, and rough initial data uniformly spread in [−2, −1].
/// Qualitative benchmark: no exact solution.
pub fn example4(alpha: f64, beta: f64, horizon: f64) -> Result<Problem> {
    let orders = FractionalOrders::new(alpha, beta)?;
    let domain = Domain::polar_star(PolarCurve::hailstone())?;
    Problem::from_data(
        "example4",
        orders,
        domain,
        horizon,
        rough_field,
        |_t, _x| 0.0,
        |t, x| {
            let time_factor = t.cos() / (1.0 + 10.0 * t * t);
            let s1 = (std::f64::consts::FRAC_PI_3 * x[0] * x[0] - x[0] * x[1]).cos();
            let s2 = (std::f64::consts::PI / 6.0 * x[1] * x[1] + x[0] * x[1]).sin();
            time_factor * (s1 + s2)
        },
        None,
    )
}

/// Build a named example; dim is only honored by example1.
pub fn by_name(name: &str, alpha: f64, beta: f64, dim: usize, horizon: f64) -> Result<Problem> {
    match name {
        "example1" => example1(alpha, beta, dim, horizon),
        "example2" => {
            if dim != 2 {
                return Err(Error::Config(format!("example2 requires dim = 2, got {dim}")));
            }
            example2(alpha, beta, horizon)
        }
        "example3" => {
            if dim != 2 {
                return Err(Error::Config(format!("example3 requires dim = 2, got {dim}")));
            }
            example3(alpha, beta, horizon)
        }
        "example4" => {
            if dim != 2 {
                return Err(Error::Config(format!("example4 requires dim = 2, got {dim}")));
            }
            example4(alpha, beta, horizon)
        }
        other => Err(Error::Config(format!(
            "unknown problem '{other}' (expected example1 | example2 | example3 | example4)"
        ))),
    }
}
