//! Bounded spatial domains: membership tests, volumes, bounding data, and
//! uniform interior sampling.
//!
//! Boundary points classify as *outside* (the exterior condition lives on
//! the closed complement, and for α < 2 the walk exits by a jump into the
//! open exterior almost surely, so the convention only matters on a null
//! set and keeps tests deterministic).

use crate::error::{Error, Result};
use crate::stable::RngStream;

/// Star-shaped polar boundary R(θ) = c₀ + Σ aₖ sin(kθ) + Σ bₖ cos(kθ).
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCurve {
    pub constant: f64,
    /// (frequency, amplitude) sine terms.
    pub sin_terms: Vec<(u32, f64)>,
    /// (frequency, amplitude) cosine terms.
    pub cos_terms: Vec<(u32, f64)>,
}

impl PolarCurve {
    /// The hexagonal hailstone boundary R(θ) = 1 + 0.9 sin(6θ) + 0.1 cos(10θ).
    pub fn hailstone() -> Self {
        Self { constant: 1.0, sin_terms: vec![(6, 0.9)], cos_terms: vec![(10, 0.1)] }
    }

    pub fn radius_at(&self, theta: f64) -> f64 {
        let mut r = self.constant;
        for &(k, a) in &self.sin_terms {
            r += a * (k as f64 * theta).sin();
        }
        for &(k, b) in &self.cos_terms {
            r += b * (k as f64 * theta).cos();
        }
        r
    }

    fn max_frequency(&self) -> u32 {
        self.sin_terms
            .iter()
            .chain(self.cos_terms.iter())
            .map(|&(k, _)| k)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    /// Open ball in ℝⁿ.
    Ball { center: Vec<f64>, radius: f64 },
    /// (−1, 1)² minus the closed quadrant [0, 1]².
    LShape,
    /// Star-shaped region |x| < R(θ) in the plane.
    PolarStar { curve: PolarCurve },
    /// Open axis-aligned box Π (lo_i, hi_i).
    HyperRectangle { lo: Vec<f64>, hi: Vec<f64> },
}

/// Bounded domain Ω with membership test, volume, and bounding data.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    dim: usize,
    volume: f64,
    centroid: Vec<f64>,
    bounding_radius: f64,
    bbox_lo: Vec<f64>,
    bbox_hi: Vec<f64>,
}

impl Domain {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = center.len();
        if dim < 2 {
            return Err(Error::Usage(format!("ball: dimension must be >= 2, got {dim}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Usage(format!("ball: radius must be positive, got {radius}")));
        }
        let volume = ball_volume(dim, radius)?;
        let bbox_lo = center.iter().map(|c| c - radius).collect();
        let bbox_hi = center.iter().map(|c| c + radius).collect();
        Ok(Self {
            kind: DomainKind::Ball { center: center.clone(), radius },
            dim,
            volume,
            centroid: center,
            bounding_radius: radius,
            bbox_lo,
            bbox_hi,
        })
    }

    pub fn unit_ball(dim: usize) -> Result<Self> {
        Self::ball(vec![0.0; dim], 1.0)
    }

    pub fn l_shape() -> Self {
        // Three unit squares; centroid by symmetry, farthest corner (1, −1).
        let centroid = vec![-1.0 / 6.0, -1.0 / 6.0];
        let bounding_radius = (74.0_f64).sqrt() / 6.0;
        Self {
            kind: DomainKind::LShape,
            dim: 2,
            volume: 3.0,
            centroid,
            bounding_radius,
            bbox_lo: vec![-1.0, -1.0],
            bbox_hi: vec![1.0, 1.0],
        }
    }

    pub fn polar_star(curve: PolarCurve) -> Result<Self> {
        // Trapezoid rule is exact for trigonometric polynomials once the
        // node count clears the highest harmonic of R².
        let nodes = (8 * (curve.max_frequency() as usize + 1)).max(64);
        let mut vol = 0.0;
        let mut r_max: f64 = 0.0;
        let mut r_min = f64::INFINITY;
        for i in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / nodes as f64;
            let r = curve.radius_at(theta);
            r_min = r_min.min(r);
            r_max = r_max.max(r);
            vol += 0.5 * r * r;
        }
        vol *= 2.0 * std::f64::consts::PI / nodes as f64;
        // The trapezoid scan can miss the true extremum between nodes; pad
        // the bound by a fine scan.
        for i in 0..16384 {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / 16384.0;
            let r = curve.radius_at(theta);
            r_min = r_min.min(r);
            r_max = r_max.max(r);
        }
        if !(r_min > 0.0) {
            return Err(Error::Usage(format!(
                "polar_star: boundary radius must stay positive, min R = {r_min}"
            )));
        }
        Ok(Self {
            kind: DomainKind::PolarStar { curve },
            dim: 2,
            volume: vol,
            centroid: vec![0.0, 0.0],
            bounding_radius: r_max,
            bbox_lo: vec![-r_max, -r_max],
            bbox_hi: vec![r_max, r_max],
        })
    }

    pub fn hyper_rectangle(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.len() < 2 {
            return Err(Error::Usage("hyper_rectangle: bounds must share a dimension >= 2".into()));
        }
        let mut volume = 1.0;
        for (l, h) in lo.iter().zip(hi.iter()) {
            if !(h > l) {
                return Err(Error::Usage(format!("hyper_rectangle: empty side [{l}, {h}]")));
            }
            volume *= h - l;
        }
        let centroid: Vec<f64> = lo.iter().zip(hi.iter()).map(|(l, h)| 0.5 * (l + h)).collect();
        let bounding_radius = lo
            .iter()
            .zip(hi.iter())
            .map(|(l, h)| 0.25 * (h - l) * (h - l))
            .sum::<f64>()
            .sqrt();
        Ok(Self {
            kind: DomainKind::HyperRectangle { lo: lo.clone(), hi: hi.clone() },
            dim: lo.len(),
            volume,
            centroid,
            bounding_radius,
            bbox_lo: lo,
            bbox_hi: hi,
        })
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn centroid(&self) -> &[f64] {
        &self.centroid
    }

    pub fn bounding_radius(&self) -> f64 {
        self.bounding_radius
    }

    pub fn bounding_box(&self) -> (&[f64], &[f64]) {
        (&self.bbox_lo, &self.bbox_hi)
    }

    /// True iff x lies in the open set Ω.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::Usage(format!(
                "contains: point dimension {} does not match domain dimension {}",
                x.len(),
                self.dim
            )));
        }
        Ok(self.contains_fast(x))
    }

    #[inline]
    pub(crate) fn contains_fast(&self, x: &[f64]) -> bool {
        debug_assert_eq!(x.len(), self.dim);
        match &self.kind {
            DomainKind::Ball { center, radius } => {
                let mut d2 = 0.0;
                for (xi, ci) in x.iter().zip(center.iter()) {
                    let d = xi - ci;
                    d2 += d * d;
                }
                d2 < radius * radius
            }
            DomainKind::LShape => {
                let inside_square = x[0] > -1.0 && x[0] < 1.0 && x[1] > -1.0 && x[1] < 1.0;
                inside_square && !(x[0] >= 0.0 && x[1] >= 0.0)
            }
            DomainKind::PolarStar { curve } => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                if r2 == 0.0 {
                    return true;
                }
                let theta = x[1].atan2(x[0]);
                let boundary = curve.radius_at(theta);
                boundary > 0.0 && r2 < boundary * boundary
            }
            DomainKind::HyperRectangle { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .all(|(xi, (l, h))| xi > l && xi < h),
        }
    }

    /// `count` i.i.d. uniform interior points.
    ///
    /// Balls sample directly (direction × radius ∼ U^{1/n}); rejection from
    /// the bounding box is hopeless already around n ≈ 10. Other kinds use
    /// rejection and report a configuration error if the acceptance rate
    /// collapses below 1e-4.
    pub fn sample_interior_points(&self, count: usize, rng: &mut RngStream) -> Result<Vec<Vec<f64>>> {
        if count == 0 {
            return Err(Error::Usage("sample_interior_points: count must be >= 1".into()));
        }
        let mut out = Vec::with_capacity(count);
        match &self.kind {
            DomainKind::Ball { center, radius } => {
                let mut dir = vec![0.0; self.dim];
                for _ in 0..count {
                    crate::wos::sample_unit_direction_into(rng, &mut dir);
                    let u: f64 = rng.open01();
                    let r = radius * u.powf(1.0 / self.dim as f64);
                    out.push(
                        center.iter().zip(dir.iter()).map(|(c, d)| c + r * d).collect::<Vec<f64>>(),
                    );
                }
            }
            _ => {
                let mut attempts = 0usize;
                let mut x = vec![0.0; self.dim];
                while out.len() < count {
                    attempts += 1;
                    for i in 0..self.dim {
                        let u: f64 = rng.open01();
                        x[i] = self.bbox_lo[i] + u * (self.bbox_hi[i] - self.bbox_lo[i]);
                    }
                    if self.contains_fast(&x) {
                        out.push(x.clone());
                    }
                    if attempts >= 100_000 && (out.len() as f64) < 1e-4 * attempts as f64 {
                        return Err(Error::Config(format!(
                            "sample_interior_points: acceptance rate below 1e-4 ({} of {attempts})",
                            out.len()
                        )));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Volume of the n-ball of the given radius, in log scale internally so
/// high dimensions do not overflow the gamma function.
fn ball_volume(dim: usize, radius: f64) -> Result<f64> {
    let n = dim as f64;
    let ln_v = 0.5 * n * std::f64::consts::PI.ln() - crate::specfun::ln_gamma(0.5 * n + 1.0)?
        + n * radius.ln();
    Ok(ln_v.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn ball_membership_and_volume() {
        let d = Domain::unit_ball(2).unwrap();
        assert!(d.contains(&[0.0, 0.0]).unwrap());
        assert!(d.contains(&[0.99, 0.0]).unwrap());
        assert!(!d.contains(&[1.0, 0.0]).unwrap()); // boundary is outside
        assert!(!d.contains(&[0.8, 0.8]).unwrap());
        assert!((d.volume() - PI).abs() <= 1e-12);
        assert!(d.contains(&[0.0]).is_err()); // dimension mismatch

        let d3 = Domain::unit_ball(3).unwrap();
        assert!((d3.volume() - 4.0 * PI / 3.0).abs() <= 1e-12);

        // n = 100: volume π^50/Γ(51) (mpmath).
        let d100 = Domain::unit_ball(100).unwrap();
        let want = 2.3682021018828339613e-40;
        assert!(((d100.volume() - want) / want).abs() <= 1e-11);
    }

    #[test]
    fn l_shape_membership() {
        let d = Domain::l_shape();
        assert!(!d.contains(&[0.5, 0.5]).unwrap()); // excluded quadrant
        assert!(d.contains(&[-0.5, 0.5]).unwrap());
        assert!(d.contains(&[-0.5, -0.5]).unwrap());
        assert!(d.contains(&[0.5, -0.5]).unwrap());
        assert!(!d.contains(&[1.5, 0.0]).unwrap());
        assert!(!d.contains(&[0.0, 0.5]).unwrap()); // re-entrant edge is boundary
        assert!(!d.contains(&[1.0, -0.5]).unwrap()); // outer edge is boundary
        assert_eq!(d.volume(), 3.0);
        // Every contained point lies within bounding_radius of the centroid.
        let mut rng = RngStream::new(1, 0);
        for p in d.sample_interior_points(2000, &mut rng).unwrap() {
            let dist: f64 = p
                .iter()
                .zip(d.centroid())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(dist <= d.bounding_radius() + 1e-12);
        }
    }

    #[test]
    fn polar_star_membership_and_boundary() {
        let d = Domain::polar_star(PolarCurve::hailstone()).unwrap();
        // R(0) = 1 + 0.9 sin 0 + 0.1 cos 0 = 1.1 > 1.05.
        assert!(d.contains(&[1.05, 0.0]).unwrap());
        assert!(d.contains(&[0.0, 0.0]).unwrap());
        // Boundary consistency at 1000 angles.
        let curve = PolarCurve::hailstone();
        for i in 0..1000 {
            let theta = 2.0 * PI * i as f64 / 1000.0;
            let r = curve.radius_at(theta);
            let inside = [(r - 1e-9) * theta.cos(), (r - 1e-9) * theta.sin()];
            let outside = [(r + 1e-9) * theta.cos(), (r + 1e-9) * theta.sin()];
            assert!(d.contains(&inside).unwrap(), "inside probe failed at theta={theta}");
            assert!(!d.contains(&outside).unwrap(), "outside probe failed at theta={theta}");
        }
        // Half ∮ R² dθ for the hailstone curve: π (1 + (0.81 + 0.01)/2).
        let want = PI * 1.41;
        assert!((d.volume() - want).abs() <= 1e-12 * want);
        // A boundary that dips negative is rejected.
        let bad = PolarCurve { constant: 0.5, sin_terms: vec![(3, 1.0)], cos_terms: vec![] };
        assert!(Domain::polar_star(bad).is_err());
    }

    #[test]
    fn hyper_rectangle_membership() {
        let d = Domain::hyper_rectangle(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap();
        assert!(d.contains(&[1.0, 0.0]).unwrap());
        assert!(!d.contains(&[0.0, 0.0]).unwrap());
        assert!(!d.contains(&[2.5, 0.0]).unwrap());
        assert_eq!(d.volume(), 4.0);
        assert!(Domain::hyper_rectangle(vec![0.0, 0.0], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn interior_sampling_statistics() {
        // Disk: all contained; E|x|² = 1/2.
        let d = Domain::unit_ball(2).unwrap();
        let mut rng = RngStream::new(10, 0);
        let pts = d.sample_interior_points(100_000, &mut rng).unwrap();
        let mut mean_r2 = 0.0;
        for p in &pts {
            assert!(d.contains(p).unwrap());
            mean_r2 += p[0] * p[0] + p[1] * p[1];
        }
        mean_r2 /= pts.len() as f64;
        assert!((mean_r2 - 0.5).abs() <= 0.01);

        // L-shape: all contained; the upper-left square carries 1/3 of the mass.
        let l = Domain::l_shape();
        let mut rng = RngStream::new(11, 0);
        let pts = l.sample_interior_points(100_000, &mut rng).unwrap();
        let mut frac = 0.0;
        for p in &pts {
            assert!(l.contains(p).unwrap());
            if p[0] < 0.0 && p[1] > 0.0 {
                frac += 1.0;
            }
        }
        frac /= pts.len() as f64;
        assert!((frac - 1.0 / 3.0).abs() <= 0.01);

        // n = 100 ball: direct sampling; E|x|² = n/(n+2).
        let b = Domain::unit_ball(100).unwrap();
        let mut rng = RngStream::new(12, 0);
        let pts = b.sample_interior_points(10_000, &mut rng).unwrap();
        let mut mean = 0.0;
        for p in &pts {
            assert!(b.contains(p).unwrap());
            mean += p.iter().map(|v| v * v).sum::<f64>();
        }
        mean /= pts.len() as f64;
        assert!((mean - 100.0 / 102.0).abs() <= 0.005, "high-dim radial moment {mean}");
    }

    #[test]
    fn rejection_rate_matches_volume_ratio() {
        // Acceptance fraction of bounding-box samples ≈ |Ω| / |box| within
        // 3σ binomial noise at n = 1e5 (computed through `contains`).
        for d in [Domain::unit_ball(2).unwrap(), Domain::l_shape()] {
            let (lo, hi) = d.bounding_box();
            let box_vol: f64 = lo.iter().zip(hi.iter()).map(|(l, h)| h - l).product();
            let p_true = d.volume() / box_vol;
            let n = 100_000;
            let mut rng = RngStream::new(13, 0);
            let mut acc = 0usize;
            let mut x = vec![0.0; d.dim()];
            for _ in 0..n {
                for i in 0..d.dim() {
                    x[i] = lo[i] + rng.open01() * (hi[i] - lo[i]);
                }
                if d.contains_fast(&x) {
                    acc += 1;
                }
            }
            let p_hat = acc as f64 / n as f64;
            let sigma = (p_true * (1.0 - p_true) / n as f64).sqrt();
            assert!(
                (p_hat - p_true).abs() <= 3.0 * sigma,
                "acceptance {p_hat} vs volume ratio {p_true}"
            );
        }
    }

    #[test]
    fn pathological_rejection_reports_config_error() {
        // A sliver star domain inside a huge bounding box cannot be built
        // directly, so shrink acceptance using a rectangle nested in a box
        // via a custom curve: use a tiny star versus its padded box instead.
        let tiny = PolarCurve { constant: 1.0, sin_terms: vec![], cos_terms: vec![] };
        let mut d = Domain::polar_star(tiny).unwrap();
        // Inflate the bounding box far beyond the unit disk.
        d.bbox_lo = vec![-200.0, -200.0];
        d.bbox_hi = vec![200.0, 200.0];
        let mut rng = RngStream::new(14, 0);
        assert!(matches!(
            d.sample_interior_points(10, &mut rng),
            Err(Error::Config(_))
        ));
    }
}
