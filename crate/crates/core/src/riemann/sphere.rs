//! Sphere helpers: the (θ, φ) chart, great-circle paths and the closed-form
//! sphere world function ½R²θ².

use crate::error::{Error, Result};
use crate::point::{Domain, Point, WorldFunction};

use super::metric::sphere_chart;

pub fn embed(radius: f64, theta: f64, phi: f64) -> [f64; 3] {
    [radius * theta.sin() * phi.cos(), radius * theta.sin() * phi.sin(), radius * theta.cos()]
}

/// (θ, φ) of a non-zero vector, with φ ∈ (−π, π].
pub fn chart_point(x: [f64; 3]) -> [f64; 2] {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    [(x[2] / r).clamp(-1.0, 1.0).acos(), x[1].atan2(x[0])]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Central angle between two chart points.
pub fn central_angle(a: &[f64], b: &[f64]) -> f64 {
    let (u, v) = (embed(1.0, a[0], a[1]), embed(1.0, b[0], b[1]));
    let c = cross(&u, &v);
    dot(&c, &c).sqrt().atan2(dot(&u, &v))
}

/// `samples + 1` chart points along the shorter great-circle arc from `a`
/// to `b` (slerp in the embedding), with φ unwrapped continuously from a.
pub fn great_circle_path(a: &[f64], b: &[f64], samples: usize) -> Vec<Vec<f64>> {
    let (u, v) = (embed(1.0, a[0], a[1]), embed(1.0, b[0], b[1]));
    let omega = central_angle(a, b);
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = i as f64 / samples as f64;
        let (wa, wb) = if omega < 1e-12 { (1.0 - t, t) } else { (((1.0 - t) * omega).sin() / omega.sin(), (t * omega).sin() / omega.sin()) };
        let p = [wa * u[0] + wb * v[0], wa * u[1] + wb * v[1], wa * u[2] + wb * v[2]];
        let mut c = chart_point(p);
        let prev_phi = out.last().map_or(a[1], |q| q[1]);
        c[1] += (2.0 * std::f64::consts::PI) * ((prev_phi - c[1]) / (2.0 * std::f64::consts::PI)).round();
        out.push(c.to_vec());
    }
    out
}

/// Largest |cos θ| along the great-circle arc from a to b; used to keep
/// sampled arcs away from the chart poles.
pub fn arc_max_abs_z(a: &[f64], b: &[f64]) -> f64 {
    great_circle_path(a, b, 64).iter().map(|p| p[0].cos().abs()).fold(0.0, f64::max)
}

/// σ = ½R²ω² with ω the central angle, computed from the embedding.
#[derive(Debug, Clone)]
pub struct AnalyticSphere {
    radius: f64,
    domain: Domain,
}

impl AnalyticSphere {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Validation(format!("sphere radius must be positive, got {radius}")));
        }
        Ok(Self { radius, domain: Domain::Chart { dimension: 2, bounds: Some(sphere_chart()) } })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl WorldFunction for AnalyticSphere {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn sigma(&self, p: &Point, q: &Point) -> Result<f64> {
        let (a, b) = self.domain.coords_pair(p, q)?;
        if a == b {
            return Ok(0.0);
        }
        // Canonical order keeps the cross-product rounding symmetric.
        let (a, b) = if crate::point::lex_cmp(a, b).is_gt() { (b, a) } else { (a, b) };
        let w = central_angle(a, b);
        Ok(0.5 * self.radius * self.radius * w * w)
    }

    fn describe(&self) -> String {
        format!("sphere(R={}, analytic)", self.radius)
    }
}
