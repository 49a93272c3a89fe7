//! Parallelism of vectors at distinct points: conventional (Levi-Civita)
//! transport along a path, and the world-function condition built from
//! mixed second derivatives of σ, including its collinearity cone.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::metric::{quadratic, MetricField};
use crate::error::{Error, Result};
use crate::point::{Point, WorldFunction};
use crate::solvers::hausdorff;

/// Contravariant components at a chart point.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct TangentVector {
    pub base: Vec<f64>,
    pub components: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: impl Into<Vec<f64>>, components: impl Into<Vec<f64>>) -> Result<Self> {
        let (base, components) = (base.into(), components.into());
        if base.len() != components.len() {
            return Err(Error::Arity { expected: base.len(), found: components.len() });
        }
        Ok(Self { base, components })
    }

    pub fn norm(&self, mf: &MetricField) -> Result<f64> {
        Ok(mf.inner(&self.base, &self.components, &self.components)?.max(0.0).sqrt())
    }
}

/// Default RK4 substeps per path segment.
pub const TRANSPORT_SUBSTEPS: usize = 4;

/// Transports `u` along the piecewise-linear chart path through `path`
/// (which must start at `u.base`) by du^k = −γ^k_ls u^l dx^s.
pub fn transport_conventional(mf: &MetricField, u: &TangentVector, path: &[Vec<f64>]) -> Result<TangentVector> {
    transport_conventional_with(mf, u, path, TRANSPORT_SUBSTEPS)
}

pub fn transport_conventional_with(mf: &MetricField, u: &TangentVector, path: &[Vec<f64>], substeps: usize) -> Result<TangentVector> {
    let n = mf.dimension();
    if u.base.len() != n || u.components.len() != n {
        return Err(Error::Arity { expected: n, found: u.components.len() });
    }
    let Some(start) = path.first() else {
        return Err(Error::Precondition("transport path is empty".into()));
    };
    let offset = start.iter().zip(&u.base).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if offset > 1e-12 * (1.0 + start.iter().map(|v| v.abs()).fold(0.0, f64::max)) {
        return Err(Error::Precondition(format!("path starts at {start:?}, vector lives at {:?}", u.base)));
    }
    let rate = |x: &[f64], v: &[f64], dx: &[f64]| -> Result<Vec<f64>> {
        if !mf.in_chart(x) {
            return Err(Error::ChartExit(x.to_vec()));
        }
        Ok(mf.christoffel(x)?.contract(v, dx).into_iter().map(|a| -a).collect())
    };
    let mut v = u.components.clone();
    for seg in path.windows(2) {
        if seg[1].len() != n {
            return Err(Error::Arity { expected: n, found: seg[1].len() });
        }
        let dx: Vec<f64> = seg[1].iter().zip(&seg[0]).map(|(b, a)| (b - a) / substeps as f64).collect();
        for k in 0..substeps {
            let at = |t: f64| -> Vec<f64> { seg[0].iter().zip(&dx).map(|(a, d)| a + (k as f64 + t) * d).collect() };
            let k1 = rate(&at(0.0), &v, &dx)?;
            let v2: Vec<f64> = v.iter().zip(&k1).map(|(a, b)| a + 0.5 * b).collect();
            let k2 = rate(&at(0.5), &v2, &dx)?;
            let v3: Vec<f64> = v.iter().zip(&k2).map(|(a, b)| a + 0.5 * b).collect();
            let k3 = rate(&at(0.5), &v3, &dx)?;
            let v4: Vec<f64> = v.iter().zip(&k3).map(|(a, b)| a + b).collect();
            let k4 = rate(&at(1.0), &v4, &dx)?;
            for i in 0..n {
                v[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
            }
        }
    }
    TangentVector::new(path.last().expect("non-empty").clone(), v)
}

/// Straight chart path from a to b with `segments` pieces.
pub fn chart_segment(a: &[f64], b: &[f64], segments: usize) -> Vec<Vec<f64>> {
    (0..=segments)
        .map(|i| {
            let t = i as f64 / segments as f64;
            a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect()
        })
        .collect()
}

/// Default step for σ mixed derivatives.
pub const MIXED_STEP: f64 = 1e-4;

/// σ_{i,l'} = ∂²σ(x, x') / ∂x^i ∂x'^l by a four-point central stencil.
pub fn sigma_mixed_derivatives(wf: &dyn WorldFunction, x: &[f64], xp: &[f64]) -> Result<DMatrix<f64>> {
    sigma_mixed_derivatives_with(wf, x, xp, MIXED_STEP)
}

pub fn sigma_mixed_derivatives_with(wf: &dyn WorldFunction, x: &[f64], xp: &[f64], h: f64) -> Result<DMatrix<f64>> {
    let n = x.len();
    if xp.len() != n {
        return Err(Error::Arity { expected: n, found: xp.len() });
    }
    let shifted = |base: &[f64], i: usize, d: f64| -> Point {
        let mut y = base.to_vec();
        y[i] += d;
        Point::from(y)
    };
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        let (xi_p, xi_m) = (shifted(x, i, h), shifted(x, i, -h));
        for l in 0..n {
            let (yl_p, yl_m) = (shifted(xp, l, h), shifted(xp, l, -h));
            let v = wf.sigma(&xi_p, &yl_p)? - wf.sigma(&xi_p, &yl_m)? - wf.sigma(&xi_m, &yl_p)? + wf.sigma(&xi_m, &yl_m)?;
            m[(i, l)] = v / (4.0 * h * h);
        }
    }
    Ok(m)
}

/// (σ_{i,l'}σ_{k,s'} − g_ik g_{l's'}) u^i u^k v^{l'} v^{s'}: zero iff v at x'
/// is parallel to u at x in the world-function sense.
pub fn parallelism_residual_wf(wf: &dyn WorldFunction, mf: &MetricField, u: &TangentVector, v: &TangentVector) -> Result<f64> {
    let s = sigma_mixed_derivatives(wf, &u.base, &v.base)?;
    parallelism_residual_from(&s, mf, u, v)
}

fn parallelism_residual_from(s: &DMatrix<f64>, mf: &MetricField, u: &TangentVector, v: &TangentVector) -> Result<f64> {
    let uv = quadratic(s, &u.components, &v.components);
    let uu = mf.inner(&u.base, &u.components, &u.components)?;
    let vv = mf.inner(&v.base, &v.components, &v.components)?;
    Ok(uv * uv - uu * vv)
}

/// The first-order expansion of the world-function parallelism condition
/// for x' = x + dξ, v(x') = v + δv, built from γ_{j;is} and g_{rj,s} at x.
///
/// For v = u it vanishes identically whatever δv is, so it does not single
/// out a transport law on its own.
pub fn infinitesimal_parallelism_residual(mf: &MetricField, x: &[f64], u: &[f64], v: &[f64], dxi: &[f64], dv: &[f64]) -> Result<f64> {
    let n = mf.dimension();
    for a in [x, u, v, dxi, dv] {
        if a.len() != n {
            return Err(Error::Arity { expected: n, found: a.len() });
        }
    }
    let g = mf.metric(x)?;
    let c = mf.christoffel(x)?;
    let ip = |a: &[f64], b: &[f64]| quadratic(&g, a, b);
    let (uv, uu, vv) = (ip(u, v), ip(u, u), ip(v, v));
    let mut t2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let coeff = c.lowered(j, i, s) * g[(k, r)] + g[(i, j)] * c.lowered(r, k, s) - g[(i, k)] * c.metric_derivative(r, j, s);
                        t2 += coeff * u[j] * u[r] * v[i] * v[k] * dxi[s];
                    }
                }
            }
        }
    }
    let t3 = ip(dv, u) * uv - ip(dv, v) * uu;
    let t4 = uv * ip(u, dv) - ip(v, dv) * uu;
    Ok(uv * uv - uu * vv + t2 + t3 + t4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    /// One admissible direction.
    Single,
    /// A positive-dimensional family of directions.
    Cone,
    /// No real direction satisfies the condition.
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeOptions {
    pub samples: usize,
    pub mixed_step: f64,
    /// |f(v*)| / |u|² below which the central direction is a double root.
    pub degeneracy_tol: f64,
    /// Directions closer than this angle (in the g(x')-orthonormal frame) merge.
    pub cluster_angle: f64,
}

impl Default for ConeOptions {
    fn default() -> Self {
        Self { samples: 360, mixed_step: MIXED_STEP, degeneracy_tol: 1e-6, cluster_angle: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollinearityCone {
    pub kind: ConeKind,
    /// Base point x + dξ.
    pub base: Vec<f64>,
    /// Axis direction v* = g'⁻¹w with w_l = −σ_{i,l'}u^i, unit in g(x').
    pub central: Vec<f64>,
    /// Admissible unit directions (chart components, unit in g(x')).
    pub directions: Vec<Vec<f64>>,
    /// f(v*)/|u|², where f(v) = (w·v)² − |u|²|v|²; zero for a degenerate cone.
    pub central_residual: f64,
    /// Largest angle between the axis and an admissible direction.
    pub half_aperture: f64,
}

/// Directions v at x' = x + dξ world-function-parallel to u at x.
///
/// With w and f as in [`CollinearityCone`], in a g(x')-orthonormal frame the
/// admissible unit directions satisfy (ŵ·y)² = |u|², ŵ·y > 0. Directions
/// are sampled on the unit sphere and zeros of f are bracketed along arcs
/// from the axis.
pub fn collinearity_cone(wf: &dyn WorldFunction, mf: &MetricField, u: &TangentVector, dxi: &[f64], samples: usize) -> Result<CollinearityCone> {
    collinearity_cone_with(wf, mf, u, dxi, &ConeOptions { samples, ..ConeOptions::default() })
}

pub fn collinearity_cone_with(wf: &dyn WorldFunction, mf: &MetricField, u: &TangentVector, dxi: &[f64], opts: &ConeOptions) -> Result<CollinearityCone> {
    let n = mf.dimension();
    if dxi.len() != n || u.base.len() != n {
        return Err(Error::Arity { expected: n, found: dxi.len() });
    }
    if opts.samples < 4 {
        return Err(Error::Validation("collinearity cone needs at least 4 direction samples".into()));
    }
    let xp: Vec<f64> = u.base.iter().zip(dxi).map(|(a, d)| a + d).collect();
    let s = sigma_mixed_derivatives_with(wf, &u.base, &xp, opts.mixed_step)?;
    let w = -(s.transpose() * DVector::from_column_slice(&u.components));
    let c = mf.inner(&u.base, &u.components, &u.components)?;
    if c <= 0.0 {
        return Err(Error::Precondition("collinearity cone needs a non-zero vector u".into()));
    }
    let gp = mf.metric(&xp)?;
    let chol = gp.clone().cholesky().ok_or_else(|| Error::SingularMetric(xp.clone()))?;
    let l = chol.l();
    let l_t_inv = l.transpose().try_inverse().ok_or_else(|| Error::SingularMetric(xp.clone()))?;
    // ŵ = L⁻¹w, so w·v = ŵ·y for v = L⁻ᵀy and vᵀg'v = |y|².
    let w_hat = l_t_inv.transpose() * &w;
    let to_chart = |y: &DVector<f64>| -> Vec<f64> { (&l_t_inv * y).as_slice().to_vec() };
    let f = |y: &DVector<f64>| -> f64 {
        let wy = w_hat.dot(y);
        (wy * wy - c * y.norm_squared()) / c
    };
    let axis = w_hat.normalize();
    let central_residual = f(&axis);
    let central = to_chart(&axis);
    if central_residual.abs() <= opts.degeneracy_tol {
        return Ok(CollinearityCone { kind: ConeKind::Single, base: xp, directions: vec![central.clone()], central, central_residual, half_aperture: 0.0 });
    }
    if central_residual < 0.0 {
        return Ok(CollinearityCone { kind: ConeKind::Empty, base: xp, directions: Vec::new(), central, central_residual, half_aperture: 0.0 });
    }
    let mut roots: Vec<Vec<f64>> = Vec::new();
    for y in sphere_samples(n, opts.samples) {
        let y = DVector::from_vec(y);
        if w_hat.dot(&y) <= 0.0 || f(&y) >= 0.0 {
            continue;
        }
        let arc = |t: f64| -> DVector<f64> { (&axis * (1.0 - t) + &y * t).normalize() };
        if let Some(t) = crate::solvers::refine::bracketed_root(|t| f(&arc(t)), 0.0, 1.0) {
            roots.push(arc(t).as_slice().to_vec());
        }
    }
    // Merge by chord length, which equals the angle to first order.
    let merged = merge_directions(roots, opts.cluster_angle);
    let half_aperture = merged.iter().map(|y| axis.dot(&DVector::from_column_slice(y)).clamp(-1.0, 1.0).acos()).fold(0.0, f64::max);
    let directions: Vec<Vec<f64>> = merged.iter().map(|y| to_chart(&DVector::from_column_slice(y))).collect();
    let kind = if directions.len() >= 2 { ConeKind::Cone } else if directions.len() == 1 { ConeKind::Single } else { ConeKind::Empty };
    Ok(CollinearityCone { kind, base: xp, directions, central, central_residual, half_aperture })
}

fn merge_directions(mut dirs: Vec<Vec<f64>>, radius: f64) -> Vec<Vec<f64>> {
    dirs.sort_by(|a, b| crate::point::lex_cmp(a, b));
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for d in dirs {
        if kept.iter().all(|k| hausdorff(std::slice::from_ref(k), std::slice::from_ref(&d)) > radius) {
            kept.push(d);
        }
    }
    kept
}

/// Deterministic near-uniform points on S^{n−1}: a circle for n = 2, a
/// Fibonacci lattice for n = 3, normalised cube-surface lattice otherwise.
fn sphere_samples(n: usize, count: usize) -> Vec<Vec<f64>> {
    match n {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let a = std::f64::consts::TAU * (k as f64 + 0.5) / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
        _ => {
            let per_face = (count as f64 / (2 * n) as f64).powf(1.0 / (n - 1) as f64).ceil().max(2.0) as usize;
            let mut out = Vec::new();
            for axis in 0..n {
                for sign in [-1.0, 1.0] {
                    let total = per_face.pow((n - 1) as u32);
                    for mut idx in 0..total {
                        let mut v = vec![0.0; n];
                        for (a, slot) in v.iter_mut().enumerate() {
                            if a == axis {
                                *slot = sign;
                            } else {
                                *slot = -1.0 + 2.0 * ((idx % per_face) as f64 + 0.5) / per_face as f64;
                                idx /= per_face;
                            }
                        }
                        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                        out.push(v.into_iter().map(|x| x / norm).collect());
                    }
                }
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometries::make_euclidean;
    use crate::riemann::sphere::AnalyticSphere;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn flat_transport_is_identity() {
        let mf = MetricField::flat(2);
        let u = TangentVector::new(vec![0.0, 0.0], vec![0.3, -1.2]).unwrap();
        let path = vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![-0.2, 2.0]];
        let v = transport_conventional(&mf, &u, &path).unwrap();
        assert_eq!(v.components, u.components);
        assert_eq!(v.base, vec![-0.2, 2.0]);
    }

    #[test]
    fn transport_preserves_the_norm() {
        let mf = MetricField::sphere(1.0).unwrap();
        let u = TangentVector::new(vec![1.0, 0.0], vec![0.4, 0.9]).unwrap();
        let path = chart_segment(&[1.0, 0.0], &[2.0, 1.5], 1000);
        let v = transport_conventional(&mf, &u, &path).unwrap();
        let drift = (v.norm(&mf).unwrap() - u.norm(&mf).unwrap()).abs();
        assert!(drift <= 1e-8, "drift {drift}");
    }

    #[test]
    fn printed_sign_does_not_preserve_the_norm() {
        // One Euler step with each sign: only du = −γ u dx keeps |u| to
        // first order.
        let mf = MetricField::sphere(1.0).unwrap();
        let (x, u) = ([1.0, 0.0], [0.0, 1.0]);
        let dx = [1e-4, 0.0];
        let gu = mf.christoffel(&x).unwrap().contract(&u, &dx);
        let xn = [x[0] + dx[0], x[1]];
        let norm0 = mf.inner(&x, &u, &u).unwrap();
        let minus: Vec<f64> = u.iter().zip(&gu).map(|(a, b)| a - b).collect();
        let plus: Vec<f64> = u.iter().zip(&gu).map(|(a, b)| a + b).collect();
        let d_minus = (mf.inner(&xn, &minus, &minus).unwrap() - norm0).abs();
        let d_plus = (mf.inner(&xn, &plus, &plus).unwrap() - norm0).abs();
        assert!(d_minus < 1e-7, "{d_minus}");
        assert!(d_plus > 1e-4, "{d_plus}");
    }

    #[test]
    fn flat_mixed_derivatives_are_minus_identity() {
        let e2 = make_euclidean(2).unwrap();
        let m = sigma_mixed_derivatives(e2.as_ref(), &[0.3, 0.1], &[1.5, -2.0]).unwrap();
        for i in 0..2 {
            for l in 0..2 {
                let expected = if i == l { -1.0 } else { 0.0 };
                assert!((m[(i, l)] - expected).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn mixed_derivatives_swap_and_coincidence_limit() {
        let s = AnalyticSphere::new(1.0).unwrap();
        let mf = MetricField::sphere(1.0).unwrap();
        let (x, y) = ([1.0, 0.2], [1.4, 0.9]);
        let a = sigma_mixed_derivatives(&s, &x, &y).unwrap();
        let b = sigma_mixed_derivatives(&s, &y, &x).unwrap();
        assert!((a - b.transpose()).amax() < 1e-6);
        let g = mf.metric(&x).unwrap();
        let near = [x[0] + 1e-3, x[1] - 1e-3];
        let m = sigma_mixed_derivatives(&s, &x, &near).unwrap();
        assert!((m + g).amax() < 5e-3);
    }

    #[test]
    fn residual_is_quadratic_in_each_vector() {
        let s = AnalyticSphere::new(1.0).unwrap();
        let mf = MetricField::sphere(1.0).unwrap();
        let u = TangentVector::new(vec![1.0, 0.2], vec![0.3, 0.8]).unwrap();
        let v = TangentVector::new(vec![1.3, 0.6], vec![-0.2, 0.5]).unwrap();
        let r = parallelism_residual_wf(&s, &mf, &u, &v).unwrap();
        let u2 = TangentVector::new(u.base.clone(), vec![0.6, 1.6]).unwrap();
        let r2 = parallelism_residual_wf(&s, &mf, &u2, &v).unwrap();
        assert!((r2 - 4.0 * r).abs() <= 1e-9 * r.abs().max(1.0));
        let v2 = TangentVector::new(v.base.clone(), vec![-0.4, 1.0]).unwrap();
        let r4 = parallelism_residual_wf(&s, &mf, &u2, &v2).unwrap();
        assert!((r4 - 16.0 * r).abs() <= 1e-9 * r.abs().max(1.0));
    }

    #[test]
    fn geodesic_tangent_transport_satisfies_the_condition() {
        let s = AnalyticSphere::new(1.0).unwrap();
        let mf = MetricField::sphere(1.0).unwrap();
        let (a, b) = ([1.0, 0.2], [1.5, 1.1]);
        let path = crate::riemann::geodesic_bvp(&mf, &a, &b).unwrap();
        let u = TangentVector::new(a.to_vec(), path.velocities[0].clone()).unwrap();
        let v = transport_conventional(&mf, &u, &path.points).unwrap();
        let r = parallelism_residual_wf(&s, &mf, &u, &v).unwrap();
        let scale = u.norm(&mf).unwrap().powi(4);
        assert!(r.abs() <= 1e-6 * scale, "{r}");
    }

    #[test]
    fn longitudinal_cone_axis_is_the_transported_vector() {
        let s = AnalyticSphere::new(1.0).unwrap();
        let mf = MetricField::sphere(1.0).unwrap();
        let u = TangentVector::new(vec![1.0, 0.0], vec![0.6, 0.0]).unwrap();
        let dxi = [1e-3, 0.0];
        let cone = collinearity_cone(&s, &mf, &u, &dxi, 360).unwrap();
        assert_eq!(cone.kind, ConeKind::Single);
        let t = transport_conventional(&mf, &u, &chart_segment(&u.base, &[1.001, 0.0], 10)).unwrap();
        let n = t.norm(&mf).unwrap();
        for (c, v) in cone.central.iter().zip(&t.components) {
            assert!((c - v / n).abs() < 1e-6, "{:?} vs {:?}", cone.central, t.components);
        }
    }

    #[test]
    fn flat_case_is_degenerate() {
        let e2 = make_euclidean(2).unwrap();
        let mf = MetricField::flat(2);
        let u = TangentVector::new(vec![0.0, 0.0], vec![0.6, 0.8]).unwrap();
        let v = TangentVector::new(vec![1.0, 2.0], vec![0.6, 0.8]).unwrap();
        assert!(parallelism_residual_wf(e2.as_ref(), &mf, &u, &v).unwrap().abs() < 1e-7);
        let cone = collinearity_cone(e2.as_ref(), &mf, &u, &[0.1, 0.3], 360).unwrap();
        assert_eq!(cone.kind, ConeKind::Single);
        assert!((cone.central[0] - 0.6).abs() < 1e-7 && (cone.central[1] - 0.8).abs() < 1e-7);
    }

    #[test]
    fn sphere_cone_opens_for_transverse_steps() {
        let s = AnalyticSphere::new(1.0).unwrap();
        let mf = MetricField::sphere(1.0).unwrap();
        let u = TangentVector::new(vec![1.0, 0.0], vec![1.0, 0.0]).unwrap();
        let along = collinearity_cone(&s, &mf, &u, &[1e-3, 0.0], 360).unwrap();
        assert_eq!(along.kind, ConeKind::Single);
        let across = collinearity_cone(&s, &mf, &u, &[0.0, 0.1], 360).unwrap();
        assert_eq!(across.kind, ConeKind::Cone);
        assert_eq!(across.directions.len(), 2);
        // Closed form in the orthonormal frame: cos α = |u| / |ŵ|.
        let expected = (1.0 / (1.0 + across.central_residual).sqrt()).acos();
        assert!((across.half_aperture - expected).abs() < 1e-6, "{} vs {expected}", across.half_aperture);
    }

    #[test]
    fn infinitesimal_form_is_blind_to_the_transport_law() {
        let mf = MetricField::sphere(1.0).unwrap();
        let (x, u, dxi) = ([1.1, 0.3], [0.2, 0.7], [0.01, -0.02]);
        let c = mf.christoffel(&x).unwrap();
        let gu = c.contract(&u, &dxi);
        for sign in [-1.0, 1.0] {
            let dv: Vec<f64> = gu.iter().map(|g| sign * g).collect();
            let r = infinitesimal_parallelism_residual(&mf, &x, &u, &u, &dxi, &dv).unwrap();
            assert!(r.abs() < 1e-12, "{r}");
        }
        let r = infinitesimal_parallelism_residual(&mf, &x, &u, &u, &dxi, &[0.3, -0.1]).unwrap();
        assert!(r.abs() < 1e-12);
        let r = infinitesimal_parallelism_residual(&mf, &x, &u, &[0.7, 0.2], &dxi, &[0.0, 0.0]).unwrap();
        assert!(r.abs() > 1e-3);
    }

    #[test]
    fn equator_quarter_turn_keeps_direction() {
        let mf = MetricField::sphere(1.0).unwrap();
        let u = TangentVector::new(vec![FRAC_PI_2, 0.0], vec![0.0, 1.0]).unwrap();
        let v = transport_conventional(&mf, &u, &chart_segment(&[FRAC_PI_2, 0.0], &[FRAC_PI_2, FRAC_PI_2], 200)).unwrap();
        assert!((v.components[0]).abs() < 1e-12 && (v.components[1] - 1.0).abs() < 1e-12);
    }
}
