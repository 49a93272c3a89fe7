//! Metric fields on a coordinate chart and their Christoffel symbols.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::point::BoundingBox;

pub type MetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
pub type EmbeddingFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

/// Default finite-difference step for metric derivatives.
pub const METRIC_STEP: f64 = 1e-5;

#[derive(Clone)]
pub enum MetricSource {
    /// g(x) given directly.
    Explicit(Arc<MetricFn>),
    /// g induced by X: chart → E_m, g_ik = Σ_l ∂_i X^l ∂_k X^l.
    Embedding { map: Arc<EmbeddingFn>, ambient: usize },
}

/// A metric tensor field on an n-dimensional chart.
#[derive(Clone)]
pub struct MetricField {
    dimension: usize,
    source: MetricSource,
    chart: Option<BoundingBox>,
    label: String,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField").field("dimension", &self.dimension).field("label", &self.label).field("chart", &self.chart).finish()
    }
}

/// Christoffel symbols at one point, stored densely.
#[derive(Debug, Clone)]
pub struct Christoffel {
    n: usize,
    second: Vec<f64>,
    first: Vec<f64>,
    dg: Vec<f64>,
}

impl Christoffel {
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n + b) * self.n + c
    }

    /// γ^k_ls.
    pub fn second_kind(&self, k: usize, l: usize, s: usize) -> f64 {
        self.second[self.idx(k, l, s)]
    }

    /// γ_{j;is} = g_jl γ^l_is.
    pub fn lowered(&self, j: usize, i: usize, s: usize) -> f64 {
        self.first[self.idx(j, i, s)]
    }

    /// g_{rj,s} = ∂g_rj / ∂x^s.
    pub fn metric_derivative(&self, r: usize, j: usize, s: usize) -> f64 {
        self.dg[self.idx(r, j, s)]
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// γ^k_ls a^l b^s.
    pub fn contract(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for l in 0..n {
                    for s in 0..n {
                        acc += self.second[(k * n + l) * n + s] * a[l] * b[s];
                    }
                }
                acc
            })
            .collect()
    }
}

impl MetricField {
    pub fn explicit(dimension: usize, g: Arc<MetricFn>, label: impl Into<String>) -> Self {
        Self { dimension, source: MetricSource::Explicit(g), chart: None, label: label.into() }
    }

    pub fn from_embedding(dimension: usize, ambient: usize, map: Arc<EmbeddingFn>, label: impl Into<String>) -> Result<Self> {
        if ambient <= dimension {
            return Err(Error::Validation(format!("embedding space dimension {ambient} must exceed the chart dimension {dimension}")));
        }
        Ok(Self { dimension, source: MetricSource::Embedding { map, ambient }, chart: None, label: label.into() })
    }

    /// The identity metric on Rⁿ.
    pub fn flat(dimension: usize) -> Self {
        Self::explicit(dimension, Arc::new(move |_: &[f64]| DMatrix::identity(dimension, dimension)), format!("flat(n={dimension})"))
    }

    /// Sphere of the given radius in (θ, φ), induced from its embedding in E₃.
    pub fn sphere_embedded(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        let map = Arc::new(move |x: &[f64]| super::sphere::embed(radius, x[0], x[1]).to_vec());
        Self::from_embedding(2, 3, map, format!("sphere(R={radius}, embedding)"))?.with_chart(sphere_chart())
    }

    /// Sphere of the given radius in (θ, φ) with g = diag(R², R² sin²θ).
    pub fn sphere(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        let r2 = radius * radius;
        let g = Arc::new(move |x: &[f64]| {
            let s = x[0].sin();
            DMatrix::from_row_slice(2, 2, &[r2, 0.0, 0.0, r2 * s * s])
        });
        Self::explicit(2, g, format!("sphere(R={radius})")).with_chart(sphere_chart())
    }

    pub fn with_chart(mut self, chart: BoundingBox) -> Result<Self> {
        chart.validate()?;
        if chart.dimension() != self.dimension {
            return Err(Error::Arity { expected: self.dimension, found: chart.dimension() });
        }
        self.chart = Some(chart);
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn chart(&self) -> Option<&BoundingBox> {
        self.chart.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &MetricSource {
        &self.source
    }

    pub fn in_chart(&self, x: &[f64]) -> bool {
        self.chart.as_ref().is_none_or(|c| c.contains(x))
    }

    /// X(x) for embedded fields.
    pub fn embedding(&self, x: &[f64]) -> Option<Vec<f64>> {
        match &self.source {
            MetricSource::Embedding { map, .. } => Some(map(x)),
            MetricSource::Explicit(_) => None,
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::Arity { expected: self.dimension, found: x.len() });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite chart point {x:?}")));
        }
        Ok(())
    }

    /// g_ik(x).
    pub fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(x)?;
        let g = match &self.source {
            MetricSource::Explicit(g) => g(x),
            MetricSource::Embedding { map, ambient } => {
                let d = embedding_first_derivatives(map.as_ref(), *ambient, x, METRIC_STEP);
                &d.transpose() * &d
            }
        };
        if g.nrows() != self.dimension || g.ncols() != self.dimension || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularMetric(x.to_vec()));
        }
        Ok(g)
    }

    pub fn inverse_metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        let g = self.metric(x)?;
        g.try_inverse().ok_or_else(|| Error::SingularMetric(x.to_vec()))
    }

    pub fn christoffel(&self, x: &[f64]) -> Result<Christoffel> {
        self.christoffel_with_step(x, METRIC_STEP)
    }

    /// Christoffel symbols from central differences with step `h`. For an
    /// embedding, γ_{k;ls} = Σ ∂_k X · ∂_l ∂_s X with second derivatives
    /// taken at step 10h.
    pub fn christoffel_with_step(&self, x: &[f64], h: f64) -> Result<Christoffel> {
        self.check_point(x)?;
        let n = self.dimension;
        let mut first = vec![0.0; n * n * n];
        let mut dg = vec![0.0; n * n * n];
        let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
        let g = match &self.source {
            MetricSource::Explicit(gf) => {
                let mut xp = x.to_vec();
                for s in 0..n {
                    xp[s] = x[s] + h;
                    let gp = gf(&xp);
                    xp[s] = x[s] - h;
                    let gm = gf(&xp);
                    xp[s] = x[s];
                    for r in 0..n {
                        for j in 0..n {
                            dg[idx(r, j, s)] = (gp[(r, j)] - gm[(r, j)]) / (2.0 * h);
                        }
                    }
                }
                for j in 0..n {
                    for i in 0..n {
                        for s in 0..n {
                            first[idx(j, i, s)] = 0.5 * (dg[idx(j, s, i)] + dg[idx(j, i, s)] - dg[idx(i, s, j)]);
                        }
                    }
                }
                gf(x)
            }
            MetricSource::Embedding { map, ambient } => {
                let d1 = embedding_first_derivatives(map.as_ref(), *ambient, x, h);
                // Second differences amplify rounding by 1/H², so they use a wider
                // step and cancel the O(H²) bias by extrapolation.
                let wide = 100.0 * h;
                let d2 = (embedding_second_derivatives(map.as_ref(), *ambient, x, wide) * 4.0
                    - embedding_second_derivatives(map.as_ref(), *ambient, x, 2.0 * wide))
                    / 3.0;
                for k in 0..n {
                    for l in 0..n {
                        for s in 0..n {
                            first[idx(k, l, s)] = (0..*ambient).map(|a| d1[(a, k)] * d2[(l * n + s, a)]).sum();
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        for s in 0..n {
                            dg[idx(i, j, s)] = first[idx(j, i, s)] + first[idx(i, j, s)];
                        }
                    }
                }
                &d1.transpose() * &d1
            }
        };
        let ginv = g.try_inverse().ok_or_else(|| Error::SingularMetric(x.to_vec()))?;
        let mut second = vec![0.0; n * n * n];
        for k in 0..n {
            for l in 0..n {
                for s in 0..n {
                    second[idx(k, l, s)] = (0..n).map(|j| ginv[(k, j)] * first[idx(j, l, s)]).sum();
                }
            }
        }
        if second.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularMetric(x.to_vec()));
        }
        Ok(Christoffel { n, second, first, dg })
    }

    /// Checks symmetry and positive definiteness at the given points.
    pub fn validate_at(&self, points: &[Vec<f64>]) -> Result<()> {
        for x in points {
            let g = self.metric(x)?;
            let scale = g.amax().max(1e-300);
            if (&g - g.transpose()).amax() > 1e-12 * scale {
                return Err(Error::Validation(format!("metric is not symmetric at {x:?}")));
            }
            let eig = g.symmetric_eigen().eigenvalues;
            if eig.iter().any(|e| *e <= 0.0) {
                return Err(Error::Validation(format!("metric is not positive definite at {x:?} (eigenvalues {:?})", eig.as_slice())));
            }
        }
        Ok(())
    }

    /// vᵀ g(x) w.
    pub fn inner(&self, x: &[f64], v: &[f64], w: &[f64]) -> Result<f64> {
        let g = self.metric(x)?;
        Ok(quadratic(&g, v, w))
    }
}

pub(crate) fn quadratic(g: &DMatrix<f64>, v: &[f64], w: &[f64]) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += g[(i, k)] * v[i] * w[k];
        }
    }
    acc
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("sphere radius must be positive, got {radius}")))
    }
}

/// (θ, φ) chart of the sphere; φ may wind, θ stays off the poles.
pub fn sphere_chart() -> BoundingBox {
    BoundingBox { lower: vec![0.02, -4.0 * std::f64::consts::PI], upper: vec![std::f64::consts::PI - 0.02, 4.0 * std::f64::consts::PI] }
}

/// ∂X^a/∂x^k as an m×n matrix.
fn embedding_first_derivatives(map: &EmbeddingFn, m: usize, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut d = DMatrix::zeros(m, n);
    let mut xp = x.to_vec();
    for k in 0..n {
        xp[k] = x[k] + h;
        let p = map(&xp);
        xp[k] = x[k] - h;
        let q = map(&xp);
        xp[k] = x[k];
        for a in 0..m {
            d[(a, k)] = (p[a] - q[a]) / (2.0 * h);
        }
    }
    d
}

/// ∂²X^a/∂x^l∂x^s as an (n·n)×m matrix, row l·n + s.
fn embedding_second_derivatives(map: &EmbeddingFn, m: usize, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut d = DMatrix::zeros(n * n, m);
    let x0 = map(x);
    let shifted = |pairs: &[(usize, f64)]| {
        let mut y = x.to_vec();
        for &(i, dv) in pairs {
            y[i] += dv;
        }
        map(&y)
    };
    for l in 0..n {
        let p = shifted(&[(l, h)]);
        let q = shifted(&[(l, -h)]);
        for a in 0..m {
            d[(l * n + l, a)] = (p[a] - 2.0 * x0[a] + q[a]) / (h * h);
        }
        for s in (l + 1)..n {
            let pp = shifted(&[(l, h), (s, h)]);
            let pm = shifted(&[(l, h), (s, -h)]);
            let mp = shifted(&[(l, -h), (s, h)]);
            let mm = shifted(&[(l, -h), (s, -h)]);
            for a in 0..m {
                let v = (pp[a] - pm[a] - mp[a] + mm[a]) / (4.0 * h * h);
                d[(l * n + s, a)] = v;
                d[(s * n + l, a)] = v;
            }
        }
    }
    d
}
