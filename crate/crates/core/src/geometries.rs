//! Built-in world functions.
//!
//! The Riemannian world functions (geodesic σ_R and the analytic sphere)
//! live in [`crate::riemann`]; everything here is closed form.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::point::{BoundingBox, Domain, Geometry, Point, WorldFunction};

/// σ(x, y) = ½ Σ (xᵢ − yᵢ)².
#[derive(Debug, Clone)]
pub struct Euclidean {
    domain: Domain,
}

impl Euclidean {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Validation("Euclidean dimension must be at least 1".into()));
        }
        Ok(Self { domain: Domain::chart(dimension) })
    }

    pub fn with_bounds(mut self, bounds: BoundingBox) -> Result<Self> {
        set_bounds(&mut self.domain, bounds)?;
        Ok(self)
    }
}

impl WorldFunction for Euclidean {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn sigma(&self, p: &Point, q: &Point) -> Result<f64> {
        let (x, y) = self.domain.coords_pair(p, q)?;
        Ok(0.5 * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
    }

    fn describe(&self) -> String {
        format!("euclidean(n={})", self.domain.chart_dimension().unwrap_or(0))
    }
}

/// σ(x, y) = ½ [(Δx⁰)² − Σ_{i≥1} (Δxⁱ)²], coordinate 0 timelike.
#[derive(Debug, Clone)]
pub struct Minkowski {
    domain: Domain,
}

impl Minkowski {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Validation("Minkowski dimension must be at least 2".into()));
        }
        Ok(Self { domain: Domain::chart(dimension) })
    }

    pub fn with_bounds(mut self, bounds: BoundingBox) -> Result<Self> {
        set_bounds(&mut self.domain, bounds)?;
        Ok(self)
    }
}

impl WorldFunction for Minkowski {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn sigma(&self, p: &Point, q: &Point) -> Result<f64> {
        let (x, y) = self.domain.coords_pair(p, q)?;
        let dt = x[0] - y[0];
        let space: f64 = x[1..].iter().zip(&y[1..]).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok(0.5 * (dt * dt - space))
    }

    fn describe(&self) -> String {
        format!("minkowski(n={}, signature=+{})", self.domain.chart_dimension().unwrap_or(0), "-".repeat(self.domain.chart_dimension().unwrap_or(1) - 1))
    }
}

/// A deformation d(σ_base, P, Q) added to a base world function.
pub type DeformationFn = dyn Fn(f64, &Point, &Point) -> f64 + Send + Sync;

/// σ(P, Q) = σ_base(P, Q) + d(σ_base(P, Q), P, Q) for P ≠ Q, and 0 on the
/// diagonal.
///
/// The pair is put in canonical order before evaluation, so σ is bitwise
/// symmetric whatever floating-point shape `d` has.
pub struct Deformed {
    base: Geometry,
    deformation: Arc<DeformationFn>,
    label: String,
}

impl Deformed {
    pub fn base(&self) -> &Geometry {
        &self.base
    }
}

impl fmt::Debug for Deformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Deformed").field("base", &self.base.describe()).field("label", &self.label).finish()
    }
}

impl WorldFunction for Deformed {
    fn domain(&self) -> &Domain {
        self.base.domain()
    }

    fn sigma(&self, p: &Point, q: &Point) -> Result<f64> {
        let (p, q) = if p.canonical_cmp(q).is_gt() { (q, p) } else { (p, q) };
        let s = self.base.sigma(p, q)?;
        if p == q {
            return Ok(0.0);
        }
        Ok(s + (self.deformation)(s, p, q))
    }

    fn describe(&self) -> String {
        format!("deformed({} + {})", self.base.describe(), self.label)
    }
}

/// Number of random pairs drawn when validating a deformation.
const DEFORMATION_SAMPLES: usize = 256;

/// Builds σ_base + d and checks by sampling that the raw deformation is
/// symmetric in (P, Q) and finite.
pub fn make_deformed(base: Geometry, deformation: Arc<DeformationFn>, label: impl Into<String>) -> Result<Geometry> {
    let label = label.into();
    let mut rng = SplitMix64(0x5eed_d3f0_u64);
    let samples: Vec<(Point, Point)> = match base.domain() {
        Domain::Chart { dimension, bounds } => {
            let bounds = match bounds {
                Some(b) => b.clone(),
                None => BoundingBox::around(&vec![0.0; *dimension], 1.0)?,
            };
            let mut draw = || -> Point {
                Point::Coords(bounds.lower.iter().zip(&bounds.upper).map(|(lo, hi)| lo + (hi - lo) * rng.next_f64()).collect())
            };
            (0..DEFORMATION_SAMPLES).map(|_| (draw(), draw())).collect()
        }
        Domain::Discrete { count } => {
            let mut pairs = Vec::new();
            for i in 0..*count {
                for j in (i + 1)..*count {
                    pairs.push((Point::Discrete(i), Point::Discrete(j)));
                }
            }
            pairs.truncate(DEFORMATION_SAMPLES * 4);
            pairs
        }
    };
    for (p, q) in &samples {
        let s = base.sigma(p, q)?;
        let d_pq = deformation(s, p, q);
        let d_qp = deformation(s, q, p);
        if !d_pq.is_finite() || !d_qp.is_finite() {
            return Err(Error::Validation(format!("deformation `{label}` is not finite at ({p}, {q})")));
        }
        let scale = 1.0 + s.abs() + d_pq.abs();
        if (d_pq - d_qp).abs() > 1e-12 * scale {
            return Err(Error::Validation(format!(
                "deformation `{label}` is not symmetric: d(P,Q) = {d_pq}, d(Q,P) = {d_qp} at P = {p}, Q = {q}"
            )));
        }
    }
    Ok(Arc::new(Deformed { base, deformation, label }))
}

/// Finite carrier set with σ(i, j) read from a symmetric table.
#[derive(Debug, Clone)]
pub struct Tabulated {
    table: Vec<Vec<f64>>,
    domain: Domain,
}

impl Tabulated {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Validation("tabulated world function needs at least one point".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row[i] != 0.0 {
                return Err(Error::Validation(format!("diagonal entry ({i},{i}) is {} instead of 0", row[i])));
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Validation(format!("entry ({i},{j}) is not finite")));
                }
                if *v != table[j][i] {
                    return Err(Error::Validation(format!("table is not symmetric at ({i},{j}): {v} vs {}", table[j][i])));
                }
            }
        }
        Ok(Self { table, domain: Domain::Discrete { count: n } })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl WorldFunction for Tabulated {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn sigma(&self, p: &Point, q: &Point) -> Result<f64> {
        let (i, j) = self.domain.id_pair(p, q)?;
        Ok(self.table[i][j])
    }

    fn describe(&self) -> String {
        format!("tabulated(points={})", self.table.len())
    }
}

pub fn make_euclidean(n: usize) -> Result<Geometry> {
    Ok(Arc::new(Euclidean::new(n)?))
}

pub fn make_minkowski(n: usize) -> Result<Geometry> {
    Ok(Arc::new(Minkowski::new(n)?))
}

pub fn make_tabulated(table: Vec<Vec<f64>>) -> Result<Geometry> {
    Ok(Arc::new(Tabulated::new(table)?))
}

/// The constant-offset deformation σ_base + λ²/2 (P ≠ Q).
pub fn make_offset_deformed(base: Geometry, lambda: f64) -> Result<Geometry> {
    let offset = 0.5 * lambda * lambda;
    make_deformed(base, Arc::new(move |_, _, _| offset), format!("lambda^2/2, lambda={lambda}"))
}

fn set_bounds(domain: &mut Domain, bounds: BoundingBox) -> Result<()> {
    bounds.validate()?;
    match domain {
        Domain::Chart { dimension, bounds: b } => {
            if bounds.dimension() != *dimension {
                return Err(Error::Arity { expected: *dimension, found: bounds.dimension() });
            }
            *b = Some(bounds);
            Ok(())
        }
        Domain::Discrete { .. } => Err(Error::Representation("discrete geometries have no bounding box".into())),
    }
}

/// Tiny deterministic generator for validation sampling.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
