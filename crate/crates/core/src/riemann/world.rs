//! σ_R = ½L² from geodesic two-point solves, as a [`WorldFunction`].

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::geodesic::{geodesic_bvp_velocity, BvpOptions};
use super::metric::MetricField;
use crate::error::Result;
use crate::point::{lex_cmp, Domain, Point, WorldFunction};

type Key = (Vec<u64>, Vec<u64>);

/// World function induced by a metric field. Each value is a geodesic
/// shooting solve; results are memoised, so repeated pairs (finite
/// differences, scalar products over shared points) cost one solve.
pub struct RiemannWorldFunction {
    metric: Arc<MetricField>,
    domain: Domain,
    options: BvpOptions,
    cache: RwLock<HashMap<Key, f64>>,
}

impl std::fmt::Debug for RiemannWorldFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RiemannWorldFunction").field("metric", &self.metric).field("options", &self.options).finish()
    }
}

impl RiemannWorldFunction {
    pub fn new(metric: Arc<MetricField>) -> Self {
        Self::with_options(metric, BvpOptions::default())
    }

    pub fn with_options(metric: Arc<MetricField>, options: BvpOptions) -> Self {
        let domain = Domain::Chart { dimension: metric.dimension(), bounds: metric.chart().cloned() };
        Self { metric, domain, options, cache: RwLock::new(HashMap::new()) }
    }

    pub fn metric(&self) -> &Arc<MetricField> {
        &self.metric
    }

    pub fn cached_pairs(&self) -> usize {
        self.cache.read().map(|c| c.len()).unwrap_or(0)
    }

    fn solve(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        let v0 = geodesic_bvp_velocity(&self.metric, a, b, &self.options)?;
        // Geodesic speed is constant, so L over τ ∈ [0, 1] is the initial speed.
        Ok(0.5 * self.metric.inner(a, &v0, &v0)?)
    }
}

fn key(a: &[f64], b: &[f64]) -> Key {
    (a.iter().map(|v| v.to_bits()).collect(), b.iter().map(|v| v.to_bits()).collect())
}

impl WorldFunction for RiemannWorldFunction {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn sigma(&self, p: &Point, q: &Point) -> Result<f64> {
        let (a, b) = self.domain.coords_pair(p, q)?;
        if a == b {
            return Ok(0.0);
        }
        let (a, b) = if lex_cmp(a, b).is_gt() { (b, a) } else { (a, b) };
        let k = key(a, b);
        if let Some(v) = self.cache.read().ok().and_then(|c| c.get(&k).copied()) {
            return Ok(v);
        }
        let v = self.solve(a, b)?;
        if let Ok(mut c) = self.cache.write() {
            c.insert(k, v);
        }
        Ok(v)
    }

    fn describe(&self) -> String {
        format!("riemannian({})", self.metric.label())
    }
}

/// σ_R(x_a, x_b) for a single pair.
pub fn world_function_riemann(mf: &MetricField, xa: &[f64], xb: &[f64]) -> Result<f64> {
    RiemannWorldFunction::new(Arc::new(mf.clone())).sigma(&Point::from(xa), &Point::from(xb))
}
