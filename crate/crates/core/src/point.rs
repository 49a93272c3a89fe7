//! Carrier-set points and the world-function contract.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A location in a geometry's carrier set: chart coordinates or an index
/// into a finite set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Coords(Vec<f64>),
    Discrete(usize),
}

impl Point {
    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::Coords(c) => Some(c),
            Point::Discrete(_) => None,
        }
    }

    /// Total order used wherever a canonical point ordering is needed
    /// (symmetric evaluation order, deterministic output).
    pub fn canonical_cmp(&self, other: &Point) -> Ordering {
        match (self, other) {
            (Point::Coords(a), Point::Coords(b)) => lex_cmp(a, b),
            (Point::Discrete(a), Point::Discrete(b)) => a.cmp(b),
            (Point::Discrete(_), Point::Coords(_)) => Ordering::Less,
            (Point::Coords(_), Point::Discrete(_)) => Ordering::Greater,
        }
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point::Coords(v)
    }
}

impl From<&[f64]> for Point {
    fn from(v: &[f64]) -> Self {
        Point::Coords(v.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point::Coords(v.to_vec())
    }
}

impl From<usize> for Point {
    fn from(id: usize) -> Self {
        Point::Discrete(id)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Coords(c) => write!(f, "{c:?}"),
            Point::Discrete(i) => write!(f, "#{i}"),
        }
    }
}

/// Lexicographic comparison of coordinate tuples under `f64::total_cmp`.
pub fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// The ordered pair **PQ**.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointPairVector {
    pub origin: Point,
    pub tip: Point,
}

impl PointPairVector {
    pub fn new(origin: impl Into<Point>, tip: impl Into<Point>) -> Self {
        Self { origin: origin.into(), tip: tip.into() }
    }

    pub fn reversed(&self) -> Self {
        Self { origin: self.tip.clone(), tip: self.origin.clone() }
    }
}

/// Axis-aligned box in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let b = Self { lower, upper };
        b.validate()?;
        Ok(b)
    }

    /// Box of half-width `half` around `center`.
    pub fn around(center: &[f64], half: f64) -> Result<Self> {
        Self::new(center.iter().map(|c| c - half).collect(), center.iter().map(|c| c + half).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.lower.is_empty() || self.lower.len() != self.upper.len() {
            return Err(Error::Validation(format!(
                "bounding box corners have lengths {} and {}",
                self.lower.len(),
                self.upper.len()
            )));
        }
        for (i, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Validation(format!("bounding box axis {i} is empty: [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension() && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    /// Length of the longest edge.
    pub fn extent(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(lo, hi)| hi - lo).fold(0.0, f64::max)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(lo, hi)| 0.5 * (lo + hi)).collect()
    }
}

/// Carrier-set description used by validation, samplers and solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Continuous carrier set in a single chart. `bounds` is the region
    /// samplers may draw from; points outside it are still legal inputs.
    Chart { dimension: usize, bounds: Option<BoundingBox> },
    Discrete { count: usize },
}

impl Domain {
    pub fn chart(dimension: usize) -> Self {
        Domain::Chart { dimension, bounds: None }
    }

    pub fn chart_dimension(&self) -> Option<usize> {
        match self {
            Domain::Chart { dimension, .. } => Some(*dimension),
            Domain::Discrete { .. } => None,
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        match (self, p) {
            (Domain::Chart { dimension, .. }, Point::Coords(c)) => {
                if c.len() != *dimension {
                    return Err(Error::Arity { expected: *dimension, found: c.len() });
                }
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Validation(format!("non-finite coordinate in {p}")));
                }
                Ok(())
            }
            (Domain::Discrete { count }, Point::Discrete(id)) => {
                if id < count {
                    Ok(())
                } else {
                    Err(Error::OutOfCarrier { id: *id, count: *count })
                }
            }
            (Domain::Chart { .. }, Point::Discrete(_)) => {
                Err(Error::Representation(format!("discrete point {p} given to a chart geometry")))
            }
            (Domain::Discrete { .. }, Point::Coords(_)) => {
                Err(Error::Representation(format!("coordinate point {p} given to a discrete geometry")))
            }
        }
    }

    /// Checks both points and returns their coordinates.
    pub fn coords_pair<'a>(&self, p: &'a Point, q: &'a Point) -> Result<(&'a [f64], &'a [f64])> {
        self.check(p)?;
        self.check(q)?;
        match (p, q) {
            (Point::Coords(a), Point::Coords(b)) => Ok((a, b)),
            _ => Err(Error::Representation("expected coordinate points".into())),
        }
    }

    /// Checks both points and returns their discrete ids.
    pub fn id_pair(&self, p: &Point, q: &Point) -> Result<(usize, usize)> {
        self.check(p)?;
        self.check(q)?;
        match (p, q) {
            (Point::Discrete(a), Point::Discrete(b)) => Ok((*a, *b)),
            _ => Err(Error::Representation("expected discrete points".into())),
        }
    }
}

/// A symmetric real function on point pairs, zero on the diagonal.
///
/// Implementations must be pure and deterministic; a value may be shared
/// between threads and called concurrently.
pub trait WorldFunction: Send + Sync {
    fn domain(&self) -> &Domain;

    /// σ(P, Q). Implementations validate both points against [`Self::domain`].
    fn sigma(&self, p: &Point, q: &Point) -> Result<f64>;

    fn describe(&self) -> String;
}

/// Shared handle to a geometry.
pub type Geometry = Arc<dyn WorldFunction>;

/// σ(P, Q) for the geometry `g`.
pub fn world_function(g: &dyn WorldFunction, p: &Point, q: &Point) -> Result<f64> {
    g.sigma(p, q)
}
