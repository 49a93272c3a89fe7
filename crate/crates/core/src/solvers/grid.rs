//! Regular seeding grids over a bounding box, optionally restricted to a
//! shell so that fine grids stay affordable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::BoundingBox;

/// Region of the box where grid nodes are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridMask {
    /// inner ≤ |x − center| ≤ outer.
    SphericalShell { center: Vec<f64>, inner: f64, outer: f64 },
    /// inner ≤ distance from the line {origin + t·direction} ≤ outer.
    CylindricalShell { origin: Vec<f64>, direction: Vec<f64>, inner: f64, outer: f64 },
}

impl GridMask {
    pub fn validate(&self, dimension: usize) -> Result<()> {
        let (len, inner, outer) = match self {
            GridMask::SphericalShell { center, inner, outer } => (center.len(), *inner, *outer),
            GridMask::CylindricalShell { origin, direction, inner, outer } => {
                if direction.len() != origin.len() || direction.iter().all(|d| *d == 0.0) {
                    return Err(Error::Validation("cylindrical mask needs a non-zero direction of matching arity".into()));
                }
                (origin.len(), *inner, *outer)
            }
        };
        if len != dimension {
            return Err(Error::Arity { expected: dimension, found: len });
        }
        if !(inner >= 0.0 && outer > inner && outer.is_finite()) {
            return Err(Error::Validation(format!("mask radii must satisfy 0 <= inner < outer, got [{inner}, {outer}]")));
        }
        Ok(())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            GridMask::SphericalShell { center, inner, outer } => {
                let r = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
                r >= *inner && r <= *outer
            }
            GridMask::CylindricalShell { origin, direction, inner, outer } => {
                let norm2: f64 = direction.iter().map(|d| d * d).sum();
                let rel: Vec<f64> = x.iter().zip(origin).map(|(a, o)| a - o).collect();
                let t = rel.iter().zip(direction).map(|(r, d)| r * d).sum::<f64>() / norm2;
                let r = rel.iter().zip(direction).map(|(r, d)| (r - t * d) * (r - t * d)).sum::<f64>().sqrt();
                r >= *inner && r <= *outer
            }
        }
    }
}

/// Seeding grid specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points_per_axis: usize,
    #[serde(default)]
    pub mask: Option<GridMask>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { points_per_axis: 33, mask: None }
    }
}

impl GridSpec {
    pub fn new(points_per_axis: usize) -> Self {
        Self { points_per_axis, mask: None }
    }

    pub fn with_mask(mut self, mask: GridMask) -> Self {
        self.mask = Some(mask);
        self
    }
}

/// A tensor grid of `n` nodes per axis over `region`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub region: BoundingBox,
    pub n: usize,
    pub step: Vec<f64>,
    mask: Option<GridMask>,
}

impl Grid {
    pub fn new(region: &BoundingBox, spec: &GridSpec) -> Result<Self> {
        region.validate()?;
        let n = spec.points_per_axis;
        if n < 2 {
            return Err(Error::Validation(format!("grid needs at least 2 points per axis, got {n}")));
        }
        let d = region.dimension();
        if (n as f64).powi(d as i32) > 5e7 {
            return Err(Error::Validation(format!("grid of {n}^{d} nodes is too large")));
        }
        if let Some(m) = &spec.mask {
            m.validate(d)?;
        }
        let step = region.lower.iter().zip(&region.upper).map(|(lo, hi)| (hi - lo) / (n - 1) as f64).collect();
        Ok(Self { region: region.clone(), n, step, mask: spec.mask.clone() })
    }

    pub fn dimension(&self) -> usize {
        self.step.len()
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dimension() as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.dimension()];
        for slot in m.iter_mut() {
            *slot = idx % self.n;
            idx /= self.n;
        }
        m
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().rev().fold(0, |acc, i| acc * self.n + i)
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow(axis as u32)
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        if i == self.n - 1 {
            self.region.upper[axis]
        } else {
            self.region.lower[axis] + i as f64 * self.step[axis]
        }
    }

    pub fn node(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx).iter().enumerate().map(|(a, i)| self.coordinate(a, *i)).collect()
    }

    pub fn is_active(&self, idx: usize) -> bool {
        match &self.mask {
            None => true,
            Some(m) => m.contains(&self.node(idx)),
        }
    }

    /// Largest per-axis spacing.
    pub fn spacing(&self) -> f64 {
        self.step.iter().copied().fold(0.0, f64::max)
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.step.iter().map(|s| s * s).sum::<f64>().sqrt()
    }

    /// Neighbours of `idx` one step down and up along `axis`.
    pub fn axis_neighbours(&self, idx: usize, axis: usize) -> [Option<usize>; 2] {
        let stride = self.stride(axis);
        let i = (idx / stride) % self.n;
        [if i > 0 { Some(idx - stride) } else { None }, if i + 1 < self.n { Some(idx + stride) } else { None }]
    }

    /// Flat index of the first node of every grid line along `axis`.
    pub fn line_starts(&self, axis: usize) -> Vec<usize> {
        (0..self.len()).filter(|idx| (idx / self.stride(axis)).is_multiple_of(self.n)).collect()
    }
}
