//! Deduplication, connected components and local-dimension estimates for
//! refined point clouds.

use std::cmp::Ordering;
use std::collections::HashMap;

use kdtree::distance::squared_euclidean;
use kdtree::KdTree;
use nalgebra::DMatrix;
use petgraph::unionfind::UnionFind;

use crate::point::lex_cmp;

/// Spatial hash with cell size `radius`, for fixed-radius neighbour queries.
struct CellHash {
    radius: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl CellHash {
    fn new(radius: f64) -> Self {
        Self { radius, cells: HashMap::new() }
    }

    fn key(&self, x: &[f64]) -> Vec<i64> {
        x.iter().map(|v| (v / self.radius).floor() as i64).collect()
    }

    fn insert(&mut self, x: &[f64], id: usize) {
        let k = self.key(x);
        self.cells.entry(k).or_default().push(id);
    }

    /// Ids in the 3ᵈ cells around `x` (a superset of those within `radius`).
    fn candidates(&self, x: &[f64], mut visit: impl FnMut(usize)) {
        let base = self.key(x);
        let d = base.len();
        let mut offset = vec![-1i64; d];
        loop {
            let k: Vec<i64> = base.iter().zip(&offset).map(|(b, o)| b + o).collect();
            if let Some(ids) = self.cells.get(&k) {
                ids.iter().for_each(|&i| visit(i));
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    return;
                }
                offset[axis] += 1;
                if offset[axis] <= 1 {
                    break;
                }
                offset[axis] = -1;
                axis += 1;
            }
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Sorts lexicographically and greedily drops points within `radius` of an
/// already kept point. Each point carries its residual norm; the kept
/// representative of a near-duplicate group is the first in sorted order.
pub(crate) fn dedup(mut points: Vec<(Vec<f64>, f64)>, radius: f64) -> Vec<(Vec<f64>, f64)> {
    points.sort_by(|a, b| lex_cmp(&a.0, &b.0));
    if radius <= 0.0 {
        points.dedup_by(|a, b| a.0 == b.0);
        return points;
    }
    let mut hash = CellHash::new(radius);
    let mut kept: Vec<(Vec<f64>, f64)> = Vec::with_capacity(points.len());
    let r2 = radius * radius;
    for p in points {
        let mut close = false;
        hash.candidates(&p.0, |i| close |= dist2(&kept[i].0, &p.0) <= r2);
        if !close {
            hash.insert(&p.0, kept.len());
            kept.push(p);
        }
    }
    kept
}

/// Connected components of the graph linking points closer than `radius`.
/// Components are listed in order of their first member.
pub(crate) fn components(points: &[Vec<f64>], radius: f64) -> Vec<Vec<usize>> {
    let mut hash = CellHash::new(radius);
    for (i, p) in points.iter().enumerate() {
        hash.insert(p, i);
    }
    let mut uf = UnionFind::<usize>::new(points.len());
    let r2 = radius * radius;
    for (i, p) in points.iter().enumerate() {
        hash.candidates(p, |j| {
            if j > i && dist2(&points[j], p) <= r2 {
                uf.union(i, j);
            }
        });
    }
    let labels = uf.into_labeling();
    let mut order: Vec<usize> = Vec::new();
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        groups.entry(*l).or_insert_with(|| {
            order.push(*l);
            Vec::new()
        });
        groups.get_mut(l).unwrap().push(i);
    }
    order.into_iter().map(|l| groups.remove(&l).unwrap()).collect()
}

/// Largest coordinate-space distance from the first point of the set; a
/// cheap proxy for its diameter (within a factor of two).
pub(crate) fn extent(points: &[&Vec<f64>]) -> f64 {
    let Some(first) = points.first() else { return 0.0 };
    points.iter().map(|p| dist2(p, first)).fold(0.0, f64::max).sqrt() * 2.0
}

/// Singular-value gap that separates retained from discarded directions.
pub const DIMENSION_GAP: f64 = 10.0;

/// Number of leading singular values before the first gap of at least
/// [`DIMENSION_GAP`]; the full count when there is no such gap.
pub(crate) fn gap_rank(singular_values: &[f64]) -> usize {
    let mut s = singular_values.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    if s.is_empty() || s[0] == 0.0 {
        return 0;
    }
    for i in 1..s.len() {
        if s[i] * DIMENSION_GAP < s[i - 1] {
            return i;
        }
    }
    s.len()
}

/// Local dimension of a point cloud: PCA of each point's `k` nearest
/// neighbours, reduced to the most frequent rank (ties go to the lower
/// dimension).
pub(crate) fn local_dimension(points: &[&Vec<f64>], k: usize) -> usize {
    let n = points.first().map_or(0, |p| p.len());
    if points.len() < 3 || n == 0 {
        return 0;
    }
    let k = k.min(points.len());
    let mut tree = KdTree::new(n);
    for (i, p) in points.iter().enumerate() {
        tree.add(p.as_slice(), i).expect("finite coordinates");
    }
    // Cap the number of probes; evenly spaced probes keep this deterministic.
    let probes = points.len().min(400);
    let mut votes = vec![0usize; n + 1];
    for t in 0..probes {
        let i = t * points.len() / probes;
        let Ok(nn) = tree.nearest(points[i], k, &squared_euclidean) else { continue };
        let mut m = DMatrix::zeros(nn.len(), n);
        let mut mean = vec![0.0; n];
        for (_, &j) in &nn {
            for c in 0..n {
                mean[c] += points[j][c] / nn.len() as f64;
            }
        }
        for (r, (_, &j)) in nn.iter().enumerate() {
            for c in 0..n {
                m[(r, c)] = points[j][c] - mean[c];
            }
        }
        let sv = m.singular_values();
        votes[gap_rank(sv.as_slice())] += 1;
    }
    let mut best = 0;
    for d in 0..votes.len() {
        if votes[d] > votes[best] {
            best = d;
        }
    }
    best
}

/// Hausdorff distance between two point clouds in chart coordinates.
pub fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    directed(a, b).max(directed(b, a))
}

fn directed(from: &[Vec<f64>], to: &[Vec<f64>]) -> f64 {
    let Some(first) = to.first() else { return f64::INFINITY };
    let mut tree = KdTree::new(first.len());
    for (i, p) in to.iter().enumerate() {
        tree.add(p.as_slice(), i).expect("finite coordinates");
    }
    from.iter()
        .map(|p| tree.nearest(p, 1, &squared_euclidean).ok().and_then(|v| v.first().map(|x| x.0)).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
        .sqrt()
}

/// Deterministic choice among candidates: smallest residual, then smallest
/// coordinates.
pub(crate) fn better(a: (&[f64], f64), b: (&[f64], f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| lex_cmp(a.0, b.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedup_keeps_first_in_sorted_order() {
        let pts = vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 0.0], 0.0), (vec![1e-10, 0.0], 0.0), (vec![0.5, 0.0], 0.0)];
        let kept = dedup(pts, 1e-9);
        let coords: Vec<_> = kept.into_iter().map(|p| p.0).collect();
        assert_eq!(coords, vec![vec![0.0, 0.0], vec![0.5, 0.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn components_split_on_gaps() {
        let pts: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 * 0.1, 0.0]).chain((0..5).map(|i| vec![5.0 + i as f64 * 0.1, 1.0])).collect();
        let c = components(&pts, 0.15);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].len(), 10);
        assert_eq!(c[1].len(), 5);
    }

    #[test]
    fn local_dimension_of_line_and_plane() {
        let line: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64 * 0.1, 0.2 * i as f64 * 0.1, -0.3]).collect();
        let refs: Vec<&Vec<f64>> = line.iter().collect();
        assert_eq!(local_dimension(&refs, 10), 1);
        let plane: Vec<Vec<f64>> = (0..100).map(|i| vec![(i % 10) as f64, (i / 10) as f64, 1.0]).collect();
        let refs: Vec<&Vec<f64>> = plane.iter().collect();
        assert_eq!(local_dimension(&refs, 12), 2);
    }

    #[test]
    fn hausdorff_of_parallel_lines() {
        let a: Vec<Vec<f64>> = (0..=20).map(|i| vec![i as f64 * 0.1, 0.0]).collect();
        let b: Vec<Vec<f64>> = (0..=20).map(|i| vec![i as f64 * 0.1, 1.0]).collect();
        assert!((hausdorff(&a, &b) - 1.0).abs() < 1e-15);
        assert_eq!(hausdorff(&a, &a), 0.0);
    }
}
