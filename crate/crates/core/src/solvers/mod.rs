//! Solution sets of residual systems over a bounding box.
//!
//! The pipeline is the same for every caller:
//!
//! 1. evaluate the residual on a regular grid (optionally masked);
//! 2. refine: scalar residuals are solved along grid lines (sign changes
//!    and tangential minima of |r|), which samples a level set at the same
//!    canonical places whatever residual describes it; systems are refined
//!    by damped Gauss–Newton from seed nodes;
//! 3. deduplicate, link into connected components, classify each component
//!    as isolated or as a continuum with a PCA local dimension.
//!
//! Nothing outside the searched box is reported.

pub mod grid;

mod cluster;
pub(crate) mod refine;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use cluster::{hausdorff, DIMENSION_GAP};
pub use grid::{Grid, GridMask, GridSpec};

use crate::algebra::{equivalence_residual, is_equivalent, RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::point::{BoundingBox, Domain, Point, PointPairVector, WorldFunction};
use refine::{NewtonSettings, bracketed_min_abs, bracketed_root, eval, norm_inf};

/// A vector residual over chart coordinates.
pub type ResidualFn<'a> = dyn Fn(&[f64]) -> Result<Vec<f64>> + Sync + 'a;

/// How seeds are turned into solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// Grid-line searches for scalar residuals, falling back to
    /// Gauss–Newton when they find nothing; Gauss–Newton for systems.
    #[default]
    Auto,
    AxisLines,
    Newton,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Residual bound for accepting a point (∞-norm over components).
    pub tol: f64,
    pub grid: GridSpec,
    pub max_iterations: usize,
    /// Jacobian finite-difference step relative to the region extent.
    pub jacobian_step: f64,
    pub refinement: Refinement,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: RESIDUAL_TOL, grid: GridSpec::default(), max_iterations: 50, jacobian_step: 1e-6, refinement: Refinement::Auto }
    }
}

impl SolveOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_grid(mut self, points_per_axis: usize) -> Self {
        self.grid.points_per_axis = points_per_axis;
        self
    }

    pub fn with_mask(mut self, mask: GridMask) -> Self {
        self.grid.mask = Some(mask);
        self
    }

    pub fn with_refinement(mut self, refinement: Refinement) -> Self {
        self.refinement = refinement;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Validation(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Validation("max_iterations must be positive".into()));
        }
        if !(self.jacobian_step > 0.0) {
            return Err(Error::Validation("jacobian_step must be positive".into()));
        }
        Ok(())
    }
}

/// One connected group of solutions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub representative: Vec<f64>,
    pub residual_norm: f64,
    /// 0 for an isolated solution, otherwise the estimated dimension of the
    /// continuum.
    pub local_dimension: usize,
    pub points: Vec<Vec<f64>>,
    pub point_residuals: Vec<f64>,
}

impl Cluster {
    pub fn is_continuum(&self) -> bool {
        self.local_dimension > 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSet {
    pub clusters: Vec<Cluster>,
    /// Linking distance between points of one cluster.
    pub cluster_radius: f64,
    pub tolerance: f64,
    pub searched_region: BoundingBox,
    pub seeds: usize,
}

impl SolutionSet {
    pub fn representatives(&self) -> Vec<&[f64]> {
        self.clusters.iter().map(|c| c.representative.as_slice()).collect()
    }

    /// All refined points, sorted lexicographically.
    pub fn points(&self) -> Vec<(Vec<f64>, f64)> {
        let mut all: Vec<(Vec<f64>, f64)> = self
            .clusters
            .iter()
            .flat_map(|c| c.points.iter().cloned().zip(c.point_residuals.iter().copied()))
            .collect();
        all.sort_by(|a, b| crate::point::lex_cmp(&a.0, &b.0));
        all
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn count(&self) -> SolutionCount {
        if self.clusters.iter().any(Cluster::is_continuum) {
            SolutionCount::Continuum
        } else {
            SolutionCount::Finite(self.clusters.len())
        }
    }
}

/// Number of solutions: finite, or a continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionCount {
    Finite(usize),
    Continuum,
}

impl Serialize for SolutionCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SolutionCount::Finite(n) => s.serialize_u64(*n as u64),
            SolutionCount::Continuum => s.serialize_str("continuum"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultivarianceReport {
    pub count: SolutionCount,
    pub dimensions: Vec<usize>,
    pub is_single_variant: bool,
}

impl MultivarianceReport {
    pub fn from_solutions(set: &SolutionSet) -> Self {
        let dimensions: Vec<usize> = set.clusters.iter().map(|c| c.local_dimension).collect();
        Self { count: set.count(), is_single_variant: dimensions == [0], dimensions }
    }
}

/// Clusters with fewer points than this are never called continua.
const CONTINUUM_MIN_POINTS: usize = 10;
/// Neighbourhood size for the PCA dimension estimate.
const PCA_NEIGHBOURS: usize = 12;

/// Zero set of an m-component residual inside `region`.
pub fn solve_zero_set(residual: &ResidualFn, m: usize, region: &BoundingBox, opts: &SolveOptions) -> Result<SolutionSet> {
    opts.validate()?;
    if m == 0 {
        return Err(Error::Validation("residual must have at least one component".into()));
    }
    let grid = Grid::new(region, &opts.grid)?;
    let values: Vec<Option<Vec<f64>>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| if grid.is_active(idx) { eval(residual, &grid.node(idx)) } else { None })
        .collect();
    if let Some(r) = values.iter().flatten().next() {
        if r.len() != m {
            return Err(Error::Validation(format!("residual has {} components, expected {m}", r.len())));
        }
    } else {
        return Err(Error::NoConvergence("residual is undefined on every active grid node".into()));
    }

    let extent = region.extent();
    let newton = NewtonSettings { max_iterations: opts.max_iterations, jacobian_step: opts.jacobian_step * extent };
    let use_lines = m == 1 && opts.refinement != Refinement::Newton;
    let (mut candidates, mut seeds) = if use_lines { axis_line_candidates(residual, &grid, &values, opts.tol) } else { (Vec::new(), 0) };
    let mut from_newton = false;
    if !use_lines || (candidates.is_empty() && opts.refinement == Refinement::Auto) {
        let seed_nodes = newton_seeds(&grid, &values);
        seeds = seed_nodes.len();
        let slack = 1e-9 * extent;
        candidates = seed_nodes
            .par_iter()
            .filter_map(|&idx| {
                let (x, r) = refine::gauss_newton(residual, &grid.node(idx), m, newton)?;
                let inside = x.iter().zip(region.lower.iter().zip(&region.upper)).all(|(v, (lo, hi))| *v >= lo - slack && *v <= hi + slack);
                let n = norm_inf(&r);
                (inside && n <= opts.tol).then_some((x, n))
            })
            .collect();
        from_newton = true;
    }

    let points = cluster::dedup(candidates, 3.0 * opts.tol);
    let h = grid.spacing();
    let link = 2.0 * grid.cell_diagonal();
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.0.clone()).collect();
    let mut clusters = Vec::new();
    for comp in cluster::components(&coords, link) {
        let members: Vec<&Vec<f64>> = comp.iter().map(|&i| &coords[i]).collect();
        if members.len() >= CONTINUUM_MIN_POINTS && cluster::extent(&members) > 0.5 * h {
            let dim = cluster::local_dimension(&members, PCA_NEIGHBOURS).max(1);
            clusters.push(make_cluster(comp.iter().map(|&i| points[i].clone()).collect(), dim));
            continue;
        }
        // Too small to be a continuum: split into isolated solutions.
        let sub_coords: Vec<Vec<f64>> = members.iter().map(|p| (*p).clone()).collect();
        for sub in cluster::components(&sub_coords, 0.05 * h) {
            let mut c = make_cluster(sub.iter().map(|&j| points[comp[j]].clone()).collect(), 0);
            if from_newton {
                polish_isolated(residual, m, &mut c, opts.tol, newton, 1e-5 * extent, 0.05 * h);
            }
            clusters.push(c);
        }
    }
    clusters.sort_by(|a, b| crate::point::lex_cmp(&a.representative, &b.representative));
    Ok(SolutionSet { clusters, cluster_radius: link, tolerance: opts.tol, searched_region: region.clone(), seeds })
}

/// Zero set of a scalar residual.
pub fn solve_scalar_zero_set(residual: &(dyn Fn(&[f64]) -> Result<f64> + Sync), region: &BoundingBox, opts: &SolveOptions) -> Result<SolutionSet> {
    let wrapped = |x: &[f64]| residual(x).map(|v| vec![v]);
    solve_zero_set(&wrapped, 1, region, opts)
}

fn make_cluster(mut pts: Vec<(Vec<f64>, f64)>, local_dimension: usize) -> Cluster {
    pts.sort_by(|a, b| crate::point::lex_cmp(&a.0, &b.0));
    let best = pts.iter().min_by(|a, b| cluster::better((&a.0, a.1), (&b.0, b.1))).expect("non-empty cluster").clone();
    let (points, point_residuals) = pts.into_iter().unzip();
    Cluster { representative: best.0, residual_norm: best.1, local_dimension, points, point_residuals }
}

fn polish_isolated(residual: &ResidualFn, m: usize, c: &mut Cluster, tol: f64, s: NewtonSettings, gradient_step: f64, max_move: f64) {
    let Some(y) = refine::polish_singular(residual, &c.representative, m, s, gradient_step) else { return };
    let Some(r) = eval(residual, &y) else { return };
    let moved = y.iter().zip(&c.representative).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let n = norm_inf(&r);
    if n <= tol && moved <= max_move {
        c.points.insert(0, y.clone());
        c.point_residuals.insert(0, n);
        c.representative = y;
        c.residual_norm = n;
    }
}

/// Nodes where every residual component is no larger than its largest
/// change towards an axis neighbour, i.e. a linear model could vanish
/// within one cell.
fn newton_seeds(grid: &Grid, values: &[Option<Vec<f64>>]) -> Vec<usize> {
    (0..grid.len())
        .filter(|&idx| {
            let Some(r) = &values[idx] else { return false };
            let mut reach = vec![0.0f64; r.len()];
            let mut any = false;
            for axis in 0..grid.dimension() {
                for nb in grid.axis_neighbours(idx, axis).into_iter().flatten() {
                    if let Some(rn) = &values[nb] {
                        any = true;
                        for k in 0..r.len() {
                            reach[k] = reach[k].max((rn[k] - r[k]).abs());
                        }
                    }
                }
            }
            any && r.iter().zip(&reach).all(|(v, d)| v.abs() <= *d)
        })
        .collect()
}

/// Candidates found on one grid line, plus the number of residual calls.
type LineHits = (Vec<(Vec<f64>, f64)>, usize);

/// Roots of a scalar residual along every grid line: sign changes between
/// neighbouring nodes, exact zeros at nodes, and interior minima of |r|
/// that reach the tolerance (tangential zeros).
fn axis_line_candidates(residual: &ResidualFn, grid: &Grid, values: &[Option<Vec<f64>>], tol: f64) -> (Vec<(Vec<f64>, f64)>, usize) {
    let d = grid.dimension();
    let n = grid.n;
    let v = |idx: usize| values[idx].as_ref().map(|r| r[0]);
    let lines: Vec<(usize, usize)> = (0..d).flat_map(|axis| grid.line_starts(axis).into_iter().map(move |s| (axis, s))).collect();
    let found: Vec<LineHits> = lines
        .par_iter()
        .map(|&(axis, start)| {
            let stride = grid.stride(axis);
            let base = grid.node(start);
            let at = |t: f64| -> f64 {
                let mut x = base.clone();
                x[axis] = t;
                eval(residual, &x).map_or(f64::NAN, |r| r[0])
            };
            let mut out = Vec::new();
            let mut brackets = 0;
            for i in 0..n {
                let idx = start + i * stride;
                let Some(ri) = v(idx) else { continue };
                let ti = grid.coordinate(axis, i);
                if ri == 0.0 {
                    out.push((point_on_line(&base, axis, ti), 0.0));
                    continue;
                }
                let next = if i + 1 < n { v(idx + stride) } else { None };
                if let Some(rn) = next {
                    if ri * rn < 0.0 {
                        brackets += 1;
                        if let Some(t) = bracketed_root(at, ti, grid.coordinate(axis, i + 1)) {
                            let r = at(t).abs();
                            if r <= tol {
                                out.push((point_on_line(&base, axis, t), r));
                            }
                        }
                        continue;
                    }
                }
                let prev = if i > 0 { v(idx - stride) } else { None };
                let (Some(rp), Some(rn)) = (prev, next) else { continue };
                let local_min = ri.abs() <= rp.abs() && ri.abs() <= rn.abs() && rp * ri > 0.0 && rn * ri > 0.0;
                let reachable = ri.abs() <= (rp - ri).abs().max((rn - ri).abs());
                if local_min && reachable {
                    brackets += 1;
                    if let Some(t) = bracketed_min_abs(at, grid.coordinate(axis, i - 1), grid.coordinate(axis, i + 1)) {
                        let r = at(t).abs();
                        if r <= tol {
                            out.push((point_on_line(&base, axis, t), r));
                        }
                    }
                }
            }
            (out, brackets)
        })
        .collect();
    let mut all = Vec::new();
    let mut brackets = 0;
    for (pts, b) in found {
        all.extend(pts);
        brackets += b;
    }
    (all, brackets)
}

fn point_on_line(base: &[f64], axis: usize, t: f64) -> Vec<f64> {
    let mut x = base.to_vec();
    x[axis] = t;
    x
}

fn chart_dimension(g: &dyn WorldFunction) -> Result<usize> {
    g.domain()
        .chart_dimension()
        .ok_or_else(|| Error::Representation("continuous solvers need a chart geometry; use the discrete variant".into()))
}

fn check_region(g: &dyn WorldFunction, region: &BoundingBox) -> Result<()> {
    region.validate()?;
    let n = chart_dimension(g)?;
    if region.dimension() != n {
        return Err(Error::Arity { expected: n, found: region.dimension() });
    }
    Ok(())
}

/// All Q1 in `region` with (Q0, Q1) equivalent to `a`.
pub fn solve_equivalence(g: &dyn WorldFunction, a: &PointPairVector, q0: &Point, region: &BoundingBox, opts: &SolveOptions) -> Result<SolutionSet> {
    check_region(g, region)?;
    g.domain().check(&a.origin)?;
    g.domain().check(&a.tip)?;
    g.domain().check(q0)?;
    let residual = |x: &[f64]| -> Result<Vec<f64>> {
        let (r1, r2) = equivalence_residual(g, a, &PointPairVector::new(q0.clone(), Point::from(x)))?;
        Ok(vec![r1, r2])
    };
    solve_zero_set(&residual, 2, region, opts)
}

/// Exhaustive equivalence search over a finite carrier set.
pub fn solve_equivalence_discrete(g: &dyn WorldFunction, a: &PointPairVector, q0: &Point, tol: f64) -> Result<Vec<usize>> {
    let Domain::Discrete { count } = g.domain() else {
        return Err(Error::Representation("discrete search needs a tabulated geometry".into()));
    };
    let mut out = Vec::new();
    for id in 0..*count {
        if is_equivalent(g, a, &PointPairVector::new(q0.clone(), Point::Discrete(id)), tol)? {
            out.push(id);
        }
    }
    Ok(out)
}

pub fn multivariance_report(g: &dyn WorldFunction, a: &PointPairVector, q0: &Point, region: &BoundingBox, opts: &SolveOptions) -> Result<MultivarianceReport> {
    Ok(MultivarianceReport::from_solutions(&solve_equivalence(g, a, q0, region, opts)?))
}

/// Vectors a eqv b and b eqv c with a not equivalent to c.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntransitivityWitness {
    pub a: PointPairVector,
    pub b: PointPairVector,
    pub c: PointPairVector,
    pub residual_ab: (f64, f64),
    pub residual_bc: (f64, f64),
    pub residual_ac: (f64, f64),
}

/// Box of half-width `half` centred on `q0 + (tip − origin)` in chart
/// coordinates; the natural place to look for equivalents of a vector.
pub fn translate_region(a: &PointPairVector, q0: &Point, half: f64) -> Result<BoundingBox> {
    let (Some(o), Some(t), Some(q)) = (a.origin.coords(), a.tip.coords(), q0.coords()) else {
        return Err(Error::Representation("translate_region needs coordinate points".into()));
    };
    let center: Vec<f64> = q.iter().zip(o.iter().zip(t)).map(|(q, (o, t))| q + (t - o)).collect();
    BoundingBox::around(&center, half)
}

/// Searches for an intransitivity witness: solves for every b = (Q0, ·)
/// equivalent to `a`, then for every c = (S0, ·) equivalent to each b, and
/// returns the first c (in deterministic order) whose residual against `a`
/// exceeds `separation`.
pub fn find_intransitivity_witness(
    g: &dyn WorldFunction,
    a: &PointPairVector,
    q0: &Point,
    s0: &Point,
    half_width: f64,
    separation: f64,
    opts: &SolveOptions,
) -> Result<Option<IntransitivityWitness>> {
    let region_b = translate_region(a, q0, half_width)?;
    let bs = solve_equivalence(g, a, q0, &region_b, opts)?;
    for cb in &bs.clusters {
        let b = PointPairVector::new(q0.clone(), Point::from(cb.representative.as_slice()));
        let region_c = translate_region(&b, s0, half_width)?;
        let cs = solve_equivalence(g, &b, s0, &region_c, opts)?;
        for cc in &cs.clusters {
            let c = PointPairVector::new(s0.clone(), Point::from(cc.representative.as_slice()));
            let residual_ab = equivalence_residual(g, a, &b)?;
            let residual_bc = equivalence_residual(g, &b, &c)?;
            let residual_ac = equivalence_residual(g, a, &c)?;
            let ok_ab = residual_ab.0.abs().max(residual_ab.1.abs()) <= opts.tol;
            let ok_bc = residual_bc.0.abs().max(residual_bc.1.abs()) <= opts.tol;
            if ok_ab && ok_bc && residual_ac.0.hypot(residual_ac.1) > separation {
                return Ok(Some(IntransitivityWitness { a: a.clone(), b, c, residual_ab, residual_bc, residual_ac }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometries::{make_euclidean, make_minkowski, make_tabulated};

    fn pp(o: &[f64], t: &[f64]) -> PointPairVector {
        PointPairVector::new(Point::from(o), Point::from(t))
    }

    #[test]
    fn euclidean_equivalence_is_the_translate() {
        let g = make_euclidean(3).unwrap();
        let a = pp(&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0]);
        let q0 = Point::from([0.0, 1.0, 0.0]);
        let region = BoundingBox::around(&[1.0, 1.0, 0.0], 1.2).unwrap();
        let set = solve_equivalence(g.as_ref(), &a, &q0, &region, &SolveOptions::default().with_grid(17)).unwrap();
        assert_eq!(set.clusters.len(), 1);
        let c = &set.clusters[0];
        assert_eq!(c.local_dimension, 0);
        let err: f64 = c.representative.iter().zip([1.0, 1.0, 0.0]).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8, "representative {:?}", c.representative);
        assert!(MultivarianceReport::from_solutions(&set).is_single_variant);
    }

    #[test]
    fn minkowski_timelike_and_spacelike() {
        let g = make_minkowski(3).unwrap();
        let o = Point::from([0.0; 3]);
        let opts = SolveOptions::default().with_grid(21);
        let region = BoundingBox::new(vec![-0.3, -1.3, -1.3], vec![2.3, 1.3, 1.3]).unwrap();
        let t = multivariance_report(g.as_ref(), &pp(&[0.0; 3], &[1.0, 0.0, 0.0]), &o, &region, &opts).unwrap();
        assert!(t.is_single_variant, "{t:?}");
        let region = BoundingBox::new(vec![-1.3, -0.2, -1.3], vec![1.3, 2.1, 1.3]).unwrap();
        let s = multivariance_report(g.as_ref(), &pp(&[0.0; 3], &[0.0, 1.0, 0.0]), &o, &region, &opts).unwrap();
        assert_eq!(s.count, SolutionCount::Continuum);
        assert_eq!(s.dimensions, vec![1]);
        assert!(!s.is_single_variant);
    }

    #[test]
    fn scalar_zero_sets() {
        let region = BoundingBox::around(&[0.0, 0.0, 0.0], 1.5).unwrap();
        let opts = SolveOptions::default().with_tol(1e-9).with_grid(17);
        let one = |_: &[f64]| -> Result<f64> { Ok(1.0) };
        assert!(solve_scalar_zero_set(&one, &region, &opts).unwrap().is_empty());
        let sphere = |x: &[f64]| -> Result<f64> { Ok(x.iter().map(|v| v * v).sum::<f64>() - 1.0) };
        let set = solve_scalar_zero_set(&sphere, &region, &opts).unwrap();
        assert_eq!(set.clusters.len(), 1);
        assert_eq!(set.clusters[0].local_dimension, 2);
        for (p, _) in set.points() {
            let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn refinement_improves_with_resolution() {
        // Two concentric circles: the count must not drop when the grid is
        // refined.
        let region = BoundingBox::around(&[0.0, 0.0], 1.5).unwrap();
        let f = |x: &[f64]| -> Result<f64> {
            let r = x[0].hypot(x[1]);
            Ok((r - 0.5) * (r - 1.0))
        };
        let mut last = 0;
        for n in [9, 17, 33, 65] {
            let set = solve_scalar_zero_set(&f, &region, &SolveOptions::default().with_grid(n)).unwrap();
            assert!(set.clusters.len() >= last, "grid {n}: {} clusters", set.clusters.len());
            last = set.clusters.len();
        }
        assert_eq!(last, 2);
    }

    #[test]
    fn representatives_reverify() {
        let g = make_minkowski(3).unwrap();
        let a = pp(&[0.0; 3], &[0.0, 1.0, 0.0]);
        let o = Point::from([0.0; 3]);
        let region = BoundingBox::new(vec![-1.3, -0.2, -1.3], vec![1.3, 2.1, 1.3]).unwrap();
        let set = solve_equivalence(g.as_ref(), &a, &o, &region, &SolveOptions::default().with_grid(17)).unwrap();
        for (p, _) in set.points() {
            let (r1, r2) = equivalence_residual(g.as_ref(), &a, &PointPairVector::new(o.clone(), Point::from(p.as_slice()))).unwrap();
            assert!(r1.abs() <= 1e-9 && r2.abs() <= 1e-9);
        }
    }

    #[test]
    fn discrete_search() {
        let g = make_tabulated(vec![vec![0.0, 0.5, 0.5], vec![0.5, 0.0, 0.5], vec![0.5, 0.5, 0.0]]).unwrap();
        let a = PointPairVector::new(Point::Discrete(0), Point::Discrete(1));
        let hits = solve_equivalence_discrete(g.as_ref(), &a, &Point::Discrete(0), 1e-9).unwrap();
        assert_eq!(hits, vec![1]);
    }

    #[test]
    fn options_are_validated() {
        let g = make_euclidean(2).unwrap();
        let a = pp(&[0.0, 0.0], &[1.0, 0.0]);
        let region = BoundingBox::around(&[1.0, 0.0], 1.0).unwrap();
        let o = Point::from([0.0, 0.0]);
        assert!(solve_equivalence(g.as_ref(), &a, &o, &region, &SolveOptions::default().with_tol(0.0)).is_err());
        assert!(solve_equivalence(g.as_ref(), &a, &o, &region, &SolveOptions::default().with_grid(1)).is_err());
        let bad = BoundingBox::around(&[1.0, 0.0, 0.0], 1.0).unwrap();
        assert!(matches!(solve_equivalence(g.as_ref(), &a, &o, &bad, &SolveOptions::default()), Err(Error::Arity { .. })));
    }
}
