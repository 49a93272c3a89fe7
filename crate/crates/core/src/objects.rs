//! Geometrical objects as sampled point sets: segments, straights of both
//! kinds and cylinders, each the zero set of a residual written through σ.

use std::io::Write;

use serde::Serialize;

use crate::algebra::{collinearity_gram, length, parallelism_residual, triangle_area, triangle_functions, two_origin_collinearity_gram};
use crate::error::{Error, Result};
use crate::point::{BoundingBox, Point, PointPairVector, WorldFunction};
use crate::solvers::{hausdorff, solve_scalar_zero_set, Refinement, SolutionSet, SolveOptions};

/// The defining condition of an object, with its chart-coordinate inputs.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(tag = "object", rename_all = "snake_case")]
pub enum ObjectSpec {
    /// F3(P0, R, P1) = 0.
    SegmentByTriangle { p0: Vec<f64>, p1: Vec<f64> },
    /// P0P1 ↑↑ P0R with |P0R| ≤ |P0P1|.
    SegmentByParallelism { p0: Vec<f64>, p1: Vec<f64> },
    /// P0P1 ∥ P0R.
    StraightFirstKind { p0: Vec<f64>, p1: Vec<f64> },
    /// P0P1 ∥ Q0R.
    StraightSecondKind { p0: Vec<f64>, p1: Vec<f64>, q0: Vec<f64> },
    /// S(P0, P1, R) = S(P0, P1, Q).
    Cylinder { p0: Vec<f64>, p1: Vec<f64>, q: Vec<f64> },
}

impl ObjectSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ObjectSpec::SegmentByTriangle { .. } => "segment_by_triangle",
            ObjectSpec::SegmentByParallelism { .. } => "segment_by_parallelism",
            ObjectSpec::StraightFirstKind { .. } => "straight_first_kind",
            ObjectSpec::StraightSecondKind { .. } => "straight_second_kind",
            ObjectSpec::Cylinder { .. } => "cylinder",
        }
    }

    fn endpoints(&self) -> (&[f64], &[f64]) {
        match self {
            ObjectSpec::SegmentByTriangle { p0, p1 }
            | ObjectSpec::SegmentByParallelism { p0, p1 }
            | ObjectSpec::StraightFirstKind { p0, p1 }
            | ObjectSpec::StraightSecondKind { p0, p1, .. }
            | ObjectSpec::Cylinder { p0, p1, .. } => (p0, p1),
        }
    }

    fn inputs(&self) -> Vec<&[f64]> {
        let (p0, p1) = self.endpoints();
        match self {
            ObjectSpec::StraightSecondKind { q0, .. } => vec![p0, p1, q0],
            ObjectSpec::Cylinder { q, .. } => vec![p0, p1, q],
            _ => vec![p0, p1],
        }
    }

    pub fn dimension(&self) -> usize {
        self.endpoints().0.len()
    }

    /// Checks arities and the per-object preconditions.
    pub fn validate(&self, g: &dyn WorldFunction) -> Result<()> {
        let n = g.domain().chart_dimension().ok_or_else(|| Error::Validation("point-set objects need a chart geometry".into()))?;
        for p in self.inputs() {
            g.domain().check(&Point::from(p))?;
            if p.len() != n {
                return Err(Error::Arity { expected: n, found: p.len() });
            }
        }
        let (p0, p1) = self.endpoints();
        let (a, b) = (Point::from(p0), Point::from(p1));
        match self {
            ObjectSpec::SegmentByTriangle { .. } => {
                triangle_functions(g, &a, &a, &b)?;
            }
            ObjectSpec::SegmentByParallelism { .. } => {
                length(g, &a, &b)?;
            }
            ObjectSpec::StraightFirstKind { .. } | ObjectSpec::StraightSecondKind { .. } | ObjectSpec::Cylinder { .. } => {
                if p0 == p1 {
                    return Err(Error::Precondition(format!("{} needs P0 ≠ P1", self.name())));
                }
                if let ObjectSpec::Cylinder { q, .. } = self {
                    triangle_area(g, &a, &b, &Point::from(q.as_slice()))?;
                }
            }
        }
        Ok(())
    }

    /// The defining residual at R.
    pub fn residual(&self, g: &dyn WorldFunction, r: &[f64]) -> Result<f64> {
        let (p0, p1) = self.endpoints();
        let (a, b, r) = (Point::from(p0), Point::from(p1), Point::from(r));
        match self {
            ObjectSpec::SegmentByTriangle { .. } => Ok(triangle_functions(g, &a, &r, &b)?.f3),
            ObjectSpec::SegmentByParallelism { .. } => parallelism_residual(g, &PointPairVector::new(a.clone(), b), &PointPairVector::new(a, r)),
            ObjectSpec::StraightFirstKind { .. } => collinearity_gram(g, &PointPairVector::new(a.clone(), b), &PointPairVector::new(a, r)),
            ObjectSpec::StraightSecondKind { q0, .. } => {
                two_origin_collinearity_gram(g, &PointPairVector::new(a, b), &PointPairVector::new(Point::from(q0.as_slice()), r))
            }
            ObjectSpec::Cylinder { q, .. } => Ok(triangle_area(g, &a, &b, &r)? - triangle_area(g, &a, &b, &Point::from(q.as_slice()))?),
        }
    }

    /// Side conditions beyond the residual (the length cap of the
    /// parallelism segment).
    pub fn admits(&self, g: &dyn WorldFunction, r: &[f64], tol: f64) -> Result<bool> {
        match self {
            ObjectSpec::SegmentByParallelism { p0, p1 } => {
                let a = Point::from(p0.as_slice());
                Ok(length(g, &a, &Point::from(r))? <= length(g, &a, &Point::from(p1.as_slice()))? + tol)
            }
            _ => Ok(true),
        }
    }

    /// Points that belong to the object by construction.
    fn anchors(&self) -> Vec<Vec<f64>> {
        let (p0, p1) = self.endpoints();
        match self {
            ObjectSpec::StraightSecondKind { q0, .. } => vec![q0.clone()],
            _ => vec![p0.to_vec(), p1.to_vec()],
        }
    }

    /// Codimension of the object in a generic n-dimensional geometry.
    fn codimension(&self) -> usize {
        match self {
            ObjectSpec::Cylinder { .. } => 1,
            _ => self.dimension().saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    pub spec: ObjectSpec,
    pub geometry: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentSummary {
    pub representative: Vec<f64>,
    pub local_dimension: usize,
    pub size: usize,
}

/// Points whose defining residual is at most `tolerance` in magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledPointSet {
    pub points: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub generator: Generator,
    pub components: Vec<ComponentSummary>,
    pub searched_region: BoundingBox,
}

impl SampledPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest local dimension over the connected components.
    pub fn max_local_dimension(&self) -> usize {
        self.components.iter().map(|c| c.local_dimension).max().unwrap_or(0)
    }

    /// Re-evaluates the residual at every stored point and returns the
    /// largest magnitude.
    pub fn recheck(&self, g: &dyn WorldFunction) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for p in &self.points {
            worst = worst.max(self.generator.spec.residual(g, p)?.abs());
        }
        Ok(worst)
    }

    /// One row per point: coordinates then residual.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n = self.generator.spec.dimension();
        let mut header: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        header.push("residual".into());
        w.write_record(&header).map_err(csv_error)?;
        for (p, r) in self.points.iter().zip(&self.residuals) {
            let row: Vec<String> = p.iter().chain(std::iter::once(r)).map(|v| format!("{v:e}")).collect();
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Samples `spec` over `region`. Objects of codimension above one are not
/// met by grid lines, so they are refined by Gauss–Newton from seeds unless
/// the caller chose a refinement explicitly.
pub fn sample_object(g: &dyn WorldFunction, spec: &ObjectSpec, region: &BoundingBox, opts: &SolveOptions) -> Result<SampledPointSet> {
    spec.validate(g)?;
    if region.dimension() != spec.dimension() {
        return Err(Error::Arity { expected: spec.dimension(), found: region.dimension() });
    }
    let mut opts = opts.clone();
    if opts.refinement == Refinement::Auto && spec.codimension() > 1 {
        opts.refinement = Refinement::Newton;
    }
    let degenerate = {
        let (p0, p1) = spec.endpoints();
        p0 == p1
    };
    let set = if degenerate {
        None
    } else {
        let residual = |x: &[f64]| spec.residual(g, x);
        match solve_scalar_zero_set(&residual, region, &opts) {
            Ok(s) => Some(s),
            Err(e) if e.is_solver_failure() => None,
            Err(e) => return Err(e),
        }
    };
    assemble(g, spec, region, opts.tol, set)
}

fn assemble(g: &dyn WorldFunction, spec: &ObjectSpec, region: &BoundingBox, tol: f64, set: Option<SolutionSet>) -> Result<SampledPointSet> {
    let mut points: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut components = Vec::new();
    if let Some(set) = &set {
        for c in &set.clusters {
            components.push(ComponentSummary { representative: c.representative.clone(), local_dimension: c.local_dimension, size: c.points.len() });
        }
        points = set.points();
    }
    for a in spec.anchors() {
        if region.contains(&a) {
            let r = spec.residual(g, &a)?;
            if r.abs() <= tol && !points.iter().any(|(p, _)| p == &a) {
                points.push((a, r));
            }
        }
    }
    let mut kept = Vec::with_capacity(points.len());
    for (p, r) in points {
        if spec.admits(g, &p, tol)? {
            kept.push((p, r));
        }
    }
    kept.sort_by(|a, b| crate::point::lex_cmp(&a.0, &b.0));
    let (points, residuals) = kept.into_iter().unzip();
    Ok(SampledPointSet {
        points,
        residuals,
        tolerance: tol,
        generator: Generator { spec: spec.clone(), geometry: g.describe() },
        components,
        searched_region: region.clone(),
    })
}

pub fn segment_by_triangle(g: &dyn WorldFunction, p0: &[f64], p1: &[f64], region: &BoundingBox, opts: &SolveOptions) -> Result<SampledPointSet> {
    sample_object(g, &ObjectSpec::SegmentByTriangle { p0: p0.to_vec(), p1: p1.to_vec() }, region, opts)
}

pub fn segment_by_parallelism(g: &dyn WorldFunction, p0: &[f64], p1: &[f64], region: &BoundingBox, opts: &SolveOptions) -> Result<SampledPointSet> {
    sample_object(g, &ObjectSpec::SegmentByParallelism { p0: p0.to_vec(), p1: p1.to_vec() }, region, opts)
}

pub fn straight_first_kind(g: &dyn WorldFunction, p0: &[f64], p1: &[f64], region: &BoundingBox, opts: &SolveOptions) -> Result<SampledPointSet> {
    sample_object(g, &ObjectSpec::StraightFirstKind { p0: p0.to_vec(), p1: p1.to_vec() }, region, opts)
}

pub fn straight_second_kind(g: &dyn WorldFunction, p0: &[f64], p1: &[f64], q0: &[f64], region: &BoundingBox, opts: &SolveOptions) -> Result<SampledPointSet> {
    sample_object(g, &ObjectSpec::StraightSecondKind { p0: p0.to_vec(), p1: p1.to_vec(), q0: q0.to_vec() }, region, opts)
}

pub fn cylinder(g: &dyn WorldFunction, p0: &[f64], p1: &[f64], q: &[f64], region: &BoundingBox, opts: &SolveOptions) -> Result<SampledPointSet> {
    sample_object(g, &ObjectSpec::Cylinder { p0: p0.to_vec(), p1: p1.to_vec(), q: q.to_vec() }, region, opts)
}

/// Symmetric Hausdorff distance in chart coordinates, and whether it is
/// within the sum of the two tolerances.
pub fn set_coincidence(a: &SampledPointSet, b: &SampledPointSet) -> Result<(f64, bool)> {
    set_coincidence_with(a, b, a.tolerance + b.tolerance)
}

pub fn set_coincidence_with(a: &SampledPointSet, b: &SampledPointSet, tol: f64) -> Result<(f64, bool)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("set coincidence needs two non-empty point sets".into()));
    }
    if a.generator.spec.dimension() != b.generator.spec.dimension() {
        return Err(Error::Arity { expected: a.generator.spec.dimension(), found: b.generator.spec.dimension() });
    }
    let d = hausdorff(&a.points, &b.points);
    Ok((d, d <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometries::{make_euclidean, make_offset_deformed};

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    fn boxed(lo: &[f64], hi: &[f64]) -> BoundingBox {
        BoundingBox::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn euclidean_segment_lies_on_the_axis() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-1.0, -1.0], &[3.0, 1.0]);
        let s = segment_by_triangle(e2.as_ref(), &[0.0, 0.0], &[2.0, 0.0], &region, &opts()).unwrap();
        assert!(s.len() > 10);
        for p in &s.points {
            assert!(p[1].abs() <= 1e-6, "{p:?}");
            assert!(p[0] >= -1e-6 && p[0] <= 2.0 + 1e-6);
        }
        assert!(s.points.contains(&vec![0.0, 0.0]) && s.points.contains(&vec![2.0, 0.0]));
        assert!(s.recheck(e2.as_ref()).unwrap() <= s.tolerance);
    }

    #[test]
    fn segment_definitions_agree() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-0.7, -1.1], &[2.3, 1.3]);
        let (p0, p1) = ([0.1, -0.4], [1.7, 0.9]);
        let a = segment_by_triangle(e2.as_ref(), &p0, &p1, &region, &opts()).unwrap();
        let b = segment_by_parallelism(e2.as_ref(), &p0, &p1, &region, &opts()).unwrap();
        let (d, _) = set_coincidence(&a, &b).unwrap();
        assert!(d <= 1e-6, "hausdorff {d}");
    }

    #[test]
    fn degenerate_segment_is_one_point() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-1.0, -1.0], &[1.0, 1.0]);
        for s in [
            segment_by_triangle(e2.as_ref(), &[0.25, 0.5], &[0.25, 0.5], &region, &opts()).unwrap(),
            segment_by_parallelism(e2.as_ref(), &[0.25, 0.5], &[0.25, 0.5], &region, &opts()).unwrap(),
        ] {
            assert_eq!(s.points, vec![vec![0.25, 0.5]]);
        }
    }

    #[test]
    fn straight_passes_through_both_points() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-2.0, -2.0], &[2.0, 2.0]);
        let s = straight_first_kind(e2.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &region, &opts()).unwrap();
        assert!(s.points.iter().all(|p| p[1].abs() < 1e-4));
        assert!(s.points.iter().any(|p| p[0] < -1.5) && s.points.iter().any(|p| p[0] > 1.5));
        assert!(s.points.contains(&vec![1.0, 0.0]));
        assert!(matches!(
            straight_first_kind(e2.as_ref(), &[1.0, 0.0], &[1.0, 0.0], &region, &opts()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn second_kind_with_shared_origin_is_first_kind() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-2.0, -2.0], &[2.0, 2.0]);
        let a = straight_first_kind(e2.as_ref(), &[0.0, 0.0], &[1.0, 1.0], &region, &opts()).unwrap();
        let b = straight_second_kind(e2.as_ref(), &[0.0, 0.0], &[1.0, 1.0], &[0.0, 0.0], &region, &opts()).unwrap();
        assert_eq!(set_coincidence(&a, &b).unwrap().0, 0.0);
    }

    #[test]
    fn second_kind_off_the_line_is_the_parallel() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-2.0, -2.0], &[2.0, 2.0]);
        let s = straight_second_kind(e2.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &[0.3, 1.0], &region, &opts()).unwrap();
        assert!(s.len() > 10);
        assert!(s.points.iter().all(|p| (p[1] - 1.0).abs() < 1e-4), "{:?}", s.points);
    }

    #[test]
    fn sphere_second_kind_crosses_itself_at_q0() {
        // Where the plane has one parallel through Q0, the sphere has two
        // curves crossing at Q0: the two-dimensional form of a tube.
        let g = crate::riemann::AnalyticSphere::new(1.0).unwrap();
        let q0 = [1.0, 0.9];
        let region = boxed(&[0.5, -0.6], &[2.4, 1.6]);
        let s = straight_second_kind(&g, &[1.2, 0.2], &[1.4, 0.5], &q0, &region, &opts().with_grid(65)).unwrap();
        assert_eq!(s.max_local_dimension(), 1);
        assert!(s.points.iter().any(|p| (p[0] - q0[0]).hypot(p[1] - q0[1]) < 1e-9));
        // Tangent directions (mod π) of nearby points, in the frame (dθ, sin θ dφ).
        let mut dirs: Vec<f64> = s
            .points
            .iter()
            .filter(|p| (0.03..0.15).contains(&(p[0] - q0[0]).hypot(p[1] - q0[1])))
            .map(|p| ((p[1] - q0[1]) * q0[0].sin()).atan2(p[0] - q0[0]).rem_euclid(std::f64::consts::PI))
            .collect();
        dirs.sort_by(f64::total_cmp);
        let spread = dirs.last().unwrap() - dirs.first().unwrap();
        let widest_gap = dirs.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
        assert!(dirs.len() >= 8 && spread > 0.2 && widest_gap > 0.1, "{dirs:?}");
    }

    #[test]
    fn euclidean_cylinder_is_round() {
        let e3 = make_euclidean(3).unwrap();
        let region = boxed(&[-1.5, -1.5, -0.5], &[1.5, 1.5, 1.5]);
        let s = cylinder(e3.as_ref(), &[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0], &region, &SolveOptions::default().with_grid(17)).unwrap();
        assert!(s.len() > 50);
        for p in &s.points {
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-8, "{p:?}");
        }
        assert_eq!(s.max_local_dimension(), 2);
    }

    #[test]
    fn cylinder_through_the_axis_is_the_axis() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-1.0, -1.0], &[1.0, 1.0]);
        let s = cylinder(e2.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &[0.5, 0.0], &region, &opts()).unwrap();
        assert!(!s.is_empty());
        assert!(s.points.iter().all(|p| p[1].abs() < 1e-6));
    }

    #[test]
    fn offset_geometry_segment_keeps_only_endpoints() {
        let g = make_offset_deformed(make_euclidean(2).unwrap(), 1.0).unwrap();
        let region = boxed(&[-1.0, -1.0], &[3.0, 1.0]);
        let s = segment_by_triangle(g.as_ref(), &[0.0, 0.0], &[2.0, 0.0], &region, &opts()).unwrap();
        assert_eq!(s.points, vec![vec![0.0, 0.0], vec![2.0, 0.0]]);
    }

    #[test]
    fn coincidence_of_parallel_lines() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-1.0, -1.0], &[1.0, 1.0]);
        let a = straight_first_kind(e2.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &region, &opts()).unwrap();
        let b = straight_second_kind(e2.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &region, &opts()).unwrap();
        assert_eq!(set_coincidence(&a, &a).unwrap(), (0.0, true));
        let (d, same) = set_coincidence(&a, &b).unwrap();
        assert!((d - 1.0).abs() < 1e-6 && !same);
    }

    #[test]
    fn csv_and_json_export() {
        let e2 = make_euclidean(2).unwrap();
        let region = boxed(&[-1.0, -1.0], &[1.0, 1.0]);
        let s = straight_first_kind(e2.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &region, &SolveOptions::default().with_grid(5)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x0,x1,residual\n"));
        assert_eq!(text.lines().count(), s.len() + 1);
        let json: serde_json::Value = serde_json::from_str(&s.to_json().unwrap()).unwrap();
        assert_eq!(json["generator"]["spec"]["object"], "straight_first_kind");
    }
}
