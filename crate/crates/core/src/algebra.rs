//! Point-pair algebra expressed through σ alone.
//!
//! Nothing here assumes a linear structure on the carrier set: every
//! quantity is a combination of world-function values, so the same code runs
//! on Euclidean, Minkowski, deformed, tabulated and Riemannian geometries.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{Point, PointPairVector, WorldFunction};

/// Default bound on equivalence and parallelism residuals.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Default bound for identity checks and basis degeneracy.
pub const IDENTITY_TOL: f64 = 1e-10;

/// (a.b) = σ(P0,Q1) + σ(P1,Q0) − σ(P0,Q0) − σ(P1,Q1).
pub fn scalar_product(g: &dyn WorldFunction, a: &PointPairVector, b: &PointPairVector) -> Result<f64> {
    // Evaluated in a fixed order of the two cross terms so that swapping a
    // and b gives a bitwise identical result.
    let cross1 = g.sigma(&a.origin, &b.tip)?;
    let cross2 = g.sigma(&a.tip, &b.origin)?;
    let same1 = g.sigma(&a.origin, &b.origin)?;
    let same2 = g.sigma(&a.tip, &b.tip)?;
    let (c_lo, c_hi) = if cross1 <= cross2 { (cross1, cross2) } else { (cross2, cross1) };
    let (s_lo, s_hi) = if same1 <= same2 { (same1, same2) } else { (same2, same1) };
    Ok((c_lo + c_hi) - (s_lo + s_hi))
}

/// 2σ(origin, tip). Negative for spacelike vectors in Minkowski signature.
pub fn length_squared(g: &dyn WorldFunction, a: &PointPairVector) -> Result<f64> {
    Ok(2.0 * g.sigma(&a.origin, &a.tip)?)
}

/// √(2σ) for a pair with σ ≥ 0.
pub fn length(g: &dyn WorldFunction, p: &Point, q: &Point) -> Result<f64> {
    let s = g.sigma(p, q)?;
    if s < 0.0 {
        return Err(Error::Indefinite(format!("σ({p}, {q}) = {s} < 0 has no real length")));
    }
    Ok((2.0 * s).sqrt())
}

/// (r1, r2) with r1 = (a.b) − 2σ(a) and r2 = σ(a) − σ(b); a eqv b iff both vanish.
pub fn equivalence_residual(g: &dyn WorldFunction, a: &PointPairVector, b: &PointPairVector) -> Result<(f64, f64)> {
    let sa = g.sigma(&a.origin, &a.tip)?;
    let sb = g.sigma(&b.origin, &b.tip)?;
    Ok((scalar_product(g, a, b)? - 2.0 * sa, sa - sb))
}

pub fn is_equivalent(g: &dyn WorldFunction, a: &PointPairVector, b: &PointPairVector, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    let (r1, r2) = equivalence_residual(g, a, b)?;
    Ok(r1.abs() <= tol && r2.abs() <= tol)
}

/// (a.a)(b.b) − (a.b)² for two vectors with a common origin.
pub fn collinearity_gram(g: &dyn WorldFunction, a: &PointPairVector, b: &PointPairVector) -> Result<f64> {
    if a.origin != b.origin {
        return Err(Error::Precondition(format!(
            "collinearity_gram needs a shared origin, got {} and {}",
            a.origin, b.origin
        )));
    }
    two_origin_collinearity_gram(g, a, b)
}

/// The same Gram combination without the shared-origin requirement; its
/// zero set in R defines the remote-origin straight through Q0.
pub fn two_origin_collinearity_gram(g: &dyn WorldFunction, a: &PointPairVector, b: &PointPairVector) -> Result<f64> {
    let aa = length_squared(g, a)?;
    let bb = length_squared(g, b)?;
    let ab = scalar_product(g, a, b)?;
    Ok(aa * bb - ab * ab)
}

/// (a.b) − |a||b|; zero iff a ↑↑ b.
pub fn parallelism_residual(g: &dyn WorldFunction, a: &PointPairVector, b: &PointPairVector) -> Result<f64> {
    let aa = length_squared(g, a)?;
    let bb = length_squared(g, b)?;
    if aa < 0.0 || bb < 0.0 {
        return Err(Error::Indefinite(format!(
            "parallelism needs non-negative squared lengths, got {aa} and {bb}; use collinearity_gram"
        )));
    }
    Ok(scalar_product(g, a, b)? - aa.sqrt() * bb.sqrt())
}

/// Matrix of scalar products (origin→tipᵢ).(origin→tipⱼ).
pub fn gram_matrix(g: &dyn WorldFunction, origin: &Point, tips: &[Point]) -> Result<DMatrix<f64>> {
    if tips.is_empty() {
        return Err(Error::Precondition("Gram matrix needs at least one tip".into()));
    }
    let k = tips.len();
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = scalar_product(
                g,
                &PointPairVector::new(origin.clone(), tips[i].clone()),
                &PointPairVector::new(origin.clone(), tips[j].clone()),
            )?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

pub fn gram_determinant(g: &dyn WorldFunction, origin: &Point, tips: &[Point]) -> Result<f64> {
    Ok(gram_matrix(g, origin, tips)?.determinant())
}

/// xₖ = (v . origin→basisₖ), rejecting bases with |Gram| < [`IDENTITY_TOL`].
pub fn covariant_coordinates(g: &dyn WorldFunction, origin: &Point, basis_tips: &[Point], v: &PointPairVector) -> Result<Vec<f64>> {
    covariant_coordinates_with(g, origin, basis_tips, v, IDENTITY_TOL)
}

pub fn covariant_coordinates_with(
    g: &dyn WorldFunction,
    origin: &Point,
    basis_tips: &[Point],
    v: &PointPairVector,
    degeneracy_tol: f64,
) -> Result<Vec<f64>> {
    let det = gram_determinant(g, origin, basis_tips)?;
    if det.abs() < degeneracy_tol {
        return Err(Error::DegenerateBasis(det));
    }
    basis_tips
        .iter()
        .map(|t| scalar_product(g, v, &PointPairVector::new(origin.clone(), t.clone())))
        .collect()
}

/// Componentwise difference of the covariant coordinates of a and b.
pub fn basis_equality_residual(
    g: &dyn WorldFunction,
    origin: &Point,
    basis_tips: &[Point],
    a: &PointPairVector,
    b: &PointPairVector,
) -> Result<Vec<f64>> {
    let xa = covariant_coordinates(g, origin, basis_tips, a)?;
    let xb = covariant_coordinates(g, origin, basis_tips, b)?;
    Ok(xa.iter().zip(&xb).map(|(p, q)| p - q).collect())
}

/// F0..F3 for the triple (P0, R, P1), with |XY| = √(2σ(X,Y)):
///
/// * F0 = |P0R| + |RP1| + |P0P1|
/// * F1 = −|P0R| + |RP1| + |P0P1|
/// * F2 = |P0R| − |RP1| + |P0P1|
/// * F3 = |P0R| + |RP1| − |P0P1|
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleFunctions {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

pub fn triangle_functions(g: &dyn WorldFunction, p0: &Point, r: &Point, p1: &Point) -> Result<TriangleFunctions> {
    let a = length(g, p0, r)?;
    let b = length(g, r, p1)?;
    let c = length(g, p0, p1)?;
    Ok(TriangleFunctions { f0: a + b + c, f1: -a + b + c, f2: a - b + c, f3: a + b - c })
}

/// (lhs, rhs) with lhs = (P0P1.P0R)² − |P0R|²|P0P1|² and rhs = ¼F0F1F2F3.
///
/// Expanding both sides gives lhs = −rhs; only the magnitudes agree.
pub fn factorization_identity_check(g: &dyn WorldFunction, p0: &Point, r: &Point, p1: &Point) -> Result<(f64, f64)> {
    let f = triangle_functions(g, p0, r, p1)?;
    let a = PointPairVector::new(p0.clone(), p1.clone());
    let b = PointPairVector::new(p0.clone(), r.clone());
    let ab = scalar_product(g, &a, &b)?;
    let lhs = ab * ab - length_squared(g, &b)? * length_squared(g, &a)?;
    Ok((lhs, 0.25 * f.f0 * f.f1 * f.f2 * f.f3))
}

/// Area of the triangle (P0, P1, Q) from the 2×2 Gram determinant of
/// P0P1 and P0Q.
pub fn triangle_area(g: &dyn WorldFunction, p0: &Point, p1: &Point, q: &Point) -> Result<f64> {
    let a = PointPairVector::new(p0.clone(), p1.clone());
    let b = PointPairVector::new(p0.clone(), q.clone());
    let aa = length_squared(g, &a)?;
    let bb = length_squared(g, &b)?;
    let ab = scalar_product(g, &a, &b)?;
    let det = aa * bb - ab * ab;
    // Cancellation leaves a few ulps of noise around zero for degenerate
    // triangles; only a clearly negative determinant is indefinite.
    let noise = 8.0 * f64::EPSILON * (aa.abs() * bb.abs() + ab * ab);
    if det < -noise {
        return Err(Error::Indefinite(format!("Gram determinant {det} < 0 for triangle ({p0}, {p1}, {q})")));
    }
    Ok(0.5 * det.max(0.0).sqrt())
}

/// Hero's formula from the three side lengths, in Kahan's stable form.
pub fn triangle_area_heron(g: &dyn WorldFunction, p0: &Point, p1: &Point, q: &Point) -> Result<f64> {
    let mut s = [length(g, p0, p1)?, length(g, p1, q)?, length(g, p0, q)?];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if prod < 0.0 {
        // Side lengths violating the triangle inequality.
        let noise = 8.0 * f64::EPSILON * (a + b + c).powi(4);
        if prod < -noise {
            return Err(Error::Indefinite(format!("side lengths {a}, {b}, {c} do not form a triangle")));
        }
        return Ok(0.0);
    }
    Ok(0.25 * prod.sqrt())
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation(format!("tolerance must be positive, got {tol}")))
    }
}
