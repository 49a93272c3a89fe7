//! Local refinement: damped Gauss–Newton for residual systems, a polish for
//! roots where the Jacobian loses row rank, and one-dimensional searches
//! along grid lines for scalar residuals.

use nalgebra::{DMatrix, DVector};
use roots::{find_root_brent, Convergency};

use super::ResidualFn;

pub(crate) fn eval(f: &ResidualFn, x: &[f64]) -> Option<Vec<f64>> {
    match f(x) {
        Ok(r) if r.iter().all(|v| v.is_finite()) => Some(r),
        _ => None,
    }
}

pub(crate) fn norm2(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub(crate) fn norm_inf(r: &[f64]) -> f64 {
    r.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Central-difference Jacobian (rows: residual components).
pub(crate) fn jacobian(f: &ResidualFn, x: &[f64], m: usize, h: f64) -> Option<DMatrix<f64>> {
    let n = x.len();
    let mut j = DMatrix::zeros(m, n);
    let mut xp = x.to_vec();
    for c in 0..n {
        xp[c] = x[c] + h;
        let rp = eval(f, &xp)?;
        xp[c] = x[c] - h;
        let rm = eval(f, &xp)?;
        xp[c] = x[c];
        for r in 0..m {
            j[(r, c)] = (rp[r] - rm[r]) / (2.0 * h);
        }
    }
    Some(j)
}

fn pinv_solve(j: &DMatrix<f64>, r: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 || !smax.is_finite() {
        return None;
    }
    svd.solve(r, 1e-12 * smax).ok()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NewtonSettings {
    pub max_iterations: usize,
    pub jacobian_step: f64,
}

/// Damped Gauss–Newton with pseudo-inverse steps. Iterates past the
/// tolerance until the step stalls so that well-conditioned roots reach
/// full precision.
pub(crate) fn gauss_newton(f: &ResidualFn, x0: &[f64], m: usize, s: NewtonSettings) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut x = x0.to_vec();
    let mut r = eval(f, &x)?;
    let mut nr = norm2(&r);
    let mut alpha = 1.0;
    for _ in 0..s.max_iterations {
        if nr == 0.0 {
            break;
        }
        let j = jacobian(f, &x, m, s.jacobian_step)?;
        let step = pinv_solve(&j, &DVector::from_column_slice(&r))?;
        let scale = 1.0 + norm2(&x);
        if step.norm() <= 1e-15 * scale {
            break;
        }
        let mut accepted = false;
        for _ in 0..16 {
            let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a - alpha * d).collect();
            if let Some(rn) = eval(f, &xn) {
                let nrn = norm2(&rn);
                if nrn < nr {
                    x = xn;
                    r = rn;
                    nr = nrn;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
        let moved = alpha * step.norm();
        alpha = (2.0 * alpha).min(1.0);
        if moved <= 1e-14 * scale {
            break;
        }
    }
    Some((x, r))
}

fn symmetric_split(a: DMatrix<f64>, cutoff: f64) -> (Vec<DVector<f64>>, Vec<DVector<f64>>) {
    let eig = a.symmetric_eigen();
    let mut big = Vec::new();
    let mut small = Vec::new();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    for i in order {
        let v = eig.eigenvectors.column(i).into_owned();
        if eig.eigenvalues[i] > cutoff {
            big.push(v);
        } else {
            small.push(v);
        }
    }
    (big, small)
}

/// Relative singular-value ratio below which a root counts as singular.
const SINGULAR_RATIO: f64 = 1e-6;

/// Refines a root at which J has lost row rank (e.g. two tangent residual
/// surfaces). With left null vectors ℓ, range rows Q and right null space
/// T of J, the square system {Qᵀr = 0, Tᵀ∇(ℓᵀr) = 0} is regular at such a
/// root, so Newton on it converges where Gauss–Newton on r stalls near
/// √ε accuracy. Returns `None` when J has full row rank.
pub(crate) fn polish_singular(f: &ResidualFn, x0: &[f64], m: usize, s: NewtonSettings, gradient_step: f64) -> Option<Vec<f64>> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut polished = false;
    for _round in 0..2 {
        let j = jacobian(f, &x, m, s.jacobian_step)?;
        let smax2 = (j.transpose() * &j).symmetric_eigen().eigenvalues.max();
        if smax2 <= 0.0 {
            return None;
        }
        let cutoff = smax2 * SINGULAR_RATIO * SINGULAR_RATIO;
        let (range_left, null_left) = symmetric_split(&j * j.transpose(), cutoff);
        if null_left.is_empty() {
            return if polished { Some(x) } else { None };
        }
        let (_, null_right) = symmetric_split(j.transpose() * &j, cutoff);
        let k = range_left.len();
        let system = |y: &[f64]| -> crate::Result<Vec<f64>> {
            let fail = || crate::Error::NoConvergence("residual undefined during singular polish".into());
            let r = DVector::from_vec(eval(f, y).ok_or_else(fail)?);
            let mut out: Vec<f64> = range_left.iter().map(|q| q.dot(&r)).collect();
            let mut grads = vec![DVector::zeros(n); null_left.len()];
            let mut yp = y.to_vec();
            for c in 0..n {
                yp[c] = y[c] + gradient_step;
                let rp = DVector::from_vec(eval(f, &yp).ok_or_else(fail)?);
                yp[c] = y[c] - gradient_step;
                let rm = DVector::from_vec(eval(f, &yp).ok_or_else(fail)?);
                yp[c] = y[c];
                for (g, l) in grads.iter_mut().zip(&null_left) {
                    g[c] = (l.dot(&rp) - l.dot(&rm)) / (2.0 * gradient_step);
                }
            }
            for g in &grads {
                out.extend(null_right.iter().map(|t| t.dot(g)));
            }
            Ok(out)
        };
        let rows = k + null_left.len() * null_right.len();
        let settings = NewtonSettings { max_iterations: 20, jacobian_step: (10.0 * gradient_step).max(s.jacobian_step) };
        let (y, _) = gauss_newton(&system, &x, rows, settings)?;
        x = y;
        polished = true;
    }
    Some(x)
}

/// Brent termination: stop at an exact zero or when the bracket is a few
/// ulps wide.
struct Tight {
    scale: f64,
    iterations: usize,
}

impl Convergency<f64> for Tight {
    fn is_root_found(&mut self, y: f64) -> bool {
        y == 0.0
    }

    fn is_converged(&mut self, x1: f64, x2: f64) -> bool {
        (x1 - x2).abs() <= 4.0 * f64::EPSILON * self.scale
    }

    fn is_iteration_limit_reached(&mut self, iter: usize) -> bool {
        self.iterations = iter;
        iter >= 200
    }
}

/// Root of `f` in [a, b] when the endpoint values differ in sign.
pub(crate) fn bracketed_root(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    let mut conv = Tight { scale: a.abs().max(b.abs()).max(1.0), iterations: 0 };
    find_root_brent(a, b, f, &mut conv).ok()
}

/// Local minimiser of |f| in [a, b], located as the sign change of a
/// Richardson-extrapolated central-difference slope of |f|.
pub(crate) fn bracketed_min_abs(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Option<f64> {
    // Rounding noise in f is absolute near a tangential zero, so the step
    // must stay well above it; extrapolation removes the O(δ²) bias.
    let delta = 1e-4 * (b - a);
    let central = |t: f64, d: f64| (f(t + d).abs() - f(t - d).abs()) / (2.0 * d);
    let slope = |t: f64| (4.0 * central(t, 0.5 * delta) - central(t, delta)) / 3.0;
    let (sa, sb) = (slope(a + delta), slope(b - delta));
    if !(sa < 0.0 && sb > 0.0) {
        return None;
    }
    bracketed_root(slope, a + delta, b - delta)
}
