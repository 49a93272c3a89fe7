//! Geodesics: RK4 initial-value integration and a shooting solver for the
//! two-point problem.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::metric::{quadratic, MetricField};
use crate::error::{Error, Result};

/// A sampled geodesic x(τ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeodesicPath {
    pub tau: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    /// √(g_ik ẋ^i ẋ^k) at each sample.
    pub speed: Vec<f64>,
}

impl GeodesicPath {
    /// ∫ speed dτ (trapezoidal).
    pub fn length(&self) -> f64 {
        self.tau.windows(2).zip(self.speed.windows(2)).map(|(t, s)| 0.5 * (t[1] - t[0]) * (s[0] + s[1])).sum()
    }

    pub fn end(&self) -> &[f64] {
        self.points.last().expect("paths have at least one sample")
    }

    pub fn max_speed_drift(&self) -> f64 {
        let s0 = self.speed[0];
        self.speed.iter().map(|s| (s - s0).abs()).fold(0.0, f64::max)
    }

    /// CSV with columns τ, x0..x(n−1), speed.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let n = self.points.first().map_or(0, Vec::len);
        let mut header = vec!["tau".to_string()];
        header.extend((0..n).map(|i| format!("x{i}")));
        header.push("speed".into());
        w.write_record(&header).map_err(csv_error)?;
        for ((t, x), s) in self.tau.iter().zip(&self.points).zip(&self.speed) {
            let mut row = vec![t.to_string()];
            row.extend(x.iter().map(f64::to_string));
            row.push(s.to_string());
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    Error::Validation(format!("csv: {e}"))
}

fn acceleration(mf: &MetricField, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    if !mf.in_chart(x) {
        return Err(Error::ChartExit(x.to_vec()));
    }
    let c = mf.christoffel(x)?;
    Ok(c.contract(v, v).into_iter().map(|a| -a).collect())
}

fn axpy(x: &[f64], a: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(x, d)| x + a * d).collect()
}

fn speed(mf: &MetricField, x: &[f64], v: &[f64]) -> Result<f64> {
    let g = mf.metric(x)?;
    Ok(quadratic(&g, v, v).max(0.0).sqrt())
}

/// One RK4 step of ẍ^k = −γ^k_ls ẋ^l ẋ^s.
fn rk4_step(mf: &MetricField, x: &[f64], v: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let a1 = acceleration(mf, x, v)?;
    let (x2, v2) = (axpy(x, 0.5 * h, v), axpy(v, 0.5 * h, &a1));
    let a2 = acceleration(mf, &x2, &v2)?;
    let (x3, v3) = (axpy(x, 0.5 * h, &v2), axpy(v, 0.5 * h, &a2));
    let a3 = acceleration(mf, &x3, &v3)?;
    let (x4, v4) = (axpy(x, h, &v3), axpy(v, h, &a3));
    let a4 = acceleration(mf, &x4, &v4)?;
    let n = x.len();
    let xn = (0..n).map(|i| x[i] + h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i])).collect();
    let vn = (0..n).map(|i| v[i] + h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i])).collect();
    Ok((xn, vn))
}

/// Integrates the geodesic equation from (x0, v0) over τ ∈ [0, τ_end].
pub fn geodesic_ivp(mf: &MetricField, x0: &[f64], v0: &[f64], tau_end: f64, steps: usize) -> Result<GeodesicPath> {
    let n = mf.dimension();
    if x0.len() != n || v0.len() != n {
        return Err(Error::Arity { expected: n, found: if x0.len() != n { x0.len() } else { v0.len() } });
    }
    if steps == 0 || !tau_end.is_finite() {
        return Err(Error::Validation("geodesic integration needs a finite τ_end and at least one step".into()));
    }
    if !mf.in_chart(x0) {
        return Err(Error::ChartExit(x0.to_vec()));
    }
    let h = tau_end / steps as f64;
    let mut path = GeodesicPath { tau: vec![0.0], points: vec![x0.to_vec()], velocities: vec![v0.to_vec()], speed: vec![speed(mf, x0, v0)?] };
    let (mut x, mut v) = (x0.to_vec(), v0.to_vec());
    for i in 1..=steps {
        let (xn, vn) = rk4_step(mf, &x, &v, h)?;
        if !mf.in_chart(&xn) {
            return Err(Error::ChartExit(xn));
        }
        path.tau.push(i as f64 * h);
        path.speed.push(speed(mf, &xn, &vn)?);
        path.points.push(xn.clone());
        path.velocities.push(vn.clone());
        x = xn;
        v = vn;
    }
    Ok(path)
}

/// End point of the geodesic with unit parameter range, without storing
/// the path.
fn shoot(mf: &MetricField, x0: &[f64], v0: &[f64], steps: usize) -> Result<Vec<f64>> {
    let h = 1.0 / steps as f64;
    let (mut x, mut v) = (x0.to_vec(), v0.to_vec());
    for _ in 0..steps {
        let (xn, vn) = rk4_step(mf, &x, &v, h)?;
        x = xn;
        v = vn;
    }
    if !mf.in_chart(&x) {
        return Err(Error::ChartExit(x));
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BvpOptions {
    /// RK4 steps over τ ∈ [0, 1].
    pub steps: usize,
    /// Endpoint mismatch accepted, relative to 1 + |x_b|.
    pub tol: f64,
    pub max_iterations: usize,
    /// Perturbed initial directions tried after the straight-line guess.
    pub restarts: usize,
}

impl Default for BvpOptions {
    fn default() -> Self {
        Self { steps: 256, tol: 1e-11, max_iterations: 30, restarts: 8 }
    }
}

fn newton_shoot(mf: &MetricField, xa: &[f64], xb: &[f64], v_init: Vec<f64>, opts: &BvpOptions) -> Result<Vec<f64>> {
    let n = xa.len();
    let target = DVector::from_column_slice(xb);
    let scale = 1.0 + target.norm();
    let mut v = DVector::from_vec(v_init);
    let mut miss = DVector::from_vec(shoot(mf, xa, v.as_slice(), opts.steps)?) - &target;
    for _ in 0..opts.max_iterations {
        if miss.norm() <= opts.tol * scale {
            return Ok(v.as_slice().to_vec());
        }
        let hj = 1e-6 * (1.0 + v.norm());
        let mut j = DMatrix::zeros(n, n);
        for c in 0..n {
            let mut vp = v.clone();
            vp[c] += hj;
            let mut vm = v.clone();
            vm[c] -= hj;
            let fp = DVector::from_vec(shoot(mf, xa, vp.as_slice(), opts.steps)?);
            let fm = DVector::from_vec(shoot(mf, xa, vm.as_slice(), opts.steps)?);
            j.set_column(c, &((fp - fm) / (2.0 * hj)));
        }
        let step = j.lu().solve(&miss).ok_or_else(|| Error::NoConvergence("singular shooting Jacobian".into()))?;
        let mut alpha = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let vn = &v - alpha * &step;
            if let Ok(end) = shoot(mf, xa, vn.as_slice(), opts.steps) {
                let mn = DVector::from_vec(end) - &target;
                if mn.norm() < miss.norm() {
                    v = vn;
                    miss = mn;
                    improved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if miss.norm() <= opts.tol * scale {
        Ok(v.as_slice().to_vec())
    } else {
        Err(Error::NoConvergence(format!("geodesic shooting from {xa:?} to {xb:?} left a mismatch of {:e}", miss.norm())))
    }
}

/// Moves the target from x_a to x_b along the chart segment in `stages`
/// steps, warm-starting each shot from the previous velocity.
fn continuation(mf: &MetricField, xa: &[f64], delta: &[f64], stages: usize, opts: &BvpOptions) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = delta.iter().map(|d| d / stages as f64).collect();
    for k in 1..=stages {
        let target: Vec<f64> = xa.iter().zip(delta).map(|(a, d)| a + d * k as f64 / stages as f64).collect();
        let guess: Vec<f64> = if k == 1 { v.clone() } else { v.iter().map(|c| c * k as f64 / (k - 1) as f64).collect() };
        v = newton_shoot(mf, xa, &target, guess, opts)?;
    }
    Ok(v)
}

/// Initial velocity for the geodesic x_a → x_b over τ ∈ [0, 1].
pub fn geodesic_bvp_velocity(mf: &MetricField, xa: &[f64], xb: &[f64], opts: &BvpOptions) -> Result<Vec<f64>> {
    let n = mf.dimension();
    if xa.len() != n || xb.len() != n {
        return Err(Error::Arity { expected: n, found: if xa.len() != n { xa.len() } else { xb.len() } });
    }
    for x in [xa, xb] {
        if !mf.in_chart(x) {
            return Err(Error::ChartExit(x.to_vec()));
        }
    }
    let delta: Vec<f64> = xb.iter().zip(xa).map(|(b, a)| b - a).collect();
    if delta.iter().all(|d| *d == 0.0) {
        return Ok(vec![0.0; n]);
    }
    let first = newton_shoot(mf, xa, xb, delta.clone(), opts);
    if first.is_ok() {
        return first;
    }
    for stages in [8, 32] {
        if let Ok(v) = continuation(mf, xa, &delta, stages, opts) {
            return Ok(v);
        }
    }
    if n < 2 {
        return first;
    }
    let mut last = first;
    let norm = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
    for k in 0..opts.restarts {
        // Rotate the straight-line guess in successive coordinate planes.
        let angle = std::f64::consts::TAU * (k + 1) as f64 / (opts.restarts + 1) as f64 * 0.25;
        let (p, q) = (k % n, (k + 1) % n);
        let mut guess = delta.clone();
        let (c, s) = (angle.cos(), angle.sin());
        guess[p] = c * delta[p] - s * delta[q];
        guess[q] = s * delta[p] + c * delta[q];
        let scale = norm / guess.iter().map(|d| d * d).sum::<f64>().sqrt().max(1e-300);
        guess.iter_mut().for_each(|g| *g *= scale);
        last = newton_shoot(mf, xa, xb, guess, opts);
        if last.is_ok() {
            break;
        }
    }
    last
}

/// The connecting geodesic, sampled at `opts.steps + 1` points.
pub fn geodesic_bvp(mf: &MetricField, xa: &[f64], xb: &[f64]) -> Result<GeodesicPath> {
    geodesic_bvp_with(mf, xa, xb, &BvpOptions::default())
}

pub fn geodesic_bvp_with(mf: &MetricField, xa: &[f64], xb: &[f64], opts: &BvpOptions) -> Result<GeodesicPath> {
    let v0 = geodesic_bvp_velocity(mf, xa, xb, opts)?;
    geodesic_ivp(mf, xa, &v0, 1.0, opts.steps)
}
