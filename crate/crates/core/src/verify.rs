//! Randomised identity and axiom checks for any geometry, with a solver
//! search for intransitive equivalence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    factorization_identity_check, is_equivalent, length_squared, scalar_product, triangle_area, triangle_area_heron, triangle_functions, IDENTITY_TOL,
    RESIDUAL_TOL,
};
use crate::error::{Error, Result};
use crate::point::{BoundingBox, Domain, Point, PointPairVector, WorldFunction};
use crate::solvers::{find_intransitivity_witness, solve_equivalence_discrete, IntransitivityWitness, SolveOptions};
use crate::algebra::equivalence_residual;

/// F3 below this counts as a triangle-axiom violation.
pub const TRIANGLE_TOL: f64 = 1e-6;
/// Equivalence residual norm separating a from c in a witness.
pub const WITNESS_SEPARATION: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Sampling box for chart geometries; defaults to the domain bounds
    /// clipped to [−1, 1] per axis.
    pub region: Option<BoundingBox>,
    pub transitivity: bool,
    /// Options for the equivalence solves of the transitivity search.
    pub solve: SolveOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { samples: 1000, seed: 0, region: None, transitivity: true, solve: SolveOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    /// Cases evaluated (cases outside an operation's preconditions are not counted).
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub geometry: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub witness: Option<IntransitivityWitness>,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let mut out = format!("geometry: {}\nseed: {}\n", self.geometry, self.seed);
        for c in &self.checks {
            out.push_str(&format!("{:<26} {:<4} {:>6}  {}\n", c.name, c.status.to_string(), c.cases, c.detail));
        }
        out
    }
}

struct Sampler {
    rng: ChaCha8Rng,
    region: Option<BoundingBox>,
    count: usize,
}

impl Sampler {
    fn point(&mut self) -> Point {
        match &self.region {
            Some(b) => Point::Coords(b.lower.iter().zip(&b.upper).map(|(lo, hi)| self.rng.gen_range(*lo..=*hi)).collect()),
            None => Point::Discrete(self.rng.gen_range(0..self.count)),
        }
    }
}

fn default_region(domain: &Domain) -> Option<BoundingBox> {
    let Domain::Chart { dimension, bounds } = domain else { return None };
    let (mut lower, mut upper) = (vec![-1.0; *dimension], vec![1.0; *dimension]);
    if let Some(b) = bounds {
        for i in 0..*dimension {
            lower[i] = b.lower[i].max(-1.0);
            upper[i] = b.upper[i].min(1.0);
            if lower[i] >= upper[i] {
                lower[i] = b.lower[i];
                upper[i] = b.upper[i];
            }
        }
    }
    Some(BoundingBox { lower, upper })
}

fn outcome(name: &'static str, cases: usize, ok: bool, detail: String) -> CheckResult {
    let status = if cases == 0 { Status::Skipped } else if ok { Status::Pass } else { Status::Fail };
    CheckResult { name, status, cases, detail }
}

/// Runs the property suite on `g`.
pub fn verify_geometry(g: &dyn WorldFunction, opts: &VerifyOptions) -> Result<VerifyReport> {
    if opts.samples == 0 {
        return Err(Error::Validation("verify needs at least one sample".into()));
    }
    let region = match (g.domain(), &opts.region) {
        (Domain::Discrete { .. }, Some(_)) => return Err(Error::Validation("a sampling region needs a chart geometry".into())),
        (_, Some(r)) => {
            r.validate()?;
            Some(r.clone())
        }
        (d, None) => default_region(d),
    };
    let count = match g.domain() {
        Domain::Discrete { count } => *count,
        Domain::Chart { .. } => 0,
    };
    let mut s = Sampler { rng: ChaCha8Rng::seed_from_u64(opts.seed), region: region.clone(), count };
    let n = opts.samples;
    let mut checks = Vec::new();

    let (mut sym, mut diag) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let (p, q) = (s.point(), s.point());
        sym = sym.max((g.sigma(&p, &q)? - g.sigma(&q, &p)?).abs());
        diag = diag.max(g.sigma(&p, &p)?.abs());
    }
    checks.push(outcome("sigma_symmetry", n, sym == 0.0, format!("max |σ(P,Q) − σ(Q,P)| = {sym:e}")));
    checks.push(outcome("zero_diagonal", n, diag <= 1e-14, format!("max |σ(P,P)| = {diag:e}")));

    let (mut sp_sym, mut sp_self, mut reflexive) = (0.0f64, 0.0f64, true);
    for _ in 0..n {
        let a = PointPairVector::new(s.point(), s.point());
        let b = PointPairVector::new(s.point(), s.point());
        sp_sym = sp_sym.max((scalar_product(g, &a, &b)? - scalar_product(g, &b, &a)?).abs());
        sp_self = sp_self.max((scalar_product(g, &a, &a)? - length_squared(g, &a)?).abs());
        reflexive &= is_equivalent(g, &a, &a, RESIDUAL_TOL)?;
    }
    checks.push(outcome("scalar_product_symmetry", n, sp_sym == 0.0, format!("max |(a.b) − (b.a)| = {sp_sym:e}")));
    checks.push(outcome("self_scalar_product", n, sp_self == 0.0, format!("max |(a.a) − 2σ(a)| = {sp_self:e}")));
    checks.push(outcome("equivalence_reflexivity", n, reflexive, if reflexive { "a eqv a for every sample".into() } else { "a eqv a failed".into() }));

    let (mut f3_cases, mut f3_min) = (0, f64::INFINITY);
    let (mut fac_cases, mut fac_worst, mut signs) = (0, 0.0f64, (0usize, 0usize));
    let (mut area_cases, mut area_worst) = (0, 0.0f64);
    for _ in 0..n {
        let (p0, r, p1) = (s.point(), s.point(), s.point());
        match triangle_functions(g, &p0, &r, &p1) {
            Ok(f) => {
                f3_cases += 1;
                f3_min = f3_min.min(f.f3);
            }
            Err(Error::Indefinite(_)) => continue,
            Err(e) => return Err(e),
        }
        let (lhs, rhs) = factorization_identity_check(g, &p0, &r, &p1)?;
        fac_cases += 1;
        fac_worst = fac_worst.max((lhs.abs() - rhs.abs()).abs() / rhs.abs().max(1.0));
        if rhs.abs() > 1e-6 {
            if lhs * rhs < 0.0 {
                signs.0 += 1;
            } else {
                signs.1 += 1;
            }
        }
        if let (Ok(a), Ok(b)) = (triangle_area(g, &p0, &p1, &r), triangle_area_heron(g, &p0, &p1, &r)) {
            area_cases += 1;
            area_worst = area_worst.max((a - b).abs() / a.abs().max(1.0));
        }
    }
    checks.push(outcome("triangle_axiom", f3_cases, f3_min >= -TRIANGLE_TOL, format!("min F3 = {f3_min:e}")));
    let sign = match signs {
        (0, 0) => "no sign sample",
        (_, 0) => "lhs = −rhs throughout",
        (0, _) => "lhs = +rhs throughout",
        _ => "mixed signs",
    };
    let stable_sign = signs.0 == 0 || signs.1 == 0;
    checks.push(outcome(
        "factorization_identity",
        fac_cases,
        fac_worst <= IDENTITY_TOL && stable_sign,
        format!("max ||lhs| − |rhs|| = {fac_worst:e}; {sign}"),
    ));
    checks.push(outcome("area_gram_vs_heron", area_cases, area_worst <= IDENTITY_TOL, format!("max |S_gram − S_heron| = {area_worst:e}")));

    let mut witness = None;
    if opts.transitivity {
        witness = match &region {
            Some(r) => chart_witness(g, r, &opts.solve)?,
            None => discrete_witness(g, count)?,
        };
        let detail = match &witness {
            Some(w) => format!("a eqv b, b eqv c, |res(a,c)| = {:e}", w.residual_ac.0.hypot(w.residual_ac.1)),
            None => "no witness found".into(),
        };
        checks.push(CheckResult { name: "equivalence_transitivity", status: if witness.is_some() { Status::Fail } else { Status::Pass }, cases: 1, detail });
    }
    Ok(VerifyReport { geometry: g.describe(), seed: opts.seed, checks, witness })
}

/// Tries a few fixed vector layouts scaled to the region; the equivalent
/// vectors themselves come from the solver.
fn chart_witness(g: &dyn WorldFunction, region: &BoundingBox, opts: &SolveOptions) -> Result<Option<IntransitivityWitness>> {
    let n = region.dimension();
    let c = region.center();
    let scale = region.lower.iter().zip(&region.upper).map(|(lo, hi)| 0.5 * (hi - lo)).fold(f64::INFINITY, f64::min);
    let at = |d0: f64, d1: f64| -> Point {
        let mut x = c.clone();
        x[0] += scale * d0;
        if n > 1 {
            x[1] += scale * d1;
        }
        Point::from(x)
    };
    let layouts = [((0.5, 0.0), (0.15, 0.35), (-0.25, 0.6)), ((0.4, 0.2), (-0.3, 0.1), (0.2, -0.5))];
    for (tip, q0, s0) in layouts {
        let a = PointPairVector::new(at(0.0, 0.0), at(tip.0, tip.1));
        let found = find_intransitivity_witness(g, &a, &at(q0.0, q0.1), &at(s0.0, s0.1), 0.75 * scale, WITNESS_SEPARATION, opts);
        match found {
            Ok(Some(w)) => return Ok(Some(w)),
            Ok(None) => {}
            Err(e) if e.is_solver_failure() => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

fn discrete_witness(g: &dyn WorldFunction, count: usize) -> Result<Option<IntransitivityWitness>> {
    let p = |i: usize| Point::Discrete(i);
    let limit = count.min(12);
    for tip in 1..limit {
        let a = PointPairVector::new(p(0), p(tip));
        for q0 in 0..limit {
            for b_tip in solve_equivalence_discrete(g, &a, &p(q0), RESIDUAL_TOL)? {
                let b = PointPairVector::new(p(q0), p(b_tip));
                for s0 in 0..limit {
                    for c_tip in solve_equivalence_discrete(g, &b, &p(s0), RESIDUAL_TOL)? {
                        let c = PointPairVector::new(p(s0), p(c_tip));
                        let residual_ac = equivalence_residual(g, &a, &c)?;
                        if residual_ac.0.hypot(residual_ac.1) > WITNESS_SEPARATION {
                            let residual_ab = equivalence_residual(g, &a, &b)?;
                            let residual_bc = equivalence_residual(g, &b, &c)?;
                            return Ok(Some(IntransitivityWitness { a, b, c, residual_ab, residual_bc, residual_ac }));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}
