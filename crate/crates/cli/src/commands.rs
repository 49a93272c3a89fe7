//! One function per subcommand. Each is a thin wrapper over the library and
//! returns a [`Report`] holding a short stdout summary plus the JSON and CSV
//! renderings of the result.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use worldfn_core::algebra::{equivalence_residual, scalar_product};
use worldfn_core::objects::sample_object;
use worldfn_core::riemann::transport::chart_segment;
use worldfn_core::riemann::{
    collinearity_cone, geodesic_bvp_with, parallelism_residual_wf, transport_conventional, BvpOptions, ConeKind, MetricField,
    TangentVector,
};
use worldfn_core::solvers::{
    solve_equivalence, solve_equivalence_discrete, translate_region, Grid, GridSpec, MultivarianceReport, SolveOptions,
};
use worldfn_core::verify::{verify_geometry, VerifyOptions};
use worldfn_core::{Domain, Error, Point, PointPairVector, Result, WorldFunction};

use crate::experiment::{ConeArgs, EquivArgs, EvalArgs, ObjectArgs, ScalarArgs, TransportArgs, VerifyArgs};
use crate::Command;

pub struct Report {
    pub summary: String,
    pub json: Value,
    pub csv: Vec<u8>,
}

fn csv_table(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn cells(p: &Point) -> Vec<String> {
    match p {
        Point::Coords(c) => c.iter().map(f64::to_string).collect(),
        Point::Discrete(i) => vec![i.to_string()],
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn chart_dimension(g: &dyn WorldFunction, what: &str) -> Result<usize> {
    g.domain().chart_dimension().ok_or_else(|| Error::Validation(format!("{what} needs a chart geometry")))
}

fn check_len(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::Arity { expected: n, found: v.len() });
    }
    Ok(())
}

pub fn eval(g: &dyn WorldFunction, args: &EvalArgs, grid: usize) -> Result<Report> {
    match (&args.field, args.pairs.is_empty()) {
        (None, false) => eval_pairs(g, &args.pairs),
        (Some(f), true) => {
            let n = chart_dimension(g, "a σ field")?;
            check_len(&f.origin, n)?;
            f.region.validate()?;
            let grid = Grid::new(&f.region, &GridSpec::new(grid))?;
            let origin = Point::from(f.origin.as_slice());
            let mut rows = Vec::with_capacity(grid.len());
            let mut values = Vec::with_capacity(grid.len());
            for idx in 0..grid.len() {
                let x = grid.node(idx);
                let s = g.sigma(&origin, &Point::from(x.as_slice()))?;
                let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
                row.push(s.to_string());
                rows.push(row);
                values.push((x, s));
            }
            let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, s)| (lo.min(*s), hi.max(*s)));
            let mut header = names("x", n);
            header.push("sigma".into());
            Ok(Report {
                summary: format!("{} grid values of σ(origin, x), range [{lo}, {hi}]\n", values.len()),
                json: json!({
                    "geometry": g.describe(),
                    "origin": f.origin,
                    "region": to_json(&f.region)?,
                    "points_per_axis": grid.n,
                    "values": values.iter().map(|(x, s)| json!({"x": x, "sigma": s})).collect::<Vec<_>>(),
                }),
                csv: csv_table(&header, &rows)?,
            })
        }
        _ => Err(Error::Validation("eval needs exactly one of `pairs` or `field`".into())),
    }
}

fn eval_pairs(g: &dyn WorldFunction, pairs: &[(Point, Point)]) -> Result<Report> {
    let mut summary = String::new();
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (p, q) in pairs {
        let s = g.sigma(p, q)?;
        let _ = writeln!(summary, "σ({p}, {q}) = {s}");
        let mut row = cells(p);
        row.extend(cells(q));
        row.push(s.to_string());
        rows.push(row);
        values.push(json!({"p": p, "q": q, "sigma": s}));
    }
    let header = match g.domain() {
        Domain::Chart { dimension, .. } => {
            let mut h = names("p", *dimension);
            h.extend(names("q", *dimension));
            h.push("sigma".into());
            h
        }
        Domain::Discrete { .. } => vec!["p".into(), "q".into(), "sigma".into()],
    };
    Ok(Report {
        summary,
        json: json!({"geometry": g.describe(), "values": values}),
        csv: csv_table(&header, &rows)?,
    })
}

pub fn scalar(g: &dyn WorldFunction, args: &ScalarArgs) -> Result<Report> {
    let value = scalar_product(g, &args.a, &args.b)?;
    Ok(Report {
        summary: format!("{value}\n"),
        json: json!({"geometry": g.describe(), "a": args.a, "b": args.b, "value": value}),
        csv: csv_table(&["value".into()], &[vec![value.to_string()]])?,
    })
}

pub fn equiv(g: &dyn WorldFunction, args: &EquivArgs, opts: &SolveOptions) -> Result<Report> {
    if let Domain::Discrete { .. } = g.domain() {
        return equiv_discrete(g, &args.a, &args.q0, opts.tol);
    }
    if !(args.half_width > 0.0) {
        return Err(Error::Validation("half_width must be positive".into()));
    }
    let region = match &args.region {
        Some(r) => r.clone(),
        None => translate_region(&args.a, &args.q0, args.half_width)?,
    };
    let set = solve_equivalence(g, &args.a, &args.q0, &region, opts)?;
    let report = MultivarianceReport::from_solutions(&set);
    let dimension = report.dimensions.iter().copied().max().unwrap_or(0);
    let n = region.dimension();
    let mut rows = Vec::new();
    let mut clusters = Vec::new();
    for (k, c) in set.clusters.iter().enumerate() {
        for (p, r) in c.points.iter().zip(&c.point_residuals) {
            let mut row = vec![k.to_string()];
            row.extend(p.iter().map(f64::to_string));
            row.push(r.to_string());
            rows.push(row);
        }
        clusters.push(json!({
            "representative": c.representative,
            "local_dimension": c.local_dimension,
            "residual_norm": c.residual_norm,
            "size": c.points.len(),
        }));
    }
    let mut header = vec!["cluster".to_string()];
    header.extend(names("x", n));
    header.push("residual".into());
    let count = to_json(&report.count)?;
    let count_text = match &count {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    };
    Ok(Report {
        summary: format!(
            "count: {count_text}\ndimension: {dimension}\nsingle-variant: {}\nclusters: {}\n",
            report.is_single_variant,
            clusters.len()
        ),
        json: json!({
            "geometry": g.describe(),
            "a": args.a,
            "q0": args.q0,
            "count": count,
            "dimension": dimension,
            "dimensions": report.dimensions,
            "is_single_variant": report.is_single_variant,
            "tolerance": set.tolerance,
            "cluster_radius": set.cluster_radius,
            "searched_region": to_json(&set.searched_region)?,
            "clusters": clusters,
        }),
        csv: csv_table(&header, &rows)?,
    })
}

fn equiv_discrete(g: &dyn WorldFunction, a: &PointPairVector, q0: &Point, tol: f64) -> Result<Report> {
    let ids = solve_equivalence_discrete(g, a, q0, tol)?;
    let mut rows = Vec::new();
    let mut solutions = Vec::new();
    for &id in &ids {
        let (r1, r2) = equivalence_residual(g, a, &PointPairVector::new(q0.clone(), Point::Discrete(id)))?;
        rows.push(vec![id.to_string(), r1.to_string(), r2.to_string()]);
        solutions.push(json!({"tip": id, "residual": [r1, r2]}));
    }
    Ok(Report {
        summary: format!("count: {}\ndimension: 0\nsingle-variant: {}\n", ids.len(), ids.len() == 1),
        json: json!({
            "geometry": g.describe(),
            "a": a,
            "q0": q0,
            "count": ids.len(),
            "dimension": 0,
            "is_single_variant": ids.len() == 1,
            "tolerance": tol,
            "solutions": solutions,
        }),
        csv: csv_table(&["tip".into(), "r1".into(), "r2".into()], &rows)?,
    })
}

pub fn object(g: &dyn WorldFunction, command: Command, args: &ObjectArgs, opts: &SolveOptions) -> Result<Report> {
    let spec = args.spec(command)?;
    let region = args.region()?;
    let set = sample_object(g, &spec, &region, opts)?;
    let mut csv = Vec::new();
    set.write_csv(&mut csv)?;
    Ok(Report {
        summary: format!(
            "{}: {} points, {} components, max local dimension {}\n",
            spec.name(),
            set.len(),
            set.components.len(),
            set.max_local_dimension()
        ),
        json: to_json(&set)?,
        csv,
    })
}

fn kind_name(kind: ConeKind) -> &'static str {
    match kind {
        ConeKind::Single => "single",
        ConeKind::Cone => "cone",
        ConeKind::Empty => "empty",
    }
}

fn metric(mf: Option<&MetricField>, command: Command) -> Result<&MetricField> {
    mf.ok_or_else(|| Error::Validation(format!("`{}` needs a riemannian geometry", command.name())))
}

/// Angle between two vectors at `x` measured with g(x).
fn metric_angle(mf: &MetricField, x: &[f64], a: &[f64], b: &[f64]) -> Result<f64> {
    let ab = mf.inner(x, a, b)?;
    let aa = mf.inner(x, a, a)?;
    let bb = mf.inner(x, b, b)?;
    Ok((ab / (aa * bb).sqrt()).clamp(-1.0, 1.0).acos())
}

/// Components of `v` in a g(x)-orthonormal frame (two-dimensional charts).
fn frame_coords(g: &[[f64; 2]; 2], v: &[f64]) -> [f64; 2] {
    let l11 = g[0][0].sqrt();
    let l21 = g[1][0] / l11;
    let l22 = (g[1][1] - l21 * l21).sqrt();
    [l11 * v[0] + l21 * v[1], l22 * v[1]]
}

fn from_frame(g: &[[f64; 2]; 2], y: [f64; 2]) -> [f64; 2] {
    let l11 = g[0][0].sqrt();
    let l21 = g[1][0] / l11;
    let l22 = (g[1][1] - l21 * l21).sqrt();
    let v1 = y[1] / l22;
    [(y[0] - l21 * v1) / l11, v1]
}

fn metric_2d(mf: &MetricField, x: &[f64]) -> Result<[[f64; 2]; 2]> {
    let m = mf.metric(x)?;
    Ok([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]])
}

pub fn cone(wf: &dyn WorldFunction, mf: Option<&MetricField>, args: &ConeArgs) -> Result<Report> {
    let mf = metric(mf, Command::Cone)?;
    let u = TangentVector::new(args.base.clone(), args.u.clone())?;
    let cone = collinearity_cone(wf, mf, &u, &args.dxi, args.samples)?;
    let n = mf.dimension();
    let mut rows = vec![{
        let mut r = vec!["central".to_string()];
        r.extend(cone.central.iter().map(f64::to_string));
        r.push("0".into());
        r
    }];
    for d in &cone.directions {
        let mut r = vec!["direction".to_string()];
        r.extend(d.iter().map(f64::to_string));
        r.push(metric_angle(mf, &cone.base, &cone.central, d)?.to_string());
        rows.push(r);
    }
    let mut header = vec!["role".to_string()];
    header.extend(names("v", n));
    header.push("angle_from_central".into());
    Ok(Report {
        summary: format!(
            "kind: {}\ndirections: {}\nhalf aperture: {} rad\n",
            kind_name(cone.kind),
            cone.directions.len(),
            cone.half_aperture
        ),
        json: json!({"geometry": wf.describe(), "u": u, "dxi": args.dxi, "cone": to_json(&cone)?}),
        csv: csv_table(&header, &rows)?,
    })
}

pub fn transport_compare(wf: &dyn WorldFunction, mf: Option<&MetricField>, args: &TransportArgs) -> Result<Report> {
    let mf = metric(mf, Command::TransportCompare)?;
    let n = mf.dimension();
    if args.vertices.len() < 3 {
        return Err(Error::Validation("transport-compare needs at least three vertices".into()));
    }
    for v in &args.vertices {
        check_len(v, n)?;
    }
    if args.edge_steps < 2 || !(args.step > 0.0) || args.samples < 8 {
        return Err(Error::Validation("edge_steps ≥ 2, step > 0 and samples ≥ 8 are required".into()));
    }
    let x0 = &args.vertices[0];
    let u = TangentVector::new(x0.clone(), args.u.clone())?;

    // Closed loop of geodesic edges.
    let bvp = BvpOptions { steps: args.edge_steps, ..BvpOptions::default() };
    let mut path = vec![x0.clone()];
    for k in 0..args.vertices.len() {
        let (a, b) = (&args.vertices[k], &args.vertices[(k + 1) % args.vertices.len()]);
        let edge = geodesic_bvp_with(mf, a, b, &bvp)?;
        path.extend(edge.points.into_iter().skip(1));
    }
    let back = transport_conventional(mf, &u, &path)?;
    let holonomy = if n == 2 {
        let g = metric_2d(mf, x0)?;
        let (a, b) = (frame_coords(&g, &u.components), frame_coords(&g, &back.components));
        (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1])
    } else {
        metric_angle(mf, x0, &u.components, &back.components)?
    };

    // Cone against transport for displacements at several angles to u.
    let mut table = Vec::new();
    let mut rows = Vec::new();
    if n == 2 {
        let g = metric_2d(mf, x0)?;
        let uh = frame_coords(&g, &u.components);
        let un = uh[0].hypot(uh[1]);
        for &deg in &args.angles_deg {
            let (s, c) = deg.to_radians().sin_cos();
            let dh = [args.step * (c * uh[0] - s * uh[1]) / un, args.step * (s * uh[0] + c * uh[1]) / un];
            let dxi = from_frame(&g, dh);
            let cone = collinearity_cone(wf, mf, &u, &dxi, args.samples)?;
            let end = [x0[0] + dxi[0], x0[1] + dxi[1]];
            let v = transport_conventional(mf, &u, &chart_segment(x0, &end, 16))?;
            let offset = metric_angle(mf, &cone.base, &v.components, &cone.central)?;
            let residual = parallelism_residual_wf(wf, mf, &u, &v)?;
            rows.push(vec![
                deg.to_string(),
                kind_name(cone.kind).to_string(),
                cone.directions.len().to_string(),
                cone.half_aperture.to_string(),
                offset.to_string(),
                residual.to_string(),
            ]);
            table.push(json!({
                "angle_deg": deg,
                "dxi": dxi,
                "kind": cone.kind,
                "directions": cone.directions.len(),
                "half_aperture": cone.half_aperture,
                "transport_offset": offset,
                "transport_residual": residual,
            }));
        }
    }
    let header: Vec<String> =
        ["angle_deg", "kind", "directions", "half_aperture", "transport_offset", "transport_residual"].map(String::from).to_vec();
    let mut summary = format!("holonomy: {holonomy} rad\n");
    if !rows.is_empty() {
        let _ = writeln!(summary, "{:>9}  {:<6} {:>4}  {:>13}  {:>16}", "dξ∠u deg", "kind", "dirs", "half aperture", "transport offset");
        for r in &rows {
            let ap: f64 = r[3].parse().unwrap_or(f64::NAN);
            let off: f64 = r[4].parse().unwrap_or(f64::NAN);
            let _ = writeln!(summary, "{:>9}  {:<6} {:>4}  {:>13.6e}  {:>16.3e}", r[0], r[1], r[2], ap, off);
        }
    }
    Ok(Report {
        summary,
        json: json!({
            "geometry": wf.describe(),
            "vertices": args.vertices,
            "u": u,
            "returned": back,
            "holonomy": holonomy,
            "step": args.step,
            "cone_table": table,
        }),
        csv: csv_table(&header, &rows)?,
    })
}

pub fn verify(g: &dyn WorldFunction, args: &VerifyArgs, seed: Option<u64>, solve: SolveOptions) -> Result<Report> {
    let opts = VerifyOptions {
        samples: args.samples,
        seed: seed.unwrap_or(args.seed),
        region: args.region.clone(),
        transitivity: args.transitivity,
        solve,
    };
    let report = verify_geometry(g, &opts)?;
    let rows: Vec<Vec<String>> =
        report.checks.iter().map(|c| vec![c.name.to_string(), c.status.to_string(), c.cases.to_string(), c.detail.clone()]).collect();
    Ok(Report {
        summary: report.table(),
        json: to_json(&report)?,
        csv: csv_table(&["check".into(), "status".into(), "cases".into(), "detail".into()], &rows)?,
    })
}
