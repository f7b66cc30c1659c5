//! One function per subcommand; each returns the artifact bytes and whether a validation check
//! was flagged.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thurston_core::annulus::{
    twist_width, LawRegistry, SlenderRegime, TwistWidthInput,
};
use thurston_core::convex::{
    analyze_polytope, analyze_poset, dual_body, dual_sphere_experiment, fmt_q, format_point,
    linear_invariance_check, primal_sphere_experiment, random_invertible, random_polytope3, AnalysisReport,
    AnalyzedPolytope, FacePoset, RationalPolytope, CLAIM_NAMES, REPORT_SCHEMA_VERSION,
};
use thurston_core::surface::{
    backtime_experiment, covector_samples, enumerate_slopes, finsler_norm, length_extraction, stretch_flow,
    thurston_distance, TangentVec,
};

use crate::args::*;
use crate::input::*;
use crate::output::{f, json_bytes, opt, CsvTable};
use crate::CliError;

pub struct Artifact {
    pub bytes: Vec<u8>,
    /// Description of the failed validation, if any.
    pub flag: Option<String>,
}

impl Artifact {
    fn ok(bytes: Vec<u8>) -> Self {
        Artifact { bytes, flag: None }
    }
}

pub fn run(cli: &Cli) -> Result<Artifact, CliError> {
    match &cli.command {
        Command::Stretch(a) => stretch(a),
        Command::Backtime(a) => backtime(a),
        Command::Distance(a) => distance(a),
        Command::Norm(a) => norm(a),
        Command::ExtractLength(a) => extract_length(a),
        Command::TwistWidth(a) => width(a),
        Command::Convex(ConvexCommand::Analyze(a)) => convex_analyze(a),
        Command::Convex(ConvexCommand::Dual(a)) => convex_dual(a),
        Command::Convex(ConvexCommand::Invariance(a)) => convex_invariance(a, cli.seed),
        Command::DualSphere(a) => dual_sphere(a),
        Command::PrimalSphere(a) => primal_sphere(a),
    }
}

fn stretch(a: &StretchArgs) -> Result<Artifact, CliError> {
    let registry = LawRegistry::default();
    let law = registry.get(&a.pattern)?;
    let t_end = parse_number(&a.t)?;
    if a.steps == 0 {
        return Err(CliError::input("bad_steps", "steps must be positive".into()));
    }
    if !(a.tol >= 0.0) {
        return Err(CliError::input("bad_tolerance", "tolerance must be non-negative".into()));
    }
    let times: Vec<f64> = (0..=a.steps).map(|k| t_end * k as f64 / a.steps as f64).collect();
    let mut params = vec![("pattern", law.name().to_string()), ("t", f(t_end)), ("steps", a.steps.to_string())];
    match (&a.annulus, &a.surface) {
        (Some(spec), None) => {
            let m = parse_annulus(spec)?;
            params.insert(0, ("annulus", format!("l={},tau={}", f(m.ell), f(m.tau))));
            let mut csv = CsvTable::new("stretch-annulus", &params, &["step", "t", "ell", "tau"])?;
            for (k, &t) in times.iter().enumerate() {
                let y = law.stretch11(&m, t);
                csv.row([k.to_string(), f(t), f(y.ell), f(y.tau)])?;
            }
            Ok(Artifact::ok(csv.into_bytes()?))
        }
        (None, Some(spec)) => {
            let x = parse_surface(spec)?;
            params.insert(0, ("surface", spec.clone()));
            params.push(("depth", a.depth.to_string()));
            params.push(("tol", f(a.tol)));
            let columns = ["step", "t", "ell", "tau", "certificate", "deviation", "argmax", "flagged"];
            let mut csv = CsvTable::new("stretch-surface", &params, &columns)?;
            let mut flagged = Vec::new();
            for (k, &t) in times.iter().enumerate() {
                let st = stretch_flow(&x, law, t, a.depth, a.tol)?;
                let v = &st.validation;
                if v.flagged {
                    flagged.push(k);
                }
                csv.row([
                    k.to_string(),
                    f(t),
                    f(st.point.chart.ell),
                    f(st.point.chart.tau),
                    f(v.sup.value),
                    f(v.deviation),
                    v.sup.argmax.to_string(),
                    v.flagged.to_string(),
                ])?;
            }
            let flag = (!flagged.is_empty())
                .then(|| format!("max-ratio certificate failed at steps {flagged:?}"));
            Ok(Artifact { bytes: csv.into_bytes()?, flag })
        }
        _ => Err(CliError::input("bad_target", "give exactly one of --annulus or --surface".into())),
    }
}

fn backtime(a: &BacktimeArgs) -> Result<Artifact, CliError> {
    let registry = LawRegistry::default();
    let law = registry.get(&a.pattern)?;
    let x = parse_surface(&a.surface)?;
    let probes = parse_slopes(&a.probes)?;
    let rep = backtime_experiment(&x, law, a.smax, a.steps, &probes)?;
    let params = [
        ("surface", a.surface.clone()),
        ("pattern", law.name().to_string()),
        ("smax", f(a.smax)),
        ("steps", a.steps.to_string()),
        ("probes", a.probes.clone()),
    ];
    let mut columns = vec!["s".to_string(), "ell".into(), "tau".into(), "tau_over_s".into()];
    columns.extend(probes.iter().map(|p| format!("normalized_{p}")));
    columns.extend(probes.iter().map(|p| format!("per_collar_{p}")));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut csv = CsvTable::new("backtime", &params, &cols)?;
    for r in &rep.rows {
        let mut fields = vec![f(r.s), f(r.ell), f(r.tau), f(r.tau_over_s)];
        fields.extend(r.normalized.iter().map(|v| opt(*v)));
        fields.extend(r.per_collar.iter().map(|v| opt(*v)));
        csv.row(fields)?;
    }
    let last = rep.rows.last().expect("at least one step");
    csv.note(format!("summary chart_slope={} ell0={} overflowed={}", rep.chart_slope, f(rep.ell0), rep.overflowed));
    csv.note(format!("summary ell_ratio={}", f(last.ell / (rep.ell0 * (-last.s).exp()))));
    csv.note(format!("summary tau_over_s={}", f(last.tau_over_s)));
    for ((p, i), v) in rep.probes.iter().zip(&rep.intersections).zip(&last.normalized) {
        let rel = v.map(|v| (v - *i as f64).abs() / *i as f64);
        csv.note(format!("summary probe={p} intersection={i} normalized={} rel_error={}", opt(*v), opt(rel)));
    }
    Ok(Artifact::ok(csv.into_bytes()?))
}

#[derive(Serialize)]
struct DepthRow {
    depth: usize,
    value: f64,
    argmax: String,
}

fn distance(a: &DistanceArgs) -> Result<Artifact, CliError> {
    let x = parse_surface(&a.x)?;
    let y = parse_surface(&a.y)?;
    let rep = thurston_distance(&x, &y, a.depth)?;
    let per_depth = (2..=a.depth)
        .map(|d| thurston_distance(&x, &y, d).map(|r| DepthRow { depth: d, value: r.value, argmax: r.argmax.to_string() }))
        .collect::<Result<Vec<_>, _>>()?;
    let doc = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "distance",
        "params": { "x": a.x, "y": a.y, "depth": a.depth },
        "value": rep.value,
        "argmax": rep.argmax.to_string(),
        "stabilization": { "last_increment": rep.increments[0], "previous_increment": rep.increments[1] },
        "per_depth": per_depth,
    });
    Ok(Artifact::ok(json_bytes(&doc)?))
}

fn norm(a: &NormArgs) -> Result<Artifact, CliError> {
    let x = parse_surface(&a.x)?;
    let (dl, dt) = parse_pair(&a.v)?;
    let v = TangentVec::new(dl, dt);
    let rep = finsler_norm(&x, v, a.depth, a.fd_step)?;
    let per_depth = (1..=a.depth)
        .map(|d| finsler_norm(&x, v, d, a.fd_step).map(|r| DepthRow { depth: d, value: r.value, argmax: r.argmax.to_string() }))
        .collect::<Result<Vec<_>, _>>()?;
    let doc = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "norm",
        "params": { "x": a.x, "v": [dl, dt], "depth": a.depth, "fd_step": a.fd_step },
        "value": rep.value,
        "argmax": rep.argmax.to_string(),
        "stabilization": { "last_increment": rep.increments[0], "previous_increment": rep.increments[1] },
        "per_depth": per_depth,
    });
    Ok(Artifact::ok(json_bytes(&doc)?))
}

fn extract_length(a: &ExtractArgs) -> Result<Artifact, CliError> {
    let x = parse_surface(&a.x)?;
    let gamma = parse_slope(&a.gamma)?;
    let alpha0 = parse_slope(&a.alpha0)?;
    if a.m_max < 1 {
        return Err(CliError::input("bad_m_max", "m-max must be at least 1".into()));
    }
    let target = x.length(gamma)?;
    let rep = length_extraction(&x.standard_triple()?, gamma, alpha0, a.m_max, a.depth, a.fd_step)?;
    let params = [
        ("x", a.x.clone()),
        ("gamma", gamma.to_string()),
        ("alpha0", alpha0.to_string()),
        ("m_max", a.m_max.to_string()),
        ("depth", a.depth.to_string()),
        ("fd_step", f(a.fd_step)),
    ];
    let cols = ["m", "alpha_m", "ell_alpha_m", "twist_norm", "diff_norm", "estimate", "rel_error"];
    let mut csv = CsvTable::new("extract-length", &params, &cols)?;
    for r in &rep.rows {
        csv.row([
            r.m.to_string(),
            r.alpha_m.to_string(),
            f(r.ell_alpha_m),
            f(r.twist_norm),
            f(r.diff_norm),
            f(r.estimate),
            f((r.estimate - target).abs() / target),
        ])?;
    }
    csv.note(format!("summary target={} intersection={} stopped_early={}", f(target), rep.intersection, rep.stopped_early));
    let flag = rep.stopped_early.then(|| format!("overflow stopped the sequence after m={}", rep.rows.len()));
    Ok(Artifact { bytes: csv.into_bytes()?, flag })
}

fn width(a: &TwistWidthArgs) -> Result<Artifact, CliError> {
    let cols = ["regime", "l_alpha", "l_beta_left", "l_gamma_left", "l_beta_right", "l_gamma_right", "width"];
    let row = |csv: &mut CsvTable, regime: &str, inp: &TwistWidthInput| -> Result<f64, CliError> {
        let w = twist_width(inp)?;
        csv.row([
            regime.to_string(),
            f(inp.l_alpha),
            f(inp.left.0),
            f(inp.left.1),
            f(inp.right.0),
            f(inp.right.1),
            f(w),
        ])?;
        Ok(w)
    };
    if let Some(l_alpha) = a.l_alpha {
        let left = parse_pair(a.left.as_deref().unwrap_or("1,1"))?;
        let right = match &a.right {
            Some(r) => parse_pair(r)?,
            None => left,
        };
        let inp = TwistWidthInput { l_alpha, left, right };
        let params = [("l_alpha", f(l_alpha)), ("left", format!("{},{}", f(left.0), f(left.1))), ("right", format!("{},{}", f(right.0), f(right.1)))];
        let mut csv = CsvTable::new("twist-width", &params, &cols)?;
        row(&mut csv, "given", &inp)?;
        return Ok(Artifact::ok(csv.into_bytes()?));
    }
    let regimes: Vec<SlenderRegime> = match a.regime.as_deref().unwrap_or("all") {
        "all" => SlenderRegime::ALL.to_vec(),
        name => vec![SlenderRegime::ALL
            .into_iter()
            .find(|r| r.label() == name)
            .ok_or_else(|| CliError::input("bad_regime", format!("unknown regime '{name}'")))?],
    };
    if a.steps == 0 || !(a.to > a.from) || !(a.from > 0.0) {
        return Err(CliError::input("bad_range", "need 0 < from < to and steps >= 1".into()));
    }
    let params = [
        ("regime", a.regime.clone().unwrap_or_else(|| "all".into())),
        ("from", f(a.from)),
        ("to", f(a.to)),
        ("steps", a.steps.to_string()),
    ];
    let mut csv = CsvTable::new("twist-width-decay", &params, &cols)?;
    let mut notes = Vec::new();
    for r in regimes {
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        let mut last = 0.0;
        for k in 0..=a.steps {
            let l = a.from + (a.to - a.from) * k as f64 / a.steps as f64;
            let w = row(&mut csv, r.label(), &thurston_core::annulus::slender_input(r, l))?;
            monotone &= w < prev;
            prev = w;
            last = w;
        }
        notes.push(format!("summary regime={} monotone_decreasing={monotone} final_width={}", r.label(), f(last)));
    }
    for n in notes {
        csv.note(n);
    }
    Ok(Artifact::ok(csv.into_bytes()?))
}

enum Body {
    Abstract(FacePoset),
    Polytope(String, AnalyzedPolytope),
}

fn load_body(a: &ConvexInput) -> Result<Body, CliError> {
    match (&a.poset, &a.points, &a.fixture) {
        (Some(path), None, None) => Ok(Body::Abstract(FacePoset::from_json(&read_file(path)?)?)),
        (None, Some(path), None) => {
            let (name, pts) = parse_points_file(path)?;
            Ok(Body::Polytope(name, AnalyzedPolytope::new(RationalPolytope::hull(&pts)?)))
        }
        (None, None, Some(name)) => match name.as_str() {
            "stadium" => Ok(Body::Abstract(FacePoset::stadium())),
            "square" => Ok(Body::Abstract(FacePoset::square())),
            other => Err(CliError::input("unknown_fixture", format!("no fixture named '{other}'"))),
        },
        _ => Err(CliError::input("bad_body", "give exactly one of --poset, --points or --fixture".into())),
    }
}

#[derive(Serialize)]
struct QueryResult {
    point: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    face: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fdim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    codim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'static str>,
}

#[derive(Serialize)]
struct AnalyzeDoc {
    command: &'static str,
    #[serde(flatten)]
    report: AnalysisReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    queries: Vec<QueryResult>,
}

fn convex_analyze(a: &ConvexInput) -> Result<Artifact, CliError> {
    let body = load_body(a)?;
    let queries = a.query.as_deref().map(parse_queries).transpose()?.unwrap_or_default();
    match body {
        Body::Abstract(p) => {
            if !queries.is_empty() {
                return Err(CliError::input("bad_query", "point queries need a polytope".into()));
            }
            Ok(Artifact::ok(json_bytes(&AnalyzeDoc { command: "convex analyze", report: analyze_poset(&p)?, queries: vec![] })?))
        }
        Body::Polytope(name, p) => {
            let results = queries
                .iter()
                .map(|x| {
                    let point = format_point(x);
                    match p.face_for_point(x) {
                        Ok(face) => Ok(QueryResult {
                            point,
                            face: Some(p.poset.faces[face].id.clone()),
                            dim: Some(p.poset.faces[face].dim),
                            fdim: Some(p.poset.fdim(face)?),
                            codim: p.codim(x).ok(),
                            error: None,
                        }),
                        Err(e) => Ok(QueryResult { point, face: None, dim: None, fdim: None, codim: None, error: Some(e.kind()) }),
                    }
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let report = analyze_polytope(&p, &name)?;
            Ok(Artifact::ok(json_bytes(&AnalyzeDoc { command: "convex analyze", report, queries: results })?))
        }
    }
}

fn convex_dual(a: &ConvexInput) -> Result<Artifact, CliError> {
    let Body::Polytope(name, p) = load_body(a)? else {
        return Err(CliError::input("bad_body", "the polar dual needs a polytope (--points)".into()));
    };
    let d = dual_body(&p.polytope)?;
    let cols: Vec<String> = (0..d.dim).map(|i| format!("x{i}")).collect();
    let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut csv = CsvTable::new("convex-dual", &[("name", name), ("primal_vertices", p.polytope.vertices.len().to_string())], &cols)?;
    for v in &d.vertices {
        csv.row(v.iter().map(fmt_q))?;
    }
    Ok(Artifact::ok(csv.into_bytes()?))
}

fn convex_invariance(a: &InvarianceArgs, seed: u64) -> Result<Artifact, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bodies: Vec<RationalPolytope> = match &a.points {
        Some(path) => vec![RationalPolytope::hull(&parse_points_file(path)?.1)?],
        None => (0..a.polytopes).map(|_| random_polytope3(&mut rng)).collect(),
    };
    let mut passes = [0usize; 7];
    let mut runs = 0;
    let mut failures = Vec::new();
    for (b, p) in bodies.iter().enumerate() {
        for k in 0..a.maps {
            let m = random_invertible(&mut rng, p.dim);
            let r = linear_invariance_check(p, &m)?;
            runs += 1;
            for c in &r.claims {
                if c.pass {
                    passes[c.index - 1] += 1;
                } else {
                    failures.push(json!({ "polytope": b, "map": k, "claim": c.index }));
                }
            }
        }
    }
    let claims: Vec<_> = CLAIM_NAMES
        .iter()
        .enumerate()
        .map(|(i, n)| json!({ "index": i + 1, "name": n, "passed": passes[i], "runs": runs }))
        .collect();
    let doc = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "convex invariance",
        "params": { "seed": seed, "maps": a.maps, "polytopes": bodies.len(), "points": a.points },
        "polytopes": bodies.iter().map(|p| p.vertex_strings()).collect::<Vec<_>>(),
        "claims": claims,
        "failures": failures,
    });
    let flag = (!failures.is_empty()).then(|| format!("{} invariance claims failed", failures.len()));
    Ok(Artifact { bytes: json_bytes(&doc)?, flag })
}

fn dual_sphere(a: &DualSphereArgs) -> Result<Artifact, CliError> {
    let x = parse_surface(&a.x)?;
    let samples = covector_samples(&x, a.depth, a.fd_step)?;
    let rep = dual_sphere_experiment(&samples, a.denominator)?;
    let flag = match (rep.origin_interior, rep.all_vertices()) {
        (true, true) => None,
        (false, _) => Some("origin is not interior to the covector hull".to_string()),
        (true, false) => Some(format!("{} slope covectors are not hull vertices", rep.non_vertex_slopes.len())),
    };
    let doc = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "dual-sphere",
        "params": { "x": a.x, "depth": a.depth, "fd_step": a.fd_step, "denominator": a.denominator },
        "covectors": samples.iter().map(|(s, w)| json!({ "slope": s.to_string(), "c_ell": w.c_ell, "c_tau": w.c_tau })).collect::<Vec<_>>(),
        "report": rep,
    });
    Ok(Artifact { bytes: json_bytes(&doc)?, flag })
}

fn primal_sphere(a: &PrimalSphereArgs) -> Result<Artifact, CliError> {
    let x = parse_surface(&a.x)?;
    let slopes = enumerate_slopes(a.edge_depth);
    let mut rep = primal_sphere_experiment(&x, a.directions, a.depth, a.fd_step, &slopes, a.tol)?;
    let flag = (!rep.all_flat()).then(|| "some low-depth slope shows no flat edge".to_string());
    if a.summary_only {
        rep.samples.clear();
    }
    let doc = json!({
        "schema_version": REPORT_SCHEMA_VERSION,
        "command": "primal-sphere",
        "params": { "x": a.x, "directions": a.directions, "depth": a.depth, "edge_depth": a.edge_depth, "tol": a.tol, "fd_step": a.fd_step },
        "report": rep,
    });
    Ok(Artifact { bytes: json_bytes(&doc)?, flag })
}
