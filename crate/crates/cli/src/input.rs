//! Parsing of command-line values and JSON input documents.

use std::fs;

use serde::Deserialize;
use thurston_core::annulus::AnnulusMetric11;
use thurston_core::convex::{parse_rational, Q, QVec};
use thurston_core::surface::{ChartPoint, FrickeTriple, Marking, Slope, SurfacePoint};

use crate::CliError;

pub fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input("io", format!("cannot read '{path}': {e}")))
}

/// Plain floats, `ln2`, `ln(2)`, `-ln3`, `inf` is rejected.
pub fn parse_number(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let bad = || CliError::input("bad_number", format!("cannot parse number '{s}'"));
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let v = if let Some(arg) = body.strip_prefix("ln") {
        let arg = arg.trim_start_matches('(').trim_end_matches(')');
        let x: f64 = arg.parse().map_err(|_| bad())?;
        if !(x > 0.0) {
            return Err(bad());
        }
        x.ln()
    } else {
        body.parse::<f64>().map_err(|_| bad())?
    };
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(if neg { -v } else { v })
}

pub fn parse_pair(s: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_number(a)?, parse_number(b)?)),
        _ => Err(CliError::input("bad_pair", format!("expected two comma-separated numbers, got '{s}'"))),
    }
}

/// `l=1,tau=0` (keys `l`/`ell` and `tau`, any order).
pub fn parse_annulus(s: &str) -> Result<AnnulusMetric11, CliError> {
    let (mut ell, mut tau) = (None, None);
    for item in s.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::input("bad_annulus", format!("expected key=value in '{item}'")))?;
        match k.trim() {
            "l" | "ell" => ell = Some(parse_number(v)?),
            "tau" | "t" => tau = Some(parse_number(v)?),
            other => return Err(CliError::input("bad_annulus", format!("unknown key '{other}'"))),
        }
    }
    match (ell, tau) {
        (Some(l), Some(t)) => Ok(AnnulusMetric11::new(l, t)?),
        _ => Err(CliError::input("bad_annulus", "annulus needs both l and tau".into())),
    }
}

pub fn parse_slope(s: &str) -> Result<Slope, CliError> {
    s.trim().parse::<Slope>().map_err(|_| CliError::input("bad_slope", format!("cannot parse slope '{s}'")))
}

pub fn parse_slopes(s: &str) -> Result<Vec<Slope>, CliError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_slope).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceDoc {
    schema_version: u32,
    #[serde(default)]
    fricke: Option<[f64; 3]>,
    #[serde(default)]
    chart: Option<ChartDoc>,
    /// Basis classes `[[e1x, e1y], [e2x, e2y]]` for a chart point.
    #[serde(default)]
    marking: Option<[[i64; 2]; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartDoc {
    ell: f64,
    tau: f64,
}

pub const SURFACE_SCHEMA_VERSION: u32 = 1;

/// `markov333`, `fricke:a,b,c`, `chart:l,tau`, or a path to a JSON surface spec.
pub fn parse_surface(s: &str) -> Result<SurfacePoint, CliError> {
    if s == "markov333" {
        return Ok(SurfacePoint::from_triple(&FrickeTriple::markov())?);
    }
    if let Some(rest) = s.strip_prefix("fricke:") {
        let v: Vec<f64> = rest.split(',').map(parse_number).collect::<Result<_, _>>()?;
        let [a, b, c] = v[..] else {
            return Err(CliError::input("bad_surface", format!("fricke needs three traces, got '{rest}'")));
        };
        return Ok(SurfacePoint::from_triple(&FrickeTriple::new(a, b, c)?)?);
    }
    if let Some(rest) = s.strip_prefix("chart:") {
        let (l, t) = parse_pair(rest)?;
        return Ok(SurfacePoint::standard(ChartPoint::new(l, t)?));
    }
    let text = read_file(s)?;
    let doc: SurfaceDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::input("bad_surface", format!("malformed surface spec '{s}': {e}")))?;
    if doc.schema_version != SURFACE_SCHEMA_VERSION {
        return Err(CliError::input("bad_surface", format!("unsupported schema_version {}", doc.schema_version)));
    }
    match (doc.fricke, doc.chart) {
        (Some([a, b, c]), None) => {
            if doc.marking.is_some() {
                return Err(CliError::input("bad_surface", "a marking only applies to chart coordinates".into()));
            }
            Ok(SurfacePoint::from_triple(&FrickeTriple::new(a, b, c)?)?)
        }
        (None, Some(ch)) => {
            let marking = match doc.marking {
                Some([[a, b], [c, d]]) => Marking::new((a, b), (c, d))?,
                None => Marking::STANDARD,
            };
            Ok(SurfacePoint::new(ChartPoint::new(ch.ell, ch.tau)?, marking))
        }
        _ => Err(CliError::input("bad_surface", "surface spec needs exactly one of 'fricke' or 'chart'".into())),
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsDoc {
    schema_version: u32,
    #[serde(default)]
    name: Option<String>,
    points: Vec<Vec<Coord>>,
}

fn coord(c: &Coord) -> Result<Q, CliError> {
    match c {
        Coord::Int(i) => Ok(Q::from_integer((*i).into())),
        Coord::Text(s) => Ok(parse_rational(s)?),
    }
}

/// Exact point list; coordinates are integers or strings such as `"-1/2"`.
pub fn parse_points_file(path: &str) -> Result<(String, Vec<QVec>), CliError> {
    let text = read_file(path)?;
    let doc: PointsDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::input("bad_points", format!("malformed points file '{path}': {e}")))?;
    if doc.schema_version != 1 {
        return Err(CliError::input("bad_points", format!("unsupported schema_version {}", doc.schema_version)));
    }
    let pts = doc.points.iter().map(|p| p.iter().map(coord).collect()).collect::<Result<_, _>>()?;
    Ok((doc.name.unwrap_or_else(|| "polytope".into()), pts))
}

/// `x1,x2;y1,y2` with exact rational entries.
pub fn parse_queries(s: &str) -> Result<Vec<QVec>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.split(',').map(|c| parse_rational(c).map_err(CliError::from)).collect())
        .collect()
}
