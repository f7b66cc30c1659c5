//! Unit spheres of the punctured-torus Thurston norm at a point: the dual sphere hulled exactly
//! from rationalized slope covectors, and the primal sphere sampled direction by direction.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::polytope::RationalPolytope;
use super::rational::{rationalize, QVec};
use crate::error::{Error, Result};
use crate::surface::{finsler_norm, Covector, Slope, SurfacePoint, TangentVec};

/// Default rationalization denominator for floating samples. Deep slope covectors at the Markov
/// point sit about 1e-10 outside the chord of their neighbours, so a coarser grid merges them into
/// edges.
pub const DEFAULT_DENOMINATOR: i64 = 100_000_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct DualSphereReport {
    pub samples: usize,
    pub denominator: i64,
    pub origin_interior: bool,
    pub hull_vertices: usize,
    /// Tagged slopes whose covectors are hull vertices.
    pub vertex_slopes: Vec<Slope>,
    pub non_vertex_slopes: Vec<Slope>,
    /// Hull edges, as slope pairs in boundary order.
    pub edges: Vec<(Slope, Slope)>,
}

impl DualSphereReport {
    pub fn all_vertices(&self) -> bool {
        self.non_vertex_slopes.is_empty()
    }
}

pub fn dual_sphere_experiment(samples: &[(Slope, Covector)], denominator: i64) -> Result<DualSphereReport> {
    if samples.len() < 3 {
        return Err(Error::Precondition("dual sphere needs at least 3 covectors".into()));
    }
    let pts: Vec<QVec> = samples
        .iter()
        .map(|(_, w)| Ok(vec![rationalize(w.c_ell, denominator)?, rationalize(w.c_tau, denominator)?]))
        .collect::<Result<_>>()?;
    let hull = RationalPolytope::hull(&pts).map_err(|e| match e {
        Error::NotFullDimensional => Error::Degenerate("covector samples are collinear".into()),
        other => other,
    })?;
    let vertex_of: BTreeMap<&QVec, usize> = hull.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut slope_of_vertex = vec![None; hull.vertices.len()];
    let (mut vertex_slopes, mut non_vertex_slopes) = (Vec::new(), Vec::new());
    for ((s, _), p) in samples.iter().zip(&pts) {
        match vertex_of.get(p) {
            Some(&i) => {
                slope_of_vertex[i].get_or_insert(*s);
                vertex_slopes.push(*s);
            }
            None => non_vertex_slopes.push(*s),
        }
    }
    let edges = hull
        .facets
        .iter()
        .filter_map(|f| match f.vertices.as_slice() {
            [a, b] => Some((slope_of_vertex[*a]?, slope_of_vertex[*b]?)),
            _ => None,
        })
        .collect();
    Ok(DualSphereReport {
        samples: samples.len(),
        denominator,
        origin_interior: hull.origin_interior(),
        hull_vertices: hull.vertices.len(),
        vertex_slopes,
        non_vertex_slopes,
        edges,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimalSample {
    pub angle: f64,
    pub point: [f64; 2],
    pub argmax: Slope,
}

/// Boundary points maximized by one slope: they should lie on the line `w_s(p) = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct FlatEdge {
    pub slope: Slope,
    pub points: usize,
    /// Largest distance from the least-squares line, relative to the segment length.
    pub residual: f64,
    pub length: f64,
    pub flat: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimalSphereReport {
    pub directions: usize,
    pub depth: usize,
    pub tolerance: f64,
    pub samples: Vec<PrimalSample>,
    pub edges: Vec<FlatEdge>,
}

impl PrimalSphereReport {
    pub fn all_flat(&self) -> bool {
        self.edges.iter().all(|e| e.flat)
    }
}

/// Principal-axis fit; residual is the largest orthogonal offset over the extent along the axis.
fn collinearity(points: &[[f64; 2]]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p[0] / n, b + p[1] / n));
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let (dx, dy) = (p[0] - mx, p[1] - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (ux, uy) = (theta.cos(), theta.sin());
    let along: Vec<f64> = points.iter().map(|p| (p[0] - mx) * ux + (p[1] - my) * uy).collect();
    let off = points.iter().map(|p| (-(p[0] - mx) * uy + (p[1] - my) * ux).abs()).fold(0.0, f64::max);
    let lo = along.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = along.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let length = hi - lo;
    (if length > 0.0 { off / length } else { f64::INFINITY }, length)
}

/// Sample `directions` unit vectors in the chart tangent plane, scale each onto the unit sphere,
/// group by maximizing slope and test each low-depth group for flatness.
pub fn primal_sphere_experiment(
    x: &SurfacePoint,
    directions: usize,
    depth: usize,
    h: f64,
    edge_slopes: &[Slope],
    tolerance: f64,
) -> Result<PrimalSphereReport> {
    if directions < 8 {
        return Err(Error::Precondition("primal sphere needs at least 8 directions".into()));
    }
    let samples: Vec<PrimalSample> = (0..directions)
        .into_par_iter()
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / directions as f64;
            let v = TangentVec::new(angle.cos(), angle.sin());
            let r = finsler_norm(x, v, depth, h)?;
            if r.value <= 0.0 {
                return Err(Error::Degenerate("norm vanished on a unit direction".into()));
            }
            Ok(PrimalSample { angle, point: [v.d_ell / r.value, v.d_tau / r.value], argmax: r.argmax })
        })
        .collect::<Result<_>>()?;
    let edges = edge_slopes
        .iter()
        .map(|&s| {
            let pts: Vec<[f64; 2]> = samples.iter().filter(|p| p.argmax == s).map(|p| p.point).collect();
            let (residual, length) = if pts.len() >= 3 { collinearity(&pts) } else { (f64::INFINITY, 0.0) };
            FlatEdge { slope: s, points: pts.len(), residual, length, flat: pts.len() >= 3 && residual <= tolerance }
        })
        .collect();
    Ok(PrimalSphereReport { directions, depth, tolerance, samples, edges })
}
