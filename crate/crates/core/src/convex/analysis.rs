//! Point queries, codimension, polar duals, exposedness and linear-invariance checks on polytopes.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::polytope::{Location, RationalPolytope};
use super::poset::{AdherenceData, FacePoset};
use super::rational::{affine_rank, det, dot, fmt_q, q, Q, QVec};
use crate::error::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A polytope together with its face lattice.
#[derive(Debug, Clone)]
pub struct AnalyzedPolytope {
    pub polytope: RationalPolytope,
    pub poset: FacePoset,
}

impl AnalyzedPolytope {
    pub fn new(polytope: RationalPolytope) -> Self {
        let poset = FacePoset::from_polytope(&polytope);
        AnalyzedPolytope { polytope, poset }
    }

    /// Index of the face whose relative interior holds `x`.
    pub fn face_for_point(&self, x: &[Q]) -> Result<usize> {
        match self.polytope.locate(x)? {
            Location::Interior => Err(Error::PointInterior),
            Location::Outside => Err(Error::PointOutside),
            Location::Boundary(tight) => {
                let vs = self.polytope.intersect_facets(&tight);
                Ok(self.poset.index_of_vertices(&vs).expect("every facet intersection is a listed face"))
            }
        }
    }

    pub fn point_dim(&self, x: &[Q]) -> Result<usize> {
        Ok(self.poset.faces[self.face_for_point(x)?].dim)
    }

    pub fn point_fdim(&self, x: &[Q]) -> Result<usize> {
        self.poset.fdim(self.face_for_point(x)?)
    }

    /// Dimension of the normalized normal set of a face: affine rank of the scaled normals of the
    /// facets through it.
    pub fn face_codim(&self, f: usize) -> Result<usize> {
        let normals = self.polytope.polar_normals()?;
        let vs = self.poset.faces[f].vertices.as_ref().expect("polytope-backed face");
        let tight: Vec<&QVec> = self.polytope.facets_containing(vs).into_iter().map(|i| &normals[i]).collect();
        Ok(affine_rank(&tight))
    }

    pub fn codim(&self, x: &[Q]) -> Result<usize> {
        if !self.polytope.origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        self.face_codim(self.face_for_point(x)?)
    }

    /// Cut out by the sum of the facet inequalities through the face.
    pub fn is_exposed(&self, f: usize) -> bool {
        let vs = self.poset.faces[f].vertices.as_ref().expect("polytope-backed face");
        let fs = self.polytope.facets_containing(vs);
        let n = self.polytope.dim;
        let mut normal = vec![Q::zero(); n];
        let mut offset = Q::zero();
        for i in &fs {
            for (a, b) in normal.iter_mut().zip(&self.polytope.facets[*i].normal) {
                *a += b;
            }
            offset += &self.polytope.facets[*i].offset;
        }
        let hit: Vec<usize> =
            (0..self.polytope.vertices.len()).filter(|&v| dot(&normal, &self.polytope.vertices[v]) == offset).collect();
        !fs.is_empty() && hit == *vs
    }
}

pub fn dual_body(p: &RationalPolytope) -> Result<RationalPolytope> {
    RationalPolytope::hull(&p.polar_normals()?)
}

/// Equal as vertex sets.
pub fn same_body(a: &RationalPolytope, b: &RationalPolytope) -> bool {
    let sa: BTreeSet<&QVec> = a.vertices.iter().collect();
    let sb: BTreeSet<&QVec> = b.vertices.iter().collect();
    sa == sb
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub index: usize,
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub claims: Vec<Claim>,
}

impl InvarianceReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

pub const CLAIM_NAMES: [&str; 7] = [
    "faces map to faces",
    "dimension",
    "adherence relation",
    "face-dimension",
    "adherence height and depth",
    "adherence-dimension",
    "codimension",
];

/// Recompute the lattice of `M(P)` and compare every invariant face by face. Codimensions are
/// compared on copies centered at the vertex barycenter, which the map carries to each other.
pub fn linear_invariance_check(p: &RationalPolytope, m: &[QVec]) -> Result<InvarianceReport> {
    if m.len() != p.dim || m.iter().any(|r| r.len() != p.dim) || det(m).is_zero() {
        return Err(Error::Domain("map must be an invertible square matrix of the ambient size".into()));
    }
    let (src, img) = if p.origin_interior() {
        (p.clone(), p.transform(m)?)
    } else {
        let c = p.centered()?;
        let t = c.transform(m)?;
        (c, t)
    };
    let a = AnalyzedPolytope::new(src);
    let b = AnalyzedPolytope::new(img);
    let n = a.poset.len();
    // vertex order is preserved by the map, so faces correspond through their vertex sets
    let image: Vec<Option<usize>> =
        (0..n).map(|f| b.poset.index_of_vertices(a.poset.faces[f].vertices.as_ref().unwrap())).collect();
    let bijective = n == b.poset.len()
        && image.iter().all(Option::is_some)
        && image.iter().flatten().collect::<BTreeSet<_>>().len() == n
        && a.polytope.vertices.iter().zip(&b.polytope.vertices).all(|(v, w)| {
            m.iter().zip(w).all(|(row, wi)| dot(row, v) == *wi)
        });
    let mut pass = [bijective, true, true, true, true, true, true];
    if bijective {
        let im: Vec<usize> = image.into_iter().flatten().collect();
        let ta: Vec<AdherenceData> = a.poset.adherence_table()?;
        let tb: Vec<AdherenceData> = b.poset.adherence_table()?;
        for f in 0..n {
            let g = im[f];
            pass[1] &= a.poset.faces[f].dim == b.poset.faces[g].dim;
            for h in a.poset.superfaces(f) {
                pass[2] &= a.poset.is_adherent(f, *h) == b.poset.is_adherent(g, im[*h]);
            }
            pass[3] &= ta[f].fdim == tb[g].fdim && im[ta[f].closure] == tb[g].closure;
            pass[4] &= ta[f].height == tb[g].height && ta[f].depth == tb[g].depth;
            pass[5] &= ta[f].adim == tb[g].adim;
            pass[6] &= a.face_codim(f)? == b.face_codim(g)?;
        }
    } else {
        pass = [false; 7];
    }
    Ok(InvarianceReport {
        claims: CLAIM_NAMES.iter().zip(pass).enumerate().map(|(i, (name, pass))| Claim { index: i + 1, name, pass }).collect(),
    })
}

/// Hull of 12 integer points in `[-10, 10]^3`, recentred at its vertex barycenter.
pub fn random_polytope3(rng: &mut ChaCha8Rng) -> RationalPolytope {
    loop {
        let pts: Vec<QVec> = (0..12).map(|_| (0..3).map(|_| q(rng.gen_range(-10..=10))).collect()).collect();
        if let Ok(p) = RationalPolytope::hull(&pts) {
            return p.centered().expect("translation keeps full dimension");
        }
    }
}

/// Invertible integer matrix with entries in `[-3, 3]`.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> Vec<QVec> {
    loop {
        let m: Vec<QVec> = (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-3..=3))).collect()).collect();
        if !det(&m).is_zero() {
            return m;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceReport {
    pub id: String,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<usize>>,
    pub subfaces: Vec<String>,
    pub closure: String,
    pub fdim: usize,
    pub adherence_closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    pub height: usize,
    pub depth: usize,
    pub adim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exposed: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub name: String,
    pub backend: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin_interior: Option<bool>,
    pub faces: Vec<FaceReport>,
    pub joins: Vec<(String, String, Option<String>)>,
}

fn report_faces(poset: &FacePoset, geometry: Option<&AnalyzedPolytope>) -> Result<Vec<FaceReport>> {
    let table = poset.adherence_table()?;
    let id = |i: usize| poset.faces[i].id.clone();
    let origin_ok = geometry.is_some_and(|g| g.polytope.origin_interior());
    (0..poset.len())
        .map(|f| {
            let d = &table[f];
            let core = if d.closed { Some(poset.adherence_core(f)?.into_iter().map(id).collect()) } else { None };
            let complete = if d.closed { Some(poset.is_adherence_complete(f)?) } else { None };
            let codim = match geometry {
                Some(g) if origin_ok => Some(g.face_codim(f)?),
                _ => None,
            };
            Ok(FaceReport {
                id: id(f),
                dim: poset.faces[f].dim,
                label: poset.faces[f].label.clone(),
                family: poset.faces[f].family.clone(),
                vertices: poset.faces[f].vertices.clone(),
                subfaces: poset.subfaces(f).iter().map(|&g| id(g)).collect(),
                closure: id(d.closure),
                fdim: d.fdim,
                adherence_closed: d.closed,
                core,
                complete,
                height: d.height,
                depth: d.depth,
                adim: d.adim,
                codim,
                exposed: geometry.map(|g| g.is_exposed(f)),
            })
        })
        .collect()
}

fn report_joins(poset: &FacePoset) -> Vec<(String, String, Option<String>)> {
    let mut out = Vec::new();
    for a in 0..poset.len() {
        for b in a + 1..poset.len() {
            out.push((
                poset.faces[a].id.clone(),
                poset.faces[b].id.clone(),
                poset.join(a, b).map(|k| poset.faces[k].id.clone()),
            ));
        }
    }
    out
}

pub fn analyze_poset(poset: &FacePoset) -> Result<AnalysisReport> {
    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        name: poset.name.clone(),
        backend: "abstract",
        ambient_dim: None,
        vertices: None,
        origin_interior: None,
        faces: report_faces(poset, None)?,
        joins: report_joins(poset),
    })
}

pub fn analyze_polytope(p: &AnalyzedPolytope, name: &str) -> Result<AnalysisReport> {
    Ok(AnalysisReport {
        schema_version: REPORT_SCHEMA_VERSION,
        name: name.to_string(),
        backend: "polytope",
        ambient_dim: Some(p.polytope.dim),
        vertices: Some(p.polytope.vertex_strings()),
        origin_interior: Some(p.polytope.origin_interior()),
        faces: report_faces(&p.poset, Some(p))?,
        joins: report_joins(&p.poset),
    })
}

/// Parse `"3"`, `"-1/2"` or `"0.25"` (decimal literals are read exactly).
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Domain(format!("not a rational number: '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((i, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: num_bigint::BigInt = format!("{i}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(num_bigint::BigInt::from(10), frac.len());
        return Ok(Q::new(digits, scale));
    }
    Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
}

pub fn format_point(x: &[Q]) -> String {
    x.iter().map(fmt_q).collect::<Vec<_>>().join(",")
}
