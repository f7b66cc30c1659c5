//! Exact polytopes: hull by double description, facets, faces, point queries, polar duals.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::rational::{affine_rank, dot, fmt_q, inverse, normalize_direction, q, rank, sub, Q, QVec};
use crate::error::{Error, Result};

/// Largest vertex count accepted in dimensions 3 and 4.
pub const MAX_VERTICES: usize = 60;
/// Planar hulls are cheap; the sampled dual spheres need more points than `MAX_VERTICES`.
pub const MAX_VERTICES_PLANAR: usize = 4096;

/// `normal . x <= offset`, tight exactly on `vertices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: QVec,
    pub offset: Q,
    pub vertices: Vec<usize>,
}

/// A full-dimensional polytope in `Q^n`, `n <= 4`, with its facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolytope {
    pub dim: usize,
    pub vertices: Vec<QVec>,
    pub facets: Vec<Facet>,
}

/// Where a point sits relative to the body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Interior,
    Outside,
    /// On the boundary; indices of the tight facets.
    Boundary(Vec<usize>),
}

impl RationalPolytope {
    /// Convex hull of `points`. Repeated and non-extreme points are dropped; the surviving
    /// vertices keep their input order.
    pub fn hull(points: &[QVec]) -> Result<Self> {
        let n = points.first().map_or(0, |p| p.len());
        if n == 0 || n > 4 {
            return Err(Error::TooLarge(format!("ambient dimension {n} not in 1..=4")));
        }
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::Domain("points of mixed dimension".into()));
        }
        let mut uniq: Vec<QVec> = Vec::new();
        let mut seen = BTreeSet::new();
        for p in points {
            if seen.insert(p.clone()) {
                uniq.push(p.clone());
            }
        }
        let limit = if n <= 2 { MAX_VERTICES_PLANAR } else { MAX_VERTICES };
        if uniq.len() > limit {
            return Err(Error::TooLarge(format!("{} points exceed the limit of {limit}", uniq.len())));
        }
        if affine_rank(&uniq.iter().collect::<Vec<_>>()) < n {
            return Err(Error::NotFullDimensional);
        }
        let rows: Vec<QVec> = uniq
            .iter()
            .map(|p| {
                let mut r = p.clone();
                r.push(q(1));
                r
            })
            .collect();
        let rays = double_description(&rows);
        // ray y: y[..n] . v + y[n] >= 0, i.e. (-y[..n]) . v <= y[n]
        let mut raw: Vec<(QVec, Q, BTreeSet<usize>)> = rays
            .into_iter()
            .map(|y| {
                let normal: QVec = y[..n].iter().map(|c| -c).collect();
                let offset = y[n].clone();
                let tight = (0..uniq.len()).filter(|&i| dot(&normal, &uniq[i]) == offset).collect();
                (normal, offset, tight)
            })
            .collect();
        // vertices are points whose tight normals span the space
        let is_vertex: Vec<bool> = (0..uniq.len())
            .map(|i| {
                let normals: Vec<QVec> = raw.iter().filter(|f| f.2.contains(&i)).map(|f| f.0.clone()).collect();
                rank(&normals) == n
            })
            .collect();
        let mut remap = vec![usize::MAX; uniq.len()];
        let mut vertices = Vec::new();
        for (i, p) in uniq.into_iter().enumerate() {
            if is_vertex[i] {
                remap[i] = vertices.len();
                vertices.push(p);
            }
        }
        raw.sort_by(|a, b| a.2.iter().map(|i| remap[*i]).cmp(b.2.iter().map(|i| remap[*i])));
        let facets = raw
            .into_iter()
            .map(|(normal, offset, tight)| {
                let mut vs: Vec<usize> = tight.into_iter().filter(|i| is_vertex[*i]).map(|i| remap[i]).collect();
                vs.sort_unstable();
                Facet { normal, offset, vertices: vs }
            })
            .collect();
        let mut p = RationalPolytope { dim: n, vertices, facets };
        p.facets.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        Ok(p)
    }

    pub fn from_integers(points: &[Vec<i64>]) -> Result<Self> {
        RationalPolytope::hull(&points.iter().map(|p| p.iter().map(|x| q(*x)).collect()).collect::<Vec<_>>())
    }

    pub fn locate(&self, x: &[Q]) -> Result<Location> {
        if x.len() != self.dim {
            return Err(Error::Domain("query point has the wrong dimension".into()));
        }
        let mut tight = Vec::new();
        for (i, f) in self.facets.iter().enumerate() {
            let v = dot(&f.normal, x);
            if v > f.offset {
                return Ok(Location::Outside);
            }
            if v == f.offset {
                tight.push(i);
            }
        }
        Ok(if tight.is_empty() { Location::Interior } else { Location::Boundary(tight) })
    }

    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    /// Facet normals scaled to `a . x <= 1`; requires the origin inside.
    pub fn polar_normals(&self) -> Result<Vec<QVec>> {
        if !self.origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        Ok(self.facets.iter().map(|f| f.normal.iter().map(|c| c / &f.offset).collect()).collect())
    }

    /// Vertex sets of all proper faces: every non-empty intersection of facets.
    pub fn face_vertex_sets(&self) -> Vec<Vec<usize>> {
        let facet_sets: Vec<BTreeSet<usize>> = self.facets.iter().map(|f| f.vertices.iter().copied().collect()).collect();
        let mut all: BTreeSet<Vec<usize>> = facet_sets.iter().map(|s| s.iter().copied().collect()).collect();
        let mut frontier: Vec<BTreeSet<usize>> = facet_sets.clone();
        while let Some(s) = frontier.pop() {
            for f in &facet_sets {
                let i: BTreeSet<usize> = s.intersection(f).copied().collect();
                if !i.is_empty() {
                    let key: Vec<usize> = i.iter().copied().collect();
                    if all.insert(key) {
                        frontier.push(i);
                    }
                }
            }
        }
        let mut v: Vec<Vec<usize>> = all.into_iter().collect();
        v.sort_by(|a, b| self.face_dim(a).cmp(&self.face_dim(b)).then_with(|| a.cmp(b)));
        v
    }

    pub fn face_dim(&self, vs: &[usize]) -> usize {
        affine_rank(&vs.iter().map(|i| &self.vertices[*i]).collect::<Vec<_>>())
    }

    /// Facets containing every listed vertex.
    pub fn facets_containing(&self, vs: &[usize]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| vs.iter().all(|v| self.facets[i].vertices.binary_search(v).is_ok()))
            .collect()
    }

    /// Intersection of the given facets' vertex sets.
    pub fn intersect_facets(&self, facets: &[usize]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|v| facets.iter().all(|f| self.facets[*f].vertices.binary_search(v).is_ok()))
            .collect()
    }

    /// Smallest proper face containing the listed vertices, or `None` if only the body does.
    pub fn smallest_face_containing(&self, vs: &[usize]) -> Option<Vec<usize>> {
        let fs = self.facets_containing(vs);
        if fs.is_empty() {
            None
        } else {
            Some(self.intersect_facets(&fs))
        }
    }

    /// Barycenter of a vertex subset (a relative-interior point of the face it spans).
    pub fn barycenter(&self, vs: &[usize]) -> QVec {
        let k = q(vs.len() as i64);
        (0..self.dim)
            .map(|j| vs.iter().fold(Q::zero(), |acc, v| acc + &self.vertices[*v][j]) / &k)
            .collect()
    }

    /// Image under a linear map; vertex order is preserved.
    pub fn transform(&self, m: &[QVec]) -> Result<RationalPolytope> {
        if inverse(m).is_none() {
            return Err(Error::Domain("map is not invertible".into()));
        }
        let pts: Vec<QVec> = self.vertices.iter().map(|v| m.iter().map(|r| dot(r, v)).collect()).collect();
        RationalPolytope::hull(&pts)
    }

    /// Translate so that the vertex barycenter is the origin.
    pub fn centered(&self) -> Result<RationalPolytope> {
        let c = self.barycenter(&(0..self.vertices.len()).collect::<Vec<_>>());
        RationalPolytope::hull(&self.vertices.iter().map(|v| sub(v, &c)).collect::<Vec<_>>())
    }

    pub fn vertex_strings(&self) -> Vec<Vec<String>> {
        self.vertices.iter().map(|v| v.iter().map(fmt_q).collect()).collect()
    }
}

/// Extreme rays of `{y : rows . y >= 0}` for a full-rank row set (double description method with
/// the algebraic adjacency test).
fn double_description(rows: &[QVec]) -> Vec<QVec> {
    let d = rows[0].len();
    // greedy basis of d independent rows
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    let mut acc: Vec<QVec> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        acc.push(r.clone());
        if rank(&acc) == acc.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        } else {
            acc.pop();
        }
    }
    let b: Vec<QVec> = basis.iter().map(|i| rows[*i].clone()).collect();
    let inv = inverse(&b).expect("basis rows are independent");
    // columns of B^{-1}: B r_j = e_j
    let mut rays: Vec<(QVec, BTreeSet<usize>)> = (0..d)
        .map(|j| {
            let r: QVec = inv.iter().map(|row| row[j].clone()).collect();
            let zeros = basis.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, i)| *i).collect();
            (normalize_direction(&r), zeros)
        })
        .collect();
    for (i, a) in rows.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|(r, _)| dot(a, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|k| vals[*k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|k| vals[*k].is_negative()).collect();
        let mut next: Vec<(QVec, BTreeSet<usize>)> = Vec::new();
        for k in 0..rays.len() {
            if !vals[k].is_negative() {
                let mut r = rays[k].clone();
                if vals[k].is_zero() {
                    r.1.insert(i);
                }
                next.push(r);
            }
        }
        for &p in &pos {
            for &m in &neg {
                let common: BTreeSet<usize> = rays[p].1.intersection(&rays[m].1).copied().collect();
                if common.len() + 2 < d {
                    continue;
                }
                let tight: Vec<QVec> = common.iter().map(|c| rows[*c].clone()).collect();
                if rank(&tight) != d - 2 {
                    continue;
                }
                // combinatorial test: no other ray is tight on all of `common`
                let blocked = rays.iter().enumerate().any(|(k, r)| k != p && k != m && common.is_subset(&r.1));
                if blocked {
                    continue;
                }
                let new: QVec = rays[m]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(ym, yp)| &vals[p] * ym - &vals[m] * yp)
                    .collect();
                let mut zeros = common;
                zeros.insert(i);
                next.push((normalize_direction(&new), zeros));
            }
        }
        rays = next;
    }
    rays.into_iter().map(|(r, _)| r).collect()
}

/// Serializable summary of a polytope.
#[derive(Debug, Clone, Serialize)]
pub struct PolytopeSummary {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub facets: Vec<FacetSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetSummary {
    pub normal: Vec<String>,
    pub offset: String,
    pub vertices: Vec<usize>,
}

impl From<&RationalPolytope> for PolytopeSummary {
    fn from(p: &RationalPolytope) -> Self {
        PolytopeSummary {
            dim: p.dim,
            vertices: p.vertex_strings(),
            facets: p
                .facets
                .iter()
                .map(|f| FacetSummary {
                    normal: f.normal.iter().map(fmt_q).collect(),
                    offset: fmt_q(&f.offset),
                    vertices: f.vertices.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn square() -> RationalPolytope {
        RationalPolytope::from_integers(&[vec![0, 0], vec![2, 0], vec![2, 2], vec![0, 2]]).unwrap()
    }

    fn cube() -> RationalPolytope {
        let mut pts = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        RationalPolytope::from_integers(&pts).unwrap()
    }

    #[test]
    fn square_faces() {
        let s = square();
        assert_eq!(s.vertices.len(), 4);
        assert_eq!(s.facets.len(), 4);
        let faces = s.face_vertex_sets();
        assert_eq!(faces.iter().filter(|f| s.face_dim(f) == 0).count(), 4);
        assert_eq!(faces.iter().filter(|f| s.face_dim(f) == 1).count(), 4);
        assert_eq!(faces.len(), 8);
    }

    #[test]
    fn redundant_points_are_dropped() {
        let p = RationalPolytope::from_integers(&[
            vec![0, 0],
            vec![2, 0],
            vec![1, 0],
            vec![2, 2],
            vec![0, 2],
            vec![1, 1],
            vec![0, 0],
        ])
        .unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert!(p.facets.iter().all(|f| f.vertices.len() == 2));
    }

    #[test]
    fn simplex_and_cube_counts() {
        for n in 1..=4usize {
            let mut pts = vec![vec![0i64; n]];
            for i in 0..n {
                let mut e = vec![0i64; n];
                e[i] = 1;
                pts.push(e);
            }
            let s = RationalPolytope::from_integers(&pts).unwrap();
            assert_eq!(s.face_vertex_sets().len(), (1 << (n + 1)) - 2, "n = {n}");
        }
        let c = cube();
        let faces = c.face_vertex_sets();
        let count = |d| faces.iter().filter(|f| c.face_dim(f) == d).count();
        assert_eq!((count(0), count(1), count(2)), (8, 12, 6));
    }

    #[test]
    fn degenerate_and_oversized_inputs() {
        assert_eq!(
            RationalPolytope::from_integers(&[vec![0, 0], vec![1, 1], vec![2, 2]]),
            Err(Error::NotFullDimensional)
        );
        let many: Vec<Vec<i64>> = (0..61).map(|i| vec![i, i * i, i * i * i]).collect();
        assert!(matches!(RationalPolytope::from_integers(&many), Err(Error::TooLarge(_))));
    }

    #[test]
    fn locate_points() {
        let s = square();
        assert_eq!(s.locate(&[q(1), q(1)]).unwrap(), Location::Interior);
        assert_eq!(s.locate(&[q(3), q(1)]).unwrap(), Location::Outside);
        assert!(matches!(s.locate(&[q(0), q(1)]).unwrap(), Location::Boundary(t) if t.len() == 1));
        assert!(matches!(s.locate(&[q(0), q(0)]).unwrap(), Location::Boundary(t) if t.len() == 2));
    }

    /// Brute-force supporting hyperplanes through affinely independent vertex triples.
    #[test]
    fn cube_facets_match_brute_force() {
        let c = cube();
        let mut found = BTreeSet::new();
        let n = c.vertices.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = sub(&c.vertices[j], &c.vertices[i]);
                    let b = sub(&c.vertices[k], &c.vertices[i]);
                    let normal = vec![
                        &a[1] * &b[2] - &a[2] * &b[1],
                        &a[2] * &b[0] - &a[0] * &b[2],
                        &a[0] * &b[1] - &a[1] * &b[0],
                    ];
                    if normal.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let off = dot(&normal, &c.vertices[i]);
                    let vals: Vec<Q> = c.vertices.iter().map(|v| dot(&normal, v) - &off).collect();
                    let le = vals.iter().all(|v| !v.is_positive());
                    let ge = vals.iter().all(|v| !v.is_negative());
                    if le || ge {
                        let tight: Vec<usize> = (0..n).filter(|t| vals[*t].is_zero()).collect();
                        found.insert(tight);
                    }
                }
            }
        }
        let ours: BTreeSet<Vec<usize>> = c.facets.iter().map(|f| f.vertices.clone()).collect();
        assert_eq!(ours, found);
    }

    #[test]
    fn planar_hull_accepts_many_points() {
        let pts: Vec<Vec<i64>> = (0..100).map(|i| vec![i, i * i]).collect();
        let p = RationalPolytope::from_integers(&pts).unwrap();
        assert_eq!(p.vertices.len(), 100);
        assert_eq!(p.facets.len(), 100);
    }
}
