//! Face posets with join tables, polytope-backed or read from JSON, and the adherence calculus
//! on top of them.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::polytope::RationalPolytope;
use crate::error::{Error, Result};

pub const POSET_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub id: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Symbolic family for representatives of a curved boundary arc.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    /// Vertex indices when the poset comes from a polytope.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JoinEntry {
    pub a: String,
    pub b: String,
    pub join: Option<String>,
}

/// On-disk form of an abstract poset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetDocument {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    pub faces: Vec<FaceRecord>,
    #[serde(default)]
    pub inclusions: Vec<(String, String)>,
    #[serde(default)]
    pub joins: Vec<JoinEntry>,
}

/// Proper faces of a body with strict inclusion (transitively closed) and a total join table.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePoset {
    pub name: String,
    pub faces: Vec<FaceRecord>,
    /// `below[i]`: proper subfaces of face `i`.
    below: Vec<BTreeSet<usize>>,
    above: Vec<BTreeSet<usize>>,
    join: Vec<Vec<Option<usize>>>,
}

/// Adherence data of one face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdherenceData {
    pub closure: usize,
    pub fdim: usize,
    pub closed: bool,
    pub height: usize,
    pub depth: usize,
    pub adim: usize,
}

impl FacePoset {
    fn assemble(name: String, faces: Vec<FaceRecord>, below: Vec<BTreeSet<usize>>) -> Self {
        let n = faces.len();
        let mut above = vec![BTreeSet::new(); n];
        for (sup, subs) in below.iter().enumerate() {
            for &s in subs {
                above[s].insert(sup);
            }
        }
        FacePoset { name, faces, below, above, join: vec![vec![None; n]; n] }
    }

    /// Lattice of proper faces; joins are smallest containing faces.
    pub fn from_polytope(p: &RationalPolytope) -> Self {
        let sets = p.face_vertex_sets();
        let index: BTreeMap<Vec<usize>, usize> = sets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let faces: Vec<FaceRecord> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| FaceRecord {
                id: format!("f{i}"),
                dim: p.face_dim(s),
                label: None,
                family: None,
                vertices: Some(s.clone()),
            })
            .collect();
        let below: Vec<BTreeSet<usize>> = sets
            .iter()
            .map(|s| {
                (0..sets.len())
                    .filter(|&j| sets[j].len() < s.len() && sets[j].iter().all(|v| s.binary_search(v).is_ok()))
                    .collect()
            })
            .collect();
        let mut poset = FacePoset::assemble(String::from("polytope"), faces, below);
        for i in 0..sets.len() {
            for j in i..sets.len() {
                let mut u: Vec<usize> = sets[i].iter().chain(&sets[j]).copied().collect();
                u.sort_unstable();
                u.dedup();
                let k = p.smallest_face_containing(&u).map(|f| index[&f]);
                poset.join[i][j] = k;
                poset.join[j][i] = k;
            }
        }
        poset
    }

    /// Missing join entries default to the unique minimal common superface (or `None` when the
    /// faces share no superface); ambiguous defaults are rejected.
    pub fn from_document(doc: PosetDocument) -> Result<Self> {
        if doc.schema_version != POSET_SCHEMA_VERSION {
            return Err(Error::InvalidPoset(format!("unsupported schema_version {}", doc.schema_version)));
        }
        let mut index = BTreeMap::new();
        for (i, f) in doc.faces.iter().enumerate() {
            if index.insert(f.id.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate face id '{}'", f.id)));
            }
        }
        let n = doc.faces.len();
        if n == 0 {
            return Err(Error::InvalidPoset("no faces".into()));
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::UnknownFace(id.to_string()));
        let mut below = vec![BTreeSet::new(); n];
        for (sub, sup) in &doc.inclusions {
            let (s, t) = (lookup(sub)?, lookup(sup)?);
            if doc.faces[s].dim >= doc.faces[t].dim {
                return Err(Error::InvalidPoset(format!("'{sub}' inside '{sup}' without a dimension drop")));
            }
            below[t].insert(s);
        }
        // transitive closure; dimensions strictly drop along inclusions so this terminates
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| doc.faces[i].dim);
        for &i in &order {
            let extra: BTreeSet<usize> = below[i].iter().flat_map(|&s| below[s].iter().copied()).collect();
            below[i].extend(extra);
        }
        let mut poset = FacePoset::assemble(doc.name, doc.faces, below);
        let mut explicit = vec![vec![false; n]; n];
        for e in &doc.joins {
            let (a, b) = (lookup(&e.a)?, lookup(&e.b)?);
            let j = e.join.as_deref().map(lookup).transpose()?;
            if let Some(j) = j {
                if !(poset.contains(j, a) && poset.contains(j, b)) {
                    return Err(Error::InvalidPoset(format!("join of '{}' and '{}' does not contain both", e.a, e.b)));
                }
            }
            poset.join[a][b] = j;
            poset.join[b][a] = j;
            explicit[a][b] = true;
            explicit[b][a] = true;
        }
        for a in 0..n {
            for b in a..n {
                if explicit[a][b] {
                    continue;
                }
                let j = poset.minimal_common_superface(a, b)?;
                poset.join[a][b] = j;
                poset.join[b][a] = j;
            }
        }
        Ok(poset)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PosetDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidPoset(format!("malformed poset JSON: {e}")))?;
        FacePoset::from_document(doc)
    }

    pub fn stadium() -> Self {
        FacePoset::from_json(include_str!("../../fixtures/stadium.json")).expect("bundled fixture is valid")
    }

    pub fn square() -> Self {
        FacePoset::from_json(include_str!("../../fixtures/square.json")).expect("bundled fixture is valid")
    }

    fn minimal_common_superface(&self, a: usize, b: usize) -> Result<Option<usize>> {
        let common: Vec<usize> = (0..self.len()).filter(|&k| self.contains(k, a) && self.contains(k, b)).collect();
        let minimal: Vec<usize> =
            common.iter().copied().filter(|&k| !common.iter().any(|&m| m != k && self.contains(k, m))).collect();
        match minimal.as_slice() {
            [] => Ok(None),
            [k] => Ok(Some(*k)),
            _ => Err(Error::InvalidPoset(format!(
                "faces '{}' and '{}' have no unique smallest common superface",
                self.faces[a].id, self.faces[b].id
            ))),
        }
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.faces.iter().position(|f| f.id == id).ok_or_else(|| Error::UnknownFace(id.to_string()))
    }

    pub fn index_of_vertices(&self, vs: &[usize]) -> Option<usize> {
        self.faces.iter().position(|f| f.vertices.as_deref() == Some(vs))
    }

    /// `sup` contains `sub` (not necessarily strictly).
    pub fn contains(&self, sup: usize, sub: usize) -> bool {
        sup == sub || self.below[sup].contains(&sub)
    }

    pub fn subfaces(&self, f: usize) -> &BTreeSet<usize> {
        &self.below[f]
    }

    pub fn superfaces(&self, f: usize) -> &BTreeSet<usize> {
        &self.above[f]
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.join[a][b]
    }

    /// `f` adheres to `g ⊇ f` when `g` is joinable with every superface of `f`.
    pub fn is_adherent(&self, f: usize, g: usize) -> bool {
        self.contains(g, f)
            && std::iter::once(f).chain(self.above[f].iter().copied()).all(|h| self.join[g][h].is_some())
    }

    /// The unique maximal face that `f` adheres to.
    pub fn adherence_closure(&self, f: usize) -> Result<usize> {
        let adherent: Vec<usize> =
            std::iter::once(f).chain(self.above[f].iter().copied()).filter(|&g| self.is_adherent(f, g)).collect();
        let maximal: Vec<usize> =
            adherent.iter().copied().filter(|&g| !adherent.iter().any(|&h| h != g && self.contains(h, g))).collect();
        match maximal.as_slice() {
            [g] => Ok(*g),
            _ => Err(Error::InvalidPoset(format!("face '{}' has no unique adherence closure", self.faces[f].id))),
        }
    }

    pub fn fdim(&self, f: usize) -> Result<usize> {
        Ok(self.faces[self.adherence_closure(f)?].dim)
    }

    fn fdims(&self) -> Result<Vec<usize>> {
        (0..self.len()).map(|f| self.fdim(f)).collect()
    }

    /// The face and every subface whose closure is it (interiors taken combinatorially).
    pub fn adherence_core(&self, f: usize) -> Result<Vec<usize>> {
        if self.adherence_closure(f)? != f {
            return Err(Error::NotClosed);
        }
        let mut core = vec![f];
        for &g in &self.below[f] {
            if self.adherence_closure(g)? == f {
                core.push(g);
            }
        }
        core.sort_unstable();
        Ok(core)
    }

    pub fn is_adherence_complete(&self, f: usize) -> Result<bool> {
        Ok(self.adherence_core(f)?.len() == self.below[f].len() + 1)
    }

    /// Heights and depths: shortest saturated chains with strictly increasing face-dimension,
    /// ending (height) or starting (depth) at each face.
    fn heights_depths(&self, fd: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let n = self.len();
        let mut by_dim: Vec<usize> = (0..n).collect();
        by_dim.sort_by_key(|&i| self.faces[i].dim);
        // a step g ⊊ f with fd[g] < fd[f] is saturated if nothing fits strictly between
        let saturated = |g: usize, f: usize| {
            fd[g] < fd[f]
                && !self.below[f]
                    .iter()
                    .any(|&h| self.below[h].contains(&g) && fd[g] < fd[h] && fd[h] < fd[f])
        };
        let mut height = vec![0; n];
        for &f in &by_dim {
            height[f] = self.below[f]
                .iter()
                .filter(|&&g| saturated(g, f))
                .map(|&g| 1 + height[g])
                .min()
                .unwrap_or(1);
        }
        let mut depth = vec![0; n];
        for &f in by_dim.iter().rev() {
            depth[f] = self.above[f]
                .iter()
                .filter(|&&g| saturated(f, g))
                .map(|&g| 1 + depth[g])
                .min()
                .unwrap_or(1);
        }
        (height, depth)
    }

    /// Full adherence table, one entry per face.
    pub fn adherence_table(&self) -> Result<Vec<AdherenceData>> {
        let closures: Vec<usize> = (0..self.len()).map(|f| self.adherence_closure(f)).collect::<Result<_>>()?;
        let fd = self.fdims()?;
        let (height, depth) = self.heights_depths(&fd);
        Ok((0..self.len())
            .map(|f| AdherenceData {
                closure: closures[f],
                fdim: fd[f],
                closed: closures[f] == f,
                height: height[f],
                depth: depth[f],
                adim: height[f] + depth[f] - 2,
            })
            .collect())
    }

    pub fn to_document(&self) -> PosetDocument {
        let mut inclusions = Vec::new();
        for (sup, subs) in self.below.iter().enumerate() {
            for &s in subs {
                inclusions.push((self.faces[s].id.clone(), self.faces[sup].id.clone()));
            }
        }
        let mut joins = Vec::new();
        for a in 0..self.len() {
            for b in a..self.len() {
                joins.push(JoinEntry {
                    a: self.faces[a].id.clone(),
                    b: self.faces[b].id.clone(),
                    join: self.join[a][b].map(|k| self.faces[k].id.clone()),
                });
            }
        }
        PosetDocument { schema_version: POSET_SCHEMA_VERSION, name: self.name.clone(), faces: self.faces.clone(), inclusions, joins }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simplex(n: usize) -> RationalPolytope {
        let mut pts = vec![vec![0i64; n]];
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            pts.push(e);
        }
        RationalPolytope::from_integers(&pts).unwrap()
    }

    /// Exhaustive oracle: enumerate every chain of strict inclusions with strictly increasing
    /// face-dimension, keep those that admit no single insertion, take the minimum length.
    fn brute_height_depth(p: &FacePoset, f: usize, fd: &[usize], ending: bool) -> usize {
        let n = p.len();
        let mut chains: Vec<Vec<usize>> = vec![vec![f]];
        let mut all = Vec::new();
        while let Some(c) = chains.pop() {
            all.push(c.clone());
            let end = if ending { c[0] } else { *c.last().unwrap() };
            for g in 0..n {
                let ok = if ending {
                    p.below[end].contains(&g) && fd[g] < fd[end]
                } else {
                    p.above[end].contains(&g) && fd[g] > fd[end]
                };
                if ok {
                    let mut d = c.clone();
                    if ending {
                        d.insert(0, g)
                    } else {
                        d.push(g)
                    }
                    chains.push(d);
                }
            }
        }
        let is_chain = |c: &[usize]| c.windows(2).all(|w| p.below[w[1]].contains(&w[0]) && fd[w[0]] < fd[w[1]]);
        all.iter()
            .filter(|c| {
                // maximal: no face can be inserted while keeping the anchored end
                !(0..n).any(|g| {
                    if c.contains(&g) {
                        return false;
                    }
                    (0..=c.len()).any(|pos| {
                        if (ending && pos == c.len()) || (!ending && pos == 0) {
                            return false;
                        }
                        let mut d = c.to_vec();
                        d.insert(pos, g);
                        is_chain(&d)
                    })
                })
            })
            .map(|c| c.len())
            .min()
            .unwrap()
    }

    #[test]
    fn stadium_adherence() {
        let s = FacePoset::stadium();
        let x = s.index_of("x").unwrap();
        let e = s.index_of("e").unwrap();
        assert_eq!(s.adherence_closure(x).unwrap(), e);
        assert_eq!(s.faces[x].dim, 0);
        assert_eq!(s.fdim(x).unwrap(), 1);
        let core = s.adherence_core(e).unwrap();
        for id in ["e", "x", "y"] {
            assert!(core.contains(&s.index_of(id).unwrap()));
        }
        assert!(s.is_adherence_complete(e).unwrap());
        assert_eq!(s.adherence_core(x), Err(Error::NotClosed));
        // arc representatives are isolated maximal points
        for f in s.faces.iter().enumerate().filter(|(_, f)| f.family.is_some()) {
            let t = &s.adherence_table().unwrap()[f.0];
            assert_eq!((t.closure, t.adim), (f.0, 0));
            assert!(s.is_adherence_complete(f.0).unwrap());
        }
    }

    #[test]
    fn square_poset_vertices_are_closed() {
        let s = FacePoset::square();
        let y = s.index_of("y").unwrap();
        assert_eq!(s.adherence_closure(y).unwrap(), y);
        assert_eq!(s.fdim(y).unwrap(), 0);
    }

    #[test]
    fn polytope_faces_are_closed() {
        for n in 1..=4 {
            let p = FacePoset::from_polytope(&simplex(n));
            for d in p.adherence_table().unwrap() {
                assert!(d.closed);
            }
        }
    }

    #[test]
    fn simplex_facet_height_depth_core() {
        for n in 2..=4 {
            let p = FacePoset::from_polytope(&simplex(n));
            let t = p.adherence_table().unwrap();
            for (i, f) in p.faces.iter().enumerate() {
                if f.dim == n - 1 {
                    assert_eq!((t[i].height, t[i].depth), (n, 1));
                    assert_eq!(p.adherence_core(i).unwrap(), vec![i]);
                    assert!(!p.is_adherence_complete(i).unwrap());
                }
                assert_eq!(t[i].adim, n - 1);
            }
        }
    }

    #[test]
    fn recursion_matches_exhaustive_chains() {
        let posets = [
            FacePoset::stadium(),
            FacePoset::square(),
            FacePoset::from_polytope(&simplex(3)),
            FacePoset::from_polytope(
                &RationalPolytope::from_integers(&[
                    vec![0, 0, 0],
                    vec![2, 0, 0],
                    vec![0, 2, 0],
                    vec![2, 2, 0],
                    vec![1, 1, 2],
                ])
                .unwrap(),
            ),
        ];
        for p in &posets {
            let t = p.adherence_table().unwrap();
            let fd: Vec<usize> = t.iter().map(|d| d.fdim).collect();
            for f in 0..p.len() {
                assert_eq!(t[f].height, brute_height_depth(p, f, &fd, true), "{} {}", p.name, p.faces[f].id);
                assert_eq!(t[f].depth, brute_height_depth(p, f, &fd, false), "{} {}", p.name, p.faces[f].id);
            }
        }
    }

    #[test]
    fn document_roundtrip_and_errors() {
        let s = FacePoset::stadium();
        let back = FacePoset::from_document(s.to_document()).unwrap();
        assert_eq!(back, s);
        let bad = r#"{"schema_version":1,"faces":[{"id":"a","dim":1},{"id":"b","dim":1}],"inclusions":[["a","b"]]}"#;
        assert!(matches!(FacePoset::from_json(bad), Err(Error::InvalidPoset(_))));
        let unknown = r#"{"schema_version":1,"faces":[{"id":"a","dim":0}],"inclusions":[["a","z"]]}"#;
        assert_eq!(FacePoset::from_json(unknown), Err(Error::UnknownFace("z".into())));
        let version = r#"{"schema_version":9,"faces":[{"id":"a","dim":0}]}"#;
        assert!(FacePoset::from_json(version).is_err());
    }

    #[test]
    fn polytope_joins_are_smallest_faces() {
        let sq = RationalPolytope::from_integers(&[vec![0, 0], vec![2, 0], vec![2, 2], vec![0, 2]]).unwrap();
        let p = FacePoset::from_polytope(&sq);
        let v0 = p.index_of_vertices(&[0]).unwrap();
        let v1 = p.index_of_vertices(&[1]).unwrap();
        let v2 = p.index_of_vertices(&[2]).unwrap();
        let edge = p.index_of_vertices(&[0, 1]).unwrap();
        assert_eq!(p.join(v0, v1), Some(edge));
        assert_eq!(p.join(v0, v2), None);
        assert_eq!(p.join(v0, v0), Some(v0));
    }
}
