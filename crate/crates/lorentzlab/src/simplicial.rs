//! Abstract simplicial complexes stored by their facets.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::poly::VarSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("{0:?} is not a face")]
    NotAFace(Vec<String>),
    #[error("complex is not pure")]
    NotPure,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex sets overlap at `{0}`")]
    Overlap(String),
    #[error("weld data inconsistent: {0}")]
    BadWeld(String),
}

/// A simplicial complex on an ordered, labeled vertex set. Vertices not in
/// any facet are allowed and simply belong to no face.
///
/// The void complex has no facets; the complex `{∅}` has the single empty facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimComplex {
    vertices: VarSet,
    facets: Vec<Vec<usize>>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

fn maximal(mut sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for s in sets.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    sets.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    sets.dedup();
    // subsets of small accepted facets are hashed; large facets are scanned
    let mut covered: HashSet<Vec<usize>> = HashSet::new();
    let mut large: Vec<Vec<usize>> = Vec::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        if covered.contains(&s) || large.iter().any(|f| is_subset(&s, f)) {
            continue;
        }
        if s.len() <= 12 {
            for k in 0..=s.len() {
                for c in s.iter().copied().combinations(k) {
                    covered.insert(c);
                }
            }
        } else {
            large.push(s.clone());
        }
        out.push(s);
    }
    out.sort();
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Result of an H-connectivity test. When it fails, `witness` holds a face
/// whose link is disconnected together with the link's vertex components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HConnectivity {
    pub h_connected: bool,
    pub witness: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl SimComplex {
    pub fn new(vertices: VarSet, facets: Vec<Vec<usize>>) -> SimComplex {
        for f in &facets {
            for &v in f {
                assert!(v < vertices.len(), "facet vertex out of range");
            }
        }
        SimComplex { vertices, facets: maximal(facets) }
    }

    pub fn from_labels(vertices: VarSet, facets: &[Vec<String>]) -> Result<SimComplex, ComplexError> {
        let fs = facets
            .iter()
            .map(|f| f.iter().map(|l| vertices.index_of(l).ok_or_else(|| ComplexError::UnknownVertex(l.clone()))).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimComplex::new(vertices, fs))
    }

    /// The full simplex on all vertices.
    pub fn simplex(vertices: VarSet) -> SimComplex {
        let all = (0..vertices.len()).collect();
        SimComplex::new(vertices, vec![all])
    }

    pub fn vertices(&self) -> &VarSet {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn labels_of(&self, s: &[usize]) -> Vec<String> {
        s.iter().map(|&i| self.vertices.label(i).to_string()).collect()
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// Faces are sorted index lists.
    pub fn is_face(&self, s: &[usize]) -> bool {
        let mut s = s.to_vec();
        s.sort_unstable();
        self.facets.iter().any(|f| is_subset(&s, f))
    }

    /// Largest facet size minus one (`-1` for `{∅}`, `-2` for the void complex).
    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.len() as isize).max().unwrap_or(-1) - 1
    }

    pub fn is_pure(&self, d: usize) -> bool {
        self.facets.iter().all(|f| f.len() == d)
    }

    /// Vertices that lie in some face.
    pub fn used_vertices(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.facets.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    /// All faces of size at most `max_size`, in sorted order.
    pub fn faces_up_to(&self, max_size: usize) -> Vec<Vec<usize>> {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            for k in 0..=max_size.min(f.len()) {
                for c in f.iter().copied().combinations(k) {
                    set.insert(c);
                }
            }
        }
        let mut v: Vec<Vec<usize>> = set.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }

    pub fn faces_of_size(&self, k: usize) -> Vec<Vec<usize>> {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            if f.len() >= k {
                for c in f.iter().copied().combinations(k) {
                    set.insert(c);
                }
            }
        }
        set.into_iter().collect()
    }

    /// `lk(S) = {T : T ∩ S = ∅, S ∪ T ∈ Δ}`, on the same vertex set.
    pub fn link(&self, s: &[usize]) -> Result<SimComplex, ComplexError> {
        let mut s = s.to_vec();
        s.sort_unstable();
        let containing: Vec<Vec<usize>> = self
            .facets
            .iter()
            .filter(|f| is_subset(&s, f))
            .map(|f| f.iter().copied().filter(|v| !s.contains(v)).collect())
            .collect();
        if containing.is_empty() {
            return Err(ComplexError::NotAFace(self.labels_of(&s)));
        }
        Ok(SimComplex { vertices: self.vertices.clone(), facets: maximal(containing) })
    }

    /// `τΔ`: the complex obtained by deleting all facets.
    pub fn skeleton(&self) -> SimComplex {
        let mut cands = Vec::new();
        for f in &self.facets {
            for i in 0..f.len() {
                let mut g = f.clone();
                g.remove(i);
                cands.push(g);
            }
        }
        SimComplex { vertices: self.vertices.clone(), facets: maximal(cands) }
    }

    /// Connected components (as vertex lists) of the 1-skeleton restricted to used vertices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let used = self.used_vertices();
        let pos: HashMap<usize, usize> = used.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut uf = UnionFind::new(used.len());
        for f in &self.facets {
            for w in f.windows(2) {
                uf.union(pos[&w[0]], pos[&w[1]]);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_group: HashMap<usize, usize> = HashMap::new();
        for (k, &v) in used.iter().enumerate() {
            let r = uf.find(k);
            let g = *root_group.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(v);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Requires purity; checks that every face with at most `d - 2` vertices
    /// has a connected link, where `d` is the facet size.
    pub fn h_connectivity(&self) -> Result<HConnectivity, ComplexError> {
        let Some(d) = self.facets.first().map(|f| f.len()) else {
            return Ok(HConnectivity { h_connected: true, witness: None });
        };
        if !self.is_pure(d) {
            return Err(ComplexError::NotPure);
        }
        if d < 2 {
            return Ok(HConnectivity { h_connected: true, witness: None });
        }
        let incidence = self.incidence();
        for s in self.faces_up_to(d - 2) {
            let comps = self.link_components(&s, &incidence);
            if comps.len() > 1 {
                let labelled = comps.iter().map(|c| self.labels_of(c)).collect();
                return Ok(HConnectivity { h_connected: false, witness: Some((self.labels_of(&s), labelled)) });
            }
        }
        Ok(HConnectivity { h_connected: true, witness: None })
    }

    pub fn is_h_connected(&self) -> Result<bool, ComplexError> {
        Ok(self.h_connectivity()?.h_connected)
    }

    /// Facet indices containing each vertex.
    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (k, f) in self.facets.iter().enumerate() {
            for &v in f {
                inc[v].push(k);
            }
        }
        inc
    }

    fn link_components(&self, s: &[usize], incidence: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let facet_ids: Vec<usize> = match s.split_first() {
            None => (0..self.facets.len()).collect(),
            Some((first, rest)) => incidence[*first].iter().copied().filter(|&k| rest.iter().all(|v| self.facets[k].binary_search(v).is_ok())).collect(),
        };
        let link = SimComplex {
            vertices: self.vertices.clone(),
            facets: facet_ids.iter().map(|&k| self.facets[k].iter().copied().filter(|v| !s.contains(v)).collect()).collect(),
        };
        link.components()
    }

    /// Stellar subdivision at the face `s`, adding a new vertex with label `new_label`.
    /// Returns the subdivided complex (vertex set extended by the new label at the end).
    pub fn stellar_subdivide(&self, s: &[usize], new_label: &str) -> Result<SimComplex, ComplexError> {
        let mut s = s.to_vec();
        s.sort_unstable();
        if s.is_empty() || !self.is_face(&s) {
            return Err(ComplexError::NotAFace(self.labels_of(&s)));
        }
        let vertices = self.vertices.with_extra(new_label).map_err(|_| ComplexError::Overlap(new_label.to_string()))?;
        let zero = self.vertices.len();
        let mut facets = Vec::new();
        for f in &self.facets {
            if is_subset(&s, f) {
                for x in &s {
                    let mut g: Vec<usize> = f.iter().copied().filter(|v| v != x).collect();
                    g.push(zero);
                    facets.push(g);
                }
            } else {
                facets.push(f.clone());
            }
        }
        Ok(SimComplex::new(vertices, facets))
    }

    /// Inverse of `stellar_subdivide`: removes vertex `zero` and restores the face `s`
    /// (indices in the current vertex set). Verified by re-subdividing.
    pub fn weld(&self, s: &[usize], zero: usize) -> Result<SimComplex, ComplexError> {
        let mut facets = Vec::new();
        for f in &self.facets {
            if f.contains(&zero) {
                let mut g: Vec<usize> = f.iter().copied().filter(|&v| v != zero).collect();
                g.extend_from_slice(s);
                facets.push(g);
            } else {
                facets.push(f.clone());
            }
        }
        let shift = |v: usize| if v > zero { v - 1 } else { v };
        let vertices = self.vertices.without(zero);
        let welded = SimComplex::new(vertices, facets.iter().map(|f| f.iter().map(|&v| shift(v)).collect()).collect());
        let s_new: Vec<usize> = s.iter().map(|&v| shift(v)).collect();
        let back = welded.stellar_subdivide(&s_new, self.vertices.label(zero))?;
        let back = back.relabel_to(&self.vertices)?;
        if back != *self {
            return Err(ComplexError::BadWeld("re-subdividing does not reproduce the complex".into()));
        }
        Ok(welded)
    }

    /// The same complex with vertices re-indexed into `target` by label.
    pub fn relabel_to(&self, target: &VarSet) -> Result<SimComplex, ComplexError> {
        let map: Vec<usize> = self
            .vertices
            .labels()
            .iter()
            .map(|l| target.index_of(l).ok_or_else(|| ComplexError::UnknownVertex(l.clone())))
            .collect::<Result<_, _>>()?;
        Ok(SimComplex::new(target.clone(), self.facets.iter().map(|f| f.iter().map(|&v| map[v]).collect()).collect()))
    }

    /// Join on the disjoint union of the vertex sets: faces are unions of faces.
    pub fn join(&self, other: &SimComplex) -> Result<SimComplex, ComplexError> {
        if let Some(l) = other.vertices.labels().iter().find(|l| self.vertices.index_of(l).is_some()) {
            return Err(ComplexError::Overlap(l.clone()));
        }
        let vertices = self.vertices.concat(&other.vertices).unwrap();
        let off = self.vertices.len();
        let mut facets = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                let mut f = a.clone();
                f.extend(b.iter().map(|v| v + off));
                facets.push(f);
            }
        }
        Ok(SimComplex::new(vertices, facets))
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson { vertices: self.vertices.labels().to_vec(), facets: self.facets.iter().map(|f| self.labels_of(f)).collect() }
    }

    pub fn from_json(j: &ComplexJson) -> Result<SimComplex, String> {
        let vs = VarSet::new(j.vertices.clone()).map_err(|e| format!("vertices: {}", e))?;
        SimComplex::from_labels(vs, &j.facets).map_err(|e| format!("facets: {}", e))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cx(n: usize, facets: &[&[usize]]) -> SimComplex {
        // vertex i is labelled "i"
        let vs = VarSet::new((1..=n).map(|i| i.to_string())).unwrap();
        SimComplex::new(vs, facets.iter().map(|f| f.iter().map(|v| v - 1).collect()).collect())
    }

    fn facet_labels(c: &SimComplex) -> Vec<Vec<String>> {
        c.facets().iter().map(|f| c.labels_of(f)).collect()
    }

    #[test]
    fn link_examples() {
        let tri = cx(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(facet_labels(&tri.link(&[0]).unwrap()), vec![vec!["2"], vec!["3"]]);
        assert_eq!(tri.link(&[]).unwrap(), tri);
        let full = cx(3, &[&[1, 2, 3]]);
        assert_eq!(facet_labels(&full.link(&[0, 1]).unwrap()), vec![vec!["3"]]);
        assert!(tri.link(&[0, 1, 2]).is_err());
    }

    #[test]
    fn skeleton_examples() {
        let full = cx(3, &[&[1, 2, 3]]);
        assert_eq!(full.skeleton(), cx(3, &[&[1, 2], &[1, 3], &[2, 3]]));
        let pts = cx(2, &[&[1], &[2]]);
        assert_eq!(pts.skeleton().facets(), &[Vec::<usize>::new()]);
        assert_eq!(cx(3, &[&[1, 2], &[1, 3], &[2, 3]]).skeleton(), cx(3, &[&[1], &[2], &[3]]));
    }

    #[test]
    fn h_connectivity_examples() {
        assert!(cx(3, &[&[1, 2], &[1, 3], &[2, 3]]).is_h_connected().unwrap());
        let two = cx(4, &[&[1, 2], &[3, 4]]);
        let r = two.h_connectivity().unwrap();
        assert!(!r.h_connected);
        assert_eq!(r.witness.unwrap().0, Vec::<String>::new());
        let bow = cx(5, &[&[1, 2, 3], &[1, 4, 5]]);
        let r = bow.h_connectivity().unwrap();
        assert!(!r.h_connected);
        assert_eq!(r.witness.unwrap().0, vec!["1"]);
        assert!(cx(2, &[&[1], &[2]]).is_h_connected().unwrap());
        assert!(cx(3, &[&[1, 2], &[3]]).is_h_connected().is_err());
    }

    #[test]
    fn stellar_examples() {
        let e = cx(2, &[&[1, 2]]);
        let s = e.stellar_subdivide(&[0, 1], "0").unwrap();
        assert_eq!(facet_labels(&s), vec![vec!["1", "0"], vec!["2", "0"]]);
        let t = cx(3, &[&[1, 2, 3]]);
        let s = t.stellar_subdivide(&[0, 1], "0").unwrap();
        assert_eq!(facet_labels(&s), vec![vec!["1", "3", "0"], vec!["2", "3", "0"]]);
        let s = t.stellar_subdivide(&[0], "0").unwrap();
        assert_eq!(facet_labels(&s), vec![vec!["2", "3", "0"]]);
        assert!(t.stellar_subdivide(&[], "0").is_err());
    }

    #[test]
    fn join_examples() {
        let a = SimComplex::new(VarSet::new(["a", "b"]).unwrap(), vec![vec![0, 1]]);
        let b = SimComplex::new(VarSet::new(["c", "d"]).unwrap(), vec![vec![0, 1]]);
        assert_eq!(a.join(&b).unwrap().facets(), &[vec![0, 1, 2, 3]]);
        let empty = SimComplex::new(VarSet::new(Vec::<String>::new()).unwrap(), vec![vec![]]);
        assert_eq!(a.join(&empty).unwrap(), a);
        let p = SimComplex::new(VarSet::new(["a", "b"]).unwrap(), vec![vec![0], vec![1]]);
        let q = SimComplex::new(VarSet::new(["c", "d"]).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(p.join(&q).unwrap().facets().len(), 4);
    }

    fn arb_pure() -> impl Strategy<Value = (SimComplex, usize)> {
        (2usize..=3, proptest::collection::vec(proptest::collection::btree_set(0usize..6, 3), 1..6), any::<prop::sample::Index>()).prop_map(|(d, sets, idx)| {
            let vs = VarSet::new((0..6).map(|i| format!("v{}", i))).unwrap();
            let facets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().take(d).collect()).collect();
            let c = SimComplex::new(vs, facets);
            let f = idx.index(c.facets().len());
            (c, f)
        })
    }

    proptest! {
        #[test]
        fn subdivision_preserves_h_connectivity((c, fi) in arb_pure(), pick in any::<prop::sample::Index>(), size in 1usize..=3) {
            let d = c.facets()[0].len();
            prop_assume!(c.is_pure(d));
            let facet = c.facets()[fi].clone();
            let k = size.min(facet.len());
            let start = pick.index(facet.len() - k + 1);
            let s: Vec<usize> = facet[start..start + k].to_vec();
            let sub = c.stellar_subdivide(&s, "@0").unwrap();
            prop_assert!(sub.is_pure(d));
            prop_assert_eq!(c.is_h_connected().unwrap(), sub.is_h_connected().unwrap());
            let zero = sub.vertices().len() - 1;
            prop_assert_eq!(sub.weld(&s, zero).unwrap(), c);
        }
    }
}
