//! Matroids at desk scale: lattices of flats, the order complex with its
//! modular subspace, the volume polynomial pol_L, and the characteristic
//! polynomial computed from Möbius sums and from mixed derivatives of pol_L.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::hereditary::{from_weights, HerError, HereditaryPoly};
use crate::linalg::{LinSubspace, Vector};
use crate::lorentzian::{log_concave_seq, LogConcavity};
use crate::poly::{HomPoly, LinForm, VarSet};
use crate::rational::Q;
use crate::simplicial::SimComplex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("ground set has {0} elements, at most 64 are supported")]
    TooLarge(usize),
    #[error("unknown ground element {0}")]
    UnknownElement(String),
    #[error("duplicate ground element {0}")]
    DuplicateElement(String),
    #[error("no bases given")]
    NoBases,
    #[error("bases have different sizes")]
    UnequalBases,
    #[error("basis exchange fails for {0:?} and {1:?}")]
    Exchange(Vec<String>, Vec<String>),
    #[error("graph edge ({0}, {1}) is out of range")]
    BadEdge(usize, usize),
    #[error("lattice axiom fails: {0}")]
    Axiom(String),
    #[error("matroid has rank 0")]
    RankZero,
    #[error("matroid input must give exactly one of bases, graph, uniform")]
    BadInput,
    #[error(transparent)]
    Hereditary(#[from] HerError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum RankOracle {
    Bases(Vec<u64>),
    Graph { vertices: usize, edges: Vec<(usize, usize)> },
}

/// A matroid on a labelled ground set, given by its bases or as the cycle
/// matroid of a graph. Subsets are bitmasks over the ground positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matroid {
    labels: Vec<String>,
    oracle: RankOracle,
    rank: usize,
}

fn bits(s: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| s >> i & 1 == 1)
}

fn graph_rank(vertices: usize, edges: &[(usize, usize)], s: u64) -> usize {
    let mut parent: Vec<usize> = (0..vertices).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut r = 0;
    for i in bits(s) {
        let (u, v) = edges[i];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            r += 1;
        }
    }
    r
}

fn check_labels(labels: &[String]) -> Result<(), MatroidError> {
    if labels.len() > 64 {
        return Err(MatroidError::TooLarge(labels.len()));
    }
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(MatroidError::DuplicateElement(l.clone()));
        }
    }
    Ok(())
}

impl Matroid {
    /// From an explicit list of bases; checks equicardinality and basis exchange.
    pub fn from_bases(labels: Vec<String>, bases: &[Vec<String>]) -> Result<Matroid, MatroidError> {
        check_labels(&labels)?;
        let pos: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let mut masks = BTreeSet::new();
        for b in bases {
            let mut m = 0u64;
            for e in b {
                let i = *pos.get(e.as_str()).ok_or_else(|| MatroidError::UnknownElement(e.clone()))?;
                m |= 1 << i;
            }
            masks.insert(m);
        }
        let masks: Vec<u64> = masks.into_iter().collect();
        let Some(r) = masks.first().map(|m| m.count_ones() as usize) else {
            return Err(MatroidError::NoBases);
        };
        if masks.iter().any(|m| m.count_ones() as usize != r) {
            return Err(MatroidError::UnequalBases);
        }
        let set: BTreeSet<u64> = masks.iter().copied().collect();
        for &a in &masks {
            for &b in &masks {
                for x in bits(a & !b) {
                    if !bits(b & !a).any(|y| set.contains(&(a & !(1 << x) | 1 << y))) {
                        let names = |m: u64| bits(m).map(|i| labels[i].clone()).collect();
                        return Err(MatroidError::Exchange(names(a), names(b)));
                    }
                }
            }
        }
        Ok(Matroid { labels, oracle: RankOracle::Bases(masks), rank: r })
    }

    /// Cycle matroid of a graph on vertices `0..vertices`; edge `k` gets label `k+1`.
    pub fn from_graph(vertices: usize, edges: &[(usize, usize)]) -> Result<Matroid, MatroidError> {
        let labels: Vec<String> = (1..=edges.len()).map(|k| k.to_string()).collect();
        check_labels(&labels)?;
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(MatroidError::BadEdge(u, v));
        }
        let all = if edges.len() == 64 { u64::MAX } else { (1u64 << edges.len()) - 1 };
        let rank = graph_rank(vertices, edges, all);
        Ok(Matroid { labels, oracle: RankOracle::Graph { vertices, edges: edges.to_vec() }, rank })
    }

    /// `U_{r,n}` on `1..=n`.
    pub fn uniform(r: usize, n: usize) -> Matroid {
        assert!(r <= n && n <= 64);
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let bases: Vec<u64> = (0..n).combinations(r).map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)).collect();
        Matroid { labels, oracle: RankOracle::Bases(bases), rank: r }
    }

    /// The Fano plane on `1..=7`.
    pub fn fano() -> Matroid {
        const LINES: [[usize; 3]; 7] = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]];
        let labels: Vec<String> = (1..=7).map(|i| i.to_string()).collect();
        let lines: BTreeSet<u64> = LINES.iter().map(|l| l.iter().fold(0u64, |m, &i| m | 1 << (i - 1))).collect();
        let bases = (0..7).combinations(3).map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)).filter(|m| !lines.contains(m)).collect();
        Matroid { labels, oracle: RankOracle::Bases(bases), rank: 3 }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ground(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn rank_of(&self, s: u64) -> usize {
        match &self.oracle {
            RankOracle::Bases(bs) => bs.iter().map(|b| (b & s).count_ones() as usize).max().unwrap_or(0),
            RankOracle::Graph { vertices, edges } => graph_rank(*vertices, edges, s),
        }
    }

    /// `cl(S) = {e : r(S ∪ e) = r(S)}`.
    pub fn closure(&self, s: u64) -> u64 {
        let r = self.rank_of(s);
        (0..self.len()).filter(|&e| s >> e & 1 == 1 || self.rank_of(s | 1 << e) == r).fold(0, |m, e| m | 1 << e)
    }

    /// All flats, ordered by rank and then by bitmask.
    pub fn flats(&self) -> Result<FlatLattice, MatroidError> {
        let bottom = self.closure(0);
        let mut seen = BTreeSet::from([bottom]);
        let mut queue = VecDeque::from([bottom]);
        while let Some(f) = queue.pop_front() {
            for e in (0..self.len()).filter(|&e| f >> e & 1 == 0) {
                let g = self.closure(f | 1 << e);
                if seen.insert(g) {
                    queue.push_back(g);
                }
            }
        }
        let mut flats: Vec<(usize, u64)> = seen.into_iter().map(|f| (self.rank_of(f), f)).collect();
        flats.sort_unstable();
        FlatLattice::new(self.labels.clone(), 0, self.ground(), flats)
    }
}

/// A lattice of flats. `offset` is a flat of an ambient lattice that has been
/// removed from every member (for intervals `[F, G]`); variable labels use the
/// ambient sets so that intervals share labels with the lattice they came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    labels: Vec<String>,
    offset: u64,
    ground: u64,
    flats: Vec<u64>,
    rank: Vec<usize>,
    covers: Vec<Vec<usize>>,
}

impl FlatLattice {
    fn new(labels: Vec<String>, offset: u64, ground: u64, flats: Vec<(usize, u64)>) -> Result<FlatLattice, MatroidError> {
        let rank: Vec<usize> = flats.iter().map(|p| p.0).collect();
        let flats: Vec<u64> = flats.into_iter().map(|p| p.1).collect();
        let n = flats.len();
        let index: HashMap<u64, usize> = flats.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut covers = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                if rank[b] == rank[a] + 1 && flats[a] & !flats[b] == 0 {
                    covers[a].push(b);
                }
            }
        }
        let lat = FlatLattice { labels, offset, ground, flats, rank, covers };
        let name = |f: u64| format!("{:?}", lat.elements(f));
        for a in 0..n {
            for b in a + 1..n {
                if !index.contains_key(&(lat.flats[a] & lat.flats[b])) {
                    return Err(MatroidError::Axiom(format!("{} ∩ {} is not a flat", name(lat.flats[a]), name(lat.flats[b]))));
                }
            }
            // the covers of F partition E∖F
            let mut acc = 0u64;
            for &g in &lat.covers[a] {
                let part = lat.flats[g] & !lat.flats[a];
                if acc & part != 0 {
                    return Err(MatroidError::Axiom(format!("covers of {} overlap", name(lat.flats[a]))));
                }
                acc |= part;
            }
            if acc != ground & !lat.flats[a] {
                return Err(MatroidError::Axiom(format!("covers of {} miss elements", name(lat.flats[a]))));
            }
        }
        if n == 0 || lat.flats[n - 1] != ground || lat.flats.iter().any(|f| lat.flats[0] & !f != 0) {
            return Err(MatroidError::Axiom("no top element".into()));
        }
        Ok(lat)
    }

    fn elements(&self, f: u64) -> Vec<&str> {
        bits(f | self.offset).map(|i| self.labels[i].as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Flats as sorted lists of ground labels (including the offset).
    pub fn flat_sets(&self) -> Vec<Vec<String>> {
        self.flats.iter().map(|&f| self.elements(f).into_iter().map(String::from).collect()).collect()
    }

    pub fn flat_rank(&self, i: usize) -> usize {
        self.rank[i]
    }

    pub fn rank(&self) -> usize {
        *self.rank.last().unwrap() - self.rank[0]
    }

    /// Degree of pol_L, `r − 1`.
    pub fn degree(&self) -> usize {
        self.rank().saturating_sub(1)
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.flats[a] & !self.flats[b] == 0
    }

    pub fn covers(&self, a: usize) -> &[usize] {
        &self.covers[a]
    }

    /// `|F ∖ K|`
    fn size_over_bottom(&self, i: usize) -> u32 {
        (self.flats[i] & !self.flats[0]).count_ones()
    }

    /// Indices of the proper part `L ∖ {K, E}`.
    pub fn proper(&self) -> std::ops::Range<usize> {
        1..self.len().saturating_sub(1).max(1)
    }

    /// Variable label of flat `i`, e.g. `F_1_2`.
    pub fn flat_label(&self, i: usize) -> String {
        let names = self.elements(self.flats[i]);
        if names.iter().all(|s| s.chars().all(|c| c.is_ascii_alphanumeric())) {
            format!("F_{}", names.join("_"))
        } else {
            format!("F_{}", bits(self.flats[i] | self.offset).map(|i| (i + 1).to_string()).join("_"))
        }
    }

    /// One variable per flat of the proper part.
    pub fn vars(&self) -> VarSet {
        VarSet::new(self.proper().map(|i| self.flat_label(i))).expect("distinct flats")
    }

    /// The interval `[a, b]` as a lattice on `b ∖ a`.
    pub fn interval(&self, a: usize, b: usize) -> FlatLattice {
        assert!(self.leq(a, b));
        let fa = self.flats[a];
        let flats: Vec<(usize, u64)> =
            (0..self.len()).filter(|&h| self.leq(a, h) && self.leq(h, b)).map(|h| (self.rank[h] - self.rank[a], self.flats[h] & !fa)).collect();
        FlatLattice::new(self.labels.clone(), self.offset | fa, self.flats[b] & !fa, flats).expect("intervals of flat lattices are flat lattices")
    }

    /// `μ(a, b)` for all pairs, `None` when `a ≰ b`.
    pub fn mobius(&self) -> Vec<Vec<Option<i64>>> {
        let n = self.len();
        let mut mu = vec![vec![None; n]; n];
        for a in 0..n {
            mu[a][a] = Some(1);
            // flats are sorted by rank, so every c < b comes before b
            for b in a + 1..n {
                if self.leq(a, b) {
                    let s: i64 = (a..b).filter(|&c| self.leq(c, b)).filter_map(|c| mu[a][c]).sum();
                    mu[a][b] = Some(-s);
                }
            }
        }
        mu
    }

    /// `μ(K, F)` for every flat F.
    pub fn mobius_from_bottom(&self) -> Vec<i64> {
        let n = self.len();
        let mut mu = vec![0i64; n];
        mu[0] = 1;
        for b in 1..n {
            mu[b] = -(0..b).filter(|&c| self.leq(c, b)).map(|c| mu[c]).sum::<i64>();
        }
        mu
    }

    /// Δ(L): chains in the proper part, over [`FlatLattice::vars`].
    pub fn order_complex(&self) -> SimComplex {
        let vars = self.vars();
        let top = self.top();
        let mut facets = Vec::new();
        let mut stack: Vec<Vec<usize>> = self.covers[0].iter().filter(|&&c| c != top).map(|&c| vec![c]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            let ups: Vec<usize> = self.covers[last].iter().copied().filter(|&c| c != top).collect();
            if ups.is_empty() {
                facets.push(chain.iter().map(|&i| i - 1).collect());
            }
            for u in ups {
                let mut next = chain.clone();
                next.push(u);
                stack.push(next);
            }
        }
        if facets.is_empty() {
            facets.push(Vec::new());
        }
        SimComplex::new(vars, facets)
    }

    /// Modular vectors `y_F = Σ_{i∈F∖K} c_i` with `Σ c_i = 0`.
    pub fn modular_space(&self) -> LinSubspace {
        let free: Vec<usize> = bits(self.ground & !self.flats[0]).collect();
        let m = self.proper().len();
        let Some((&last, rest)) = free.split_last() else {
            return LinSubspace::zero(m);
        };
        let vectors: Vec<Vector> = rest
            .iter()
            .map(|&i| {
                self.proper()
                    .map(|f| {
                        let fl = self.flats[f];
                        Q::from_int((fl >> i & 1) as i64 - (fl >> last & 1) as i64)
                    })
                    .collect()
            })
            .collect();
        LinSubspace::span(m, &vectors)
    }

    /// Bergman rays `Σ_{i∈F∖K} e_i` in the coordinates `v_i − v_last` of
    /// `R^{E∖K} / R·1`, one per proper flat.
    pub fn bergman_rays(&self) -> Vec<Vector> {
        let free: Vec<usize> = bits(self.ground & !self.flats[0]).collect();
        let Some((&last, rest)) = free.split_last() else {
            return vec![Vec::new(); self.proper().len()];
        };
        self.proper()
            .map(|f| {
                let fl = self.flats[f];
                rest.iter().map(|&i| Q::from_int((fl >> i & 1) as i64 - (fl >> last & 1) as i64)).collect()
            })
            .collect()
    }

    /// pol_L: the hereditary polynomial on (Δ(L), L(L)) with every facet weight 1.
    pub fn pol(&self) -> Result<HereditaryPoly, MatroidError> {
        if self.rank() == 0 {
            return Err(MatroidError::RankZero);
        }
        let delta = self.order_complex();
        let weights: BTreeMap<Vec<usize>, Q> = delta.facets().iter().map(|f| (f.clone(), Q::one())).collect();
        Ok(from_weights(&delta, &self.modular_space(), &weights)?)
    }

    /// `α_F = |F∖K| / |E∖K|` and `β_F = |E∖F| / |E∖K|` over the proper part.
    pub fn alpha_beta(&self) -> (Vector, Vector) {
        let total = self.size_over_bottom(self.top()) as i64;
        let alpha = self.proper().map(|f| Q::new(self.size_over_bottom(f) as i64, total)).collect();
        let beta = self.proper().map(|f| Q::new(total - self.size_over_bottom(f) as i64, total)).collect();
        (alpha, beta)
    }

    /// The 0/1 vectors `α_{L,i}` (`i ∈ F`) and `β_{L,i}` (`i ∉ F`) for ground position `i`.
    pub fn alpha_beta_at(&self, i: usize) -> (Vector, Vector) {
        let a = self.proper().map(|f| Q::from_int((self.flats[f] >> i & 1) as i64)).collect();
        let b = self.proper().map(|f| Q::from_int(1 - (self.flats[f] >> i & 1) as i64)).collect();
        (a, b)
    }

    /// `(|F∖K| · |E∖F|)_F`, a strictly submodular vector with positive entries.
    pub fn submodular_witness(&self) -> Vector {
        let total = self.size_over_bottom(self.top()) as i64;
        self.proper().map(|f| {
            let k = self.size_over_bottom(f) as i64;
            Q::from_int(k * (total - k))
        }).collect()
    }

    /// Ground positions outside the loops.
    pub fn nonloops(&self) -> Vec<usize> {
        bits(self.ground & !self.flats[0]).collect()
    }

    /// `χ(t) = Σ_F μ(K,F) t^{r(E) − r(F)}`, coefficients by ascending power.
    pub fn char_poly_mobius(&self) -> Vec<Q> {
        let mu = self.mobius_from_bottom();
        let top = self.rank[self.top()];
        let mut c = vec![Q::zero(); self.rank() + 1];
        for (f, m) in mu.iter().enumerate() {
            c[top - self.rank[f]] += Q::from_int(*m);
        }
        c
    }

    /// `χ̄(t) = Σ_{F ∌ i} μ(K,F) t^{d([F,E])}` for a non-loop ground position `i`.
    pub fn reduced_char_poly_avoiding(&self, i: usize) -> Vec<Q> {
        let mu = self.mobius_from_bottom();
        let top = self.rank[self.top()];
        let mut c = vec![Q::zero(); self.rank()];
        for f in (0..self.len()).filter(|&f| self.flats[f] >> i & 1 == 0) {
            c[top - self.rank[f] - 1] += Q::from_int(mu[f]);
        }
        c
    }

    /// Right side of the α/β evaluation identity for ground position `i`, as
    /// a map from `(power of s, power of t)` to the coefficient.
    pub fn char_comp_rhs(&self, i: usize) -> BTreeMap<(u32, u32), Q> {
        let mu = self.mobius_from_bottom();
        let d = self.degree() as u32;
        let mut out = BTreeMap::new();
        for f in (0..self.top()).filter(|&f| self.flats[f] >> i & 1 == 0) {
            let rk = (self.rank[f] - self.rank[0]) as u32;
            let c = Q::binomial(d, rk) * Q::from_int(mu[f].abs());
            *out.entry((d - rk, rk)).or_insert_with(Q::zero) += c;
        }
        out
    }
}

/// `g(s, t) = f(sα + tβ)` over variables `s, t`.
pub fn pencil(f: &HomPoly, alpha: &[Q], beta: &[Q]) -> HomPoly {
    let vars = VarSet::new(["s", "t"]).unwrap();
    let forms: Vec<LinForm> = alpha
        .iter()
        .zip(beta)
        .map(|(a, b)| [(0, a.clone()), (1, b.clone())].into_iter().filter(|(_, c)| !c.is_zero()).collect())
        .collect();
    f.substitute_forms(&forms, &vars)
}

/// `(t − 1) · p`, coefficients by ascending power.
pub fn times_t_minus_one(p: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c;
    }
    out
}

/// `p / (t − 1)` when exact.
pub fn div_t_minus_one(p: &[Q]) -> Option<Vec<Q>> {
    let n = p.len();
    if n < 2 {
        return p.iter().all(Q::is_zero).then(Vec::new);
    }
    let mut q = vec![Q::zero(); n - 1];
    let mut carry = Q::zero();
    for k in (1..n).rev() {
        carry = &p[k] + &carry;
        q[k - 1] = carry.clone();
    }
    (&p[0] + &carry).is_zero().then_some(q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HrwReport {
    pub rank: usize,
    pub num_flats: usize,
    /// χ by Möbius sums, ascending powers.
    pub char_poly: Vec<Q>,
    /// χ̄ from `D_α^k D_β^{d−k} pol_L`, ascending powers.
    pub reduced_char_poly: Vec<Q>,
    /// Möbius χ equals `(t − 1)` times the derivative χ̄.
    pub routes_agree: bool,
    /// For every non-loop i, the Möbius sum over flats avoiding i gives χ̄.
    pub avoiding_sums_agree: bool,
    /// For every non-loop i, `d!·pol_L(sα + tβ)` expands as predicted.
    pub pencil_identity: bool,
    /// `|coefficients|` of χ̄, leading first, with the log-concavity checks.
    pub log_concavity: LogConcavity,
    pub eval_alpha: Q,
    pub eval_beta: Q,
    pub submodular_witness: Vector,
    pub witness_in_cone: bool,
}

impl HrwReport {
    pub fn passed(&self) -> bool {
        self.routes_agree && self.avoiding_sums_agree && self.pencil_identity && self.log_concavity.log_concave && self.witness_in_cone
    }
}

/// Runs the characteristic-polynomial comparison and the log-concavity check.
pub fn hrw_check(lat: &FlatLattice, pol: &HereditaryPoly) -> HrwReport {
    let d = lat.degree();
    let (alpha, beta) = lat.alpha_beta();
    let g = pencil(&pol.f, &alpha, &beta);
    // a_k = D_β^k D_α^{d−k} pol = |coefficient of t^{d−k}| in χ̄
    let log_concavity = log_concave_seq(&g, &[Q::zero(), Q::one()], &[Q::one(), Q::zero()]).expect("two variables");
    let mut reduced = vec![Q::zero(); d + 1];
    for (k, a) in log_concavity.sequence.iter().enumerate() {
        reduced[d - k] = if k % 2 == 0 { a.clone() } else { -a };
    }
    let char_poly = lat.char_poly_mobius();
    let routes_agree = times_t_minus_one(&reduced) == char_poly;
    let avoiding_sums_agree = lat.nonloops().into_iter().all(|i| lat.reduced_char_poly_avoiding(i) == reduced);
    let scaled = g.scale(&Q::factorial(d as u32));
    let lhs: BTreeMap<(u32, u32), Q> = scaled.terms().map(|(m, c)| ((m.exp(0), m.exp(1)), c.clone())).collect();
    let pencil_identity = lat.nonloops().into_iter().all(|i| lat.char_comp_rhs(i) == lhs);
    let v = lat.submodular_witness();
    HrwReport {
        rank: lat.rank(),
        num_flats: lat.len(),
        char_poly,
        reduced_char_poly: reduced,
        routes_agree,
        avoiding_sums_agree,
        pencil_identity,
        log_concavity,
        eval_alpha: pol.f.evaluate(&alpha).expect("dimension"),
        eval_beta: pol.f.evaluate(&beta).expect("dimension"),
        witness_in_cone: pol.f.degree() == 0 || pol.cone_member(&v).member,
        submodular_witness: v,
    }
}

/// Matroid input: exactly one of `bases` (with `ground`), `graph`, `uniform`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MatroidJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphJson>,
    /// `[r, n]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

fn value_label(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl MatroidJson {
    pub fn build(&self) -> Result<Matroid, MatroidError> {
        match (&self.bases, &self.graph, &self.uniform) {
            (Some(bases), None, None) => {
                let ground: Vec<String> = match &self.ground {
                    Some(g) => g.iter().map(value_label).collect(),
                    None => bases.iter().flatten().map(value_label).collect::<BTreeSet<_>>().into_iter().collect(),
                };
                let bases: Vec<Vec<String>> = bases.iter().map(|b| b.iter().map(value_label).collect()).collect();
                Matroid::from_bases(ground, &bases)
            }
            (None, Some(g), None) => Matroid::from_graph(g.vertices, &g.edges),
            (None, None, Some((r, n))) if r <= n && *n <= 64 => Ok(Matroid::uniform(*r, *n)),
            _ => Err(MatroidError::BadInput),
        }
    }
}

/// The catalog: every `U_{r,n}` with `1 ≤ r ≤ n ≤ 7`, the graphic matroid of
/// `K_4` and the Fano plane.
pub fn catalog() -> Vec<(String, Matroid)> {
    let mut out = Vec::new();
    for n in 1..=7 {
        for r in 1..=n {
            out.push((format!("U{},{}", r, n), Matroid::uniform(r, n)));
        }
    }
    let k4: Vec<(usize, usize)> = (0..4).tuple_combinations().collect();
    out.push(("K4".to_string(), Matroid::from_graph(4, &k4).unwrap()));
    out.push(("Fano".to_string(), Matroid::fano()));
    out
}

/// `2·pol_L` for rank 3 from the closed form
/// `(Σ_F t_F)² − Σ_G (t_G − Σ_{F<G} t_F)²`, F of rank one and G of rank two.
pub fn rank3_formula(lat: &FlatLattice) -> HomPoly {
    let vars = lat.vars();
    let var_of = |f: usize| HomPoly::var(vars.clone(), f - 1);
    let r0 = lat.flat_rank(0);
    let atoms: Vec<usize> = lat.proper().filter(|&f| lat.flat_rank(f) == r0 + 1).collect();
    let lines: Vec<usize> = lat.proper().filter(|&f| lat.flat_rank(f) == r0 + 2).collect();
    let mut sum = HomPoly::zero(vars.clone(), 1);
    for &a in &atoms {
        sum = sum.add(&var_of(a));
    }
    let mut out = sum.pow(2);
    for &g in &lines {
        let mut x = var_of(g);
        for &a in atoms.iter().filter(|&&a| lat.leq(a, g)) {
            x = x.sub(&var_of(a));
        }
        out = out.sub(&x.pow(2));
    }
    out
}
