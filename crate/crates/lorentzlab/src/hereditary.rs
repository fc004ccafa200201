//! Hereditary polynomials: the complex Δ_f, the lineality space L_f, face
//! restrictions f^S with their projections, the cone K_f, the
//! hereditary-Lorentzian decision procedure and reconstruction from facet weights.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cones::{in_orthant_plus_subspace, strict_feasible, Rel, StrictSystem};
use crate::inertia::{hessian_compact, inertia, Inertia};
use crate::linalg::{self, LinSubspace, Matrix, Vector};
use crate::par::par_map;
use crate::poly::{HomPoly, LinForm, Monomial, PolyError};
use crate::rational::Q;
use crate::simplicial::{ComplexError, ComplexJson, HConnectivity, SimComplex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HerError {
    #[error("not hereditary: coordinate projection of the lineality space is not onto at face {face:?}")]
    NotHereditary { face: Vec<String> },
    #[error("{0:?} is not a face")]
    NotAFace(Vec<String>),
    #[error("complex is not pure")]
    NotPure,
    #[error("balancing condition fails at {facet:?}")]
    Unbalanced { facet: Vec<String> },
    #[error("no weight given for facet {facet:?}")]
    MissingWeight { facet: Vec<String> },
    #[error("zero weight on facet {facet:?}")]
    ZeroWeight { facet: Vec<String> },
    #[error("weight given for {face:?}, which is not a facet")]
    ExtraWeight { face: Vec<String> },
    #[error("polynomial is not strongly hereditary")]
    NotStronglyHereditary,
    #[error("lineality space has ambient dimension {got}, expected {expected}")]
    LinealityDimension { expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// How `ℓ^{(i)}` is picked inside the projections π_S. Every choice gives the
/// same cone; `Shifted` exists to test exactly that.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EllChoice {
    /// Basic solution in the echelon basis of L_f.
    #[default]
    Basic,
    /// The basic solution plus the sum of a basis of `{ℓ ∈ L_f : ℓ_S = 0}`.
    Shifted,
}

/// A polynomial known to be hereditary, with Δ_f and L_f attached.
#[derive(Clone, Debug)]
pub struct HereditaryPoly {
    pub f: HomPoly,
    pub delta: SimComplex,
    pub lin: LinSubspace,
    pub strong: bool,
    links: OnceLock<BTreeMap<Vec<usize>, Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeMembership {
    pub member: bool,
    /// A face S whose condition fails.
    pub failing_face: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    /// K_f is empty, so the defining conditions hold vacuously.
    VacuousEmptyCone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QCheck {
    pub face: Vec<String>,
    pub inertia: Inertia,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HlReport {
    pub verdict: Verdict,
    pub degree: u32,
    pub positive: bool,
    pub cone_witness: Option<Vec<Q>>,
    /// `"delta"` when (C) was checked on Δ_f (positive f), `"tau_delta"` otherwise.
    pub connectivity_on: String,
    pub connectivity: HConnectivity,
    pub q_checks: Vec<QCheck>,
    pub q_failure: Option<QCheck>,
    pub notes: Vec<String>,
}

/// `Δ_f`: the downward closure of the monomial supports.
pub fn delta_of(f: &HomPoly) -> SimComplex {
    let supports: BTreeSet<Vec<usize>> = f.terms().map(|(m, _)| m.support().collect()).collect();
    SimComplex::new(f.vars().clone(), supports.into_iter().collect())
}

/// Maximal faces of `τΔ` for a complex whose facets may have any size up to `d`.
fn tau_facets(delta: &SimComplex, d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for f in delta.facets() {
        if f.len() < d {
            out.insert(f.clone());
        } else {
            for c in f.iter().copied().combinations(d - 1) {
                out.insert(c);
            }
        }
    }
    out.into_iter().collect()
}

fn onto(lin: &LinSubspace, t: &[usize]) -> bool {
    lin.projection_rank(t) == t.len()
}

/// Shrinks a face where the projection fails to a minimal such face.
fn minimal_failing(lin: &LinSubspace, t: &[usize]) -> Vec<usize> {
    let mut t = t.to_vec();
    'outer: loop {
        for k in 0..t.len() {
            let mut s = t.clone();
            s.remove(k);
            if !onto(lin, &s) {
                t = s;
                continue 'outer;
            }
        }
        return t;
    }
}

fn first_non_onto(lin: &LinSubspace, faces: &[Vec<usize>]) -> Option<Vec<usize>> {
    faces.iter().find(|t| !onto(lin, t)).map(|t| minimal_failing(lin, t))
}

/// `∂^S f |_{t_S = 0}` kept over the full variable set (variables of S do not occur).
fn face_restriction_full(f: &HomPoly, s: &[usize]) -> HomPoly {
    let d = f.degree().saturating_sub(s.len() as u32);
    let terms = f.terms().filter(|(m, _)| s.iter().all(|&i| m.exp(i) == 1)).map(|(m, c)| {
        let mut r = m.clone();
        for &i in s {
            r = r.div_var(i, 1).unwrap();
        }
        (r, c.clone())
    });
    HomPoly::from_terms(f.vars().clone(), d, terms).unwrap()
}

/// `f^S = ∂^S f |_{t_S = 0}` over `V ∖ S`, for any polynomial and any set S.
pub fn face_restriction(f: &HomPoly, s: &[usize]) -> HomPoly {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    let rest: Vec<usize> = (0..f.nvars()).filter(|i| !s.contains(i)).collect();
    face_restriction_full(f, &s).restrict_vars(&rest).unwrap()
}

fn square_free(s: &[usize]) -> Monomial {
    Monomial::from_pairs(s.iter().map(|&i| (i, 1)).collect())
}

/// Decides heredity of `f` and returns the attached structure.
pub fn check_hereditary(f: &HomPoly) -> Result<HereditaryPoly, HerError> {
    let d = f.degree() as usize;
    let delta = delta_of(f);
    let lin = f.lineality_space();
    if let Some(t) = first_non_onto(&lin, &tau_facets(&delta, d)) {
        return Err(HerError::NotHereditary { face: delta.labels_of(&t) });
    }
    if !f.is_zero() && !delta.is_pure(d) {
        return Err(HerError::NotPure);
    }
    let strong = first_non_onto(&lin, delta.facets()).is_none();
    Ok(HereditaryPoly { f: f.clone(), delta, lin, strong, links: OnceLock::new() })
}

impl HereditaryPoly {
    pub fn degree(&self) -> usize {
        self.f.degree() as usize
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    fn labels(&self, s: &[usize]) -> Vec<String> {
        self.delta.labels_of(s)
    }

    /// Faces of τΔ_f mapped to their link vertices.
    fn links(&self) -> &BTreeMap<Vec<usize>, Vec<usize>> {
        self.links.get_or_init(|| {
            let d = self.degree();
            let mut acc: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
            if d == 0 {
                return BTreeMap::new();
            }
            for facet in self.delta.facets() {
                for k in 0..facet.len().min(d) {
                    for s in facet.iter().copied().combinations(k) {
                        let e = acc.entry(s.clone()).or_default();
                        e.extend(facet.iter().copied().filter(|v| !s.contains(v)));
                    }
                }
            }
            acc.into_iter().map(|(s, l)| (s, l.into_iter().collect())).collect()
        })
    }

    fn check_face(&self, s: &[usize]) -> Result<Vec<usize>, HerError> {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.iter().any(|&i| i >= self.nvars()) {
            return Err(HerError::NotAFace(s.iter().map(|i| format!("#{}", i)).collect()));
        }
        if !self.delta.is_face(&s) || self.f.is_zero() {
            return Err(HerError::NotAFace(self.labels(&s)));
        }
        Ok(s)
    }

    /// Faces on which π_S is defined: τΔ_f, plus the facets when f is strongly hereditary.
    fn check_proj_face(&self, s: &[usize]) -> Result<Vec<usize>, HerError> {
        let s = self.check_face(s)?;
        if s.len() >= self.degree() && !self.strong {
            return Err(HerError::NotAFace(self.labels(&s)));
        }
        Ok(s)
    }

    /// `ℓ^{(i)} ∈ L_f` with `ℓ_i = 1` and `ℓ_j = 0` for `j ∈ S∖{i}`.
    pub fn ell(&self, s: &[usize], i: usize, choice: EllChoice) -> Vector {
        let values: Vec<Q> = s.iter().map(|&j| if j == i { Q::one() } else { Q::zero() }).collect();
        let mut l = self.lin.element_with(s, &values).expect("face of a hereditary pair");
        if choice == EllChoice::Shifted {
            for b in self.lin.with_zero_coords(s).basis() {
                linalg::add_scaled(&mut l, &Q::one(), b);
            }
        }
        l
    }

    /// π_S(x) as a full-length vector; coordinates in S are zero.
    fn project_full(&self, s: &[usize], x: &[Q], choice: EllChoice) -> Vector {
        let mut y = x.to_vec();
        for &i in s {
            if !x[i].is_zero() {
                let l = self.ell(s, i, choice);
                linalg::add_scaled(&mut y, &-&x[i], &l);
            }
        }
        y
    }

    /// `V_S = V ∖ S` in increasing order.
    pub fn complement(&self, s: &[usize]) -> Vec<usize> {
        (0..self.nvars()).filter(|i| !s.contains(i)).collect()
    }

    /// π_S(x), indexed by `V_S`.
    pub fn project(&self, s: &[usize], x: &[Q]) -> Result<Vector, HerError> {
        let s = self.check_proj_face(s)?;
        if x.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: x.len() }.into());
        }
        let y = self.project_full(&s, x, EllChoice::Basic);
        Ok(self.complement(&s).into_iter().map(|j| y[j].clone()).collect())
    }

    /// The matrix of π_S: rows indexed by `V_S`, columns by `V`.
    pub fn projection_matrix(&self, s: &[usize]) -> Result<Matrix, HerError> {
        let s = self.check_proj_face(s)?;
        let n = self.nvars();
        let cols: Vec<Vector> = (0..n).map(|k| self.project_full(&s, &linalg::unit(n, k), EllChoice::Basic)).collect();
        Ok(self.complement(&s).into_iter().map(|j| cols.iter().map(|c| c[j].clone()).collect()).collect())
    }

    fn fs_full(&self, s: &[usize]) -> HomPoly {
        face_restriction_full(&self.f, s)
    }

    /// `f^S = ∂^S f |_{t_S = 0}` as a polynomial over `V_S`.
    pub fn restrict_fs(&self, s: &[usize]) -> Result<HomPoly, HerError> {
        let s = self.check_face(s)?;
        Ok(self.fs_full(&s).restrict_vars(&self.complement(&s))?)
    }

    /// f^S for every face of size `k`, over the full variable set, in one pass over the terms.
    pub fn fs_level(&self, k: usize) -> BTreeMap<Vec<usize>, HomPoly> {
        let d = self.f.degree();
        let mut buckets: HashMap<Vec<usize>, Vec<(Monomial, Q)>> = HashMap::new();
        if k as u32 > d {
            return BTreeMap::new();
        }
        for (m, c) in self.f.terms() {
            let ones: Vec<usize> = m.pairs().filter(|&(_, e)| e == 1).map(|(i, _)| i).collect();
            for s in ones.into_iter().combinations(k) {
                let mut r = m.clone();
                for &i in &s {
                    r = r.div_var(i, 1).unwrap();
                }
                buckets.entry(s).or_default().push((r, c.clone()));
            }
        }
        buckets
            .into_iter()
            .map(|(s, terms)| (s, HomPoly::from_terms(self.f.vars().clone(), d - k as u32, terms).unwrap()))
            .filter(|(_, g)| !g.is_zero())
            .collect()
    }

    /// The facet weights `w(F) = ∂^F f`.
    pub fn facet_weights(&self) -> BTreeMap<Vec<usize>, Q> {
        self.delta.facets().iter().map(|f| (f.clone(), self.f.coeff(&square_free(f)))).collect()
    }

    /// `f^F > 0` for every facet F; vacuously true for the zero polynomial.
    pub fn is_positive(&self) -> bool {
        self.facet_weights().values().all(Q::is_positive)
    }

    fn face_condition(&self, s: &[usize], link: &[usize], v: &[Q], choice: EllChoice) -> bool {
        let d = self.degree();
        let y = self.project_full(s, v, choice);
        if s.len() + 1 == d {
            let val: Q = link
                .iter()
                .map(|&j| {
                    let mut f = s.to_vec();
                    f.push(j);
                    f.sort_unstable();
                    self.f.coeff(&square_free(&f)) * &y[j]
                })
                .sum();
            return val.is_positive();
        }
        let yl: Vector = link.iter().map(|&j| y[j].clone()).collect();
        if yl.iter().all(Q::is_positive) {
            return true;
        }
        // L_S ⊆ L_{f^S}, and usually already enough
        if in_orthant_plus_subspace(&yl, &self.lin.with_zero_coords(s).restrict(link)).is_some() {
            return true;
        }
        in_orthant_plus_subspace(&yl, &self.fs_full(s).lineality_space().restrict(link)).is_some()
    }

    /// Decides `v ∈ K_f`. The conditions at different faces involve disjoint
    /// auxiliary variables, so each face is checked on its own.
    pub fn cone_member(&self, v: &[Q]) -> ConeMembership {
        self.cone_member_with(v, EllChoice::Basic)
    }

    pub fn cone_member_with(&self, v: &[Q], choice: EllChoice) -> ConeMembership {
        assert_eq!(v.len(), self.nvars(), "direction has wrong length");
        if self.f.is_zero() && self.degree() == 1 {
            return ConeMembership { member: false, failing_face: Some(Vec::new()) };
        }
        for (s, link) in self.links() {
            if !self.face_condition(s, link, v, choice) {
                return ConeMembership { member: false, failing_face: Some(self.labels(s)) };
            }
        }
        ConeMembership { member: true, failing_face: None }
    }

    /// A point of K_f, if there is one. The all-ones vector and `hints` are tried
    /// first; otherwise one strict system in `v` and per-face auxiliaries is solved.
    pub fn cone_nonempty(&self, hints: &[Vector]) -> Option<Vector> {
        let n = self.nvars();
        if self.f.is_zero() && self.degree() == 1 {
            return None;
        }
        let ones = vec![Q::one(); n];
        for h in std::iter::once(&ones).chain(hints) {
            if h.len() == n && self.cone_member(h).member {
                return Some(h.clone());
            }
        }
        let sys = self.cone_system();
        let x = strict_feasible(&sys)?;
        let v: Vector = x[..n].to_vec();
        debug_assert!(self.cone_member(&v).member);
        Some(v)
    }

    /// Joint system in `v` and per-face auxiliaries whose solutions project onto K_f.
    pub fn cone_system(&self) -> StrictSystem {
        let n = self.nvars();
        let d = self.degree();
        // per-face subspaces L_{f^S} restricted to the link, with offsets of their coefficients
        let mut blocks = Vec::new();
        let mut naux = 0;
        for (s, link) in self.links() {
            if s.len() + 1 < d {
                let l = self.fs_full(s).lineality_space().restrict(link);
                blocks.push((s.clone(), link.clone(), Some((naux, l.clone()))));
                naux += l.dim();
            } else {
                blocks.push((s.clone(), link.clone(), None));
            }
        }
        let mut sys = StrictSystem::new(n, naux);
        for (s, link, aux) in &blocks {
            // column k of π_S, as full-length vectors
            let ells: Vec<(usize, Vector)> = s.iter().map(|&i| (i, self.ell(s, i, EllChoice::Basic))).collect();
            let pi_row = |j: usize| -> Vector {
                let mut row = vec![Q::zero(); n + naux];
                row[j] = Q::one();
                for (i, l) in &ells {
                    row[*i] -= &l[j];
                }
                row
            };
            match aux {
                Some((off, l)) => {
                    for (pos, &j) in link.iter().enumerate() {
                        let mut row = pi_row(j);
                        for (k, b) in l.basis().iter().enumerate() {
                            row[n + off + k] = b[pos].clone();
                        }
                        sys.push(row, Q::zero(), Rel::Pos);
                    }
                }
                None => {
                    let mut row = vec![Q::zero(); n + naux];
                    for &j in link {
                        let mut f = s.clone();
                        f.push(j);
                        f.sort_unstable();
                        let c = self.f.coeff(&square_free(&f));
                        linalg::add_scaled(&mut row, &c, &pi_row(j));
                    }
                    sys.push(row, Q::zero(), Rel::Pos);
                }
            }
        }
        sys
    }

    /// Decides whether f is hereditary Lorentzian via connectivity (C) and the
    /// codimension-two Hessian signatures (Q). `workers` threads run the (Q) loop.
    pub fn is_hereditary_lorentzian(&self, hints: &[Vector], workers: usize) -> HlReport {
        let d = self.f.degree();
        let positive = self.is_positive();
        let mut notes = Vec::new();
        if self.f.is_zero() {
            notes.push("zero polynomial: conditions hold vacuously".to_string());
        }
        let mut report = HlReport {
            verdict: Verdict::Yes,
            degree: d,
            positive,
            cone_witness: None,
            connectivity_on: String::new(),
            connectivity: HConnectivity { h_connected: true, witness: None },
            q_checks: Vec::new(),
            q_failure: None,
            notes,
        };
        if d == 0 {
            if self.f.constant_value().is_negative() {
                report.verdict = Verdict::No;
            }
            return report;
        }
        report.cone_witness = self.cone_nonempty(hints);
        if report.cone_witness.is_none() {
            report.verdict = Verdict::VacuousEmptyCone;
            return report;
        }
        if d == 1 {
            return report;
        }
        let (name, cx) = if positive { ("delta", self.delta.clone()) } else { ("tau_delta", self.delta.skeleton()) };
        report.connectivity_on = name.to_string();
        report.connectivity = cx.h_connectivity().expect("Δ_f is pure");
        let level: Vec<(Vec<usize>, HomPoly)> = self.fs_level(d as usize - 2).into_iter().collect();
        report.q_checks = par_map(&level, workers, |(s, g)| {
            let (_, h) = hessian_compact(g).expect("quadratic");
            QCheck { face: self.labels(s), inertia: inertia(&h) }
        });
        report.q_failure = report.q_checks.iter().find(|c| c.inertia.pos > 1).cloned();
        if !report.connectivity.h_connected || report.q_failure.is_some() {
            report.verdict = Verdict::No;
        }
        report
    }

    /// The product of two strongly hereditary polynomials on disjoint variables.
    pub fn product(&self, other: &HereditaryPoly) -> Result<HereditaryPoly, HerError> {
        if !self.strong || !other.strong {
            return Err(HerError::NotStronglyHereditary);
        }
        let delta = self.delta.join(&other.delta)?;
        let vars = delta.vertices().clone();
        let f = self.f.embed(&vars)?.mul(&other.f.embed(&vars)?);
        let lin = self.lin.direct_sum(&other.lin);
        Ok(HereditaryPoly { f, delta, lin, strong: true, links: OnceLock::new() })
    }
}

/// Builds the unique hereditary polynomial with `∂^F f = w(F)` on the facets of
/// `delta` and `lin ⊆ L_f`, by the Euler recursion from the facets down to ∅.
pub fn from_weights(delta: &SimComplex, lin: &LinSubspace, weights: &BTreeMap<Vec<usize>, Q>) -> Result<HereditaryPoly, HerError> {
    let vars = delta.vertices().clone();
    let n = vars.len();
    if lin.ambient() != n {
        return Err(HerError::LinealityDimension { expected: n, got: lin.ambient() });
    }
    let Some(d) = delta.facets().first().map(Vec::len) else {
        return Err(HerError::NotPure);
    };
    if !delta.is_pure(d) {
        return Err(HerError::NotPure);
    }
    let facets: BTreeSet<Vec<usize>> = delta.facets().iter().cloned().collect();
    for (s, w) in weights {
        if !facets.contains(s) {
            return Err(HerError::ExtraWeight { face: delta.labels_of(s) });
        }
        if w.is_zero() {
            return Err(HerError::ZeroWeight { facet: delta.labels_of(s) });
        }
    }
    if let Some(f) = facets.iter().find(|f| !weights.contains_key(*f)) {
        return Err(HerError::MissingWeight { facet: delta.labels_of(f) });
    }
    let ridges = tau_facets(delta, d);
    if let Some(t) = first_non_onto(lin, &ridges) {
        return Err(HerError::NotHereditary { face: delta.labels_of(&t) });
    }
    // balancing: Σ_{i∉F} w(F∪i) t_i vanishes on L_F for every ridge F
    for r in &ridges {
        let w_of = |i: usize| {
            let mut f = r.clone();
            f.push(i);
            f.sort_unstable();
            weights.get(&f).cloned().unwrap_or_else(Q::zero)
        };
        let lf = lin.with_zero_coords(r);
        for b in lf.basis() {
            let s: Q = (0..n).filter(|i| !r.contains(i) && !b[*i].is_zero()).map(|i| w_of(i) * &b[i]).sum();
            if !s.is_zero() {
                return Err(HerError::Unbalanced { facet: delta.labels_of(r) });
            }
        }
    }

    let mut forms: Vec<LinForm> = (0..n).map(|j| vec![(j, Q::one())]).collect();
    let mut upper: HashMap<Vec<usize>, HomPoly> = weights.iter().map(|(s, w)| (s.clone(), HomPoly::constant(vars.clone(), w.clone()))).collect();
    for k in (0..d).rev() {
        let mut level = HashMap::new();
        for s in delta.faces_of_size(k) {
            let mut terms: Vec<(Monomial, Q)> = Vec::new();
            for i in (0..n).filter(|i| !s.contains(i)) {
                let mut si = s.clone();
                si.push(i);
                si.sort_unstable();
                let Some(g) = upper.get(&si) else { continue };
                if k + 1 == d {
                    terms.extend(g.terms().map(|(m, c)| (m.mul_var(i, 1), c.clone())));
                    continue;
                }
                let values: Vec<Q> = si.iter().map(|&j| if j == i { Q::one() } else { Q::zero() }).collect();
                let l = lin.element_with(&si, &values).expect("hereditary ridge");
                let moved: Vec<usize> = (0..n).filter(|&j| j != i && !l[j].is_zero()).collect();
                for &j in &moved {
                    forms[j].push((i, -&l[j]));
                }
                let h = g.substitute_forms(&forms, &vars);
                for &j in &moved {
                    forms[j].truncate(1);
                }
                terms.extend(h.terms().map(|(m, c)| (m.mul_var(i, 1), c.clone())));
            }
            let g = HomPoly::from_terms(vars.clone(), (d - k) as u32, terms)?.scale(&Q::new(1, (d - k) as i64));
            level.insert(s, g);
        }
        upper = level;
    }
    let f = upper.remove(&Vec::new()).expect("empty face");
    for (s, w) in weights {
        assert_eq!(&f.coeff(&square_free(s)), w, "reconstructed weight differs");
    }
    let h = check_hereditary(&f)?;
    assert_eq!(h.delta, *delta, "reconstructed complex differs");
    debug_assert!(h.lin.contains_subspace(lin));
    let strong = first_non_onto(lin, delta.facets()).is_none() || h.strong;
    Ok(HereditaryPoly { strong, ..h })
}

/// Dimension of the space of degree-`k` polynomials supported on faces of
/// `delta` and invariant under translation by `lin`.
pub fn space_dimension(delta: &SimComplex, lin: &LinSubspace, k: usize) -> usize {
    let mut monos: Vec<Monomial> = Vec::new();
    for face in delta.faces_up_to(k) {
        if face.is_empty() {
            if k == 0 {
                monos.push(Monomial::one());
            }
            continue;
        }
        if face.len() > k {
            continue;
        }
        // exponent vectors of total degree k with support exactly `face`
        for c in face.iter().copied().combinations_with_replacement(k - face.len()) {
            let mut pairs: Vec<(usize, u32)> = face.iter().map(|&i| (i, 1)).collect();
            for i in c {
                pairs.push((i, 1));
            }
            monos.push(Monomial::from_pairs(pairs));
        }
    }
    if monos.is_empty() {
        return 0;
    }
    // one equation per (basis vector, monomial of degree k-1)
    let mut rows: HashMap<(usize, Monomial), Vector> = HashMap::new();
    for (b_idx, b) in lin.basis().iter().enumerate() {
        for (col, m) in monos.iter().enumerate() {
            for (i, e) in m.pairs() {
                if b[i].is_zero() {
                    continue;
                }
                let r = m.div_var(i, 1).unwrap();
                let row = rows.entry((b_idx, r)).or_insert_with(|| vec![Q::zero(); monos.len()]);
                row[col] += &b[i] * &Q::from(e);
            }
        }
    }
    let m: Matrix = rows.into_values().collect();
    monos.len() - linalg::rank(&m, monos.len())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightJson {
    pub facet: Vec<String>,
    pub w: Q,
}

/// `{complex, lineality, weights}` input for [`from_weights`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightsJson {
    pub complex: ComplexJson,
    pub lineality: Vec<Vec<Q>>,
    pub weights: Vec<WeightJson>,
}

impl WeightsJson {
    pub fn parse(&self) -> Result<(SimComplex, LinSubspace, BTreeMap<Vec<usize>, Q>), String> {
        let delta = SimComplex::from_json(&self.complex).map_err(|e| format!("complex: {}", e))?;
        let n = delta.vertices().len();
        if let Some((k, v)) = self.lineality.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(format!("lineality[{}]: expected {} entries, got {}", k, n, v.len()));
        }
        let lin = LinSubspace::span(n, &self.lineality);
        let mut weights = BTreeMap::new();
        for (k, w) in self.weights.iter().enumerate() {
            let mut idx = Vec::new();
            for l in &w.facet {
                idx.push(delta.vertices().index_of(l).ok_or_else(|| format!("weights[{}].facet: unknown vertex `{}`", k, l))?);
            }
            idx.sort_unstable();
            weights.insert(idx, w.w.clone());
        }
        Ok((delta, lin, weights))
    }

    pub fn from_parts(delta: &SimComplex, lin: &LinSubspace, weights: &BTreeMap<Vec<usize>, Q>) -> WeightsJson {
        WeightsJson {
            complex: delta.to_json(),
            lineality: lin.basis().to_vec(),
            weights: weights.iter().map(|(f, w)| WeightJson { facet: delta.labels_of(f), w: w.clone() }).collect(),
        }
    }
}

/// Re-derives the failure recorded in a `no` report from `h` alone: the
/// Hessian signature of the failing `f^S`, or the disconnected link.
pub fn verify_hl_witness(h: &HereditaryPoly, report: &HlReport) -> bool {
    let vars = h.delta.vertices();
    let index = |labels: &[String]| -> Option<Vec<usize>> {
        let mut s = labels.iter().map(|l| vars.index_of(l)).collect::<Option<Vec<usize>>>()?;
        s.sort_unstable();
        Some(s)
    };
    let d = h.degree();
    if d == 0 {
        return h.f.constant_value().is_negative();
    }
    if let Some(q) = &report.q_failure {
        let Some(s) = index(&q.face) else { return false };
        if s.len() + 2 != d {
            return false;
        }
        return match h.restrict_fs(&s).map(|g| hessian_compact(&g)) {
            Ok(Ok((_, m))) => inertia(&m).pos > 1,
            _ => false,
        };
    }
    if let Some((face, _)) = &report.connectivity.witness {
        let Some(s) = index(face) else { return false };
        let cx = if report.connectivity_on == "delta" { h.delta.clone() } else { h.delta.skeleton() };
        return s.len() + 2 <= d && cx.link(&s).map_or(false, |l| l.components().len() > 1);
    }
    false
}
