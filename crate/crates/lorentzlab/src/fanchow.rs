//! Simplicial fans, degree functionals on their Chow rings (as hereditary
//! polynomials), ample cones, and transport along stellar subdivisions.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cones::{in_orthant_plus_subspace, solve_in_span, strict_feasible, Rel, StrictSystem};
use crate::hereditary::{check_hereditary, from_weights, HerError, HereditaryPoly, HlReport, Verdict, WeightJson};
use crate::linalg::{self, LinSubspace, Matrix, Vector};
use crate::matroid::FlatLattice;
use crate::poly::{HomPoly, PolyError, VarSet};
use crate::polytope::SimplePolytope;
use crate::rational::Q;
use crate::simplicial::{ComplexError, SimComplex};
use crate::subdivision::{self, lineality_extend, StepKind, SubdivError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FanError {
    #[error("ray {index} has length {got}, expected {expected}")]
    Dimension { index: usize, expected: usize, got: usize },
    #[error("ray {0} is zero")]
    ZeroRay(String),
    #[error("cone {0:?} references an unknown ray")]
    UnknownRay(Vec<String>),
    #[error("rays of cone {0:?} are linearly dependent")]
    DependentCone(Vec<String>),
    #[error("cones {0:?} and {1:?} meet outside a common face")]
    NotAFan(Vec<String>, Vec<String>),
    #[error("vector is not in the relative interior of any cone")]
    NotInterior,
    #[error("(Δ, L) is not hereditary at {0:?}")]
    NotHereditary(Vec<String>),
    #[error("the balanced weights form a space of dimension {0}, not 1")]
    NotOneDimensional(usize),
    #[error("functional does not belong to the fan: {0}")]
    Mismatch(String),
    #[error("the cone of the functional is empty")]
    EmptyCone,
    #[error("no pair of maximal cones with overlapping interiors")]
    NoOverlap,
    #[error("step {step}: {reason}")]
    BadStep { step: usize, reason: String },
    #[error(transparent)]
    Hereditary(#[from] HerError),
    #[error(transparent)]
    Subdivision(#[from] SubdivError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A simplicial fan given by ray vectors and the complex of cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vector>,
    complex: SimComplex,
}

impl Fan {
    /// Checks ray shapes and independence within each cone; with `check_axioms`,
    /// also that maximal cones meet in common faces.
    pub fn new(dim: usize, rays: Vec<Vector>, complex: SimComplex, check_axioms: bool) -> Result<Fan, FanError> {
        let vars = complex.vertices().clone();
        assert_eq!(vars.len(), rays.len(), "one label per ray");
        for (index, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(FanError::Dimension { index, expected: dim, got: r.len() });
            }
            if r.iter().all(Q::is_zero) {
                return Err(FanError::ZeroRay(vars.label(index).to_string()));
            }
        }
        let fan = Fan { dim, rays, complex };
        for f in fan.complex.facets() {
            if linalg::rank(&fan.cone_rays(f), dim) < f.len() {
                return Err(FanError::DependentCone(fan.complex.labels_of(f)));
            }
        }
        if check_axioms {
            fan.check_axioms()?;
        }
        Ok(fan)
    }

    /// Rays labelled `t1, t2, …` and cones as lists of ray indices.
    pub fn build(rays: Vec<Vector>, cones: &[Vec<usize>], check_axioms: bool) -> Result<Fan, FanError> {
        let dim = rays.first().map_or(0, Vec::len);
        let vars = VarSet::numbered(rays.len());
        for c in cones {
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(FanError::UnknownRay(c.iter().map(|i| i.to_string()).collect()));
            }
            if c.iter().duplicates().next().is_some() {
                return Err(FanError::DependentCone(vars.sub(c).labels().to_vec()));
            }
        }
        Fan::new(dim, rays, SimComplex::new(vars, cones.to_vec()), check_axioms)
    }

    /// The normal fan of a simple polytope; ray `t_i` is the normal of facet `i`.
    pub fn normal_fan(p: &SimplePolytope) -> Fan {
        Fan::new(p.dim(), p.normals().to_vec(), p.complex().clone(), false).expect("normal fans are simplicial")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn vars(&self) -> &VarSet {
        self.complex.vertices()
    }

    pub fn complex(&self) -> &SimComplex {
        &self.complex
    }

    fn cone_rays(&self, s: &[usize]) -> Vec<Vector> {
        s.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// `L(Σ) = {(λ(ρ_i))_i : λ ∈ V*}`
    pub fn lineality(&self) -> LinSubspace {
        let cols: Vec<Vector> = (0..self.dim).map(|k| self.rays.iter().map(|r| r[k].clone()).collect()).collect();
        LinSubspace::span(self.rays.len(), &cols)
    }

    /// Pairwise intersections of maximal cones are common faces. For σ, τ and
    /// i ∈ σ∖τ, no point of σ ∩ τ may have a positive ρ_i-coordinate in σ.
    pub fn check_axioms(&self) -> Result<(), FanError> {
        let facets = self.complex.facets();
        for (a, b) in facets.iter().tuple_combinations().flat_map(|(a, b)| [(a, b), (b, a)]) {
            let (ra, rb) = (self.cone_rays(a), self.cone_rays(b));
            for (pos, i) in a.iter().enumerate() {
                if b.contains(i) {
                    continue;
                }
                let n = a.len() + b.len();
                let mut sys = StrictSystem::new(n, 0);
                for k in 0..n {
                    sys.push(linalg::unit(n, k), Q::zero(), if k == pos { Rel::Pos } else { Rel::NonNeg });
                }
                for c in 0..self.dim {
                    let row: Vector = ra.iter().map(|r| r[c].clone()).chain(rb.iter().map(|r| -&r[c])).collect();
                    sys.push(row, Q::zero(), Rel::Zero);
                }
                if strict_feasible(&sys).is_some() {
                    return Err(FanError::NotAFan(self.complex.labels_of(a), self.complex.labels_of(b)));
                }
            }
        }
        Ok(())
    }

    /// Top cone size.
    pub fn cone_dim(&self) -> usize {
        self.complex.facets().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Membership in the ample cone K(Δ(Σ), L(Σ)): for every face S with
    /// |S| < d, `π_S(v) ∈ R_{>0}^{V∖S} + L_S`. Returns the first failing face.
    pub fn ample_cone_member(&self, v: &[Q]) -> Result<Option<Vec<String>>, FanError> {
        assert_eq!(v.len(), self.rays.len(), "direction has wrong length");
        let d = self.cone_dim();
        let lin = self.lineality();
        let n = self.rays.len();
        for s in self.complex.faces_up_to(d.saturating_sub(1)) {
            if lin.projection_rank(&s) < s.len() {
                return Err(FanError::NotHereditary(self.complex.labels_of(&s)));
            }
            let mut y = v.to_vec();
            for &i in &s {
                let values: Vec<Q> = s.iter().map(|&j| if j == i { Q::one() } else { Q::zero() }).collect();
                let l = lin.element_with(&s, &values).expect("surjective projection");
                linalg::add_scaled(&mut y, &-&v[i], &l);
            }
            let rest: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
            let yr: Vector = rest.iter().map(|&j| y[j].clone()).collect();
            if in_orthant_plus_subspace(&yr, &lin.with_zero_coords(&s).restrict(&rest)).is_none() {
                return Ok(Some(self.complex.labels_of(&s)));
            }
        }
        Ok(None)
    }

    /// Basis of the facet weights satisfying the balancing condition, i.e. of
    /// `A^d(Σ)*` for a pure fan with `(τΔ, L)` hereditary.
    pub fn balanced_weights(&self) -> Vec<BTreeMap<Vec<usize>, Q>> {
        let facets = self.complex.facets().to_vec();
        let d = self.cone_dim();
        let index: BTreeMap<&Vec<usize>, usize> = facets.iter().enumerate().map(|(k, f)| (f, k)).collect();
        let lin = self.lineality();
        let mut rows: Matrix = Vec::new();
        for r in self.complex.faces_of_size(d.saturating_sub(1)) {
            for b in lin.with_zero_coords(&r).basis() {
                let mut row = vec![Q::zero(); facets.len()];
                for i in (0..self.rays.len()).filter(|i| !r.contains(i)) {
                    let mut f = r.clone();
                    f.push(i);
                    f.sort_unstable();
                    if let Some(&k) = index.get(&f) {
                        row[k] += &b[i];
                    }
                }
                rows.push(row);
            }
        }
        linalg::nullspace(&rows, facets.len())
            .into_iter()
            .map(|v| facets.iter().cloned().zip(v).collect())
            .collect()
    }

    /// `vol_Σ` when `A^d(Σ)` is one-dimensional, normalized so that the first
    /// facet with nonzero weight has weight 1.
    pub fn volume_functional(&self) -> Result<DegreeFunctional, FanError> {
        let basis = self.balanced_weights();
        if basis.len() != 1 {
            return Err(FanError::NotOneDimensional(basis.len()));
        }
        let w = &basis[0];
        let first = w.values().find(|x| !x.is_zero()).expect("nonzero basis vector").clone();
        let w = w.iter().filter(|(_, x)| !x.is_zero()).map(|(f, x)| (f.clone(), x / &first)).collect();
        functional_from_weights(self, &w)
    }

    /// The unique maximal face S with `rho` in the relative interior of cone(S),
    /// and the coefficients `rho = Σ c_i ρ_i`.
    pub fn locate(&self, rho: &[Q]) -> Result<(Vec<usize>, Vec<Q>), FanError> {
        if rho.len() != self.dim || rho.iter().all(Q::is_zero) {
            return Err(FanError::NotInterior);
        }
        for s in self.complex.faces_up_to(self.cone_dim()) {
            if s.is_empty() {
                continue;
            }
            if let Ok(c) = solve_in_span(rho, &self.cone_rays(&s)) {
                return Ok((s, c));
            }
        }
        Err(FanError::NotInterior)
    }

    /// Stellar subdivision at `rho`; the new ray gets label `label` and is appended.
    pub fn subdivide(&self, rho: &[Q], label: &str) -> Result<(Fan, Vec<usize>, Vec<Q>), FanError> {
        let (s, c) = self.locate(rho)?;
        let complex = self.complex.stellar_subdivide(&s, label)?;
        let mut rays = self.rays.clone();
        rays.push(rho.to_vec());
        let fan = Fan { dim: self.dim, rays, complex };
        debug_assert_eq!(fan.lineality(), lineality_extend(&self.lineality(), &s, &c));
        Ok((fan, s, c))
    }

    /// Inverse of [`Fan::subdivide`]: removes ray `zero`, restoring the cone on
    /// `face` (indices in this fan). With no face given, the smallest face whose
    /// weld re-subdivides to this fan is used.
    pub fn weld(&self, zero: usize, face: Option<&[usize]>) -> Result<(Fan, Vec<usize>, Vec<Q>), FanError> {
        let candidates: Vec<Vec<usize>> = match face {
            Some(f) => vec![f.to_vec()],
            None => (1..=self.dim).flat_map(|k| (0..self.rays.len()).filter(|&i| i != zero).combinations(k)).collect(),
        };
        let mut last = FanError::NotInterior;
        for s in candidates {
            if s.contains(&zero) {
                continue;
            }
            let c = match solve_in_span(&self.rays[zero], &self.cone_rays(&s)) {
                Ok(c) => c,
                Err(_) => continue,
            };
            match self.complex.weld(&s, zero) {
                Ok(complex) => {
                    let mut rays = self.rays.clone();
                    rays.remove(zero);
                    let shifted: Vec<usize> = s.iter().map(|&i| if i > zero { i - 1 } else { i }).collect();
                    return Ok((Fan { dim: self.dim, rays, complex }, shifted, c));
                }
                Err(e) => last = e.into(),
            }
        }
        Err(last)
    }

    /// Star of the cone S in quotient coordinates (orthogonal complement of its
    /// span), on the link vertices.
    pub fn star(&self, s: &[usize]) -> Result<(Fan, Vec<usize>), FanError> {
        let link = self.complex.link(s)?;
        let verts = link.used_vertices();
        let span = self.cone_rays(s);
        // basis of span(σ)^⊥
        let perp = linalg::nullspace(&span, self.dim);
        let rays: Vec<Vector> = verts.iter().map(|&j| perp.iter().map(|b| linalg::dot(b, &self.rays[j])).collect()).collect();
        let vars = self.vars().sub(&verts);
        let facets: Vec<Vec<usize>> = link
            .facets()
            .iter()
            .map(|f| f.iter().map(|v| verts.binary_search(v).expect("link vertex")).collect())
            .collect();
        let fan = Fan::new(perp.len(), rays, SimComplex::new(vars, facets), false)?;
        Ok((fan, verts))
    }

    pub fn to_json(&self) -> FanJson {
        FanJson {
            dim: self.dim,
            rays: self.rays.clone(),
            cones: self.complex.facets().to_vec(),
            labels: Some(self.vars().labels().to_vec()),
        }
    }
}

/// Fan input `{dim, rays, cones}`; cones list 0-based ray indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanJson {
    pub dim: usize,
    pub rays: Vec<Vector>,
    pub cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FanJson {
    pub fn build(&self, check_axioms: bool) -> Result<Fan, FanError> {
        let vars = match &self.labels {
            Some(l) => VarSet::new(l.clone())?,
            None => VarSet::numbered(self.rays.len()),
        };
        if vars.len() != self.rays.len() {
            return Err(FanError::Mismatch(format!("{} labels for {} rays", vars.len(), self.rays.len())));
        }
        for c in &self.cones {
            if c.iter().any(|&i| i >= self.rays.len()) {
                return Err(FanError::UnknownRay(c.iter().map(|i| i.to_string()).collect()));
            }
            if c.iter().duplicates().next().is_some() {
                return Err(FanError::DependentCone(vars.sub(c).labels().to_vec()));
            }
        }
        Fan::new(self.dim, self.rays.clone(), SimComplex::new(vars, self.cones.clone()), check_axioms)
    }
}

/// `α ∈ A^k(Σ)*` represented by `α̂ ∈ P^k(Δ(Σ), L(Σ))`.
#[derive(Clone, Debug)]
pub struct DegreeFunctional {
    fan: Fan,
    poly: HereditaryPoly,
}

impl DegreeFunctional {
    /// Validates `Δ_f ⊆ Δ(Σ)` and `L(Σ) ⊆ L_f`.
    pub fn new(fan: Fan, f: HomPoly) -> Result<DegreeFunctional, FanError> {
        let f = f.embed(fan.vars())?;
        if f.nvars() != fan.vars().len() {
            return Err(FanError::Mismatch("variables differ from the rays".into()));
        }
        let poly = check_hereditary(&f)?;
        if let Some(face) = poly.delta.facets().iter().find(|s| !fan.complex.is_face(s)) {
            return Err(FanError::Mismatch(format!("support {:?} is not a cone", fan.complex.labels_of(face))));
        }
        if !poly.lin.contains_subspace(&fan.lineality()) {
            return Err(FanError::Mismatch("not invariant under L(Σ)".into()));
        }
        Ok(DegreeFunctional { fan, poly })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn poly(&self) -> &HereditaryPoly {
        &self.poly
    }

    pub fn grade(&self) -> usize {
        self.poly.degree()
    }

    /// `α(x^F) = ∂^F α̂` for a face F with |F| = k.
    pub fn value(&self, face: &[usize]) -> Q {
        self.poly.f.partial_set(face).constant_value()
    }

    /// Transport along the subdivision at `rho`.
    pub fn subdivide(&self, rho: &[Q], label: &str) -> Result<DegreeFunctional, FanError> {
        let (fan, s, c) = self.fan.subdivide(rho, label)?;
        let g = subdivision::subdivide(&self.poly.f, &s, &c, label)?;
        DegreeFunctional::new(fan, g)
    }

    /// Transport along the weld removing ray `zero`.
    pub fn weld(&self, zero: usize, face: Option<&[usize]>) -> Result<DegreeFunctional, FanError> {
        let (fan, s, c) = self.fan.weld(zero, face)?;
        let face_here: Vec<usize> = s.iter().map(|&i| if i >= zero { i + 1 } else { i }).collect();
        let g = subdivision::weld(&self.poly.f, zero, &face_here, &c)?;
        let back = subdivision::subdivide(&g, &s, &c, self.fan.vars().label(zero))?;
        if back.embed(self.fan.vars())? != self.poly.f {
            return Err(FanError::Subdivision(SubdivError::BadWeld { step: 0, reason: "functional is not a subdivision at this face".into() }));
        }
        DegreeFunctional::new(fan, g)
    }
}

/// The functional with prescribed values on the maximal cones.
pub fn functional_from_weights(fan: &Fan, weights: &BTreeMap<Vec<usize>, Q>) -> Result<DegreeFunctional, FanError> {
    let h = from_weights(&fan.complex, &fan.lineality(), weights)?;
    DegreeFunctional::new(fan.clone(), h.f)
}

/// Weights keyed by facet labels, as in the hereditary weights schema.
pub fn weights_from_json(fan: &Fan, ws: &[WeightJson]) -> Result<BTreeMap<Vec<usize>, Q>, FanError> {
    let mut out = BTreeMap::new();
    for w in ws {
        let mut idx = Vec::new();
        for l in &w.facet {
            idx.push(fan.vars().index_of(l).ok_or_else(|| FanError::UnknownRay(w.facet.clone()))?);
        }
        idx.sort_unstable();
        out.insert(idx, w.w.clone());
    }
    Ok(out)
}

/// Hereditary Lorentzian verdict for a functional; an empty cone is an error.
pub fn check_fan_lorentzian(alpha: &DegreeFunctional, hints: &[Vector], workers: usize) -> Result<HlReport, FanError> {
    let report = alpha.poly.is_hereditary_lorentzian(hints, workers);
    if report.verdict == Verdict::VacuousEmptyCone {
        return Err(FanError::EmptyCone);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub cone: Vec<String>,
    pub other: Vec<String>,
    /// `V(σ)²`, the Gram determinant of the rays
    pub gram: Q,
    pub gram_other: Q,
    pub value: Q,
    pub value_other: Q,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub pairs: Vec<PairCheck>,
    pub holds: bool,
}

/// Pairs of maximal cones of `a` and `b` whose intersection has nonempty
/// relative interior (both span the same space and their interiors meet).
pub fn overlapping_pairs(a: &Fan, b: &Fan) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for f in a.complex.facets() {
        for g in b.complex.facets() {
            let (rf, rg) = (a.cone_rays(f), b.cone_rays(g));
            let mut both = rf.clone();
            both.extend(rg.iter().cloned());
            if f.len() != g.len() || linalg::rank(&both, a.dim) != f.len() {
                continue;
            }
            let n = f.len() + g.len();
            let mut sys = StrictSystem::new(n, 0);
            for k in 0..n {
                sys.push(linalg::unit(n, k), Q::zero(), Rel::Pos);
            }
            for c in 0..a.dim {
                let row: Vector = rf.iter().map(|r| r[c].clone()).chain(rg.iter().map(|r| -&r[c])).collect();
                sys.push(row, Q::zero(), Rel::Zero);
            }
            if strict_feasible(&sys).is_some() {
                out.push((f.clone(), g.clone()));
            }
        }
    }
    out
}

/// `V(σ)·α(x^F) = V(σ')·α'(x^{F'})` on overlapping maximal cones, compared as
/// `V(σ)²·α(x^F)² = V(σ')²·α'(x^{F'})²` with matching signs.
pub fn canonical_bijection_check(
    alpha: &DegreeFunctional,
    beta: &DegreeFunctional,
    pairs: Option<&[(Vec<usize>, Vec<usize>)]>,
) -> Result<BijectionReport, FanError> {
    let found;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            found = overlapping_pairs(&alpha.fan, &beta.fan);
            &found
        }
    };
    if pairs.is_empty() {
        return Err(FanError::NoOverlap);
    }
    let mut out = Vec::new();
    for (f, g) in pairs {
        let gram = linalg::gram_det(&alpha.fan.cone_rays(f));
        let gram_other = linalg::gram_det(&beta.fan.cone_rays(g));
        let (value, value_other) = (alpha.value(f), beta.value(g));
        let holds = value.signum() == value_other.signum() && &gram * &value * &value == &gram_other * &value_other * &value_other;
        out.push(PairCheck {
            cone: alpha.fan.complex.labels_of(f),
            other: beta.fan.complex.labels_of(g),
            gram,
            gram_other,
            value,
            value_other,
            holds,
        });
    }
    let holds = out.iter().all(|p| p.holds);
    Ok(BijectionReport { pairs: out, holds })
}

/// One step of a fan chain: subdivide at `ray` (new label `vertex`, default a
/// fresh `@k`), or weld away the ray labelled `vertex`, optionally naming the
/// restored `face`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanStep {
    pub kind: StepKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FanStepCertificate {
    pub step: usize,
    pub kind: StepKind,
    pub vertex: String,
    pub face: Vec<String>,
    pub c: Vec<Q>,
}

/// Applies a subdivide/weld chain to a functional.
pub fn transport_chain(alpha: &DegreeFunctional, steps: &[FanStep]) -> Result<(DegreeFunctional, Vec<FanStepCertificate>), FanError> {
    let mut cur = alpha.clone();
    let mut certs = Vec::new();
    for (k, st) in steps.iter().enumerate() {
        let step = k + 1;
        let bad = |reason: String| FanError::BadStep { step, reason };
        let vars = cur.fan.vars().clone();
        match st.kind {
            StepKind::Subdivide => {
                let rho = st.ray.as_ref().ok_or_else(|| bad("subdivision needs a ray".into()))?;
                let label = st.vertex.clone().unwrap_or_else(|| vars.fresh_label("@"));
                let (s, c) = cur.fan.locate(rho)?;
                let next = cur.subdivide(rho, &label)?;
                certs.push(FanStepCertificate { step, kind: st.kind, vertex: label, face: vars.sub(&s).labels().to_vec(), c });
                cur = next;
            }
            StepKind::Weld => {
                let label = st.vertex.clone().ok_or_else(|| bad("weld needs a vertex".into()))?;
                let zero = vars.index_of(&label).ok_or_else(|| bad(format!("unknown ray `{}`", label)))?;
                let face = match &st.face {
                    Some(f) => Some(f.iter().map(|l| vars.index_of(l).ok_or_else(|| bad(format!("unknown ray `{}`", l)))).collect::<Result<Vec<_>, _>>()?),
                    None => None,
                };
                let (_, s, c) = cur.fan.weld(zero, face.as_deref())?;
                let next = cur.weld(zero, face.as_deref())?;
                certs.push(FanStepCertificate { step, kind: st.kind, vertex: label, face: next.fan.vars().sub(&s).labels().to_vec(), c });
                cur = next;
            }
        }
    }
    Ok((cur, certs))
}

/// The Bergman fan of a lattice of flats: one ray per proper flat, cones over
/// the chains of the order complex.
pub fn bergman_fan(lat: &FlatLattice, check_axioms: bool) -> Result<Fan, FanError> {
    let rays = lat.bergman_rays();
    let dim = lat.nonloops().len().saturating_sub(1);
    let fan = Fan::new(dim, rays, lat.order_complex(), check_axioms)?;
    debug_assert_eq!(fan.lineality(), lat.modular_space());
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hereditary::space_dimension;
    use crate::polytope::fixtures;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn vs(rows: &[&[i64]]) -> Vec<Vector> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn square_fan() -> Fan {
        Fan::build(vs(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]), &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]], true).unwrap()
    }

    /// Two complete 2D fans in orthogonal planes of R^4.
    pub(crate) fn disconnected_fan() -> Fan {
        let rays = vs(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[-1, 0, 0, 0],
            &[0, -1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[0, 0, -1, 0],
            &[0, 0, 0, -1],
        ]);
        let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![4, 5], vec![5, 6], vec![6, 7], vec![4, 7]];
        Fan::build(rays, &cones, true).unwrap()
    }

    #[test]
    fn build_examples() {
        let f = square_fan();
        assert_eq!(f.lineality(), LinSubspace::span(4, &vs(&[&[1, 0, -1, 0], &[0, 1, 0, -1]])));
        let ray = Fan::build(vs(&[&[1, 2]]), &[vec![0]], true).unwrap();
        assert_eq!(ray.cone_dim(), 1);
        assert!(matches!(Fan::build(vs(&[&[1, 0], &[2, 0]]), &[vec![0, 1]], false), Err(FanError::DependentCone(_))));
        assert!(matches!(Fan::build(vs(&[&[1, 0], &[0, 0]]), &[vec![0, 1]], false), Err(FanError::ZeroRay(_))));
        // overlapping quadrants
        let bad = Fan::build(vs(&[&[1, 0], &[0, 1], &[1, 1], &[-1, 2]]), &[vec![0, 1], vec![2, 3]], true);
        assert!(matches!(bad, Err(FanError::NotAFan(..))));
        assert!(Fan::build(vs(&[&[1, 0], &[0, 1], &[1, 1], &[-1, 2]]), &[vec![0, 1], vec![2, 3]], false).is_ok());
        let j: FanJson = serde_json::from_str(r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"cones":[[0,1],[1,2],[0,2]]}"#).unwrap();
        assert!(j.build(true).is_ok());
    }

    #[test]
    fn ample_cone_is_the_type_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (name, p) in fixtures() {
            let fan = Fan::normal_fan(&p);
            assert_eq!(fan.ample_cone_member(p.support_numbers()).unwrap(), None, "{name}");
            let neg: Vec<Q> = vec![q(-1); p.num_facets()];
            assert!(fan.ample_cone_member(&neg).unwrap().is_some(), "{name}");
            for _ in 0..30 {
                let t: Vec<Q> = p.support_numbers().iter().map(|x| x + &Q::new(rng.gen_range(-6..=6), 4)).collect();
                assert_eq!(fan.ample_cone_member(&t).unwrap().is_none(), p.cone_member(&t), "{name} {t:?}");
            }
        }
    }

    #[test]
    fn subfans_keep_ample_points() {
        let sq = square_fan();
        let t = vec![q(1); 4];
        assert!(sq.ample_cone_member(&t).unwrap().is_none());
        let sub = Fan::new(2, sq.rays.clone(), SimComplex::new(VarSet::numbered(4), vec![vec![0, 1], vec![1, 2]]), true).unwrap();
        assert!(sub.ample_cone_member(&t).unwrap().is_none());
        let fans = fixtures();
        let cube = Fan::normal_fan(&fans["cube"]);
        let facets = cube.complex().facets().to_vec();
        let sub = Fan::new(3, cube.rays.clone(), SimComplex::new(cube.vars().clone(), facets[..3].to_vec()), true).unwrap();
        assert!(sub.ample_cone_member(fans["cube"].support_numbers()).unwrap().is_none());
    }

    #[test]
    fn volume_functional_of_normal_fans() {
        for (name, p) in fixtures() {
            let fan = Fan::normal_fan(&p);
            let vol = fan.volume_functional().unwrap();
            let pol = p.volume_polynomial().unwrap().f;
            // same polynomial up to a positive scalar
            let (m, c) = pol.terms().next().unwrap();
            let ratio = vol.poly().f.coeff(m) / c;
            assert!(ratio.is_positive(), "{name}");
            assert_eq!(vol.poly().f, pol.scale(&ratio), "{name}");
            let w: BTreeMap<Vec<usize>, Q> = fan.complex().facets().iter().map(|f| (f.clone(), linalg::det(&fan.cone_rays(f)).abs().recip())).collect();
            assert_eq!(functional_from_weights(&fan, &w).unwrap().poly().f, pol, "{name}");
            let rep = check_fan_lorentzian(&vol, &[p.support_numbers().to_vec()], 1).unwrap();
            assert_eq!(rep.verdict, Verdict::Yes, "{name}");
            assert!(space_dimension(fan.complex(), &fan.lineality(), p.dim() + 1) == 0, "{name}");
        }
    }

    #[test]
    fn simplex_fan_is_one_dimensional() {
        let fan = Fan::normal_fan(&fixtures()["simplex"]);
        assert_eq!(fan.balanced_weights().len(), 1);
        assert_eq!(space_dimension(fan.complex(), &fan.lineality(), 3), 1);
    }

    #[test]
    fn inconsistent_weights_are_rejected() {
        let fan = square_fan();
        let mut w: BTreeMap<Vec<usize>, Q> = fan.complex().facets().iter().map(|f| (f.clone(), q(1))).collect();
        w.insert(vec![0, 1], q(2));
        assert!(matches!(functional_from_weights(&fan, &w), Err(FanError::Hereditary(HerError::Unbalanced { .. }))));
    }

    #[test]
    fn disconnected_fan_fails_connectivity() {
        let fan = disconnected_fan();
        assert_eq!(fan.balanced_weights().len(), 2);
        let w = fan.complex().facets().iter().map(|f| (f.clone(), q(1))).collect();
        let alpha = functional_from_weights(&fan, &w).unwrap();
        assert!(alpha.poly().is_positive());
        let rep = check_fan_lorentzian(&alpha, &[vec![q(1); 8]], 1).unwrap();
        assert_eq!(rep.verdict, Verdict::No);
        assert_eq!(rep.connectivity_on, "delta");
        assert!(!rep.connectivity.h_connected);
        assert!(rep.connectivity.witness.is_some());
        assert!(crate::hereditary::verify_hl_witness(alpha.poly(), &rep));
    }

    #[test]
    fn quadrant_subdivision() {
        let fan = Fan::build(vs(&[&[1, 0], &[0, 1]]), &[vec![0, 1]], true).unwrap();
        let (sub, s, c) = fan.subdivide(&[q(1), q(1)], "r0").unwrap();
        assert_eq!(s, vec![0, 1]);
        assert_eq!(c, vec![q(1), q(1)]);
        assert_eq!(sub.complex().facets(), &[vec![0, 2], vec![1, 2]]);
        sub.check_axioms().unwrap();
        let (back, s2, _) = sub.weld(2, None).unwrap();
        assert_eq!(back, fan);
        assert_eq!(s2, vec![0, 1]);
        // a ray parallel to an existing one only relabels
        let (rel, s, c) = fan.subdivide(&[q(3), q(0)], "r0").unwrap();
        assert_eq!((s, c), (vec![0], vec![q(3)]));
        assert_eq!(rel.complex().facets(), &[vec![1, 2]]);
        assert_eq!(fan.subdivide(&[q(-1), q(1)], "r0").unwrap_err(), FanError::NotInterior);
    }

    #[test]
    fn subdivision_preserves_bijection_and_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (name, p) in fixtures() {
            let fan = Fan::normal_fan(&p);
            let alpha = fan.volume_functional().unwrap();
            let id = canonical_bijection_check(&alpha, &alpha, None).unwrap();
            assert!(id.holds, "{name}");
            for _ in 0..3 {
                let rho: Vector = (0..p.dim()).map(|_| Q::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect();
                let Ok(beta) = alpha.subdivide(&rho, "new") else { continue };
                beta.fan().check_axioms().unwrap();
                let rep = canonical_bijection_check(&alpha, &beta, None).unwrap();
                assert!(rep.holds, "{name}: {rep:?}");
                assert!(rep.pairs.len() >= alpha.fan().complex().facets().len(), "{name}");
                let va = check_fan_lorentzian(&alpha, &[], 1).unwrap().verdict;
                let vb = check_fan_lorentzian(&beta, &[], 1).unwrap().verdict;
                assert_eq!(va, vb, "{name}");
                let back = beta.weld(beta.fan().vars().index_of("new").unwrap(), None).unwrap();
                assert_eq!(back.poly().f, alpha.poly().f, "{name}");
            }
        }
    }

    #[test]
    fn corrupted_weights_break_the_bijection() {
        let alpha = square_fan().volume_functional().unwrap();
        let beta = alpha.subdivide(&[q(1), q(2)], "new").unwrap();
        let bad = DegreeFunctional::new(beta.fan().clone(), beta.poly().f.scale(&q(2))).unwrap();
        assert!(!canonical_bijection_check(&alpha, &bad, None).unwrap().holds);
        let neg = DegreeFunctional::new(beta.fan().clone(), beta.poly().f.scale(&q(-1))).unwrap();
        assert!(!canonical_bijection_check(&alpha, &neg, None).unwrap().holds);
        assert_eq!(canonical_bijection_check(&alpha, &beta, Some(&[])).unwrap_err(), FanError::NoOverlap);
    }

    #[test]
    fn chains_round_trip() {
        let alpha = square_fan().volume_functional().unwrap();
        let steps: Vec<FanStep> = serde_json::from_str(
            r#"[{"kind":"subdivide","ray":[1,1],"vertex":"a"},
                {"kind":"subdivide","ray":[1,2],"vertex":"b"},
                {"kind":"weld","vertex":"a"},
                {"kind":"weld","vertex":"b","face":["t1","t2"]}]"#,
        )
        .unwrap();
        let (out, certs) = transport_chain(&alpha, &steps).unwrap();
        assert_eq!(certs.len(), 4);
        assert_eq!(out.poly().f, alpha.poly().f);
        assert_eq!(out.fan(), alpha.fan());
        // welding a ray that is not a subdivision ray fails
        let bad = [FanStep { kind: StepKind::Weld, ray: None, vertex: Some("t1".into()), face: None }];
        assert!(transport_chain(&alpha, &bad).is_err());
    }

    #[test]
    fn star_identity() {
        for (name, p) in fixtures() {
            let fan = Fan::normal_fan(&p);
            let lin = fan.lineality();
            for s in fan.complex().faces_up_to(p.dim() - 1).into_iter().filter(|s| !s.is_empty()) {
                let (star, verts) = fan.star(&s).unwrap();
                let link = fan.complex().link(&s).unwrap();
                let relabeled: Vec<Vec<String>> = link.facets().iter().map(|f| link.labels_of(f)).collect();
                let mine: Vec<Vec<String>> = star.complex().facets().iter().map(|f| star.complex().labels_of(f)).collect();
                assert_eq!(mine, relabeled, "{name} {s:?}");
                assert_eq!(star.lineality(), lin.with_zero_coords(&s).restrict(&verts), "{name} {s:?}");
                let alpha = fan.volume_functional().unwrap();
                let fs = alpha.poly().restrict_fs(&s).unwrap();
                let rest = alpha.poly().complement(&s);
                let pos: Vec<usize> = verts.iter().map(|v| rest.binary_search(v).unwrap()).collect();
                let g = check_hereditary(&fs).unwrap();
                assert!(g.lin.restrict(&pos).contains_subspace(&star.lineality()), "{name} {s:?}");
            }
        }
    }

    #[test]
    fn bergman_fans() {
        use crate::matroid::Matroid;
        let u23 = Matroid::uniform(2, 3).flats().unwrap();
        let fan = bergman_fan(&u23, true).unwrap();
        assert_eq!((fan.dim(), fan.rays().len()), (2, 3));
        let mut rays = fan.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vs(&[&[-1, -1], &[0, 1], &[1, 0]]));
        for (lat, rays, cones) in [
            (u23, 3, 3),
            (Matroid::uniform(3, 4).flats().unwrap(), 10, 12),
            (Matroid::from_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap().flats().unwrap(), 13, 18),
        ] {
            let fan = bergman_fan(&lat, true).unwrap();
            assert_eq!((fan.rays().len(), fan.complex().facets().len()), (rays, cones));
            assert_eq!(fan.lineality(), lat.modular_space());
            let alpha = fan.volume_functional().unwrap();
            assert_eq!(alpha.poly().f, lat.pol().unwrap().f);
            let rep = check_fan_lorentzian(&alpha, &[], 1).unwrap();
            assert_eq!(rep.verdict, Verdict::Yes);
            // subdivide the first 2-cone at the sum of its rays
            if let Some(c) = fan.complex().facets().iter().find(|c| c.len() == 2) {
                let rho: Vector = fan.rays()[c[0]].iter().zip(&fan.rays()[c[1]]).map(|(a, b)| a + b).collect();
                let beta = alpha.subdivide(&rho, "new").unwrap();
                assert!(canonical_bijection_check(&alpha, &beta, None).unwrap().holds);
                assert_eq!(check_fan_lorentzian(&beta, &[], 1).unwrap().verdict, Verdict::Yes);
            }
        }
    }
}
