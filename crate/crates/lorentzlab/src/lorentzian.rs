//! Lorentzian polynomials on the positive orthant and on polyhedral cones:
//! M-convex sets, the support/Hessian characterizations, polarization, the
//! extreme-ray test for cones, sampling refuters and interior perturbation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use serde::Serialize;

use crate::cones::ConeByGenerators;
use crate::inertia::{hessian_compact, inertia, Inertia, SymMatrix};
use crate::linalg::{self, LinSubspace, Vector};
use crate::par::par_map;
use crate::poly::{HomPoly, LinForm, Monomial, PolyError, VarSet};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LorentzError {
    #[error("negative coefficient on {0}")]
    NegativeCoefficient(String),
    #[error("cone has no generators")]
    EmptyCone,
    #[error("points do not have a constant coordinate sum")]
    NotConstantSum,
    #[error("point {0:?} has the wrong length")]
    PointLength(Vec<u32>),
    #[error("sample {sample} has {got} directions, expected {expected}")]
    SampleSize { sample: usize, expected: usize, got: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A finite set of multi-indices in N^n with constant coordinate sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MSet {
    n: usize,
    points: BTreeSet<Vec<u32>>,
}

impl MSet {
    pub fn new(n: usize, points: impl IntoIterator<Item = Vec<u32>>) -> Result<MSet, LorentzError> {
        let points: BTreeSet<Vec<u32>> = points.into_iter().collect();
        let mut sum = None;
        for p in &points {
            if p.len() != n {
                return Err(LorentzError::PointLength(p.clone()));
            }
            let s: u32 = p.iter().sum();
            if *sum.get_or_insert(s) != s {
                return Err(LorentzError::NotConstantSum);
            }
        }
        Ok(MSet { n, points })
    }

    /// The support of `f` as exponent vectors.
    pub fn support_of(f: &HomPoly) -> MSet {
        MSet { n: f.nvars(), points: f.support().into_iter().collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &BTreeSet<Vec<u32>> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[u32]) -> bool {
        self.points.contains(p)
    }

    /// The common coordinate sum, `None` for the empty set.
    pub fn sum(&self) -> Option<u32> {
        self.points.iter().next().map(|p| p.iter().sum())
    }

    /// First `(α, β, i)` for which the exchange axiom fails, in lexicographic order.
    pub fn exchange_violation(&self) -> Option<(Vec<u32>, Vec<u32>, usize)> {
        let mut probe = vec![0u32; self.n];
        for a in &self.points {
            for b in &self.points {
                for i in 0..self.n {
                    if a[i] <= b[i] {
                        continue;
                    }
                    probe.copy_from_slice(a);
                    probe[i] -= 1;
                    let ok = (0..self.n).any(|j| {
                        if b[j] <= a[j] {
                            return false;
                        }
                        probe[j] += 1;
                        let hit = self.points.contains(&probe);
                        probe[j] -= 1;
                        hit
                    });
                    if !ok {
                        return Some((a.clone(), b.clone(), i));
                    }
                }
            }
        }
        None
    }

    pub fn is_m_convex(&self) -> bool {
        self.exchange_violation().is_none()
    }

    /// `∂^β M = {α − β : α ∈ M, α ≥ β}`.
    pub fn derive(&self, beta: &[u32]) -> MSet {
        let points = self
            .points
            .iter()
            .filter(|a| a.iter().zip(beta).all(|(x, y)| x >= y))
            .map(|a| a.iter().zip(beta).map(|(x, y)| x - y).collect())
            .collect();
        MSet { n: self.n, points }
    }

    /// `τ(M) = ∪_j ∂_j M`.
    pub fn tau(&self) -> MSet {
        let mut points = BTreeSet::new();
        for a in &self.points {
            for j in 0..self.n {
                if a[j] > 0 {
                    let mut b = a.clone();
                    b[j] -= 1;
                    points.insert(b);
                }
            }
        }
        MSet { n: self.n, points }
    }

    /// No proper coordinate set A splits M into points supported in A and
    /// points supported off A. Sets of sum at most one are connected.
    pub fn is_connected(&self) -> bool {
        if self.sum().map_or(true, |r| r <= 1) {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for a in &self.points {
            let mut supp = (0..self.n).filter(|&i| a[i] > 0);
            let first = supp.next().expect("positive sum");
            for i in supp {
                let (x, y) = (find(&mut parent, first), find(&mut parent, i));
                parent[x] = y;
            }
        }
        let roots: BTreeSet<usize> = self
            .points
            .iter()
            .map(|a| {
                let i = a.iter().position(|&x| x > 0).unwrap();
                find(&mut parent, i)
            })
            .collect();
        roots.len() <= 1
    }

    /// First `α` with `|α| ≤ r − 2` for which `∂^α M` is disconnected.
    pub fn h_disconnection(&self) -> Option<Vec<u32>> {
        let r = self.sum()?;
        if r < 2 {
            return None;
        }
        let mut alphas = BTreeSet::new();
        for a in &self.points {
            for k in 0..=r - 2 {
                for picks in (0..self.n).filter(|&i| a[i] > 0).combinations_with_replacement(k as usize) {
                    let mut al = vec![0u32; self.n];
                    for i in picks {
                        al[i] += 1;
                    }
                    if al.iter().zip(a).all(|(x, y)| x <= y) {
                        alphas.insert(al);
                    }
                }
            }
        }
        alphas.into_iter().find(|al| !self.derive(al).is_connected())
    }

    pub fn is_h_connected(&self) -> bool {
        self.h_disconnection().is_none()
    }

    /// `τM` is H-connected and every `∂^α M` with `|α| = r − 2` is M-convex.
    /// For `r ≥ 3` this is equivalent to M-convexity.
    pub fn local_m_convex(&self) -> bool {
        let Some(r) = self.sum() else { return true };
        if !self.tau().is_h_connected() {
            return false;
        }
        if r < 2 {
            return self.is_m_convex();
        }
        let mut seen = BTreeSet::new();
        for a in &self.points {
            for (i, j) in (0..self.n).tuple_combinations::<(usize, usize)>().chain((0..self.n).map(|i| (i, i))) {
                let mut al = a.clone();
                if al[i] == 0 {
                    continue;
                }
                al[i] -= 1;
                if al[j] == 0 {
                    continue;
                }
                al[j] -= 1;
                if seen.insert(al.clone()) && !self.derive(&al).is_m_convex() {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LorentzValue {
    Yes,
    No,
    Vacuous,
    /// Only for sampling checks: no sample refuted the property.
    Consistent,
}

/// Evidence for a `no` verdict. Indices in `derivative` and `generators` refer
/// to variables of `f` or to cone generators, with repetition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LorentzWitness {
    /// The exchange axiom fails for `(alpha, beta, i)` in the named support.
    Exchange { alpha: Vec<u32>, beta: Vec<u32>, i: usize },
    /// `∂^α τ supp(f)` is disconnected.
    Disconnected { alpha: Vec<u32> },
    /// The Hessian of the derivative has more than one positive eigenvalue.
    Hessian { derivative: Vec<usize>, vars: Vec<usize>, matrix: Vec<Vec<Q>>, inertia: Inertia },
    /// A mixed derivative along generators is negative.
    NegativeDerivative { generators: Vec<usize>, value: Q },
    /// A derived quadratic `D_u… D_w^k f` is not K-Lorentzian.
    Quadratic { generators: Vec<usize>, w_power: u32, inner: Box<LorentzWitness> },
    /// Condition (P) fails at a sampled tuple.
    NotPositive { sample: usize, value: Q },
    /// Condition (HR) fails at a sampled tuple.
    Signature { sample: usize, inertia: Inertia },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LorentzVerdict {
    pub value: LorentzValue,
    /// Number of elementary conditions examined.
    pub checks: usize,
    pub witness: Option<LorentzWitness>,
}

impl LorentzVerdict {
    fn yes(checks: usize) -> LorentzVerdict {
        LorentzVerdict { value: LorentzValue::Yes, checks, witness: None }
    }

    fn no(checks: usize, w: LorentzWitness) -> LorentzVerdict {
        LorentzVerdict { value: LorentzValue::No, checks, witness: Some(w) }
    }

    pub fn is_yes(&self) -> bool {
        self.value == LorentzValue::Yes
    }
}

fn require_nonneg(f: &HomPoly) -> Result<(), LorentzError> {
    match f.terms().find(|(_, c)| c.is_negative()) {
        Some((m, _)) => Err(LorentzError::NegativeCoefficient(HomPoly::from_terms(f.vars().clone(), f.degree(), [(m.clone(), Q::one())])?.to_string())),
        None => Ok(()),
    }
}

fn indices_of(alpha: &[u32]) -> Vec<usize> {
    alpha.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize)).collect()
}

/// Hessians of all `∂^α f` with `|α| = d − 2` that are not identically zero,
/// read off the coefficients: entry `(i,j)` is `c_p · p!` for `p = α + e_i + e_j`.
fn codim2_hessians(f: &HomPoly) -> BTreeMap<Vec<u32>, (Vec<usize>, SymMatrix)> {
    let n = f.nvars();
    let mut buckets: BTreeMap<Vec<u32>, Vec<(usize, usize, Q)>> = BTreeMap::new();
    for (m, c) in f.terms() {
        let p = m.to_dense(n);
        let val = c * &m.factorial();
        let supp: Vec<usize> = m.support().collect();
        for (a, &i) in supp.iter().enumerate() {
            for &j in &supp[a..] {
                let mut al = p.clone();
                al[i] -= 1;
                if al[j] == 0 {
                    continue;
                }
                al[j] -= 1;
                buckets.entry(al).or_default().push((i, j, val.clone()));
            }
        }
    }
    buckets
        .into_iter()
        .map(|(al, entries)| {
            let vars: Vec<usize> = entries.iter().flat_map(|&(i, j, _)| [i, j]).collect::<BTreeSet<_>>().into_iter().collect();
            let pos: HashMap<usize, usize> = vars.iter().enumerate().map(|(k, &v)| (v, k)).collect();
            let mut h = linalg::zeros(vars.len(), vars.len());
            for (i, j, v) in entries {
                h[pos[&i]][pos[&j]] = v.clone();
                h[pos[&j]][pos[&i]] = v;
            }
            (al, (vars, SymMatrix { entries: h }))
        })
        .collect()
}

fn hessian_condition(f: &HomPoly, workers: usize) -> (usize, Option<LorentzWitness>) {
    let hs: Vec<(Vec<u32>, (Vec<usize>, SymMatrix))> = codim2_hessians(f).into_iter().collect();
    let results = par_map(&hs, workers, |(_, (_, h))| inertia(h));
    let fail = hs.iter().zip(&results).find(|(_, i)| i.pos > 1).map(|((al, (vars, h)), i)| LorentzWitness::Hessian {
        derivative: indices_of(al),
        vars: vars.clone(),
        matrix: h.entries.clone(),
        inertia: *i,
    });
    (hs.len(), fail)
}

fn low_degree(f: &HomPoly) -> Option<LorentzVerdict> {
    (f.degree() < 2).then(|| LorentzVerdict::yes(f.num_terms()))
}

/// Lorentzian test for a polynomial with nonnegative coefficients: the
/// support is M-convex and every `∂^α f` with `|α| = d − 2` has a Hessian with
/// at most one positive eigenvalue.
pub fn is_lorentzian(f: &HomPoly) -> Result<LorentzVerdict, LorentzError> {
    is_lorentzian_with(f, 1)
}

pub fn is_lorentzian_with(f: &HomPoly, workers: usize) -> Result<LorentzVerdict, LorentzError> {
    require_nonneg(f)?;
    if let Some(v) = low_degree(f) {
        return Ok(v);
    }
    let supp = MSet::support_of(f);
    if let Some((alpha, beta, i)) = supp.exchange_violation() {
        return Ok(LorentzVerdict::no(1, LorentzWitness::Exchange { alpha, beta, i }));
    }
    let (k, fail) = hessian_condition(f, workers);
    Ok(match fail {
        Some(w) => LorentzVerdict::no(1 + k, w),
        None => LorentzVerdict::yes(1 + k),
    })
}

/// Same decision as [`is_lorentzian`], with H-connectivity of `τ supp(f)` in
/// place of M-convexity of the support.
pub fn is_lorentzian_v2(f: &HomPoly) -> Result<LorentzVerdict, LorentzError> {
    require_nonneg(f)?;
    if let Some(v) = low_degree(f) {
        return Ok(v);
    }
    if let Some(alpha) = MSet::support_of(f).tau().h_disconnection() {
        return Ok(LorentzVerdict::no(1, LorentzWitness::Disconnected { alpha }));
    }
    let (k, fail) = hessian_condition(f, 1);
    Ok(match fail {
        Some(w) => LorentzVerdict::no(1 + k, w),
        None => LorentzVerdict::yes(1 + k),
    })
}

/// `Π(f) = f(y_1, …, y_n)` with `y_i = t_{i0} + … + t_{iκ_i}`, `κ_i` the degree
/// of f in `t_i`. The new variable `t_{ij}` is labelled by appending `j`.
pub fn polarize(f: &HomPoly) -> Result<HomPoly, PolyError> {
    let mut labels = Vec::new();
    let mut forms: Vec<LinForm> = Vec::new();
    for i in 0..f.nvars() {
        let kappa = f.degree_in(i);
        let mut form = Vec::new();
        for j in 0..=kappa {
            form.push((labels.len(), Q::one()));
            labels.push(format!("{}{}", f.vars().label(i), j));
        }
        forms.push(form);
    }
    let vars = VarSet::new(labels)?;
    Ok(f.substitute_forms(&forms, &vars))
}

fn check_cone(f: &HomPoly, cone: &ConeByGenerators) -> Result<(), LorentzError> {
    if cone.generators.is_empty() {
        return Err(LorentzError::EmptyCone);
    }
    if cone.dim() != f.nvars() {
        return Err(PolyError::DimensionMismatch { expected: f.nvars(), got: cone.dim() }.into());
    }
    Ok(())
}

/// `G(s) = f(s_1 u_1 + … + s_m u_m)`; the coefficient of `s^α` is `D_u^α f / α!`.
pub fn pullback(f: &HomPoly, generators: &[Vector]) -> Result<HomPoly, PolyError> {
    let vars = VarSet::new((1..=generators.len()).map(|k| format!("s{}", k)))?;
    let forms: Vec<LinForm> = (0..f.nvars())
        .map(|i| generators.iter().enumerate().filter(|(_, g)| !g[i].is_zero()).map(|(k, g)| (k, g[i].clone())).collect())
        .collect();
    Ok(f.substitute_forms(&forms, &vars))
}

/// Every `D_{u_K} f` for multisets K of generators of size `k`, in lexicographic order.
fn generator_derivatives(f: &HomPoly, gens: &[Vector], k: usize) -> Vec<(Vec<usize>, HomPoly)> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), f.clone())];
    while let Some((ks, g)) = stack.pop() {
        if ks.len() == k {
            out.push((ks, g));
            continue;
        }
        let start = ks.last().copied().unwrap_or(0);
        for a in (start..gens.len()).rev() {
            let mut next = ks.clone();
            next.push(a);
            stack.push((next, g.dir_derivative(&gens[a]).expect("dimension checked")));
        }
    }
    out
}

/// K-Lorentzian test for the cone spanned by `cone.generators`: mixed
/// derivatives along generators are nonnegative, the support of the pullback
/// to the generators is M-convex, and the Hessians of `D_{u_3}⋯D_{u_d} f` have
/// at most one positive eigenvalue.
pub fn is_k_lorentzian(f: &HomPoly, cone: &ConeByGenerators) -> Result<LorentzVerdict, LorentzError> {
    is_k_lorentzian_with(f, cone, 1)
}

pub fn is_k_lorentzian_with(f: &HomPoly, cone: &ConeByGenerators, workers: usize) -> Result<LorentzVerdict, LorentzError> {
    check_cone(f, cone)?;
    let d = f.degree();
    let g = pullback(f, &cone.generators)?;
    let mut checks = g.num_terms();
    if let Some((m, c)) = g.sorted_terms().into_iter().find(|(_, c)| c.is_negative()) {
        let value = c * &m.factorial();
        return Ok(LorentzVerdict::no(checks, LorentzWitness::NegativeDerivative { generators: indices_of(&m.to_dense(g.nvars())), value }));
    }
    if d < 2 {
        return Ok(LorentzVerdict::yes(checks));
    }
    checks += 1;
    if let Some((alpha, beta, i)) = MSet::support_of(&g).exchange_violation() {
        return Ok(LorentzVerdict::no(checks, LorentzWitness::Exchange { alpha, beta, i }));
    }
    let ders = generator_derivatives(f, &cone.generators, d as usize - 2);
    checks += ders.len();
    let res = par_map(&ders, workers, |(_, q)| {
        let (vars, h) = hessian_compact(q).expect("quadratic");
        let i = inertia(&h);
        (vars, h, i)
    });
    if let Some(((ks, _), (vars, h, i))) = ders.iter().zip(res).find(|(_, r)| r.2.pos > 1) {
        return Ok(LorentzVerdict::no(
            checks,
            LorentzWitness::Hessian { derivative: ks.clone(), vars, matrix: h.entries, inertia: i },
        ));
    }
    Ok(LorentzVerdict::yes(checks))
}

/// K-Lorentzian test through the quadratics `D_{u_1}⋯D_{u_k} D_w^{d−2−k} f`,
/// `w` a caller-supplied interior point of the cone.
pub fn is_k_lorentzian_alt(f: &HomPoly, cone: &ConeByGenerators, w: &[Q]) -> Result<LorentzVerdict, LorentzError> {
    check_cone(f, cone)?;
    let d = f.degree() as usize;
    if d < 2 {
        return is_k_lorentzian(f, cone);
    }
    let mut checks = 0;
    let mut base = f.clone();
    for k in (0..=d - 2).rev() {
        // base = D_w^{d-2-k} f
        for (ks, q) in generator_derivatives(&base, &cone.generators, k) {
            let v = is_k_lorentzian(&q, cone)?;
            checks += v.checks;
            if let Some(inner) = v.witness {
                let w_power = (d - 2 - k) as u32;
                return Ok(LorentzVerdict::no(checks, LorentzWitness::Quadratic { generators: ks, w_power, inner: Box::new(inner) }));
            }
        }
        if k > 0 {
            base = base.dir_derivative(w)?;
        }
    }
    Ok(LorentzVerdict::yes(checks))
}

/// Refutes the defining conditions at sampled tuples `(v_1, …, v_d)`: the
/// full derivative must be positive and the Hessian of `D_{v_3}⋯D_{v_d} f` must
/// have exactly one positive eigenvalue. Never answers `yes`.
pub fn definitional_check(f: &HomPoly, samples: &[Vec<Vector>]) -> Result<LorentzVerdict, LorentzError> {
    let d = f.degree() as usize;
    for (si, tuple) in samples.iter().enumerate() {
        if tuple.len() != d {
            return Err(LorentzError::SampleSize { sample: si, expected: d, got: tuple.len() });
        }
        if d == 0 {
            if f.constant_value().is_negative() {
                return Ok(LorentzVerdict::no(si + 1, LorentzWitness::NotPositive { sample: si, value: f.constant_value() }));
            }
            continue;
        }
        let mut g = f.clone();
        for v in tuple[2.min(d)..].iter() {
            g = g.dir_derivative(v)?;
        }
        let mut top = g.clone();
        for v in &tuple[..2.min(d)] {
            top = top.dir_derivative(v)?;
        }
        let value = top.constant_value();
        if !value.is_positive() {
            return Ok(LorentzVerdict::no(si + 1, LorentzWitness::NotPositive { sample: si, value }));
        }
        if d >= 2 {
            let (_, h) = hessian_compact(&g)?;
            let i = inertia(&h);
            if i.pos != 1 {
                return Ok(LorentzVerdict::no(si + 1, LorentzWitness::Signature { sample: si, inertia: i }));
            }
        }
    }
    Ok(LorentzVerdict { value: LorentzValue::Consistent, checks: samples.len(), witness: None })
}

/// Re-derives a `no` witness from scratch. `cone` is required for witnesses
/// that index generators, `samples` for sampling witnesses.
pub fn verify_witness(f: &HomPoly, w: &LorentzWitness, cone: Option<&ConeByGenerators>, samples: Option<&[Vec<Vector>]>) -> bool {
    match w {
        LorentzWitness::Exchange { alpha, beta, i } => {
            let supp = match cone {
                Some(c) => match pullback(f, &c.generators) {
                    Ok(g) => MSet::support_of(&g),
                    Err(_) => return false,
                },
                None => MSet::support_of(f),
            };
            if !supp.contains(alpha) || !supp.contains(beta) || alpha.get(*i) <= beta.get(*i) {
                return false;
            }
            !(0..alpha.len()).any(|j| {
                let mut p = alpha.clone();
                p[*i] -= 1;
                p[j] += 1;
                beta[j] > alpha[j] && supp.contains(&p)
            })
        }
        LorentzWitness::Disconnected { alpha } => {
            alpha.len() == f.nvars() && !MSet::support_of(f).tau().derive(alpha).is_connected()
        }
        LorentzWitness::Hessian { derivative, .. } => {
            let q = match cone {
                Some(c) => {
                    if derivative.iter().any(|&k| k >= c.generators.len()) {
                        return false;
                    }
                    let dirs: Vec<&[Q]> = derivative.iter().map(|&k| c.generators[k].as_slice()).collect();
                    f.dir_derivatives(&dirs)
                }
                None => {
                    if derivative.iter().any(|&i| i >= f.nvars()) {
                        return false;
                    }
                    Ok(f.mixed_partial(&Monomial::from_pairs(derivative.iter().map(|&i| (i, 1)).collect())))
                }
            };
            match q.and_then(|q| hessian_compact(&q)) {
                Ok((_, h)) => h.n() > 0 && inertia(&h).pos > 1,
                Err(_) => false,
            }
        }
        LorentzWitness::NegativeDerivative { generators, .. } => {
            let Some(c) = cone else { return false };
            if generators.len() != f.degree() as usize || generators.iter().any(|&k| k >= c.generators.len()) {
                return false;
            }
            let dirs: Vec<&[Q]> = generators.iter().map(|&k| c.generators[k].as_slice()).collect();
            f.dir_derivatives(&dirs).map(|g| g.constant_value().is_negative()).unwrap_or(false)
        }
        LorentzWitness::Quadratic { generators, w_power, inner } => {
            let Some(c) = cone else { return false };
            let w = c.interior_point();
            let mut q = f.clone();
            for _ in 0..*w_power {
                q = q.dir_derivative(&w).expect("dimension");
            }
            if generators.iter().any(|&k| k >= c.generators.len()) {
                return false;
            }
            for &k in generators {
                q = q.dir_derivative(&c.generators[k]).expect("dimension");
            }
            q.degree() == 2 && verify_witness(&q, inner, cone, None)
        }
        LorentzWitness::NotPositive { sample, .. } | LorentzWitness::Signature { sample, .. } => {
            let Some(s) = samples.and_then(|s| s.get(*sample)) else { return false };
            definitional_check(f, std::slice::from_ref(s)).map(|v| v.value == LorentzValue::No).unwrap_or(false)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogConcavity {
    /// `a_k = D_u^k D_v^{d−k} f` for `k = 0..=d`.
    pub sequence: Vec<Q>,
    /// `a_k² ≥ a_{k−1} a_{k+1}` for `k = 1..d`.
    pub inequalities: Vec<bool>,
    pub log_concave: bool,
}

pub fn log_concave_seq(f: &HomPoly, u: &[Q], v: &[Q]) -> Result<LogConcavity, PolyError> {
    let d = f.degree() as usize;
    let mut sequence = Vec::with_capacity(d + 1);
    let mut gv = vec![f.clone()];
    for _ in 0..d {
        let next = gv.last().unwrap().dir_derivative(v)?;
        gv.push(next);
    }
    for k in 0..=d {
        // D_u^k applied to D_v^{d-k} f
        let mut g = gv[d - k].clone();
        for _ in 0..k {
            g = g.dir_derivative(u)?;
        }
        sequence.push(g.constant_value());
    }
    let inequalities: Vec<bool> = (1..d).map(|k| &sequence[k] * &sequence[k] >= &sequence[k - 1] * &sequence[k + 1]).collect();
    let log_concave = inequalities.iter().all(|&b| b);
    Ok(LogConcavity { sequence, inequalities, log_concave })
}

/// `f_s(t) = f(t + s⟨t,w⟩v) − C s^d f(v) Σ_j ⟨t,w_j⟩^d` with `w = Σ_j w_j`.
pub fn perturb_interior(f: &HomPoly, v: &[Q], ws: &[Vector], c: &Q, s: &Q) -> Result<HomPoly, PolyError> {
    let n = f.nvars();
    for x in std::iter::once(v).chain(ws.iter().map(|w| w.as_slice())) {
        if x.len() != n {
            return Err(PolyError::DimensionMismatch { expected: n, got: x.len() });
        }
    }
    let mut w = vec![Q::zero(); n];
    for wj in ws {
        linalg::add_scaled(&mut w, &Q::one(), wj);
    }
    let forms: Vec<LinForm> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = w.iter().map(|wk| s * &v[i] * wk).collect();
            row[i] += Q::one();
            row.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
        })
        .collect();
    let shifted = f.substitute_forms(&forms, f.vars());
    let d = f.degree();
    let scale = c * &s.pow(d) * f.evaluate(v)?;
    let mut powers = HomPoly::zero(f.vars().clone(), d);
    for wj in ws {
        powers = powers.add(&HomPoly::linear_dense(f.vars().clone(), wj).pow(d));
    }
    Ok(shifted.sub(&powers.scale(&scale)))
}

/// Interior test for the cone whose lineality space is `lineality` and whose
/// remaining extreme rays are `cone.generators` (taken orthogonal to it):
/// strictly positive mixed derivatives, and Hessians of `D_{v_3}⋯D_{v_d} f`
/// with one positive eigenvalue and kernel exactly `lineality`.
pub fn interior_check(f: &HomPoly, cone: &ConeByGenerators, lineality: &LinSubspace) -> Result<bool, LorentzError> {
    check_cone(f, cone)?;
    let d = f.degree() as usize;
    let g = pullback(f, &cone.generators)?;
    let m = cone.generators.len();
    for ks in (0..m).combinations_with_replacement(d) {
        let mut al = vec![0u32; m];
        for k in ks {
            al[k] += 1;
        }
        if !g.coeff(&Monomial::from_dense(&al)).is_positive() {
            return Ok(false);
        }
    }
    if d < 2 {
        return Ok(true);
    }
    for (_, q) in generator_derivatives(f, &cone.generators, d - 2) {
        let h = crate::inertia::hessian(&q)?;
        if !crate::inertia::lorentz_signature(&h, lineality) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub f_yes: bool,
    pub g_yes: bool,
    pub product_yes: bool,
}

impl ProductCheck {
    /// The product is K-Lorentzian whenever both factors are.
    pub fn holds(&self) -> bool {
        !(self.f_yes && self.g_yes) || self.product_yes
    }
}

pub fn product_check(f: &HomPoly, g: &HomPoly, cone: &ConeByGenerators) -> Result<ProductCheck, LorentzError> {
    let fg = f.try_mul(g)?;
    Ok(ProductCheck {
        f_yes: is_k_lorentzian(f, cone)?.is_yes(),
        g_yes: is_k_lorentzian(g, cone)?.is_yes(),
        product_yes: is_k_lorentzian(&fg, cone)?.is_yes(),
    })
}
