//! Sparse homogeneous polynomials with exact rational coefficients over a
//! labeled, ordered variable set.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::linalg::{self, LinSubspace, Matrix, Vector};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial is not homogeneous (degrees {0} and {1})")]
    Inhomogeneous(u32, u32),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(u32, u32),
    #[error("variable sets differ")]
    VarsMismatch,
    #[error("duplicate variable `{0}`")]
    DuplicateVar(String),
    #[error("unknown variable `{0}`")]
    UnknownVar(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected degree {expected}, found {got}")]
    WrongDegree { expected: u32, got: u32 },
}

pub type Direction = Vec<Q>;

struct VarSetData {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// Ordered set of variable labels. Cheap to clone.
#[derive(Clone)]
pub struct VarSet(Arc<VarSetData>);

impl VarSet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<VarSet, PolyError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(PolyError::DuplicateVar(l.clone()));
            }
        }
        Ok(VarSet(Arc::new(VarSetData { labels, index })))
    }

    /// Variables `t1, …, tn`.
    pub fn numbered(n: usize) -> VarSet {
        VarSet::new((1..=n).map(|i| format!("t{}", i))).unwrap()
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    pub fn sub(&self, idx: &[usize]) -> VarSet {
        VarSet::new(idx.iter().map(|&i| self.0.labels[i].clone())).unwrap()
    }

    pub fn with_extra(&self, label: &str) -> Result<VarSet, PolyError> {
        VarSet::new(self.0.labels.iter().cloned().chain(std::iter::once(label.to_string())))
    }

    /// `prefix0`, `prefix1`, … whichever is first not already in use.
    pub fn fresh_label(&self, prefix: &str) -> String {
        (0..).map(|k| format!("{}{}", prefix, k)).find(|l| self.index_of(l).is_none()).unwrap()
    }

    pub fn without(&self, i: usize) -> VarSet {
        VarSet::new(self.labels().iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone())).unwrap()
    }

    pub fn concat(&self, other: &VarSet) -> Result<VarSet, PolyError> {
        VarSet::new(self.labels().iter().chain(other.labels()).cloned())
    }
}

impl PartialEq for VarSet {
    fn eq(&self, o: &VarSet) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0.labels == o.0.labels
    }
}

impl Eq for VarSet {}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.labels)
    }
}

/// Exponent multi-index stored as sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Monomial(SmallVec<[(u32, u32); 6]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(i: usize) -> Monomial {
        let mut m = SmallVec::new();
        m.push((i as u32, 1));
        Monomial(m)
    }

    pub fn from_dense(exps: &[u32]) -> Monomial {
        Monomial(exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i as u32, e)).collect())
    }

    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Monomial {
        pairs.sort();
        let mut out: SmallVec<[(u32, u32); 6]> = SmallVec::new();
        for (i, e) in pairs {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((j, f)) if *j == i as u32 => *f += e,
                _ => out.push((i as u32, e)),
            }
        }
        Monomial(out)
    }

    pub fn to_dense(&self, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        for &(i, e) in &self.0 {
            v[i as usize] = e;
        }
        v
    }

    pub fn exp(&self, i: usize) -> u32 {
        match self.0.binary_search_by_key(&(i as u32), |p| p.0) {
            Ok(k) => self.0[k].1,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(i, e)| (i as usize, e))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|p| p.0 as usize)
    }

    pub fn mul_var(&self, i: usize, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        let mut m = self.0.clone();
        match m.binary_search_by_key(&(i as u32), |p| p.0) {
            Ok(k) => m[k].1 += e,
            Err(k) => m.insert(k, (i as u32, e)),
        }
        Monomial(m)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut out: SmallVec<[(u32, u32); 6]> = SmallVec::with_capacity(self.0.len() + o.0.len());
        let (mut a, mut b) = (0, 0);
        while a < self.0.len() || b < o.0.len() {
            if b == o.0.len() || (a < self.0.len() && self.0[a].0 < o.0[b].0) {
                out.push(self.0[a]);
                a += 1;
            } else if a == self.0.len() || o.0[b].0 < self.0[a].0 {
                out.push(o.0[b]);
                b += 1;
            } else {
                out.push((self.0[a].0, self.0[a].1 + o.0[b].1));
                a += 1;
                b += 1;
            }
        }
        Monomial(out)
    }

    /// Lowers the exponent of variable `i` by `e`; `None` when it is smaller than `e`.
    pub fn div_var(&self, i: usize, e: u32) -> Option<Monomial> {
        if e == 0 {
            return Some(self.clone());
        }
        let k = self.0.binary_search_by_key(&(i as u32), |p| p.0).ok()?;
        let cur = self.0[k].1;
        if cur < e {
            return None;
        }
        let mut m = self.0.clone();
        if cur == e {
            m.remove(k);
        } else {
            m[k].1 -= e;
        }
        Some(Monomial(m))
    }

    /// Product of falling factorials `exp_i (exp_i - 1) … (exp_i - a_i + 1)` for
    /// `self / t^a`, i.e. the coefficient created by `∂^a`; `None` if not divisible.
    pub fn derive(&self, a: &Monomial) -> Option<(Monomial, u64)> {
        let mut m = self.clone();
        let mut factor: u64 = 1;
        for (i, e) in a.pairs() {
            let cur = m.exp(i);
            if cur < e {
                return None;
            }
            for k in 0..e {
                factor *= (cur - k) as u64;
            }
            m = m.div_var(i, e).unwrap();
        }
        Some((m, factor))
    }

    pub fn remap(&self, map: &[usize]) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(i, e)| (map[i as usize], e)).collect())
    }

    /// `α!`
    pub fn factorial(&self) -> Q {
        self.0.iter().map(|&(_, e)| Q::factorial(e)).product()
    }
}

/// A sparse linear form: `(variable, coefficient)` pairs.
pub type LinForm = Vec<(usize, Q)>;

#[derive(Clone, PartialEq, Eq)]
pub struct HomPoly {
    vars: VarSet,
    degree: u32,
    terms: BTreeMap<Monomial, Q>,
}

fn accumulate(acc: &mut HashMap<Monomial, Q>, m: Monomial, c: Q) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

impl HomPoly {
    pub fn zero(vars: VarSet, degree: u32) -> HomPoly {
        HomPoly { vars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(vars: VarSet, c: Q) -> HomPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        HomPoly { vars, degree: 0, terms }
    }

    pub fn var(vars: VarSet, i: usize) -> HomPoly {
        HomPoly::linear(vars, &[(i, Q::one())])
    }

    pub fn linear(vars: VarSet, form: &[(usize, Q)]) -> HomPoly {
        let mut acc = HashMap::new();
        for (i, c) in form {
            accumulate(&mut acc, Monomial::var(*i), c.clone());
        }
        HomPoly::from_acc(vars, 1, acc)
    }

    pub fn linear_dense(vars: VarSet, coeffs: &[Q]) -> HomPoly {
        let form: LinForm = coeffs.iter().cloned().enumerate().collect();
        HomPoly::linear(vars, &form)
    }

    /// Builds a polynomial from terms; like terms are combined and zeros dropped.
    pub fn from_terms(vars: VarSet, degree: u32, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Result<HomPoly, PolyError> {
        let mut acc = HashMap::new();
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(PolyError::Inhomogeneous(degree, m.degree()));
            }
            if let Some(&(i, _)) = m.0.last() {
                if i as usize >= vars.len() {
                    return Err(PolyError::DimensionMismatch { expected: vars.len(), got: i as usize + 1 });
                }
            }
            accumulate(&mut acc, m, c);
        }
        Ok(HomPoly::from_acc(vars, degree, acc))
    }

    fn from_acc(vars: VarSet, degree: u32, acc: HashMap<Monomial, Q>) -> HomPoly {
        let mut v: Vec<(Monomial, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        HomPoly { vars, degree, terms: v.into_iter().collect() }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant value of a degree-0 polynomial.
    pub fn constant_value(&self) -> Q {
        assert_eq!(self.degree, 0, "constant_value on a polynomial of positive degree");
        self.coeff(&Monomial::one())
    }

    pub fn support(&self) -> Vec<Vec<u32>> {
        self.terms.keys().map(|m| m.to_dense(self.nvars())).collect()
    }

    /// Largest exponent of variable `i` over all terms.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    /// Indices of variables occurring in some term.
    pub fn used_vars(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nvars()];
        for m in self.terms.keys() {
            for i in m.support() {
                seen[i] = true;
            }
        }
        (0..self.nvars()).filter(|&i| seen[i]).collect()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    fn check_compatible(&self, o: &HomPoly) -> Result<(), PolyError> {
        if self.vars != o.vars {
            return Err(PolyError::VarsMismatch);
        }
        if self.degree != o.degree && !self.is_zero() && !o.is_zero() {
            return Err(PolyError::DegreeMismatch(self.degree, o.degree));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &HomPoly) -> Result<HomPoly, PolyError> {
        self.check_compatible(o)?;
        if self.is_zero() {
            return Ok(o.clone());
        }
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            match terms.get_mut(m) {
                Some(x) => {
                    *x += c;
                    if x.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(HomPoly { vars: self.vars.clone(), degree: self.degree, terms })
    }

    pub fn add(&self, o: &HomPoly) -> HomPoly {
        self.try_add(o).expect("incompatible polynomials in add")
    }

    pub fn sub(&self, o: &HomPoly) -> HomPoly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> HomPoly {
        if c.is_zero() {
            return HomPoly::zero(self.vars.clone(), self.degree);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        HomPoly { vars: self.vars.clone(), degree: self.degree, terms }
    }

    pub fn try_mul(&self, o: &HomPoly) -> Result<HomPoly, PolyError> {
        if self.vars != o.vars {
            return Err(PolyError::VarsMismatch);
        }
        let mut acc = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                accumulate(&mut acc, m1.mul(m2), c1 * c2);
            }
        }
        Ok(HomPoly::from_acc(self.vars.clone(), self.degree + o.degree, acc))
    }

    pub fn mul(&self, o: &HomPoly) -> HomPoly {
        self.try_mul(o).expect("incompatible polynomials in mul")
    }

    pub fn pow(&self, e: u32) -> HomPoly {
        let mut acc = HomPoly::constant(self.vars.clone(), Q::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂_i f`
    pub fn partial(&self, i: usize) -> HomPoly {
        let mut acc = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e > 0 {
                accumulate(&mut acc, m.div_var(i, 1).unwrap(), c * &Q::from(e));
            }
        }
        HomPoly::from_acc(self.vars.clone(), self.degree.saturating_sub(1), acc)
    }

    /// `∂^α f` for a sparse multi-index.
    pub fn mixed_partial(&self, alpha: &Monomial) -> HomPoly {
        let k = alpha.degree();
        if k > self.degree {
            return HomPoly::zero(self.vars.clone(), 0);
        }
        let mut acc = HashMap::new();
        for (m, c) in &self.terms {
            if let Some((r, factor)) = m.derive(alpha) {
                accumulate(&mut acc, r, c * &Q::from_int(factor as i64));
            }
        }
        HomPoly::from_acc(self.vars.clone(), self.degree - k, acc)
    }

    pub fn mixed_partial_dense(&self, alpha: &[u32]) -> Result<HomPoly, PolyError> {
        if alpha.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: alpha.len() });
        }
        Ok(self.mixed_partial(&Monomial::from_dense(alpha)))
    }

    /// `∂^S f` for a set of variable indices.
    pub fn partial_set(&self, s: &[usize]) -> HomPoly {
        self.mixed_partial(&Monomial::from_pairs(s.iter().map(|&i| (i, 1)).collect()))
    }

    /// `D_v f = Σ v_i ∂_i f`
    pub fn dir_derivative(&self, v: &[Q]) -> Result<HomPoly, PolyError> {
        if v.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: v.len() });
        }
        let mut acc = HashMap::new();
        for (m, c) in &self.terms {
            for (i, e) in m.pairs() {
                if !v[i].is_zero() {
                    accumulate(&mut acc, m.div_var(i, 1).unwrap(), c * &v[i] * Q::from(e));
                }
            }
        }
        Ok(HomPoly::from_acc(self.vars.clone(), self.degree.saturating_sub(1), acc))
    }

    /// `D_{v_1} ⋯ D_{v_k} f`
    pub fn dir_derivatives(&self, vs: &[&[Q]]) -> Result<HomPoly, PolyError> {
        let mut g = self.clone();
        for v in vs {
            g = g.dir_derivative(v)?;
        }
        Ok(g)
    }

    pub fn evaluate(&self, x: &[Q]) -> Result<Q, PolyError> {
        if x.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: x.len() });
        }
        let mut s = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.pairs() {
                t *= x[i].pow(e);
                if t.is_zero() {
                    break;
                }
            }
            s += t;
        }
        Ok(s)
    }

    /// Drops every term involving a variable in `s`, i.e. sets those variables to zero.
    pub fn set_vars_zero(&self, s: &[usize]) -> HomPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| !m.support().any(|i| s.contains(&i)))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        HomPoly { vars: self.vars.clone(), degree: self.degree, terms }
    }

    /// `g(x) = f(Ax)` where row `i` of `A` expresses old variable `i` in the new variables.
    pub fn substitute_linear(&self, a: &[Vec<Q>], new_vars: &VarSet) -> Result<HomPoly, PolyError> {
        if a.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch { expected: self.nvars(), got: a.len() });
        }
        let forms: Vec<LinForm> = a
            .iter()
            .map(|row| {
                if row.len() != new_vars.len() {
                    Err(PolyError::DimensionMismatch { expected: new_vars.len(), got: row.len() })
                } else {
                    Ok(row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j, c.clone())).collect())
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(self.substitute_forms(&forms, new_vars))
    }

    /// Substitutes a sparse linear form for every variable.
    pub fn substitute_forms(&self, forms: &[LinForm], new_vars: &VarSet) -> HomPoly {
        assert_eq!(forms.len(), self.nvars());
        let mut powers: HashMap<(usize, u32), Vec<(Monomial, Q)>> = HashMap::new();
        let mut acc: HashMap<Monomial, Q> = HashMap::new();
        let mut partial: Vec<(Monomial, Q)> = Vec::new();
        let mut next: HashMap<Monomial, Q> = HashMap::new();
        for (m, c) in &self.terms {
            partial.clear();
            partial.push((Monomial::one(), c.clone()));
            for (i, e) in m.pairs() {
                let p = powers.entry((i, e)).or_insert_with(|| form_power(&forms[i], e));
                next.clear();
                for (pm, pc) in &partial {
                    for (qm, qc) in p.iter() {
                        accumulate(&mut next, pm.mul(qm), pc * qc);
                    }
                }
                partial.clear();
                partial.extend(next.drain().filter(|(_, x)| !x.is_zero()));
                if partial.is_empty() {
                    break;
                }
            }
            for (pm, pc) in partial.drain(..) {
                accumulate(&mut acc, pm, pc);
            }
        }
        HomPoly::from_acc(new_vars.clone(), self.degree, acc)
    }

    /// Re-expresses the polynomial over `new_vars`, matching variables by label.
    pub fn embed(&self, new_vars: &VarSet) -> Result<HomPoly, PolyError> {
        let map: Vec<usize> = self
            .vars
            .labels()
            .iter()
            .map(|l| new_vars.index_of(l).ok_or_else(|| PolyError::UnknownVar(l.clone())))
            .collect::<Result<_, _>>()?;
        let terms = self.terms.iter().map(|(m, c)| (m.remap(&map), c.clone()));
        HomPoly::from_terms(new_vars.clone(), self.degree, terms)
    }

    /// Restricts to the variables `idx`; fails if another variable occurs.
    pub fn restrict_vars(&self, idx: &[usize]) -> Result<HomPoly, PolyError> {
        let mut map = vec![usize::MAX; self.nvars()];
        for (k, &i) in idx.iter().enumerate() {
            map[i] = k;
        }
        let sub = self.vars.sub(idx);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            for i in m.support() {
                if map[i] == usize::MAX {
                    return Err(PolyError::UnknownVar(self.vars.label(i).to_string()));
                }
            }
            terms.push((m.remap(&map), c.clone()));
        }
        HomPoly::from_terms(sub, self.degree, terms)
    }

    /// Exact lineality space `{v : D_v f ≡ 0}`.
    ///
    /// The linear system has one equation per monomial of degree `d-1`; equations
    /// are added lazily, only those violated by the current candidate kernel.
    pub fn lineality_space(&self) -> LinSubspace {
        let n = self.nvars();
        if self.is_zero() || self.degree == 0 {
            return LinSubspace::full(n);
        }
        let mut eq_monos: Vec<Monomial> = Vec::new();
        let mut seen: std::collections::HashSet<Monomial> = std::collections::HashSet::new();
        // seed with a batch of equations spread over the term list
        let step = (self.terms.len() / (4 * n + 4)).max(1);
        for (m, _) in self.terms.iter().step_by(step) {
            for i in m.support() {
                let r = m.div_var(i, 1).unwrap();
                if seen.insert(r.clone()) {
                    eq_monos.push(r);
                }
            }
        }
        let mut rows: Matrix = eq_monos.iter().map(|r| self.equation_row(r)).collect();
        loop {
            let (echelon, _) = linalg::rref(&rows, n);
            let kernel = linalg::nullspace(&echelon, n);
            let mut violated = Vec::new();
            for b in &kernel {
                let g = self.dir_derivative(b).unwrap();
                if !g.is_zero() {
                    violated.extend(g.terms.keys().take(2 * n + 2).cloned());
                    break;
                }
            }
            if violated.is_empty() {
                return LinSubspace::span(n, &kernel);
            }
            rows = echelon;
            for r in violated {
                if seen.insert(r.clone()) {
                    rows.push(self.equation_row(&r));
                }
            }
        }
    }

    /// Row `(coefficient of t^m in ∂_i f)_i`.
    fn equation_row(&self, m: &Monomial) -> Vector {
        (0..self.nvars())
            .map(|i| {
                let up = m.mul_var(i, 1);
                match self.terms.get(&up) {
                    Some(c) => c * &Q::from(up.exp(i)),
                    None => Q::zero(),
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> PolyJson {
        let n = self.nvars();
        PolyJson {
            vars: self.vars.labels().to_vec(),
            degree: Some(self.degree),
            terms: self.sorted_terms().into_iter().map(|(m, c)| TermJson { exps: m.to_dense(n), coeff: c.clone() }).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<HomPoly, PolyError> {
        let vars = VarSet::new(j.vars.clone())?;
        let degree = match (j.degree, j.terms.first()) {
            (Some(d), _) => d,
            (None, Some(t)) => t.exps.iter().sum(),
            (None, None) => 0,
        };
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exps.len() != vars.len() {
                return Err(PolyError::DimensionMismatch { expected: vars.len(), got: t.exps.len() });
            }
            terms.push((Monomial::from_dense(&t.exps), t.coeff.clone()));
        }
        HomPoly::from_terms(vars, degree, terms)
    }

    /// Terms in graded-lexicographic display order (larger exponents of earlier variables first).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let n = self.nvars();
        let mut v: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.to_dense(n).cmp(&a.0.to_dense(n)));
        v
    }

    /// Parses the text grammar `coeff*var^exp var^exp + …`.
    ///
    /// Optional header lines `vars: a b c` and `degree: d` fix the variable
    /// order and the degree of a zero polynomial; otherwise variables are
    /// ordered by first appearance.
    pub fn parse(text: &str) -> Result<HomPoly, PolyError> {
        let mut declared: Option<Vec<String>> = None;
        let mut degree: Option<u32> = None;
        let mut body = String::new();
        for line in text.lines() {
            let l = line.trim();
            if l.starts_with('#') || l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix("vars:") {
                declared = Some(rest.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect());
            } else if let Some(rest) = l.strip_prefix("degree:") {
                degree = Some(rest.trim().parse().map_err(|_| PolyError::Parse(format!("bad degree `{}`", rest.trim())))?);
            } else {
                body.push_str(l);
                body.push(' ');
            }
        }
        let raw = parse_terms(&body)?;
        let mut labels: Vec<String> = declared.clone().unwrap_or_default();
        if declared.is_none() {
            for (_, factors) in &raw {
                for (v, _) in factors {
                    if !labels.contains(v) {
                        labels.push(v.clone());
                    }
                }
            }
        }
        let vars = VarSet::new(labels)?;
        let mut terms = Vec::new();
        let mut deg = degree;
        for (c, factors) in raw {
            let mut pairs = Vec::new();
            for (v, e) in factors {
                let i = vars.index_of(&v).ok_or(PolyError::UnknownVar(v))?;
                pairs.push((i, e));
            }
            let m = Monomial::from_pairs(pairs);
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d != m.degree() => return Err(PolyError::Inhomogeneous(d, m.degree())),
                _ => {}
            }
            terms.push((m, c));
        }
        HomPoly::from_terms(vars, deg.unwrap_or(0), terms)
    }
}

fn form_power(form: &LinForm, e: u32) -> Vec<(Monomial, Q)> {
    let mut cur: Vec<(Monomial, Q)> = vec![(Monomial::one(), Q::one())];
    for _ in 0..e {
        let mut acc = HashMap::new();
        for (m, c) in &cur {
            for (j, a) in form {
                accumulate(&mut acc, m.mul_var(*j, 1), c * a);
            }
        }
        cur = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    }
    cur
}

type RawTerm = (Q, Vec<(String, u32)>);

fn parse_terms(s: &str) -> Result<Vec<RawTerm>, PolyError> {
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let mut out = Vec::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let err = |pos: usize, msg: &str| PolyError::Parse(format!("{} at offset {}", msg, pos));
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Ok(out);
    }
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos == chars.len() {
            break;
        }
        let mut sign = Q::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err(pos, "expected `+` or `-`"));
        }
        first = false;
        let mut coeff = Q::one();
        if pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '.') {
            let start = pos;
            while pos < chars.len() && (chars[pos].is_ascii_digit() || chars[pos] == '/' || chars[pos] == '.') {
                pos += 1;
            }
            let lit: String = chars[start..pos].iter().collect();
            coeff = lit.parse().map_err(|_| err(start, "bad coefficient"))?;
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
            }
        }
        let mut factors = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos < chars.len() && chars[pos] == '*' {
                pos += 1;
                skip_ws(&mut pos);
            }
            if pos == chars.len() || !is_ident_start(chars[pos]) {
                break;
            }
            let start = pos;
            if chars[pos] == '{' {
                while pos < chars.len() && chars[pos] != '}' {
                    pos += 1;
                }
                if pos == chars.len() {
                    return Err(err(start, "unterminated `{`"));
                }
                pos += 1;
            }
            while pos < chars.len() && is_ident_char(chars[pos]) {
                pos += 1;
            }
            let name: String = chars[start..pos].iter().collect();
            let mut e = 1;
            if pos < chars.len() && chars[pos] == '^' {
                pos += 1;
                let es = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                e = chars[es..pos].iter().collect::<String>().parse().map_err(|_| err(es, "bad exponent"))?;
            }
            factors.push((name, e));
        }
        out.push((sign * coeff, factors));
        skip_ws(&mut pos);
        if pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
            return Err(err(pos, "unexpected character"));
        }
    }
    Ok(out)
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '{' || c == '@'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '@'
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            write!(f, "{}", c.abs())?;
            for (i, (v, e)) in m.pairs().enumerate() {
                write!(f, "{}{}", if i == 0 { "*" } else { " " }, self.vars.label(v))?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomPoly(deg {}, {})", self.degree, self)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub coeff: Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    pub terms: Vec<TermJson>,
}
