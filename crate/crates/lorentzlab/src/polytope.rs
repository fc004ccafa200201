//! Simple polytopes `{x : ⟨ρ_i, x⟩ ≤ t_i}`, their volume polynomials and
//! mixed volumes.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cones::{strict_feasible, Rel, StrictSystem};
use crate::hereditary::{check_hereditary, HerError, HereditaryPoly};
use crate::linalg::{self, LinSubspace, Matrix, Vector};
use crate::poly::{HomPoly, LinForm, VarSet};
use crate::rational::Q;
use crate::simplicial::SimComplex;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolytopeError {
    #[error("normal {index} has length {got}, expected {expected}")]
    Dimension { index: usize, expected: usize, got: usize },
    #[error("{normals} normals but {supports} support numbers")]
    Length { normals: usize, supports: usize },
    #[error("normal {0} is zero")]
    ZeroNormal(usize),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("vertex {vertex:?} lies on {count} facets")]
    NotSimple { vertex: Vec<String>, count: usize },
    #[error("facet {0} is empty")]
    EmptyFacet(usize),
    #[error("polytopes do not share a normal fan")]
    Incompatible,
    #[error("expected {expected} bodies, got {got}")]
    Arity { expected: usize, got: usize },
    #[error(transparent)]
    Hereditary(#[from] HerError),
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub point: Vector,
    /// indices of the facets through the vertex
    pub facets: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SimplePolytope {
    dim: usize,
    normals: Vec<Vector>,
    t: Vec<Q>,
    vertices: Vec<Vertex>,
    complex: SimComplex,
}

fn check_shape(dim: usize, normals: &[Vector], t: &[Q]) -> Result<(), PolytopeError> {
    if normals.len() != t.len() {
        return Err(PolytopeError::Length { normals: normals.len(), supports: t.len() });
    }
    for (index, r) in normals.iter().enumerate() {
        if r.len() != dim {
            return Err(PolytopeError::Dimension { index, expected: dim, got: r.len() });
        }
        if r.iter().all(Q::is_zero) {
            return Err(PolytopeError::ZeroNormal(index));
        }
    }
    Ok(())
}

/// The normals positively span `Q^dim`.
fn positively_spanning(dim: usize, normals: &[Vector]) -> bool {
    if dim == 0 {
        return true;
    }
    if linalg::rank(normals, dim) < dim {
        return false;
    }
    let n = normals.len();
    let mut sys = StrictSystem::new(n, 0);
    for i in 0..n {
        sys.push(linalg::unit(n, i), Q::zero(), Rel::Pos);
    }
    for k in 0..dim {
        sys.push(normals.iter().map(|r| r[k].clone()).collect(), Q::zero(), Rel::Zero);
    }
    strict_feasible(&sys).is_some()
}

impl SimplePolytope {
    pub fn build(normals: Vec<Vector>, t: Vec<Q>) -> Result<SimplePolytope, PolytopeError> {
        let dim = normals.first().map_or(0, Vec::len);
        SimplePolytope::build_in(dim, normals, t)
    }

    /// As [`SimplePolytope::build`] with an explicit ambient dimension, so that
    /// zero-dimensional (point) polytopes without normals are allowed.
    pub fn build_in(dim: usize, normals: Vec<Vector>, t: Vec<Q>) -> Result<SimplePolytope, PolytopeError> {
        check_shape(dim, &normals, &t)?;
        if !positively_spanning(dim, &normals) {
            return Err(PolytopeError::Unbounded);
        }
        let n = normals.len();
        let vars = VarSet::numbered(n);
        let mut vertices: Vec<Vertex> = Vec::new();
        for s in (0..n).combinations(dim) {
            let m: Matrix = s.iter().map(|&i| normals[i].clone()).collect();
            if dim > 0 && linalg::det(&m).is_zero() {
                continue;
            }
            let rhs: Vector = s.iter().map(|&i| t[i].clone()).collect();
            let x = linalg::solve(&m, &rhs, dim).expect("nonsingular");
            let mut tight = Vec::new();
            let mut feasible = true;
            for (i, r) in normals.iter().enumerate() {
                let v = linalg::dot(r, &x);
                if v > t[i] {
                    feasible = false;
                    break;
                }
                if v == t[i] {
                    tight.push(i);
                }
            }
            if !feasible {
                continue;
            }
            if tight.len() > dim {
                return Err(PolytopeError::NotSimple { vertex: vars.sub(&tight).labels().to_vec(), count: tight.len() });
            }
            vertices.push(Vertex { point: x, facets: tight });
        }
        if vertices.is_empty() {
            return Err(PolytopeError::Empty);
        }
        if let Some(i) = (0..n).find(|i| !vertices.iter().any(|v| v.facets.contains(i))) {
            return Err(PolytopeError::EmptyFacet(i));
        }
        let complex = SimComplex::new(vars, vertices.iter().map(|v| v.facets.clone()).collect());
        Ok(SimplePolytope { dim, normals, t, vertices, complex })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn support_numbers(&self) -> &[Q] {
        &self.t
    }

    pub fn num_facets(&self) -> usize {
        self.normals.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// Facet-incidence complex: facets of P are vertices, vertices of P are facets.
    pub fn complex(&self) -> &SimComplex {
        &self.complex
    }

    /// `{(⟨ρ_i, y⟩)_i : y ∈ Q^d}`
    pub fn translations(&self) -> LinSubspace {
        let cols: Vec<Vector> = (0..self.dim).map(|k| self.normals.iter().map(|r| r[k].clone()).collect()).collect();
        LinSubspace::span(self.num_facets(), &cols)
    }

    /// Another polytope with the same normals; succeeds exactly when `t` gives
    /// the same facet-incidence complex.
    pub fn with_support(&self, t: Vec<Q>) -> Result<SimplePolytope, PolytopeError> {
        let q = SimplePolytope::build_in(self.dim, self.normals.clone(), t)?;
        if q.complex != self.complex {
            return Err(PolytopeError::Incompatible);
        }
        Ok(q)
    }

    /// Membership of `t` in the type cone K_P.
    pub fn cone_member(&self, t: &[Q]) -> bool {
        t.len() == self.num_facets() && self.with_support(t.to_vec()).is_ok()
    }

    /// Support numbers of `λP + μQ` for polytopes with this normal fan.
    pub fn minkowski(&self, other: &SimplePolytope, lambda: &Q, mu: &Q) -> Result<SimplePolytope, PolytopeError> {
        if other.normals != self.normals || other.complex != self.complex {
            return Err(PolytopeError::Incompatible);
        }
        let t = self.t.iter().zip(&other.t).map(|(a, b)| lambda * a + mu * b).collect();
        self.with_support(t)
    }

    fn adjacent(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .vertices
            .iter()
            .filter(|v| v.facets.contains(&i))
            .flat_map(|v| v.facets.iter().copied())
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Facet `i` in intrinsic coordinates: a polytope in dimension d−1 whose
    /// facets are the adjacent facets of P. Returns it with the adjacent indices,
    /// the shift coefficients ⟨ρ_i,ρ_j⟩/⟨ρ_i,ρ_i⟩ and the volume factor.
    fn facet(&self, i: usize) -> (SimplePolytope, Vec<usize>, Vec<Q>, Q) {
        let r = &self.normals[i];
        let k = r.iter().position(|x| !x.is_zero()).expect("nonzero normal");
        // basis of ρ_i^⊥: e_j − (ρ_ij/ρ_ik) e_k, j ≠ k; its Gram determinant is |ρ_i|²/ρ_ik²
        let basis: Vec<Vector> = (0..self.dim)
            .filter(|&j| j != k)
            .map(|j| {
                let mut b = linalg::unit(self.dim, j);
                b[k] = -(&r[j] / &r[k]);
                b
            })
            .collect();
        let rr = linalg::dot(r, r);
        let adj = self.adjacent(i);
        let mut normals = Vec::new();
        let mut shifts = Vec::new();
        let mut t = Vec::new();
        for &j in &adj {
            normals.push(basis.iter().map(|b| linalg::dot(b, &self.normals[j])).collect());
            let c = linalg::dot(r, &self.normals[j]) / &rr;
            t.push(&self.t[j] - &(&c * &self.t[i]));
            shifts.push(c);
        }
        let facet = SimplePolytope::build_in(self.dim - 1, normals, t).expect("facet of a simple polytope");
        (facet, adj, shifts, r[k].abs().recip())
    }

    /// The volume as a polynomial in the support numbers.
    fn volume_form(&self) -> HomPoly {
        let n = self.num_facets();
        let vars = VarSet::numbered(n);
        if self.dim == 0 {
            return HomPoly::constant(vars, Q::one());
        }
        let mut acc = HomPoly::zero(vars.clone(), self.dim as u32);
        for i in 0..n {
            let (facet, adj, shifts, factor) = self.facet(i);
            let g = facet.volume_form();
            let forms: Vec<LinForm> = adj.iter().zip(&shifts).map(|(&j, c)| vec![(j, Q::one()), (i, -c)]).collect();
            let di = g.substitute_forms(&forms, &vars).scale(&factor);
            acc = acc.add(&di.mul(&HomPoly::var(vars.clone(), i)));
        }
        acc.scale(&Q::new(1, self.dim as i64))
    }

    /// `pol_P`, with `Vol(Q) = pol_P(t(Q))` for every Q with this normal fan.
    pub fn volume_polynomial(&self) -> Result<HereditaryPoly, PolytopeError> {
        let h = check_hereditary(&self.volume_form())?;
        assert_eq!(h.delta, self.complex, "support complex differs from the facet complex");
        debug_assert!(h.lin.contains_subspace(&self.translations()));
        Ok(h)
    }

    /// Exact volume from a pulling triangulation.
    pub fn volume(&self) -> Q {
        let mut simplices = Vec::new();
        self.pull(&[], &mut simplices);
        let total: Q = simplices
            .iter()
            .map(|s: &Vec<usize>| {
                let p0 = &self.vertices[s[0]].point;
                let m: Matrix = s[1..].iter().map(|&v| self.vertices[v].point.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
                linalg::det(&m).abs()
            })
            .sum();
        total / Q::factorial(self.dim as u32)
    }

    /// Simplices (as vertex indices) triangulating the face cut out by `tight`.
    fn pull(&self, tight: &[usize], out: &mut Vec<Vec<usize>>) {
        let verts: Vec<usize> = (0..self.vertices.len()).filter(|&v| tight.iter().all(|i| self.vertices[v].facets.contains(i))).collect();
        if tight.len() == self.dim {
            out.push(verts);
            return;
        }
        let v0 = verts[0];
        for j in 0..self.num_facets() {
            if tight.contains(&j) || self.vertices[v0].facets.contains(&j) || !verts.iter().any(|&v| self.vertices[v].facets.contains(&j)) {
                continue;
            }
            let mut sub = tight.to_vec();
            sub.push(j);
            let mut inner = Vec::new();
            self.pull(&sub, &mut inner);
            for mut s in inner {
                s.insert(0, v0);
                out.push(s);
            }
        }
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson { dim: self.dim, normals: self.normals.clone(), t: self.t.clone() }
    }
}

/// `D_{t(K_1)} ⋯ D_{t(K_d)} pol_P` for bodies sharing the normal fan of the first.
/// With this normalization `V(K,…,K) = d!·Vol(K)`.
pub fn mixed_volume(bodies: &[SimplePolytope]) -> Result<Q, PolytopeError> {
    let first = bodies.first().ok_or(PolytopeError::Arity { expected: 1, got: 0 })?;
    let pol = first.volume_polynomial()?;
    mixed_volume_with(&pol.f, bodies)
}

/// As [`mixed_volume`] with a precomputed volume polynomial of the common fan.
pub fn mixed_volume_with(pol: &HomPoly, bodies: &[SimplePolytope]) -> Result<Q, PolytopeError> {
    let first = bodies.first().ok_or(PolytopeError::Arity { expected: 1, got: 0 })?;
    if bodies.len() != first.dim {
        return Err(PolytopeError::Arity { expected: first.dim, got: bodies.len() });
    }
    if bodies.iter().any(|b| b.normals != first.normals || b.complex != first.complex) {
        return Err(PolytopeError::Incompatible);
    }
    let dirs: Vec<&[Q]> = bodies.iter().map(|b| b.t.as_slice()).collect();
    Ok(pol.dir_derivatives(&dirs).expect("dimension").constant_value())
}

/// `V(K_1,K_2,K_3,…)² ≥ V(K_1,K_1,K_3,…)·V(K_2,K_2,K_3,…)`
pub fn af_check(bodies: &[SimplePolytope]) -> Result<bool, PolytopeError> {
    let first = bodies.first().ok_or(PolytopeError::Arity { expected: 2, got: 0 })?;
    let pol = first.volume_polynomial()?;
    af_check_with(&pol.f, bodies)
}

pub fn af_check_with(pol: &HomPoly, bodies: &[SimplePolytope]) -> Result<bool, PolytopeError> {
    if bodies.len() < 2 {
        return Err(PolytopeError::Arity { expected: 2, got: bodies.len() });
    }
    let (k1, k2, rest) = (&bodies[0], &bodies[1], &bodies[2..]);
    let with = |a: &SimplePolytope, b: &SimplePolytope| {
        let mut v = vec![a.clone(), b.clone()];
        v.extend(rest.iter().cloned());
        mixed_volume_with(pol, &v)
    };
    let v12 = with(k1, k2)?;
    Ok(&v12 * &v12 >= with(k1, k1)? * with(k2, k2)?)
}

/// Vertex coefficients `v` with `Σ v_i ρ_i = 0`, `v_1 = 1`, for a simplex.
pub fn simplex_relation(normals: &[Vector]) -> Option<Vector> {
    let d = normals.first()?.len();
    if normals.len() != d + 1 {
        return None;
    }
    let cols = linalg::transpose(normals, d);
    let null = linalg::nullspace(&cols, d + 1);
    if null.len() != 1 {
        return None;
    }
    let v = &null[0];
    Some(linalg::scale(v, &v[0].recip()))
}

/// Polytope input `{dim, normals, t}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub normals: Vec<Vector>,
    pub t: Vec<Q>,
}

impl PolytopeJson {
    pub fn build(&self) -> Result<SimplePolytope, PolytopeError> {
        SimplePolytope::build_in(self.dim, self.normals.clone(), self.t.clone())
    }
}

/// Fixtures: 2D square, triangle, pentagon; 3D cube, simplex, prism.
pub fn fixtures() -> BTreeMap<&'static str, SimplePolytope> {
    let v = |rows: &[&[i64]]| -> Vec<Vector> { rows.iter().map(|r| r.iter().map(|&x| Q::from_int(x)).collect()).collect() };
    let t = |xs: &[i64]| -> Vec<Q> { xs.iter().map(|&x| Q::from_int(x)).collect() };
    let mut out = BTreeMap::new();
    let mut add = |name, normals, t| {
        out.insert(name, SimplePolytope::build(normals, t).expect("fixture"));
    };
    add("square", v(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]), t(&[1, 1, 1, 1]));
    add("triangle", v(&[&[-1, 0], &[0, -1], &[1, 1]]), t(&[0, 0, 1]));
    add("pentagon", v(&[&[-1, 0], &[0, -1], &[2, 1], &[1, 3], &[-1, 2]]), t(&[0, 0, 6, 9, 4]));
    add("cube", v(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]), t(&[1, 1, 1, 0, 0, 0]));
    add("simplex", v(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[1, 1, 1]]), t(&[0, 0, 0, 1]));
    add("prism", v(&[&[-1, 0, 0], &[0, -1, 0], &[1, 1, 0], &[0, 0, -1], &[0, 0, 1]]), t(&[0, 0, 1, 0, 2]));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn vs(rows: &[&[i64]]) -> Vec<Vector> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn ts(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn square() -> SimplePolytope {
        SimplePolytope::build(vs(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]), ts(&[1, 1, 1, 1])).unwrap()
    }

    /// Random support vector of a polytope with the same fan.
    pub(crate) fn perturb(p: &SimplePolytope, rng: &mut ChaCha8Rng) -> SimplePolytope {
        loop {
            let t: Vec<Q> = p.support_numbers().iter().map(|x| x + &Q::new(rng.gen_range(-4..=4), 8)).collect();
            if let Ok(q) = p.with_support(t) {
                return q;
            }
        }
    }

    #[test]
    fn build_examples() {
        let s = square();
        let mut pts: Vec<Vector> = s.vertices().iter().map(|v| v.point.clone()).collect();
        pts.sort();
        assert_eq!(pts, vs(&[&[-1, -1], &[-1, 1], &[1, -1], &[1, 1]]));
        let tri = SimplePolytope::build(vs(&[&[-1, 0], &[0, -1], &[1, 1]]), ts(&[0, 0, 1])).unwrap();
        let mut pts: Vec<Vector> = tri.vertices().iter().map(|v| v.point.clone()).collect();
        pts.sort();
        assert_eq!(pts, vs(&[&[0, 0], &[0, 1], &[1, 0]]));
        // t3 = 0 collapses the triangle to a point
        assert!(matches!(
            SimplePolytope::build(vs(&[&[-1, 0], &[0, -1], &[1, 1]]), ts(&[0, 0, 0])),
            Err(PolytopeError::NotSimple { .. })
        ));
        // x ≤ 1 is redundant next to x ≤ 0
        assert_eq!(
            SimplePolytope::build(vs(&[&[-1, 0], &[0, -1], &[1, 1], &[1, 0]]), ts(&[0, 0, 1, 2])).unwrap_err(),
            PolytopeError::EmptyFacet(3)
        );
        assert_eq!(SimplePolytope::build(vs(&[&[1, 0], &[0, 1]]), ts(&[1, 1])).unwrap_err(), PolytopeError::Unbounded);
        assert_eq!(SimplePolytope::build(vs(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]), ts(&[-1, 0, 1, 1])).unwrap_err(), PolytopeError::Empty);
        // the apex of a square pyramid lies on four facets
        let pyramid = vs(&[&[0, 0, -1], &[2, 0, 1], &[-2, 0, 1], &[0, 2, 1], &[0, -2, 1]]);
        assert!(matches!(SimplePolytope::build(pyramid, ts(&[0, 2, 2, 2, 2])), Err(PolytopeError::NotSimple { count: 4, .. })));
    }

    #[test]
    fn volume_oracle() {
        assert_eq!(square().volume(), q(4));
        let unit = SimplePolytope::build(vs(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]), ts(&[1, 1, 0, 0])).unwrap();
        assert_eq!(unit.volume(), q(1));
        let f = fixtures();
        assert_eq!(f["triangle"].volume(), Q::new(1, 2));
        assert_eq!(f["cube"].volume(), q(1));
        assert_eq!(f["simplex"].volume(), Q::new(1, 6));
        assert_eq!(f["prism"].volume(), q(1));
        // pentagon vertices (0,0),(3,0),(3/5,14/5)… by the shoelace formula
        let p = &f["pentagon"];
        let mut pts: Vec<Vector> = p.vertices().iter().map(|v| v.point.clone()).collect();
        let c: Vector = (0..2).map(|k| pts.iter().map(|x| x[k].clone()).sum::<Q>() / q(pts.len() as i64)).collect();
        pts.sort_by(|a, b| {
            let ang = |x: &Vector| (x[1].to_f64() - c[1].to_f64()).atan2(x[0].to_f64() - c[0].to_f64());
            ang(a).partial_cmp(&ang(b)).unwrap()
        });
        let shoelace: Q = (0..pts.len()).map(|i| {
            let (a, b) = (&pts[i], &pts[(i + 1) % pts.len()]);
            &a[0] * &b[1] - &a[1] * &b[0]
        }).sum::<Q>() / q(2);
        assert_eq!(p.volume(), shoelace);
    }

    #[test]
    fn rectangle_and_cube_polynomials() {
        let rect = square().volume_polynomial().unwrap();
        let vars = VarSet::numbered(4);
        let sum = |a: usize, b: usize, vars: &VarSet| HomPoly::var(vars.clone(), a).add(&HomPoly::var(vars.clone(), b));
        assert_eq!(rect.f, sum(0, 2, &vars).mul(&sum(1, 3, &vars)));
        assert!(rect.strong);
        let cube = fixtures()["cube"].volume_polynomial().unwrap();
        let vars = VarSet::numbered(6);
        assert_eq!(cube.f, sum(0, 3, &vars).mul(&sum(1, 4, &vars)).mul(&sum(2, 5, &vars)));
    }

    #[test]
    fn non_unit_normals() {
        // 2x ≤ t1, -3x ≤ t2: length t1/2 + t2/3
        let seg = SimplePolytope::build(vs(&[&[2], &[-3]]), ts(&[1, 1])).unwrap();
        assert_eq!(seg.volume_polynomial().unwrap().f, HomPoly::parse("vars: t1 t2\n1/2 t1 + 1/3 t2").unwrap());
        let tri = SimplePolytope::build(vs(&[&[-2, 0], &[0, -5], &[3, 3]]), ts(&[0, 0, 3])).unwrap();
        assert_eq!(tri.volume(), Q::new(1, 2));
        let pol = tri.volume_polynomial().unwrap();
        assert_eq!(pol.f.evaluate(tri.support_numbers()).unwrap(), Q::new(1, 2));
    }

    #[test]
    fn polynomial_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (name, p) in fixtures() {
            let pol = p.volume_polynomial().unwrap();
            assert_eq!(pol.delta, *p.complex(), "{name}");
            assert!(pol.is_positive(), "{name}");
            assert_eq!(pol.lin, p.translations(), "{name}");
            for _ in 0..20 {
                let r = perturb(&p, &mut rng);
                assert_eq!(pol.f.evaluate(r.support_numbers()).unwrap(), r.volume(), "{name}");
            }
        }
    }

    #[test]
    fn simplex_is_power_of_linear_form() {
        for normals in [vs(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[1, 1, 1]]), vs(&[&[-1, 0], &[0, -2], &[3, 1]])] {
            let d = normals[0].len();
            let v = simplex_relation(&normals).unwrap();
            assert!(v.iter().all(Q::is_positive));
            let mut t = vec![Q::zero(); d + 1];
            t[d] = q(1);
            let p = SimplePolytope::build(normals, t).unwrap();
            let pol = p.volume_polynomial().unwrap().f;
            let lin = HomPoly::linear_dense(VarSet::numbered(d + 1), &v).pow(d as u32);
            // pol = c·lin with c > 0
            let (m, c) = lin.terms().next().unwrap();
            let ratio = pol.coeff(m) / c;
            assert!(ratio.is_positive());
            assert_eq!(pol, lin.scale(&ratio));
        }
    }

    #[test]
    fn mixed_volume_examples() {
        let rect = |a: i64, b: i64| SimplePolytope::build(vs(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]), ts(&[a, b, 0, 0])).unwrap();
        assert_eq!(mixed_volume(&[rect(2, 3), rect(5, 7)]).unwrap(), q(2 * 7 + 3 * 5));
        assert_eq!(mixed_volume(&[rect(1, 1), rect(1, 1)]).unwrap(), q(2));
        assert!(af_check(&[rect(2, 3), rect(5, 7)]).unwrap());
        assert!(af_check(&[rect(2, 3), rect(2, 3)]).unwrap());
        let v = mixed_volume(&[rect(2, 3), rect(5, 7)]).unwrap();
        assert!(&v * &v >= q(4 * 2 * 3 * 5 * 7));
        let f = fixtures();
        let s = &f["simplex"];
        assert_eq!(mixed_volume(&[s.clone(), s.clone(), s.clone()]).unwrap(), q(1));
        assert_eq!(mixed_volume(&[rect(1, 1), f["triangle"].clone()]).unwrap_err(), PolytopeError::Incompatible);
        assert!(matches!(mixed_volume(&[rect(1, 1)]), Err(PolytopeError::Arity { .. })));
    }

    #[test]
    fn mixed_volume_is_symmetric_multilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (name, p) in fixtures() {
            let pol = p.volume_polynomial().unwrap().f;
            let d = p.dim();
            let bodies: Vec<SimplePolytope> = (0..d + 1).map(|_| perturb(&p, &mut rng)).collect();
            let base: Vec<SimplePolytope> = bodies[..d].to_vec();
            let v = mixed_volume_with(&pol, &base).unwrap();
            let mut rev = base.clone();
            rev.reverse();
            assert_eq!(mixed_volume_with(&pol, &rev).unwrap(), v, "{name}");
            let (l, m) = (Q::new(2, 3), Q::new(5, 4));
            let comb = bodies[0].minkowski(&bodies[d], &l, &m).unwrap();
            let mut a = base.clone();
            a[0] = comb;
            let mut b = base.clone();
            b[0] = bodies[d].clone();
            assert_eq!(mixed_volume_with(&pol, &a).unwrap(), &l * &v + &m * &mixed_volume_with(&pol, &b).unwrap(), "{name}");
            let k = &bodies[0];
            assert_eq!(mixed_volume_with(&pol, &vec![k.clone(); d]).unwrap(), Q::factorial(d as u32) * k.volume(), "{name}");
        }
    }

    #[test]
    fn translation_invariance_and_cone() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (name, p) in fixtures() {
            let pol = p.volume_polynomial().unwrap().f;
            let y: Vector = (0..p.dim()).map(|_| Q::new(rng.gen_range(-5..=5), 3)).collect();
            let shift: Vec<Q> = p.normals().iter().map(|r| linalg::dot(r, &y)).collect();
            let t2: Vec<Q> = p.support_numbers().iter().zip(&shift).map(|(a, b)| a + b).collect();
            assert_eq!(pol.evaluate(&t2).unwrap(), pol.evaluate(p.support_numbers()).unwrap(), "{name}");
            assert!(p.cone_member(&t2), "{name}");
        }
        let s = square();
        assert!(s.cone_member(&ts(&[2, 1, 3, 1])));
        assert!(!s.cone_member(&ts(&[-1, 1, 1, 1])));
        assert!(!s.cone_member(&ts(&[1, 1, 1])));
    }

    #[test]
    fn weights_are_inverse_determinants() {
        for (name, p) in fixtures() {
            let pol = p.volume_polynomial().unwrap();
            for f in p.complex().facets() {
                let m: Matrix = f.iter().map(|&i| p.normals()[i].clone()).collect();
                assert_eq!(pol.f.partial_set(f).constant_value(), linalg::det(&m).abs().recip(), "{name}");
            }
        }
    }

    #[test]
    fn fixtures_are_hereditary_lorentzian() {
        for (name, p) in fixtures() {
            let pol = p.volume_polynomial().unwrap();
            assert!(pol.strong, "{name}");
            let rep = pol.is_hereditary_lorentzian(&[p.support_numbers().to_vec()], 1);
            assert_eq!(rep.verdict, crate::hereditary::Verdict::Yes, "{name}: {rep:?}");
        }
    }

    #[test]
    fn json_round_trip() {
        let j: PolytopeJson = serde_json::from_str(r#"{"dim":2,"normals":[[-1,0],[0,-1],[1,1]],"t":["0","0","1/2"]}"#).unwrap();
        let p = j.build().unwrap();
        assert_eq!(p.volume(), Q::new(1, 8));
    }
}
