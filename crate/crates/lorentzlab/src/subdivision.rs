//! Stellar subdivision and weld operators on polynomials, and chains of them.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::hereditary::{check_hereditary, HerError, HereditaryPoly};
use crate::linalg::{LinSubspace, Vector};
use crate::poly::{HomPoly, LinForm, Monomial, PolyError, VarSet};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubdivError {
    #[error("coefficient for `{0}` must be positive")]
    NonPositiveCoefficient(String),
    #[error("face has {face} vertices but {coeffs} coefficients were given")]
    CoefficientCount { face: usize, coeffs: usize },
    #[error("empty face")]
    EmptyFace,
    #[error("{0:?} is not a face")]
    NotAFace(Vec<String>),
    #[error("step {step}: intermediate polynomial is not strongly hereditary")]
    NotStronglyHereditary { step: usize },
    #[error("step {step}: weld data inconsistent: {reason}")]
    BadWeld { step: usize, reason: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Hereditary(#[from] HerError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Subdivide,
    Weld,
}

/// One step of a chain. For `subdivide`, `vertex` names the new variable
/// (a fresh `@k` label by default); for `weld`, it names the variable that is
/// eliminated (the most recently created one by default).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivStep {
    pub kind: StepKind,
    pub face: Vec<String>,
    pub c: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
}

fn check_face_coeffs(vars: &VarSet, s: &[usize], c: &[Q]) -> Result<(), SubdivError> {
    if s.is_empty() {
        return Err(SubdivError::EmptyFace);
    }
    if s.len() != c.len() {
        return Err(SubdivError::CoefficientCount { face: s.len(), coeffs: c.len() });
    }
    for (&i, ci) in s.iter().zip(c) {
        if i >= vars.len() {
            return Err(SubdivError::Poly(PolyError::DimensionMismatch { expected: vars.len(), got: i + 1 }));
        }
        if !ci.is_positive() {
            return Err(SubdivError::NonPositiveCoefficient(vars.label(i).to_string()));
        }
    }
    if s.iter().duplicates().next().is_some() {
        return Err(SubdivError::NotAFace(s.iter().map(|&i| vars.label(i).to_string()).collect()));
    }
    Ok(())
}

/// `g|_{t_0 = Σ c_i t_i}`, where `zero` is the index of t_0 in `g`'s variables.
/// The result lives on the variables of `g` with `t_0` removed.
pub fn weld(g: &HomPoly, zero: usize, s: &[usize], c: &[Q]) -> Result<HomPoly, SubdivError> {
    let vars = g.vars();
    if zero >= vars.len() {
        return Err(PolyError::UnknownVar(format!("#{}", zero)).into());
    }
    check_face_coeffs(vars, s, c)?;
    if s.contains(&zero) {
        return Err(SubdivError::NotAFace(s.iter().map(|&i| vars.label(i).to_string()).collect()));
    }
    let new_vars = vars.without(zero);
    let shift = |j: usize| if j > zero { j - 1 } else { j };
    let forms: Vec<LinForm> = (0..vars.len())
        .map(|j| if j == zero { s.iter().zip(c).map(|(&i, ci)| (shift(i), ci.clone())).collect() } else { vec![(shift(j), Q::one())] })
        .collect();
    Ok(g.substitute_forms(&forms, &new_vars))
}

/// Partial derivatives `∂^M f` for all multisets M of size k over `s`, weighted
/// by `Π 1/c_i`, summed: `h_k(∂̄) f`.
fn complete_homogeneous(f: &HomPoly, s: &[usize], cinv: &[Q], k: usize) -> HomPoly {
    let mut acc = HomPoly::zero(f.vars().clone(), f.degree().saturating_sub(k as u32));
    if k as u32 > f.degree() {
        return acc;
    }
    for m in (0..s.len()).combinations_with_replacement(k) {
        let w: Q = m.iter().map(|&a| &cinv[a]).product();
        let alpha = Monomial::from_pairs(m.iter().map(|&a| (s[a], 1)).collect());
        acc = acc.add(&f.mixed_partial(&alpha).scale(&w));
    }
    acc
}

/// Stellar subdivision of `f` at the face `s` with coefficients `c`. The new
/// variable `new_label` is appended after the existing ones.
pub fn subdivide(f: &HomPoly, s: &[usize], c: &[Q], new_label: &str) -> Result<HomPoly, SubdivError> {
    check_face_coeffs(f.vars(), s, c)?;
    let vars = f.vars().with_extra(new_label)?;
    let zero = vars.len() - 1;
    let g = f.embed(&vars)?;
    let d = f.degree() as usize;
    let k = s.len();
    if k > d {
        return Ok(g);
    }
    let cinv: Vec<Q> = c.iter().map(Q::recip).collect();
    let scale: Q = cinv.iter().product();
    let base = g.partial_set(s).scale(&scale);
    if base.is_zero() {
        return Ok(g);
    }
    let mut zform: LinForm = vec![(zero, Q::one())];
    zform.extend(s.iter().zip(c).map(|(&i, ci)| (i, -ci)));
    let z = HomPoly::linear(vars.clone(), &zform);
    let mut correction = HomPoly::zero(vars.clone(), d as u32);
    let mut zpow = z.pow(k as u32);
    for n in k..=d {
        let h = complete_homogeneous(&base, s, &cinv, n - k);
        if !h.is_zero() {
            correction = correction.add(&zpow.mul(&h).scale(&Q::factorial(n as u32).recip()));
        }
        zpow = zpow.mul(&z);
    }
    // f − (−1)^s Σ …
    let sign = if k % 2 == 0 { -Q::one() } else { Q::one() };
    Ok(g.add(&correction.scale(&sign)))
}

/// `L^c = {(ℓ, Σ c_i ℓ_i) : ℓ ∈ L}`, with the new coordinate last.
pub fn lineality_extend(l: &LinSubspace, s: &[usize], c: &[Q]) -> LinSubspace {
    let basis: Vec<Vector> = l
        .basis()
        .iter()
        .map(|b| {
            let mut v = b.clone();
            v.push(s.iter().zip(c).map(|(&i, ci)| ci * &b[i]).sum());
            v
        })
        .collect();
    LinSubspace::span(l.ambient() + 1, &basis)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCertificate {
    pub step: usize,
    pub kind: StepKind,
    pub face: Vec<String>,
    pub vertex: String,
    pub strongly_hereditary: bool,
    pub positive: bool,
    pub num_terms: usize,
}

#[derive(Clone, Debug)]
pub struct ChainResult {
    pub result: HomPoly,
    pub certificates: Vec<StepCertificate>,
}

fn resolve(vars: &VarSet, labels: &[String]) -> Result<Vec<usize>, SubdivError> {
    labels.iter().map(|l| vars.index_of(l).ok_or_else(|| SubdivError::Poly(PolyError::UnknownVar(l.clone())))).collect()
}

fn strongly(f: &HomPoly, step: usize) -> Result<HereditaryPoly, SubdivError> {
    match check_hereditary(f) {
        Ok(h) if h.strong => Ok(h),
        _ => Err(SubdivError::NotStronglyHereditary { step }),
    }
}

/// Applies subdivide/weld steps in order, requiring every polynomial along
/// the way to be strongly hereditary. A weld must be undone exactly by the
/// matching subdivision, otherwise it is rejected.
pub fn apply_chain(f: &HomPoly, steps: &[SubdivStep]) -> Result<ChainResult, SubdivError> {
    let mut cur = f.clone();
    strongly(&cur, 0)?;
    let mut created: Vec<String> = Vec::new();
    let mut certificates = Vec::new();
    for (k, st) in steps.iter().enumerate() {
        let step = k + 1;
        let vars = cur.vars().clone();
        let s = resolve(&vars, &st.face)?;
        let (next, vertex) = match st.kind {
            StepKind::Subdivide => {
                let h = check_hereditary(&cur)?;
                if !h.delta.is_face(&s) {
                    return Err(SubdivError::NotAFace(st.face.clone()));
                }
                let label = st.vertex.clone().unwrap_or_else(|| vars.fresh_label("@"));
                created.push(label.clone());
                (subdivide(&cur, &s, &st.c, &label)?, label)
            }
            StepKind::Weld => {
                let label = match st.vertex.clone().or_else(|| created.pop()) {
                    Some(l) => l,
                    None => return Err(SubdivError::BadWeld { step, reason: "no vertex to weld".into() }),
                };
                created.retain(|l| *l != label);
                let zero = vars.index_of(&label).ok_or_else(|| SubdivError::BadWeld { step, reason: format!("unknown vertex `{}`", label) })?;
                let welded = weld(&cur, zero, &s, &st.c)?;
                // the weld is valid exactly when subdividing again restores the input
                let ws = resolve(welded.vars(), &st.face)?;
                let back = subdivide(&welded, &ws, &st.c, &label)?;
                if back.embed(&vars)? != cur {
                    return Err(SubdivError::BadWeld { step, reason: "input is not a subdivision at this face".into() });
                }
                (welded, label)
            }
        };
        let h = strongly(&next, step)?;
        certificates.push(StepCertificate {
            step,
            kind: st.kind,
            face: st.face.clone(),
            vertex,
            strongly_hereditary: true,
            positive: h.is_positive(),
            num_terms: next.num_terms(),
        });
        cur = next;
    }
    Ok(ChainResult { result: cur, certificates })
}

/// Checks that `(v, Σ c_i v_i − ε)` lies in the cone of the subdivided polynomial.
pub fn cone_transport_check(h: &HereditaryPoly, s: &[usize], c: &[Q], v: &[Q], eps: &Q) -> Result<bool, SubdivError> {
    let g = subdivide(&h.f, s, c, &h.f.vars().fresh_label("@"))?;
    let hg = check_hereditary(&g)?;
    Ok(hg.cone_member(&lifted(s, c, v, eps)).member)
}

fn lifted(s: &[usize], c: &[Q], v: &[Q], eps: &Q) -> Vector {
    let mut w = v.to_vec();
    let v0: Q = s.iter().zip(c).map(|(&i, ci)| ci * &v[i]).sum();
    w.push(v0 - eps);
    w
}

/// Halves ε from `eps0` until the transported point lies in the subdivided
/// cone, giving up after `max_halvings`. Returns the first ε that works.
pub fn cone_transport_search(h: &HereditaryPoly, s: &[usize], c: &[Q], v: &[Q], eps0: &Q, max_halvings: u32) -> Result<Option<Q>, SubdivError> {
    let g = subdivide(&h.f, s, c, &h.f.vars().fresh_label("@"))?;
    let hg = check_hereditary(&g)?;
    let mut eps = eps0.clone();
    for _ in 0..=max_halvings {
        if hg.cone_member(&lifted(s, c, v, &eps)).member {
            return Ok(Some(eps));
        }
        eps = eps * Q::new(1, 2);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hereditary::{face_restriction, from_weights};
    use crate::simplicial::SimComplex;
    use std::collections::BTreeMap;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn poly(labels: &str, text: &str) -> HomPoly {
        HomPoly::parse(&format!("vars: {}\n{}", labels, text)).unwrap()
    }

    fn lin(f: &str, text: &str) -> HomPoly {
        poly(f, text)
    }

    /// Strongly hereditary fixtures: a product of simplices and a square box.
    fn fixtures() -> Vec<HomPoly> {
        let v = "t1 t2 t3 t4";
        let box2 = lin(v, "t1 + t3").mul(&lin(v, "t2 + t4"));
        let v6 = "t1 t2 t3 t4 t5 t6";
        let box3 = lin(v6, "t1 + t4").mul(&lin(v6, "t2 + t5")).mul(&lin(v6, "t3 + t6"));
        let simplex = lin("t1 t2 t3", "t1 + t2 + t3").pow(2);
        let mixed = lin("t1 t2 t3 t4 t5", "t1 + t2 + t3").pow(2).mul(&lin("t1 t2 t3 t4 t5", "t4 + 2*t5"));
        vec![box2, box3, simplex, mixed]
    }

    #[test]
    fn weld_examples() {
        let g = poly("t1 t0", "t0^2");
        assert_eq!(weld(&g, 1, &[0], &[q(1)]).unwrap(), poly("t1", "t1^2"));
        let g = poly("t1 t2 t3 t0", "t0 t2");
        assert_eq!(weld(&g, 3, &[0, 2], &[q(1), q(1)]).unwrap(), poly("t1 t2 t3", "t1 t2 + t2 t3"));
        assert!(weld(&g, 3, &[0, 2], &[q(1), q(0)]).is_err());
        assert!(weld(&g, 3, &[0], &[q(1), q(1)]).is_err());
    }

    #[test]
    fn single_vertex_subdivision_renames() {
        for f in fixtures() {
            let c = Q::new(3, 2);
            let g = subdivide(&f, &[0], &[c.clone()], "t0").unwrap();
            let n = f.nvars();
            // f|_{t_1 = t_0/c}
            let forms: Vec<LinForm> = (0..n).map(|j| if j == 0 { vec![(n, c.recip())] } else { vec![(j, Q::one())] }).collect();
            assert_eq!(g, f.substitute_forms(&forms, g.vars()));
        }
    }

    #[test]
    fn edge_example() {
        let f = poly("t1 t2", "t1 t2");
        let g = subdivide(&f, &[0, 1], &[q(1), q(1)], "t0").unwrap();
        let z = poly("t1 t2 t0", "t0 - t1 - t2");
        assert_eq!(g, f.embed(g.vars()).unwrap().sub(&z.pow(2).scale(&Q::new(1, 2))));
        assert_eq!(weld(&g, 2, &[0, 1], &[q(1), q(1)]).unwrap(), f);
    }

    #[test]
    fn round_trips_and_cancellation() {
        for f in fixtures() {
            let h = check_hereditary(&f).unwrap();
            for s in h.delta.faces_up_to(h.degree()).into_iter().filter(|s| !s.is_empty()) {
                let c: Vec<Q> = (0..s.len()).map(|k| Q::new(k as i64 + 1, 2)).collect();
                let g = subdivide(&f, &s, &c, "@0").unwrap();
                let zero = g.nvars() - 1;
                assert_eq!(weld(&g, zero, &s, &c).unwrap(), f);
                assert!(g.partial_set(&s).is_zero(), "∂^S survives for {:?}", s);
                let hg = check_hereditary(&g).unwrap();
                assert!(hg.strong);
                assert_eq!(hg.is_positive(), h.is_positive());
                assert_eq!(hg.delta, h.delta.stellar_subdivide(&s, "@0").unwrap());
                assert!(hg.lin.contains_subspace(&lineality_extend(&h.lin, &s, &c)));
            }
        }
    }

    /// The weights of sub(f) are read off the weights of f, and from_weights on
    /// the subdivided pair rebuilds exactly sub(f).
    #[test]
    fn subdivision_matches_reconstruction() {
        for f in fixtures() {
            let h = check_hereditary(&f).unwrap();
            let w = h.facet_weights();
            for s in h.delta.faces_up_to(h.degree()).into_iter().filter(|s| s.len() >= 2) {
                let c: Vec<Q> = (0..s.len()).map(|k| Q::new(2 * k as i64 + 1, 3)).collect();
                let delta_s = h.delta.stellar_subdivide(&s, "@0").unwrap();
                let lc = lineality_extend(&h.lin, &s, &c);
                let zero = f.nvars();
                let mut ws = BTreeMap::new();
                for t in delta_s.facets() {
                    let wt = if t.contains(&zero) {
                        // T = R ∪ {0}: the facet R ∪ S of Δ, divided by c_j for the j ∈ S missing from R
                        let r: Vec<usize> = t.iter().copied().filter(|&x| x != zero).collect();
                        let (pos, _) = s.iter().enumerate().find(|(_, j)| !r.contains(j)).unwrap();
                        let mut full: Vec<usize> = r.iter().copied().chain(s.iter().copied()).collect();
                        full.sort_unstable();
                        full.dedup();
                        &w[&full] / &c[pos]
                    } else {
                        w[t].clone()
                    };
                    ws.insert(t.clone(), wt);
                }
                let rebuilt = from_weights(&delta_s, &lc, &ws).unwrap();
                assert_eq!(rebuilt.f, subdivide(&f, &s, &c, "@0").unwrap());
                // and the other direction: sub(weld(g)) = g
                let g = rebuilt.f;
                assert_eq!(subdivide(&weld(&g, zero, &s, &c).unwrap(), &s, &c, "@0").unwrap(), g);
            }
        }
    }

    #[test]
    fn link_rules() {
        for f in fixtures() {
            let h = check_hereditary(&f).unwrap();
            for s in h.delta.faces_up_to(h.degree()).into_iter().filter(|s| s.len() >= 2) {
                let c: Vec<Q> = (0..s.len()).map(|k| Q::new(k as i64 + 2, 1)).collect();
                let g = subdivide(&f, &s, &c, "@0").unwrap();
                for i in 0..f.nvars() {
                    let lhs = face_restriction(&g, &[i]);
                    let fi = face_restriction(&f, &[i]);
                    let rhs = if let Some(p) = s.iter().position(|&x| x == i) {
                        // S∖{i} in the restricted numbering, coefficients c', scaled by c_i
                        let rest: Vec<usize> = s.iter().filter(|&&x| x != i).map(|&x| if x > i { x - 1 } else { x }).collect();
                        let cr: Vec<Q> = c.iter().enumerate().filter(|(k, _)| *k != p).map(|(_, x)| x.clone()).collect();
                        subdivide(&fi, &rest, &cr, "@0").unwrap()
                    } else {
                        let shifted: Vec<usize> = s.iter().map(|&x| if x > i { x - 1 } else { x }).collect();
                        subdivide(&fi, &shifted, &c, "@0").unwrap()
                    };
                    assert_eq!(lhs, rhs, "vertex {} face {:?}", i, s);
                }
            }
        }
    }

    #[test]
    fn lineality_extension() {
        let l = LinSubspace::full(2);
        let e = lineality_extend(&l, &[0, 1], &[q(1), q(2)]);
        assert_eq!(e, LinSubspace::span(3, &[vec![q(1), q(0), q(1)], vec![q(0), q(1), q(2)]]));
        assert_eq!(lineality_extend(&LinSubspace::zero(3), &[0], &[q(1)]), LinSubspace::zero(4));
        let l = LinSubspace::span(2, &[vec![q(1), q(-1)]]);
        assert_eq!(lineality_extend(&l, &[0, 1], &[q(1), q(1)]), LinSubspace::span(3, &[vec![q(1), q(-1), q(0)]]));
    }

    #[test]
    fn subdivided_pair_is_hereditary() {
        let delta = SimComplex::new(VarSet::numbered(4), vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        let l = LinSubspace::span(4, &[vec![q(1), q(0), q(-1), q(0)], vec![q(0), q(1), q(0), q(-1)]]);
        let ds = delta.stellar_subdivide(&[0, 1], "t0").unwrap();
        let lc = lineality_extend(&l, &[0, 1], &[q(1), q(3)]);
        for t in ds.faces_up_to(2) {
            assert_eq!(lc.projection_rank(&t), t.len());
        }
    }

    #[test]
    fn chains() {
        let f = fixtures().remove(0);
        assert_eq!(apply_chain(&f, &[]).unwrap().result, f);
        let step = |kind, face: &[&str], c: &[i64]| SubdivStep { kind, face: face.iter().map(|s| s.to_string()).collect(), c: c.iter().map(|&x| q(x)).collect(), vertex: None };
        let r = apply_chain(&f, &[step(StepKind::Subdivide, &["t1", "t2"], &[1, 1]), step(StepKind::Weld, &["t1", "t2"], &[1, 1])]).unwrap();
        assert_eq!(r.result, f);
        assert_eq!(r.certificates.len(), 2);
        assert_eq!(r.certificates[0].vertex, "@0");
        // welding with different coefficients does not invert the subdivision
        let e = apply_chain(&f, &[step(StepKind::Subdivide, &["t1", "t2"], &[1, 1]), step(StepKind::Weld, &["t1", "t2"], &[1, 2])]).unwrap_err();
        assert!(matches!(e, SubdivError::BadWeld { step: 2, .. }));
        let e = apply_chain(&f, &[step(StepKind::Subdivide, &["t1", "t3"], &[1, 1])]).unwrap_err();
        assert!(matches!(e, SubdivError::NotAFace(_)));
        let weak = poly("t1 t2", "t1^2 + 2*t1 t2 + t2^2");
        assert!(matches!(apply_chain(&weak, &[]), Err(SubdivError::NotStronglyHereditary { step: 0 })));
    }

    #[test]
    fn cone_transport() {
        for (f, v) in [
            (fixtures().remove(0), vec![q(1), q(1), q(1), q(1)]),
            (fixtures().remove(0), vec![q(3), q(-1), q(-2), q(2)]),
            (fixtures().remove(2), vec![q(1), q(2), q(3)]),
        ] {
            let h = check_hereditary(&f).unwrap();
            assert!(h.cone_member(&v).member);
            let c = [q(1), Q::new(1, 2)];
            let eps = cone_transport_search(&h, &[0, 1], &c, &v, &q(4), 20).unwrap();
            let eps = eps.expect("some ε works");
            assert!(cone_transport_check(&h, &[0, 1], &c, &v, &eps).unwrap());
            // ε = 0 puts the new coordinate on the boundary
            assert!(!cone_transport_check(&h, &[0, 1], &c, &v, &q(0)).unwrap());
        }
    }
}
