//! Oracles and generators shared by the integration tests. Everything here is
//! computed from first principles, without the library routine it checks.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use lorentzlab::lorentzian::MSet;
use lorentzlab::matroid::Matroid;
use lorentzlab::polytope::SimplePolytope;
use lorentzlab::{HomPoly, Monomial, VarSet, Q};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64) -> Q {
    Q::from_int(n)
}

pub fn seed() -> u64 {
    std::env::var("LORENTZLAB_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20_240_601)
}

/// Flats found by brute force from the rank function: `F` is a flat when
/// adding any outside element raises the rank. Sorted by (rank, mask).
pub fn brute_flats(m: &Matroid) -> Vec<(usize, u64)> {
    let n = m.len();
    let mut out: Vec<(usize, u64)> = (0..1u64 << n)
        .filter(|&f| {
            let r = m.rank_of(f);
            (0..n).filter(|&e| f >> e & 1 == 0).all(|e| m.rank_of(f | 1 << e) > r)
        })
        .map(|f| (m.rank_of(f), f))
        .collect();
    out.sort();
    out
}

/// `μ(K, F)` for every flat in [`brute_flats`] order.
pub fn brute_mobius(flats: &[(usize, u64)]) -> Vec<i64> {
    let mut mu = vec![0i64; flats.len()];
    for b in 0..flats.len() {
        if b == 0 {
            mu[0] = 1;
            continue;
        }
        mu[b] = -(0..b).filter(|&a| flats[a].1 & !flats[b].1 == 0).map(|a| mu[a]).sum::<i64>();
    }
    mu
}

/// `χ(t) = Σ_F μ(K,F) t^{r(E)−r(F)}`, ascending powers.
pub fn mobius_char_poly(m: &Matroid) -> Vec<Q> {
    let flats = brute_flats(m);
    let mu = brute_mobius(&flats);
    let r = m.rank();
    let mut c = vec![Q::zero(); r + 1];
    for ((rf, _), u) in flats.iter().zip(&mu) {
        c[r - rf] += q(*u);
    }
    c
}

/// Quotient of an ascending coefficient list by `t − 1` (synthetic division).
pub fn divide_by_t_minus_one(p: &[Q]) -> (Vec<Q>, Q) {
    let mut quot = vec![Q::zero(); p.len() - 1];
    let mut acc = Q::zero();
    for k in (1..p.len()).rev() {
        acc = &acc + &p[k];
        quot[k - 1] = acc.clone();
    }
    (quot, &acc + &p[0])
}

pub fn times_t_minus_one(p: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] += c.clone();
        out[k] -= c.clone();
    }
    out
}

/// Exchange axiom over all pairs.
pub fn exchange_oracle(m: &MSet) -> bool {
    let pts: Vec<&Vec<u32>> = m.points().iter().collect();
    pts.iter().all(|a| {
        pts.iter().all(|b| {
            (0..m.n()).filter(|&i| a[i] > b[i]).all(|i| {
                (0..m.n()).filter(|&j| b[j] > a[j]).any(|j| {
                    let mut c = (*a).clone();
                    c[i] -= 1;
                    c[j] += 1;
                    m.contains(&c)
                })
            })
        })
    })
}

/// Random nonnegative form: either a product of nonnegative linear forms or a
/// random-support sum with positive coefficients.
pub fn random_nonneg(rng: &mut ChaCha8Rng, n: usize, d: u32) -> HomPoly {
    let vars = VarSet::numbered(n);
    if rng.gen_bool(0.5) {
        let mut f = HomPoly::constant(vars.clone(), Q::one());
        for _ in 0..d {
            let c: Vec<Q> = (0..n).map(|_| q(rng.gen_range(0..3))).collect();
            f = f.mul(&HomPoly::linear_dense(vars.clone(), &c));
        }
        f
    } else {
        let mut terms = Vec::new();
        for ix in (0..n).combinations_with_replacement(d as usize) {
            if !rng.gen_bool(0.6) {
                continue;
            }
            let mut e = vec![0u32; n];
            for i in ix {
                e[i] += 1;
            }
            terms.push((Monomial::from_dense(&e), q(rng.gen_range(1..6))));
        }
        HomPoly::from_terms(vars, d, terms).unwrap()
    }
}

/// Random constant-sum subset of N^4 with sum `r`.
pub fn random_mset(rng: &mut ChaCha8Rng, r: usize) -> MSet {
    let n = 4;
    let all: Vec<Vec<u32>> = (0..n)
        .combinations_with_replacement(r)
        .map(|ix| {
            let mut e = vec![0u32; n];
            for i in ix {
                e[i] += 1;
            }
            e
        })
        .collect();
    if rng.gen_bool(0.5) {
        // supports of products of 0/1 linear forms are M-convex
        let vars = VarSet::numbered(n);
        let mut f = HomPoly::constant(vars.clone(), Q::one());
        for _ in 0..r {
            let mut c: Vec<Q> = (0..n).map(|_| q(rng.gen_range(0..2))).collect();
            c[rng.gen_range(0..n)] = Q::one();
            f = f.mul(&HomPoly::linear_dense(vars.clone(), &c));
        }
        let mut pts: Vec<Vec<u32>> = f.support();
        if rng.gen_bool(0.3) && pts.len() > 1 {
            pts.remove(rng.gen_range(0..pts.len()));
        }
        MSet::new(n, pts).unwrap()
    } else {
        let p = rng.gen_range(0.1..0.9);
        MSet::new(n, all.into_iter().filter(|_| rng.gen_bool(p))).unwrap()
    }
}

/// A polytope with the same normal fan and randomly moved facets.
pub fn perturb(p: &SimplePolytope, rng: &mut ChaCha8Rng, spread: i64) -> SimplePolytope {
    loop {
        let t: Vec<Q> = p.support_numbers().iter().map(|x| x + &Q::new(rng.gen_range(-spread..=spread), 8)).collect();
        if let Ok(r) = p.with_support(t) {
            return r;
        }
    }
}

/// Area of a convex polygon from its vertices, sorted by angle around the centroid.
pub fn shoelace(points: &[Vec<Q>]) -> Q {
    let n = Q::from_int(points.len() as i64);
    let cx: Q = points.iter().map(|p| p[0].clone()).sum::<Q>() / n.clone();
    let cy: Q = points.iter().map(|p| p[1].clone()).sum::<Q>() / n;
    let mut pts: Vec<(f64, &Vec<Q>)> = points.iter().map(|p| ((&p[1] - &cy).to_f64().atan2((&p[0] - &cx).to_f64()), p)).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut twice = Q::zero();
    for k in 0..pts.len() {
        let (a, b) = (pts[k].1, pts[(k + 1) % pts.len()].1);
        twice += &a[0] * &b[1] - &a[1] * &b[0];
    }
    (twice / q(2)).abs()
}

/// Whether the vertices used by `facets` form one component.
pub fn facets_connected(facets: &[Vec<usize>]) -> bool {
    let verts: BTreeSet<usize> = facets.iter().flatten().copied().collect();
    let Some(&start) = verts.iter().next() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut frontier = vec![start];
    while let Some(v) = frontier.pop() {
        for f in facets.iter().filter(|f| f.contains(&v)) {
            for &u in f {
                if seen.insert(u) {
                    frontier.push(u);
                }
            }
        }
    }
    seen.len() == verts.len()
}
