//! Exact inertia of rational symmetric matrices, and the signature
//! predicates built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::linalg::{self, LinSubspace, Matrix};
use crate::poly::{HomPoly, PolyError};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymMatrix {
    pub entries: Matrix,
}

impl SymMatrix {
    pub fn new(entries: Matrix) -> Result<SymMatrix, String> {
        let n = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(format!("row {} has length {}, expected {}", i, row.len(), n));
            }
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(format!("entries ({},{}) and ({},{}) differ", i, j, j, i));
                }
            }
        }
        Ok(SymMatrix { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Bilinear form `xᵀ M y`.
    pub fn form(&self, x: &[Q], y: &[Q]) -> Q {
        linalg::dot(x, &linalg::mat_vec(&self.entries, y))
    }

    pub fn kernel(&self) -> LinSubspace {
        LinSubspace::span(self.n(), &linalg::nullspace(&self.entries, self.n()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Inertia {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

/// Hessian of a quadratic form over all variables of `q`.
pub fn hessian(q: &HomPoly) -> Result<SymMatrix, PolyError> {
    let idx: Vec<usize> = (0..q.nvars()).collect();
    hessian_on(q, &idx)
}

/// Hessian of a quadratic form restricted to the variables `idx` (in that order).
/// Terms involving other variables are an error.
pub fn hessian_on(q: &HomPoly, idx: &[usize]) -> Result<SymMatrix, PolyError> {
    if q.degree() != 2 && !q.is_zero() {
        return Err(PolyError::WrongDegree { expected: 2, got: q.degree() });
    }
    let mut pos = vec![usize::MAX; q.nvars()];
    for (k, &i) in idx.iter().enumerate() {
        pos[i] = k;
    }
    let n = idx.len();
    let mut h = linalg::zeros(n, n);
    for (m, c) in q.terms() {
        let pairs: Vec<(usize, u32)> = m.pairs().collect();
        for &(i, _) in &pairs {
            if pos[i] == usize::MAX {
                return Err(PolyError::UnknownVar(q.vars().label(i).to_string()));
            }
        }
        match pairs.as_slice() {
            [(i, 2)] => h[pos[*i]][pos[*i]] = c * &Q::from_int(2),
            [(i, 1), (j, 1)] => {
                h[pos[*i]][pos[*j]] = c.clone();
                h[pos[*j]][pos[*i]] = c.clone();
            }
            _ => unreachable!("quadratic monomial"),
        }
    }
    Ok(SymMatrix { entries: h })
}

/// Hessian over the variables actually occurring in `q`; returns those indices too.
pub fn hessian_compact(q: &HomPoly) -> Result<(Vec<usize>, SymMatrix), PolyError> {
    let idx = q.used_vars();
    let h = hessian_on(q, &idx)?;
    Ok((idx, h))
}

/// Coefficients of `det(xI - M)`, leading coefficient first, by Berkowitz's
/// division-free recurrence.
pub fn char_poly(m: &[Vec<Q>]) -> Vec<Q> {
    let n = m.len();
    let mut v: Vec<Q> = vec![Q::one()];
    for k in 0..n {
        // column of the Toeplitz factor: 1, -a_kk, -R C, -R M C, …, -R M^{k-1} C
        let mut t = Vec::with_capacity(k + 2);
        t.push(Q::one());
        t.push(-&m[k][k]);
        let mut col: Vec<Q> = (0..k).map(|i| m[i][k].clone()).collect();
        for _ in 0..k {
            let rc: Q = (0..k).map(|j| &m[k][j] * &col[j]).sum();
            t.push(-rc);
            col = (0..k).map(|i| (0..k).map(|j| &m[i][j] * &col[j]).sum()).collect();
        }
        let mut next = vec![Q::zero(); k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                if i >= j && !vj.is_zero() {
                    *slot += &t[i - j] * vj;
                }
            }
        }
        v = next;
    }
    v
}

fn sign_changes<'a>(signs: impl Iterator<Item = i32> + 'a) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Clears denominators by a positive factor, which leaves the inertia unchanged.
fn integral(m: &[Vec<Q>]) -> Matrix {
    let mut l = BigInt::one();
    for row in m {
        for x in row {
            l = l.lcm(&x.denom());
        }
    }
    let s = Q::from_bigint(l);
    m.iter().map(|row| row.iter().map(|x| x * &s).collect()).collect()
}

/// Exact signature via Descartes' rule on the characteristic polynomial,
/// which is real-rooted because the matrix is symmetric. A symmetric matrix
/// of rank r is congruent to `M_II ⊕ 0` for any column basis I, so only the
/// r×r principal block goes through the characteristic polynomial.
pub fn inertia(m: &SymMatrix) -> Inertia {
    let ints = integral(&m.entries);
    let (_, basis) = linalg::rref(&ints, m.n());
    let core: Matrix = basis.iter().map(|&i| basis.iter().map(|&j| ints[i][j].clone()).collect()).collect();
    let r = core.len();
    let p = char_poly(&core);
    debug_assert!(p.last().map_or(true, |c| !c.is_zero()), "principal block on a column basis is nonsingular");
    let pos = sign_changes(p.iter().map(Q::signum));
    // p(-x): coefficient of x^(r-i) picks up (-1)^(r-i)
    let neg = sign_changes(p.iter().enumerate().map(|(i, c)| if (r - i) % 2 == 1 { -c.signum() } else { c.signum() }));
    debug_assert_eq!(pos + neg, r);
    Inertia { pos, neg, zero: m.n() - r }
}

pub fn at_most_one_positive(m: &SymMatrix) -> bool {
    inertia(m).pos <= 1
}

/// Exactly one positive eigenvalue and kernel equal to `expected_kernel`.
pub fn lorentz_signature(m: &SymMatrix, expected_kernel: &LinSubspace) -> bool {
    inertia(m).pos == 1 && m.kernel() == *expected_kernel
}

/// `P(v,w)² ≥ P(v,v) P(w,w)`
pub fn af_inequality(p: &SymMatrix, v: &[Q], w: &[Q]) -> bool {
    let vw = p.form(v, w);
    &vw * &vw >= p.form(v, v) * p.form(w, w)
}
