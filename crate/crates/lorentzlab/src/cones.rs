//! Strict linear feasibility and polyhedral cone helpers.

use serde::{Deserialize, Serialize};

use crate::linalg::{self, LinSubspace, Vector};
use crate::lp::{Lp, LpOutcome};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    /// `λ(x) > 0`
    Pos,
    /// `λ(x) ≥ 0`
    NonNeg,
    /// `λ(x) = 0`
    Zero,
}

/// Affine functional `coeffs·x + constant` together with a relation to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub constant: Q,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, constant: Q, rel: Rel) -> Constraint {
        Constraint { coeffs, constant, rel }
    }

    pub fn value(&self, x: &[Q]) -> Q {
        linalg::dot(&self.coeffs, x) + &self.constant
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        let v = self.value(x);
        match self.rel {
            Rel::Pos => v.is_positive(),
            Rel::NonNeg => !v.is_negative(),
            Rel::Zero => v.is_zero(),
        }
    }
}

/// A system of strict and non-strict linear conditions. The first `nprimary`
/// variables are the ones of interest; the rest are existential auxiliaries.
#[derive(Clone, Debug, Default)]
pub struct StrictSystem {
    pub nvars: usize,
    pub nprimary: usize,
    pub constraints: Vec<Constraint>,
}

impl StrictSystem {
    pub fn new(nprimary: usize, naux: usize) -> StrictSystem {
        StrictSystem { nvars: nprimary + naux, nprimary, constraints: Vec::new() }
    }

    pub fn push(&mut self, mut coeffs: Vec<Q>, constant: Q, rel: Rel) {
        assert!(coeffs.len() <= self.nvars, "constraint has too many coefficients");
        coeffs.resize(self.nvars, Q::zero());
        self.constraints.push(Constraint { coeffs, constant, rel });
    }

    pub fn holds(&self, x: &[Q]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }
}

/// Finds an exact point satisfying every constraint, or `None` if there is none.
///
/// Each `λ(x) > 0` becomes `λ(x) ≥ ε`; we maximize `ε ≤ 1` and the system is
/// feasible iff the optimum is positive.
pub fn strict_feasible(sys: &StrictSystem) -> Option<Vec<Q>> {
    let n = sys.nvars;
    // columns: x⁺ (n), x⁻ (n), ε
    let eps = 2 * n;
    let nv = 2 * n + 1;
    let split = |c: &Constraint, sign: &Q| -> Vec<Q> {
        let mut row = vec![Q::zero(); nv];
        for (j, a) in c.coeffs.iter().enumerate() {
            if !a.is_zero() {
                row[j] = a * sign;
                row[n + j] = -(a * sign);
            }
        }
        row
    };
    let mut ub = Vec::new();
    let mut eq = Vec::new();
    let minus = -Q::one();
    for c in &sys.constraints {
        match c.rel {
            Rel::Pos => {
                // -a·x + ε ≤ constant
                let mut row = split(c, &minus);
                row[eps] = Q::one();
                ub.push((row, c.constant.clone()));
            }
            Rel::NonNeg => ub.push((split(c, &minus), c.constant.clone())),
            Rel::Zero => eq.push((split(c, &Q::one()), -&c.constant)),
        }
    }
    let mut cap = vec![Q::zero(); nv];
    cap[eps] = Q::one();
    ub.push((cap, Q::one()));
    let mut objective = vec![Q::zero(); nv];
    objective[eps] = Q::one();
    let lp = Lp { nvars: nv, objective, ub, eq };
    let any_strict = sys.constraints.iter().any(|c| c.rel == Rel::Pos);
    match lp.solve() {
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("ε is capped"),
        LpOutcome::Optimal { value, point } => {
            if any_strict && !value.is_positive() {
                return None;
            }
            let x: Vec<Q> = (0..n).map(|j| &point[j] - &point[n + j]).collect();
            assert!(sys.holds(&x), "simplex witness failed re-verification");
            Some(x)
        }
    }
}

/// An element `ℓ ∈ L` with `v + ℓ` strictly positive, if one exists.
pub fn in_orthant_plus_subspace(v: &[Q], l: &LinSubspace) -> Option<Vector> {
    if v.iter().all(Q::is_positive) {
        return Some(vec![Q::zero(); v.len()]);
    }
    let basis = l.basis();
    let mut sys = StrictSystem::new(basis.len(), 0);
    for (j, vj) in v.iter().enumerate() {
        sys.push(basis.iter().map(|b| b[j].clone()).collect(), vj.clone(), Rel::Pos);
    }
    let lam = strict_feasible(&sys)?;
    let mut out = vec![Q::zero(); v.len()];
    for (c, b) in lam.iter().zip(basis) {
        linalg::add_scaled(&mut out, c, b);
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpanError {
    #[error("rays are linearly dependent")]
    Dependent,
    #[error("target is not in the span of the rays")]
    NotInSpan,
    #[error("coefficient {index} is {value}, not positive")]
    NonPositive { index: usize, value: Q },
}

/// The unique coefficients `c` with `target = Σ c_i rays_i`, required to be positive.
pub fn solve_in_span(target: &[Q], rays: &[Vector]) -> Result<Vec<Q>, SpanError> {
    let k = rays.len();
    let cols = linalg::transpose(rays, target.len());
    if linalg::rank(&cols, k) < k {
        return Err(SpanError::Dependent);
    }
    let c = linalg::solve(&cols, target, k).ok_or(SpanError::NotInSpan)?;
    if let Some((index, value)) = c.iter().enumerate().find(|(_, x)| !x.is_positive()) {
        return Err(SpanError::NonPositive { index, value: value.clone() });
    }
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeByGenerators {
    pub generators: Vec<Vector>,
}

impl ConeByGenerators {
    pub fn new(generators: Vec<Vector>) -> Result<ConeByGenerators, String> {
        let Some(first) = generators.first() else {
            return Err("cone needs at least one generator".into());
        };
        let n = first.len();
        for (i, g) in generators.iter().enumerate() {
            if g.len() != n {
                return Err(format!("generator {} has length {}, expected {}", i, g.len(), n));
            }
            if g.iter().all(Q::is_zero) {
                return Err(format!("generator {} is zero", i));
            }
        }
        Ok(ConeByGenerators { generators })
    }

    pub fn orthant(n: usize) -> ConeByGenerators {
        ConeByGenerators { generators: (0..n).map(|i| linalg::unit(n, i)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.generators[0].len()
    }

    /// Sum of the generators, a point of the relative interior.
    pub fn interior_point(&self) -> Vector {
        let mut v = vec![Q::zero(); self.dim()];
        for g in &self.generators {
            linalg::add_scaled(&mut v, &Q::one(), g);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    /// Fourier–Motzkin decision of a system with only `>0` and `≥0` rows.
    fn fm_feasible(rows: &[(Vec<Q>, Q, bool)], nvars: usize) -> bool {
        let mut rows = rows.to_vec();
        for j in 0..nvars {
            let (mut pos, mut neg, mut rest) = (vec![], vec![], vec![]);
            for r in rows {
                if r.0[j].is_positive() {
                    pos.push(r);
                } else if r.0[j].is_negative() {
                    neg.push(r);
                } else {
                    rest.push(r);
                }
            }
            for p in &pos {
                for n in &neg {
                    let (a, b) = (&p.0[j], -&n.0[j]);
                    let coeffs: Vec<Q> = p.0.iter().zip(&n.0).map(|(x, y)| x * &b + y * a).collect();
                    rest.push((coeffs, &p.1 * &b + &n.1 * a, p.2 || n.2));
                }
            }
            rows = rest;
        }
        rows.iter().all(|(_, c, strict)| if *strict { c.is_positive() } else { !c.is_negative() })
    }

    #[test]
    fn strict_examples() {
        let mut s = StrictSystem::new(1, 0);
        s.push(qv(&[1]), q(0), Rel::Pos);
        s.push(qv(&[-1]), q(1), Rel::Pos);
        assert_eq!(strict_feasible(&s), Some(vec![Q::new(1, 2)]));

        let mut s = StrictSystem::new(1, 0);
        s.push(qv(&[1]), q(0), Rel::Pos);
        s.push(qv(&[-1]), q(0), Rel::Pos);
        assert_eq!(strict_feasible(&s), None);

        let mut s = StrictSystem::new(2, 0);
        s.push(qv(&[1, 1]), q(0), Rel::Pos);
        s.push(qv(&[1, -1]), q(0), Rel::Pos);
        s.push(qv(&[-1, 0]), q(1), Rel::NonNeg);
        let w = strict_feasible(&s).unwrap();
        assert!(s.holds(&w));
    }

    #[test]
    fn equality_constraints() {
        let mut s = StrictSystem::new(2, 0);
        s.push(qv(&[1, 1]), q(-3), Rel::Zero);
        s.push(qv(&[1, -1]), q(0), Rel::Pos);
        let w = strict_feasible(&s).unwrap();
        assert!(s.holds(&w));
        s.push(qv(&[0, 1]), q(-2), Rel::NonNeg);
        assert_eq!(strict_feasible(&s), None);
    }

    #[test]
    fn orthant_plus_subspace_examples() {
        let l = LinSubspace::span(2, &[qv(&[1, 1])]);
        let ell = in_orthant_plus_subspace(&qv(&[-1, -1]), &l).unwrap();
        assert!(l.contains(&ell) && ell.iter().all(|x| x > &q(1)));
        assert!(in_orthant_plus_subspace(&qv(&[-1, 1]), &LinSubspace::zero(2)).is_none());
        let l = LinSubspace::span(3, &[qv(&[1, 1, 1])]);
        let ell = in_orthant_plus_subspace(&qv(&[0, 0, -3]), &l).unwrap();
        assert!(ell[2] > q(3));
    }

    #[test]
    fn span_examples() {
        let e = |i| linalg::unit(2, i);
        assert_eq!(solve_in_span(&qv(&[1, 1]), &[e(0), e(1)]), Ok(qv(&[1, 1])));
        assert!(matches!(solve_in_span(&qv(&[2, 0]), &[e(0), e(1)]), Err(SpanError::NonPositive { index: 1, .. })));
        let rays = vec![qv(&[1, 0, 0]), qv(&[1, 1, 0]), qv(&[0, 0, 1])];
        assert_eq!(solve_in_span(&qv(&[1, 2, 3]), &rays), Err(SpanError::NonPositive { index: 0, value: q(-1) }));
        assert_eq!(solve_in_span(&qv(&[0, 0, 1]), &[qv(&[1, 0, 0])]), Err(SpanError::NotInSpan));
    }

    proptest! {
        #[test]
        fn agrees_with_fourier_motzkin(
            rows in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 3), -3i64..=3, any::<bool>()), 1..7)
        ) {
            let mut s = StrictSystem::new(3, 0);
            let mut fm = Vec::new();
            for (a, c, strict) in &rows {
                let rel = if *strict { Rel::Pos } else { Rel::NonNeg };
                s.push(qv(a), q(*c), rel);
                fm.push((qv(a), q(*c), *strict));
            }
            let w = strict_feasible(&s);
            if let Some(x) = &w {
                prop_assert!(s.holds(x));
            }
            prop_assert_eq!(w.is_some(), fm_feasible(&fm, 3));
        }
    }
}
