//! Exact two-phase simplex with Bland's rule.
//!
//! Solves `maximize c·y` subject to `A_ub y ≤ b_ub`, `A_eq y = b_eq`, `y ≥ 0`.

use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

pub struct Lp {
    pub nvars: usize,
    pub objective: Vec<Q>,
    pub ub: Vec<(Vec<Q>, Q)>,
    pub eq: Vec<(Vec<Q>, Q)>,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `obj` over columns allowed by `allowed`. Returns false if unbounded.
    fn optimize(&mut self, obj: &[Q], allowed: &[bool]) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut red = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !obj[b].is_zero() && !self.rows[i][j].is_zero() {
                        red -= &obj[b] * &self.rows[i][j];
                    }
                }
                if red.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn value_of(&self, col: usize) -> Q {
        match self.basis.iter().position(|&b| b == col) {
            Some(i) => self.rhs[i].clone(),
            None => Q::zero(),
        }
    }
}

impl Lp {
    pub fn solve(&self) -> LpOutcome {
        let n = self.nvars;
        let n_ub = self.ub.len();
        let m = n_ub + self.eq.len();
        // columns: structural | slacks (one per ≤ row) | artificials
        let slack0 = n;
        let art0 = n + n_ub;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut needs_art = Vec::with_capacity(m);
        for (k, (a, b)) in self.ub.iter().enumerate() {
            let mut row = a.clone();
            row.resize(n, Q::zero());
            row.resize(art0, Q::zero());
            row[slack0 + k] = Q::one();
            let neg = b.is_negative();
            if neg {
                row.iter_mut().for_each(|x| *x = -&*x);
            }
            rows.push(row);
            rhs.push(if neg { -b } else { b.clone() });
            needs_art.push(neg);
        }
        for (a, b) in &self.eq {
            let mut row = a.clone();
            row.resize(art0, Q::zero());
            let neg = b.is_negative();
            if neg {
                row.iter_mut().for_each(|x| *x = -&*x);
            }
            rows.push(row);
            rhs.push(if neg { -b } else { b.clone() });
            needs_art.push(true);
        }
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let ncols = art0 + n_art;
        let mut basis = Vec::with_capacity(m);
        let mut next_art = art0;
        for (i, row) in rows.iter_mut().enumerate() {
            row.resize(ncols, Q::zero());
            if needs_art[i] {
                row[next_art] = Q::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(slack0 + i);
            }
        }
        let mut t = Tableau { rows, rhs, basis, ncols };

        if n_art > 0 {
            let mut obj1 = vec![Q::zero(); ncols];
            for x in obj1.iter_mut().skip(art0) {
                *x = -Q::one();
            }
            let all = vec![true; ncols];
            t.optimize(&obj1, &all);
            let phase1: Q = (art0..ncols).map(|j| t.value_of(j)).sum();
            if phase1.is_positive() {
                return LpOutcome::Infeasible;
            }
            // drive artificials out of the basis, dropping redundant rows
            let mut i = 0;
            while i < t.rows.len() {
                if t.basis[i] >= art0 {
                    match (0..art0).find(|&j| !t.rows[i][j].is_zero()) {
                        Some(j) => {
                            t.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            t.rows.remove(i);
                            t.rhs.remove(i);
                            t.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut obj = self.objective.clone();
        obj.resize(ncols, Q::zero());
        let mut allowed = vec![true; ncols];
        for a in allowed.iter_mut().skip(art0) {
            *a = false;
        }
        if !t.optimize(&obj, &allowed) {
            return LpOutcome::Unbounded;
        }
        let point: Vec<Q> = (0..n).map(|j| t.value_of(j)).collect();
        let value = crate::linalg::dot(&self.objective, &point);
        LpOutcome::Optimal { value, point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2,6)
        let lp = Lp {
            nvars: 2,
            objective: vec![q(3), q(5)],
            ub: vec![(vec![q(1), q(0)], q(4)), (vec![q(0), q(2)], q(12)), (vec![q(3), q(2)], q(18))],
            eq: vec![],
        };
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: q(36), point: vec![q(2), q(6)] });
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = Lp { nvars: 1, objective: vec![q(1)], ub: vec![(vec![q(1)], q(-1))], eq: vec![] };
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let lp = Lp { nvars: 1, objective: vec![q(1)], ub: vec![(vec![q(-1)], q(0))], eq: vec![] };
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_rows() {
        // x + y = 2, x - y = 0, maximize x
        let lp = Lp {
            nvars: 2,
            objective: vec![q(1), q(0)],
            ub: vec![],
            eq: vec![(vec![q(1), q(1)], q(2)), (vec![q(1), q(-1)], q(0)), (vec![q(2), q(2)], q(4))],
        };
        assert_eq!(lp.solve(), LpOutcome::Optimal { value: q(1), point: vec![q(1), q(1)] });
    }
}
