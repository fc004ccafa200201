//! Dense exact linear algebra over `Q`: row reduction, kernels, solving,
//! determinants and rational subspaces.

use serde::Serialize;

use crate::rational::Q;

pub type Vector = Vec<Q>;
pub type Matrix = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn add_scaled(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn scale(v: &[Q], c: &Q) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn transpose(m: &[Vec<Q>], cols: usize) -> Matrix {
    let mut t = zeros(cols, m.len());
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            t[j][i] = x.clone();
        }
    }
    t
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>], b_cols: usize) -> Matrix {
    let mut out = zeros(a.len(), b_cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            add_scaled(&mut out[i], x, &b[k]);
        }
    }
    out
}

pub fn mat_vec(a: &[Vec<Q>], v: &[Q]) -> Vector {
    a.iter().map(|row| dot(row, v)).collect()
}

/// Reduced row echelon form. Returns the reduced nonzero rows and pivot columns.
pub fn rref(m: &[Vec<Q>], cols: usize) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -&row[c];
                add_scaled(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank(m: &[Vec<Q>], cols: usize) -> usize {
    rref(m, cols).1.len()
}

/// Basis of `{x : m x = 0}`, one vector per free column.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vector> {
    let (r, pivots) = rref(m, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Q::zero(); cols];
        v[f] = Q::one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -&row[f];
        }
        basis.push(v);
    }
    basis
}

/// Basic solution of `m x = b` (free variables set to zero), or `None`.
pub fn solve(m: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vector> {
    let aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[cols].clone();
    }
    Some(x)
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        let pivot_row = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = -(&row[c] * &inv);
                add_scaled(row, &f, &pivot_row);
            }
        }
    }
    d
}

/// Gram determinant of the given vectors, i.e. the squared volume of the
/// parallelotope they span.
pub fn gram_det(vectors: &[Vector]) -> Q {
    let g: Matrix = vectors.iter().map(|u| vectors.iter().map(|v| dot(u, v)).collect()).collect();
    det(&g)
}

/// A subspace of `Q^n`, stored by its reduced row echelon basis so that equal
/// subspaces have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinSubspace {
    ambient: usize,
    basis: Vec<Vector>,
    #[serde(skip)]
    pivots: Vec<usize>,
}

impl LinSubspace {
    pub fn span(ambient: usize, vectors: &[Vector]) -> LinSubspace {
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
        }
        let (basis, pivots) = rref(vectors, ambient);
        LinSubspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> LinSubspace {
        LinSubspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> LinSubspace {
        LinSubspace::span(ambient, &identity(ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Reduces `v` against the echelon basis; the result is zero iff `v` lies in the span.
    pub fn residual(&self, v: &[Q]) -> Vector {
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -&r[p];
                add_scaled(&mut r, &f, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.residual(v).iter().all(Q::is_zero)
    }

    pub fn contains_subspace(&self, other: &LinSubspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Linear equations cutting out the subspace: rows `a` with `a·x = 0`.
    pub fn equations(&self) -> Vec<Vector> {
        nullspace(&self.basis, self.ambient)
    }

    /// Image under coordinate restriction to `coords` (in the given order).
    pub fn restrict(&self, coords: &[usize]) -> LinSubspace {
        let vs: Vec<Vector> = self.basis.iter().map(|v| coords.iter().map(|&c| v[c].clone()).collect()).collect();
        LinSubspace::span(coords.len(), &vs)
    }

    /// The subspace `{l in self : l_j = 0 for j in zero_coords}`.
    pub fn with_zero_coords(&self, zero_coords: &[usize]) -> LinSubspace {
        if zero_coords.is_empty() || self.basis.is_empty() {
            return self.clone();
        }
        // coefficients c with sum c_k b_k vanishing on zero_coords
        let m: Matrix = zero_coords.iter().map(|&j| self.basis.iter().map(|b| b[j].clone()).collect()).collect();
        let ker = nullspace(&m, self.basis.len());
        let vs: Vec<Vector> = ker
            .iter()
            .map(|c| {
                let mut v = vec![Q::zero(); self.ambient];
                for (ck, b) in c.iter().zip(&self.basis) {
                    add_scaled(&mut v, ck, b);
                }
                v
            })
            .collect();
        LinSubspace::span(self.ambient, &vs)
    }

    /// Rank of the coordinate projection onto `coords`.
    pub fn projection_rank(&self, coords: &[usize]) -> usize {
        let m: Matrix = self.basis.iter().map(|v| coords.iter().map(|&c| v[c].clone()).collect()).collect();
        rank(&m, coords.len())
    }

    /// Basic solution `l` in the subspace with prescribed coordinate values,
    /// or `None` when no such element exists.
    pub fn element_with(&self, coords: &[usize], values: &[Q]) -> Option<Vector> {
        let m: Matrix = coords.iter().map(|&j| self.basis.iter().map(|b| b[j].clone()).collect()).collect();
        let c = solve(&m, values, self.basis.len())?;
        let mut v = vec![Q::zero(); self.ambient];
        for (ck, b) in c.iter().zip(&self.basis) {
            add_scaled(&mut v, ck, b);
        }
        Some(v)
    }

    pub fn direct_sum(&self, other: &LinSubspace) -> LinSubspace {
        let n = self.ambient + other.ambient;
        let mut vs = Vec::new();
        for b in &self.basis {
            let mut v = b.clone();
            v.extend(std::iter::repeat(Q::zero()).take(other.ambient));
            vs.push(v);
        }
        for b in &other.basis {
            let mut v = vec![Q::zero(); self.ambient];
            v.extend(b.iter().cloned());
            vs.push(v);
        }
        LinSubspace::span(n, &vs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn qv(v: &[i64]) -> Vector {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn nullspace_of_rank_one_row() {
        let m = vec![qv(&[1, 1, -1])];
        let ker = nullspace(&m, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(mat_vec(&m, v).iter().all(Q::is_zero));
        }
    }

    #[test]
    fn determinant_and_solve() {
        let m = vec![qv(&[2, 1]), qv(&[1, 3])];
        assert_eq!(det(&m), q(5));
        let x = solve(&m, &qv(&[3, 4]), 2).unwrap();
        assert_eq!(x, qv(&[1, 1]));
        let sing = vec![qv(&[1, 2]), qv(&[2, 4])];
        assert!(solve(&sing, &qv(&[1, 0]), 2).is_none());
        assert!(det(&sing).is_zero());
    }

    #[test]
    fn subspace_canonical_form() {
        let a = LinSubspace::span(3, &[qv(&[1, -1, 0]), qv(&[1, 0, 1])]);
        let b = LinSubspace::span(3, &[qv(&[2, -1, 1]), qv(&[0, 1, 1])]);
        assert_eq!(a, b);
        assert!(a.contains(&qv(&[3, -1, 2])));
        assert!(!a.contains(&qv(&[1, 0, 0])));
        let z = a.with_zero_coords(&[0]);
        assert_eq!(z.dim(), 1);
        assert!(z.contains(&qv(&[0, 1, 1])));
        assert_eq!(a.equations().len(), 1);
    }

    #[test]
    fn element_with_prescribed_coordinates() {
        let l = LinSubspace::span(3, &[qv(&[1, -1, 0]), qv(&[0, 1, -1])]);
        let v = l.element_with(&[0, 2], &[q(1), q(0)]).unwrap();
        assert_eq!(v, qv(&[1, -1, 0]));
        assert!(l.element_with(&[0, 1, 2], &[q(1), q(0), q(0)]).is_none());
    }
}
