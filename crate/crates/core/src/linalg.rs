//! Dense exact-rational linear algebra: just enough for coinvariants,
//! metric inversion and tensor contraction at desk scale.

use num_traits::{One, Zero};

use crate::rational::{rat_int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Permutation matrix sending basis vector j to basis vector `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += t;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        s += &self[(i, j)] * &v[j];
                    }
                }
                s
            })
            .collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn kron(&self, other: &RatMatrix) -> RatMatrix {
        let mut out = RatMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        if !other[(k, l)].is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] =
                                &self[(i, j)] * &other[(k, l)];
                        }
                    }
                }
            }
        }
        out
    }

    /// In-place row reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = RatMatrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(RatMatrix::from_fn(n, n, |i, j| aug[(i, n + j)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Presentation of the quotient of an ambient space by the row space of a
/// relation matrix. The chosen section is spanned by the non-pivot
/// coordinates, so `project` followed by `section` reduces any vector to a
/// canonical representative of its class.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    pub ambient_dim: usize,
    /// RREF rows spanning the relation space.
    basis: RatMatrix,
    pivots: Vec<usize>,
    /// Non-pivot coordinates; these index the quotient basis.
    pub free: Vec<usize>,
}

impl QuotientMap {
    /// Quotient of an `ambient_dim`-space by the span of `relations` (rows).
    pub fn new(ambient_dim: usize, relations: &RatMatrix) -> Self {
        assert_eq!(relations.cols, ambient_dim);
        let mut basis = relations.clone();
        let pivots = basis.rref();
        let rank = pivots.len();
        let basis = RatMatrix::from_fn(rank, ambient_dim, |i, j| basis[(i, j)].clone());
        let free = (0..ambient_dim).filter(|c| !pivots.contains(c)).collect();
        QuotientMap {
            ambient_dim,
            basis,
            pivots,
            free,
        }
    }

    pub fn quotient_dim(&self) -> usize {
        self.free.len()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of the class of `v` in the quotient basis.
    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.ambient_dim);
        let mut w = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for j in 0..self.ambient_dim {
                    if !self.basis[(r, j)].is_zero() {
                        let t = &w[j] - &f * &self.basis[(r, j)];
                        w[j] = t;
                    }
                }
            }
        }
        self.free.iter().map(|&c| w[c].clone()).collect()
    }

    /// Canonical ambient representative of a quotient vector.
    pub fn section(&self, q: &[Rat]) -> Vec<Rat> {
        assert_eq!(q.len(), self.free.len());
        let mut v = vec![Rat::zero(); self.ambient_dim];
        for (k, &c) in self.free.iter().enumerate() {
            v[c] = q[k].clone();
        }
        v
    }
}

/// A multilinear form on a product of coordinate spaces, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiForm {
    pub dims: Vec<usize>,
    pub data: Vec<Rat>,
}

impl MultiForm {
    pub fn zero(dims: Vec<usize>) -> Self {
        let size = dims.iter().product();
        MultiForm {
            dims,
            data: vec![Rat::zero(); size],
        }
    }

    pub fn scalar(value: Rat) -> Self {
        MultiForm {
            dims: Vec::new(),
            data: vec![value],
        }
    }

    pub fn index(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.dims.len());
        let mut flat = 0;
        for (k, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.dims[k]);
            flat = flat * self.dims[k] + i;
        }
        flat
    }

    pub fn get(&self, idx: &[usize]) -> &Rat {
        &self.data[self.index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Rat) {
        let flat = self.index(idx);
        self.data[flat] = v;
    }

    pub fn add_at(&mut self, idx: &[usize], v: &Rat) {
        let flat = self.index(idx);
        self.data[flat] += v;
    }

    pub fn scale(&mut self, f: &Rat) {
        for x in &mut self.data {
            *x *= f;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// Iterate all index tuples of the given shape in lexicographic order.
pub fn multi_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        let mut next = Vec::with_capacity(out.len() * d);
        for prefix in &out {
            for i in 0..d {
                let mut p = prefix.clone();
                p.push(i);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

pub fn rat_vec(ints: &[i64]) -> Vec<Rat> {
    ints.iter().map(|&n| rat_int(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let m = RatMatrix::from_rows(vec![
            rat_vec(&[1, 2, 3]),
            rat_vec(&[2, 4, 6]),
            rat_vec(&[1, 0, 1]),
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::from_rows(vec![rat_vec(&[2, 1]), rat_vec(&[1, 1])]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
        let sing = RatMatrix::from_rows(vec![rat_vec(&[1, 2]), rat_vec(&[2, 4])]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn quotient_by_sign_relation() {
        // Quotient of Q^2 by span(e0 + e1): one-dimensional, e0 ~ -e1.
        let rel = RatMatrix::from_rows(vec![rat_vec(&[1, 1])]);
        let q = QuotientMap::new(2, &rel);
        assert_eq!(q.quotient_dim(), 1);
        let a = q.project(&rat_vec(&[1, 0]));
        let b = q.project(&rat_vec(&[0, -1]));
        assert_eq!(a, b);
    }

    #[test]
    fn kron_dims() {
        let a = RatMatrix::identity(2);
        let b = RatMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!((k.rows, k.cols), (6, 6));
        assert_eq!(k, RatMatrix::identity(6));
    }

    #[test]
    fn quotient_projects_relations_to_zero() {
        let rel = RatMatrix::from_rows(vec![rat_vec(&[1, -1, 0]), rat_vec(&[0, 1, -1])]);
        let q = QuotientMap::new(3, &rel);
        assert_eq!(q.quotient_dim(), 1);
        assert_eq!(q.project(&rat_vec(&[1, 0, 0])), q.project(&rat_vec(&[0, 0, 1])));
        assert!(q.project(&rat_vec(&[1, -1, 0])).iter().all(|x| x.is_zero()));
    }
}
