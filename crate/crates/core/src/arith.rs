//! Ring contexts, dense matrices and elimination with unit pivots.
//!
//! Every ring in this crate (the residue field F_q, a finite local ring R,
//! its Galois extension S) is a runtime context implementing [`RingOps`];
//! elements are plain values that only make sense next to their context.
//! The matrix routines here are written once against that trait.

use std::fmt::Debug;

use num_bigint::BigUint;

/// Arithmetic context of a finite commutative local ring.
///
/// For fields every non-zero element is a unit.
pub trait RingOps {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Image of an integer under `Z -> R`.
    fn from_int(&self, n: i64) -> Self::Elem;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    /// Order of the unit group, used for inversion by exponentiation.
    fn unit_group_order(&self) -> BigUint;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if !self.is_unit(a) {
            return None;
        }
        let e = self.unit_group_order() - 1u32;
        Some(self.pow(a, &e))
    }

    /// `acc += a * b`
    fn mul_acc(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let p = self.mul(a, b);
        *acc = self.add(acc, &p);
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Mat<E> {
    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Mat { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn zeros<R: RingOps<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: RingOps<Elem = E>>(ring: &R, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<E>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Mat { rows: n, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn push_row(&mut self, row: Vec<E>) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Mat::from_rows(idx.iter().map(|&i| self.row(i).to_vec()).collect(), self.cols)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Mat::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn map<F, T: Clone>(&self, f: F) -> Mat<T>
    where
        F: FnMut(&E) -> T,
    {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }
}

impl<E> std::ops::Index<(usize, usize)> for Mat<E> {
    type Output = E;
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Mat<E> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

pub fn mat_mul<R: RingOps>(ring: &R, a: &Mat<R::Elem>, b: &Mat<R::Elem>) -> Mat<R::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product dimension mismatch");
    let mut out = Mat::zeros(ring, a.rows, b.cols);
    for i in 0..a.rows {
        for l in 0..a.cols {
            let x = &a[(i, l)];
            if ring.is_zero(x) {
                continue;
            }
            for j in 0..b.cols {
                let (acc, y) = (&mut out.data[i * b.cols + j], &b.data[l * b.cols + j]);
                ring.mul_acc(acc, x, y);
            }
        }
    }
    out
}

/// Row vector times matrix.
pub fn vec_mat<R: RingOps>(ring: &R, v: &[R::Elem], m: &Mat<R::Elem>) -> Vec<R::Elem> {
    assert_eq!(v.len(), m.rows, "vector-matrix dimension mismatch");
    let mut out = vec![ring.zero(); m.cols];
    for (l, x) in v.iter().enumerate() {
        if ring.is_zero(x) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            ring.mul_acc(o, x, &m[(l, j)]);
        }
    }
    out
}

pub fn is_zero_vec<R: RingOps>(ring: &R, v: &[R::Elem]) -> bool {
    v.iter().all(|x| ring.is_zero(x))
}

pub fn sub_vec<R: RingOps>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().zip(b).map(|(x, y)| ring.sub(x, y)).collect()
}

pub fn add_vec<R: RingOps>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

pub fn scale_vec<R: RingOps>(ring: &R, c: &R::Elem, v: &[R::Elem]) -> Vec<R::Elem> {
    v.iter().map(|x| ring.mul(c, x)).collect()
}

fn row_axpy<R: RingOps>(ring: &R, m: &mut Mat<R::Elem>, target: usize, c: &R::Elem, src: usize) {
    // row[target] -= c * row[src]
    for j in 0..m.cols {
        let t = ring.mul(c, &m[(src, j)]);
        let v = ring.sub(&m[(target, j)], &t);
        m[(target, j)] = v;
    }
}

fn scale_row<R: RingOps>(ring: &R, m: &mut Mat<R::Elem>, i: usize, c: &R::Elem) {
    for x in m.row_mut(i) {
        *x = ring.mul(c, x);
    }
}

/// Factorization `A = P * T * Q` of an `s x n` matrix over a local ring.
///
/// `T = [[T1, T2], [0, T3]]` with `T1` upper uni-triangular of size `rank`
/// and every entry of `T3` a non-unit. `Q` is the column permutation with
/// `(T*Q)[:, col_perm[j]] = T[:, j]`.
#[derive(Clone, Debug)]
pub struct UnitPivotFactor<E> {
    pub p: Mat<E>,
    pub p_inv: Mat<E>,
    pub t: Mat<E>,
    pub col_perm: Vec<usize>,
    pub rank: usize,
}

impl<E: Clone> UnitPivotFactor<E> {
    /// Columns of the original matrix holding a pivot, in pivot order.
    pub fn pivot_cols(&self) -> &[usize] {
        &self.col_perm[..self.rank]
    }

    /// The lower-right block `T3`.
    pub fn t3(&self) -> Mat<E> {
        let rows: Vec<usize> = (self.rank..self.t.rows()).collect();
        let cols: Vec<usize> = (self.rank..self.t.cols()).collect();
        self.t.select_rows(&rows).select_cols(&cols)
    }

    pub fn q_matrix<R: RingOps<Elem = E>>(&self, ring: &R) -> Mat<E> {
        let n = self.col_perm.len();
        let mut q = Mat::zeros(ring, n, n);
        for (j, &c) in self.col_perm.iter().enumerate() {
            q[(j, c)] = ring.one();
        }
        q
    }

    /// `T * Q`: the reduced rows in the original column order.
    pub fn reduced_rows(&self) -> Mat<E> {
        let n = self.col_perm.len();
        let mut inv = vec![0; n];
        for (j, &c) in self.col_perm.iter().enumerate() {
            inv[c] = j;
        }
        self.t.select_cols(&inv)
    }
}

/// Row reduction with unit pivots, scanning columns left to right.
///
/// A column without a unit entry among the unreduced rows is skipped; after
/// the scan the unreduced rows only hold non-units in the skipped columns.
pub fn unit_pivot_factor<R: RingOps>(ring: &R, a: &Mat<R::Elem>) -> UnitPivotFactor<R::Elem> {
    let (s, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut p = Mat::identity(ring, s);
    let mut p_inv = Mat::identity(ring, s);
    let mut pivots = Vec::new();
    let mut skipped = Vec::new();
    let mut h = 0;
    for k in 0..n {
        if h == s {
            skipped.push(k);
            continue;
        }
        let Some(l) = (h..s).find(|&l| ring.is_unit(&w[(l, k)])) else {
            skipped.push(k);
            continue;
        };
        w.swap_rows(h, l);
        p_inv.swap_rows(h, l);
        p.swap_cols(h, l);
        let lead = w[(h, k)].clone();
        let u = ring.inv(&lead).expect("pivot is a unit");
        scale_row(ring, &mut w, h, &u);
        scale_row(ring, &mut p_inv, h, &u);
        for i in 0..s {
            p[(i, h)] = ring.mul(&p[(i, h)], &lead);
        }
        for i in h + 1..s {
            let c = w[(i, k)].clone();
            if ring.is_zero(&c) {
                continue;
            }
            row_axpy(ring, &mut w, i, &c, h);
            row_axpy(ring, &mut p_inv, i, &c, h);
            for r in 0..s {
                let t = ring.mul(&c, &p[(r, i)]);
                p[(r, h)] = ring.add(&p[(r, h)], &t);
            }
        }
        pivots.push(k);
        h += 1;
    }
    let rank = pivots.len();
    let mut col_perm = pivots;
    col_perm.extend(skipped);
    let t = w.select_cols(&col_perm);
    UnitPivotFactor { p, p_inv, t, col_perm, rank }
}

/// Rank of the row space; over a field this is the usual rank, over a
/// local ring it is the free rank of the row module.
pub fn pivot_rank<R: RingOps>(ring: &R, a: &Mat<R::Elem>) -> usize {
    // cheaper than the full factorization: no P bookkeeping
    let (s, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut h = 0;
    for k in 0..n {
        if h == s {
            break;
        }
        let Some(l) = (h..s).find(|&l| ring.is_unit(&w[(l, k)])) else {
            continue;
        };
        w.swap_rows(h, l);
        let u = ring.inv(&w[(h, k)]).expect("pivot is a unit");
        scale_row(ring, &mut w, h, &u);
        for i in h + 1..s {
            let c = w[(i, k)].clone();
            if !ring.is_zero(&c) {
                row_axpy(ring, &mut w, i, &c, h);
            }
        }
        h += 1;
    }
    h
}

/// Inverse of a square matrix, or `None` when it is singular.
pub fn invert<R: RingOps>(ring: &R, a: &Mat<R::Elem>) -> Option<Mat<R::Elem>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of a non-square matrix");
    let mut w = a.clone();
    let mut inv = Mat::identity(ring, n);
    for k in 0..n {
        let l = (k..n).find(|&l| ring.is_unit(&w[(l, k)]))?;
        w.swap_rows(k, l);
        inv.swap_rows(k, l);
        let u = ring.inv(&w[(k, k)])?;
        scale_row(ring, &mut w, k, &u);
        scale_row(ring, &mut inv, k, &u);
        for i in 0..n {
            if i == k {
                continue;
            }
            let c = w[(i, k)].clone();
            if ring.is_zero(&c) {
                continue;
            }
            row_axpy(ring, &mut w, i, &c, k);
            row_axpy(ring, &mut inv, i, &c, k);
        }
    }
    Some(inv)
}

/// Column transform `T` (invertible, `n x n`) with `basis * T = [I_r | 0]`.
///
/// `basis` must have linearly independent rows (unit pivots in every row);
/// returns `None` otherwise.
pub fn complement_transform<R: RingOps>(ring: &R, basis: &Mat<R::Elem>) -> Option<Mat<R::Elem>> {
    let (r, n) = (basis.rows(), basis.cols());
    // column operations on `basis` are row operations on its transpose
    let mut w = basis.transpose();
    let mut t = Mat::identity(ring, n);
    for i in 0..r {
        let l = (i..n).find(|&l| ring.is_unit(&w[(l, i)]))?;
        w.swap_rows(i, l);
        t.swap_cols(i, l);
        let u = ring.inv(&w[(i, i)])?;
        scale_row(ring, &mut w, i, &u);
        for x in 0..n {
            t[(x, i)] = ring.mul(&t[(x, i)], &u);
        }
        for j in 0..n {
            if j == i {
                continue;
            }
            let c = w[(j, i)].clone();
            if ring.is_zero(&c) {
                continue;
            }
            row_axpy(ring, &mut w, j, &c, i);
            for x in 0..n {
                let v = ring.mul(&c, &t[(x, i)]);
                t[(x, j)] = ring.sub(&t[(x, j)], &v);
            }
        }
    }
    Some(t)
}

/// Solves `x * U = y` for `x` where `U` (`r x r`) is upper uni-triangular.
pub fn solve_upper_unitriangular_left<R: RingOps>(
    ring: &R,
    u: &Mat<R::Elem>,
    y: &[R::Elem],
) -> Vec<R::Elem> {
    let r = u.rows();
    let mut x: Vec<R::Elem> = vec![ring.zero(); r];
    for j in 0..r {
        // y_j = x_j + sum_{i<j} x_i u_ij
        let mut acc = y[j].clone();
        for i in 0..j {
            let t = ring.mul(&x[i], &u[(i, j)]);
            acc = ring.sub(&acc, &t);
        }
        x[j] = acc;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::LocalRing;

    #[test]
    fn factorization_reassembles() {
        let z4 = LocalRing::zmod(2, 2).unwrap();
        let a = Mat::from_rows(
            vec![
                vec![z4.from_int(2), z4.from_int(1), z4.from_int(3)],
                vec![z4.from_int(0), z4.from_int(2), z4.from_int(2)],
                vec![z4.from_int(1), z4.from_int(1), z4.from_int(0)],
            ],
            3,
        );
        let f = unit_pivot_factor(&z4, &a);
        let q = f.q_matrix(&z4);
        let back = mat_mul(&z4, &mat_mul(&z4, &f.p, &f.t), &q);
        assert_eq!(back, a);
        assert_eq!(mat_mul(&z4, &f.p, &f.p_inv), Mat::identity(&z4, 3));
        for i in 0..f.rank {
            assert_eq!(f.t[(i, i)], z4.one());
        }
    }

    #[test]
    fn complement_transform_gives_identity_block() {
        let z9 = LocalRing::zmod(3, 2).unwrap();
        let b = Mat::from_rows(
            vec![
                vec![z9.from_int(3), z9.from_int(1), z9.from_int(4)],
                vec![z9.from_int(2), z9.from_int(6), z9.from_int(0)],
            ],
            3,
        );
        let t = complement_transform(&z9, &b).unwrap();
        let bt = mat_mul(&z9, &b, &t);
        let mut want = Mat::zeros(&z9, 2, 3);
        want[(0, 0)] = z9.one();
        want[(1, 1)] = z9.one();
        assert_eq!(bt, want);
        assert!(invert(&z9, &t).is_some());
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let z4 = LocalRing::zmod(2, 2).unwrap();
        let a = Mat::from_rows(vec![vec![z4.from_int(2), z4.from_int(0)], vec![z4.from_int(0), z4.one()]], 2);
        assert!(invert(&z4, &a).is_none());
    }
}
