//! Dense linear algebra over a field: row reduction, kernels, and
//! deterministic homology bases for induced maps.

use num_rational::BigRational;

use super::matrix::SparseIntMatrix;
use super::ring::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Field> DenseMatrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let data: Vec<K> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), nrows * ncols, "ragged rows");
        Self { rows: nrows, cols: ncols, data }
    }

    pub fn from_sparse(m: &SparseIntMatrix) -> Self {
        let mut d = Self::zeros(m.rows(), m.cols());
        for (i, j, v) in m.iter() {
            d.set(i, j, K::from_int(v));
        }
        d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).clone();
                    out.set(i, j, cur + a.clone() * b.clone());
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(K::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inverse();
            for j in c..self.cols {
                let x = self.get(r, j).clone() * inv.clone();
                self.set(r, j, x);
            }
            for i in 0..self.rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let f = self.get(i, c).clone();
                for j in c..self.cols {
                    let pv = self.get(r, j);
                    if pv.is_zero() {
                        continue;
                    }
                    let x = self.get(i, j).clone() - f.clone() * pv.clone();
                    self.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Null-space basis, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        (0..self.cols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![K::zero(); self.cols];
                v[free] = K::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, free).clone();
                }
                v
            })
            .collect()
    }

    /// Reduced basis of the column space.
    pub fn image_basis(&self) -> Vec<Vec<K>> {
        let mut t = self.transpose();
        let n = t.rref_in_place().len();
        (0..n).map(|i| t.row(i).to_vec()).collect()
    }
}

/// Rank over Q of an integer matrix by rational elimination.
pub fn rank_over_q(m: &SparseIntMatrix) -> usize {
    DenseMatrix::<BigRational>::from_sparse(m).rank()
}

/// A growing set of vectors kept in echelon form, for span membership.
#[derive(Clone, Debug)]
pub struct EchelonSpan<K> {
    // (pivot index, vector with 1 at pivot)
    basis: Vec<(usize, Vec<K>)>,
}

impl<K: Field> EchelonSpan<K> {
    pub fn new() -> Self {
        Self { basis: vec![] }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    fn reduce(&self, v: &[K]) -> Vec<K> {
        let mut w = v.to_vec();
        for (p, b) in &self.basis {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[K]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if independent; returns whether it was added.
    pub fn insert(&mut self, v: &[K]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let inv = w[p].inverse();
        let w: Vec<K> = w.into_iter().map(|x| x * inv.clone()).collect();
        for (_, b) in &mut self.basis {
            if b[p].is_zero() {
                continue;
            }
            let f = b[p].clone();
            for (x, y) in b.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.basis.push((p, w));
        true
    }
}

impl<K: Field> Default for EchelonSpan<K> {
    fn default() -> Self {
        Self::new()
    }
}

/// Homology of `C^{h-1} --d_in--> C^h --d_out--> C^{h+1}` at `C^h`, with a
/// fixed basis of cycle representatives: kernel vectors (in the order of
/// free columns of the reduced `d_out`) that are independent modulo the
/// image of `d_in`.
#[derive(Clone, Debug)]
pub struct HomologyBasis<K> {
    dim_chain: usize,
    n_boundary: usize,
    reps: Vec<Vec<K>>,
    // rows of E with E·[boundaries | reps] = [I; 0]
    solver: DenseMatrix<K>,
}

impl<K: Field> HomologyBasis<K> {
    /// `d_out` is `dim C^{h+1} x dim C^h`, `d_in` is `dim C^h x dim C^{h-1}`.
    pub fn new(dim_chain: usize, d_out: &DenseMatrix<K>, d_in: &DenseMatrix<K>) -> Self {
        assert_eq!(d_out.cols(), dim_chain);
        assert_eq!(d_in.rows(), dim_chain);
        let boundaries = if d_in.cols() == 0 { vec![] } else { d_in.image_basis() };
        let cycles =
            if d_out.rows() == 0 { DenseMatrix::<K>::identity(dim_chain).to_rows() } else { d_out.kernel_basis() };

        let mut span = EchelonSpan::new();
        for b in &boundaries {
            span.insert(b);
        }
        let reps: Vec<Vec<K>> = cycles.into_iter().filter(|z| span.insert(z)).collect();

        let m = boundaries.len() + reps.len();
        let mut aug = DenseMatrix::zeros(dim_chain, m + dim_chain);
        for (j, v) in boundaries.iter().chain(&reps).enumerate() {
            for (i, x) in v.iter().enumerate() {
                aug.set(i, j, x.clone());
            }
        }
        for i in 0..dim_chain {
            aug.set(i, m + i, K::one());
        }
        let pivots = aug.rref_in_place();
        debug_assert!(pivots.iter().take(m).copied().eq(0..m));
        let mut solver = DenseMatrix::zeros(m, dim_chain);
        for i in 0..m {
            for j in 0..dim_chain {
                solver.set(i, j, aug.get(i, m + j).clone());
            }
        }
        Self { dim_chain, n_boundary: boundaries.len(), reps, solver }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn representatives(&self) -> &[Vec<K>] {
        &self.reps
    }

    /// Coordinates of the class of a cycle `z` in the representative basis.
    pub fn coordinates(&self, z: &[K]) -> Vec<K> {
        assert_eq!(z.len(), self.dim_chain);
        let x = self.solver.apply(z);
        x[self.n_boundary..].to_vec()
    }
}
