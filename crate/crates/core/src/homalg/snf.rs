//! Smith normal form over the integers.
//!
//! Pivots are chosen by minimal absolute value, ties broken by the Markowitz
//! count `(row_nnz - 1) * (col_nnz - 1)` and then by position.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseIntMatrix;

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, each
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: SparseIntMatrix,
    pub d: SparseIntMatrix,
    pub v: SparseIntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let mut w = Work::new(m.to_dense(), true);
    w.run();
    let d = SparseIntMatrix::from_dense(&w.a);
    let u = SparseIntMatrix::from_dense(&w.u);
    let v = SparseIntMatrix::from_dense(&w.v);
    let snf = SmithForm { u, d, v };
    #[cfg(debug_assertions)]
    {
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "SNF postcondition violated");
    }
    snf
}

/// Nonzero invariant factors without tracking the transforms.
pub fn invariant_factors(m: &SparseIntMatrix) -> Vec<BigInt> {
    invariant_factors_dense(m.to_dense())
}

pub(crate) fn invariant_factors_dense(a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let mut w = Work::new(a, false);
    w.run();
    let n = w.rows.min(w.cols);
    (0..n).map(|i| w.a[i][i].clone()).filter(|x| !x.is_zero()).collect()
}

struct Work {
    rows: usize,
    cols: usize,
    a: Vec<Vec<BigInt>>,
    track: bool,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl Work {
    fn new(a: Vec<Vec<BigInt>>, track: bool) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let (u, v) = if track { (identity(rows), identity(cols)) } else { (vec![], vec![]) };
        Self { rows, cols, a, track, u, v }
    }

    #[allow(clippy::needless_range_loop)]
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut row_nnz = vec![0usize; self.rows];
        let mut col_nnz = vec![0usize; self.cols];
        for i in t..self.rows {
            for j in t..self.cols {
                if !self.a[i][j].is_zero() {
                    row_nnz[i] += 1;
                    col_nnz[j] += 1;
                }
            }
        }
        let mut best: Option<(BigInt, usize, usize, usize)> = None;
        for i in t..self.rows {
            if row_nnz[i] == 0 {
                continue;
            }
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let key = (x.abs(), (row_nnz[i] - 1) * (col_nnz[j] - 1), i, j);
                if best.as_ref().is_none_or(|b| (&key.0, key.1, key.2, key.3) < (&b.0, b.1, b.2, b.3)) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, _, i, j)| (i, j))
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        if self.track {
            self.u.swap(i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        for r in &mut self.a {
            r.swap(j, k);
        }
        if self.track {
            for r in &mut self.v {
                r.swap(j, k);
            }
        }
    }

    /// row_i += c * row_k
    fn add_row(&mut self, i: usize, k: usize, c: &BigInt) {
        for j in 0..self.cols {
            let x = &self.a[k][j] * c;
            self.a[i][j] += x;
        }
        if self.track {
            for j in 0..self.rows {
                let x = &self.u[k][j] * c;
                self.u[i][j] += x;
            }
        }
    }

    /// col_j += c * col_k
    fn add_col(&mut self, j: usize, k: usize, c: &BigInt) {
        for i in 0..self.rows {
            let x = &self.a[i][k] * c;
            self.a[i][j] += x;
        }
        if self.track {
            for i in 0..self.cols {
                let x = &self.v[i][k] * c;
                self.v[i][j] += x;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if self.track {
            for x in &mut self.u[i] {
                *x = -&*x;
            }
        }
    }

    fn run(&mut self) {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            loop {
                let Some((i, j)) = self.pivot(t) else { return };
                self.swap_rows(t, i);
                self.swap_cols(t, j);
                let p = self.a[t][t].clone();

                let mut cleared = true;
                for i in t + 1..self.rows {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = self.a[i][t].div_floor(&p);
                    self.add_row(i, t, &-q);
                    cleared &= self.a[i][t].is_zero();
                }
                for j in t + 1..self.cols {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = self.a[t][j].div_floor(&p);
                    self.add_col(j, t, &-q);
                    cleared &= self.a[t][j].is_zero();
                }
                if !cleared {
                    // a smaller remainder now exists; pick it as pivot
                    continue;
                }
                let bad_row =
                    (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad_row {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}
