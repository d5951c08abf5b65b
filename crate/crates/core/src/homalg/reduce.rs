//! Homology of a cochain complex by Gaussian elimination.
//!
//! Whenever `d^h` has a unit entry `d(b) = u·a + ...`, the generators `b`
//! and `a` can be cancelled: the complex is homotopy equivalent to the one
//! with `b`, `a` removed and `d^h` replaced by its Schur complement, while
//! `d^{h-1}` and `d^{h+1}` are just restricted. Repeating until no unit
//! entries remain leaves a much smaller complex with the same homology.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::hash::BuildHasherDefault;

use num_bigint::BigInt;
use num_traits::Zero;

use super::group::AbelianGroup;
use super::ring::{Coefficient, Field};
use super::snf::invariant_factors_dense;

type DetMap<K, V> = HashMap<K, V, BuildHasherDefault<DefaultHasher>>;

/// Consecutive cochain groups `C^0 -> C^1 -> ... -> C^{n-1}`;
/// `diffs[k]` holds triplets `(row in C^{k+1}, col in C^k, value)`.
#[derive(Clone, Debug)]
pub struct CochainSlice<R> {
    pub dims: Vec<usize>,
    pub diffs: Vec<Vec<(usize, usize, R)>>,
}

impl<R: Coefficient> CochainSlice<R> {
    pub fn new(dims: Vec<usize>, diffs: Vec<Vec<(usize, usize, R)>>) -> Self {
        assert_eq!(diffs.len() + 1, dims.len().max(1), "need one differential between each pair of degrees");
        Self { dims, diffs }
    }

    /// Cancel unit entries until none remain.
    pub fn eliminate_units(self) -> Self {
        let Some(&first) = self.dims.first() else { return self };
        let mut e = Eliminator::new(first);
        for (k, t) in self.diffs.into_iter().enumerate() {
            e.push(self.dims[k + 1], t);
        }
        e.finish()
    }
}

/// Degree-by-degree Gaussian elimination. Each pushed differential is
/// reduced as soon as it arrives, so only the (usually tiny) remainders of
/// earlier differentials are kept.
#[derive(Clone, Debug)]
pub struct Eliminator<R> {
    dims: Vec<usize>,
    alive: Vec<Vec<bool>>,
    remainders: Vec<Vec<(usize, usize, R)>>,
}

impl<R: Coefficient> Eliminator<R> {
    pub fn new(dim0: usize) -> Self {
        Self { dims: vec![dim0], alive: vec![vec![true; dim0]], remainders: vec![] }
    }

    pub fn degrees(&self) -> usize {
        self.dims.len()
    }

    /// Append `C^{k+1}` of dimension `dim_next` with the differential
    /// `C^k -> C^{k+1}` as `(row, col, value)` triplets.
    pub fn push(&mut self, dim_next: usize, triplets: Vec<(usize, usize, R)>) {
        let k = self.dims.len() - 1;
        let mut m = ElimMatrix::from_triplets(dim_next, self.dims[k], triplets);
        for (c, &alive) in self.alive[k].iter().enumerate() {
            if !alive {
                m.drop_col(c);
            }
        }
        let (removed_cols, removed_rows) = m.eliminate();
        for &c in &removed_cols {
            self.alive[k][c] = false;
        }
        if k > 0 && !removed_cols.is_empty() {
            let alive = &self.alive[k];
            self.remainders[k - 1].retain(|(r, _, _)| alive[*r]);
        }
        let mut next = vec![true; dim_next];
        for &r in &removed_rows {
            next[r] = false;
        }
        self.alive.push(next);
        self.remainders.push(m.into_triplets());
        self.dims.push(dim_next);
    }

    /// The reduced complex, reindexed to the surviving generators.
    pub fn finish(self) -> CochainSlice<R> {
        let index: Vec<Vec<Option<usize>>> = self
            .alive
            .iter()
            .map(|a| {
                let mut next = 0;
                a.iter()
                    .map(|&x| {
                        x.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let dims = self.alive.iter().map(|a| a.iter().filter(|&&x| x).count()).collect();
        let diffs = self
            .remainders
            .into_iter()
            .enumerate()
            .map(|(k, t)| {
                let mut t: Vec<_> = t
                    .into_iter()
                    .map(|(r, c, v)| (index[k + 1][r].expect("live row"), index[k][c].expect("live col"), v))
                    .collect();
                t.sort_by_key(|&(r, c, _)| (c, r));
                t
            })
            .collect();
        CochainSlice { dims, diffs }
    }
}

impl CochainSlice<BigInt> {
    /// Integral cohomology in each degree: free rank plus invariant factors.
    pub fn integral_homology(self) -> Vec<AbelianGroup> {
        let reduced = self.eliminate_units();
        let n = reduced.dims.len();
        let factors: Vec<Vec<BigInt>> = reduced
            .diffs
            .iter()
            .enumerate()
            .map(|(k, t)| {
                if t.is_empty() {
                    return vec![];
                }
                let mut dense = vec![vec![BigInt::zero(); reduced.dims[k]]; reduced.dims[k + 1]];
                for (r, c, v) in t {
                    dense[*r][*c] = v.clone();
                }
                invariant_factors_dense(dense)
            })
            .collect();
        (0..n)
            .map(|k| {
                let out_rank = factors.get(k).map_or(0, |f| f.len());
                let in_factors: &[BigInt] = if k > 0 { &factors[k - 1] } else { &[] };
                let free = reduced.dims[k] - out_rank - in_factors.len();
                let torsion = in_factors.iter().filter(|x| *x > &BigInt::from(1)).cloned().collect();
                AbelianGroup::new(free, torsion)
            })
            .collect()
    }
}

impl<K: Field> CochainSlice<K> {
    /// Cohomology dimensions over a field. Every nonzero entry is a unit,
    /// so elimination leaves zero differentials.
    pub fn field_dims(self) -> Vec<usize> {
        let reduced = self.eliminate_units();
        debug_assert!(reduced.diffs.iter().all(|t| t.is_empty()));
        reduced.dims
    }
}

/// Sparse matrix supporting in-place pivot elimination.
struct ElimMatrix<R> {
    rows: Vec<DetMap<usize, R>>,
    cols: Vec<BTreeSet<usize>>,
}

impl<R: Coefficient> ElimMatrix<R> {
    fn from_triplets(nrows: usize, ncols: usize, t: Vec<(usize, usize, R)>) -> Self {
        let mut rows: Vec<DetMap<usize, R>> = (0..nrows).map(|_| DetMap::default()).collect();
        let mut cols = vec![BTreeSet::new(); ncols];
        for (r, c, v) in t {
            let e = rows[r].entry(c).or_insert_with(R::zero);
            *e = e.clone() + v;
            if e.is_zero() {
                rows[r].remove(&c);
                cols[c].remove(&r);
            } else {
                cols[c].insert(r);
            }
        }
        Self { rows, cols }
    }

    fn drop_row(&mut self, r: usize) {
        for (c, _) in std::mem::take(&mut self.rows[r]) {
            self.cols[c].remove(&r);
        }
    }

    fn drop_col(&mut self, c: usize) {
        for r in std::mem::take(&mut self.cols[c]) {
            self.rows[r].remove(&c);
        }
    }

    /// Returns (removed columns, removed rows).
    fn eliminate(&mut self) -> (Vec<usize>, Vec<usize>) {
        let mut removed_cols = vec![];
        let mut removed_rows = vec![];
        loop {
            let mut progress = false;
            for c in 0..self.cols.len() {
                let col_len = self.cols[c].len();
                if col_len == 0 {
                    continue;
                }
                let best = self.cols[c]
                    .iter()
                    .filter(|&&r| self.rows[r][&c].is_unit())
                    .map(|&r| ((self.rows[r].len() - 1) * (col_len - 1), r))
                    .min();
                if let Some((_, r)) = best {
                    self.pivot(r, c);
                    removed_cols.push(c);
                    removed_rows.push(r);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        (removed_cols, removed_rows)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][&c].unit_inverse();
        let pivot_row: Vec<(usize, R)> =
            self.rows[r].iter().filter(|(&k, _)| k != c).map(|(&k, v)| (k, v.clone())).collect();
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&x| x != r).collect();
        for r2 in others {
            let f = self.rows[r2].remove(&c).expect("column index in sync") * inv.clone();
            for (c2, v) in &pivot_row {
                let cur = self.rows[r2].remove(c2).unwrap_or_else(R::zero);
                let new = cur - f.clone() * v.clone();
                if new.is_zero() {
                    self.cols[*c2].remove(&r2);
                } else {
                    self.rows[r2].insert(*c2, new);
                    self.cols[*c2].insert(r2);
                }
            }
        }
        self.drop_row(r);
        self.cols[c].clear();
    }

    fn into_triplets(self) -> Vec<(usize, usize, R)> {
        self.rows.into_iter().enumerate().flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c, v))).collect()
    }
}
