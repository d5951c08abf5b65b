//! Rank bound from tensoring reduced homology with the Koszul complex of the
//! basepoint operators.
//!
//! For a vector space `V` with commuting square-zero operators
//! `x_1, ..., x_s`, the complex is `V ⊗ Λ^k Q^s` with
//! `d(v ⊗ e_S) = Σ_{i ∉ S} x_i v ⊗ e_i ∧ e_S`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homalg::field::DenseMatrix;
use crate::homalg::{BigradedGroup, Coeff};
use crate::khovanov::{khr, module_action, ModuleAction};
use crate::linkdiag::LinkDiagram;

/// The exterior-algebra complex on `vars` generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulComplex {
    pub vars: usize,
    /// Basis of `Λ^k` as bitmasks, increasing.
    terms: Vec<Vec<u32>>,
}

impl KoszulComplex {
    pub fn new(vars: usize) -> Self {
        assert!(vars < 32, "too many Koszul variables");
        let mut terms = vec![vec![]; vars + 1];
        for s in 0u32..(1 << vars) {
            terms[s.count_ones() as usize].push(s);
        }
        Self { vars, terms }
    }

    pub fn length(&self) -> usize {
        self.vars
    }

    pub fn rank(&self, k: usize) -> usize {
        self.terms.get(k).map_or(0, |t| t.len())
    }

    /// `e_i ∧ e_S` as `(sign, S ∪ {i})`, or `None` when `i ∈ S`.
    fn wedge(i: usize, s: u32) -> Option<(i64, u32)> {
        if s >> i & 1 == 1 {
            return None;
        }
        let before = (s & ((1u32 << i) - 1)).count_ones();
        Some((if before.is_multiple_of(2) { 1 } else { -1 }, s | (1 << i)))
    }

    /// `d_k: V ⊗ Λ^k -> V ⊗ Λ^{k+1}` for operators `ops` on `V = Q^n`, as a
    /// dense matrix with the `V` index varying fastest.
    pub fn tensor_differential(
        &self,
        n: usize,
        ops: &[DenseMatrix<BigRational>],
        k: usize,
    ) -> DenseMatrix<BigRational> {
        assert_eq!(ops.len(), self.vars);
        let src = &self.terms[k];
        let dst = self.terms.get(k + 1).cloned().unwrap_or_default();
        let pos: BTreeMap<u32, usize> = dst.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut m = DenseMatrix::<BigRational>::zeros(n * dst.len(), n * src.len());
        for (j, &s) in src.iter().enumerate() {
            for (i, op) in ops.iter().enumerate() {
                let Some((sign, t)) = Self::wedge(i, s) else { continue };
                let ti = pos[&t];
                let sign = BigRational::from_integer(BigInt::from(sign));
                for r in 0..n {
                    for c in 0..n {
                        let v = op.get(r, c);
                        if !v.is_zero() {
                            let cur = m.get(ti * n + r, j * n + c).clone();
                            m.set(ti * n + r, j * n + c, cur + sign.clone() * v.clone());
                        }
                    }
                }
            }
        }
        m
    }

    /// Total dimension of the cohomology of `V ⊗ K` for `dim V = n`.
    pub fn tensor_cohomology_rank(&self, n: usize, ops: &[DenseMatrix<BigRational>]) -> usize {
        let total: usize = (0..=self.vars).map(|k| n * self.rank(k)).sum();
        let ranks: usize = (0..self.vars).map(|k| self.tensor_differential(n, ops, k).rank()).sum();
        total - 2 * ranks
    }
}

/// `2 dim V - 2 rank x_1`: the two-term complex `V --x_1--> V`.
pub fn two_term_rank(dim_v: usize, rank_x1: usize) -> usize {
    2 * dim_v - 2 * rank_x1
}

/// Rank over `Q` of `H^*(Khr ⊗ K(x_1, ..., x_{r-1}))`.
pub fn koszul_tensor_rank(action: &ModuleAction, khr_q: &BigradedGroup) -> Result<usize> {
    let dim = action.dim();
    if khr_q.total_rank() != dim {
        return Err(Error::DimensionMismatch(format!(
            "action acts on a space of dimension {dim}, reduced homology has rank {}",
            khr_q.total_rank()
        )));
    }
    let ops: Vec<DenseMatrix<BigRational>> = action.matrices.values().cloned().collect();
    for m in &ops {
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "action matrix is {}x{}, expected {dim}x{dim}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(KoszulComplex::new(ops.len()).tensor_cohomology_rank(dim, &ops))
}

/// The bound together with the integral torsion of `Khr`, which the bound
/// leaves out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhiBound {
    pub bound: usize,
    pub khr_rank_q: usize,
    pub action_ranks: BTreeMap<usize, usize>,
    /// `(h, q, invariant factors)` of the torsion in `Khr(L;Z)`.
    pub khr_torsion: Vec<(i64, i64, Vec<String>)>,
}

pub fn khi_bound(d: &LinkDiagram) -> Result<KhiBound> {
    let distinguished = d.distinguished_component();
    let action = module_action(d, distinguished)?;
    let z = khr(d, distinguished, Coeff::Z)?;
    let khr_q = z.to_field(Coeff::Q);
    let bound = koszul_tensor_rank(&action, &khr_q)?;
    let action_ranks = action.matrices.iter().map(|(&i, m)| (i, m.rank())).collect();
    let khr_torsion = z
        .iter()
        .filter(|(_, g)| !g.torsion.is_empty())
        .map(|((h, q), g)| (h, q, g.torsion.iter().map(|t| t.to_string()).collect()))
        .collect();
    Ok(KhiBound { bound, khr_rank_q: khr_q.total_rank(), action_ranks, khr_torsion })
}

/// Upper bound on the rank of the instanton homology of the link.
pub fn khi_rank_bound(d: &LinkDiagram) -> Result<usize> {
    Ok(khi_bound(d)?.bound)
}

/// `n x n` rational matrix from integer rows, for building test operators.
pub fn rational_matrix(rows: &[Vec<i64>]) -> DenseMatrix<BigRational> {
    if rows.is_empty() {
        return DenseMatrix::zeros(0, 0);
    }
    DenseMatrix::from_rows(
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_squares_to_zero() {
        let x = rational_matrix(&[vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 0], vec![0, 0, 1, 0]]);
        let y = rational_matrix(&[vec![0, 0, 0, 0], vec![0, 0, 0, 0], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(x.mul(&y), y.mul(&x));
        let k = KoszulComplex::new(2);
        let d0 = k.tensor_differential(4, &[x.clone(), y.clone()], 0);
        let d1 = k.tensor_differential(4, &[x, y], 1);
        assert!(d1.mul(&d0).is_zero());
    }

    #[test]
    fn trivial_action_on_q2() {
        let z = rational_matrix(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(KoszulComplex::new(1).tensor_cohomology_rank(2, std::slice::from_ref(&z)), 4);
        assert_eq!(two_term_rank(2, 0), 4);
        // trivial action with two variables: 2^2 copies
        assert_eq!(KoszulComplex::new(2).tensor_cohomology_rank(2, &[z.clone(), z]), 8);
    }

    #[test]
    fn free_rank_one_module() {
        let x = rational_matrix(&[vec![0, 0], vec![1, 0]]);
        assert_eq!(KoszulComplex::new(1).tensor_cohomology_rank(2, &[x]), 2);
        assert_eq!(two_term_rank(2, 1), 2);
    }

    #[test]
    fn zero_module() {
        let z = DenseMatrix::<BigRational>::zeros(0, 0);
        assert_eq!(KoszulComplex::new(1).tensor_cohomology_rank(0, &[z]), 0);
    }

    #[test]
    fn hopf_and_unlink_bounds() {
        let hopf = crate::linkdiag::parse_pd("PD[X[2,4,1,3],X[4,2,3,1]]").unwrap();
        assert_eq!(khi_rank_bound(&hopf).unwrap(), 4);
        assert_eq!(khi_rank_bound(&hopf.mirror()).unwrap(), 4);
        assert_eq!(khi_rank_bound(&LinkDiagram::unlink(2)).unwrap(), 2);
        assert!(khi_rank_bound(&LinkDiagram::unknot()).is_err());
    }
}
