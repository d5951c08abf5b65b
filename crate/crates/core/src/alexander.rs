//! Alexander polynomials from Wirtinger presentations, the Torres condition,
//! and the search for Alexander-graded rank shapes whose signed Euler series
//! is divisible by `t - 2 + t^{-1}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homalg::LaurentPoly;
use crate::linkdiag::{EdgeLabel, LinkDiagram};

/// One conjugation relation per crossing, in arc indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WirtingerRelation {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WirtingerPresentation {
    /// Edge labels making up each arc; crossingless loops have none.
    pub generators: Vec<Vec<EdgeLabel>>,
    pub relations: Vec<WirtingerRelation>,
    /// Component of each generator (the abelianization).
    pub component: Vec<usize>,
}

impl WirtingerPresentation {
    /// Fox derivatives with every generator sent to `t`; row `i` is the
    /// relation at crossing `i`.
    pub fn fox_matrix(&self) -> Vec<Vec<LaurentPoly>> {
        let g = self.generators.len();
        let t = |coeffs: &[(i64, i64)]| LaurentPoly::from_int_exponents(coeffs);
        self.relations
            .iter()
            .map(|r| {
                let mut row = vec![LaurentPoly::zero(); g];
                let (over, under_in, under_out) = if r.sign > 0 {
                    (t(&[(0, 1), (1, -1)]), t(&[(1, 1)]), t(&[(0, -1)]))
                } else {
                    (t(&[(1, 1), (0, -1)]), t(&[(0, 1)]), t(&[(1, -1)]))
                };
                row[r.over] = &row[r.over] + &over;
                row[r.under_in] = &row[r.under_in] + &under_in;
                row[r.under_out] = &row[r.under_out] + &under_out;
                row
            })
            .collect()
    }
}

pub fn wirtinger(d: &LinkDiagram) -> WirtingerPresentation {
    let edges = d.edges();
    let idx = |e: EdgeLabel| edges.binary_search(&e).expect("edge label");
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in d.crossings() {
        let (a, b) = (find(&mut parent, idx(x[1])), find(&mut parent, idx(x[3])));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut arc_of_root = BTreeMap::new();
    let mut generators: Vec<Vec<EdgeLabel>> = vec![];
    let mut component = vec![];
    let mut arc_of_edge = vec![0; edges.len()];
    for (i, &e) in edges.iter().enumerate() {
        let r = find(&mut parent, i);
        let a = *arc_of_root.entry(r).or_insert_with(|| {
            generators.push(vec![]);
            component.push(d.component_of_edge(e).expect("edge has a component"));
            generators.len() - 1
        });
        generators[a].push(e);
        arc_of_edge[i] = a;
    }
    for (ci, comp) in d.components().iter().enumerate() {
        if comp.is_free_loop() {
            generators.push(vec![]);
            component.push(ci);
        }
    }
    let relations = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(c, x)| WirtingerRelation {
            over: arc_of_edge[idx(x[1])],
            under_in: arc_of_edge[idx(x[0])],
            under_out: arc_of_edge[idx(x[2])],
            sign: d.crossing_sign(c),
        })
        .collect();
    WirtingerPresentation { generators, relations, component }
}

/// Fraction-free (Bareiss) determinant over `Z[t, t^{-1}]`.
pub fn determinant(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return LaurentPoly::zero() };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.divide_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Single-variable Alexander polynomial, normalized symmetric with positive
/// value at 1 (or positive leading coefficient when that value is 0).
pub fn alexander_single(d: &LinkDiagram) -> LaurentPoly {
    let w = wirtinger(d);
    let g = w.generators.len();
    let fox = w.fox_matrix();
    let n = fox.len();
    if g <= 1 {
        return LaurentPoly::one();
    }
    if g - 1 > n {
        return LaurentPoly::zero();
    }
    // the columns of a Wirtinger Fox matrix sum to zero, so deleting the last
    // column loses nothing
    let reduced: Vec<Vec<LaurentPoly>> = fox.iter().map(|r| r[..g - 1].to_vec()).collect();
    let minors: Vec<LaurentPoly> = if g - 1 == n {
        vec![determinant(reduced)]
    } else {
        (0..n)
            .into_par_iter()
            .map(|skip| {
                let rows = reduced.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, r)| r.clone()).collect();
                determinant(rows)
            })
            .collect()
    };
    let g = minors.iter().fold(LaurentPoly::zero(), |acc, m| if acc.is_zero() { m.gcd(m) } else { acc.gcd(m) });
    g.normalize_symmetric()
}

/// `Δ̃(t,t) = Δ(t) / (t^{1/2} - t^{-1/2})`, normalized.
pub fn diagonal_multivariable(delta: &LaurentPoly) -> Result<LaurentPoly> {
    Ok(delta.divide_exact(&LaurentPoly::half_difference())?.normalize_symmetric())
}

/// `|Δ̃(1,1)| = |lk|`.
pub fn torres_check(delta_diag: &LaurentPoly, lk: i64) -> bool {
    delta_diag.evaluate_at_1().abs() == BigInt::from(lk).abs()
}

/// Ranks in each Alexander grading, optionally with a sign per grading.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KhiShape {
    pub gradings: BTreeMap<i64, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<BTreeMap<i64, i8>>,
}

impl KhiShape {
    pub fn new(gradings: &[(i64, usize)]) -> Self {
        Self { gradings: gradings.iter().filter(|g| g.1 > 0).copied().collect(), signs: None }
    }

    pub fn with_signs(mut self, signs: &[(i64, i8)]) -> Self {
        self.signs = Some(signs.iter().copied().collect());
        self
    }

    pub fn total_rank(&self) -> usize {
        self.gradings.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.gradings.iter().all(|(j, r)| self.gradings.get(&-j) == Some(r))
    }

    /// `Σ_j ε_j rank(j) t^j`; unsigned gradings count as `+`.
    pub fn signed_series(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&j, &r) in &self.gradings {
            let s = self.signs.as_ref().and_then(|s| s.get(&j)).copied().unwrap_or(1);
            p.add_term(2 * j, BigInt::from(s as i64 * r as i64));
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerDivisibility {
    pub numerator: LaurentPoly,
    pub quotient: Option<LaurentPoly>,
}

impl EulerDivisibility {
    pub fn ok(&self) -> bool {
        self.quotient.is_some()
    }
}

/// Whether `t - 2 + t^{-1}` divides the signed Euler series of `shape`.
pub fn khi_euler_divisibility(shape: &KhiShape) -> EulerDivisibility {
    let numerator = shape.signed_series();
    let quotient =
        if numerator.is_zero() { None } else { numerator.divide_exact(&LaurentPoly::double_root_at_one()).ok() };
    EulerDivisibility { numerator, quotient }
}

/// All symmetric shapes of total rank at most `rank_budget`, supported in at
/// least three gradings, with top grading at most `m_max`, and all sign
/// assignments (up to global sign: the top grading is `+`) whose series is
/// divisible by `t - 2 + t^{-1}` with quotient `±lk_abs` at `t = 1`.
pub fn prop3_solver(rank_budget: usize, lk_abs: u64, m_max: usize) -> Vec<KhiShape> {
    let target = BigInt::from(lk_abs);
    let mut out: Vec<KhiShape> = (1..=m_max as i64)
        .into_par_iter()
        .flat_map_iter(|m| {
            let mut shapes = vec![];
            symmetric_shapes(m, rank_budget, &mut shapes);
            shapes
        })
        .flat_map_iter(|shape| {
            // shape is sorted by grading, so the top grading is last
            let top = shape.len() - 1;
            let mut found = vec![];
            for mask in 0u64..(1 << shape.len()) {
                if mask >> top & 1 == 1 {
                    continue;
                }
                let coeff = |i: usize| if mask >> i & 1 == 1 { -(shape[i].1 as i64) } else { shape[i].1 as i64 };
                // (t - 1)^2 divides p iff p(1) = p'(1) = 0
                let (v, dv) = (0..shape.len()).fold((0, 0), |(v, dv), i| (v + coeff(i), dv + coeff(i) * shape[i].0));
                if v != 0 || dv != 0 {
                    continue;
                }
                // then the quotient at 1 is ½ p''(1) = ½ Σ c j^2
                let half_d2: i64 = (0..shape.len()).map(|i| coeff(i) * shape[i].0 * shape[i].0).sum::<i64>() / 2;
                if half_d2.unsigned_abs() != lk_abs {
                    continue;
                }
                let s = KhiShape {
                    gradings: shape.iter().copied().collect(),
                    signs: Some(
                        shape
                            .iter()
                            .enumerate()
                            .map(|(i, &(j, _))| (j, if mask >> i & 1 == 1 { -1 } else { 1 }))
                            .collect(),
                    ),
                };
                if let Some(q) = khi_euler_divisibility(&s).quotient {
                    if q.evaluate_at_1().abs() == target {
                        found.push(s);
                    }
                }
            }
            found
        })
        .collect();
    out.sort();
    out
}

/// Symmetric shapes with top grading exactly `m`, total rank at most
/// `budget`, and support in at least three gradings, as `(grading, rank)`
/// sorted by grading.
fn symmetric_shapes(m: i64, budget: usize, out: &mut Vec<Vec<(i64, usize)>>) {
    // ranks[j] for j = 0..=m, with ranks[m] >= 1
    fn rec(j: i64, m: i64, left: usize, ranks: &mut Vec<usize>, out: &mut Vec<Vec<(i64, usize)>>) {
        if j < 0 {
            let support: usize = ranks
                .iter()
                .enumerate()
                .map(|(j, &r)| {
                    if r == 0 {
                        0
                    } else if j == 0 {
                        1
                    } else {
                        2
                    }
                })
                .sum();
            if support >= 3 {
                let neg =
                    ranks.iter().enumerate().rev().filter(|&(j, &r)| r > 0 && j > 0).map(|(j, &r)| (-(j as i64), r));
                let pos = ranks.iter().enumerate().filter(|&(_, &r)| r > 0).map(|(j, &r)| (j as i64, r));
                out.push(neg.chain(pos).collect());
            }
            return;
        }
        let weight = if j == 0 { 1 } else { 2 };
        let min = if j == m { 1 } else { 0 };
        for r in min..=left / weight {
            ranks[j as usize] = r;
            rec(j - 1, m, left - r * weight, ranks, out);
        }
        ranks[j as usize] = 0;
    }
    let mut ranks = vec![0; m as usize + 1];
    rec(m, m, budget, &mut ranks, out);
}

/// `½ p''(1)`, which equals `(p / (t - 2 + t^{-1}))(1)` when the division
/// is exact.
pub fn second_derivative_identity(p: &LaurentPoly) -> Result<BigInt> {
    if p.is_zero() {
        return Err(Error::Precondition("the zero polynomial has no quotient to evaluate".into()));
    }
    let quotient = p.divide_exact(&LaurentPoly::double_root_at_one())?;
    let half = p.second_derivative_at_1() / BigInt::from(2);
    if !half.is_integer() {
        return Err(Error::Precondition(format!("½p''(1) = {half} is not an integer")));
    }
    let value = half.to_integer();
    debug_assert_eq!(value, quotient.evaluate_at_1());
    Ok(value)
}

/// `t^m - t^k - t^{-k} + t^{-m}`.
pub fn four_term(m: i64, k: i64) -> LaurentPoly {
    LaurentPoly::from_int_exponents(&[(m, 1), (k, -1), (-k, -1), (-m, 1)])
}

/// Whether `(t^{1/2} - t^{-1/2})^{r-1} Δ(t)` equals `±series`.
pub fn euler_series_matches(delta: &LaurentPoly, r: usize, series: &LaurentPoly) -> bool {
    let mut lhs = delta.clone();
    for _ in 1..r {
        lhs = &lhs * &LaurentPoly::half_difference();
    }
    lhs.eq_up_to_sign(series)
}

/// `|Δ(-1)|` for a knot (the determinant), or `None` with half-integer exponents.
pub fn determinant_of_knot(delta: &LaurentPoly) -> Option<BigInt> {
    delta.evaluate_at_minus_1().map(|v| v.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkdiag::{parse_pd, parse_pd_with_loops};

    fn hopf() -> LinkDiagram {
        parse_pd("PD[X[2,4,1,3],X[4,2,3,1]]").unwrap()
    }

    fn trefoil() -> LinkDiagram {
        parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]").unwrap()
    }

    #[test]
    fn presentation_sizes() {
        let w = wirtinger(&trefoil());
        assert_eq!((w.generators.len(), w.relations.len()), (3, 3));
        let w = wirtinger(&hopf());
        assert_eq!(w.generators.len(), 2);
        let w = wirtinger(&parse_pd("PD[X[1,1,2,2]]").unwrap());
        assert_eq!(w.generators.len(), 1);
        assert!(w.fox_matrix()[0].iter().all(|p| p.is_zero()));
    }

    #[test]
    fn fox_columns_sum_to_zero() {
        let fox = wirtinger(&trefoil()).fox_matrix();
        for row in fox {
            let s = row.iter().fold(LaurentPoly::zero(), |a, b| &a + b);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn basic_polynomials() {
        assert_eq!(alexander_single(&hopf()), LaurentPoly::half_difference());
        assert_eq!(alexander_single(&hopf().mirror()), LaurentPoly::half_difference());
        assert_eq!(alexander_single(&LinkDiagram::unknot()), LaurentPoly::one());
        assert_eq!(alexander_single(&parse_pd("PD[X[1,1,2,2]]").unwrap()), LaurentPoly::one());
        assert!(alexander_single(&LinkDiagram::unlink(2)).is_zero());
        assert!(alexander_single(&parse_pd_with_loops("PD[X[1,1,2,2]]", 1).unwrap()).is_zero());
        let t = LaurentPoly::from_int_exponents(&[(1, 1), (0, -1), (-1, 1)]);
        assert_eq!(alexander_single(&trefoil()), t);
    }

    #[test]
    fn diagonal_and_torres() {
        let h = LaurentPoly::half_difference();
        assert_eq!(diagonal_multivariable(&h).unwrap(), LaurentPoly::one());
        assert!(diagonal_multivariable(&LaurentPoly::zero()).unwrap().is_zero());
        assert_eq!(diagonal_multivariable(&LaurentPoly::double_root_at_one()).unwrap(), h);
        assert!(diagonal_multivariable(&LaurentPoly::one()).is_err());
        assert!(torres_check(&LaurentPoly::one(), 1));
        assert!(torres_check(&LaurentPoly::one(), -1));
        assert!(torres_check(&LaurentPoly::zero(), 0));
        assert!(!torres_check(&LaurentPoly::one(), 2));
    }

    #[test]
    fn divisibility() {
        let s = KhiShape::new(&[(1, 1), (0, 2), (-1, 1)]).with_signs(&[(1, 1), (0, -1), (-1, 1)]);
        let r = khi_euler_divisibility(&s);
        assert_eq!(r.quotient, Some(LaurentPoly::one()));
        let s = KhiShape::new(&[(1, 1), (-1, 1)]).with_signs(&[(1, 1), (-1, 1)]);
        assert!(!khi_euler_divisibility(&s).ok());
        for sign in [1, -1] {
            let s = KhiShape::new(&[(0, 3)]).with_signs(&[(0, sign)]);
            assert!(!khi_euler_divisibility(&s).ok());
        }
    }

    #[test]
    fn solver_defaults() {
        let expected = vec![KhiShape::new(&[(1, 1), (0, 2), (-1, 1)]).with_signs(&[(1, 1), (0, -1), (-1, 1)])];
        for m_max in [1, 2, 7, 50] {
            assert_eq!(prop3_solver(4, 1, m_max), expected);
        }
        assert!(prop3_solver(4, 2, 50).is_empty());
        assert!(prop3_solver(2, 1, 50).is_empty());
    }

    #[test]
    fn solver_json() {
        let s = prop3_solver(4, 1, 3);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"[{"gradings":{"-1":1,"0":2,"1":1},"signs":{"-1":1,"0":-1,"1":1}}]"#);
        let back: Vec<KhiShape> = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn second_derivative() {
        assert_eq!(second_derivative_identity(&four_term(1, 0)).unwrap(), BigInt::from(1));
        assert_eq!(second_derivative_identity(&four_term(2, 1)).unwrap(), BigInt::from(3));
        assert!(second_derivative_identity(&four_term(3, 3)).is_err());
        assert!(second_derivative_identity(&LaurentPoly::one()).is_err());
        assert_eq!(second_derivative_identity(&LaurentPoly::double_root_at_one()).unwrap(), BigInt::from(1));
    }

    #[test]
    fn hopf_series_matches_shape() {
        let series = KhiShape::new(&[(1, 1), (0, 2), (-1, 1)]).with_signs(&[(1, 1), (0, -1), (-1, 1)]).signed_series();
        assert!(euler_series_matches(&alexander_single(&hopf()), 2, &series));
    }
}
