//! Khovanov homology, reduced Khovanov homology, the module action of the
//! basepoint operators, and consistency checks between them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cube::{build_complex, build_reduced_complex, induced_map, operator_at_mark, ChainComplex, Mark};
use crate::error::{Error, Result};
use crate::homalg::field::DenseMatrix;
use crate::homalg::{AbelianGroup, BigradedGroup, Coeff, GroupEntry, LaurentPoly};
use crate::linkdiag::LinkDiagram;

/// Unreduced Khovanov homology.
pub fn kh(d: &LinkDiagram, coeff: Coeff) -> Result<BigradedGroup> {
    let z = build_complex(d, false)?.homology(Coeff::Z);
    Ok(change_coeff(&z, coeff))
}

/// Reduced Khovanov homology with the mark on `distinguished`.
pub fn khr(d: &LinkDiagram, distinguished: usize, coeff: Coeff) -> Result<BigradedGroup> {
    let z = build_reduced_complex(d, distinguished)?.homology(Coeff::Z);
    Ok(change_coeff(&z, coeff))
}

fn change_coeff(z: &BigradedGroup, coeff: Coeff) -> BigradedGroup {
    if coeff == Coeff::Z {
        z.clone()
    } else {
        z.to_field(coeff)
    }
}

/// Graded Euler characteristic `Σ (-1)^h rank Kh^{h,q} q^q`, as a Laurent
/// polynomial in `q` (doubled exponents, so `q^k` is stored at `2k`).
pub fn jones_polynomial(kh: &BigradedGroup) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for ((h, q), g) in kh.iter() {
        let sign = if h.rem_euclid(2) == 0 { 1 } else { -1 };
        p.add_term(2 * q, BigInt::from(sign * g.free_rank as i64));
    }
    p
}

/// `Kh^{h,q}(F2) ≅ Khr^{h,q-1}(F2) ⊕ Khr^{h,q+1}(F2)` in every bigrading.
pub fn shumakovitch_identity(kh_f2: &BigradedGroup, khr_f2: &BigradedGroup) -> bool {
    let mut keys: Vec<(i64, i64)> = kh_f2.support();
    for (h, q) in khr_f2.support() {
        keys.push((h, q - 1));
        keys.push((h, q + 1));
    }
    keys.into_iter().all(|(h, q)| kh_f2.rank(h, q) == khr_f2.rank(h, q - 1) + khr_f2.rank(h, q + 1))
}

pub fn shumakovitch_check(d: &LinkDiagram) -> Result<bool> {
    let a = kh(d, Coeff::F2)?;
    let b = khr(d, d.distinguished_component(), Coeff::F2)?;
    Ok(shumakovitch_identity(&a, &b))
}

/// Outcome of the Batson–Seed rank inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsCheck {
    pub total: bool,
    pub ell_graded: bool,
}

/// Batson–Seed inequalities for `L` against its components, with the
/// `ℓ = h - q` grading of the split side shifted by `t`. Integral inputs
/// are reduced to F2 first.
pub fn bs_check(kh_l: &BigradedGroup, kh_components: &[BigradedGroup], t: i64) -> BsCheck {
    let field = |g: &BigradedGroup| if g.coeff == Coeff::Z { g.to_field(Coeff::F2) } else { g.clone() };
    let l = field(kh_l);
    let product: usize = kh_components.iter().map(|g| field(g).total_rank()).product();
    let total = l.total_rank() >= product;

    let split = split_ell_ranks(&kh_components.iter().map(field).collect::<Vec<_>>());
    let l_ell = l.ell_ranks();
    let ell_graded = split.iter().all(|(&ell, &r)| l_ell.get(&(ell - t)).copied().unwrap_or(0) >= r);
    BsCheck { total, ell_graded }
}

/// `ℓ`-graded ranks of the tensor product of the given homologies.
pub fn split_ell_ranks(groups: &[BigradedGroup]) -> BTreeMap<i64, usize> {
    let mut acc: BTreeMap<i64, usize> = BTreeMap::from([(0, 1)]);
    for g in groups {
        let mut next = BTreeMap::new();
        for (&a, &ra) in &acc {
            for (b, rb) in g.ell_ranks() {
                *next.entry(a + b).or_insert(0) += ra * rb;
            }
        }
        acc = next;
    }
    acc
}

/// Exact-triangle consequence `rank Khr <= rank Kh <= 2 rank Khr`, with the
/// lower bound written as `rank Khr >= ceil(rank Kh / 2)`.
pub fn exact_triangle_rank_check(kh_q: &BigradedGroup, khr_q: &BigradedGroup) -> bool {
    let a = kh_q.total_rank();
    let b = khr_q.total_rank();
    a <= 2 * b && b >= a.div_ceil(2)
}

/// How the action changes when its mark moves one crossing along the
/// component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondMark {
    Equal,
    Negated,
    /// The component has a single edge or no crossings.
    Unavailable,
}

/// One summand `Q^dim` of the basis of `Khr(L;Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSummand {
    pub h: i64,
    pub q: i64,
    pub dim: usize,
}

/// Matrices of the basepoint operators `x_i` on `Khr(L;Q)`, in a basis
/// ordered by `(h, q)` and then by cycle representative.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleAction {
    pub distinguished: usize,
    pub basis: Vec<BasisSummand>,
    pub matrices: BTreeMap<usize, DenseMatrix<BigRational>>,
    pub second_mark: BTreeMap<usize, SecondMark>,
}

impl ModuleAction {
    pub fn dim(&self) -> usize {
        self.basis.iter().map(|b| b.dim).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.matrices.values().all(|m| m.is_zero())
    }

    pub fn rank_of(&self, component: usize) -> Option<usize> {
        self.matrices.get(&component).map(|m| m.rank())
    }

    pub fn squares_to_zero(&self) -> bool {
        self.matrices.values().all(|m| m.mul(m).is_zero())
    }

    pub fn commute(&self) -> bool {
        let ms: Vec<_> = self.matrices.values().collect();
        ms.iter().enumerate().all(|(i, a)| ms[i + 1..].iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// Each `x_i` lowers `q` by two: nonzero entries only from `(h, q)` to
    /// `(h, q - 2)`.
    pub fn is_homogeneous(&self) -> bool {
        let grading: Vec<(i64, i64)> = self.basis.iter().flat_map(|b| std::iter::repeat_n((b.h, b.q), b.dim)).collect();
        self.matrices.values().all(|m| {
            (0..m.rows()).all(|r| {
                (0..m.cols()).all(|c| {
                    m.get(r, c).is_zero() || (grading[r].0 == grading[c].0 && grading[r].1 == grading[c].1 - 2)
                })
            })
        })
    }
}

/// The action of `x_i` for every component other than `distinguished`.
pub fn module_action(d: &LinkDiagram, distinguished: usize) -> Result<ModuleAction> {
    d.check_component(distinguished)?;
    let r = d.component_count();
    if r < 2 {
        return Err(Error::Precondition("the module action needs a link with at least two components".into()));
    }
    let complex = build_reduced_complex(d, distinguished)?;
    let khr_q = complex.homology(Coeff::Q);
    let basis: Vec<BasisSummand> = khr_q.iter().map(|((h, q), g)| BasisSummand { h, q, dim: g.free_rank }).collect();

    let mut matrices = BTreeMap::new();
    let mut second_mark = BTreeMap::new();
    for i in (0..r).filter(|&i| i != distinguished) {
        let m = action_matrix(&complex, &basis, Mark::for_component(d, i)?)?;
        let check = match Mark::next_on_component(d, i)? {
            None => SecondMark::Unavailable,
            Some(mark) => {
                let m2 = action_matrix(&complex, &basis, mark)?;
                if m2 == m {
                    SecondMark::Equal
                } else if m2 == negate(&m) {
                    SecondMark::Negated
                } else {
                    return Err(Error::Precondition(format!("action of component {i} depends on the marked edge")));
                }
            }
        };
        matrices.insert(i, m);
        second_mark.insert(i, check);
    }
    Ok(ModuleAction { distinguished, basis, matrices, second_mark })
}

fn negate(m: &DenseMatrix<BigRational>) -> DenseMatrix<BigRational> {
    DenseMatrix::from_rows(m.to_rows().into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect())
}

fn action_matrix(complex: &ChainComplex, basis: &[BasisSummand], mark: Mark) -> Result<DenseMatrix<BigRational>> {
    let x = operator_at_mark(complex, mark);
    let mut offsets = BTreeMap::new();
    let mut n = 0;
    for b in basis {
        offsets.insert((b.h, b.q), n);
        n += b.dim;
    }
    let mut out = DenseMatrix::zeros(n, n);
    let hs: std::collections::BTreeSet<i64> = basis.iter().map(|b| b.h).collect();
    for h in hs {
        let im = induced_map::<BigRational>(&x, complex, h)?;
        let mut col0 = 0;
        for &(sq, sdim) in &im.source {
            let mut row0 = 0;
            for &(tq, tdim) in &im.target {
                let (Some(&gc), Some(&gr)) = (offsets.get(&(h, sq)), offsets.get(&(h, tq))) else {
                    row0 += tdim;
                    continue;
                };
                for i in 0..tdim {
                    for j in 0..sdim {
                        let v = im.matrix.get(row0 + i, col0 + j);
                        if !v.is_zero() {
                            out.set(gr + i, gc + j, v.clone());
                        }
                    }
                }
                row0 += tdim;
            }
            col0 += sdim;
        }
    }
    Ok(out)
}

/// Everything computed about one diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct KhovanovResult {
    pub diagram: String,
    /// Integral unreduced homology.
    pub unreduced: BigradedGroup,
    /// Integral reduced homology for each choice of marked component.
    pub reduced: BTreeMap<usize, BigradedGroup>,
    /// Present for links with at least two components.
    pub action: Option<ModuleAction>,
}

impl KhovanovResult {
    pub fn compute(d: &LinkDiagram) -> Result<Self> {
        let unreduced = kh(d, Coeff::Z)?;
        let reduced =
            (0..d.component_count()).map(|i| Ok((i, khr(d, i, Coeff::Z)?))).collect::<Result<BTreeMap<_, _>>>()?;
        let action = if d.component_count() >= 2 { Some(module_action(d, d.distinguished_component())?) } else { None };
        let diagram = d.name().map(str::to_string).unwrap_or_else(|| d.to_pd_string());
        Ok(Self { diagram, unreduced, reduced, action })
    }

    pub fn unreduced_over(&self, coeff: Coeff) -> BigradedGroup {
        change_coeff(&self.unreduced, coeff)
    }

    pub fn reduced_over(&self, component: usize, coeff: Coeff) -> Option<BigradedGroup> {
        self.reduced.get(&component).map(|g| change_coeff(g, coeff))
    }

    pub fn jones(&self) -> LaurentPoly {
        jones_polynomial(&self.unreduced)
    }
}

/// A rational as a JSON integer when it is one, otherwise a `"p/q"` string.
mod rational_json {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn to_repr(x: &BigRational) -> impl Serialize {
        if x.is_integer() {
            if let Ok(v) = i64::try_from(x.to_integer()) {
                return Repr::Int(v);
            }
        }
        Repr::Text(x.to_string())
    }

    pub fn parse<E: serde::de::Error>(v: serde_json::Value) -> std::result::Result<BigRational, E> {
        match serde_json::from_value::<Repr>(v).map_err(E::custom)? {
            Repr::Int(i) => Ok(BigRational::from_integer(BigInt::from(i))),
            Repr::Text(s) => s.parse::<BigRational>().map_err(|e| E::custom(format!("bad rational '{s}': {e}"))),
        }
    }

    pub fn matrix_to_json(m: &DenseMatrix<BigRational>) -> serde_json::Value {
        let rows: Vec<Vec<serde_json::Value>> = m
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|x| serde_json::to_value(to_repr(x)).expect("serializable")).collect())
            .collect();
        serde_json::to_value(rows).expect("serializable")
    }

    pub fn matrix_from_json<E: serde::de::Error>(
        v: serde_json::Value,
        n: usize,
    ) -> std::result::Result<DenseMatrix<BigRational>, E> {
        let rows: Vec<Vec<serde_json::Value>> = serde_json::from_value(v).map_err(E::custom)?;
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(E::custom(format!("action matrix must be {n}x{n}")));
        }
        if n == 0 {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        let parsed = rows
            .into_iter()
            .map(|r| r.into_iter().map(parse::<E>).collect::<std::result::Result<Vec<_>, E>>())
            .collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(DenseMatrix::from_rows(parsed))
    }
}

#[derive(Serialize, Deserialize)]
struct ResultJson {
    diagram: String,
    unreduced: Vec<GroupEntry>,
    reduced: BTreeMap<String, Vec<GroupEntry>>,
    actions: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action_basis: Option<Vec<BasisSummand>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    distinguished: Option<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    second_mark: BTreeMap<String, SecondMark>,
    jones: LaurentPoly,
}

impl Serialize for KhovanovResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (actions, action_basis, distinguished, second_mark) = match &self.action {
            None => (BTreeMap::new(), None, None, BTreeMap::new()),
            Some(a) => (
                a.matrices.iter().map(|(i, m)| (i.to_string(), rational_json::matrix_to_json(m))).collect(),
                Some(a.basis.clone()),
                Some(a.distinguished),
                a.second_mark.iter().map(|(i, c)| (i.to_string(), *c)).collect(),
            ),
        };
        ResultJson {
            diagram: self.diagram.clone(),
            unreduced: self.unreduced.entries(),
            reduced: self.reduced.iter().map(|(i, g)| (i.to_string(), g.entries())).collect(),
            actions,
            action_basis,
            distinguished,
            second_mark,
            jones: self.jones(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KhovanovResult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ResultJson::deserialize(d)?;
        let key = |k: &str| k.parse::<usize>().map_err(D::Error::custom);
        let reduced = j
            .reduced
            .iter()
            .map(|(k, v)| Ok((key(k)?, BigradedGroup::from_entries(Coeff::Z, v))))
            .collect::<std::result::Result<BTreeMap<_, _>, D::Error>>()?;
        let action = match (j.action_basis, j.distinguished) {
            (Some(basis), Some(distinguished)) => {
                let n = basis.iter().map(|b| b.dim).sum();
                let matrices = j
                    .actions
                    .into_iter()
                    .map(|(k, v)| Ok((key(&k)?, rational_json::matrix_from_json::<D::Error>(v, n)?)))
                    .collect::<std::result::Result<BTreeMap<_, _>, D::Error>>()?;
                let second_mark = j
                    .second_mark
                    .iter()
                    .map(|(k, v)| Ok((key(k)?, *v)))
                    .collect::<std::result::Result<BTreeMap<_, _>, D::Error>>()?;
                Some(ModuleAction { distinguished, basis, matrices, second_mark })
            }
            _ => None,
        };
        let out = KhovanovResult {
            diagram: j.diagram,
            unreduced: BigradedGroup::from_entries(Coeff::Z, &j.unreduced),
            reduced,
            action,
        };
        if out.jones() != j.jones {
            return Err(D::Error::custom("jones polynomial does not match the unreduced homology"));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct ActionJson {
    distinguished: usize,
    basis: Vec<BasisSummand>,
    matrices: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    second_mark: BTreeMap<String, SecondMark>,
}

impl Serialize for ModuleAction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ActionJson {
            distinguished: self.distinguished,
            basis: self.basis.clone(),
            matrices: self.matrices.iter().map(|(i, m)| (i.to_string(), rational_json::matrix_to_json(m))).collect(),
            second_mark: self.second_mark.iter().map(|(i, c)| (i.to_string(), *c)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuleAction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ActionJson::deserialize(d)?;
        let key = |k: &str| k.parse::<usize>().map_err(D::Error::custom);
        let n = j.basis.iter().map(|b| b.dim).sum();
        let matrices = j
            .matrices
            .into_iter()
            .map(|(k, v)| Ok((key(&k)?, rational_json::matrix_from_json::<D::Error>(v, n)?)))
            .collect::<std::result::Result<BTreeMap<_, _>, D::Error>>()?;
        let second_mark = j
            .second_mark
            .iter()
            .map(|(k, v)| Ok((key(k)?, *v)))
            .collect::<std::result::Result<BTreeMap<_, _>, D::Error>>()?;
        Ok(ModuleAction { distinguished: j.distinguished, basis: j.basis, matrices, second_mark })
    }
}

/// Free integral bigraded group with the given ranks.
pub fn free_group(entries: &[((i64, i64), usize)]) -> BigradedGroup {
    let mut g = BigradedGroup::new(Coeff::Z);
    for &((h, q), r) in entries {
        g.insert(h, q, AbelianGroup::free(r));
    }
    g
}
