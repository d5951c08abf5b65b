use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coeff {
    Z,
    F2,
    Q,
}

impl Coeff {
    pub fn is_field(self) -> bool {
        !matches!(self, Coeff::Z)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coeff::Z => "Z",
            Coeff::F2 => "F2",
            Coeff::Q => "Q",
        })
    }
}

impl FromStr for Coeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "Z" | "z" => Ok(Coeff::Z),
            "F2" | "f2" | "Z2" | "z2" => Ok(Coeff::F2),
            "Q" | "q" => Ok(Coeff::Q),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown coefficient system '{s}'") }),
        }
    }
}

/// Finitely generated abelian group `Z^free ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with
/// `t_1 | t_2 | ... | t_k`, all `t_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: vec![] }
    }

    /// Accepts torsion orders in any form and rewrites them as invariant
    /// factors; entries equal to 1 are discarded.
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        Self { free_rank, torsion: to_invariant_factors(torsion) }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of cyclic summands of even order.
    pub fn even_torsion_count(&self) -> usize {
        self.torsion.iter().filter(|t| t.is_even()).count()
    }

    pub fn is_valid(&self) -> bool {
        self.torsion.iter().all(|t| t >= &BigInt::from(2))
            && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let t = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == t).count();
            parts.push(if run == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{run}") });
            i += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

/// Rewrite a list of cyclic orders as invariant factors using
/// `Z/a ⊕ Z/b ≅ Z/gcd(a,b) ⊕ Z/lcm(a,b)`.
fn to_invariant_factors(orders: Vec<BigInt>) -> Vec<BigInt> {
    let orders: Vec<BigInt> = orders.into_iter().filter(|t| t > &BigInt::one()).collect();
    if orders.windows(2).all(|w| w[1].is_multiple_of(&w[0])) {
        return orders;
    }
    let mut v = orders;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let g = v[i].gcd(&v[j]);
            let l = v[i].lcm(&v[j]);
            v[i] = g;
            v[j] = l;
        }
    }
    v.retain(|t| t > &BigInt::one());
    v
}

/// A finitely supported map `(h, q) -> AbelianGroup`. Over a field every
/// entry is free and `free_rank` is the dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedGroup {
    pub coeff: Coeff,
    groups: BTreeMap<(i64, i64), AbelianGroup>,
}

impl BigradedGroup {
    pub fn new(coeff: Coeff) -> Self {
        Self { coeff, groups: BTreeMap::new() }
    }

    pub fn from_ranks(coeff: Coeff, entries: &[((i64, i64), usize)]) -> Self {
        let mut g = Self::new(coeff);
        for &((h, q), r) in entries {
            g.insert(h, q, AbelianGroup::free(r));
        }
        g
    }

    pub fn insert(&mut self, h: i64, q: i64, g: AbelianGroup) {
        assert!(!self.coeff.is_field() || g.is_free(), "torsion over a field");
        if g.is_zero() {
            self.groups.remove(&(h, q));
        } else {
            self.groups.insert((h, q), g);
        }
    }

    pub fn get(&self, h: i64, q: i64) -> AbelianGroup {
        self.groups.get(&(h, q)).cloned().unwrap_or_default()
    }

    pub fn rank(&self, h: i64, q: i64) -> usize {
        self.groups.get(&(h, q)).map_or(0, |g| g.free_rank)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &AbelianGroup)> + '_ {
        self.groups.iter().map(|(&k, v)| (k, v))
    }

    pub fn support(&self) -> Vec<(i64, i64)> {
        self.groups.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    /// Sum of free ranks (the dimension, over a field).
    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.free_rank).sum()
    }

    pub fn h_range(&self) -> Option<(i64, i64)> {
        let hs = self.groups.keys().map(|k| k.0);
        Some((hs.clone().min()?, hs.max()?))
    }

    /// The part in homological degree `h`, keyed by `q`.
    pub fn at_h(&self, h: i64) -> BTreeMap<i64, AbelianGroup> {
        self.groups.range((h, i64::MIN)..=(h, i64::MAX)).map(|(&(_, q), g)| (q, g.clone())).collect()
    }

    /// Universal coefficients, with `d` raising `h`:
    /// `H^{h,q}(F) = H^{h,q} ⊗ F ⊕ Tor(H^{h+1,q}, F)`.
    pub fn to_field(&self, coeff: Coeff) -> BigradedGroup {
        assert!(coeff.is_field(), "target must be a field");
        if self.coeff == coeff {
            return self.clone();
        }
        assert_eq!(self.coeff, Coeff::Z, "can only change coefficients from Z");
        let mut out = BigradedGroup::new(coeff);
        let keys: std::collections::BTreeSet<(i64, i64)> =
            self.groups.keys().flat_map(|&(h, q)| [(h, q), (h - 1, q)]).collect();
        for (h, q) in keys {
            let dim = match coeff {
                Coeff::Q => self.rank(h, q),
                Coeff::F2 => {
                    let here = self.get(h, q);
                    let next = self.get(h + 1, q);
                    here.free_rank + here.even_torsion_count() + next.even_torsion_count()
                }
                Coeff::Z => unreachable!(),
            };
            out.insert(h, q, AbelianGroup::free(dim));
        }
        out
    }

    /// Ranks collected by `ℓ = h - q`.
    pub fn ell_ranks(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for (&(h, q), g) in &self.groups {
            if g.free_rank > 0 {
                *m.entry(h - q).or_insert(0) += g.free_rank;
            }
        }
        m
    }

    /// `(h, q) -> (-h, -q)`, ranks only (the duality holds over a field).
    pub fn negate_gradings(&self) -> BigradedGroup {
        let mut out = BigradedGroup::new(self.coeff);
        for (&(h, q), g) in &self.groups {
            out.insert(-h, -q, g.clone());
        }
        out
    }

    /// Tensor product over a field.
    pub fn tensor(&self, other: &BigradedGroup) -> BigradedGroup {
        assert!(self.coeff.is_field() && self.coeff == other.coeff, "tensor needs a common field");
        let mut out = BigradedGroup::new(self.coeff);
        for (&(h1, q1), a) in &self.groups {
            for (&(h2, q2), b) in &other.groups {
                let cur = out.rank(h1 + h2, q1 + q2);
                out.insert(h1 + h2, q1 + q2, AbelianGroup::free(cur + a.free_rank * b.free_rank));
            }
        }
        out
    }

    pub fn entries(&self) -> Vec<GroupEntry> {
        self.groups
            .iter()
            .map(|(&(h, q), g)| GroupEntry { h, q, rank: g.free_rank, torsion: g.torsion.clone() })
            .collect()
    }

    pub fn from_entries(coeff: Coeff, entries: &[GroupEntry]) -> Self {
        let mut g = Self::new(coeff);
        for e in entries {
            g.insert(e.h, e.q, AbelianGroup::new(e.rank, e.torsion.clone()));
        }
        g
    }
}

impl fmt::Display for BigradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "0");
        }
        let coeff = self.coeff.to_string();
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|(&(h, q), g)| {
                let body = if self.coeff.is_field() {
                    match g.free_rank {
                        1 => coeff.clone(),
                        r => format!("{coeff}^{r}"),
                    }
                } else {
                    g.to_string()
                };
                format!("{body}_({h},{q})")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// JSON row `{h, q, rank, torsion[]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub h: i64,
    pub q: i64,
    pub rank: usize,
    #[serde(with = "bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl Serialize for BigradedGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigradedGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<GroupEntry>::deserialize(d)?;
        Ok(Self::from_entries(Coeff::Z, &entries))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Small(i64),
    Big(String),
}

impl Repr {
    fn of(x: &BigInt) -> Self {
        match i64::try_from(x) {
            Ok(small) => Repr::Small(small),
            Err(_) => Repr::Big(x.to_string()),
        }
    }

    fn value<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            Repr::Small(x) => Ok(BigInt::from(x)),
            Repr::Big(s) => s.parse().map_err(E::custom),
        }
    }
}

/// An integer as a JSON number when it fits in an i64, a string otherwise.
pub mod bigint_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        Repr::of(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Repr::deserialize(d)?.value()
    }
}

/// Integer lists, each entry encoded as in [`bigint_scalar`].
pub mod bigint_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Repr::of).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(d)?.into_iter().map(Repr::value).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn invariant_factor_normalization() {
        let g = AbelianGroup::new(0, vec![z(3), z(2)]);
        assert_eq!(g.torsion, vec![z(6)]);
        assert!(g.is_valid());
        let g = AbelianGroup::new(1, vec![z(1), z(2), z(4)]);
        assert_eq!(g.torsion, vec![z(2), z(4)]);
    }

    #[test]
    fn universal_coefficients_for_trefoil_like_torsion() {
        // Z at (0,1), Z/2 at (1,5): over F2 the torsion appears at (0,5) and (1,5)
        let mut g = BigradedGroup::new(Coeff::Z);
        g.insert(0, 1, AbelianGroup::free(1));
        g.insert(1, 5, AbelianGroup::new(0, vec![z(2)]));
        let f = g.to_field(Coeff::F2);
        assert_eq!(f.rank(0, 1), 1);
        assert_eq!(f.rank(0, 5), 1);
        assert_eq!(f.rank(1, 5), 1);
        assert_eq!(f.total_rank(), 3);
        assert_eq!(g.to_field(Coeff::Q).total_rank(), 1);
    }

    #[test]
    fn json_rows() {
        let mut g = BigradedGroup::new(Coeff::Z);
        g.insert(2, 4, AbelianGroup::new(1, vec![z(2)]));
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"[{"h":2,"q":4,"rank":1,"torsion":[2]}]"#);
        let back: BigradedGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }
}
