//! Integer Laurent polynomials in one variable with half-integer exponents.
//!
//! Exponents are stored doubled: the key `2` is `t`, `1` is `t^(1/2)`,
//! `-1` is `t^(-1/2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `coeff * t^(doubled_exp / 2)`
    pub fn monomial(coeff: impl Into<BigInt>, doubled_exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(doubled_exp, coeff.into());
        p
    }

    /// From `(doubled exponent, coefficient)` pairs.
    pub fn from_doubled(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    /// From `(integer exponent, coefficient)` pairs.
    pub fn from_int_exponents(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(2 * e, BigInt::from(c));
        }
        p
    }

    /// `t^(1/2) - t^(-1/2)`
    pub fn half_difference() -> Self {
        Self::from_doubled(&[(1, 1), (-1, -1)])
    }

    /// `t - 2 + t^(-1)`
    pub fn double_root_at_one() -> Self {
        Self::from_doubled(&[(2, 1), (0, -2), (-2, 1)])
    }

    pub fn add_term(&mut self, doubled_exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(doubled_exp).or_default();
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&doubled_exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, doubled_exp: i64) -> BigInt {
        self.terms.get(&doubled_exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// (lowest, highest) doubled exponent.
    pub fn doubled_range(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    /// Multiply by `t^(doubled / 2)`.
    pub fn shift(&self, doubled: i64) -> Self {
        Self { terms: self.terms.iter().map(|(&e, c)| (e + doubled, c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut p = Self::zero();
        for (&e, x) in &self.terms {
            p.add_term(e, x * c);
        }
        p
    }

    /// `t -> t^(-1)`
    pub fn invert_variable(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect() }
    }

    /// `t^(1/2) -> -t^(1/2)`: negate the coefficients of odd doubled
    /// exponents.
    pub fn negate_half_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, if e.rem_euclid(2) == 1 { -c } else { c.clone() })).collect(),
        }
    }

    pub fn evaluate_at_1(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Value at `t = -1`, defined when every exponent is an integer.
    pub fn evaluate_at_minus_1(&self) -> Option<BigInt> {
        if !self.has_integer_exponents() {
            return None;
        }
        Some(self.terms.iter().map(|(&e, c)| if (e / 2) % 2 == 0 { c.clone() } else { -c }).sum())
    }

    /// `p''(1)`, exact. With `e = d/2`, each term contributes
    /// `c·e(e-1) = c·d(d-2)/4`.
    pub fn second_derivative_at_1(&self) -> BigRational {
        let num: BigInt = self.terms.iter().map(|(&d, c)| c * BigInt::from(d) * BigInt::from(d - 2)).sum();
        BigRational::new(num, BigInt::from(4))
    }

    /// Exact quotient `self / divisor`, or an error if the division leaves
    /// a remainder.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self> {
        let fail = || Error::NotDivisible { dividend: self.to_string(), divisor: divisor.to_string() };
        let Some((dlo, dhi)) = divisor.doubled_range() else {
            return Err(Error::Precondition("division by the zero polynomial".into()));
        };
        let Some((plo, _)) = self.doubled_range() else { return Ok(Self::zero()) };
        let lead = divisor.terms[&dhi].clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((_, rhi)) = rem.doubled_range() {
            let e = rhi - dhi;
            if e < plo - dlo {
                return Err(fail());
            }
            let (c, r) = rem.terms[&rhi].div_rem(&lead);
            if !r.is_zero() {
                return Err(fail());
            }
            rem = &rem - &divisor.shift(e).scale(&c);
            quot.add_term(e, c);
        }
        Ok(quot)
    }

    /// Greatest common divisor up to units `±t^k`, for integer exponents.
    /// The result has lowest exponent 0 and positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        assert!(self.has_integer_exponents() && other.has_integer_exponents(), "gcd needs integer exponents");
        let a = self.to_dense_poly();
        let b = other.to_dense_poly();
        Self::from_dense_poly(&poly_gcd(a, b))
    }

    fn to_dense_poly(&self) -> Vec<BigInt> {
        let Some((lo, hi)) = self.doubled_range() else { return vec![] };
        let mut v = vec![BigInt::zero(); ((hi - lo) / 2 + 1) as usize];
        for (&e, c) in &self.terms {
            v[((e - lo) / 2) as usize] = c.clone();
        }
        v
    }

    fn from_dense_poly(v: &[BigInt]) -> Self {
        let mut p = Self::zero();
        for (i, c) in v.iter().enumerate() {
            p.add_term(2 * i as i64, c.clone());
        }
        p
    }

    /// Symmetric representative up to units `±t^(k/2)`: centered so that the
    /// lowest and highest exponents are negatives of each other, then signed
    /// so that the value at `t = 1` is positive, or if that value is zero,
    /// the leading coefficient is.
    pub fn normalize_symmetric(&self) -> Self {
        let Some((lo, hi)) = self.doubled_range() else { return Self::zero() };
        let centered = self.shift(-Integer::div_floor(&(lo + hi), &2));
        let at_one = centered.evaluate_at_1();
        let negative = if at_one.is_zero() {
            centered.leading_coeff().is_some_and(|c| c.is_negative())
        } else {
            at_one.is_negative()
        };
        if negative {
            -centered
        } else {
            centered
        }
    }

    /// Equal up to sign.
    pub fn eq_up_to_sign(&self, other: &Self) -> bool {
        self == other || *self == -other.clone()
    }

    pub fn to_pairs(&self) -> Vec<(i64, BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c.clone())).collect()
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match e {
                0 => String::new(),
                2 => var.to_string(),
                e if e % 2 == 0 && e > 0 => format!("{var}^{}", e / 2),
                e if e % 2 == 0 => format!("{var}^({})", e / 2),
                e => format!("{var}^({e}/2)"),
            };
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}{mono}"));
            }
        }
        out
    }
}

/// Primitive-PRS gcd over `Z[t]`; coefficients low to high.
fn poly_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
    fn content(v: &[BigInt]) -> BigInt {
        v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
    fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
        let c = content(&v);
        if c.is_zero() {
            return v;
        }
        v.into_iter().map(|x| x / &c).collect()
    }
    fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lb = b[db].clone();
        while r.len() > db {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for x in r.iter_mut() {
                *x *= &lb;
            }
            for (i, bi) in b.iter().enumerate() {
                r[dr - db + i] -= &lr * bi;
            }
            r = trim(r);
        }
        r
    }

    let (mut a, mut b) = (trim(a), trim(b));
    if a.is_empty() {
        a = b;
        b = vec![];
    }
    if a.is_empty() {
        return vec![];
    }
    let g = content(&a).gcd(&content(&b));
    a = primitive(a);
    b = primitive(b);
    while !b.is_empty() {
        let r = primitive(prem(&a, &b));
        a = b;
        b = r;
    }
    let mut res: Vec<BigInt> = a.into_iter().map(|x| x * &g).collect();
    // strip the t^k factor
    let lead_zeros = res.iter().take_while(|c| c.is_zero()).count();
    res.drain(..lead_zeros);
    if res.last().is_some_and(|c| c.is_negative()) {
        res = res.into_iter().map(|x| -x).collect();
    }
    res
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (&e, c) in &o.terms {
            p.add_term(e, c.clone());
        }
        p
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (&e, c) in &o.terms {
            p.add_term(e, -c);
        }
        p
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &o.terms {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// JSON: `[[doubled_exp, coeff], ...]`.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair(i64, #[serde(with = "super::group::bigint_scalar")] BigInt);
        let pairs: Vec<Pair> = self.terms.iter().map(|(&e, c)| Pair(e, c.clone())).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Pair(i64, #[serde(with = "super::group::bigint_scalar")] BigInt);
        let pairs = Vec::<Pair>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for Pair(e, c) in pairs {
            p.add_term(e, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_difference_squared() {
        let h = LaurentPoly::half_difference();
        assert_eq!(&h * &h, LaurentPoly::double_root_at_one());
    }

    #[test]
    fn exact_division() {
        let p = LaurentPoly::double_root_at_one();
        assert_eq!(p.divide_exact(&p).unwrap(), LaurentPoly::one());
        assert_eq!(p.divide_exact(&LaurentPoly::half_difference()).unwrap(), LaurentPoly::half_difference());
        let q = LaurentPoly::from_int_exponents(&[(1, 1), (-1, 1)]);
        assert!(matches!(q.divide_exact(&p), Err(Error::NotDivisible { .. })));
        assert!(LaurentPoly::zero().divide_exact(&p).unwrap().is_zero());
        assert!(p.divide_exact(&LaurentPoly::zero()).is_err());
        // leading coefficient must divide
        let two_t = LaurentPoly::from_int_exponents(&[(1, 2)]);
        assert!(LaurentPoly::one().divide_exact(&two_t).is_err());
    }

    #[test]
    fn half_of_second_derivative() {
        // t - 2 + t^{-1}: p'' = 0 + 2 t^{-3} -> 2 at t = 1; half is 1
        let p = LaurentPoly::double_root_at_one();
        assert_eq!(p.second_derivative_at_1(), BigRational::from_integer(BigInt::from(2)));
        assert_eq!(p.evaluate_at_1(), BigInt::zero());
    }

    #[test]
    fn evaluation_at_minus_one() {
        let trefoil = LaurentPoly::from_int_exponents(&[(1, 1), (0, -1), (-1, 1)]);
        assert_eq!(trefoil.evaluate_at_minus_1(), Some(BigInt::from(-3)));
        assert_eq!(LaurentPoly::half_difference().evaluate_at_minus_1(), None);
    }

    #[test]
    fn normalization() {
        // 1 - t  ->  t^(1/2) - t^(-1/2)
        let p = LaurentPoly::from_int_exponents(&[(0, 1), (1, -1)]);
        assert_eq!(p.normalize_symmetric(), LaurentPoly::half_difference());
        let p = LaurentPoly::from_int_exponents(&[(3, -1), (2, 1), (1, -1)]);
        assert_eq!(p.normalize_symmetric(), LaurentPoly::from_int_exponents(&[(1, 1), (0, -1), (-1, 1)]));
    }

    #[test]
    fn gcd_up_to_units() {
        let a = LaurentPoly::from_int_exponents(&[(0, 1), (1, -2), (2, 1)]); // (1-t)^2
        let b = LaurentPoly::from_int_exponents(&[(-3, 1), (-2, -1)]); // t^-3 (1 - t)
        let g = a.gcd(&b);
        assert_eq!(g, LaurentPoly::from_int_exponents(&[(0, -1), (1, 1)]));
        let c = LaurentPoly::from_int_exponents(&[(0, 2), (1, 4)]);
        let d = LaurentPoly::from_int_exponents(&[(0, 6)]);
        assert_eq!(c.gcd(&d), LaurentPoly::from_int_exponents(&[(0, 2)]));
        assert_eq!(LaurentPoly::zero().gcd(&LaurentPoly::zero()), LaurentPoly::zero());
    }

    #[test]
    fn display() {
        assert_eq!(LaurentPoly::half_difference().to_string(), "t^(1/2) - t^(-1/2)");
        assert_eq!(LaurentPoly::double_root_at_one().display_in("q"), "q - 2 + q^(-1)");
        assert_eq!(LaurentPoly::from_int_exponents(&[(3, -2)]).to_string(), "-2t^3");
    }

    #[test]
    fn json_pairs() {
        let p = LaurentPoly::half_difference();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[-1,-1],[1,1]]");
        assert_eq!(serde_json::from_str::<LaurentPoly>(&s).unwrap(), p);
    }
}
