//! Integer Laurent polynomials in one variable `v`.
//!
//! Coefficients are arbitrary-precision integers. Terms are kept sorted by
//! ascending degree with zero coefficients stripped, so structural equality
//! coincides with equality of polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sum `Σ c_d v^d` with `d ∈ Z` and `c_d ∈ Z`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i32, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// The variable `v`.
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(degree: i32, coeff: impl Into<BigInt>) -> Self {
        let coeff = coeff.into();
        if coeff.is_zero() {
            Self::zero()
        } else {
            LaurentPoly {
                terms: vec![(degree, coeff)],
            }
        }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// Builds a polynomial from arbitrary `(degree, coefficient)` pairs,
    /// summing repeated degrees.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut raw: Vec<(i32, BigInt)> = terms.into_iter().map(|(d, c)| (d, c.into())).collect();
        raw.sort_by_key(|(d, _)| *d);
        let mut out: Vec<(i32, BigInt)> = Vec::with_capacity(raw.len());
        for (d, c) in raw {
            match out.last_mut() {
                Some((ld, lc)) if *ld == d => *lc += c,
                _ => out.push((d, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Ascending `(degree, coefficient)` pairs, never containing a zero coefficient.
    pub fn terms(&self) -> &[(i32, BigInt)] {
        &self.terms
    }

    pub fn coeff(&self, degree: i32) -> BigInt {
        match self.terms.binary_search_by_key(&degree, |(d, _)| *d) {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.first().map(|(d, _)| *d)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.last().map(|(d, _)| *d)
    }

    /// Multiplication by `v^n`.
    pub fn shift(&self, n: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(d, c)| (d + n, c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(d, c)| (*d, c * k)).collect(),
        }
    }

    /// Adds `c·v^n·other` into `self` in place.
    pub fn add_shifted(&mut self, other: &LaurentPoly, n: i32) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.terms = other.terms.iter().map(|(d, c)| (d + n, c.clone())).collect();
            return;
        }
        self.terms = merge(
            std::mem::take(&mut self.terms),
            other.terms.iter().map(|(d, c)| (d + n, c.clone())),
        );
    }

    /// The bar involution `v ↦ v⁻¹`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|(d, c)| (-d, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// True iff every degree is at least 1.
    pub fn is_in_vzv(&self) -> bool {
        self.terms.iter().all(|(d, _)| *d >= 1)
    }

    /// The unique bar-invariant `α` with `self − α ∈ vZ[v]`.
    pub fn symmetric_defect(&self) -> Self {
        let mut out = Vec::new();
        for (d, c) in &self.terms {
            match d.cmp(&0) {
                Ordering::Less => {
                    out.push((*d, c.clone()));
                    out.push((-*d, c.clone()));
                }
                Ordering::Equal => out.push((0, c.clone())),
                Ordering::Greater => break,
            }
        }
        Self::from_terms(out)
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }

    /// The quantum integer `[k] = (v^k − v^{−k}) / (v − v^{−1})`.
    pub fn v_integer(k: u32) -> Self {
        let k = k as i32;
        Self::from_terms((0..k).map(|t| (k - 1 - 2 * t, 1)))
    }

    /// The balanced Gaussian binomial `[m choose k]`.
    pub fn v_binomial(m: u32, k: u32) -> Result<Self> {
        if k > m {
            return Err(Error::InvalidArgument(format!(
                "v-binomial needs k <= m, got m={m}, k={k}"
            )));
        }
        // [m,k] = v^k [m-1,k] + v^{-(m-k)} [m-1,k-1], row by row.
        let mut row: Vec<LaurentPoly> = vec![Self::one()];
        for n in 1..=m {
            let mut next = Vec::with_capacity(n as usize + 1);
            for j in 0..=n {
                let mut p = Self::zero();
                if j < n {
                    p.add_shifted(&row[j as usize], j as i32);
                }
                if j > 0 {
                    p.add_shifted(&row[j as usize - 1], -((n - j) as i32));
                }
                next.push(p);
            }
            row = next;
        }
        Ok(row.swap_remove(k as usize))
    }
}

fn merge<I>(left: Vec<(i32, BigInt)>, right: I) -> Vec<(i32, BigInt)>
where
    I: Iterator<Item = (i32, BigInt)>,
{
    let mut out = Vec::with_capacity(left.len() + 4);
    let mut right = right.peekable();
    let mut left = left.into_iter().peekable();
    loop {
        match (left.peek(), right.peek()) {
            (Some((dl, _)), Some((dr, _))) => match dl.cmp(dr) {
                Ordering::Less => out.push(left.next().unwrap()),
                Ordering::Greater => out.push(right.next().unwrap()),
                Ordering::Equal => {
                    let (d, a) = left.next().unwrap();
                    let (_, b) = right.next().unwrap();
                    let s = a + b;
                    if !s.is_zero() {
                        out.push((d, s));
                    }
                }
            },
            (Some(_), None) => out.push(left.next().unwrap()),
            (None, Some(_)) => out.push(right.next().unwrap()),
            (None, None) => break,
        }
    }
    out
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: merge(self.terms.clone(), rhs.terms.iter().cloned()),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: merge(self.terms, rhs.terms.into_iter()),
        }
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_shifted(rhs, 0);
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        LaurentPoly {
            terms: merge(self.terms.clone(), rhs.terms.iter().map(|(d, c)| (*d, -c))),
        }
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.terms = merge(
            std::mem::take(&mut self.terms),
            rhs.terms.iter().map(|(d, c)| (*d, -c)),
        );
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut acc = LaurentPoly::zero();
        for (d, c) in &self.terms {
            let row = LaurentPoly {
                terms: rhs.terms.iter().map(|(e, k)| (d + e, c * k)).collect(),
            };
            acc.add_shifted(&row, 0);
        }
        acc
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending degrees, e.g. `v^-1 + 2v^3`; the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (d, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let show_mag = !mag.is_one() || *d == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match *d {
                0 => {}
                1 => write!(f, "v")?,
                _ => write!(f, "v^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl std::str::FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the text form produced by `Display` (`v^-1 + 2v^3`, `1`, `-v`).
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms = Vec::new();
        let bytes: Vec<char> = compact.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i32;
            if bytes[i] == '+' || bytes[i] == '-' {
                if bytes[i] == '-' {
                    sign = -1;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = bytes[start..i].iter().collect();
            let mut coeff: BigInt = if digits.is_empty() {
                BigInt::one()
            } else {
                digits.parse().map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))?
            };
            let mut degree = 0i32;
            if i < bytes.len() && bytes[i] == 'v' {
                i += 1;
                degree = 1;
                if i < bytes.len() && bytes[i] == '^' {
                    i += 1;
                    let dstart = i;
                    if i < bytes.len() && bytes[i] == '-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let dtext: String = bytes[dstart..i].iter().collect();
                    degree = dtext
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
                }
            } else if digits.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            if sign < 0 {
                coeff = -coeff;
            }
            terms.push((degree, coeff));
            if i < bytes.len() && bytes[i] != '+' && bytes[i] != '-' {
                return Err(Error::Parse(format!("unexpected {:?} in {s:?}", bytes[i])));
            }
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

/// Serialized as an ascending list of `[degree, coefficient]` pairs.
/// Coefficients outside the `i64` range are written as decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (d, c) in &self.terms {
            match c.to_i64() {
                Some(small) => seq.serialize_element(&(d, small))?,
                None => seq.serialize_element(&(d, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a list of [degree, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LaurentPoly, A::Error> {
                let mut terms = Vec::new();
                while let Some((d, c)) = seq.next_element::<(i32, CoeffRepr)>()? {
                    let c = match c {
                        CoeffRepr::Small(x) => BigInt::from(x),
                        CoeffRepr::Text(t) => t.parse().map_err(de::Error::custom)?,
                    };
                    terms.push((d, c));
                }
                Ok(LaurentPoly::from_terms(terms))
            }
        }
        deserializer.deserialize_seq(PolyVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    /// Long division of Laurent polynomials, used as an independent oracle for
    /// the v-binomials. Panics if the division is not exact.
    fn divide_exact(num: &LaurentPoly, den: &LaurentPoly) -> LaurentPoly {
        let mut rem = num.clone();
        let (dlo, dlc) = den.terms()[0].clone();
        let mut quot = Vec::new();
        while !rem.is_zero() {
            let (rlo, rlc) = rem.terms()[0].clone();
            assert!((&rlc % &dlc).is_zero(), "inexact division");
            let q = LaurentPoly::monomial(rlo - dlo, &rlc / &dlc);
            rem = &rem - &(&q * den);
            quot.push(q);
            assert!(quot.len() < 10_000);
        }
        quot.into_iter().fold(LaurentPoly::zero(), |a, b| a + b)
    }

    fn v_factorial(k: u32) -> LaurentPoly {
        (1..=k).fold(LaurentPoly::one(), |acc, j| &acc * &LaurentPoly::v_integer(j))
    }

    #[test]
    fn add_examples() {
        assert_eq!(p(&[(1, 1), (0, 1)]) + p(&[(-1, 1), (0, -1)]), p(&[(1, 1), (-1, 1)]));
        let q = p(&[(3, 2), (-2, 5)]);
        assert_eq!(&q + &LaurentPoly::zero(), q);
        assert_eq!(LaurentPoly::v() + LaurentPoly::v(), p(&[(1, 2)]));
    }

    #[test]
    fn mul_examples() {
        let a = p(&[(1, 1), (-1, 1)]);
        let b = p(&[(1, 1), (-1, -1)]);
        assert_eq!(&a * &b, p(&[(2, 1), (-2, -1)]));
        assert_eq!(&a * &LaurentPoly::one(), a);
        assert_eq!(LaurentPoly::v() * p(&[(-1, 1)]), LaurentPoly::one());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(p(&[(2, 1), (1, 3)]).bar(), p(&[(-2, 1), (-1, 3)]));
        assert_eq!(LaurentPoly::constant(5).bar(), LaurentPoly::constant(5));
        let sym = p(&[(1, 1), (-1, 1)]);
        assert_eq!(sym.bar(), sym);
    }

    #[test]
    fn v_binomial_examples() {
        assert_eq!(LaurentPoly::v_binomial(2, 1).unwrap(), p(&[(1, 1), (-1, 1)]));
        for m in 0..6 {
            assert!(LaurentPoly::v_binomial(m, m).unwrap().is_one());
        }
        assert_eq!(
            LaurentPoly::v_binomial(4, 2).unwrap(),
            p(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)])
        );
        assert!(matches!(LaurentPoly::v_binomial(2, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn v_binomial_matches_factorial_division() {
        for m in 0..=9u32 {
            for k in 0..=m {
                let den = &v_factorial(m - k) * &v_factorial(k);
                let oracle = divide_exact(&v_factorial(m), &den);
                assert_eq!(LaurentPoly::v_binomial(m, k).unwrap(), oracle, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn vzv_examples() {
        assert!(p(&[(1, 1), (3, 1)]).is_in_vzv());
        assert!(!p(&[(0, 1), (1, 1)]).is_in_vzv());
        assert!(!p(&[(-1, 1)]).is_in_vzv());
        assert!(LaurentPoly::zero().is_in_vzv());
    }

    #[test]
    fn symmetric_defect_examples() {
        assert_eq!(p(&[(0, 1), (1, 1)]).symmetric_defect(), LaurentPoly::one());
        let a = p(&[(-1, 1), (1, 2)]);
        let alpha = a.symmetric_defect();
        assert_eq!(alpha, p(&[(1, 1), (-1, 1)]));
        assert_eq!(&a - &alpha, LaurentPoly::v());
        assert!(p(&[(3, 1)]).symmetric_defect().is_zero());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[(1, 1), (-1, 1)]).eval_at_one(), BigInt::from(2));
        assert_eq!(LaurentPoly::zero().eval_at_one(), BigInt::from(0));
        assert_eq!(p(&[(0, 1), (3, 2)]).eval_at_one(), BigInt::from(3));
    }

    #[test]
    fn display_and_parse() {
        let q = p(&[(-1, 1), (3, 2)]);
        assert_eq!(q.to_string(), "v^-1 + 2v^3");
        assert_eq!(p(&[(0, 1)]).to_string(), "1");
        assert_eq!(p(&[(1, 1)]).to_string(), "v");
        assert_eq!(p(&[(0, -1), (2, -3)]).to_string(), "-1 - 3v^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        for text in ["v^-1 + 2v^3", "1", "-1 - 3v^2", "v", "-v + v^5"] {
            let parsed: LaurentPoly = text.parse().unwrap();
            assert_eq!(parsed.to_string(), text);
        }
    }

    #[test]
    fn big_coefficients_round_trip_json() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let q = LaurentPoly::from_terms(vec![(-2, big), (4, BigInt::from(-7))]);
        let text = serde_json::to_string(&q).unwrap();
        assert_eq!(text, r#"[[-2,"123456789012345678901234567890"],[4,-7]]"#);
        let back: LaurentPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, q);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i32..=6, -5i64..=5), 0..6).prop_map(LaurentPoly::from_terms)
    }

    proptest! {
        #[test]
        fn bar_is_involution(a in arb_poly()) {
            prop_assert_eq!(a.bar().bar(), a);
        }

        #[test]
        fn symmetric_defect_properties(a in arb_poly()) {
            let alpha = a.symmetric_defect();
            prop_assert!(alpha.is_bar_invariant());
            prop_assert!((&a - &alpha).is_in_vzv());
        }

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn binomial_symmetry(m in 0u32..10, k in 0u32..10) {
            prop_assume!(k <= m);
            let b = LaurentPoly::v_binomial(m, k).unwrap();
            prop_assert_eq!(&b, &LaurentPoly::v_binomial(m, m - k).unwrap());
            prop_assert!(b.is_bar_invariant());
        }

        #[test]
        fn json_round_trip(a in arb_poly()) {
            let text = serde_json::to_string(&a).unwrap();
            let back: LaurentPoly = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
