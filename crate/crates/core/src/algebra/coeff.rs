//! Exact coefficients: big rationals and elements of the cyclotomic field Q(w_r).
//!
//! An element of Q(w_r), r prime, is stored by its coordinates in the basis
//! `1, w, ..., w^(r-2)`, i.e. modulo the cyclotomic polynomial
//! `1 + x + ... + x^(r-1)`. The modulus `r = 1` is the plain rational field and
//! embeds into every Q(w_r) as `(c, 0, ..., 0)`. For `r = 2` the field is Q with
//! `w = -1`, handled by the same code path.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::linalg::{self, FieldElem};
use crate::error::{Error, Result};

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^exp` as an exact rational; negative exponents allowed.
pub fn rpow(base: i64, exp: i64) -> BigRational {
    let b = int(base);
    if exp >= 0 {
        num_traits::pow(b, exp as usize)
    } else {
        num_traits::pow(b.recip(), (-exp) as usize)
    }
}

/// Exact value in Q (modulus 1) or in Q(w_r) for a prime r.
#[derive(Clone, Debug)]
pub struct ExactCoeff {
    r: u32,
    c: Vec<BigRational>,
}

fn dim(r: u32) -> usize {
    if r == 1 {
        1
    } else {
        (r - 1) as usize
    }
}

impl ExactCoeff {
    pub fn rational(q: BigRational) -> Self {
        Self { r: 1, c: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// Zero of Q(w_r) (or of Q for `r = 1`).
    pub fn zero_in(r: u32) -> Self {
        Self {
            r,
            c: vec![BigRational::zero(); dim(r)],
        }
    }

    pub fn one_in(r: u32) -> Self {
        let mut z = Self::zero_in(r);
        z.c[0] = BigRational::one();
        z
    }

    /// Builds an element from its `r - 1` coordinates.
    pub fn from_coords(r: u32, coords: Vec<BigRational>) -> Result<Self> {
        check_modulus(r)?;
        if coords.len() != dim(r) {
            return Err(Error::Domain(format!(
                "Q(w_{r}) needs {} coordinates, got {}",
                dim(r),
                coords.len()
            )));
        }
        Ok(Self { r, c: coords })
    }

    /// `w^k` in Q(w_r), `k` any integer.
    pub fn root_of_unity(r: u32, k: i64) -> Self {
        assert!(r == 1 || is_prime(r), "modulus must be 1 or prime");
        if r == 1 {
            return Self::one();
        }
        let j = k.rem_euclid(r as i64) as usize;
        let n = dim(r);
        if j < n {
            let mut z = Self::zero_in(r);
            z.c[j] = BigRational::one();
            z
        } else {
            // w^(r-1) = -(1 + w + ... + w^(r-2))
            Self {
                r,
                c: vec![-BigRational::one(); n],
            }
        }
    }

    pub fn modulus(&self) -> u32 {
        self.r
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, when it has no genuine w-dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses a rational (modulus 1) in Q(w_r); identity when moduli agree.
    pub fn promote(&self, r: u32) -> Result<Self> {
        if self.r == r {
            return Ok(self.clone());
        }
        if self.r == 1 {
            check_modulus(r)?;
            let mut z = Self::zero_in(r);
            z.c[0] = self.c[0].clone();
            return Ok(z);
        }
        if r == 1 {
            if let Some(q) = self.as_rational() {
                return Ok(Self::rational(q));
            }
        }
        Err(Error::ModulusMismatch(self.r, r))
    }

    fn common(a: &Self, b: &Self) -> Result<u32> {
        match (a.r, b.r) {
            (x, y) if x == y => Ok(x),
            (1, y) => Ok(y),
            (x, 1) => Ok(x),
            (x, y) => Err(Error::ModulusMismatch(x, y)),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let r = Self::common(self, other)?;
        let (a, b) = (self.promote(r)?, other.promote(r)?);
        Ok(Self {
            r,
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let r = Self::common(self, other)?;
        if self.r == 1 {
            return Ok(other.promote(r)?.scale(&self.c[0]));
        }
        if other.r == 1 {
            return Ok(self.promote(r)?.scale(&other.c[0]));
        }
        let n = dim(r);
        let ru = r as usize;
        // product modulo x^r - 1, then fold the w^(r-1) coordinate
        let mut acc = vec![BigRational::zero(); ru];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                acc[(i + j) % ru] += x * y;
            }
        }
        let top = acc[ru - 1].clone();
        let c = acc.into_iter().take(n).map(|v| v - &top).collect();
        Ok(Self { r, c })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            r: self.r,
            c: self.c.iter().map(|x| x * q).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&int(n))
    }

    /// Multiplicative inverse; the multiplication-by-self matrix is inverted over Q.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        if self.r <= 2 {
            return Ok(Self {
                r: self.r,
                c: vec![self.c[0].recip()],
            });
        }
        let n = dim(self.r);
        // column j holds coords of self * w^j
        let cols: Vec<Vec<BigRational>> = (0..n)
            .map(|j| {
                self.try_mul(&Self::root_of_unity(self.r, j as i64))
                    .expect("same modulus")
                    .c
            })
            .collect();
        let rows: Vec<Vec<BigRational>> =
            (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let mut e0 = vec![BigRational::zero(); n];
        e0[0] = BigRational::one();
        let y = linalg::solve(&rows, &e0)
            .ok_or_else(|| Error::Inconsistency("singular multiplication matrix".into()))?;
        Ok(Self { r: self.r, c: y })
    }

    /// Numerical value with `w = exp(2 pi i / r)`.
    pub fn to_complex(&self) -> Complex64 {
        if self.r == 1 {
            return Complex64::new(self.c[0].to_f64().unwrap_or(f64::NAN), 0.0);
        }
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.r as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for x in &self.c {
            acc += p * x.to_f64().unwrap_or(f64::NAN);
            p *= w;
        }
        acc
    }

    /// Largest absolute coordinate, used for crude magnitude bounds.
    pub fn max_abs_coord(&self) -> f64 {
        self.c
            .iter()
            .map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

fn check_modulus(r: u32) -> Result<()> {
    if r == 1 || is_prime(r) {
        Ok(())
    } else {
        Err(Error::Domain(format!("modulus {r} is neither 1 nor prime")))
    }
}

/// Product in Q(w_r) reduced to canonical form; mismatched moduli are an error.
pub fn cyclo_mul(a: &ExactCoeff, b: &ExactCoeff) -> Result<ExactCoeff> {
    a.try_mul(b)
}

/// Equality of field elements; a rational equals its embedding in any Q(w_r).
impl PartialEq for ExactCoeff {
    fn eq(&self, other: &Self) -> bool {
        if self.r == other.r {
            return self.c == other.c;
        }
        self.try_sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl Eq for ExactCoeff {}

impl From<BigRational> for ExactCoeff {
    fn from(q: BigRational) -> Self {
        Self::rational(q)
    }
}

impl From<i64> for ExactCoeff {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

// Operator forms panic on a genuine modulus mismatch; use the `try_` methods
// where the moduli are not known to agree.
impl Add for &ExactCoeff {
    type Output = ExactCoeff;
    fn add(self, rhs: &ExactCoeff) -> ExactCoeff {
        self.try_add(rhs).expect("modulus mismatch in +")
    }
}

impl Sub for &ExactCoeff {
    type Output = ExactCoeff;
    fn sub(self, rhs: &ExactCoeff) -> ExactCoeff {
        self.try_sub(rhs).expect("modulus mismatch in -")
    }
}

impl Mul for &ExactCoeff {
    type Output = ExactCoeff;
    fn mul(self, rhs: &ExactCoeff) -> ExactCoeff {
        self.try_mul(rhs).expect("modulus mismatch in *")
    }
}

impl Neg for &ExactCoeff {
    type Output = ExactCoeff;
    fn neg(self) -> ExactCoeff {
        ExactCoeff {
            r: self.r,
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for ExactCoeff {
    type Output = ExactCoeff;
    fn neg(self) -> ExactCoeff {
        -&self
    }
}

impl FieldElem for ExactCoeff {
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn zero_like(&self) -> Self {
        Self::zero_in(self.r)
    }
    fn one_like(&self) -> Self {
        Self::one_in(self.r)
    }
    fn sub_elem(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_elem(&self, other: &Self) -> Self {
        self * other
    }
    fn inv_elem(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl fmt::Display for ExactCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            };
            let (sign, mag) = if x.is_negative() { ("-", -x) } else { ("+", x.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Rationals serialize as `"p/q"` strings, Q(w_r) elements as arrays of
/// `r - 1` such strings.
impl Serialize for ExactCoeff {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.r == 1 {
            return s.serialize_str(&self.c[0].to_string());
        }
        let mut seq = s.serialize_seq(Some(self.c.len()))?;
        for x in &self.c {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ExactCoeff {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Rational(String),
            Cyclo(Vec<String>),
        }
        let parse = |s: &str| BigRational::from_str(s).map_err(|_| de::Error::custom(format!("bad rational {s:?}")));
        match Repr::deserialize(d)? {
            Repr::Rational(s) => Ok(ExactCoeff::rational(parse(&s)?)),
            Repr::Cyclo(v) => {
                let r = v.len() as u32 + 1;
                let c = v.iter().map(|s| parse(s)).collect::<std::result::Result<Vec<_>, _>>()?;
                ExactCoeff::from_coords(r, c).map_err(de::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(r: u32, k: i64) -> ExactCoeff {
        ExactCoeff::root_of_unity(r, k)
    }

    #[test]
    fn omega_to_the_r_is_one() {
        for r in [2u32, 3, 5, 7] {
            let mut acc = ExactCoeff::one_in(r);
            for _ in 0..r {
                acc = cyclo_mul(&acc, &w(r, 1)).unwrap();
            }
            assert!(acc.is_one(), "r={r}");
            assert_eq!(cyclo_mul(&w(r, 1), &w(r, r as i64 - 1)).unwrap(), ExactCoeff::one_in(r));
        }
    }

    #[test]
    fn identity_and_r3_reduction() {
        let one_plus_w = &ExactCoeff::one_in(3) + &w(3, 1);
        assert_eq!(cyclo_mul(&one_plus_w, &ExactCoeff::one_in(3)).unwrap(), one_plus_w);
        // w^2 = -1 - w
        let sq = cyclo_mul(&w(3, 1), &w(3, 1)).unwrap();
        assert_eq!(sq.coords(), &[int(-1), int(-1)]);
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for r in [2u32, 3, 5, 7] {
            let mut acc = ExactCoeff::zero_in(r);
            for l in 0..r as i64 {
                acc = &acc + &w(r, l);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn r2_degenerates_to_sign() {
        assert_eq!(w(2, 1).as_rational(), Some(int(-1)));
        assert_eq!(w(2, 4).as_rational(), Some(int(1)));
    }

    #[test]
    fn mismatch_is_an_error() {
        assert_eq!(cyclo_mul(&w(3, 1), &w(5, 1)), Err(Error::ModulusMismatch(3, 5)));
        // rationals embed into any field
        assert!(cyclo_mul(&ExactCoeff::from_int(2), &w(5, 1)).is_ok());
    }

    #[test]
    fn serde_forms() {
        let q = ExactCoeff::rational(rat(-3, 4));
        assert_eq!(serde_json::to_string(&q).unwrap(), "\"-3/4\"");
        let z = &w(3, 1).scale(&rat(1, 2)) + &ExactCoeff::from_int(2);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, "[\"2\",\"1/2\"]");
        assert_eq!(serde_json::from_str::<ExactCoeff>(&s).unwrap(), z);
    }

    #[test]
    fn display() {
        let z = &w(5, 2).scale_int(-3) + &ExactCoeff::from_int(1);
        assert_eq!(z.to_string(), "1 - 3*w^2");
        assert_eq!(w(3, 2).to_string(), "-1 - w");
    }

    fn arb_elem(r: u32) -> impl Strategy<Value = ExactCoeff> {
        prop::collection::vec((-9i64..9, 1i64..5), dim(r))
            .prop_map(move |v| ExactCoeff::from_coords(r, v.into_iter().map(|(n, d)| rat(n, d)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn field_axioms_r5(a in arb_elem(5), b in arb_elem(5), c in arb_elem(5)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn complex_embedding_is_a_ring_map(a in arb_elem(7), b in arb_elem(7)) {
            let lhs = (&a * &b).to_complex();
            let rhs = a.to_complex() * b.to_complex();
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
