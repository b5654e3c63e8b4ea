//! Truncated formal series in `q` with exponents in `(1/D)Z`.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::coeff::{int, rat, ExactCoeff};
use crate::error::{Error, Result};

/// Default truncation, in whole powers of `q`.
pub const DEFAULT_ORDER: i64 = 60;

/// Root-of-unity twist applied to the variable in [`QSeries::substitute`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Twist {
    None,
    /// `q -> -q`, with rational coefficients.
    Sign,
    /// `q -> w_r^l q`.
    Root { r: u32, l: i64 },
}

/// A series known modulo `q^(order/denom)`.
///
/// Key `n` of `coeffs` stands for the exponent `n/denom`. Zero coefficients
/// are never stored and no key reaches `order`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QSeries {
    denom: i64,
    order: i64,
    coeffs: BTreeMap<i64, ExactCoeff>,
}

impl QSeries {
    /// The zero series on `(1/denom)Z`, known up to `q^(order/denom)`.
    pub fn zero(denom: i64, order: i64) -> Self {
        assert!(denom > 0, "denominator must be positive");
        Self {
            denom,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// Series from `(key, coefficient)` pairs; keys at or past `order` are dropped.
    pub fn from_terms<I>(denom: i64, order: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, ExactCoeff)>,
    {
        let mut s = Self::zero(denom, order);
        for (n, c) in terms {
            s.add_term(n, c);
        }
        s
    }

    /// Integer-exponent series from a dense coefficient list starting at `q^0`.
    pub fn from_ints(order: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(
            1,
            order,
            coeffs.iter().enumerate().map(|(i, &c)| (i as i64, ExactCoeff::from_int(c))),
        )
    }

    pub fn constant(c: ExactCoeff, denom: i64, order: i64) -> Self {
        Self::from_terms(denom, order, [(0, c)])
    }

    pub fn one(denom: i64, order: i64) -> Self {
        Self::constant(ExactCoeff::one(), denom, order)
    }

    pub fn monomial(n: i64, c: ExactCoeff, denom: i64, order: i64) -> Self {
        Self::from_terms(denom, order, [(n, c)])
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// Truncation bound in units of `1/denom`.
    pub fn order(&self) -> i64 {
        self.order
    }

    /// Truncation bound as an exponent.
    pub fn order_exponent(&self) -> BigRational {
        rat(self.order, self.denom)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactCoeff)> {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at key `n` (exponent `n/denom`).
    pub fn coeff(&self, n: i64) -> ExactCoeff {
        self.coeffs.get(&n).cloned().unwrap_or_else(ExactCoeff::zero)
    }

    /// Coefficient of `q^(num/den)`; zero when the exponent is off the lattice.
    pub fn coeff_at(&self, num: i64, den: i64) -> ExactCoeff {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        if (num * self.denom) % den != 0 {
            return ExactCoeff::zero();
        }
        self.coeff(num * self.denom / den)
    }

    pub fn constant_term(&self) -> ExactCoeff {
        self.coeff(0)
    }

    /// Largest field modulus among the coefficients.
    pub fn modulus(&self) -> u32 {
        self.coeffs.values().map(ExactCoeff::modulus).max().unwrap_or(1)
    }

    fn add_term(&mut self, n: i64, c: ExactCoeff) {
        self.try_add_term(n, c).expect("modulus mismatch");
    }

    fn try_add_term(&mut self, n: i64, c: ExactCoeff) -> Result<()> {
        if n >= self.order || c.is_zero() {
            return Ok(());
        }
        match self.coeffs.remove(&n) {
            None => {
                self.coeffs.insert(n, c);
            }
            Some(old) => {
                let s = old.try_add(&c)?;
                if !s.is_zero() {
                    self.coeffs.insert(n, s);
                }
            }
        }
        Ok(())
    }

    /// Re-expresses the series on `(1/new_denom)Z`; `new_denom` must be a multiple.
    pub fn rescale(&self, new_denom: i64) -> Result<Self> {
        if new_denom <= 0 || new_denom % self.denom != 0 {
            return Err(Error::Denominator(format!(
                "cannot move from 1/{} to 1/{new_denom}",
                self.denom
            )));
        }
        let f = new_denom / self.denom;
        Ok(Self {
            denom: new_denom,
            order: self.order * f,
            coeffs: self.coeffs.iter().map(|(&n, c)| (n * f, c.clone())).collect(),
        })
    }

    /// Smallest denominator that represents the same data.
    pub fn normalized(&self) -> Self {
        let mut g = self.denom.gcd(&self.order);
        for &n in self.coeffs.keys() {
            g = g.gcd(&n);
        }
        if g <= 1 {
            return self.clone();
        }
        Self {
            denom: self.denom / g,
            order: self.order / g,
            coeffs: self.coeffs.iter().map(|(&n, c)| (n / g, c.clone())).collect(),
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let d = a.denom.lcm(&b.denom);
        (a.rescale(d).expect("lcm"), b.rescale(d).expect("lcm"))
    }

    /// Drops every term at or past key `order`.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self {
            denom: self.denom,
            order,
            coeffs: self.coeffs.range(..order).map(|(&n, c)| (n, c.clone())).collect(),
        }
    }

    /// Truncates at the exponent `num/den`, rescaling if needed.
    pub fn truncate_exponent(&self, num: i64, den: i64) -> Self {
        let d = self.denom.lcm(&den);
        let s = self.rescale(d).expect("lcm");
        s.truncate(num * (d / den)).normalized()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::aligned(self, other);
        let mut out = a.truncate(b.order);
        for (n, c) in b.coeffs {
            out.try_add_term(n, c)?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            denom: self.denom,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(&n, c)| (n, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &ExactCoeff) -> Result<Self> {
        let mut out = Self::zero(self.denom, self.order);
        for (&n, x) in &self.coeffs {
            out.add_term(n, x.try_mul(c)?);
        }
        Ok(out)
    }

    pub fn scale_rat(&self, q: &BigRational) -> Self {
        let mut out = Self::zero(self.denom, self.order);
        for (&n, x) in &self.coeffs {
            out.add_term(n, x.scale(q));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale_rat(&int(n))
    }

    /// Truncated product at the smaller of the two orders.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = Self::aligned(self, other);
        let order = a.order.min(b.order);
        let Some(&low_b) = b.coeffs.keys().next() else {
            return Ok(Self::zero(a.denom, order));
        };
        let mut out = Self::zero(a.denom, order);
        for (&i, x) in &a.coeffs {
            if i + low_b >= order {
                break;
            }
            for (&j, y) in b.coeffs.range(..order - i) {
                out.try_add_term(i + j, x.try_mul(y)?)?;
            }
        }
        Ok(out)
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.denom, self.order);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    fn require_nonnegative(&self, what: &str) -> Result<()> {
        match self.coeffs.keys().next() {
            Some(&n) if n < 0 => Err(Error::Domain(format!("{what} needs a series without negative powers"))),
            _ => Ok(()),
        }
    }

    /// Multiplicative inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        self.require_nonnegative("inverse")?;
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::Domain("inverse needs a nonzero constant term".into()));
        }
        let inv0 = c0.inv()?;
        let mut g: Vec<ExactCoeff> = Vec::with_capacity(self.order.max(0) as usize);
        for n in 0..self.order {
            if n == 0 {
                g.push(inv0.clone());
                continue;
            }
            let mut s = ExactCoeff::zero();
            for (&k, fk) in self.coeffs.range(1..=n) {
                s = s.try_add(&fk.try_mul(&g[(n - k) as usize])?)?;
            }
            g.push(-s.try_mul(&inv0)?);
        }
        Ok(Self::from_terms(self.denom, self.order, g.into_iter().enumerate().map(|(i, c)| (i as i64, c))))
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        self.require_nonnegative("log")?;
        if !self.constant_term().is_one() {
            return Err(Error::Domain("log needs constant term 1".into()));
        }
        // n L_n = n f_n - sum_{k<n} k L_k f_{n-k}
        let mut l: Vec<ExactCoeff> = vec![ExactCoeff::zero(); self.order.max(1) as usize];
        for n in 1..self.order {
            let mut s = self.coeff(n).scale_int(n);
            for k in 1..n {
                if l[k as usize].is_zero() {
                    continue;
                }
                if let Some(f) = self.coeffs.get(&(n - k)) {
                    s = s.try_sub(&l[k as usize].try_mul(f)?.scale_int(k))?;
                }
            }
            l[n as usize] = s.scale(&rat(1, n));
        }
        Ok(Self::from_terms(self.denom, self.order, l.into_iter().enumerate().map(|(i, c)| (i as i64, c))))
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        self.require_nonnegative("exp")?;
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("exp needs constant term 0".into()));
        }
        // n e_n = sum_{k=1}^n k h_k e_{n-k}
        let mut e: Vec<ExactCoeff> = vec![ExactCoeff::one()];
        for n in 1..self.order {
            let mut s = ExactCoeff::zero();
            for (&k, h) in self.coeffs.range(1..=n) {
                s = s.try_add(&h.try_mul(&e[(n - k) as usize])?.scale_int(k))?;
            }
            e.push(s.scale(&rat(1, n)));
        }
        Ok(Self::from_terms(self.denom, self.order, e.into_iter().enumerate().map(|(i, c)| (i as i64, c))))
    }

    /// `q d/dq`: the coefficient at exponent `e` is multiplied by `e`.
    pub fn q_ddq(&self) -> Self {
        let mut out = Self::zero(self.denom, self.order);
        for (&n, c) in &self.coeffs {
            out.add_term(n, c.scale(&rat(n, self.denom)));
        }
        out
    }

    /// Inverse of [`QSeries::q_ddq`] on series without constant term.
    pub fn q_ddq_inverse(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Domain("q d/dq has no preimage for a constant term".into()));
        }
        let mut out = Self::zero(self.denom, self.order);
        for (&n, c) in &self.coeffs {
            out.add_term(n, c.scale(&rat(self.denom, n)));
        }
        Ok(out)
    }

    /// Substitutes `q -> twist * q^(stretch_num/stretch_den)`.
    ///
    /// A twist multiplies the coefficient of `q^e` by `w^(l e)` and so needs
    /// integral exponents.
    pub fn substitute(&self, twist: Twist, stretch_num: i64, stretch_den: i64) -> Result<Self> {
        if stretch_num <= 0 || stretch_den <= 0 {
            return Err(Error::Denominator("stretch must be a positive rational".into()));
        }
        if twist != Twist::None && self.coeffs.keys().any(|&n| n % self.denom != 0) {
            return Err(Error::Denominator(
                "a root-of-unity twist needs integer exponents".into(),
            ));
        }
        let nd = self.denom * stretch_den;
        let mut out = Self::zero(nd, self.order * stretch_num);
        for (&n, c) in &self.coeffs {
            let e = n / self.denom;
            let c = match twist {
                Twist::None => c.clone(),
                Twist::Sign => {
                    if e.rem_euclid(2) == 1 {
                        -c
                    } else {
                        c.clone()
                    }
                }
                Twist::Root { r, l } => {
                    let w = ExactCoeff::root_of_unity(r, (l.rem_euclid(r as i64)) * e.rem_euclid(r as i64));
                    c.try_mul(&w)?
                }
            };
            out.add_term(n * stretch_num, c);
        }
        Ok(out.normalized())
    }

    /// `[f]_k`: keeps the integral exponents congruent to `k` mod `r`.
    pub fn project_congruence(&self, r: u32, k: i64) -> Result<Self> {
        if self.coeffs.keys().any(|&n| n % self.denom != 0) {
            return Err(Error::Domain("projection needs integer exponents".into()));
        }
        let r = r as i64;
        let k = k.rem_euclid(r);
        Ok(Self {
            denom: self.denom,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&n, _)| (n / self.denom).rem_euclid(r) == k)
                .map(|(&n, c)| (n, c.clone()))
                .collect(),
        })
    }

    /// Copy without the `q^0` term.
    pub fn without_constant(&self) -> Self {
        let mut s = self.clone();
        s.coeffs.remove(&0);
        s
    }

    /// True when both agree below the smaller truncation order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }

    /// Keys (in units of `1/denom`) where the two differ below the common order.
    pub fn differences(&self, other: &Self) -> Result<Vec<(BigRational, ExactCoeff, ExactCoeff)>> {
        let (a, b) = Self::aligned(self, other);
        let order = a.order.min(b.order);
        let keys: std::collections::BTreeSet<i64> =
            a.coeffs.keys().chain(b.coeffs.keys()).copied().filter(|&n| n < order).collect();
        let mut out = Vec::new();
        for n in keys {
            let (x, y) = (a.coeff(n), b.coeff(n));
            if !x.try_sub(&y)?.is_zero() {
                out.push((rat(n, a.denom), x, y));
            }
        }
        Ok(out)
    }
}

/// Equal truncation and equal coefficients, independent of the denominator used.
impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.denom == b.denom && a.order == b.order && a.coeffs == b.coeffs
    }
}

fn fmt_exponent(n: i64, d: i64) -> String {
    let e = rat(n, d);
    if e.is_integer() {
        if e.is_one() {
            "q".into()
        } else {
            format!("q^{e}")
        }
    } else {
        format!("q^({e})")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&n, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            if n == 0 {
                write!(f, "{cs}")?;
            } else if c.is_one() {
                write!(f, "{}", fmt_exponent(n, self.denom))?;
            } else {
                write!(f, "{cs}*{}", fmt_exponent(n, self.denom))?;
            }
        }
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "O({})", fmt_exponent(self.order, self.denom))
    }
}

impl Zero for QSeries {
    fn zero() -> Self {
        QSeries::zero(1, DEFAULT_ORDER)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl std::ops::Add for QSeries {
    type Output = QSeries;
    fn add(self, rhs: QSeries) -> QSeries {
        self.try_add(&rhs).expect("modulus mismatch in series +")
    }
}
