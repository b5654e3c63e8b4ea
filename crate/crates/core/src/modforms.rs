//! Theta functions, Eisenstein series and the two bases of generating series.
//!
//! The insertion side uses the weight-two objects `calU_1..3` (rank two only);
//! the quasimap side uses `U_1 = log eta~(q^(2r))` and
//! `U_(2+l) = log eta~(w^l q)`, where `eta~ = prod (1 - q^k)` is eta without
//! its `q^(1/24)` prefactor.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::coeff::{is_prime, rat};
use crate::algebra::linalg;
use crate::algebra::{ExactCoeff, QSeries, Twist};
use crate::error::{Error, Result};

/// `sigma_1(n)` for `0 <= n < len`, by sieving (`sigma_1(0) = 0`).
pub fn divisor_sums(len: usize) -> Vec<i64> {
    let mut s = vec![0i64; len];
    for d in 1..len {
        let mut m = d;
        while m < len {
            s[m] += d as i64;
            m += d;
        }
    }
    s
}

fn check_order(order: i64) -> Result<()> {
    if order <= 0 {
        Err(Error::OutOfRange(format!("order must be positive, got {order}")))
    } else {
        Ok(())
    }
}

/// `theta_i` for `i` in {2, 3, 4}, known up to `q^order`.
///
/// `theta_3`, `theta_4` live on `(1/2)Z`; `theta_2` needs `(1/8)Z`.
pub fn theta(i: u8, order: i64) -> Result<QSeries> {
    check_order(order)?;
    match i {
        3 | 4 => {
            let mut terms = Vec::new();
            let mut n = 0i64;
            while n * n < 2 * order {
                let sign = if i == 4 && n % 2 == 1 { -1 } else { 1 };
                let c = if n == 0 { 1 } else { 2 * sign };
                terms.push((n * n, ExactCoeff::from_int(c)));
                n += 1;
            }
            Ok(QSeries::from_terms(2, 2 * order, terms))
        }
        2 => {
            // n = (2j+1)/2, exponent n^2/2 = (2j+1)^2/8; n and -n both counted
            let mut terms = Vec::new();
            let mut j = 0i64;
            while (2 * j + 1) * (2 * j + 1) < 8 * order {
                terms.push(((2 * j + 1) * (2 * j + 1), ExactCoeff::from_int(2)));
                j += 1;
            }
            Ok(QSeries::from_terms(8, 8 * order, terms))
        }
        _ => Err(Error::OutOfRange(format!("theta index {i} not in {{2,3,4}}"))),
    }
}

/// `E_2 = 1 - 24 sum sigma_1(n) q^n`.
pub fn e2(order: i64) -> Result<QSeries> {
    check_order(order)?;
    let s = divisor_sums(order as usize);
    let terms = (0..order).map(|n| {
        let c = if n == 0 { 1 } else { -24 * s[n as usize] };
        (n, ExactCoeff::from_int(c))
    });
    Ok(QSeries::from_terms(1, order, terms))
}

/// `G_2 = E_2 / 24`.
pub fn g2(order: i64) -> Result<QSeries> {
    Ok(e2(order)?.scale_rat(&rat(1, 24)))
}

/// `log eta~(q) = -sum sigma_1(n)/n q^n`.
pub fn log_eta_tilde(order: i64) -> Result<QSeries> {
    check_order(order)?;
    let s = divisor_sums(order as usize);
    let terms = (1..order).map(|n| (n, ExactCoeff::rational(rat(-s[n as usize], n))));
    Ok(QSeries::from_terms(1, order, terms))
}

/// Closed forms `calU_1 = -8 G_2(q^2)`, `calU_2 = -2 G_2(q^(1/2))`,
/// `calU_3 = -2 G_2(-q^(1/2))`, known up to `q^order`.
pub fn calu(i: u8, order: i64) -> Result<QSeries> {
    check_order(order)?;
    match i {
        1 => Ok(g2(order)?.substitute(Twist::None, 2, 1)?.truncate_exponent(order, 1).scale_int(-8)),
        2 => Ok(g2(2 * order)?.substitute(Twist::None, 1, 2)?.scale_int(-2)),
        3 => Ok(g2(2 * order)?.substitute(Twist::Sign, 1, 2)?.scale_int(-2)),
        _ => Err(Error::OutOfRange(format!("calU index {i} not in {{1,2,3}}"))),
    }
}

/// The theta/Eisenstein combinations
/// `(t3^4 + t4^4 + 2E_2)/12`, `(-t2^4 - t3^4 + 2E_2)/12`, `(t2^4 - t4^4 + 2E_2)/12`.
pub fn theta_combination(i: u8, order: i64) -> Result<QSeries> {
    check_order(order)?;
    let t4 = |k: u8| -> Result<QSeries> { theta(k, order)?.pow(4) };
    let two_e2 = e2(order)?.scale_int(2);
    let sum = match i {
        1 => t4(3)?.try_add(&t4(4)?)?,
        2 => t4(2)?.neg().try_sub(&t4(3)?)?,
        3 => t4(2)?.try_sub(&t4(4)?)?,
        _ => return Err(Error::OutOfRange(format!("calU index {i} not in {{1,2,3}}"))),
    };
    Ok(sum.try_add(&two_e2)?.scale_rat(&rat(1, 12)).normalized())
}

/// Result of comparing one theta combination with its closed form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenserCheck {
    pub index: u8,
    pub order: i64,
    /// Literal equality of the combination and the closed form.
    pub equal: bool,
    /// Equality after flipping the sign of the closed form.
    pub equal_to_negative: bool,
    pub first_mismatch: Option<(String, String, String)>,
}

/// Compares `theta_combination(i)` with `calu(i)` coefficientwise.
pub fn check_genser(i: u8, order: i64) -> Result<GenserCheck> {
    let lhs = theta_combination(i, order)?;
    let rhs = calu(i, order)?;
    let diffs = lhs.differences(&rhs)?;
    let neg = lhs.differences(&rhs.neg())?;
    Ok(GenserCheck {
        index: i,
        order,
        equal: diffs.is_empty(),
        equal_to_negative: neg.is_empty(),
        first_mismatch: diffs.first().map(|(e, a, b)| (e.to_string(), a.to_string(), b.to_string())),
    })
}

/// `n_l` in `1..r` with `l n_l = -1 mod r`.
pub fn n_l(r: u32, l: u32) -> Result<u32> {
    if !is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    if l == 0 || l >= r {
        return Err(Error::OutOfRange(format!("l = {l} must lie in 1..{r}")));
    }
    (1..r)
        .find(|n| (l * n + 1) % r == 0)
        .ok_or_else(|| Error::Inconsistency(format!("no inverse of {l} mod {r}")))
}

/// The permutation `sigma` of `{1..r+1}`; entry `i-1` is `sigma(i)`.
pub fn sigma_perm(r: u32) -> Result<Vec<usize>> {
    if !is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    let mut p = vec![2usize, 1];
    for l in 1..r {
        p.push(2 + n_l(r, l)? as usize);
    }
    Ok(p)
}

/// `U_i` for the rank `r`, `1 <= i <= r+1`, known up to `q^order`.
pub fn u_basis(r: u32, i: usize, order: i64) -> Result<QSeries> {
    if !is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    if i == 0 || i > r as usize + 1 {
        return Err(Error::OutOfRange(format!("U index {i} outside 1..={}", r + 1)));
    }
    let base = log_eta_tilde(order)?;
    if i == 1 {
        return Ok(base.substitute(Twist::None, 2 * r as i64, 1)?.truncate_exponent(order, 1));
    }
    let l = (i - 2) as i64;
    if l == 0 {
        return Ok(base);
    }
    base.substitute(Twist::Root { r, l }, 1, 1)
}

/// Which family of series a [`ULinComb`] is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// `U_1, ..., U_(r+1)`.
    Log,
    /// `calU_1, calU_2, calU_3` evaluated at `q^stretch` (rank two).
    Quasimodular { stretch: i64 },
}

/// Linear combination of basis series with coefficients in Q(w_r).
///
/// `placeholder[j]` is the coefficient of the formal symbol `S_(j+1)`; it is
/// only populated while evaluating insertion formulas and must be zero
/// afterwards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ULinComb {
    pub r: u32,
    pub basis: Basis,
    pub coeffs: Vec<ExactCoeff>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub placeholder: Vec<ExactCoeff>,
}

impl ULinComb {
    pub fn zero(r: u32, basis: Basis) -> Self {
        let n = Self::len_for(r, basis);
        Self {
            r,
            basis,
            coeffs: vec![ExactCoeff::zero(); n],
            placeholder: Vec::new(),
        }
    }

    fn len_for(r: u32, basis: Basis) -> usize {
        match basis {
            Basis::Log => r as usize + 1,
            Basis::Quasimodular { .. } => 3,
        }
    }

    /// `c * U_i` (1-based index).
    pub fn single(r: u32, basis: Basis, i: usize, c: ExactCoeff) -> Self {
        let mut z = Self::zero(r, basis);
        z.coeffs[i - 1] = c;
        z
    }

    pub fn from_coeffs(r: u32, basis: Basis, coeffs: Vec<ExactCoeff>) -> Result<Self> {
        if coeffs.len() != Self::len_for(r, basis) {
            return Err(Error::Domain(format!(
                "expected {} coefficients, got {}",
                Self::len_for(r, basis),
                coeffs.len()
            )));
        }
        Ok(Self {
            r,
            basis,
            coeffs,
            placeholder: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of the `i`-th basis element (1-based).
    pub fn coeff(&self, i: usize) -> &ExactCoeff {
        &self.coeffs[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExactCoeff::is_zero) && self.placeholder_is_zero()
    }

    pub fn placeholder_is_zero(&self) -> bool {
        self.placeholder.iter().all(ExactCoeff::is_zero)
    }

    /// Adds `c * S_j` (1-based `j`).
    pub fn add_placeholder(&mut self, j: usize, c: &ExactCoeff) -> Result<()> {
        if self.placeholder.is_empty() {
            self.placeholder = vec![ExactCoeff::zero(); self.len()];
        }
        self.placeholder[j - 1] = self.placeholder[j - 1].try_add(c)?;
        Ok(())
    }

    /// Drops the (vanishing) placeholder part, failing if it is nonzero.
    pub fn finished(mut self) -> Result<Self> {
        if !self.placeholder_is_zero() {
            let shown: Vec<String> = self.placeholder.iter().map(|c| c.to_string()).collect();
            return Err(Error::Inconsistency(format!(
                "placeholder coefficients do not cancel: [{}]",
                shown.join(", ")
            )));
        }
        self.placeholder.clear();
        Ok(self)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.r != other.r || self.basis != other.basis {
            return Err(Error::Domain(format!(
                "cannot combine {:?}/r={} with {:?}/r={}",
                self.basis, self.r, other.basis, other.r
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<Vec<_>>>()?;
        let n = self.len();
        let pad = |v: &Vec<ExactCoeff>| if v.is_empty() { vec![ExactCoeff::zero(); n] } else { v.clone() };
        let placeholder = if self.placeholder.is_empty() && other.placeholder.is_empty() {
            Vec::new()
        } else {
            pad(&self.placeholder)
                .iter()
                .zip(&pad(&other.placeholder))
                .map(|(a, b)| a.try_add(b))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(Self {
            r: self.r,
            basis: self.basis,
            coeffs,
            placeholder,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&ExactCoeff::from_int(-1))?)
    }

    pub fn scale(&self, c: &ExactCoeff) -> Result<Self> {
        Ok(Self {
            r: self.r,
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|x| x.try_mul(c)).collect::<Result<_>>()?,
            placeholder: self.placeholder.iter().map(|x| x.try_mul(c)).collect::<Result<_>>()?,
        })
    }

    pub fn scale_rat(&self, q: &BigRational) -> Self {
        Self {
            r: self.r,
            basis: self.basis,
            coeffs: self.coeffs.iter().map(|x| x.scale(q)).collect(),
            placeholder: self.placeholder.iter().map(|x| x.scale(q)).collect(),
        }
    }

    /// `perm . sum c_i B_i = sum c_i B_(perm(i))`, with `perm[i-1] = perm(i)`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::Domain("permutation size differs from basis size".into()));
        }
        let mut out = Self::zero(self.r, self.basis);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[perm[i] - 1] = c.clone();
        }
        if !self.placeholder.is_empty() {
            out.placeholder = vec![ExactCoeff::zero(); self.len()];
            for (i, c) in self.placeholder.iter().enumerate() {
                out.placeholder[perm[i] - 1] = c.clone();
            }
        }
        Ok(out)
    }

    /// The basis element `i` (1-based) as a series up to `q^order`.
    pub fn basis_series(r: u32, basis: Basis, i: usize, order: i64) -> Result<QSeries> {
        match basis {
            Basis::Log => u_basis(r, i, order),
            Basis::Quasimodular { stretch } => {
                if r != 2 {
                    return Err(Error::UnsupportedRank(r));
                }
                let inner = (order + stretch - 1) / stretch;
                let s = calu(i as u8, inner)?.substitute(Twist::None, stretch, 1)?;
                Ok(s.truncate_exponent(order, 1))
            }
        }
    }

    /// Expansion as a q-series up to `q^order`.
    pub fn expand(&self, order: i64) -> Result<QSeries> {
        if !self.placeholder_is_zero() {
            return Err(Error::Domain("cannot expand a combination with placeholder terms".into()));
        }
        let mut acc = QSeries::zero(1, order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let b = Self::basis_series(self.r, self.basis, i + 1, order)?;
            acc = acc.try_add(&b.scale(c)?)?;
        }
        Ok(acc)
    }

    /// Coordinates of `f` in the given basis, solving the linear system on all
    /// coefficients below the truncation order; the constant term is ignored.
    pub fn extract_coords(f: &QSeries, r: u32, basis: Basis) -> Result<Self> {
        let order = f.order_exponent();
        let order_int = num_integer::Integer::div_ceil(order.numer(), order.denom());
        let order_int: i64 = num_traits::ToPrimitive::to_i64(&order_int).unwrap_or(i64::MAX);
        let n = Self::len_for(r, basis);
        let cols: Vec<QSeries> = (1..=n)
            .map(|i| Self::basis_series(r, basis, i, order_int).map(|s| s.truncate_exponent(f.order(), f.denom())))
            .collect::<Result<_>>()?;
        let mut all = vec![f.clone()];
        all.extend(cols.iter().cloned());
        let d = all.iter().fold(1i64, |acc, s| num_integer::Integer::lcm(&acc, &s.denom()));
        let all: Vec<QSeries> = all.iter().map(|s| s.rescale(d)).collect::<Result<_>>()?;
        let ord = all.iter().map(QSeries::order).min().unwrap_or(0);
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for key in 1..ord {
            let row: Vec<ExactCoeff> = all[1..].iter().map(|s| s.coeff(key)).collect();
            let b = all[0].coeff(key);
            if row.iter().all(ExactCoeff::is_zero) {
                if !b.is_zero() {
                    return Err(Error::NotInSpan(format!("coefficient at q^({key}/{d}) is unreachable")));
                }
                continue;
            }
            rows.push(row);
            rhs.push(b);
        }
        if rows.len() < n {
            return Err(Error::NotInSpan("too few coefficients to determine coordinates".into()));
        }
        let x = linalg::solve(&rows, &rhs).ok_or_else(|| Error::NotInSpan("no exact solution".into()))?;
        Self::from_coeffs(r, basis, x)
    }

    fn symbol(&self, i: usize) -> String {
        match self.basis {
            Basis::Log => format!("U{i}"),
            Basis::Quasimodular { stretch: 1 } => format!("calU{i}"),
            Basis::Quasimodular { stretch } => format!("calU{i}(q^{stretch})"),
        }
    }
}

impl fmt::Display for ULinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("({c})*{}", self.symbol(i + 1)));
            }
        }
        for (j, c) in self.placeholder.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("({c})*S{}", j + 1));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Rank of the `(r+1)`-column matrix of basis coefficients at `q^1..q^(2r)`.
pub fn u_basis_rank(r: u32) -> Result<usize> {
    let order = 2 * r as i64 + 1;
    let cols: Vec<QSeries> = (1..=r as usize + 1).map(|i| u_basis(r, i, order)).collect::<Result<_>>()?;
    let rows: Vec<Vec<ExactCoeff>> = (1..order).map(|n| cols.iter().map(|c| c.coeff(n)).collect()).collect();
    Ok(linalg::rank(&rows))
}

/// `q d/dq` of the expansion together with the constant that completes it to
/// a combination of `G_2`-type objects: `U_1 -> 2r G_2(q^(2r))` contributes
/// `c 2r/24`, each `U_(2+l) -> G_2(w^l q)` contributes `c/24`.
pub fn quasimodular_derivative(c: &ULinComb, order: i64) -> Result<(QSeries, ExactCoeff)> {
    if c.basis != Basis::Log {
        return Err(Error::Domain("quasimodular derivative is defined on the U basis".into()));
    }
    let series = c.expand(order)?.q_ddq();
    let mut k = ExactCoeff::zero();
    for (i, x) in c.coeffs.iter().enumerate() {
        let w = if i == 0 { rat(2 * c.r as i64, 24) } else { rat(1, 24) };
        k = k.try_add(&x.scale(&w))?;
    }
    Ok((series, k))
}

/// Antiderivative rule on the rank-two insertion side:
/// `q d/dq(-2 U_j) - c_j = calU_j(q^2)` with `c_1 = 1/3`, `c_2 = c_3 = 1/12`.
pub fn antiderivative_constant(j: usize) -> BigRational {
    match j {
        1 => rat(1, 3),
        2 | 3 => rat(1, 12),
        _ => BigRational::zero(),
    }
}
