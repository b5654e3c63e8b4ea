//! Conjectural genus-one quasimap generating series and degree-zero tables
//! for prime rank, and their rank-two derivation from the insertion series.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::coeff::{int, is_prime, rpow};
use crate::algebra::{ExactCoeff, QSeries};
use crate::error::{Error, Result};
use crate::mmseries::{vw_hat_b_t, vw_hat_b_t_m0};
use crate::modforms::{Basis, ULinComb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    /// Fixed-determinant side, `M-check`.
    SL,
    /// Quotient side, `M-hat`.
    PGL,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantKey {
    pub role: Role,
    pub r: u32,
    pub g: u32,
    pub d: u32,
    pub a: u32,
}

impl InvariantKey {
    pub fn new(role: Role, r: u32, g: u32, d: u32, a: u32) -> Result<Self> {
        if !is_prime(r) {
            return Err(Error::UnsupportedRank(r));
        }
        if g == 0 {
            return Err(Error::OutOfRange("genus must be at least 1".into()));
        }
        if d >= r || a >= r {
            return Err(Error::OutOfRange(format!("d = {d}, a = {a} must lie in 0..{r}")));
        }
        Ok(Self { role, r, g, d, a })
    }

    /// All `r^2` keys of one role.
    pub fn all(role: Role, r: u32, g: u32) -> Result<Vec<Self>> {
        let mut v = Vec::new();
        for d in 0..r {
            for a in 0..r {
                v.push(Self::new(role, r, g, d, a)?);
            }
        }
        Ok(v)
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(r={}, g={}, d={}, a={})", self.role, self.r, self.g, self.d, self.a)
    }
}

fn q(x: BigRational) -> ExactCoeff {
    ExactCoeff::rational(x)
}

/// Structured note for inputs outside the stated range of the formulas.
pub fn qm_series_warning(key: &InvariantKey) -> Option<String> {
    (key.g == 1).then(|| "g = 1: every coefficient carries 2 - 2g, the series is zero".to_string())
}

/// The conjectural series in the `U` basis, general prime-rank formulas.
pub fn qm_series(key: &InvariantKey) -> Result<ULinComb> {
    let InvariantKey { role, r, g, d, a } = *key;
    let (ri, gi) = (r as i64, g as i64);
    let c = int(2 - 2 * gi);
    let mut out = ULinComb::zero(r, Basis::Log);
    let twisted = |out: &mut ULinComb, scale: &BigRational, from: usize| {
        for i in from..=r as usize + 1 {
            let w = ExactCoeff::root_of_unity(r, -((d * a) as i64) * (i as i64 - 2));
            out.coeffs[i - 1] = w.scale(scale);
        }
    };
    match (role, a, d) {
        (Role::SL, 0, 0) => out.coeffs[0] = q(c * int(ri - 1) * rpow(ri, 4 * gi - 1)),
        (Role::SL, 0, _) => out.coeffs[0] = q(-c * rpow(ri, 4 * gi - 1)),
        (Role::SL, _, _) => twisted(&mut out, &(c * rpow(ri, 2 * gi - 1)), 2),
        (Role::PGL, 0, 0) => out.coeffs[0] = q(c * int(ri - 1) * rpow(ri, 2 * gi - 1)),
        (Role::PGL, 0, _) => out.coeffs[0] = q(-c * rpow(ri, 2 * gi - 1)),
        (Role::PGL, _, _) => {
            twisted(&mut out, &(c.clone() * rpow(ri, 2 * gi - 1)), 3);
            out.coeffs[1] = q(c * rpow(ri, 4 * gi - 1));
        }
    }
    Ok(out)
}

/// The rank-two formulas as stated separately for `r = 2`.
pub fn qm_series_r2(key: &InvariantKey) -> Result<ULinComb> {
    if key.r != 2 {
        return Err(Error::UnsupportedRank(key.r));
    }
    let gi = key.g as i64;
    let c = int(2 - 2 * gi);
    let s = if key.d == 0 { int(1) } else { int(-1) };
    let mut out = ULinComb::zero(2, Basis::Log);
    match (key.role, key.a) {
        (Role::SL, 0) => out.coeffs[0] = q(s * c * rpow(2, 4 * gi - 1)),
        (Role::SL, _) => {
            let k = c * rpow(2, 2 * gi - 1);
            out.coeffs[1] = q(k.clone());
            out.coeffs[2] = q(s * k);
        }
        (Role::PGL, 0) => out.coeffs[0] = q(s * c * rpow(2, 2 * gi - 1)),
        (Role::PGL, _) => {
            out.coeffs[1] = q(c.clone() * rpow(2, 4 * gi - 1));
            out.coeffs[2] = q(s * c * rpow(2, 2 * gi - 1));
        }
    }
    Ok(out)
}

/// The `a != 0` series through the projection `[U_2]_(d a)`, as a q-series.
pub fn qm_series_projected(key: &InvariantKey, order: i64) -> Result<QSeries> {
    if key.a == 0 {
        return Err(Error::Domain("the projected form applies to a != 0".into()));
    }
    let (ri, gi) = (key.r as i64, key.g as i64);
    let c = int(2 - 2 * gi);
    let u2 = crate::modforms::u_basis(key.r, 2, order)?;
    let proj = u2.project_congruence(key.r, (key.d * key.a) as i64)?.scale_rat(&(c.clone() * rpow(ri, 2 * gi)));
    match key.role {
        Role::SL => Ok(proj),
        Role::PGL => proj.try_add(&u2.scale_rat(&(c * (rpow(ri, 4 * gi - 1) - rpow(ri, 2 * gi - 1))))),
    }
}

/// Degree-zero invariant from the tables (genus one or prime rank with `g >= 2`).
pub fn qm_w0(key: &InvariantKey) -> Result<BigRational> {
    let InvariantKey { role, r, g, d, a } = *key;
    let ri = r as i64;
    if g == 1 {
        let inv = rpow(ri, -1);
        return Ok(match (role, d, a) {
            (Role::SL, 0, 0) => int(ri * ri + 1),
            (Role::SL, _, 0) => int(1),
            (Role::SL, 0, _) => int(1),
            (Role::SL, _, _) => int(0),
            (Role::PGL, 0, 0) => int(ri + 2) - inv,
            (Role::PGL, _, 0) | (Role::PGL, 0, _) => int(ri + 1) - inv,
            (Role::PGL, _, _) => int(ri) - inv,
        });
    }
    if r == 2 {
        return qm_w0_r2(key);
    }
    Ok(qm_w0_general(key))
}

/// Prime-rank table for `g >= 2`.
pub fn qm_w0_general(key: &InvariantKey) -> BigRational {
    let InvariantKey { role, r, g, d, a } = *key;
    let (ri, gi) = (r as i64, g as i64);
    let big = rpow(ri, 4 * gi - 3);
    let small = rpow(ri, 2 * gi - 3);
    match (role, d, a) {
        (Role::SL, 0, 0) => int(ri - 1) * big,
        (Role::SL, _, 0) => -big,
        (Role::SL, 0, _) => rpow(ri, 2 * gi - 2),
        (Role::SL, _, _) => BigRational::zero(),
        (Role::PGL, 0, 0) => int(ri - 1) * small,
        (Role::PGL, _, 0) => -small,
        (Role::PGL, 0, _) => big + int(ri - 1) * small,
        (Role::PGL, _, _) => big - small,
    }
}

/// Rank-two table for `g >= 2`.
pub fn qm_w0_r2(key: &InvariantKey) -> Result<BigRational> {
    if key.r != 2 {
        return Err(Error::UnsupportedRank(key.r));
    }
    let gi = key.g as i64;
    let s = if key.d == 0 { int(1) } else { int(-1) };
    Ok(match (key.role, key.d, key.a) {
        (Role::SL, _, 0) => s * rpow(2, 4 * gi - 3),
        (Role::SL, 0, _) => rpow(2, 2 * gi - 2),
        (Role::SL, _, _) => BigRational::zero(),
        (Role::PGL, _, 0) => s * rpow(2, 2 * gi - 3),
        (Role::PGL, _, _) => rpow(2, 4 * gi - 3) + s * rpow(2, 2 * gi - 3),
    })
}

/// The `q d/dq` image of the series on the insertion side, in the
/// `calU(q^2)` basis: `r [VW^a_d]_t` (PGL) or `r^(2g+1) [VW^(0,a)_d]_t` (SL).
pub fn derivative_from_mm(key: &InvariantKey) -> Result<ULinComb> {
    if key.r != 2 {
        return Err(Error::UnsupportedRank(key.r));
    }
    let r = int(2);
    match key.role {
        Role::PGL => Ok(vw_hat_b_t(key.d, key.a, key.g)?.scale_rat(&r)),
        Role::SL => Ok(vw_hat_b_t_m0(key.d, key.a, key.g)?.scale_rat(&rpow(2, 2 * key.g as i64 + 1))),
    }
}

/// Rebuilds the series from the insertion side: expand, drop the constant,
/// invert `q d/dq`, read off `U` coordinates.
pub fn derive_from_mm(key: &InvariantKey, order: i64) -> Result<ULinComb> {
    let deriv = derivative_from_mm(key)?;
    let series = deriv.expand(order)?.without_constant();
    let anti = series.q_ddq_inverse()?;
    ULinComb::extract_coords(&anti, 2, Basis::Log).map_err(|e| Error::Inconsistency(format!("antiderivative outside the U span: {e}")))
}

/// Multiplication by `r`, relating the gerbe and the `a = 0` invariant.
pub fn gerbe_scale(x: &ULinComb, r: u32) -> ULinComb {
    x.scale_rat(&int(r as i64))
}

pub fn gerbe_scale_value(x: &BigRational, r: u32) -> BigRational {
    x * int(r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn r2_examples() {
        for g in 2..=5u32 {
            let gi = g as i64;
            for d in 0..2 {
                let sl = qm_series(&InvariantKey::new(Role::SL, 2, g, d, 0).unwrap()).unwrap();
                let s = if d == 0 { 1 } else { -1 };
                assert_eq!(sl.coeffs[0], ExactCoeff::rational(int(s * (2 - 2 * gi)) * rpow(2, 4 * gi - 1)));
            }
        }
        assert_eq!(
            qm_w0(&InvariantKey::new(Role::SL, 2, 3, 1, 0).unwrap()).unwrap(),
            -rpow(2, 9)
        );
        assert_eq!(qm_w0(&InvariantKey::new(Role::PGL, 3, 1, 1, 2).unwrap()).unwrap(), rat(8, 3));
        assert_eq!(qm_w0(&InvariantKey::new(Role::SL, 5, 2, 2, 3).unwrap()).unwrap(), int(0));
    }

    #[test]
    fn g1_series_vanish() {
        let k = InvariantKey::new(Role::PGL, 3, 1, 1, 1).unwrap();
        assert!(qm_series(&k).unwrap().is_zero());
        assert!(qm_series_warning(&k).is_some());
    }

    #[test]
    fn r3_sl_projection_example() {
        let k = InvariantKey::new(Role::SL, 3, 2, 1, 1).unwrap();
        let lhs = qm_series(&k).unwrap().expand(30).unwrap();
        let u2 = crate::modforms::u_basis(3, 2, 30).unwrap();
        let rhs = u2.project_congruence(3, 1).unwrap().scale_rat(&(int(-2) * rpow(3, 4)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pipeline_examples() {
        for g in 2..=3u32 {
            let gi = g as i64;
            let k = InvariantKey::new(Role::PGL, 2, g, 0, 0).unwrap();
            let got = derive_from_mm(&k, 24).unwrap();
            assert_eq!(got.coeffs[0], ExactCoeff::rational(int(2 - 2 * gi) * rpow(2, 2 * gi - 1)));
            let k = InvariantKey::new(Role::SL, 2, g, 1, 1).unwrap();
            let got = derive_from_mm(&k, 24).unwrap();
            let c = int(2 - 2 * gi) * rpow(2, 2 * gi - 1);
            assert_eq!(got.coeffs[1], ExactCoeff::rational(c.clone()));
            assert_eq!(got.coeffs[2], ExactCoeff::rational(-c));
        }
    }

    #[test]
    fn gerbe() {
        assert_eq!(gerbe_scale_value(&rpow(2, 5), 2), rpow(2, 6));
        assert!(gerbe_scale_value(&int(0), 3).is_zero());
        let c = ULinComb::single(3, Basis::Log, 1, ExactCoeff::from_int(7));
        assert_eq!(gerbe_scale(&c, 3).coeffs[0], ExactCoeff::from_int(21));
    }

    #[test]
    fn bad_keys() {
        assert!(InvariantKey::new(Role::SL, 4, 2, 0, 0).is_err());
        assert!(InvariantKey::new(Role::SL, 3, 2, 3, 0).is_err());
    }
}
