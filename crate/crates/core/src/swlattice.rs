//! Seiberg-Witten data of `X x E`, the mod-`r` intersection lattice and
//! half-norm point counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::coeff::{int, is_prime, rpow};
use crate::error::{Error, Result};

/// Default cap on brute-force enumerations.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// A class `(d, m, a)` in `H^2(X x E; Z_r)`; `m` is `2g` hyperbolic pairs
/// `(u_1, v_1, ..., u_2g, v_2g)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohClass {
    pub r: u32,
    pub g: u32,
    pub d: u32,
    pub m: Vec<u32>,
    pub a: u32,
}

impl CohClass {
    pub fn new(r: u32, g: u32, d: u32, m: Vec<u32>, a: u32) -> Result<Self> {
        if !is_prime(r) {
            return Err(Error::UnsupportedRank(r));
        }
        if g == 0 {
            return Err(Error::InvalidClass("genus must be at least 1".into()));
        }
        if m.len() != 4 * g as usize {
            return Err(Error::InvalidClass(format!("m needs {} entries, got {}", 4 * g, m.len())));
        }
        Ok(Self {
            r,
            g,
            d: d % r,
            m: m.into_iter().map(|x| x % r).collect(),
            a: a % r,
        })
    }

    /// `(d, 0, a)`.
    pub fn with_zero_m(r: u32, g: u32, d: u32, a: u32) -> Result<Self> {
        Self::new(r, g, d, vec![0; 4 * g as usize], a)
    }

    /// Decodes an index in `0..r^(4g+2)` as `(d, m, a)`, `d` most significant.
    pub fn from_index(r: u32, g: u32, mut idx: u128) -> Result<Self> {
        let n = 4 * g as usize + 2;
        let mut digits = vec![0u32; n];
        for slot in digits.iter_mut().rev() {
            *slot = (idx % r as u128) as u32;
            idx /= r as u128;
        }
        Self::new(r, g, digits[0], digits[1..n - 1].to_vec(), digits[n - 1])
    }

    pub fn m_is_zero(&self) -> bool {
        self.m.iter().all(|&x| x == 0)
    }

    /// Intersection pairing mod `r`.
    pub fn pairing(&self, other: &Self) -> Result<u32> {
        if self.r != other.r || self.g != other.g {
            return Err(Error::InvalidClass("pairing of classes from different lattices".into()));
        }
        let r = self.r as u64;
        let mut s = self.d as u64 * other.a as u64 + self.a as u64 * other.d as u64;
        s += hyperbolic_pairing(&self.m, &other.m, self.r) as u64;
        Ok((s % r) as u32)
    }

    /// Half-norm `d a + Q(m)` mod `r`, computed on an integral lift.
    pub fn half_norm(&self) -> u32 {
        ((self.d as u64 * self.a as u64 + half_norm_m(&self.m, self.r) as u64) % self.r as u64) as u32
    }
}

/// `sum (u_i v'_i + v_i u'_i)` mod `r`.
pub fn hyperbolic_pairing(m: &[u32], n: &[u32], r: u32) -> u32 {
    let r = r as u64;
    let mut s = 0u64;
    for (x, y) in m.chunks_exact(2).zip(n.chunks_exact(2)) {
        s = (s + x[0] as u64 * y[1] as u64 + x[1] as u64 * y[0] as u64) % r;
    }
    s as u32
}

/// `Q(m) = sum u_i v_i` mod `r`.
pub fn half_norm_m(m: &[u32], r: u32) -> u32 {
    let r = r as u64;
    m.chunks_exact(2).fold(0u64, |s, p| (s + p[0] as u64 * p[1] as u64) % r) as u32
}

fn binom(n: u32, k: u32) -> Result<i64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    i64::try_from(acc).map_err(|_| Error::OutOfRange(format!("binomial({n},{k}) overflows")))
}

/// `SW(a_k) = (-1)^k binom(2g-2, k)`.
pub fn sw_invariant(g: u32, k: u32) -> Result<i64> {
    if g == 0 || k > 2 * g - 2 {
        return Err(Error::OutOfRange(format!("k = {k} outside 0..=2g-2 for g = {g}")));
    }
    let b = binom(2 * g - 2, k)?;
    Ok(if k % 2 == 0 { b } else { -b })
}

/// The four binomial identities used to cancel the placeholder symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct D0Report {
    pub g: u32,
    pub sum_sw: i64,
    pub sum_sw_times_2k: i64,
    pub odd_weighted: i64,
    pub even_weighted: i64,
    pub odd_binomial_sum: i64,
    pub expected_odd_binomial_sum: i64,
    pub holds: bool,
}

pub fn check_d0_identities(g: u32) -> Result<D0Report> {
    if g < 2 {
        return Err(Error::OutOfRange("the identities need g >= 2".into()));
    }
    let n = 2 * g - 2;
    let (mut s0, mut s1, mut odd_w, mut even_w, mut odd_s) = (0i64, 0i64, 0i64, 0i64, 0i64);
    for k in 0..=n {
        let b = binom(n, k)?;
        let sw = sw_invariant(g, k)?;
        s0 += sw;
        s1 += sw * 2 * k as i64;
        let w = b * (n as i64 - 2 * k as i64);
        if k % 2 == 1 {
            odd_w += w;
            odd_s += b;
        } else {
            even_w += w;
        }
    }
    let expected = 1i64 << (2 * g - 3);
    Ok(D0Report {
        g,
        sum_sw: s0,
        sum_sw_times_2k: s1,
        odd_weighted: odd_w,
        even_weighted: even_w,
        odd_binomial_sum: odd_s,
        expected_odd_binomial_sum: expected,
        holds: s0 == 0 && s1 == 0 && odd_w == 0 && even_w == 0 && odd_s == expected,
    })
}

/// Counts `m` in `(Z_r)^(4g)` with `Q(m) = k` mod `r` by enumeration.
pub fn count_nk_bruteforce(r: u32, g: u32, k: u32, budget: u128) -> Result<u128> {
    Ok(count_all_nk_bruteforce(r, g, budget)?[(k % r) as usize])
}

/// All `N_k`, `k = 0..r`, by one enumeration.
pub fn count_all_nk_bruteforce(r: u32, g: u32, budget: u128) -> Result<Vec<u128>> {
    if !is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    let dim = 4 * g;
    let needed = (r as u128).checked_pow(dim).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let rr = r as u128;
    let chunk = rr.pow(dim.min(6));
    let chunks = needed / chunk;
    let partial: Vec<Vec<u128>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0u128; r as usize];
            let mut m = vec![0u32; dim as usize];
            for off in 0..chunk {
                let mut idx = c * chunk + off;
                for slot in m.iter_mut() {
                    *slot = (idx % rr) as u32;
                    idx /= rr;
                }
                counts[half_norm_m(&m, r) as usize] += 1;
            }
            counts
        })
        .collect();
    let mut total = vec![0u128; r as usize];
    for p in partial {
        for (t, x) in total.iter_mut().zip(p) {
            *t += x;
        }
    }
    Ok(total)
}

/// `N_0 = r^(4g-1) + r^(2g) - r^(2g-1)`, `N_(k != 0) = r^(4g-1) - r^(2g-1)`.
pub fn count_nk_closed(r: u32, g: u32, k: u32) -> BigInt {
    let r = r as i64;
    let g = g as i64;
    let base = rpow(r, 4 * g - 1) - rpow(r, 2 * g - 1);
    let v = if k as i64 % r == 0 { base + rpow(r, 2 * g) } else { base };
    v.to_integer()
}

/// The genus-one `N_0` as printed, `r^3 + r^2 - r^(-1)`.
pub fn printed_g1_n0(r: u32) -> BigRational {
    let r = r as i64;
    rpow(r, 3) + rpow(r, 2) - rpow(r, -1)
}

/// Brute-force genus-one `N_0` against the printed value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct G1CountNote {
    pub r: u32,
    pub brute_force: String,
    pub closed_form: String,
    pub printed: String,
    pub printed_matches: bool,
}

pub fn g1_count_note(r: u32, budget: u128) -> Result<G1CountNote> {
    let bf = count_nk_bruteforce(r, 1, 0, budget)?;
    let printed = printed_g1_n0(r);
    Ok(G1CountNote {
        r,
        brute_force: bf.to_string(),
        closed_form: count_nk_closed(r, 1, 0).to_string(),
        printed: printed.to_string(),
        printed_matches: printed == BigRational::from_integer(BigInt::from(bf)),
    })
}

/// Intersection numbers of `X x E` with the classes `a_k` and `B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopData {
    pub g: u32,
    pub euler_characteristic: i64,
    pub signature: i64,
    pub holomorphic_euler_characteristic: i64,
    /// The row `c_1(X x E) = 0` exactly as listed.
    pub c1_listed: i64,
    pub a_k_squared: i64,
    pub b_squared: i64,
    pub c1_dot_b: i64,
}

impl TopData {
    /// `(c_1 - 2 a_k) . B = 2g - 2 - 2k`.
    pub fn c1_minus_2ak_dot_b(&self, k: u32) -> i64 {
        self.c1_dot_b - 2 * k as i64
    }
}

pub fn topological_data(g: u32) -> Result<TopData> {
    if g == 0 {
        return Err(Error::OutOfRange("genus must be at least 1".into()));
    }
    Ok(TopData {
        g,
        euler_characteristic: 0,
        signature: 0,
        holomorphic_euler_characteristic: 0,
        c1_listed: 0,
        a_k_squared: 0,
        b_squared: 0,
        c1_dot_b: 2 * g as i64 - 2,
    })
}

/// `r^(4g)` as an exact integer, the number of middle classes.
pub fn middle_class_count(r: u32, g: u32) -> BigInt {
    int(r as i64).numer().pow(4 * g)
}
