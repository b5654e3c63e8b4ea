//! Combinatorics of the quasimap to Gromov-Witten wall-crossing on a curve.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::coeff::{int, is_prime, rpow};
use crate::algebra::ExactCoeff;
use crate::error::{Error, Result};
use crate::qminv::{qm_w0, InvariantKey, Role};

/// Numerical K-theory class `(rank, degree)` on a curve of genus `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KNumClass {
    pub rank: i64,
    pub degree: i64,
}

impl KNumClass {
    pub const fn new(rank: i64, degree: i64) -> Self {
        Self { rank, degree }
    }

    /// `chi(x . y) = r_x d_y + r_y d_x + r_x r_y (1 - g)`.
    pub fn chi(&self, other: &KNumClass, g: u32) -> i64 {
        self.rank * other.degree + other.rank * self.degree + self.rank * other.rank * (1 - g as i64)
    }

    pub fn is_skyscraper(&self) -> bool {
        self.rank == 0
    }
}

impl std::fmt::Display for KNumClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.rank, self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UmEntry {
    pub m: i64,
    pub h_m: i64,
    pub u_m: KNumClass,
    pub skyscraper: bool,
    /// `(-1)^chi(w-check . v)`.
    pub sign: i64,
    /// Virtual Euler characteristic of the Quot scheme, where known.
    pub known_evir: Option<ExactCoeff>,
}

fn validate(r: u32, d: i64) -> Result<()> {
    if !is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    if d == 0 {
        return Err(Error::Domain("degree d must be nonzero".into()));
    }
    Ok(())
}

/// A class `u` with `chi(v . u) = 1` for `v = (r, d)`, `gcd(r, d) = 1`.
pub fn default_u(r: u32, d: i64, g: u32) -> Result<KNumClass> {
    validate(r, d)?;
    let ri = r as i64;
    if d.gcd(&ri) != 1 {
        return Err(Error::Domain(format!("gcd({r}, {d}) != 1")));
    }
    let slope = d + ri * (1 - g as i64);
    let ru = (0..ri)
        .find(|x| (d * x - 1).rem_euclid(ri) == 0)
        .ok_or_else(|| Error::Inconsistency("no inverse of d".into()))?;
    let du = (1 - ru * slope) / ri;
    let u = KNumClass::new(ru, du);
    debug_assert_eq!(KNumClass::new(ri, d).chi(&u, g), 1);
    Ok(u)
}

/// The class `w-check` with `chi(u . w-check) = 0` and
/// `d rank - r degree = w`.
pub fn solve_degree_class(r: u32, d: i64, g: u32, u: KNumClass, w: i64) -> Result<KNumClass> {
    validate(r, d)?;
    let ri = r as i64;
    let v = KNumClass::new(ri, d);
    if v.chi(&u, g) != 1 {
        return Err(Error::InvalidClass(format!("chi(v . u) = {} for u = {u}", v.chi(&u, g))));
    }
    // (d_u + r_u(1-g)) R + r_u D = 0 ;  d R - r D = w
    let a11 = u.degree + u.rank * (1 - g as i64);
    let a12 = u.rank;
    let (a21, a22) = (d, -ri);
    let det = a11 * a22 - a12 * a21;
    let rn = -a12 * w;
    let dn = a11 * w;
    if det == 0 || rn % det != 0 || dn % det != 0 {
        return Err(Error::Inconsistency(format!("no integral solution for w = {w}")));
    }
    let sol = KNumClass::new(rn / det, dn / det);
    debug_assert_eq!(u.chi(&sol, g), 0);
    debug_assert_eq!(d * sol.rank - ri * sol.degree, w);
    Ok(sol)
}

/// Entries `u_m = h_m v - w-check/m` over common divisors `m` of both
/// components of `w-check`.
pub fn enumerate_um(r: u32, d: i64, g: u32, wc: KNumClass) -> Result<Vec<UmEntry>> {
    validate(r, d)?;
    let ri = r as i64;
    let v = KNumClass::new(ri, d);
    let gcd = wc.rank.gcd(&wc.degree);
    let sign = if v.chi(&wc, g).rem_euclid(2) == 0 { 1 } else { -1 };
    let mut out = Vec::new();
    for m in 1..=gcd {
        if gcd % m != 0 {
            continue;
        }
        let rk = wc.rank / m;
        let h = Integer::div_ceil(&rk, &ri);
        let u_m = KNumClass::new(h * ri - rk, h * d - wc.degree / m);
        let known_evir = if u_m == KNumClass::new(0, 1) {
            Some(ExactCoeff::from_int(ri * (2 - 2 * g as i64)))
        } else if !u_m.is_skyscraper() && g >= 2 {
            Some(ExactCoeff::zero())
        } else {
            None
        };
        out.push(UmEntry {
            m,
            h_m: h,
            u_m,
            skyscraper: u_m.is_skyscraper(),
            sign,
            known_evir,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    AllVanish,
    SkyscraperOnly(Vec<UmEntry>),
}

/// Which Quot schemes can contribute to the wall-crossing for `(r, d, w)`.
pub fn vanishing_verdict(r: u32, d: i64, w: i64, g: u32, u: KNumClass) -> Result<Verdict> {
    validate(r, d)?;
    let ri = r as i64;
    if d.gcd(&ri) != 1 {
        return Err(Error::Domain(format!("gcd({r}, {d}) != 1")));
    }
    let wc = solve_degree_class(r, d, g, u, w)?;
    let entries = enumerate_um(r, d, g, wc)?;
    let sky: Vec<UmEntry> = entries.into_iter().filter(|e| e.skyscraper).collect();
    if w.gcd(&ri) == 1 {
        if !sky.is_empty() {
            return Err(Error::Inconsistency(format!("skyscraper u_m although gcd({r}, {w}) = 1")));
        }
        return Ok(Verdict::AllVanish);
    }
    Ok(Verdict::SkyscraperOnly(sky))
}

/// `e(M-check) = -r^(4g-3)` and `e_orb(M-hat) = -r^(2g-3) + (r-1)(r^(4g-3) - r^(2g-3))`.
pub fn euler_chars(r: u32, g: u32) -> Result<(BigRational, BigRational)> {
    if !is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    if g < 2 {
        return Err(Error::OutOfRange("Euler characteristics need g >= 2".into()));
    }
    let ri = r as i64;
    let big = rpow(ri, 4 * g as i64 - 3);
    let small = rpow(ri, 2 * g as i64 - 3);
    let e_sl = -big.clone();
    let e_orb = -small.clone() + int(ri - 1) * (big - small);
    Ok((e_sl, e_orb))
}

/// `sum_a QM-hat^a_(d,0)` for a fixed nonzero `d`.
pub fn orbifold_sum_from_w0(r: u32, g: u32, d: u32) -> Result<BigRational> {
    let mut s = BigRational::zero();
    for a in 0..r {
        s += qm_w0(&InvariantKey::new(Role::PGL, r, g, d, a)?)?;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Delta {
    /// `Q_(d,w)` and `Q_(d,w) e`.
    Known { q: ExactCoeff, delta: ExactCoeff },
    Unknown { missing: Vec<KNumClass> },
}

/// `Q_(d,w) . e(M-check(d))` (or the orbifold Euler characteristic for the
/// quotient side) when every contributing Quot scheme has a known value.
pub fn wallcross_delta(r: u32, d: i64, g: u32, w: i64, u: KNumClass, role: Role) -> Result<Delta> {
    let wc = solve_degree_class(r, d, g, u, w)?;
    let entries = enumerate_um(r, d, g, wc)?;
    let missing: Vec<KNumClass> = entries.iter().filter(|e| e.known_evir.is_none()).map(|e| e.u_m).collect();
    if !missing.is_empty() {
        return Ok(Delta::Unknown { missing });
    }
    let mut q = BigRational::zero();
    for e in &entries {
        if let Some(ev) = &e.known_evir {
            q += ev.as_rational().unwrap_or_else(BigRational::zero) * int(e.sign) / int(e.m);
        }
    }
    let (e_sl, e_orb) = euler_chars(r, g)?;
    let e = match role {
        Role::SL => e_sl,
        Role::PGL => e_orb,
    };
    Ok(Delta::Known {
        delta: ExactCoeff::rational(&q * e),
        q: ExactCoeff::rational(q),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRun {
    pub d: i64,
    pub u: KNumClass,
    pub w_check: KNumClass,
    pub entries: Vec<UmEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<ExactCoeff>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DIndependence {
    pub r: u32,
    pub g: u32,
    pub w: i64,
    pub runs: Vec<DegreeRun>,
    /// Multisets `{(m, u_m)}` of skyscraper entries agree across `d`.
    pub contributing_agree: bool,
    /// The full multisets agree.
    pub full_agree: bool,
    /// `Q_(d,w)` agrees wherever it is known. The sign `(-1)^chi(w-check . v)`
    /// depends on the choice of `u`, so this is reported, not required.
    pub q_agree: bool,
}

impl DIndependence {
    pub fn pass(&self) -> bool {
        self.contributing_agree
    }
}

/// Runs solve and enumerate for every `d` in `1..r` (all coprime to prime
/// `r`) with the class from [`default_u`].
pub fn d_independence_check(r: u32, g: u32, w: i64) -> Result<DIndependence> {
    if !is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    let mut runs = Vec::new();
    for d in 1..r as i64 {
        let u = default_u(r, d, g)?;
        let wc = solve_degree_class(r, d, g, u, w)?;
        let entries = enumerate_um(r, d, g, wc)?;
        let q = match wallcross_delta(r, d, g, w, u, Role::SL)? {
            Delta::Known { q, .. } => Some(q),
            Delta::Unknown { .. } => None,
        };
        runs.push(DegreeRun {
            d,
            u,
            w_check: wc,
            entries,
            q,
        });
    }
    let key = |run: &DegreeRun, only_sky: bool| -> Vec<(i64, KNumClass)> {
        let mut v: Vec<_> = run
            .entries
            .iter()
            .filter(|e| !only_sky || e.skyscraper)
            .map(|e| (e.m, e.u_m))
            .collect();
        v.sort();
        v
    };
    let all_eq = |only_sky: bool| runs.windows(2).all(|p| key(&p[0], only_sky) == key(&p[1], only_sky));
    let known: Vec<&ExactCoeff> = runs.iter().filter_map(|r| r.q.as_ref()).collect();
    Ok(DIndependence {
        r,
        g,
        w,
        contributing_agree: all_eq(true),
        full_agree: all_eq(false),
        q_agree: known.windows(2).all(|p| p[0] == p[1]),
        runs,
    })
}

/// `e_orb(M-hat)` against `sum_a QM-hat^a_(d,0)` for every nonzero `d`.
pub fn euler_cross_check(r: u32, g: u32) -> Result<bool> {
    let (_, e_orb) = euler_chars(r, g)?;
    for d in 1..r {
        if orbifold_sum_from_w0(r, g, d)? != e_orb {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    const U11: KNumClass = KNumClass::new(1, 1);

    #[test]
    fn solve_examples() {
        assert_eq!(solve_degree_class(2, 1, 2, U11, 1).unwrap(), KNumClass::new(1, 0));
        assert_eq!(solve_degree_class(2, 1, 2, U11, 2).unwrap(), KNumClass::new(2, 0));
        assert!(matches!(
            solve_degree_class(2, 1, 2, KNumClass::new(1, 0), 1),
            Err(Error::InvalidClass(_))
        ));
        assert_eq!(default_u(2, 1, 2).unwrap(), U11);
    }

    #[test]
    fn enumerate_examples() {
        let e = enumerate_um(2, 1, 2, KNumClass::new(1, 0)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].u_m, U11);
        assert!(!e[0].skyscraper);
        let e = enumerate_um(2, 1, 2, KNumClass::new(2, 0)).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].m, e[0].u_m, e[0].skyscraper), (1, KNumClass::new(0, 1), true));
        assert_eq!(e[0].known_evir, Some(ExactCoeff::from_int(-4)));
        assert_eq!((e[1].m, e[1].u_m, e[1].skyscraper), (2, U11, false));
        for x in enumerate_um(3, 1, 2, KNumClass::new(0, 6)).unwrap() {
            assert!(x.skyscraper);
        }
    }

    #[test]
    fn verdicts_and_delta() {
        assert_eq!(vanishing_verdict(2, 1, 1, 2, U11).unwrap(), Verdict::AllVanish);
        match vanishing_verdict(2, 1, 2, 2, U11).unwrap() {
            Verdict::SkyscraperOnly(v) => assert_eq!(v.len(), 1),
            v => panic!("{v:?}"),
        }
        let u = default_u(3, 1, 2).unwrap();
        assert_eq!(vanishing_verdict(3, 1, 5, 2, u).unwrap(), Verdict::AllVanish);
        assert_eq!(
            wallcross_delta(2, 1, 2, 1, U11, Role::SL).unwrap(),
            Delta::Known { q: ExactCoeff::zero(), delta: ExactCoeff::zero() }
        );
        assert_eq!(
            wallcross_delta(2, 1, 2, 2, U11, Role::SL).unwrap(),
            Delta::Known { q: ExactCoeff::from_int(-4), delta: ExactCoeff::from_int(128) }
        );
        match wallcross_delta(2, 1, 2, 4, U11, Role::SL).unwrap() {
            Delta::Unknown { missing } => assert!(missing.contains(&KNumClass::new(0, 2))),
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn sign_depends_on_u() {
        let v = KNumClass::new(3, 2);
        let parity = |u: KNumClass| v.chi(&solve_degree_class(3, 2, 2, u, 3).unwrap(), 2).rem_euclid(2);
        assert_ne!(parity(KNumClass::new(2, 1)), parity(KNumClass::new(-1, 0)));
    }

    #[test]
    fn euler() {
        let (a, b) = euler_chars(2, 2).unwrap();
        assert_eq!((a, b), (int(-32), int(28)));
        let (a, b) = euler_chars(3, 2).unwrap();
        assert_eq!((a, b), (int(-243), int(-3 + 2 * (243 - 3))));
        for r in [2, 3] {
            for g in [2, 3] {
                assert!(euler_cross_check(r, g).unwrap(), "r={r} g={g}");
            }
        }
    }

    #[test]
    fn d_independence() {
        assert!(d_independence_check(2, 2, 2).unwrap().pass());
        let c = d_independence_check(3, 2, 3).unwrap();
        assert!(c.pass(), "{c:?}");
        assert!(!c.full_agree && !c.q_agree);
        let c = d_independence_check(5, 2, 10).unwrap();
        assert!(c.pass(), "{c:?}");
    }
}
