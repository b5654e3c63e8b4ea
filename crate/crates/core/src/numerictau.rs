//! Floating-point checks of modular transformation laws at points of the
//! upper half-plane.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::coeff::{int, rat};
use crate::algebra::{ExactCoeff, QSeries};
use crate::error::{Error, Result};
use crate::modforms::{calu, e2, n_l, quasimodular_derivative, sigma_perm};
use crate::qminv::{qm_series, InvariantKey, Role};

/// Largest tail bound accepted by [`eval_series`].
pub const TAIL_LIMIT: f64 = 1e-3;

pub const DEFAULT_TAUS: [(f64, f64); 3] = [(0.0, 2.0), (1.0, 2.0), (0.0, 1.5)];

/// Which exponential the formal variable stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QConvention {
    /// `q = e^(2 pi i tau)`
    Full,
    /// `q = e^(pi i tau)`
    Half,
}

impl QConvention {
    fn factor(self) -> f64 {
        match self {
            QConvention::Full => 2.0,
            QConvention::Half => 1.0,
        }
    }
}

/// Serializable complex number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for C64 {
    fn from(z: Complex64) -> Self {
        C64 { re: z.re, im: z.im }
    }
}

impl From<C64> for Complex64 {
    fn from(z: C64) -> Self {
        Complex64::new(z.re, z.im)
    }
}

pub fn parse_tau(s: &str) -> Result<Complex64> {
    let t = Complex64::from_str(&s.replace(' ', ""))
        .map_err(|_| Error::Config(format!("cannot parse tau {s:?}; expected a+bi")))?;
    if !(t.im > 0.0) {
        return Err(Error::Config(format!("tau {s:?} is not in the upper half-plane")));
    }
    Ok(t)
}

/// Value of a truncation together with an estimate of the neglected tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

/// `sum_(k >= K) C k^2 rho^k` with `C = max |c_k| / k^2` over the known terms.
fn tail_bound(f: &QSeries, rho: f64) -> f64 {
    let c = f
        .terms()
        .filter(|(k, _)| *k >= 1)
        .map(|(k, v)| v.to_complex().norm() / (k as f64 * k as f64))
        .fold(0.0, f64::max);
    if c == 0.0 {
        return 0.0;
    }
    let mut k = f.order().max(1) as f64;
    let mut sum = 0.0;
    for _ in 0..1_000_000 {
        let t = c * k * k * rho.powf(k);
        sum += t;
        if t <= sum * 1e-17 || t == 0.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Evaluates the truncation at `tau` and bounds the tail.
pub fn eval_with_tail(f: &QSeries, tau: Complex64, conv: QConvention) -> Result<Evaluation> {
    if !(tau.im > 1e-9) || !tau.re.is_finite() {
        return Err(Error::Convergence(format!("tau = {tau} is not in the upper half-plane")));
    }
    let d = f.denom() as f64;
    let x = (Complex64::i() * PI * conv.factor() * tau / d).exp();
    let rho = x.norm();
    let tail = tail_bound(f, rho);
    if !(tail < TAIL_LIMIT) {
        return Err(Error::Convergence(format!(
            "Im tau = {} too small for order {} (tail bound {tail:e})",
            tau.im,
            f.order_exponent()
        )));
    }
    let terms: Vec<(i64, Complex64)> = f.terms().map(|(k, v)| (k, v.to_complex())).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut prev = match terms.last() {
        Some(&(k, _)) => k,
        None => return Ok(Evaluation { value: acc, tail_bound: tail }),
    };
    for &(k, c) in terms.iter().rev() {
        acc = acc * x.powi((prev - k) as i32) + c;
        prev = k;
    }
    acc *= x.powi(prev as i32);
    Ok(Evaluation { value: acc, tail_bound: tail })
}

pub fn eval_series(f: &QSeries, tau: Complex64, conv: QConvention) -> Result<Complex64> {
    Ok(eval_with_tail(f, tau, conv)?.value)
}

/// Outcome of one transformation-law check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauCheck {
    pub law: String,
    pub tau: C64,
    pub convention: QConvention,
    pub order: i64,
    pub tolerance: f64,
    pub lhs: C64,
    pub rhs: C64,
    pub residual: f64,
    pub tail_bound: f64,
    pub pass: bool,
    /// Residual when the law is read without the eta multiplier.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_residual: Option<f64>,
    /// Multiplier relative to the literal law, in turns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier_turns: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_const: Option<C64>,
}

impl TauCheck {
    #[allow(clippy::too_many_arguments)]
    fn new(
        law: String,
        tau: Complex64,
        conv: QConvention,
        order: i64,
        tol: f64,
        lhs: Complex64,
        rhs: Complex64,
        tail: f64,
    ) -> Self {
        let residual = (lhs - rhs).norm();
        TauCheck {
            law,
            tau: tau.into(),
            convention: conv,
            order,
            tolerance: tol,
            lhs: lhs.into(),
            rhs: rhs.into(),
            residual,
            tail_bound: tail,
            pass: residual < tol && tail <= tol,
            literal_residual: None,
            multiplier_turns: None,
            fitted_const: None,
        }
    }
}

fn pi_i_tau(tau: Complex64) -> Complex64 {
    Complex64::i() * PI * tau
}

/// `(1/tau^2) E_2(-1/tau) = E_2(tau) + 6/(pi i tau)`.
pub fn check_e2_transform(tau: Complex64, order: i64, tol: f64) -> Result<TauCheck> {
    let f = e2(order)?;
    let s = -tau.inv();
    let a = eval_with_tail(&f, s, QConvention::Full)?;
    let b = eval_with_tail(&f, tau, QConvention::Full)?;
    let t2 = tau * tau;
    let lhs = a.value / t2;
    let rhs = b.value + 6.0 / pi_i_tau(tau);
    let tail = a.tail_bound / t2.norm() + b.tail_bound;
    Ok(TauCheck::new("E2".into(), tau, QConvention::Full, order, tol, lhs, rhs, tail))
}

/// `(1/tau^2) calU_i(-1/tau) + 1/(pi i tau) = calU_(sigma(i))(tau)`.
pub fn check_calu_transform(i: u8, tau: Complex64, order: i64, tol: f64) -> Result<TauCheck> {
    let sigma = sigma_perm(2)?;
    let j = match i {
        1..=3 => sigma[i as usize - 1] as u8,
        _ => return Err(Error::OutOfRange(format!("calU index {i} not in {{1,2,3}}"))),
    };
    let fi = calu(i, order)?;
    let fj = calu(j, order)?;
    let a = eval_with_tail(&fi, -tau.inv(), QConvention::Full)?;
    let b = eval_with_tail(&fj, tau, QConvention::Full)?;
    let t2 = tau * tau;
    let lhs = a.value / t2 + pi_i_tau(tau).inv();
    let tail = a.tail_bound / t2.norm() + b.tail_bound;
    Ok(TauCheck::new(format!("calU{i}"), tau, QConvention::Full, order, tol, lhs, b.value, tail))
}

/// `eta~(q) = prod (1 - q^n)` through the pentagonal number theorem.
pub fn eta_tilde(order: i64) -> QSeries {
    let mut terms = Vec::new();
    let mut k = 0i64;
    loop {
        let mut any = false;
        for e in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            if e < order {
                any = true;
                if k == 0 && !terms.is_empty() {
                    continue;
                }
                terms.push((e, ExactCoeff::from_int(if k % 2 == 0 { 1 } else { -1 })));
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    QSeries::from_terms(1, order, terms)
}

fn eta(f: &QSeries, z: Complex64) -> Result<Evaluation> {
    let e = eval_with_tail(f, z, QConvention::Full)?;
    let pre = (Complex64::i() * PI * z / 12.0).exp();
    Ok(Evaluation {
        value: pre * e.value,
        tail_bound: pre.norm() * e.tail_bound,
    })
}

/// Dedekind sum `s(h, k)` for `k > 0`.
pub fn dedekind_sum(h: i64, k: i64) -> BigRational {
    let saw = |x: BigRational| -> BigRational {
        if x.is_integer() {
            BigRational::zero()
        } else {
            &x - x.floor() - rat(1, 2)
        }
    };
    let mut s = BigRational::zero();
    for j in 1..k {
        s += saw(rat(j, k)) * saw(rat(h * j, k));
    }
    s
}

/// Phase of `eta(g tau) / ((-i(c tau + d))^(1/2) eta(tau))` in turns, `c > 0`.
pub fn eta_multiplier_turns(a: i64, d: i64, c: i64) -> BigRational {
    let half = (rat(a + d, 12 * c) - dedekind_sum(d, c)) / int(2);
    &half - half.floor()
}

fn turns_to_unit(t: &BigRational) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t.to_f64().unwrap_or(f64::NAN))
}

/// `eta(r tau)|_(-1/tau) = (tau/r)^(1/2) eta(tau/r)` for `l = 0` and
/// `eta((tau+l)/r)|_(-1/tau) = tau^(1/2) eta((tau+n_l)/r)` otherwise, compared
/// with the exact multiplier. The literal residual is recorded alongside.
pub fn check_eta_transform(r: u32, l: u32, tau: Complex64, order: i64, tol: f64) -> Result<TauCheck> {
    if !crate::algebra::coeff::is_prime(r) {
        return Err(Error::UnsupportedRank(r));
    }
    if l >= r {
        return Err(Error::OutOfRange(format!("l = {l} must lie in 0..{r}")));
    }
    let rf = r as f64;
    let (a, b, c, d, tp) = if l == 0 {
        (0i64, -1i64, 1i64, 0i64, tau / rf)
    } else {
        let n = n_l(r, l)? as i64;
        let k = (l as i64 * n + 1) / r as i64;
        (l as i64, -k, r as i64, -n, (tau + n as f64) / rf)
    };
    debug_assert_eq!(a * d - b * c, 1);
    let f = eta_tilde(order);
    let gt = (tp * a as f64 + b as f64) / (tp * c as f64 + d as f64);
    let lhs = eta(&f, gt)?;
    let base = eta(&f, tp)?;
    let ctd = tp * c as f64 + d as f64;
    let eps = turns_to_unit(&eta_multiplier_turns(a, d, c));
    let rhs = eps * (-Complex64::i() * ctd).sqrt() * base.value;
    let literal = ctd.sqrt() * base.value;
    // relative to the literal law the factor is eps * e^(-i pi / 4)
    let rel = eta_multiplier_turns(a, d, c) - rat(1, 8);
    let rel = &rel - rel.floor();
    let tail = lhs.tail_bound + ctd.norm().sqrt() * base.tail_bound;
    let mut chk = TauCheck::new(format!("eta r={r} l={l}"), tau, QConvention::Full, order, tol, lhs.value, rhs, tail);
    chk.literal_residual = Some((lhs.value - literal).norm());
    chk.multiplier_turns = Some(rel.to_string());
    Ok(chk)
}

/// Primed series `q d/dq QM + c` evaluated with `q = e^(pi i tau)`.
fn primed(key: &InvariantKey, order: i64, tau: Complex64) -> Result<Evaluation> {
    let (s, k) = quasimodular_derivative(&qm_series(key)?, order)?;
    let e = eval_with_tail(&s, tau, QConvention::Half)?;
    Ok(Evaluation {
        value: e.value + k.to_complex(),
        tail_bound: e.tail_bound,
    })
}

/// Rank-two mirror relation in `tau` for the key `(d, a)`:
/// `(2/tau^2) QM-check'(-1/tau) + const/(pi i tau) = sum (-1)^(d a' + d' a) QM-hat'(tau)`.
/// `const` is fitted from the first two points; all three are then checked.
pub fn check_tau_mirror(g: u32, d: u32, a: u32, taus: [Complex64; 3], order: i64, tol: f64) -> Result<TauCheck> {
    let key = InvariantKey::new(Role::SL, 2, g, d, a)?;
    let hats = InvariantKey::all(Role::PGL, 2, g)?;
    let mut sides = Vec::new();
    for &tau in &taus {
        let l = primed(&key, order, -tau.inv())?;
        let t2 = tau * tau;
        let mut rhs = Complex64::new(0.0, 0.0);
        let mut tail = 2.0 * l.tail_bound / t2.norm();
        for h in &hats {
            let e = primed(h, order, tau)?;
            let sign = if (d * h.a + h.d * a) % 2 == 0 { 1.0 } else { -1.0 };
            rhs += sign * e.value;
            tail += e.tail_bound;
        }
        sides.push((tau, 2.0 * l.value / t2, rhs, tail));
    }
    let fit: Vec<Complex64> = sides[..2].iter().map(|(t, l, r, _)| (r - l) * pi_i_tau(*t)).collect();
    let konst = (fit[0] + fit[1]) / 2.0;
    let mut worst = 0usize;
    let mut worst_res = -1.0;
    for (i, (t, l, r, _)) in sides.iter().enumerate() {
        let res = (l + konst / pi_i_tau(*t) - r).norm();
        if res > worst_res {
            worst_res = res;
            worst = i;
        }
    }
    let (t, l, r, _) = sides[worst];
    let tail = sides.iter().map(|s| s.3).fold(0.0, f64::max);
    let mut chk = TauCheck::new(
        format!("tau-mirror g={g} d={d} a={a}"),
        t,
        QConvention::Half,
        order,
        tol,
        l + konst / pi_i_tau(t),
        r,
        tail,
    );
    chk.fitted_const = Some(konst.into());
    Ok(chk)
}

/// Exact value of the constant in the tau-form relation for `(d, a)`: minus
/// the sum of the U-coordinates of `QM-check^a_d`.
pub fn tau_mirror_const(g: u32, d: u32, a: u32) -> Result<ExactCoeff> {
    let s = qm_series(&InvariantKey::new(Role::SL, 2, g, d, a)?)?;
    let mut acc = ExactCoeff::zero();
    for c in &s.coeffs {
        acc = acc.try_sub(c)?;
    }
    Ok(acc)
}
