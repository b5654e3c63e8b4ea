use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

use enumirror::algebra::{ExactCoeff, QSeries};
use enumirror::mirrorcheck::{fourier_inversion, mirror_w0, Convention};
use enumirror::modforms::{n_l, sigma_perm};
use enumirror::numerictau::{eta_multiplier_turns, eta_tilde, eval_series, eval_with_tail, QConvention};
use enumirror::qminv::{qm_series, InvariantKey, Role};
use enumirror::wallcross::{default_u, enumerate_um, solve_degree_class, vanishing_verdict, KNumClass, Verdict};

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn int_series(order: i64) -> impl Strategy<Value = QSeries> {
    prop::collection::vec(-20i64..20, order as usize).prop_map(move |c| QSeries::from_ints(order, &c))
}

fn eta_at(z: Complex64) -> Complex64 {
    let f = eta_tilde(400);
    (Complex64::i() * std::f64::consts::PI * z / 12.0).exp() * eval_series(&f, z, QConvention::Full).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn degree_class_solves_both_equations(
        r in prime(),
        dd in 1i64..20,
        g in 1u32..6,
        w in -30i64..30,
    ) {
        prop_assume!(dd.gcd(&(r as i64)) == 1);
        let u = default_u(r, dd, g).unwrap();
        let v = KNumClass::new(r as i64, dd);
        prop_assert_eq!(v.chi(&u, g), 1);
        let wc = solve_degree_class(r, dd, g, u, w).unwrap();
        prop_assert_eq!(u.chi(&wc, g), 0);
        prop_assert_eq!(dd * wc.rank - r as i64 * wc.degree, w);
    }

    #[test]
    fn um_entries_are_well_formed(r in prime(), dd in 1i64..12, g in 2u32..5, w in 1i64..40) {
        prop_assume!(dd.gcd(&(r as i64)) == 1);
        let u = default_u(r, dd, g).unwrap();
        let wc = solve_degree_class(r, dd, g, u, w).unwrap();
        for e in enumerate_um(r, dd, g, wc).unwrap() {
            prop_assert!((0..r as i64).contains(&e.u_m.rank));
            prop_assert_eq!(e.skyscraper, (wc.rank / e.m).rem_euclid(r as i64) == 0);
            prop_assert_eq!(e.u_m, KNumClass::new(e.h_m * r as i64 - wc.rank / e.m, e.h_m * dd - wc.degree / e.m));
        }
        if w.gcd(&(r as i64)) == 1 {
            prop_assert_eq!(vanishing_verdict(r, dd, w, g, u).unwrap(), Verdict::AllVanish);
        }
    }

    #[test]
    fn sigma_is_an_involution(r in prime()) {
        let s = sigma_perm(r).unwrap();
        for (i, &j) in s.iter().enumerate() {
            prop_assert_eq!(s[j - 1], i + 1);
        }
        for l in 1..r {
            prop_assert_eq!((l * n_l(r, l).unwrap() + 1) % r, 0);
        }
    }

    #[test]
    fn fourier_transform_squares_to_r2(r in prop::sample::select(vec![2u32, 3, 5]), g in 1u32..4) {
        prop_assert!(fourier_inversion(r, g).unwrap().pass);
    }

    #[test]
    fn w0_relation_holds(r in prime(), g in 1u32..5) {
        prop_assert!(mirror_w0(r, g, Convention::Mixed).unwrap().pass);
    }

    #[test]
    fn antiderivative_inverts_derivative(f in int_series(30)) {
        let f = f.without_constant();
        prop_assert_eq!(f.q_ddq().q_ddq_inverse().unwrap(), f);
    }

    #[test]
    fn evaluation_is_linear(a in int_series(20), b in int_series(20), x in -1.0f64..1.0, y in 0.8f64..2.0) {
        let t = Complex64::new(x, y);
        let s = a.try_add(&b).unwrap();
        let lhs = eval_series(&s, t, QConvention::Full).unwrap();
        let rhs = eval_series(&a, t, QConvention::Full).unwrap() + eval_series(&b, t, QConvention::Full).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
    }

    #[test]
    fn tail_bound_shrinks_with_height(f in int_series(20), y in 1.0f64..2.0) {
        let lo = eval_with_tail(&f, Complex64::new(0.0, y), QConvention::Full).unwrap().tail_bound;
        let hi = eval_with_tail(&f, Complex64::new(0.0, y + 0.5), QConvention::Full).unwrap().tail_bound;
        prop_assert!(hi <= lo);
    }

    #[test]
    fn eta_multiplier_matches_numerics(c in 1i64..8, d in -8i64..8, x in -0.5f64..0.5, y in 0.9f64..1.5) {
        prop_assume!(c.gcd(&d) == 1);
        // complete (c, d) to a matrix of determinant one
        let (mut a, mut b) = (0i64, 0i64);
        for aa in -20..=20 {
            if (aa * d - 1) % c == 0 {
                a = aa;
                b = (aa * d - 1) / c;
                break;
            }
        }
        prop_assume!(a * d - b * c == 1);
        let t = Complex64::new(x, y);
        let gt = (t * a as f64 + b as f64) / (t * c as f64 + d as f64);
        prop_assume!(gt.im > 0.08);
        let eps = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * num_traits::ToPrimitive::to_f64(&eta_multiplier_turns(a, d, c)).unwrap());
        let rhs = eps * (-Complex64::i() * (t * c as f64 + d as f64)).sqrt() * eta_at(t);
        prop_assert!((eta_at(gt) - rhs).norm() < 1e-8, "a={a} b={b} c={c} d={d}");
    }

    #[test]
    fn zero_coordinates_expand_to_zero(r in prime(), dd in 0u32..7, a in 0u32..7) {
        let key = InvariantKey::new(Role::SL, r, 1, dd % r, a % r).unwrap();
        prop_assert!(qm_series(&key).unwrap().expand(12).unwrap().is_zero());
    }
}

#[test]
fn exact_coefficients_round_trip_through_json() {
    for c in [ExactCoeff::from_int(-3), ExactCoeff::root_of_unity(5, 2), ExactCoeff::root_of_unity(3, 1).scale_int(7)] {
        let s = serde_json::to_string(&c).unwrap();
        let back: ExactCoeff = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
