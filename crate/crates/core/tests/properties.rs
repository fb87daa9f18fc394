use num_complex::Complex64;
use proptest::prelude::*;
use qhr_core::cft::{denominator_r_value, s_matrix_check};
use qhr_core::numerator::{cases, quantized_numerator, Variant};
use qhr_core::rootsys::{RootSystem, Weight};
use qhr_core::series::{EvalPoint, ExpKey, GaussRat, Order, QSeries};
use qhr_core::theta::{dedekind_eta, eta_value, jacobi_theta, mumford_theta_value, Sign};
use qhr_core::{int, rat, Rat};

fn z1() -> Vec<String> {
    vec!["z".into()]
}

/// Small random series in one variable with exponents in `(1/4)Z ∩ [0, 3]`.
fn series() -> impl Strategy<Value = QSeries<GaussRat>> {
    proptest::collection::vec((0i64..=12, -3i64..=3, -3i64..=3, -3i64..=3), 0..6).prop_map(|terms| {
        let mut s = QSeries::zero(z1(), Order::Finite(int(3)));
        for (e, k, re, im) in terms {
            s.add_term(rat(e, 4), ExpKey(vec![rat(k, 2)]), GaussRat::from_ints(re, im));
        }
        s
    })
}

fn eq_through(a: &QSeries<GaussRat>, b: &QSeries<GaussRat>, n: Rat) -> bool {
    a.truncate(Order::Finite(n)) == b.truncate(Order::Finite(n))
}

fn tau_strategy() -> impl Strategy<Value = Complex64> {
    (-0.5f64..0.5, 0.8f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn small_z() -> impl Strategy<Value = Complex64> {
    (-0.4f64..0.4, -0.2f64..0.2).prop_map(|(re, im)| Complex64::new(re, im))
}

fn weight(rank: usize) -> impl Strategy<Value = Weight> {
    proptest::collection::vec(-6i64..=6, rank).prop_map(|c| Weight::new(c.into_iter().map(|v| rat(v, 2)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        let n = int(3);
        prop_assert!(eq_through(&a.add(&b).unwrap(), &b.add(&a).unwrap(), n));
        prop_assert!(eq_through(&a.mul(&b).unwrap(), &b.mul(&a).unwrap(), n));
        let l = a.mul(&b).unwrap().mul(&c).unwrap();
        let r = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(eq_through(&l, &r, n));
        let d1 = a.mul(&b.add(&c).unwrap()).unwrap();
        let d2 = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(eq_through(&d1, &d2, n));
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert!(eq_through(&a.mul(&QSeries::one(z1())).unwrap(), &a, n));
    }

    #[test]
    fn snapshot_round_trip(a in series()) {
        prop_assert_eq!(QSeries::from_snapshot(&a.to_snapshot()).unwrap(), a);
    }

    #[test]
    fn t_shift_is_evaluation_at_tau_plus_one(a in series(), tau in tau_strategy(), z in small_z()) {
        let p = EvalPoint::new(tau, vec![z]).unwrap();
        let p1 = EvalPoint::new(tau + 1.0, vec![z]).unwrap();
        let p2 = EvalPoint::new(tau + 2.0, vec![z]).unwrap();
        let shifted = a.t_shift();
        prop_assert!((shifted.evaluate(&p).unwrap() - a.evaluate(&p1).unwrap()).norm() < 1e-9);
        // twice: T² on the numeric series at τ equals the original at τ+2
        prop_assert!((shifted.evaluate(&p1).unwrap() - a.evaluate(&p2).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn weyl_group_preserves_the_form_and_permutes_roots(
        label in prop_oneof![Just("B2"), Just("D4")],
        pick in any::<prop::sample::Index>(),
        seed in proptest::collection::vec(-6i64..=6, 8),
    ) {
        let rs = RootSystem::from_label(label).unwrap();
        let group = rs.weyl_group().unwrap();
        let w = &group[pick.index(group.len())];
        let u = Weight::new(seed[..rs.rank].iter().map(|v| rat(*v, 2)).collect());
        let v = Weight::new(seed[rs.rank..2 * rs.rank].iter().map(|v| rat(*v, 3)).collect());
        prop_assert_eq!(rs.inner(&w.apply(&u), &w.apply(&v)), rs.inner(&u, &v));
        for a in rs.roots() {
            prop_assert!(rs.is_root(&w.apply(&a)));
        }
        prop_assert_eq!(w.matrix.det(), int(w.sign as i64));
        prop_assert_eq!(w.compose(&w.inverse()).matrix, qhr_core::linalg::RatMatrix::identity(rs.rank));
    }

    #[test]
    fn lattice_enumeration_is_complete_and_sorted(shift in weight(2), scale in 1i64..=3, bound in 0i64..=30) {
        let rs = RootSystem::from_label("B2").unwrap();
        let (scale, bound) = (int(scale), int(bound));
        let got = rs.enumerate_lattice(&shift, scale, bound);
        let norm = |g: &Weight| rs.norm_sq(&(&shift + &g.scale(scale)));
        prop_assert!(got.windows(2).all(|p| norm(&p[0]) <= norm(&p[1])));
        // brute force over a generous box of coroot coordinates (α1∨ = α1, α2∨ = 2α2)
        let mut count = 0;
        for n1 in -40i64..=40 {
            for n2 in -40i64..=40 {
                let g = Weight::from_ints(&[n1, 2 * n2]);
                if norm(&g) <= bound {
                    count += 1;
                    prop_assert!(got.contains(&g));
                }
            }
        }
        prop_assert_eq!(got.len(), count);
    }

    #[test]
    fn jacobi_theta_parity_and_periodicity(j in -6i64..=6, m in 1i64..=4, minus in any::<bool>()) {
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let (j, m, n) = (int(j), int(m), int(6));
        let t = |jj: Rat, c: i64| jacobi_theta(jj, m, sign, &[int(c)], &z1(), n);
        prop_assert_eq!(t(-j, 1), t(j, -1));
        let shifted = t(j + int(2) * m, 1);
        let expect = if minus { t(j, 1).neg() } else { t(j, 1) };
        prop_assert_eq!(shifted, expect);
    }

    #[test]
    fn triple_product_at_random_tau(tau in tau_strategy()) {
        let n = int(40);
        let lhs = mumford_theta_value(1, 0, tau, Complex64::new(0.0, 0.0), n)
            * mumford_theta_value(0, 0, tau, Complex64::new(0.0, 0.0), n)
            * mumford_theta_value(0, 1, tau, Complex64::new(0.0, 0.0), n);
        let eta = eta_value(tau, n);
        prop_assert!((lhs - eta * eta * eta * 2.0).norm() < 1e-12);
    }

    #[test]
    fn theta11_elliptic_shift(tau in tau_strategy(), z in small_z()) {
        let n = int(60);
        let lhs = mumford_theta_value(1, 1, tau, z + tau, n);
        let q_half = (Complex64::new(0.0, -std::f64::consts::PI) * tau).exp();
        let rhs = -q_half * (Complex64::new(0.0, -2.0 * std::f64::consts::PI) * z).exp() * mumford_theta_value(1, 1, tau, z, n);
        prop_assert!((lhs - rhs).norm() < 1e-9, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn s_matrices_hold_across_the_fundamental_domain(tau in tau_strategy()) {
        let r = s_matrix_check(&[tau], int(90), 1e-9).unwrap();
        prop_assert!(r.passed(), "{:?}", r.details);
    }

    #[test]
    fn denominator_is_triality_symmetric_and_odd(
        z in proptest::collection::vec((-0.3f64..0.3, -0.1f64..0.1), 3),
        tau in tau_strategy(),
    ) {
        let z: Vec<Complex64> = z.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        let n = int(40);
        let r = |a: usize, b: usize, c: usize| denominator_r_value(tau, [z[a], z[b], z[c]], n);
        let base = r(0, 1, 2);
        let scale = 1.0 + base.norm();
        for (a, b, c) in [(1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)] {
            prop_assert!((r(a, b, c) - base).norm() < 1e-10 * scale);
        }
        let flipped = denominator_r_value(tau, [-z[0], z[1], z[2]], n);
        prop_assert!((flipped + base).norm() < 1e-10 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// Raising the order never changes coefficients already reported.
    #[test]
    fn truncation_is_stable(n in 1i64..=5, extra in 1i64..=3, short in any::<bool>(), bar2 in any::<bool>()) {
        let case = if short { cases::b2_short(bar2, Variant::Plain) } else { cases::b2_long(bar2, Variant::Plain) }.unwrap();
        let lo = quantized_numerator(&case, int(n), None).unwrap().0;
        let hi = quantized_numerator(&case, int(n + extra), None).unwrap().0;
        prop_assert_eq!(hi.truncate(Order::Finite(int(n))), lo);
    }
}

#[test]
fn eta_power_matches_point_values() {
    let s = dedekind_eta(int(30), 3);
    let tau = Complex64::new(0.2, 1.0);
    let v = s.evaluate(&EvalPoint::new(tau, vec![]).unwrap()).unwrap();
    let e = eta_value(tau, int(30));
    assert!((v - e * e * e).norm() < 1e-12);
}
