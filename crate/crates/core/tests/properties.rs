use maasslab::acceptance::random_sym;
use maasslab::arith::{decompose_disc, kronecker, pow_int, rat, sigma, t_chi, HalfInt};
use maasslab::congruence::{embed, vp_expansion_diff};
use maasslab::hecke::{first_difference, hecke_tp, hecke_tp2};
use maasslab::numeric::{eval_form, inc_gamma, laplacian_residual};
use maasslab::padic::teichmuller;
use maasslab::qexp::{eisenstein_p, maass_g, maass_h};
use maasslab::{HarmonicQExp, PadicNum, SymScalar};
use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sym(seed: u64) -> SymScalar {
    random_sym(&mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sym_ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (sym(a), sym(b), sym(c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &SymScalar::one(), a.clone());
    }

    #[test]
    fn sym_conj_is_an_involutive_automorphism(a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (sym(a), sym(b));
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }

    #[test]
    fn sym_text_round_trip(a in any::<u64>()) {
        let a = sym(a);
        let back: SymScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn padic_ring_axioms(
        p in prop::sample::select(vec![2u64, 3, 5, 7, 11]),
        x in (-5000i64..5000, 1i64..500),
        y in (-5000i64..5000, 1i64..500),
        z in (-5000i64..5000, 1i64..500),
    ) {
        let prec = 15;
        let f = |(n, d): (i64, i64)| PadicNum::from_rat(&rat(n, d), p, prec);
        let (a, b, c) = (f(x), f(y), f(z));
        prop_assert!((&(&(&a * &b) * &c) - &(&a * &(&b * &c))).is_zero());
        prop_assert!((&(&a * &(&b + &c)) - &(&(&a * &b) + &(&a * &c))).is_zero());
        let sum = PadicNum::from_rat(&(rat(x.0, x.1) + rat(y.0, y.1)), p, prec);
        prop_assert!((&sum - &(&a + &b)).is_zero());
        if !b.is_zero() {
            let q = a.checked_div(&b).unwrap();
            prop_assert!((&(&q * &b) - &a).is_zero());
        }
    }

    #[test]
    fn teichmuller_is_multiplicative(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        a in 1i64..10_000,
        b in 1i64..10_000,
    ) {
        prop_assume!(a % p as i64 != 0 && b % p as i64 != 0);
        let prec = 12;
        let wa = teichmuller(&BigInt::from(a), p, prec);
        let wb = teichmuller(&BigInt::from(b), p, prec);
        let wab = teichmuller(&BigInt::from(a * b), p, prec);
        prop_assert!((&wab - &(&wa * &wb)).is_zero());
        let one = PadicNum::one(p, prec);
        prop_assert!((&wa.pow(p as i64 - 1).unwrap() - &one).is_zero());
        prop_assert!((&wa - &PadicNum::from_int(a, p, 1)).valuation().is_none_or(|v| v >= 1));
    }

    #[test]
    fn sigma_is_multiplicative(m in 1i64..5000, n in 1i64..5000, k in 0u32..6) {
        prop_assume!(num_integer::gcd(m, n) == 1);
        prop_assert_eq!(sigma(k, m * n).unwrap(), sigma(k, m).unwrap() * sigma(k, n).unwrap());
    }

    #[test]
    fn t_chi_functional_equation(
        d in prop::sample::select(vec![1i64, -3, -4, 5, -7, 8, -8, 12, 13]),
        v in 1u64..200,
        s in -8i64..9,
    ) {
        prop_assert_eq!(t_chi(s, d, v).unwrap(), pow_int(v as i64, 2 * s - 1) * t_chi(1 - s, d, v).unwrap());
    }

    #[test]
    fn decompose_disc_reconstructs(n in -100_000i64..100_000) {
        prop_assume!(n != 0);
        match decompose_disc(n).unwrap() {
            Some(dd) => {
                prop_assert!(matches!(n.rem_euclid(4), 0 | 1));
                prop_assert_eq!(dd.d * (dd.v * dd.v) as i64, n);
                prop_assert!(maasslab::arith::is_fundamental(dd.d) || dd.d == 1);
            }
            None => prop_assert!(matches!(n.rem_euclid(4), 2 | 3)),
        }
    }

    #[test]
    fn kronecker_is_multiplicative(
        a in prop::sample::select(vec![-11i64, -8, -7, -4, -3, 5, 8, 12, 13, 17]),
        m in 1i64..2000,
        n in 1i64..2000,
    ) {
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }

    #[test]
    fn inc_gamma_recurrence(t in 1i64..30, x in 0.001f64..60.0) {
        let s = HalfInt::from_twice(t);
        let a = inc_gamma(s + HalfInt::from_int(1), x).unwrap();
        let b = inc_gamma(s, x).unwrap();
        let r = a - s.to_f64() * b - x.powf(s.to_f64()) * (-x).exp();
        prop_assert!(r.abs() <= 1e-12 * a.abs(), "residual {r:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hecke_is_linear(a in any::<u64>(), b in any::<u64>(), k in 1i64..4, p in prop::sample::select(vec![2u64, 3, 5])) {
        let f = maass_g(k, 90).unwrap();
        let g = maass_g(k + 1, 90).unwrap().scale(&SymScalar::zeta(3).unwrap());
        // both forms need the same weight to be added, so compare T(p) on f with itself
        let (a, b) = (sym(a), sym(b));
        let lhs = hecke_tp(&f.scale(&a).add(&f.scale(&b)).unwrap(), p).unwrap();
        let tf = hecke_tp(&f, p).unwrap();
        let rhs = tf.scale(&(&a + &b));
        prop_assert_eq!(first_difference(&lhs, &rhs, lhs.truncation), None);
        let tg = hecke_tp(&g.scale(&a), p).unwrap();
        prop_assert_eq!(first_difference(&tg, &hecke_tp(&g, p).unwrap().scale(&a), tg.truncation), None);
    }

    #[test]
    fn json_round_trip(k in 1i64..5, r in 1i64..4) {
        for f in [maass_g(k, 30).unwrap(), maass_h(r, 30).unwrap()] {
            let back = HarmonicQExp::from_json(&f.to_json()).unwrap();
            prop_assert_eq!(first_difference(&f, &back, 30), None);
            prop_assert_eq!(back.weight, f.weight);
        }
    }
}

#[test]
fn hecke_operators_commute() {
    let g = maass_g(2, 300).unwrap();
    for (p, q) in [(2u64, 3u64), (2, 5), (3, 7), (5, 7)] {
        let a = hecke_tp(&hecke_tp(&g, p).unwrap(), q).unwrap();
        let b = hecke_tp(&hecke_tp(&g, q).unwrap(), p).unwrap();
        assert_eq!(
            first_difference(&a, &b, a.truncation.min(b.truncation)),
            None,
            "T({p}), T({q})"
        );
    }
    let h = maass_h(1, 1000).unwrap();
    let a = hecke_tp2(&hecke_tp2(&h, 3).unwrap(), 5).unwrap();
    let b = hecke_tp2(&hecke_tp2(&h, 5).unwrap(), 3).unwrap();
    assert_eq!(first_difference(&a, &b, a.truncation.min(b.truncation)), None);
}

#[test]
fn vp_expansion_diff_is_symmetric() {
    for (k1, k2) in [(6, 10), (4, 12), (6, 26), (8, 16)] {
        let f = embed(&eisenstein_p(k1, 5, 60).unwrap(), 5).unwrap();
        let g = embed(&eisenstein_p(k2, 5, 60).unwrap(), 5).unwrap();
        let ab = vp_expansion_diff(&f, &g, 60).unwrap();
        let ba = vp_expansion_diff(&g, &f, 60).unwrap();
        assert_eq!(ab.floor, ba.floor, "{k1} vs {k2}");
        assert_eq!(ab.floor_plus, ba.floor_plus);
    }
}

#[test]
fn falsified_congruence_fails() {
    // 6 = 14 mod 4 (level 1) but not mod 20 (level 2)
    let f = embed(&eisenstein_p(6, 5, 60).unwrap(), 5).unwrap();
    let g = embed(&eisenstein_p(14, 5, 60).unwrap(), 5).unwrap();
    let r = vp_expansion_diff(&f, &g, 60).unwrap();
    assert!(r.floor.at_least(1));
    assert!(!r.floor.at_least(2));
    assert!(maasslab::congruence::family_congruence(5, 6, 14, 2, 60).is_err());
}

#[test]
fn tail_estimate_shrinks_with_truncation() {
    for f in [maass_g(1, 120).unwrap(), maass_h(1, 120).unwrap()] {
        let z = Complex64::new(0.15, 0.95);
        let mut last = f64::INFINITY;
        for t in [15u64, 30, 60, 120] {
            let e = eval_form(&f, z, t).unwrap();
            assert!(e.tail_estimate < last, "truncation {t}");
            last = e.tail_estimate;
        }
    }
}

#[test]
fn laplacian_residual_step_behaviour() {
    let f = maass_g(1, 40).unwrap();
    let z = Complex64::new(0.2, 1.3);
    let coarse = laplacian_residual(&f, z, 0.1, 40).unwrap();
    let fine = laplacian_residual(&f, z, 0.01, 40).unwrap();
    let finer = laplacian_residual(&f, z, 1e-3, 40).unwrap();
    assert!(coarse > fine, "{coarse:e} <= {fine:e}");
    assert!(finer < 1e-5, "{finer:e}");
}

#[test]
fn h_vanishes_off_discriminants() {
    for r in 1..=4i64 {
        let h = maass_h(r, 500).unwrap();
        for n in 1..=500i64 {
            for m in [n, -n] {
                let sd = if r % 2 == 0 { m } else { -m };
                let c = if m > 0 { h.plus(m) } else { h.minus(m) };
                assert_eq!(c.is_zero(), matches!(sd.rem_euclid(4), 2 | 3), "r = {r}, N = {m}");
            }
        }
    }
}

#[test]
fn g_plus_minus_ratio() {
    for k in 1..=4i64 {
        let g = maass_g(k, 200).unwrap();
        let f = maasslab::arith::rat_int(maasslab::arith::factorial(2 * k as u64));
        for n in 1..=200 {
            assert_eq!(g.minus(-n).scale(&f), *g.plus(n), "k = {k}, n = {n}");
        }
    }
}
