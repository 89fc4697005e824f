//! Checks against values computed here by unrelated methods.

use maasslab::arith::{divisors, factor, sigma, HalfInt, Rat};
use maasslab::bernoulli::{bernoulli, gen_bernoulli, DirichletChar};
use maasslab::numeric::{dirichlet_l, eval_form, inc_gamma};
use maasslab::qexp::eisenstein;
use maasslab::zagier::{en_coeffs, en_even_coeffs, en_odd_coeffs};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use std::f64::consts::PI;

/// Lanczos approximation (g = 7, n = 9) with reflection.
fn gamma(x: f64) -> f64 {
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let mut a = C[0];
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[test]
fn bernoulli_from_generating_function() {
    // x/(e^x - 1) = 1 / sum_j x^j/(j+1)!
    let n_max = 60usize;
    let mut fact = vec![BigInt::one()];
    for j in 1..=n_max + 1 {
        fact.push(&fact[j - 1] * BigInt::from(j));
    }
    let a: Vec<Rat> = (0..=n_max)
        .map(|j| Rat::new(BigInt::one(), fact[j + 1].clone()))
        .collect();
    let mut inv = vec![Rat::zero(); n_max + 1];
    inv[0] = Rat::one();
    for n in 1..=n_max {
        let mut s = Rat::zero();
        for j in 1..=n {
            s += &a[j] * &inv[n - j];
        }
        inv[n] = -s;
    }
    for n in 0..=n_max {
        let b = &inv[n] * Rat::from_integer(fact[n].clone());
        assert_eq!(bernoulli(n as u64), b, "B_{n}");
    }
}

#[test]
fn sigma_by_trial_division() {
    for n in 1..=2000i64 {
        for k in 0..4u32 {
            let mut s = BigInt::zero();
            for d in 1..=n {
                if n % d == 0 {
                    s += BigInt::from(d).pow(k);
                }
            }
            assert_eq!(sigma(k, n).unwrap(), s, "sigma_{k}({n})");
        }
        let f: u64 = factor(n as u64).iter().map(|(p, e)| p.pow(*e)).product();
        assert_eq!(f, n as u64);
        assert_eq!(
            divisors(n as u64).len() as i64,
            (1..=n).filter(|d| n % d == 0).count() as i64
        );
    }
}

#[test]
fn generalised_bernoulli_against_functional_equation() {
    // L(1-n, chi) from L(n, chi) through the completed L-function of a real
    // primitive character, root number 1.
    for d in [-3i64, -4, 5, -7, 8, -8, 12, 13] {
        let chi = DirichletChar::kronecker(d).unwrap();
        let f = d.unsigned_abs() as f64;
        let delta = if d < 0 { 1.0 } else { 0.0 };
        for n in 2..=8i64 {
            if (n as f64 - delta) % 2.0 != 0.0 {
                continue;
            }
            let s = n as f64;
            let lhs =
                gamma((s + delta) / 2.0) / gamma((1.0 - s + delta) / 2.0) * (f / PI).powf(s - 0.5) * dirichlet_l(d, s);
            let b = gen_bernoulli(n, &chi).unwrap();
            let b = b.as_rational().unwrap();
            let exact = -num_traits::ToPrimitive::to_f64(b).unwrap() / s;
            assert!(
                (lhs - exact).abs() < 1e-9 * exact.abs().max(1.0),
                "D = {d}, n = {n}: {lhs} vs {exact}"
            );
        }
    }
}

#[test]
fn e4_at_i() {
    let expect = 3.0 * gamma(0.25).powi(8) / (2.0 * PI).powi(6);
    let e4 = eisenstein(4, 40).unwrap();
    let v = eval_form(&e4, Complex64::new(0.0, 1.0), 40).unwrap().value * 240.0;
    assert!(
        (v.re - expect).abs() < 1e-12 * expect && v.im.abs() < 1e-12,
        "{v} vs {expect}"
    );
}

#[test]
fn inc_gamma_against_quadrature() {
    // Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt by composite Simpson on [x, x + 60]
    for (t, x) in [(1i64, 0.5f64), (3, 1.0), (5, 2.5), (2, 1.5), (9, 4.0), (7, 10.0)] {
        let s = HalfInt::from_twice(t).to_f64();
        let n = 200_000;
        let (a, b) = (x, x + 60.0);
        let h = (b - a) / n as f64;
        let g = |u: f64| u.powf(s - 1.0) * (-u).exp();
        let mut acc = g(a) + g(b);
        for i in 1..n {
            acc += g(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let q = acc * h / 3.0;
        let v = inc_gamma(HalfInt::from_twice(t), x).unwrap();
        assert!((v - q).abs() < 1e-9 * q.abs(), "s = {s}, x = {x}: {v} vs {q}");
    }
}

#[test]
fn gauss_sum_series_split() {
    for n in [-8i64, -3, 0, 1, 5, 12] {
        let a = en_coeffs(n, 40);
        let odd = en_odd_coeffs(n, 40);
        let even = en_even_coeffs(n, 40);
        for m in 0..40 {
            assert!((a[m] - (odd[m] + even[m]) * 0.5).norm() < 1e-12);
        }
    }
}
