//! Kubota–Leopoldt p-adic L-functions and the Kummer congruences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::num::{principal_unit, PadicNum};
use crate::arith::{factorial, is_prime, pow_int, rat, vp_rat, Rat};
use crate::bernoulli::{bernoulli, gen_bernoulli_prec, zeta_neg, DirichletChar};
use crate::error::{domain, precondition, resource, Error, Result};

/// `zeta^{(p)}(1 - 2k) = (1 - p^{2k-1}) zeta(1 - 2k)`.
pub fn padic_zeta_neg(m: i64, p: u64) -> Result<Rat> {
    let z = zeta_neg(m)?;
    Ok((Rat::one() - pow_int(p as i64, -m)) * z)
}

fn check_odd_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(domain!("p-adic L-functions are implemented for odd primes, got {p}"));
    }
    Ok(())
}

/// Binomial coefficients `C(t, j)` for `j = 0..=n`, p-adically.
fn binomials(t: &PadicNum, n: usize, prec: u32) -> Vec<PadicNum> {
    let p = t.p();
    let mut out = Vec::with_capacity(n + 1);
    let mut falling = PadicNum::one(p, prec);
    out.push(falling.clone());
    for j in 1..=n {
        let shifted = t - &PadicNum::from_int(j as i64 - 1, p, prec);
        falling = &falling * &shifted;
        let inv_fact = Rat::new(BigInt::one(), factorial(j as u64));
        out.push(falling.mul_rat(&inv_fact));
    }
    out
}

/// `L_p(s, chi)` for `s` in `Z_p`, via
/// `L_p(s, chi) = 1/(F (s-1)) sum_{a<=F, p∤a} chi(a) <a>^{1-s} sum_j C(1-s, j) B_j (F/a)^j`
/// with `F` the least common multiple of `p` and the conductor. At `s = 1 - n`
/// this reproduces `-(1 - chi omega^{-n}(p) p^{n-1}) B(n, chi omega^{-n}) / n`.
pub fn padic_l(s: &PadicNum, chi: &DirichletChar, prec: u32) -> Result<PadicNum> {
    let p = s.p();
    check_odd_prime(p)?;
    if s.val_or_abs() < 0 {
        return Err(domain!("padic_l needs s in Z_p, got {s}"));
    }
    let chi = chi.with_teich(p, 0)?;
    let one = PadicNum::one(p, prec + 40);
    let sm1 = s - &one;
    if sm1.is_zero()
        && chi.is_trivial() {
            return Err(Error::Pole {
                residue: format!("1 - 1/{p}"),
            });
        }
    let mut guard = 10;
    loop {
        let out = if sm1.is_zero() {
            padic_l_one(&chi, p, prec, guard)?
        } else {
            padic_l_at(s, &sm1, &chi, prec, guard)?
        };
        if out.rel_prec() >= prec || (out.is_zero() && out.abs_prec() >= prec as i64) {
            return Ok(out.truncate(prec));
        }
        if guard > 60 {
            return Err(resource!("padic_l lost too much precision at s = {s}"));
        }
        guard += 20;
    }
}

fn padic_l_at(s: &PadicNum, sm1: &PadicNum, chi: &DirichletChar, prec: u32, guard: u32) -> Result<PadicNum> {
    let p = s.p();
    let vs = sm1.valuation().unwrap_or(0).max(0) as u32;
    let w = prec + guard + vs;
    let f = chi.conductor();
    let big_f = f.lcm(&p);
    let t = &PadicNum::one(p, w) - s;
    // terms of the inner sum have valuation >= j - 1; of the binomial series >= i
    let jmax = w as usize + 2;
    let binoms = binomials(&t, jmax, w);
    let bf: Vec<PadicNum> = (0..=jmax)
        .map(|j| {
            let b = bernoulli(j as u64);
            PadicNum::from_rat(&(b * pow_int(big_f as i64, j as i64)), p, w + 4)
        })
        .collect();
    let mut total = PadicNum::exact_zero(p);
    for a in 1..=big_f {
        if a % p == 0 {
            continue;
        }
        let c = chi.value_padic(a as i64, p, w);
        if c.is_zero() {
            continue;
        }
        let ab = BigInt::from(a);
        let u = principal_unit(&ab, p, w)?;
        let x = &u - &PadicNum::one(p, w);
        let mut pw = PadicNum::one(p, w);
        let mut unit_pow = PadicNum::exact_zero(p);
        for b in binoms.iter() {
            unit_pow = &unit_pow + &(b * &pw);
            pw = &pw * &x;
        }
        let ainv = PadicNum::from_int(a as i64, p, w).checked_inv()?;
        let mut apow = PadicNum::one(p, w);
        let mut inner = PadicNum::exact_zero(p);
        for (j, b) in binoms.iter().enumerate() {
            if !bf[j].is_zero() {
                inner = &inner + &(&(b * &bf[j]) * &apow);
            }
            apow = &apow * &ainv;
        }
        total = &total + &(&(&c * &unit_pow) * &inner);
    }
    let denom = &PadicNum::from_int(big_f as i64, p, w) * sm1;
    total.checked_div(&denom)
}

/// `log_p(1 + x)` for `v_p(x) >= 1`.
fn log_one_plus(x: &PadicNum, w: u32) -> Result<PadicNum> {
    let p = x.p();
    let mut acc = PadicNum::exact_zero(p);
    let mut pw = x.clone();
    let kmax = w as i64 + 2 * (w as f64).log(p as f64).ceil() as i64 + 4;
    for k in 1..=kmax {
        let term = pw.mul_rat(&rat(if k % 2 == 1 { 1 } else { -1 }, k));
        acc = &acc + &term;
        pw = &pw * x;
    }
    Ok(acc)
}

/// `L_p(1, chi)` for a nontrivial `chi`: the sum in [`padic_l`] vanishes at
/// `s = 1`, and its derivative in `t = 1 - s` gives
/// `-1/F sum_a chi(a) (log_p <a> + sum_{j>=1} (-1)^{j-1} B_j (F/a)^j / j)`.
fn padic_l_one(chi: &DirichletChar, p: u64, prec: u32, guard: u32) -> Result<PadicNum> {
    let w = prec + guard;
    let big_f = chi.conductor().lcm(&p);
    let jmax = w as usize + 8;
    let bf: Vec<PadicNum> = (1..=jmax)
        .map(|j| {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            let b = bernoulli(j as u64) * pow_int(big_f as i64, j as i64) * rat(sign, j as i64);
            PadicNum::from_rat(&b, p, w + 4)
        })
        .collect();
    let mut total = PadicNum::exact_zero(p);
    for a in 1..=big_f {
        if a % p == 0 {
            continue;
        }
        let c = chi.value_padic(a as i64, p, w);
        if c.is_zero() {
            continue;
        }
        let u = principal_unit(&BigInt::from(a), p, w)?;
        let mut inner = log_one_plus(&(&u - &PadicNum::one(p, w)), w)?;
        let ainv = PadicNum::from_int(a as i64, p, w).checked_inv()?;
        let mut apow = ainv.clone();
        for b in &bf {
            if !b.is_zero() {
                inner = &inner + &(b * &apow);
            }
            apow = &apow * &ainv;
        }
        total = &total + &(&c * &inner);
    }
    Ok(-total.checked_div(&PadicNum::from_int(big_f as i64, p, w))?)
}

/// `L_p(n, chi)` at an integer argument.
pub fn padic_l_int(n: i64, chi: &DirichletChar, p: u64, prec: u32) -> Result<PadicNum> {
    let s = PadicNum::from_int(n, p, prec + 100);
    padic_l(&s, chi, prec)
}

/// The interpolation value `-(1 - chi omega^{-n}(p) p^{n-1}) B(n, chi omega^{-n}) / n`.
pub fn padic_l_interpolation(n: i64, chi: &DirichletChar, p: u64, prec: u32) -> Result<PadicNum> {
    check_odd_prime(p)?;
    if n < 1 {
        return Err(domain!("interpolation formula needs n >= 1, got {n}"));
    }
    let twisted = chi.with_teich(p, -n)?;
    let w = prec + 8;
    let euler = &PadicNum::one(p, w)
        - &(&twisted.value_at_prime(p, p, w)
            * &PadicNum::from_bigint(&num_traits::pow(BigInt::from(p), (n - 1) as usize), p, w));
    let b = gen_bernoulli_prec(n, &twisted, w)?.to_padic(p, w);
    let v = (&euler * &b).mul_rat(&rat(-1, n));
    Ok(v.truncate(prec))
}

/// `zeta^{(p)}(s) := L_p(s, omega^j)` on the branch `omega^j`.
pub fn padic_zeta_branch(s: i64, j: i64, p: u64, prec: u32) -> Result<PadicNum> {
    padic_l_int(s, &DirichletChar::teichmuller_power(p, j)?, p, prec)
}

fn kummer_value(p: u64, n: i64) -> Rat {
    (Rat::one() - pow_int(p as i64, n - 1)) * bernoulli(n as u64) / rat(n, 1)
}

/// Classical Kummer congruence: for `n = m mod (p-1)p^a` with `(p-1)` dividing
/// neither, `(1-p^{n-1})B_n/n = (1-p^{m-1})B_m/m mod p^{a+1}`.
pub fn kummer_check(p: u64, n: i64, m: i64, a: u32) -> Result<bool> {
    check_odd_prime(p)?;
    let pm1 = p as i64 - 1;
    if n < 1 || m < 1 {
        return Err(precondition!("kummer_check needs n, m >= 1"));
    }
    if n % pm1 == 0 || m % pm1 == 0 {
        return Err(precondition!("p - 1 = {pm1} divides n = {n} or m = {m}"));
    }
    let modulus = pm1 * (p as i64).pow(a);
    if (n - m) % modulus != 0 {
        return Err(precondition!("{n} and {m} are not congruent mod {modulus}"));
    }
    let d = kummer_value(p, n) - kummer_value(p, m);
    Ok(vp_rat(&d, p).is_none_or(|v| v > a as i64))
}

fn twisted_kummer_value(p: u64, chi: &DirichletChar, n: i64, prec: u32) -> Result<PadicNum> {
    // (1 - chi omega^{-n}(p) p^{n-1}) B(n, chi omega^{-n}) / n = -L_p(1-n, chi)
    Ok(-padic_l_interpolation(n, chi, p, prec)?)
}

/// Twisted Kummer congruence for a nontrivial primitive `chi` of conductor prime
/// to `p`: `n = m mod p^a` implies congruence of the twisted values mod `p^{a+1}`.
pub fn gen_kummer_check(p: u64, chi: &DirichletChar, n: i64, m: i64, a: u32) -> Result<bool> {
    check_odd_prime(p)?;
    if chi.is_trivial() {
        return Err(precondition!("gen_kummer_check needs a nontrivial character"));
    }
    if !chi.is_rational() || chi.conductor().is_multiple_of(p) {
        return Err(precondition!("character {chi} must have conductor prime to {p}"));
    }
    if n < 1 || m < 1 {
        return Err(precondition!("gen_kummer_check needs n, m >= 1"));
    }
    let modulus = (p as i64).pow(a);
    if (n - m) % modulus != 0 {
        return Err(precondition!("{n} and {m} are not congruent mod {modulus}"));
    }
    let prec = a + 6;
    let x = twisted_kummer_value(p, chi, n, prec)?;
    let y = twisted_kummer_value(p, chi, m, prec)?;
    at_least(&(&x - &y), a as i64 + 1)
}

/// `v_p(x) >= level`, failing with a resource error when `x` vanishes only to
/// lower precision (so no conclusion is possible).
pub fn at_least(x: &PadicNum, level: i64) -> Result<bool> {
    match x.valuation() {
        Some(v) => Ok(v >= level),
        None if x.abs_prec() >= level => Ok(true),
        None => Err(resource!(
            "difference known only to absolute precision {}",
            x.abs_prec()
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stabilised_zeta_values() {
        assert_eq!(padic_zeta_neg(-5, 5).unwrap(), rat(781, 63));
        assert_eq!(padic_zeta_neg(-9, 5).unwrap(), rat(488281, 33));
        assert_eq!(padic_zeta_neg(-1, 2).unwrap(), rat(1, 12));
        assert!(padic_zeta_neg(-4, 5).is_err());
    }

    #[test]
    fn interpolation_at_negative_integers() {
        for p in [3u64, 5, 7] {
            for d in [-4i64, 5] {
                let chi = DirichletChar::kronecker(d).unwrap();
                for n in 1..=6 {
                    let lhs = padic_l_int(1 - n, &chi, p, 10).unwrap();
                    let rhs = padic_l_interpolation(n, &chi, p, 10).unwrap();
                    assert!(
                        at_least(&(&lhs - &rhs), 10.min(lhs.abs_prec())).unwrap(),
                        "p={p} D={d} n={n}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn zeta_branch_consistency() {
        for k in [1i64, 2, 3, 5] {
            let p = 5u64;
            let v = padic_zeta_branch(1 - 2 * k, 2 * k, p, 10).unwrap();
            let exact = PadicNum::from_rat(&padic_zeta_neg(1 - 2 * k, p).unwrap(), p, 10);
            assert_eq!(v, exact, "k = {k}");
        }
    }

    #[test]
    fn value_at_one_is_continuous() {
        for (p, chi) in [
            (5u64, DirichletChar::teichmuller_power(5, 2).unwrap()),
            (7, DirichletChar::kronecker(5).unwrap()),
        ] {
            let at_one = padic_l(&PadicNum::one(p, 30), &chi, 10).unwrap();
            let near = PadicNum::from_bigint(&(BigInt::one() + BigInt::from(p).pow(9)), p, 30);
            let close = padic_l(&near, &chi, 10).unwrap();
            assert!(at_one.congruent(&close, 8), "p = {p}: {at_one} vs {close}");
        }
    }

    #[test]
    fn pole_at_one() {
        let r = padic_zeta_branch(1, 0, 5, 8);
        assert!(matches!(r, Err(Error::Pole { .. })));
    }

    #[test]
    fn kummer_examples() {
        assert!(kummer_check(5, 2, 6, 0).unwrap());
        assert!(kummer_check(5, 6, 26, 1).unwrap());
        assert!(kummer_check(7, 2, 8, 0).unwrap());
        assert!(kummer_check(7, 2, 9, 0).is_err());
        assert!(kummer_check(5, 4, 8, 0).is_err());
        let c4 = DirichletChar::kronecker(-4).unwrap();
        assert!(gen_kummer_check(5, &c4, 2, 27, 0).unwrap());
        assert!(gen_kummer_check(5, &c4, 3, 28, 2).unwrap());
        assert!(gen_kummer_check(5, &DirichletChar::trivial(), 2, 6, 0).is_err());
    }

    #[test]
    fn congruent_arguments_agree() {
        let chi = DirichletChar::kronecker(-4).unwrap();
        let p = 5;
        let a = padic_l_int(-3, &chi, p, 10).unwrap();
        let b = padic_l_int(-3 - 4 * 25, &chi, p, 10).unwrap();
        assert!(at_least(&(&a - &b), 3).unwrap());
    }
}
