//! Morita's p-adic Gamma function.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::num::{p_pow, PadicNum};
use crate::arith::{is_prime, HalfInt};
use crate::error::{domain, resource, Result};

/// Largest integer argument the limit construction will step through.
pub const GAMMA_BUDGET: u64 = 50_000_000;

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    Ok(())
}

/// `Gamma_p(n) = (-1)^n prod_{0<j<n, p∤j} j`, exactly.
pub fn padic_gamma_int(n: i64, p: u64) -> Result<BigInt> {
    check_prime(p)?;
    if n < 1 {
        return Err(domain!("padic_gamma_int needs n >= 1, got {n}"));
    }
    let mut acc = BigInt::one();
    for j in 1..n as u64 {
        if j % p != 0 {
            acc *= BigInt::from(j);
        }
    }
    if n % 2 == 1 {
        acc = -acc;
    }
    Ok(acc)
}

/// Running product behind `Gamma_p` reduced mod `p^prec`; cheap for moduli below 2^63.
struct GammaProduct {
    p: u64,
    small: Option<u128>,
    modulus: BigInt,
    acc_small: u128,
    acc: BigInt,
    next: u64,
}

impl GammaProduct {
    fn new(p: u64, prec: u32) -> Self {
        let modulus = p_pow(p, prec);
        let small = modulus.to_u64().filter(|&m| m < (1 << 63)).map(|m| m as u128);
        GammaProduct {
            p,
            small,
            modulus,
            acc_small: 1,
            acc: BigInt::one(),
            next: 1,
        }
    }

    /// Advances to `prod_{0<j<n, p∤j} j` and returns `Gamma_p(n)` mod `p^prec`.
    fn advance_to(&mut self, n: u64) -> BigInt {
        debug_assert!(n >= self.next);
        match self.small {
            Some(m) => {
                let mut a = self.acc_small;
                for j in self.next..n {
                    if j % self.p != 0 {
                        a = a * (j as u128 % m) % m;
                    }
                }
                self.acc_small = a;
            }
            None => {
                for j in self.next..n {
                    if j % self.p != 0 {
                        self.acc = (&self.acc * BigInt::from(j)) % &self.modulus;
                    }
                }
            }
        }
        self.next = n;
        let v = match self.small {
            Some(_) => BigInt::from(self.acc_small),
            None => self.acc.clone(),
        };
        if n % 2 == 1 {
            (&self.modulus - v) % &self.modulus
        } else {
            v
        }
    }
}

/// `Gamma_p(n)` modulo `p^prec` for a positive integer `n`.
pub fn padic_gamma_int_mod(n: u64, p: u64, prec: u32) -> Result<PadicNum> {
    check_prime(p)?;
    if n < 1 {
        return Err(domain!("padic_gamma_int_mod needs n >= 1, got {n}"));
    }
    let mut g = GammaProduct::new(p, prec);
    Ok(PadicNum::from_parts(p, 0, g.advance_to(n), prec))
}

/// `Gamma_p(x)` for `x` in `Z_p` as the limit of `Gamma_p(n_m)` with `n_m`
/// the least positive integer congruent to `x` mod `p^m`. The Lipschitz bound
/// `|Gamma_p(x) - Gamma_p(y)| <= |x - y|` (p odd) makes `m = prec` sufficient;
/// every intermediate step is checked for agreement with the previous one.
pub fn padic_gamma(x: &PadicNum, prec: u32) -> Result<PadicNum> {
    let p = x.p();
    check_prime(p)?;
    if x.val_or_abs() < 0 {
        return Err(domain!("padic_gamma needs x in Z_p, got {x}"));
    }
    let depth = prec + if p == 2 { 2 } else { 0 };
    if x.abs_prec() < depth as i64 {
        return Err(resource!(
            "argument {x} is known only to absolute precision {}",
            x.abs_prec()
        ));
    }
    let xr = x.to_integer_rep()?;
    let mut prod = GammaProduct::new(p, prec);
    let mut prev: Option<BigInt> = None;
    for m in 1..=depth {
        let pm = p_pow(p, m);
        let mut n = &xr % &pm;
        if n.is_zero() {
            n = pm;
        }
        let n = n
            .to_u64()
            .filter(|&n| n <= GAMMA_BUDGET)
            .ok_or_else(|| resource!("Gamma_p limit needs an argument beyond the budget {GAMMA_BUDGET}"))?;
        let g = prod.advance_to(n);
        if let Some(pr) = &prev {
            let level = p_pow(p, m - 1);
            if (&g - pr) % &level != BigInt::zero() {
                return Err(resource!("Gamma_p limit failed to stabilise at step {m}"));
            }
        }
        prev = Some(g);
    }
    Ok(PadicNum::from_parts(p, 0, prev.unwrap(), prec))
}

/// `Gamma_p(1/2)`: the square root of `(-1)^{x0}` (reflection formula,
/// `x0 = (p+1)/2`) congruent to `Gamma_p(x0)` mod `p`, lifted by Newton steps.
pub fn padic_gamma_one_half(p: u64, prec: u32) -> Result<PadicNum> {
    check_prime(p)?;
    if p == 2 {
        return Err(domain!("1/2 is not a 2-adic integer"));
    }
    let x0 = p.div_ceil(2);
    let c = if x0.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let m = p_pow(p, prec);
    let pb = BigInt::from(p);
    let mut y = padic_gamma_int(x0 as i64, p)? % &pb;
    if ((&y * &y - &c) % &pb) != BigInt::zero() {
        return Err(resource!("reflection formula check failed for Gamma_{p}(1/2)"));
    }
    loop {
        let two_y_inv = (BigInt::from(2) * &y).modinv(&m).expect("unit");
        let next = (&y - (&y * &y - &c) * two_y_inv) % &m;
        let next = if next < BigInt::zero() { next + &m } else { next };
        if next == y {
            break;
        }
        y = next;
    }
    Ok(PadicNum::from_parts(p, 0, y, prec))
}

/// `Gamma_p(t)` for an integer or half-integer `t`, stepping from `Gamma_p(1/2)`
/// or `Gamma_p(1)` with `Gamma_p(x+1) = -x Gamma_p(x)` (`-Gamma_p(x)` when `p | x`).
pub fn padic_gamma_half(t: HalfInt, p: u64, prec: u32) -> Result<PadicNum> {
    check_prime(p)?;
    if t.is_integer() && t.twice() >= 2 {
        return padic_gamma_int_mod((t.twice() / 2) as u64, p, prec);
    }
    let (mut g, mut cur) = if t.is_integer() {
        (PadicNum::from_int(-1, p, prec), HalfInt::from_int(1))
    } else {
        (padic_gamma_one_half(p, prec)?, HalfInt::from_twice(1))
    };
    let factor = |x: HalfInt| -> PadicNum {
        // -x as a p-adic number, or -1 when p | x
        let (n, d) = x.num_den();
        if n.rem_euclid(p as i64) == 0 {
            PadicNum::from_int(-1, p, prec)
        } else {
            PadicNum::from_rat(&crate::arith::rat(-n, d), p, prec)
        }
    };
    while cur < t {
        g = &g * &factor(cur);
        cur = cur + HalfInt::from_int(1);
    }
    while cur > t {
        cur = cur - HalfInt::from_int(1);
        g = g.checked_div(&factor(cur))?;
    }
    Ok(g)
}

/// `pi^{(p)} = Gamma_p(1/2)^2`.
pub fn padic_pi(p: u64, prec: u32) -> Result<PadicNum> {
    padic_gamma_one_half(p, prec)?.pow(2)
}

/// `(pi^{(p)})^{e/2} = Gamma_p(1/2)^e`.
pub fn padic_pi_half_pow(e: i64, p: u64, prec: u32) -> Result<PadicNum> {
    padic_gamma_one_half(p, prec)?.pow(e)
}

/// Valuation of `Gamma_p(t)` as actually computed (always 0: values are units).
pub fn gamma_valuation(t: HalfInt, p: u64, prec: u32) -> Result<Option<i64>> {
    Ok(padic_gamma_half(t, p, prec)?.valuation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn integer_values() {
        assert_eq!(padic_gamma_int(1, 5).unwrap(), BigInt::from(-1));
        assert_eq!(padic_gamma_int(3, 5).unwrap(), BigInt::from(-2));
        assert_eq!(padic_gamma_int(7, 5).unwrap(), BigInt::from(-144));
        assert!(padic_gamma_int(0, 5).is_err());
        assert!(padic_gamma_int(3, 6).is_err());
    }

    #[test]
    fn limit_matches_integers() {
        let x = PadicNum::from_int(7, 5, 8);
        let g = padic_gamma(&x, 6).unwrap();
        assert_eq!(g, PadicNum::from_int(-144, 5, 6));
        let one = padic_gamma(&PadicNum::from_int(1, 5, 8), 6).unwrap();
        assert_eq!(one, PadicNum::from_int(-1, 5, 6));
    }

    #[test]
    fn half_closed_form_matches_limit() {
        for (p, prec) in [(5u64, 6u32), (3, 8), (7, 5)] {
            let half = PadicNum::from_rat(&rat(1, 2), p, prec + 2);
            let lim = padic_gamma(&half, prec).unwrap();
            assert_eq!(padic_gamma_one_half(p, prec).unwrap(), lim, "p = {p}");
            let t = PadicNum::from_rat(&rat(7, 2), p, prec + 2);
            let lim = padic_gamma(&t, prec).unwrap();
            assert_eq!(
                padic_gamma_half(HalfInt::from_twice(7), p, prec).unwrap(),
                lim,
                "p = {p}"
            );
        }
    }

    #[test]
    fn pi_is_a_unit_sign() {
        assert_eq!(padic_pi(5, 10).unwrap(), PadicNum::from_int(-1, 5, 10));
        assert_eq!(padic_pi(3, 10).unwrap(), PadicNum::from_int(1, 3, 10));
        assert_eq!(gamma_valuation(HalfInt::from_int(3), 5, 6).unwrap(), Some(0));
    }

    #[test]
    fn negative_and_zero_arguments() {
        // Gamma_p(0) = 1 and Gamma_p(-1/2) from the functional equation
        assert_eq!(
            padic_gamma_half(HalfInt::from_int(0), 5, 6).unwrap(),
            PadicNum::one(5, 6)
        );
        let g = padic_gamma_half(HalfInt::from_twice(-1), 5, 6).unwrap();
        let back = &g * &PadicNum::from_rat(&rat(1, 2), 5, 6);
        assert_eq!(back, padic_gamma_one_half(5, 6).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let x = PadicNum::from_rat(&rat(1, 3), 5, 20);
        assert!(matches!(padic_gamma(&x, 15), Err(crate::Error::Resource(_))));
    }
}
