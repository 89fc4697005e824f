//! Exact integer and rational arithmetic: divisor sums, Kronecker symbols,
//! discriminant decomposition and the twisted divisor sums `T`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::sym::SymScalar;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// `b^e` for an integer base and any integer exponent.
pub fn pow_int(b: i64, e: i64) -> Rat {
    let base = Rat::from_integer(BigInt::from(b));
    pow_rat(&base, e)
}

pub fn pow_rat(b: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(b.clone(), e as usize)
    } else {
        num_traits::pow(b.recip(), e.unsigned_abs() as usize)
    }
}

/// p-adic valuation of a nonzero rational. Returns `None` for zero.
pub fn vp_rat(x: &Rat, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(vp_big(x.numer(), p) - vp_big(x.denom(), p))
}

pub fn vp_big(n: &BigInt, p: u64) -> i64 {
    if n.is_zero() {
        return i64::MAX;
    }
    let pb = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

pub fn vp_u64(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Integer or half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn from_twice(t: i64) -> Self {
        HalfInt { twice: t }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(self) -> i64 {
        self.twice.div_euclid(2)
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn to_rat(self) -> Rat {
        rat(self.twice, 2)
    }

    pub fn num_den(self) -> (i64, i64) {
        if self.is_integer() {
            (self.twice / 2, 1)
        } else {
            (self.twice, 2)
        }
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + o.twice,
        }
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - o.twice,
        }
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.num_den();
        if d == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

const SIEVE_LIMIT: usize = 1_000_000;

fn spf_table() -> &'static [u32] {
    static SPF: OnceLock<Vec<u32>> = OnceLock::new();
    SPF.get_or_init(|| {
        let mut spf = vec![0u32; SIEVE_LIMIT + 1];
        for i in 2..=SIEVE_LIMIT {
            if spf[i] == 0 {
                let mut j = i;
                while j <= SIEVE_LIMIT {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        spf
    })
}

/// Prime factorisation of `n >= 1`, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => out.push((p, 1)),
    };
    if n as usize > SIEVE_LIMIT {
        let mut d = 2u64;
        while d * d <= n && n as usize > SIEVE_LIMIT {
            while n.is_multiple_of(d) {
                push(d, &mut out);
                n /= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if n as usize > SIEVE_LIMIT {
            if n > 1 {
                push(n, &mut out);
            }
            return out;
        }
    }
    let spf = spf_table();
    while n > 1 {
        let p = spf[n as usize] as u64;
        push(p, &mut out);
        n /= p;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if (n as usize) <= SIEVE_LIMIT {
        return spf_table()[n as usize] as u64 == n;
    }
    factor(n).len() == 1 && factor(n)[0].1 == 1
}

/// Positive divisors of `n >= 1`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor(n) {
        let len = ds.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

fn check_positive(n: i64, what: &str) -> Result<u64> {
    if n < 1 {
        return Err(domain!("{what} requires n >= 1, got {n}"));
    }
    Ok(n as u64)
}

/// `sigma_k(n) = sum_{d | n} d^k`.
pub fn sigma(k: u32, n: i64) -> Result<BigInt> {
    let n = check_positive(n, "sigma")?;
    Ok(divisors(n)
        .into_iter()
        .map(|d| num_traits::pow(BigInt::from(d), k as usize))
        .sum())
}

/// Divisor power sum restricted to divisors prime to `p`.
pub fn sigma_p(k: u32, n: i64, p: u64) -> Result<BigInt> {
    let n = check_positive(n, "sigma_p")?;
    Ok(divisors(n)
        .into_iter()
        .filter(|d| d % p != 0)
        .map(|d| num_traits::pow(BigInt::from(d), k as usize))
        .sum())
}

/// `sum_{d | n} d^k` for any integer `k` (negative exponents give rationals).
pub fn divisor_power_sum(k: i64, n: u64) -> Rat {
    divisors(n).into_iter().map(|d| pow_int(d as i64, k)).sum()
}

pub fn mobius(n: i64) -> Result<i8> {
    let n = check_positive(n, "mobius")?;
    Ok(mobius_u64(n))
}

pub(crate) fn mobius_u64(n: u64) -> i8 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i8 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/n)` for all integers `a`, `n`.
pub fn kronecker(a: i64, n: i64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut t = 1i8;
    if n < 0 {
        n = -n;
        if a < 0 {
            t = -t;
        }
    }
    let v = n.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        n >>= v;
    }
    t * jacobi(a, n)
}

/// `eps_n = 1` if `n = 1 mod 4`, `i` if `n = 3 mod 4`.
pub fn eps(n: i64) -> Result<SymScalar> {
    match n.rem_euclid(4) {
        1 => Ok(SymScalar::one()),
        3 => Ok(SymScalar::i()),
        _ => Err(domain!("eps_n needs odd n, got {n}")),
    }
}

fn squarefree_part(n: u64) -> (u64, u64) {
    // n = f^2 * m with m squarefree
    let mut f = 1u64;
    let mut m = 1u64;
    for (p, e) in factor(n) {
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
    }
    (f, m)
}

/// `n = D v^2` with `D` a fundamental discriminant (or 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscDecomp {
    pub d: i64,
    pub v: u64,
}

/// Splits a discriminant `n` into `D v^2`. Returns `None` when `n = 2, 3 mod 4`
/// (no such decomposition exists) and an error for `n = 0`.
pub fn decompose_disc(n: i64) -> Result<Option<DiscDecomp>> {
    if n == 0 {
        return Err(domain!("decompose_disc is undefined at 0"));
    }
    let r = n.rem_euclid(4);
    if r == 2 || r == 3 {
        return Ok(None);
    }
    let (f, m) = squarefree_part(n.unsigned_abs());
    let d0 = if n < 0 { -(m as i64) } else { m as i64 };
    if d0.rem_euclid(4) == 1 {
        Ok(Some(DiscDecomp { d: d0, v: f }))
    } else {
        debug_assert!(f % 2 == 0);
        Ok(Some(DiscDecomp { d: 4 * d0, v: f / 2 }))
    }
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    matches!(decompose_disc(d), Ok(Some(DiscDecomp { v: 1, .. })))
}

/// `T_r(v) = sum_{a | v} mu(a) chi_D(a) a^{r-1} sigma_{2r-1}(v/a)` for any integer `r`.
pub fn t_chi(r: i64, d: i64, v: u64) -> Result<Rat> {
    if v == 0 {
        return Err(domain!("T_r(v) needs v >= 1"));
    }
    Ok(t_chi_filtered(r, d, v, None))
}

/// As [`t_chi`] with every divisor sum restricted to divisors prime to `p`.
pub fn t_chi_p(r: i64, d: i64, v: u64, p: u64) -> Result<Rat> {
    if v == 0 {
        return Err(domain!("T_r(v) needs v >= 1"));
    }
    Ok(t_chi_filtered(r, d, v, Some(p)))
}

fn t_chi_filtered(r: i64, d: i64, v: u64, p: Option<u64>) -> Rat {
    let mut acc = Rat::zero();
    let ok = |x: u64| p.is_none_or(|p| !x.is_multiple_of(p));
    for a in divisors(v) {
        if !ok(a) {
            continue;
        }
        let mu = mobius_u64(a);
        if mu == 0 {
            continue;
        }
        let chi = kronecker(d, a as i64);
        if chi == 0 {
            continue;
        }
        let inner: Rat = divisors(v / a)
            .into_iter()
            .filter(|&e| ok(e))
            .map(|e| pow_int(e as i64, 2 * r - 1))
            .sum();
        let term = pow_int(a as i64, r - 1) * inner;
        if mu * chi > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Gamma(t)` for a positive integer or half-integer `t`, as an exact symbolic scalar.
pub fn gamma_half(t: HalfInt) -> Result<SymScalar> {
    if t.twice() <= 0 {
        return Err(domain!("gamma_half needs a positive argument, got {t}"));
    }
    if let Some(n) = t.to_int() {
        return Ok(SymScalar::from_rat(Rat::from_integer(factorial(n as u64 - 1))));
    }
    // Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi)
    let m = (t.twice() - 1) / 2;
    let c = Rat::new(
        factorial(2 * m as u64),
        num_traits::pow(BigInt::from(4), m as usize) * factorial(m as u64),
    );
    Ok(SymScalar::from_rat(c) * SymScalar::pi_half_pow(1))
}

pub(crate) fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_sums() {
        assert_eq!(sigma(3, 4).unwrap(), BigInt::from(73));
        assert_eq!(sigma_p(5, 5, 5).unwrap(), BigInt::from(1));
        assert_eq!(sigma(0, 12).unwrap(), BigInt::from(6));
        assert!(sigma(1, 0).is_err());
        assert_eq!(divisor_power_sum(-1, 6), rat(12, 6));
    }

    #[test]
    fn kronecker_known() {
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(8, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(1, 0), 1);
        assert_eq!(kronecker(3, 0), 0);
        assert_eq!(kronecker(-1, -1), -1);
    }

    #[test]
    fn decompositions() {
        assert_eq!(decompose_disc(-12).unwrap(), Some(DiscDecomp { d: -3, v: 2 }));
        assert_eq!(decompose_disc(-4).unwrap(), Some(DiscDecomp { d: -4, v: 1 }));
        assert_eq!(decompose_disc(9).unwrap(), Some(DiscDecomp { d: 1, v: 3 }));
        assert_eq!(decompose_disc(8).unwrap(), Some(DiscDecomp { d: 8, v: 1 }));
        assert_eq!(decompose_disc(2).unwrap(), None);
        assert!(decompose_disc(0).is_err());
    }

    #[test]
    fn t_values() {
        assert_eq!(t_chi(1, -3, 2).unwrap(), rat(4, 1));
        assert_eq!(t_chi(1, -3, 1).unwrap(), rat(1, 1));
        assert!(t_chi(1, -3, 0).is_err());
    }

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(30).unwrap(), -1);
        assert_eq!(mobius(12).unwrap(), 0);
        assert_eq!(mobius(1).unwrap(), 1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn eps_values() {
        assert_eq!(eps(1).unwrap(), SymScalar::one());
        assert_eq!(eps(7).unwrap(), SymScalar::i());
        assert!(eps(2).is_err());
    }

    #[test]
    fn large_factorisation() {
        let n = 1_000_003u64 * 999_983;
        assert_eq!(factor(n), vec![(999_983, 1), (1_000_003, 1)]);
        assert_eq!(divisors(2_000_006).len(), 4);
    }

    #[test]
    fn gamma_half_values() {
        assert_eq!(gamma_half(HalfInt::from_int(5)).unwrap(), SymScalar::from_int(24));
        let g = gamma_half(HalfInt::from_twice(5)).unwrap();
        assert_eq!(g.to_string(), "(3/4)*pi^(1/2)");
        assert!(gamma_half(HalfInt::from_int(0)).is_err());
    }
}
