//! Bernoulli numbers, Dirichlet characters built from Kronecker symbols and
//! Teichmüller powers, generalized Bernoulli numbers and L-values at
//! non-positive integers.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, decompose_disc, is_fundamental, is_prime, kronecker, pow_int, rat, t_chi, Rat};
use crate::error::{domain, Error, Result};
use crate::padic::{teichmuller, PadicNum};

static CACHE: Mutex<Vec<Rat>> = Mutex::new(Vec::new());

/// Fills `cache` with `B_0 .. B_{2m}` using integer tangent-number recurrences.
fn extend_cache(cache: &mut Vec<Rat>, m: usize) {
    let mut t = vec![BigInt::zero(); m + 1];
    if m >= 1 {
        t[1] = BigInt::one();
    }
    for k in 2..=m {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=m {
        for j in k..=m {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    cache.clear();
    cache.push(Rat::one());
    cache.push(rat(-1, 2));
    #[allow(clippy::needless_range_loop)]
    for k in 1..=m {
        // B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))
        let four_k = num_traits::pow(BigInt::from(4), k);
        let den = &four_k * (&four_k - BigInt::one());
        let mut b = Rat::new(BigInt::from(2 * k) * &t[k], den);
        if k % 2 == 0 {
            b = -b;
        }
        cache.push(b);
        cache.push(Rat::zero());
    }
}

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: u64) -> Rat {
    if n == 1 {
        return rat(-1, 2);
    }
    if n % 2 == 1 {
        return Rat::zero();
    }
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.len() <= n as usize {
        let want = (n as usize).max(2 * cache.len()).max(32) / 2;
        extend_cache(&mut cache, want);
    }
    cache[n as usize].clone()
}

/// `B_n(x) = sum_k C(n,k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: u64, x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    let mut xp = Rat::one();
    for k in (0..=n).rev() {
        let b = bernoulli(k);
        if !b.is_zero() {
            acc += Rat::from_integer(binomial(n, k)) * b * &xp;
        }
        xp *= x;
    }
    acc
}

const CACHE_HEADER: &str = "maasslab-bernoulli v1";

/// Writes `B_0 .. B_max_n` as versioned, length-prefixed decimal text.
pub fn save_cache(path: &Path, max_n: u64) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{CACHE_HEADER}")?;
    writeln!(f, "{}", max_n + 1)?;
    for n in 0..=max_n {
        let s = bernoulli(n).to_string();
        writeln!(f, "{n} {} {s}", s.len())?;
    }
    Ok(())
}

/// Reads a cache file written by [`save_cache`] and seeds the in-memory cache.
/// Returns the number of entries read.
pub fn load_cache(path: &Path) -> Result<usize> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut lines = f.lines();
    let bad = |msg: &str| Error::Parse(format!("bernoulli cache: {msg}"));
    let header = lines.next().ok_or_else(|| bad("empty file"))??;
    if header.trim() != CACHE_HEADER {
        return Err(bad("unknown header or version"));
    }
    let count: usize = lines
        .next()
        .ok_or_else(|| bad("missing count"))??
        .trim()
        .parse()
        .map_err(|_| bad("bad count"))?;
    let mut vals = Vec::with_capacity(count);
    for (i, line) in lines.enumerate().take(count) {
        let line = line?;
        let mut it = line.splitn(3, ' ');
        let n: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(|| bad("bad index"))?;
        let len: usize = it
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| bad("bad length"))?;
        let body = it.next().ok_or_else(|| bad("missing value"))?;
        if n != i || body.len() != len {
            return Err(bad(&format!("entry {i} is corrupt")));
        }
        let v: Rat = body.parse().map_err(|_| bad(&format!("entry {i} is not a rational")))?;
        vals.push(v);
    }
    if vals.len() != count {
        return Err(bad("truncated file"));
    }
    if count < 2 || vals[0] != Rat::one() || vals[1] != rat(-1, 2) {
        return Err(bad("inconsistent leading entries"));
    }
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    // keep an odd-length-free layout: cache holds B_0 .. B_{2m+1}
    let usable = if count.is_multiple_of(2) { count } else { count - 1 };
    if usable > cache.len() {
        *cache = vals[..usable].to_vec();
    }
    Ok(count)
}

/// `zeta(m)` at a negative odd integer `m = 1 - 2k`.
pub fn zeta_neg(m: i64) -> Result<Rat> {
    if m >= 0 || m % 2 == 0 {
        return Err(domain!("zeta_neg needs a negative odd integer, got {m}"));
    }
    let k2 = (1 - m) as u64;
    Ok(-bernoulli(k2) / rat(k2 as i64, 1))
}

/// A primitive Dirichlet character `chi_D * omega^j`, with `chi_D` a Kronecker
/// character of fundamental discriminant `D` (`D = 1` trivial) and `omega` the
/// Teichmüller character at an odd prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DirichletChar {
    d: i64,
    teich: Option<(u64, u64)>,
}

impl DirichletChar {
    pub fn trivial() -> Self {
        DirichletChar { d: 1, teich: None }
    }

    pub fn kronecker(d: i64) -> Result<Self> {
        if !is_fundamental(d) {
            return Err(domain!("{d} is not a fundamental discriminant"));
        }
        Ok(DirichletChar { d, teich: None })
    }

    /// `omega^j` at the odd prime `p`; `j` is reduced mod `p - 1`.
    pub fn teichmuller_power(p: u64, j: i64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(domain!("Teichmüller twists need an odd prime, got {p}"));
        }
        let j = j.rem_euclid(p as i64 - 1) as u64;
        Ok(DirichletChar {
            d: 1,
            teich: (j != 0).then_some((p, j)),
        })
    }

    /// Primitive character inducing the product.
    pub fn times(&self, o: &DirichletChar) -> Result<Self> {
        let teich = match (self.teich, o.teich) {
            (Some((p, a)), Some((q, b))) => {
                if p != q {
                    return Err(domain!("Teichmüller powers at different primes {p}, {q}"));
                }
                Some((p, a + b))
            }
            (a, b) => a.or(b),
        };
        let d = match decompose_disc(self.d * o.d)? {
            Some(dd) => dd.d,
            None => {
                return Err(domain!(
                    "product of discriminants {} and {} is not a discriminant",
                    self.d,
                    o.d
                ))
            }
        };
        let mut out = DirichletChar { d, teich: None };
        if let Some((p, j)) = teich {
            out = out.with_teich(p, j as i64)?;
        }
        Ok(out)
    }

    /// Multiplies by `omega^j` at `p`, moving any factor of `p` out of `D` into
    /// the Teichmüller part (the Legendre symbol mod `p` is `omega^{(p-1)/2}`).
    pub fn with_teich(&self, p: u64, j: i64) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(domain!("Teichmüller twists need an odd prime, got {p}"));
        }
        if let Some((q, _)) = self.teich {
            if q != p {
                return Err(domain!("Teichmüller powers at different primes {p}, {q}"));
            }
        }
        let mut j = j + self.teich.map_or(0, |(_, b)| b as i64);
        let mut d = self.d;
        if d % p as i64 == 0 {
            let pstar = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            d /= pstar;
            j += (p as i64 - 1) / 2;
        }
        let j = j.rem_euclid(p as i64 - 1) as u64;
        Ok(DirichletChar {
            d,
            teich: (j != 0).then_some((p, j)),
        })
    }

    pub fn disc(&self) -> i64 {
        self.d
    }

    pub fn teich(&self) -> Option<(u64, u64)> {
        self.teich
    }

    pub fn is_trivial(&self) -> bool {
        self.d == 1 && self.teich.is_none()
    }

    pub fn is_rational(&self) -> bool {
        self.teich.is_none()
    }

    pub fn conductor(&self) -> u64 {
        self.d.unsigned_abs() * self.teich.map_or(1, |(p, _)| p)
    }

    pub fn is_even(&self) -> bool {
        let s = if self.d < 0 { -1 } else { 1 };
        let t = self.teich.map_or(1, |(_, j)| if j % 2 == 0 { 1 } else { -1 });
        s * t == 1
    }

    /// `chi(a)` for a character without Teichmüller part.
    pub fn value_int(&self, a: i64) -> Result<i8> {
        if self.teich.is_some() {
            return Err(domain!("character {self} has p-adic values"));
        }
        Ok(kronecker(self.d, a))
    }

    /// `chi(a)` as a p-adic number (`p` must match any Teichmüller part).
    pub fn value_padic(&self, a: i64, p: u64, prec: u32) -> PadicNum {
        let k = kronecker(self.d, a);
        if k == 0 {
            return PadicNum::exact_zero(p);
        }
        let base = PadicNum::from_int(k as i64, p, prec);
        match self.teich {
            None => base,
            Some((q, j)) => {
                assert_eq!(q, p, "character {self} evaluated at the wrong prime");
                let w = teichmuller(&BigInt::from(a), p, prec);
                if w.is_zero() {
                    return PadicNum::exact_zero(p);
                }
                &base * &w.pow(j as i64).expect("unit power")
            }
        }
    }

    /// `chi(p)` of the primitive character (zero when `p` divides the conductor).
    pub fn value_at_prime(&self, p: u64, q: u64, prec: u32) -> PadicNum {
        self.value_padic(p as i64, q, prec)
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.d, self.teich) {
            (1, None) => write!(f, "1"),
            (d, None) => write!(f, "chi_{d}"),
            (1, Some((p, j))) => write!(f, "omega_{p}^{j}"),
            (d, Some((p, j))) => write!(f, "chi_{d}*omega_{p}^{j}"),
        }
    }
}

/// Generalized Bernoulli number: rational for Kronecker characters, p-adic
/// when a Teichmüller factor is present.
#[derive(Clone, Debug, PartialEq)]
pub enum BernoulliValue {
    Rational(Rat),
    Padic(PadicNum),
}

impl BernoulliValue {
    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            BernoulliValue::Rational(r) => Some(r),
            BernoulliValue::Padic(_) => None,
        }
    }

    pub fn to_padic(&self, p: u64, prec: u32) -> PadicNum {
        match self {
            BernoulliValue::Rational(r) => PadicNum::from_rat(r, p, prec),
            BernoulliValue::Padic(x) => x.clone(),
        }
    }
}

pub const DEFAULT_PADIC_PREC: u32 = 20;

/// `B(n, chi) = f^{n-1} sum_{a=1}^{f} chi(a) B_n(a/f)`.
pub fn gen_bernoulli(n: i64, chi: &DirichletChar) -> Result<BernoulliValue> {
    gen_bernoulli_prec(n, chi, DEFAULT_PADIC_PREC)
}

/// `f^{n-1} B_n(a/f) = sum_k C(n,k) B_k a^{n-k} f^{k-1}`.
fn scaled_poly(n: u64, a: i64, f: i64) -> Rat {
    let mut acc = Rat::zero();
    for k in 0..=n {
        let b = bernoulli(k);
        if b.is_zero() {
            continue;
        }
        acc += Rat::from_integer(binomial(n, k)) * b * pow_int(a, (n - k) as i64) * pow_int(f, k as i64 - 1);
    }
    acc
}

pub fn gen_bernoulli_prec(n: i64, chi: &DirichletChar, prec: u32) -> Result<BernoulliValue> {
    if n <= 0 {
        return Err(domain!("gen_bernoulli needs n >= 1, got {n}"));
    }
    let n = n as u64;
    if chi.is_trivial() {
        return Ok(BernoulliValue::Rational(bernoulli(n)));
    }
    let f = chi.conductor() as i64;
    match chi.teich {
        None => {
            let mut acc = Rat::zero();
            for a in 1..=f {
                let c = kronecker(chi.d, a);
                if c != 0 {
                    let t = scaled_poly(n, a, f);
                    if c > 0 {
                        acc += t;
                    } else {
                        acc -= t;
                    }
                }
            }
            Ok(BernoulliValue::Rational(acc))
        }
        Some((p, _)) => {
            let w = prec + 8;
            let mut acc = PadicNum::exact_zero(p);
            for a in 1..=f {
                let c = chi.value_padic(a, p, w);
                if c.is_zero() {
                    continue;
                }
                let t = PadicNum::from_rat(&scaled_poly(n, a, f), p, w);
                acc = &acc + &(&c * &t);
            }
            Ok(BernoulliValue::Padic(acc.truncate(prec)))
        }
    }
}

/// `L(1 - k, chi) = -B(k, chi)/k` for a nontrivial Kronecker character.
pub fn l_neg(one_minus_k: i64, chi: &DirichletChar) -> Result<Rat> {
    if chi.is_trivial() {
        return Err(domain!("l_neg with the trivial character; use zeta_neg"));
    }
    if !chi.is_rational() {
        return Err(domain!("l_neg needs a Kronecker character, got {chi}"));
    }
    if one_minus_k > 0 {
        return Err(domain!("l_neg needs a non-positive argument, got {one_minus_k}"));
    }
    let k = 1 - one_minus_k;
    let b = gen_bernoulli(k, chi)?;
    Ok(-b.as_rational().unwrap().clone() / rat(k, 1))
}

/// `L(1 - k, chi_D)` for any fundamental `D`, with `D = 1` giving `zeta(1 - k)`.
pub(crate) fn l_neg_disc(one_minus_k: i64, d: i64) -> Result<Rat> {
    if d == 1 {
        zeta_neg(one_minus_k)
    } else {
        l_neg(one_minus_k, &DirichletChar::kronecker(d)?)
    }
}

/// Coefficient `H(r+1, N)` of the Cohen–Eisenstein series of weight `r + 3/2`
/// (`rp1 = r + 1`): `zeta(-1-2r)` at `N = 0`, otherwise `L(-r, chi_D) T_{r+1}(v)`
/// where `(-1)^{r+1} N = D v^2`, and 0 when no such decomposition exists.
pub fn cohen_h(rp1: i64, n: i64) -> Result<Rat> {
    if rp1 < 2 {
        return Err(domain!("cohen_h needs r + 1 >= 2, got {rp1}"));
    }
    if n < 0 {
        return Err(domain!("cohen_h needs N >= 0, got {n}"));
    }
    if n == 0 {
        return zeta_neg(1 - 2 * rp1);
    }
    let signed = if rp1 % 2 == 0 { n } else { -n };
    match decompose_disc(signed)? {
        None => Ok(Rat::zero()),
        Some(dd) => Ok(l_neg_disc(1 - rp1, dd.d)? * t_chi(rp1, dd.d, dd.v)?),
    }
}
