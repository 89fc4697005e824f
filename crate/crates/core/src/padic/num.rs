use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{vp_big, Rat};
use crate::error::{domain, Error, Result};

/// Absolute precision used for values known exactly (only exact zeros).
pub(crate) const EXACT: i64 = i64::MAX / 4;

pub(crate) fn p_pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// A p-adic number `p^val * unit` with `unit` a p-adic unit known modulo
/// `p^prec`. A zero carries no unit; its `val` is the absolute precision to
/// which it is known to vanish.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicNum {
    p: u64,
    val: i64,
    unit: BigInt,
    prec: u32,
}

impl PadicNum {
    pub fn zero(p: u64, abs_prec: i64) -> Self {
        PadicNum {
            p,
            val: abs_prec.min(EXACT),
            unit: BigInt::zero(),
            prec: 0,
        }
    }

    pub fn exact_zero(p: u64) -> Self {
        Self::zero(p, EXACT)
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Self::from_int(1, p, prec)
    }

    pub fn from_int(n: i64, p: u64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(n), p, prec)
    }

    pub fn from_bigint(n: &BigInt, p: u64, prec: u32) -> Self {
        if n.is_zero() {
            return Self::exact_zero(p);
        }
        let v = vp_big(n, p);
        let u = n / p_pow(p, v as u32);
        Self::from_parts(p, v, u, prec)
    }

    /// `x` as an element of `Q_p` with `prec` digits of relative precision.
    pub fn from_rat(x: &Rat, p: u64, prec: u32) -> Self {
        if x.is_zero() {
            return Self::exact_zero(p);
        }
        let vn = vp_big(x.numer(), p);
        let vd = vp_big(x.denom(), p);
        let n = x.numer() / p_pow(p, vn as u32);
        let d = x.denom() / p_pow(p, vd as u32);
        let m = p_pow(p, prec);
        let dinv = d.mod_floor(&m).modinv(&m).expect("denominator is a unit");
        Self::from_parts(p, vn - vd, n * dinv, prec)
    }

    /// Builds `p^val * unit` where `unit` must be prime to `p`.
    pub fn from_parts(p: u64, val: i64, unit: BigInt, prec: u32) -> Self {
        if prec == 0 {
            return Self::zero(p, val);
        }
        let m = p_pow(p, prec);
        let unit = unit.mod_floor(&m);
        debug_assert!(!(&unit % BigInt::from(p)).is_zero());
        PadicNum { p, val, unit, prec }
    }

    fn normalise(p: u64, v0: i64, s: BigInt, abs: i64) -> Self {
        if abs >= EXACT {
            // only exact operands: keep the value exact up to a generous precision
            if s.is_zero() {
                return Self::exact_zero(p);
            }
            let t = vp_big(&s, p);
            return Self::from_parts(p, v0 + t, s / p_pow(p, t as u32), 64);
        }
        let m = (abs - v0) as u32;
        let s = s.mod_floor(&p_pow(p, m));
        if s.is_zero() {
            return Self::zero(p, abs);
        }
        let t = vp_big(&s, p);
        let unit = s / p_pow(p, t as u32);
        Self::from_parts(p, v0 + t, unit, m - t as u32)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec == 0 && self.val >= EXACT
    }

    /// Valuation, or `None` for a value indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Valuation, with zeros reporting the precision to which they vanish.
    pub fn val_or_abs(&self) -> i64 {
        self.val
    }

    pub fn abs_prec(&self) -> i64 {
        self.val.saturating_add(self.prec as i64).min(EXACT)
    }

    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    pub fn unit(&self) -> &BigInt {
        &self.unit
    }

    /// Base-p digits of the unit, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let mut u = self.unit.clone();
        let pb = BigInt::from(self.p);
        (0..self.prec)
            .map(|_| {
                let (q, r) = u.div_rem(&pb);
                u = q;
                r.to_u64().unwrap()
            })
            .collect()
    }

    /// Drops digits so that the relative precision is at most `prec`.
    pub fn truncate(&self, prec: u32) -> Self {
        if self.prec <= prec {
            return self.clone();
        }
        Self::from_parts(self.p, self.val, self.unit.clone(), prec)
    }

    /// Caps the absolute precision at `abs`.
    pub fn cap_abs(&self, abs: i64) -> Self {
        if self.abs_prec() <= abs {
            return self.clone();
        }
        if self.is_zero() || abs <= self.val {
            return Self::zero(self.p, abs);
        }
        self.truncate((abs - self.val) as u32)
    }

    /// Exact rational `p^val * unit` (a lift of the truncated value).
    pub fn lift(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let u = Rat::from_integer(self.unit.clone());
        u * crate::arith::pow_int(self.p as i64, self.val)
    }

    /// Least non-negative integer representative, for values in `Z_p`.
    pub fn to_integer_rep(&self) -> Result<BigInt> {
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        if self.val < 0 {
            return Err(domain!("{self} is not a p-adic integer"));
        }
        Ok(&self.unit * p_pow(self.p, self.val as u32))
    }

    /// True when `self - other` has valuation at least `level` (or vanishes to that precision).
    pub fn congruent(&self, other: &PadicNum, level: i64) -> bool {
        let d = self - other;
        d.val_or_abs() >= level
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(domain!("division by a p-adic zero"));
        }
        let m = p_pow(self.p, self.prec);
        let inv = self.unit.modinv(&m).expect("unit is invertible");
        Ok(PadicNum {
            p: self.p,
            val: -self.val,
            unit: inv,
            prec: self.prec,
        })
    }

    pub fn checked_div(&self, o: &PadicNum) -> Result<Self> {
        Ok(self * &o.checked_inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.checked_inv()?.pow(-e);
        }
        if e == 0 {
            return Ok(Self::one(self.p, self.prec.max(1)));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.p, self.val.saturating_mul(e)));
        }
        let m = p_pow(self.p, self.prec);
        Ok(PadicNum {
            p: self.p,
            val: self.val * e,
            unit: self.unit.modpow(&BigInt::from(e), &m),
            prec: self.prec,
        })
    }

    pub fn mul_rat(&self, r: &Rat) -> Self {
        let prec = self.prec.max(1) + 4;
        self * &Self::from_rat(r, self.p, prec)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        self * &Self::from_int(n, self.p, self.prec.max(1) + 4)
    }

    pub fn same_prime(&self, o: &PadicNum) {
        assert_eq!(self.p, o.p, "mixing p-adic numbers for different primes");
    }
}

impl std::ops::Add<&PadicNum> for &PadicNum {
    type Output = PadicNum;
    fn add(self, o: &PadicNum) -> PadicNum {
        self.same_prime(o);
        let p = self.p;
        let abs = self.abs_prec().min(o.abs_prec());
        if self.is_zero() {
            return o.cap_abs(abs);
        }
        if o.is_zero() {
            return self.cap_abs(abs);
        }
        let v0 = self.val.min(o.val);
        if v0 >= abs {
            return PadicNum::zero(p, abs);
        }
        let a = &self.unit * p_pow(p, (self.val - v0) as u32);
        let b = &o.unit * p_pow(p, (o.val - v0) as u32);
        PadicNum::normalise(p, v0, a + b, abs)
    }
}

impl std::ops::Neg for &PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        if self.is_zero() {
            return self.clone();
        }
        PadicNum::from_parts(self.p, self.val, -&self.unit, self.prec)
    }
}

impl std::ops::Neg for PadicNum {
    type Output = PadicNum;
    fn neg(self) -> PadicNum {
        -&self
    }
}

impl std::ops::Sub<&PadicNum> for &PadicNum {
    type Output = PadicNum;
    fn sub(self, o: &PadicNum) -> PadicNum {
        self + &(-o)
    }
}

impl std::ops::Mul<&PadicNum> for &PadicNum {
    type Output = PadicNum;
    fn mul(self, o: &PadicNum) -> PadicNum {
        self.same_prime(o);
        if self.is_zero() || o.is_zero() {
            return PadicNum::zero(self.p, self.val.saturating_add(o.val));
        }
        let prec = self.prec.min(o.prec);
        PadicNum::from_parts(self.p, self.val + o.val, &self.unit * &o.unit, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl std::ops::$tr for PadicNum {
            type Output = PadicNum;
            fn $f(self, o: PadicNum) -> PadicNum {
                (&self).$f(&o)
            }
        }
        impl std::ops::$tr<&PadicNum> for PadicNum {
            type Output = PadicNum;
            fn $f(self, o: &PadicNum) -> PadicNum {
                (&self).$f(o)
            }
        }
        impl std::ops::$tr<PadicNum> for &PadicNum {
            type Output = PadicNum;
            fn $f(self, o: PadicNum) -> PadicNum {
                self.$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Renders as `O(p^v)*(d0 + d1*p + d2*p^2 + ...)`: the leading power of `p`
/// followed by every known digit of the unit. A zero known to absolute
/// precision `v` renders as `O(p^v)`; an exact zero as `0`.
impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        write!(f, "O({}^{})", self.p, self.val)?;
        if self.is_zero() {
            return Ok(());
        }
        let terms: Vec<String> = self
            .digits()
            .into_iter()
            .enumerate()
            .map(|(i, d)| match i {
                0 => format!("{d}"),
                1 => format!("{d}*{}", self.p),
                _ => format!("{d}*{}^{i}", self.p),
            })
            .collect();
        write!(f, "*({})", terms.join(" + "))
    }
}

impl FromStr for PadicNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad p-adic number {s:?}"));
        let s = s.trim();
        let head = s.strip_prefix("O(").ok_or_else(bad)?;
        let close = head.find(')').ok_or_else(bad)?;
        let (p, v) = head[..close].split_once('^').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let v: i64 = v.parse().map_err(|_| bad())?;
        if p < 2 {
            return Err(bad());
        }
        let rest = &head[close + 1..];
        if rest.is_empty() {
            return Ok(PadicNum::zero(p, v));
        }
        let body = rest
            .strip_prefix("*(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut unit = BigInt::zero();
        let mut pk = BigInt::one();
        let mut prec = 0u32;
        for (i, t) in body.split(" + ").enumerate() {
            let d: u64 = t.split('*').next().unwrap().trim().parse().map_err(|_| bad())?;
            if d >= p {
                return Err(bad());
            }
            let expected = match i {
                0 => String::new(),
                1 => format!("*{p}"),
                _ => format!("*{p}^{i}"),
            };
            if t.trim()[d.to_string().len()..] != expected {
                return Err(bad());
            }
            unit += &pk * BigInt::from(d);
            pk *= BigInt::from(p);
            prec += 1;
        }
        if (&unit % BigInt::from(p)).is_zero() {
            return Err(bad());
        }
        Ok(PadicNum::from_parts(p, v, unit, prec))
    }
}

impl serde::Serialize for PadicNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for PadicNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Teichmüller representative `omega(a)`: the root of unity congruent to `a`
/// mod `p` (mod 4 when `p = 2`). Zero when `p | a`.
pub fn teichmuller(a: &BigInt, p: u64, prec: u32) -> PadicNum {
    if (a % BigInt::from(p)).is_zero() {
        return PadicNum::exact_zero(p);
    }
    if p == 2 {
        let s = if a.mod_floor(&BigInt::from(4)) == BigInt::one() {
            1
        } else {
            -1
        };
        return PadicNum::from_int(s, 2, prec);
    }
    let m = p_pow(p, prec);
    let u = a.mod_floor(&m).modpow(&p_pow(p, prec), &m);
    PadicNum::from_parts(p, 0, u, prec)
}

/// `<a> = a / omega(a)`, a principal unit.
pub fn principal_unit(a: &BigInt, p: u64, prec: u32) -> Result<PadicNum> {
    let w = teichmuller(a, p, prec);
    PadicNum::from_bigint(a, p, prec).checked_div(&w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn teichmuller_example() {
        let w = teichmuller(&BigInt::from(2), 5, 6);
        let expect = BigInt::from(2).modpow(&p_pow(5, 6), &p_pow(5, 6));
        assert_eq!(w.unit(), &expect);
        assert_eq!(w.pow(4).unwrap(), PadicNum::one(5, 6));
        assert!(teichmuller(&BigInt::from(10), 5, 6).is_exact_zero());
    }

    #[test]
    fn rational_roundtrip() {
        let x = PadicNum::from_rat(&rat(781, 63), 5, 10);
        assert_eq!(x.valuation(), Some(0));
        let y = PadicNum::from_rat(&rat(3, 50), 5, 8);
        assert_eq!(y.valuation(), Some(-2));
        let back = y.to_string().parse::<PadicNum>().unwrap();
        assert_eq!(back, y);
        assert!(y.to_string().len() > 10);
    }

    #[test]
    fn precision_rules() {
        let a = PadicNum::from_rat(&rat(1, 1), 5, 6);
        let b = PadicNum::from_rat(&rat(26, 1), 5, 3);
        let d = &a - &b;
        // 1 - 26 = -25 but b is only known mod 5^3
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.abs_prec(), 3);
        let z = &a - &a;
        assert!(z.is_zero());
        assert_eq!(z.abs_prec(), 6);
        let m = &PadicNum::from_int(5, 5, 4) * &PadicNum::from_int(3, 5, 2);
        assert_eq!(m.valuation(), Some(1));
        assert_eq!(m.rel_prec(), 2);
    }

    #[test]
    fn display_forms() {
        let x = PadicNum::from_int(7, 5, 3);
        assert_eq!(x.to_string(), "O(5^0)*(2 + 1*5 + 0*5^2)");
        assert_eq!(PadicNum::zero(5, 4).to_string(), "O(5^4)");
        assert_eq!(PadicNum::exact_zero(5).to_string(), "0");
        assert!("O(5^0)*(5)".parse::<PadicNum>().is_err());
        assert!("garbage".parse::<PadicNum>().is_err());
    }

    #[test]
    fn division() {
        let x = PadicNum::from_rat(&rat(2, 3), 7, 8);
        let y = PadicNum::from_rat(&rat(5, 21), 7, 8);
        let q = x.checked_div(&y).unwrap();
        assert_eq!(q, PadicNum::from_rat(&rat(14, 5), 7, 8));
        assert!(x.checked_div(&PadicNum::zero(7, 3)).is_err());
    }
}
