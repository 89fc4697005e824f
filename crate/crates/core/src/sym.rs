//! Exact scalars of the form `sum_j c_j * m_j` with rational `c_j` and
//! monomials `m_j` in `i`, `pi^{1/2}`, square roots of integers, odd zeta
//! values and quadratic L-values. The transcendental symbols are treated as
//! algebraically independent, so equality is coefficientwise.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_fundamental, pow_int, Rat};
use crate::bernoulli::bernoulli;
use crate::error::{domain, Error, Result};

/// A transcendental factor that may carry a positive or negative exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Transcendental {
    /// `zeta(m)` for odd `m >= 3`.
    Zeta(u32),
    /// `L(s, chi_D)` for a fundamental discriminant `D != 1`.
    L { d: i64, s: u32 },
}

/// One generator of the scalar field, as reported by [`Monomial::factors`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbol {
    I,
    PiHalf,
    Sqrt(u64),
    Zeta(u32),
    L { d: i64, s: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    i: bool,
    pi_half: i64,
    /// Squarefree radicand; 1 means no square root.
    sqrt: u64,
    trans: BTreeMap<Transcendental, i64>,
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial {
            i: false,
            pi_half: 0,
            sqrt: 1,
            trans: BTreeMap::new(),
        }
    }
}

impl Monomial {
    pub fn is_one(&self) -> bool {
        *self == Monomial::default()
    }

    pub fn has_i(&self) -> bool {
        self.i
    }

    pub fn pi_half_exp(&self) -> i64 {
        self.pi_half
    }

    pub fn sqrt_radicand(&self) -> u64 {
        self.sqrt
    }

    pub fn transcendentals(&self) -> impl Iterator<Item = (&Transcendental, &i64)> {
        self.trans.iter()
    }

    pub fn factors(&self) -> Vec<(Symbol, i64)> {
        let mut out = Vec::new();
        if self.i {
            out.push((Symbol::I, 1));
        }
        if self.pi_half != 0 {
            out.push((Symbol::PiHalf, self.pi_half));
        }
        if self.sqrt != 1 {
            out.push((Symbol::Sqrt(self.sqrt), 1));
        }
        for (t, &e) in &self.trans {
            let s = match *t {
                Transcendental::Zeta(m) => Symbol::Zeta(m),
                Transcendental::L { d, s } => Symbol::L { d, s },
            };
            out.push((s, e));
        }
        out
    }

    /// Product of two monomials, with the rational factor it produces.
    fn mul(&self, o: &Monomial) -> (Rat, Monomial) {
        let mut c = Rat::one();
        let i = self.i ^ o.i;
        if self.i && o.i {
            c = -c;
        }
        let g = self.sqrt.gcd(&o.sqrt);
        c *= Rat::from_integer(BigInt::from(g));
        let sqrt = (self.sqrt / g) * (o.sqrt / g);
        let mut trans = self.trans.clone();
        for (t, e) in &o.trans {
            let x = trans.entry(t.clone()).or_insert(0);
            *x += e;
            if *x == 0 {
                trans.remove(t);
            }
        }
        (
            c,
            Monomial {
                i,
                pi_half: self.pi_half + o.pi_half,
                sqrt,
                trans,
            },
        )
    }

    fn inv(&self) -> (Rat, Monomial) {
        // 1/i = -i, 1/sqrt(m) = sqrt(m)/m
        let mut c = Rat::from_integer(BigInt::from(self.sqrt)).recip();
        if self.i {
            c = -c;
        }
        let trans = self.trans.iter().map(|(t, e)| (t.clone(), -e)).collect();
        (
            c,
            Monomial {
                i: self.i,
                pi_half: -self.pi_half,
                sqrt: self.sqrt,
                trans,
            },
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymScalar {
    terms: BTreeMap<Monomial, Rat>,
}

pub static SYM_ZERO: SymScalar = SymScalar { terms: BTreeMap::new() };

impl SymScalar {
    pub fn zero() -> Self {
        SymScalar::default()
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::monomial(c, Monomial::default())
    }

    fn monomial(c: Rat, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SymScalar { terms }
    }

    pub fn i() -> Self {
        Self::monomial(
            Rat::one(),
            Monomial {
                i: true,
                ..Monomial::default()
            },
        )
    }

    /// `i^e` for any integer `e`.
    pub fn i_pow(e: i64) -> Self {
        match e.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::from_int(-1),
            _ => -Self::i(),
        }
    }

    /// `pi^{e/2}`.
    pub fn pi_half_pow(e: i64) -> Self {
        Self::monomial(
            Rat::one(),
            Monomial {
                pi_half: e,
                ..Monomial::default()
            },
        )
    }

    /// `pi^e`.
    pub fn pi_pow(e: i64) -> Self {
        Self::pi_half_pow(2 * e)
    }

    /// Positive square root of a positive integer, reduced to `f * sqrt(m)`.
    pub fn sqrt(n: u64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::zero());
        }
        let mut f = 1u64;
        let mut m = 1u64;
        for (p, e) in crate::arith::factor(n) {
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                m *= p;
            }
        }
        Ok(Self::monomial(
            Rat::from_integer(BigInt::from(f)),
            Monomial {
                sqrt: m,
                ..Monomial::default()
            },
        ))
    }

    /// `|n|^{e/2}` for a nonzero integer `n` and any integer `e`.
    pub fn abs_pow_half(n: i64, e: i64) -> Result<Self> {
        if n == 0 {
            return Err(domain!("abs_pow_half at 0"));
        }
        let a = n.unsigned_abs() as i64;
        let whole = Self::from_rat(pow_int(a, e.div_euclid(2)));
        if e.rem_euclid(2) == 0 {
            Ok(whole)
        } else {
            Ok(whole * Self::sqrt(a as u64)?)
        }
    }

    /// `zeta(m)` for `m >= 2`. Even arguments reduce to a rational multiple of `pi^m`.
    pub fn zeta(m: i64) -> Result<Self> {
        if m < 2 {
            return Err(domain!("symbolic zeta needs m >= 2, got {m}"));
        }
        if m % 2 == 0 {
            // zeta(2j) = (-1)^{j+1} B_{2j} (2 pi)^{2j} / (2 (2j)!)
            let b = bernoulli(m as u64);
            let mut c = b * pow_int(2, m) / Rat::from_integer(crate::arith::factorial(m as u64) * 2);
            if (m / 2) % 2 == 0 {
                c = -c;
            }
            return Ok(Self::from_rat(c) * Self::pi_pow(m));
        }
        let mut trans = BTreeMap::new();
        trans.insert(Transcendental::Zeta(m as u32), 1);
        Ok(Self::monomial(
            Rat::one(),
            Monomial {
                trans,
                ..Monomial::default()
            },
        ))
    }

    /// `L(s, chi_D)` for a fundamental discriminant `D` and `s >= 1`; `D = 1` gives `zeta(s)`.
    pub fn l_value(d: i64, s: i64) -> Result<Self> {
        if d == 1 {
            return Self::zeta(s);
        }
        if !is_fundamental(d) {
            return Err(domain!("{d} is not a fundamental discriminant"));
        }
        if s < 1 {
            return Err(domain!("symbolic L-value needs s >= 1, got {s}"));
        }
        let mut trans = BTreeMap::new();
        trans.insert(Transcendental::L { d, s: s as u32 }, 1);
        Ok(Self::monomial(
            Rat::one(),
            Monomial {
                trans,
                ..Monomial::default()
            },
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The value as a rational, if it has no symbolic part.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Rat, &Monomial)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c, m))
        } else {
            None
        }
    }

    /// Complex conjugate: `i -> -i`; every other symbol is real.
    pub fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), if m.i { -c.clone() } else { c.clone() }))
            .collect();
        SymScalar { terms }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SymScalar {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a single-term scalar.
    pub fn inv(&self) -> Result<Self> {
        let (c, m) = self
            .as_monomial()
            .ok_or_else(|| domain!("only single-term scalars are invertible, got {self}"))?;
        let (k, mi) = m.inv();
        Ok(Self::monomial(k / c, mi))
    }

    /// The rational `c` with `self = c * other`, if one exists.
    pub fn rational_ratio(&self, other: &SymScalar) -> Option<Rat> {
        if other.is_zero() {
            return None;
        }
        let (m0, c0) = other.terms.iter().next().unwrap();
        let c = self.terms.get(m0)? / c0;
        (*self == other.scale(&c)).then_some(c)
    }

    /// The single-term scalar `m` with `self = m * other`, if one exists.
    pub fn ratio(&self, other: &SymScalar) -> Result<Option<SymScalar>> {
        if other.is_zero() {
            return Err(domain!("ratio by a zero scalar"));
        }
        if self.is_zero() {
            return Ok(Some(SymScalar::zero()));
        }
        let (mo, co) = other.terms.iter().next().unwrap();
        let (ms, cs) = self.terms.iter().next().unwrap();
        let (k, mi) = mo.inv();
        let (k2, m) = ms.mul(&mi);
        let cand = Self::monomial(cs / co * k * k2, m);
        Ok((&cand * other == *self).then_some(cand))
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl Add<&SymScalar> for &SymScalar {
    type Output = SymScalar;
    fn add(self, o: &SymScalar) -> SymScalar {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&SymScalar> for SymScalar {
    fn add_assign(&mut self, o: &SymScalar) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for SymScalar {
    fn add_assign(&mut self, o: SymScalar) {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
    }
}

impl Neg for &SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        SymScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        -&self
    }
}

impl Sub<&SymScalar> for &SymScalar {
    type Output = SymScalar;
    fn sub(self, o: &SymScalar) -> SymScalar {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul<&SymScalar> for &SymScalar {
    type Output = SymScalar;
    fn mul(self, o: &SymScalar) -> SymScalar {
        let mut out = SymScalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let (k, m) = ma.mul(mb);
                out.add_term(m, k * ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for SymScalar {
            type Output = SymScalar;
            fn $f(self, o: SymScalar) -> SymScalar {
                (&self).$f(&o)
            }
        }
        impl $tr<&SymScalar> for SymScalar {
            type Output = SymScalar;
            fn $f(self, o: &SymScalar) -> SymScalar {
                (&self).$f(o)
            }
        }
        impl $tr<SymScalar> for &SymScalar {
            type Output = SymScalar;
            fn $f(self, o: SymScalar) -> SymScalar {
                self.$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_exp(e: i64, den: i64) -> String {
    // exponent e/den in lowest terms, parenthesised unless a positive integer
    let g = e.gcd(&den);
    let (n, d) = (e / g, den / g);
    if d == 1 && n > 0 {
        format!("{n}")
    } else if d == 1 {
        format!("({n})")
    } else {
        format!("({n}/{d})")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.i {
            parts.push("i".into());
        }
        if self.pi_half == 2 {
            parts.push("pi".into());
        } else if self.pi_half != 0 {
            parts.push(format!("pi^{}", fmt_exp(self.pi_half, 2)));
        }
        if self.sqrt != 1 {
            parts.push(format!("sqrt({})", self.sqrt));
        }
        for (t, &e) in &self.trans {
            let base = match t {
                Transcendental::Zeta(m) => format!("zeta({m})"),
                Transcendental::L { d, s } => format!("L({d},{s})"),
            };
            if e == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{}", fmt_exp(e, 1)));
            }
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Display for SymScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if c.is_integer() && c.is_positive() {
                write!(f, "{c}*{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn parse_exp(s: &str) -> Result<Rat> {
    let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    parse_rat(s)
}

fn int_exp(e: &Rat, tok: &str) -> Result<i64> {
    if !e.is_integer() {
        return Err(Error::Parse(format!("non-integer exponent in {tok:?}")));
    }
    crate::arith::to_i64(e.numer()).ok_or_else(|| Error::Parse(format!("exponent overflow in {tok:?}")))
}

fn parse_args(inner: &str, tok: &str) -> Result<Vec<i64>> {
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad arguments in {tok:?}")))
        })
        .collect()
}

fn parse_factor(tok: &str) -> Result<SymScalar> {
    let tok = tok.trim();
    if tok.is_empty() {
        return Err(Error::Parse("empty factor".into()));
    }
    if tok == "i" {
        return Ok(SymScalar::i());
    }
    if let Some(rest) = tok.strip_prefix("pi") {
        let e = match rest.strip_prefix('^') {
            Some(x) => parse_exp(x)?,
            None if rest.is_empty() => Rat::one(),
            None => return Err(Error::Parse(format!("bad factor {tok:?}"))),
        };
        let twice = &e * Rat::from_integer(BigInt::from(2));
        return Ok(SymScalar::pi_half_pow(int_exp(&twice, tok)?));
    }
    if tok.starts_with('(') && tok.ends_with(')') {
        return Ok(SymScalar::from_rat(parse_rat(&tok[1..tok.len() - 1])?));
    }
    if tok.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
        return Ok(SymScalar::from_rat(parse_rat(tok)?));
    }
    // name(args) with an optional ^exponent
    let open = tok
        .find('(')
        .ok_or_else(|| Error::Parse(format!("bad factor {tok:?}")))?;
    let close = tok
        .find(')')
        .ok_or_else(|| Error::Parse(format!("bad factor {tok:?}")))?;
    let name = &tok[..open];
    let args = parse_args(&tok[open + 1..close], tok)?;
    let e = match tok[close + 1..].strip_prefix('^') {
        Some(x) => int_exp(&parse_exp(x)?, tok)?,
        None if tok.len() == close + 1 => 1,
        None => return Err(Error::Parse(format!("bad factor {tok:?}"))),
    };
    let base = match (name, args.as_slice()) {
        ("sqrt", [m]) if *m > 0 => SymScalar::sqrt(*m as u64)?,
        ("zeta", [m]) => SymScalar::zeta(*m)?,
        ("L", [d, s]) => SymScalar::l_value(*d, *s)?,
        _ => return Err(Error::Parse(format!("unknown factor {tok:?}"))),
    };
    if e >= 0 {
        Ok(base.pow(e as u32))
    } else {
        Ok(base.inv()?.pow((-e) as u32))
    }
}

impl FromStr for SymScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(SymScalar::zero());
        }
        let mut acc = SymScalar::zero();
        for term in s.split(" + ") {
            let mut t = SymScalar::one();
            for f in term.split('*') {
                t = t * parse_factor(f)?;
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl serde::Serialize for SymScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for SymScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn render_example() {
        let x = SymScalar::from_rat(rat(-3, 4))
            * SymScalar::i()
            * SymScalar::pi_half_pow(5)
            * SymScalar::zeta(3).unwrap()
            * SymScalar::l_value(5, 2).unwrap();
        assert_eq!(x.to_string(), "(-3/4)*i*pi^(5/2)*zeta(3)*L(5,2)");
        assert_eq!(x.to_string().parse::<SymScalar>().unwrap(), x);
    }

    #[test]
    fn i_squared() {
        assert_eq!(SymScalar::i() * SymScalar::i(), SymScalar::from_int(-1));
        assert_eq!(SymScalar::i_pow(-1), -SymScalar::i());
    }

    #[test]
    fn even_zeta_is_rational_pi_power() {
        let z2 = SymScalar::zeta(2).unwrap();
        assert_eq!(z2, SymScalar::from_rat(rat(1, 6)) * SymScalar::pi_pow(2));
        let z4 = SymScalar::zeta(4).unwrap();
        assert_eq!(z4.to_string(), "(1/90)*pi^4");
        assert!(SymScalar::zeta(1).is_err());
    }

    #[test]
    fn sqrt_reduces() {
        let a = SymScalar::sqrt(12).unwrap();
        assert_eq!(a.to_string(), "2*sqrt(3)");
        assert_eq!(&a * &a, SymScalar::from_int(12));
        let b = SymScalar::sqrt(6).unwrap() * SymScalar::sqrt(10).unwrap();
        assert_eq!(b.to_string(), "2*sqrt(15)");
    }

    #[test]
    fn laurent_exponents() {
        let z = SymScalar::zeta(5).unwrap();
        let zi = z.inv().unwrap();
        assert_eq!(zi.to_string(), "zeta(5)^(-1)");
        assert_eq!(&z * &zi, SymScalar::one());
        let l = SymScalar::l_value(-4, 2).unwrap().pow(2);
        assert_eq!(l.to_string(), "L(-4,2)^2");
        assert!(SymScalar::l_value(-8 * 9, 2).is_err());
    }

    #[test]
    fn zero_and_sums() {
        let x: SymScalar = "(-1/2)*pi^(-1) + 3*i".parse().unwrap();
        assert_eq!((&x - &x).to_string(), "0");
        assert_eq!(x.conj().to_string().parse::<SymScalar>().unwrap(), x.conj());
        assert_eq!(x.to_string().parse::<SymScalar>().unwrap(), x);
        assert!("zeta(".parse::<SymScalar>().is_err());
        assert!("foo(3)".parse::<SymScalar>().is_err());
    }

    #[test]
    fn ratio_detects_proportionality() {
        let a: SymScalar = "2*pi + (1/3)*zeta(3)".parse().unwrap();
        let b = a.scale(&rat(-5, 7));
        assert_eq!(b.rational_ratio(&a), Some(rat(-5, 7)));
        let c = &b + &SymScalar::one();
        assert_eq!(c.rational_ratio(&a), None);
        let x: SymScalar = "6*pi*zeta(3)".parse().unwrap();
        let r = x.ratio(&SymScalar::pi_pow(1).scale(&rat(2, 1))).unwrap();
        assert_eq!(r, Some("3*zeta(3)".parse().unwrap()));
        let y: SymScalar = "zeta(3) + pi".parse().unwrap();
        assert_eq!(y.ratio(&SymScalar::pi_pow(1)).unwrap(), None);
        assert!(y.ratio(&SymScalar::zero()).is_err());
    }
}
