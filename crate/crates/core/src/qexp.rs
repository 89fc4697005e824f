//! Truncated expansions of harmonic Maass forms
//! `f = sum c+(n) q^n + c-(0) y^{1-k} + sum c-(n) Gamma(1-k, -4 pi n y) q^n`
//! with exact symbolic or p-adic coefficients, and the constructors for the
//! Eisenstein series and the Maass–Eisenstein families.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{
    decompose_disc, divisor_power_sum, factorial, gamma_half, is_prime, kronecker, mobius_u64, pow_int, rat, sigma,
    sigma_p, t_chi, HalfInt, Rat,
};
use crate::bernoulli::{l_neg_disc, zeta_neg, DirichletChar};
use crate::error::{domain, Error, Result};
use crate::padic::{
    padic_gamma_half, padic_gamma_int_mod, padic_gamma_one_half, padic_l_int, padic_zeta_neg, PadicNum, PadicWeight,
};
use crate::sym::{SymScalar, SYM_ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    G,
    H,
    Gp,
    Hp,
    Eis,
    EisP,
    Cohen,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::G => "G",
            Family::H => "H",
            Family::Gp => "Gp",
            Family::Hp => "Hp",
            Family::Eis => "Eis",
            Family::EisP => "EisP",
            Family::Cohen => "Cohen",
        }
    }

    pub fn is_holomorphic(self) -> bool {
        matches!(self, Family::Eis | Family::EisP | Family::Cohen)
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "G" => Family::G,
            "H" => Family::H,
            "Gp" => Family::Gp,
            "Hp" => Family::Hp,
            "Eis" => Family::Eis,
            "EisP" => Family::EisP,
            "Cohen" => Family::Cohen,
            _ => return Err(Error::Parse(format!("unknown family {s:?}"))),
        })
    }
}

/// Exact truncated expansion, valid for `|n| <= truncation`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicQExp {
    pub family: Family,
    pub weight: HalfInt,
    pub level: u64,
    pub truncation: u64,
    plus: BTreeMap<i64, SymScalar>,
    minus_zero: SymScalar,
    minus: BTreeMap<i64, SymScalar>,
}

impl HarmonicQExp {
    pub fn new(family: Family, weight: HalfInt, level: u64, truncation: u64) -> Self {
        HarmonicQExp {
            family,
            weight,
            level,
            truncation,
            plus: BTreeMap::new(),
            minus_zero: SymScalar::zero(),
            minus: BTreeMap::new(),
        }
    }

    fn in_range(&self, n: i64) -> Result<()> {
        if n.unsigned_abs() > self.truncation {
            return Err(domain!("index {n} outside truncation {}", self.truncation));
        }
        Ok(())
    }

    pub fn set_plus(&mut self, n: i64, c: SymScalar) -> Result<()> {
        self.in_range(n)?;
        if c.is_zero() {
            self.plus.remove(&n);
        } else {
            self.plus.insert(n, c);
        }
        Ok(())
    }

    pub fn set_minus(&mut self, n: i64, c: SymScalar) -> Result<()> {
        self.in_range(n)?;
        if n == 0 {
            return Err(domain!("the n = 0 non-holomorphic term is minus_zero"));
        }
        if c.is_zero() {
            self.minus.remove(&n);
        } else {
            self.minus.insert(n, c);
        }
        Ok(())
    }

    pub fn set_minus_zero(&mut self, c: SymScalar) {
        self.minus_zero = c;
    }

    pub fn plus(&self, n: i64) -> &SymScalar {
        self.plus.get(&n).unwrap_or(&SYM_ZERO)
    }

    pub fn minus(&self, n: i64) -> &SymScalar {
        self.minus.get(&n).unwrap_or(&SYM_ZERO)
    }

    pub fn minus_zero(&self) -> &SymScalar {
        &self.minus_zero
    }

    pub fn plus_terms(&self) -> impl Iterator<Item = (i64, &SymScalar)> {
        self.plus.iter().map(|(n, c)| (*n, c))
    }

    pub fn minus_terms(&self) -> impl Iterator<Item = (i64, &SymScalar)> {
        self.minus.iter().map(|(n, c)| (*n, c))
    }

    /// No `y^{1-k}` term and no incomplete-gamma terms.
    pub fn is_holomorphic(&self) -> bool {
        self.minus.is_empty() && self.minus_zero.is_zero()
    }

    /// Lowest index carrying a plus coefficient (0 when there is none).
    pub fn plus_min_index(&self) -> i64 {
        self.plus.keys().next().copied().unwrap_or(0).min(0)
    }

    pub fn truncated(&self, n: u64) -> Self {
        let n = n.min(self.truncation);
        let keep = |m: &i64| m.unsigned_abs() <= n;
        HarmonicQExp {
            truncation: n,
            plus: self
                .plus
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            minus: self
                .minus
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, a: &SymScalar) -> Self {
        let mut out = HarmonicQExp::new(self.family, self.weight, self.level, self.truncation);
        for (n, c) in &self.plus {
            out.set_plus(*n, a * c).unwrap();
        }
        for (n, c) in &self.minus {
            out.set_minus(*n, a * c).unwrap();
        }
        out.minus_zero = a * &self.minus_zero;
        out
    }

    /// Sum of two expansions of the same weight, valid on the smaller truncation.
    pub fn add(&self, o: &HarmonicQExp) -> Result<Self> {
        if self.weight != o.weight {
            return Err(domain!("cannot add weights {} and {}", self.weight, o.weight));
        }
        let t = self.truncation.min(o.truncation);
        let mut out = HarmonicQExp::new(self.family, self.weight, self.level.max(o.level), t);
        for f in [self, o] {
            for (n, c) in f.plus.range(-(t as i64)..=t as i64) {
                let v = out.plus(*n) + c;
                out.set_plus(*n, v)?;
            }
            for (n, c) in f.minus.range(-(t as i64)..=t as i64) {
                let v = out.minus(*n) + c;
                out.set_minus(*n, v)?;
            }
            out.minus_zero += &f.minus_zero;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |m: &BTreeMap<i64, SymScalar>| {
            m.iter()
                .map(|(n, c)| CoeffJson {
                    n: *n,
                    coeff: c.to_string(),
                })
                .collect::<Vec<_>>()
        };
        let (num, den) = self.weight.num_den();
        serde_json::to_value(QExpJson {
            family: self.family.name().to_string(),
            weight: WeightJson { num, den },
            level: self.level,
            truncation: self.truncation,
            plus: enc(&self.plus),
            minus_zero: self.minus_zero.to_string(),
            minus: enc(&self.minus),
            padic: None,
        })
        .expect("serialisable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: QExpJson = serde_json::from_value(v.clone())?;
        if j.padic.is_some() {
            return Err(Error::Parse("dump holds a p-adic expansion".into()));
        }
        let mut f = HarmonicQExp::new(j.family.parse()?, j.weight.to_half()?, j.level, j.truncation);
        for c in j.plus {
            f.set_plus(c.n, c.coeff.parse()?)?;
        }
        for c in j.minus {
            f.set_minus(c.n, c.coeff.parse()?)?;
        }
        f.minus_zero = j.minus_zero.parse()?;
        Ok(f)
    }

    /// Text rendering in the style `c0 + c1 q + c2 q^2 + ...`, followed by the
    /// non-holomorphic terms when present.
    pub fn to_text(&self) -> String {
        let mut terms: Vec<String> = self
            .plus
            .iter()
            .map(|(n, c)| render_term(&sym_text(c), *n, ""))
            .collect();
        if !self.minus_zero.is_zero() {
            let e = HalfInt::from_int(1) - self.weight;
            terms.push(format!("({})*y^({e})", self.minus_zero));
        }
        for (n, c) in &self.minus {
            let e = HalfInt::from_int(1) - self.weight;
            let g = format!("Gamma({e}, {}*pi*y)", -4 * n);
            terms.push(render_term(&sym_text(c), *n, &g));
        }
        join_terms(terms)
    }
}

fn sym_text(c: &SymScalar) -> CoeffText {
    match c.as_rational() {
        Some(r) => CoeffText::Rational(r),
        None => CoeffText::Other(c.to_string()),
    }
}

enum CoeffText {
    Rational(Rat),
    Other(String),
}

fn render_term(c: &CoeffText, n: i64, tag: &str) -> String {
    let qpart = match n {
        0 => String::new(),
        1 => "q".to_string(),
        _ => format!("q^{n}"),
    };
    let body = if tag.is_empty() {
        qpart.clone()
    } else if qpart.is_empty() {
        tag.to_string()
    } else {
        format!("{tag}*{qpart}")
    };
    match c {
        CoeffText::Rational(r) if body.is_empty() => r.to_string(),
        CoeffText::Rational(r) if r.is_one() => body,
        CoeffText::Rational(r) if *r == -Rat::one() => format!("-{body}"),
        CoeffText::Rational(r) if r.is_integer() => {
            format!("{r}{}{body}", if tag.is_empty() { "" } else { "*" })
        }
        CoeffText::Rational(r) => format!("({r}){body}"),
        CoeffText::Other(s) if body.is_empty() => format!("({s})"),
        CoeffText::Other(s) => format!("({s}){body}"),
    }
}

fn join_terms(terms: Vec<String>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {t}");
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct WeightJson {
    num: i64,
    den: i64,
}

impl WeightJson {
    fn to_half(&self) -> Result<HalfInt> {
        match self.den {
            1 => Ok(HalfInt::from_int(self.num)),
            2 if self.num % 2 != 0 => Ok(HalfInt::from_twice(self.num)),
            _ => Err(Error::Parse(format!("bad weight {}/{}", self.num, self.den))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    n: i64,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PadicMeta {
    p: u64,
    precision: u32,
    #[serde(default)]
    branch: String,
    #[serde(default)]
    flagged: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct QExpJson {
    family: String,
    weight: WeightJson,
    level: u64,
    truncation: u64,
    plus: Vec<CoeffJson>,
    minus_zero: String,
    minus: Vec<CoeffJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    padic: Option<PadicMeta>,
}

fn check_trunc(n_max: u64) -> Result<()> {
    if n_max == 0 {
        return Err(domain!("truncation must be positive"));
    }
    Ok(())
}

/// `G_{k2} = zeta(1-k2)/2 + sum sigma_{k2-1}(n) q^n`.
pub fn eisenstein(k2: i64, n_max: u64) -> Result<HarmonicQExp> {
    if k2 < 4 || k2 % 2 != 0 {
        return Err(domain!("eisenstein needs an even weight >= 4, got {k2}"));
    }
    check_trunc(n_max)?;
    let mut f = HarmonicQExp::new(Family::Eis, HalfInt::from_int(k2), 1, n_max);
    f.set_plus(0, SymScalar::from_rat(zeta_neg(1 - k2)? / rat(2, 1)))?;
    for n in 1..=n_max as i64 {
        f.set_plus(n, SymScalar::from_rat(Rat::from_integer(sigma((k2 - 1) as u32, n)?)))?;
    }
    Ok(f)
}

/// `G_{k2}^{(p)} = zeta^{(p)}(1-k2)/2 + sum sigma^{(p)}_{k2-1}(n) q^n`, including
/// the weight 2 series `G_2^{(p)}`, which is a form on `Gamma_0(p)`.
pub fn eisenstein_p(k2: i64, p: u64, n_max: u64) -> Result<HarmonicQExp> {
    if k2 < 2 || k2 % 2 != 0 {
        return Err(domain!("eisenstein_p needs an even weight >= 2, got {k2}"));
    }
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    check_trunc(n_max)?;
    let mut f = HarmonicQExp::new(Family::EisP, HalfInt::from_int(k2), p, n_max);
    f.set_plus(0, SymScalar::from_rat(padic_zeta_neg(1 - k2, p)? / rat(2, 1)))?;
    for n in 1..=n_max as i64 {
        f.set_plus(
            n,
            SymScalar::from_rat(Rat::from_integer(sigma_p((k2 - 1) as u32, n, p)?)),
        )?;
    }
    Ok(f)
}

/// Weight `r + 3/2` Cohen–Eisenstein series with coefficients `H(r+1, N)`.
pub fn cohen_eisenstein(rp1: i64, n_max: u64) -> Result<HarmonicQExp> {
    check_trunc(n_max)?;
    let mut f = HarmonicQExp::new(Family::Cohen, HalfInt::from_twice(2 * rp1 + 1), 4, n_max);
    for n in 0..=n_max as i64 {
        f.set_plus(n, SymScalar::from_rat(crate::bernoulli::cohen_h(rp1, n)?))?;
    }
    Ok(f)
}

/// `(-1)^k (2 pi)^{-2k}`.
fn g_prefactor(k: i64) -> SymScalar {
    let s = if k % 2 == 0 { 1 } else { -1 };
    SymScalar::from_rat(pow_int(2, -2 * k) * rat(s, 1)) * SymScalar::pi_pow(-2 * k)
}

/// The weight `-2k` Maass–Eisenstein series `G(z, -2k)`, `k >= 1`.
///
/// The plus constant is `(-1)^k (2k)! zeta(2k+1) / (2 pi)^{2k}`: with this sign
/// the function is invariant under `z -> -1/z` (checked numerically by
/// `numeric::modularity_residual`).
pub fn maass_g(k: i64, n_max: u64) -> Result<HarmonicQExp> {
    if k < 1 {
        return Err(domain!("maass_g needs k >= 1, got {k}"));
    }
    check_trunc(n_max)?;
    let mut f = HarmonicQExp::new(Family::G, HalfInt::from_int(-2 * k), 1, n_max);
    let pre = g_prefactor(k);
    let fact = Rat::from_integer(factorial(2 * k as u64));
    f.set_plus(0, pre.scale(&fact) * SymScalar::zeta(2 * k + 1)?)?;
    // (-1)^{k+1} 2^{1+2k} pi zeta(-2k-1) / (2k+1)
    let s = if k % 2 == 0 { -1 } else { 1 };
    let mz = pow_int(2, 1 + 2 * k) * zeta_neg(-2 * k - 1)? * rat(s, 2 * k + 1);
    f.set_minus_zero(SymScalar::from_rat(mz) * SymScalar::pi_pow(1));
    for n in 1..=n_max as i64 {
        let c = divisor_power_sum(2 * k + 1, n as u64) * pow_int(n, -(2 * k + 1));
        let m = pre.scale(&c);
        f.set_plus(n, m.scale(&fact))?;
        f.set_minus(-n, m)?;
    }
    Ok(f)
}

/// `Gamma((r+a)/2) / (Gamma((r+1+a)/2) Gamma(r+1/2))`, `a = 0` for odd `r`, 1 for even.
pub fn gamma_ratio(r: i64) -> Result<Rat> {
    let a = if r % 2 == 0 { 1 } else { 0 };
    let num = gamma_half(HalfInt::from_twice(r + a))?;
    let den = gamma_half(HalfInt::from_twice(r + 1 + a))? * gamma_half(HalfInt::from_twice(2 * r + 1))?;
    let q = num * den.inv()?;
    q.as_rational()
        .ok_or_else(|| domain!("gamma ratio for r = {r} is not rational: {q}"))
}

fn h_sign_disc(r: i64, n: i64) -> i64 {
    if r % 2 == 0 {
        n
    } else {
        -n
    }
}

/// The weight `-r + 1/2` Maass–Eisenstein series `H(z, -r + 1/2)` on `Gamma_0(4)`.
///
/// For `N < 0` the power `N^{r+1/2}` is taken as `|N|^{r+1/2} i^{2r+1}`.
pub fn maass_h(r: i64, n_max: u64) -> Result<HarmonicQExp> {
    if r < 1 {
        return Err(domain!("maass_h needs r >= 1, got {r}"));
    }
    check_trunc(n_max)?;
    let mut f = HarmonicQExp::new(Family::H, HalfInt::from_twice(1 - 2 * r), 4, n_max);
    let gr = gamma_ratio(r)?;
    f.set_plus(0, SymScalar::i_pow(2 * r - 1) * SymScalar::zeta(1 + 2 * r)?)?;
    let mz = pow_int(2, 2 * r + 4) * zeta_neg(-1 - 2 * r)?
        / (rat(2 * r - 3, 1) * Rat::from_integer(factorial(2 * r as u64)));
    f.set_minus_zero(SymScalar::from_rat(mz) * SymScalar::i() * SymScalar::pi_pow(2 * r + 1));
    let n_max = n_max as i64;
    for n in 1..=n_max {
        if let Some(dd) = decompose_disc(h_sign_disc(r, n))? {
            let t = t_chi(r + 1, dd.d, dd.v)? * pow_int(dd.v as i64, -(2 * r + 1));
            let c = SymScalar::i_pow(2 * r + 1) * SymScalar::l_value(dd.d, 1 + r)?.scale(&t);
            f.set_plus(n, c)?;
        }
        let m = -n;
        if let Some(dd) = decompose_disc(h_sign_disc(r, m))? {
            let l = l_neg_disc(-r, dd.d)?;
            let t = t_chi(r + 1, dd.d, dd.v)?;
            let c =
                SymScalar::pi_half_pow(3) * SymScalar::abs_pow_half(m, -(2 * r + 1))? * SymScalar::i_pow(-(2 * r + 1));
            f.set_minus(m, c.scale(&(l * t * &gr)))?;
        }
    }
    Ok(f)
}

/// Checks `G^{(p)} = G(z) - G(pz)` coefficientwise for `n <= n_max`: the
/// identity `sigma^{(p)}_{2k+1}(n)/n^{2k+1} = sigma_{2k+1}(n)/n^{2k+1} - sigma_{2k+1}(n/p)/(n/p)^{2k+1}`
/// on plus and minus parts and `(1 - p^{1+2k}) c-(0)` against the stabilised
/// `zeta^{(p)}(-2k-1)` on the `y^{1+2k}` term.
pub fn stabilization_check(k: i64, p: u64, n_max: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    let g = maass_g(k, n_max)?;
    let pre = g_prefactor(k);
    let fact = Rat::from_integer(factorial(2 * k as u64));
    for n in 1..=n_max as i64 {
        let sp = Rat::from_integer(sigma_p((2 * k + 1) as u32, n, p)?) * pow_int(n, -(2 * k + 1));
        let stab_plus = pre.scale(&(&sp * &fact));
        let stab_minus = pre.scale(&sp);
        let (sub_plus, sub_minus) = if n % p as i64 == 0 {
            (g.plus(n / p as i64).clone(), g.minus(-n / p as i64).clone())
        } else {
            (SymScalar::zero(), SymScalar::zero())
        };
        if stab_plus != g.plus(n) - &sub_plus || stab_minus != g.minus(-n) - &sub_minus {
            return Ok(false);
        }
    }
    let s = if k % 2 == 0 { -1 } else { 1 };
    let mz = pow_int(2, 1 + 2 * k) * padic_zeta_neg(-2 * k - 1, p)? * rat(s, 2 * k + 1);
    let direct = SymScalar::from_rat(mz) * SymScalar::pi_pow(1);
    let stabilised = g.minus_zero().scale(&(Rat::one() - pow_int(p as i64, 1 + 2 * k)));
    Ok(direct == stabilised)
}

/// A p-adic coefficient `i^e * sqrt(m) * x` with `e` in {0, 1} and `m` squarefree.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicCoeff {
    pub value: PadicNum,
    pub i: bool,
    pub sqrt: u64,
}

impl PadicCoeff {
    pub fn real(value: PadicNum) -> Self {
        PadicCoeff {
            value,
            i: false,
            sqrt: 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Same formal factors `i` and square root.
    pub fn same_shape(&self, o: &PadicCoeff) -> bool {
        self.i == o.i && self.sqrt == o.sqrt
    }
}

impl std::fmt::Display for PadicCoeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.i {
            write!(f, "i*")?;
        }
        if self.sqrt != 1 {
            write!(f, "sqrt({})*", self.sqrt)?;
        }
        write!(f, "{}", self.value)
    }
}

impl std::str::FromStr for PadicCoeff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut i = false;
        let mut sqrt = 1;
        if let Some(r) = rest.strip_prefix("i*") {
            i = true;
            rest = r;
        }
        if let Some(r) = rest.strip_prefix("sqrt(") {
            let close = r
                .find(")*")
                .ok_or_else(|| Error::Parse(format!("bad coefficient {s:?}")))?;
            sqrt = r[..close]
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?;
            rest = &r[close + 2..];
        }
        Ok(PadicCoeff {
            value: rest.parse()?,
            i,
            sqrt,
        })
    }
}

/// p-adic expansion; coefficients are known to the precision each carries.
#[derive(Clone, Debug, PartialEq)]
pub struct PadicQExp {
    pub family: Family,
    pub weight: HalfInt,
    pub padic_weight: PadicWeight,
    pub level: u64,
    pub truncation: u64,
    pub p: u64,
    pub precision: u32,
    pub plus: BTreeMap<i64, PadicCoeff>,
    pub minus_zero: PadicCoeff,
    pub minus: BTreeMap<i64, PadicCoeff>,
    /// Which `L_p` branches were used for the `zeta^{(p)}` and `L_p` values.
    pub branch: String,
    /// Coefficients that could not be computed (pole of `L_p`), by description.
    pub flagged: Vec<String>,
}

impl PadicQExp {
    fn new(family: Family, weight: HalfInt, level: u64, truncation: u64, p: u64, precision: u32) -> Result<Self> {
        Ok(PadicQExp {
            family,
            weight,
            padic_weight: PadicWeight::from_weight(weight, p, precision)?,
            level,
            truncation,
            p,
            precision,
            plus: BTreeMap::new(),
            minus_zero: PadicCoeff::real(PadicNum::exact_zero(p)),
            minus: BTreeMap::new(),
            branch: String::new(),
            flagged: Vec::new(),
        })
    }

    /// Embeds an expansion whose coefficients are all rational.
    pub fn from_rational(f: &HarmonicQExp, p: u64, precision: u32) -> Result<Self> {
        let mut out = PadicQExp::new(f.family, f.weight, f.level, f.truncation, p, precision)?;
        let conv = |c: &SymScalar| -> Result<PadicCoeff> {
            let r = c
                .as_rational()
                .ok_or_else(|| domain!("coefficient {c} is not rational"))?;
            Ok(PadicCoeff::real(PadicNum::from_rat(&r, p, precision)))
        };
        for (n, c) in f.plus_terms() {
            out.plus.insert(n, conv(c)?);
        }
        for (n, c) in f.minus_terms() {
            out.minus.insert(n, conv(c)?);
        }
        out.minus_zero = conv(f.minus_zero())?;
        Ok(out)
    }

    pub fn plus_coeff(&self, n: i64) -> PadicCoeff {
        self.plus
            .get(&n)
            .cloned()
            .unwrap_or_else(|| PadicCoeff::real(PadicNum::exact_zero(self.p)))
    }

    pub fn minus_coeff(&self, n: i64) -> PadicCoeff {
        self.minus
            .get(&n)
            .cloned()
            .unwrap_or_else(|| PadicCoeff::real(PadicNum::exact_zero(self.p)))
    }

    fn put(map: &mut BTreeMap<i64, PadicCoeff>, n: i64, c: PadicCoeff) {
        if !c.value.is_exact_zero() {
            map.insert(n, c);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |m: &BTreeMap<i64, PadicCoeff>| {
            m.iter()
                .map(|(n, c)| CoeffJson {
                    n: *n,
                    coeff: c.to_string(),
                })
                .collect::<Vec<_>>()
        };
        let (num, den) = self.weight.num_den();
        serde_json::to_value(QExpJson {
            family: self.family.name().to_string(),
            weight: WeightJson { num, den },
            level: self.level,
            truncation: self.truncation,
            plus: enc(&self.plus),
            minus_zero: self.minus_zero.to_string(),
            minus: enc(&self.minus),
            padic: Some(PadicMeta {
                p: self.p,
                precision: self.precision,
                branch: self.branch.clone(),
                flagged: self.flagged.clone(),
            }),
        })
        .expect("serialisable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let j: QExpJson = serde_json::from_value(v.clone())?;
        let meta = j.padic.ok_or_else(|| Error::Parse("dump is not p-adic".into()))?;
        let mut f = PadicQExp::new(
            j.family.parse()?,
            j.weight.to_half()?,
            j.level,
            j.truncation,
            meta.p,
            meta.precision,
        )?;
        for c in j.plus {
            f.plus.insert(c.n, c.coeff.parse()?);
        }
        for c in j.minus {
            f.minus.insert(c.n, c.coeff.parse()?);
        }
        f.minus_zero = j.minus_zero.parse()?;
        f.branch = meta.branch;
        f.flagged = meta.flagged;
        Ok(f)
    }

    pub fn to_text(&self) -> String {
        let mut terms: Vec<String> = self
            .plus
            .iter()
            .map(|(n, c)| render_term(&CoeffText::Other(c.to_string()), *n, ""))
            .collect();
        if !self.minus_zero.value.is_exact_zero() {
            terms.push(format!(
                "({})*y^({})",
                self.minus_zero,
                HalfInt::from_int(1) - self.weight
            ));
        }
        for (n, c) in &self.minus {
            let e = HalfInt::from_int(1) - self.weight;
            let g = format!("Gamma({e}, {}*pi*y)", -4 * n);
            terms.push(render_term(&CoeffText::Other(c.to_string()), *n, &g));
        }
        join_terms(terms)
    }
}

/// `zeta^{(p)}(s)` on the branch `omega^j`, exact where the branch interpolates
/// a negative odd argument of moderate size.
fn zeta_p_value(s: i64, j: i64, p: u64, prec: u32) -> Result<PadicNum> {
    if s < 0 && (j - (1 - s)).rem_euclid(p as i64 - 1) == 0 && 1 - s <= 200 {
        return Ok(PadicNum::from_rat(&padic_zeta_neg(s, p)?, p, prec));
    }
    padic_l_int(s, &DirichletChar::teichmuller_power(p, j)?, p, prec)
}

fn check_odd(p: u64) -> Result<()> {
    if !is_prime(p) || p == 2 {
        return Err(domain!("p-adic Maass forms need an odd prime, got {p}"));
    }
    Ok(())
}

/// `sum_{d | n, p∤d} d^e / n^e`, p-adically.
fn sigma_ratio_p(e: i64, n: u64, p: u64, prec: u32) -> Result<PadicNum> {
    let mut acc = PadicNum::exact_zero(p);
    for d in crate::arith::divisors(n) {
        if d % p != 0 {
            acc = &acc + &PadicNum::from_int(d as i64, p, prec).pow(e)?;
        }
    }
    Ok(&acc * &PadicNum::from_int(n as i64, p, prec).pow(-e)?)
}

/// `T^{chi_D,(p)}_r(v)` p-adically (any size of `r`).
pub fn t_chi_p_padic(r: i64, d: i64, v: u64, p: u64, prec: u32) -> Result<PadicNum> {
    let mut acc = PadicNum::exact_zero(p);
    for a in crate::arith::divisors(v) {
        if a % p == 0 {
            continue;
        }
        let mu = mobius_u64(a);
        let chi = kronecker(d, a as i64);
        if mu == 0 || chi == 0 {
            continue;
        }
        let mut inner = PadicNum::exact_zero(p);
        for e in crate::arith::divisors(v / a) {
            if e % p != 0 {
                inner = &inner + &PadicNum::from_int(e as i64, p, prec).pow(2 * r - 1)?;
            }
        }
        let term = &PadicNum::from_int(a as i64, p, prec).pow(r - 1)? * &inner;
        acc = if mu * chi > 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

const GUARD: u32 = 6;

/// The p-adic family member `G^{(p)}(z, -2k)` for an integer `k >= 0`.
///
/// `zeta^{(p)}(2k+1)` and `zeta^{(p)}(-2k-1)` are both taken on the branch
/// `omega^{2k+2}`, the one interpolating `zeta` at `-2k-1`. The plus constant
/// carries the same `(-1)^k` as [`maass_g`].
pub fn maass_g_p(k: i64, p: u64, n_max: u64, prec: u32) -> Result<PadicQExp> {
    check_odd(p)?;
    if k < 0 {
        return Err(domain!("maass_g_p needs k >= 0, got {k}"));
    }
    check_trunc(n_max)?;
    let w = prec + GUARD;
    let mut f = PadicQExp::new(Family::Gp, HalfInt::from_int(-2 * k), p, n_max, p, prec)?;
    f.branch = format!("zeta^(p)(s) = L_p(s, omega^{})", (2 * k + 2).rem_euclid(p as i64 - 1));
    let pi = padic_gamma_one_half(p, w)?.pow(2)?;
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let pre = (&PadicNum::from_int(2, p, w) * &pi).pow(-2 * k)?.mul_int(sign);
    let gam = padic_gamma_int_mod((2 * k + 1) as u64, p, w)?;
    match zeta_p_value(2 * k + 1, 2 * k + 2, p, w) {
        Ok(z) => PadicQExp::put(&mut f.plus, 0, PadicCoeff::real((&(&pre * &gam) * &z).truncate(prec))),
        Err(Error::Pole { .. }) => f
            .flagged
            .push(format!("plus(0): pole of zeta^(p) at s = {}", 2 * k + 1)),
        Err(e) => return Err(e),
    }
    let zneg = zeta_p_value(-2 * k - 1, 2 * k + 2, p, w)?;
    let c = &(&PadicNum::from_int(2, p, w).pow(1 + 2 * k)? * &pi) * &zneg;
    let c = c.mul_rat(&rat(-sign, 2 * k + 1));
    f.minus_zero = PadicCoeff::real(c.truncate(prec));
    for n in 1..=n_max as i64 {
        let s = sigma_ratio_p(2 * k + 1, n as u64, p, w)?;
        let m = &pre * &s;
        PadicQExp::put(&mut f.plus, n, PadicCoeff::real((&m * &gam).truncate(prec)));
        PadicQExp::put(&mut f.minus, -n, PadicCoeff::real(m.truncate(prec)));
    }
    Ok(f)
}

/// The p-adic family member `H^{(p)}(z, -r + 1/2)`.
///
/// Branches: for `N < 0`, `L_p(-r, chi_D omega^{r+1})`, which interpolates
/// `(1 - chi_D(p) p^r) L(-r, chi_D)`; for `N > 0`, `L_p(1+r, chi_D omega^{-r})`
/// (an even character, so the value is not identically zero); the constants use
/// `omega^{2r+2}` for both `zeta^{(p)}(1+2r)` and `zeta^{(p)}(-1-2r)`.
pub fn maass_h_p(r: i64, p: u64, n_max: u64, prec: u32) -> Result<PadicQExp> {
    check_odd(p)?;
    if r < 1 {
        return Err(domain!("maass_h_p needs r >= 1, got {r}"));
    }
    check_trunc(n_max)?;
    let w = prec + GUARD;
    let mut f = PadicQExp::new(Family::Hp, HalfInt::from_twice(1 - 2 * r), 4, n_max, p, prec)?;
    f.branch = format!(
        "N>0: L_p(1+r, chi_D omega^-r); N<0: L_p(-r, chi_D omega^(r+1)); zeta^(p) on omega^{}",
        (2 * r + 2).rem_euclid(p as i64 - 1)
    );
    let half = padic_gamma_one_half(p, w)?;
    let pi = half.pow(2)?;
    let a = if r % 2 == 0 { 1 } else { 0 };
    let gr = padic_gamma_half(HalfInt::from_twice(r + a), p, w)?.checked_div(
        &(&padic_gamma_half(HalfInt::from_twice(r + 1 + a), p, w)?
            * &padic_gamma_half(HalfInt::from_twice(2 * r + 1), p, w)?),
    )?;
    // i^{2r+1} = (-1)^r i, i^{2r-1} = (-1)^{r+1} i, i^{-(2r+1)} = (-1)^{r+1} i
    let sgn_r = if r % 2 == 0 { 1 } else { -1 };
    let z_pos = zeta_p_value(1 + 2 * r, 2 * r + 2, p, w)?;
    f.plus.insert(
        0,
        PadicCoeff {
            value: z_pos.mul_int(-sgn_r).truncate(prec),
            i: true,
            sqrt: 1,
        },
    );
    let z_neg = zeta_p_value(-1 - 2 * r, 2 * r + 2, p, w)?;
    let mz = &(&PadicNum::from_int(2, p, w).pow(2 * r + 4)? * &pi.pow(2 * r + 1)?) * &z_neg;
    let mz =
        mz.checked_div(&(&PadicNum::from_int(2 * r - 3, p, w) * &padic_gamma_int_mod((2 * r + 1) as u64, p, w)?))?;
    f.minus_zero = PadicCoeff {
        value: mz.truncate(prec),
        i: true,
        sqrt: 1,
    };

    let mut lpos: HashMap<i64, PadicNum> = HashMap::new();
    let mut lneg: HashMap<i64, PadicNum> = HashMap::new();
    let pi32 = half.pow(3)?;
    for n in 1..=n_max as i64 {
        if let Some(dd) = decompose_disc(h_sign_disc(r, n))? {
            let chi = DirichletChar::kronecker(dd.d)?.with_teich(p, -r)?;
            let l = match lpos.get(&dd.d) {
                Some(l) => l.clone(),
                None => {
                    let l = padic_l_int(1 + r, &chi, p, w)?;
                    lpos.insert(dd.d, l.clone());
                    l
                }
            };
            let t = t_chi_p_padic(r + 1, dd.d, dd.v, p, w)?;
            let v = &(&l * &t) * &PadicNum::from_int(dd.v as i64, p, w).pow(-(2 * r + 1))?;
            PadicQExp::put(
                &mut f.plus,
                n,
                PadicCoeff {
                    value: v.mul_int(sgn_r).truncate(prec),
                    i: true,
                    sqrt: 1,
                },
            );
        }
        let m = -n;
        if let Some(dd) = decompose_disc(h_sign_disc(r, m))? {
            let chi = DirichletChar::kronecker(dd.d)?.with_teich(p, r + 1)?;
            let l = match lneg.get(&dd.d) {
                Some(l) => l.clone(),
                None => {
                    let l = padic_l_int(-r, &chi, p, w)?;
                    lneg.insert(dd.d, l.clone());
                    l
                }
            };
            let t = t_chi_p_padic(r + 1, dd.d, dd.v, p, w)?;
            // |N|^{-(r+1/2)} = |N|^{-r-1} * f * sqrt(m) with |N| = f^2 m
            let (fsq, rad) = split_square(n as u64);
            let abs_part = &PadicNum::from_int(n, p, w).pow(-r - 1)? * &PadicNum::from_int(fsq as i64, p, w);
            let v = &(&(&(&pi32 * &l) * &t) * &gr) * &abs_part;
            PadicQExp::put(
                &mut f.minus,
                m,
                PadicCoeff {
                    value: v.mul_int(-sgn_r).truncate(prec),
                    i: true,
                    sqrt: rad,
                },
            );
        }
    }
    Ok(f)
}

fn split_square(n: u64) -> (u64, u64) {
    let mut f = 1u64;
    let mut m = 1u64;
    for (p, e) in crate::arith::factor(n) {
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
    }
    (f, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_eisenstein_p() {
        let f = eisenstein_p(6, 5, 5).unwrap();
        assert_eq!(f.to_text(), "781/126 + q + 33q^2 + 244q^3 + 1057q^4 + q^5");
        let g = eisenstein_p(10, 5, 5).unwrap();
        assert_eq!(g.to_text(), "488281/66 + q + 513q^2 + 19684q^3 + 262657q^4 + q^5");
    }

    #[test]
    fn eisenstein_examples() {
        let f = eisenstein(4, 3).unwrap();
        assert_eq!(f.plus(0), &SymScalar::from_rat(rat(1, 240)));
        assert_eq!(f.plus(1), &SymScalar::one());
        assert_eq!(eisenstein(10, 3).unwrap().plus(3), &SymScalar::from_int(19684));
        assert!(eisenstein(2, 3).is_err());
        assert!(eisenstein(5, 3).is_err());
    }

    #[test]
    fn maass_g_ratios() {
        let g = maass_g(1, 4).unwrap();
        assert_eq!(g.plus(2).rational_ratio(g.plus(1)), Some(rat(9, 8)));
        assert_eq!(g.plus(4).rational_ratio(g.plus(1)), Some(rat(73, 64)));
        for k in 1..=3 {
            let g = maass_g(k, 6).unwrap();
            for n in 1..=6 {
                let f = Rat::from_integer(factorial(2 * k as u64));
                assert_eq!(g.minus(-n).scale(&f), *g.plus(n));
            }
        }
        assert!(maass_g(0, 4).is_err());
    }

    #[test]
    fn maass_h_examples() {
        let h = maass_h(1, 8).unwrap();
        assert!(h.plus(2).is_zero());
        assert_eq!(h.plus(3), &(-SymScalar::i() * SymScalar::l_value(-3, 2).unwrap()));
        assert_eq!(gamma_ratio(1).unwrap(), rat(2, 1));
        assert!(maass_h(0, 4).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let h = maass_h(2, 12).unwrap();
        let back = HarmonicQExp::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
        let g = maass_g_p(1, 5, 6, 8).unwrap();
        let back = PadicQExp::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn padic_g_ratios() {
        let g = maass_g_p(1, 5, 5, 10).unwrap();
        let ratio = |n: i64| g.plus_coeff(n).value.checked_div(&g.plus_coeff(1).value).unwrap();
        assert_eq!(ratio(2), PadicNum::from_rat(&rat(9, 8), 5, 10));
        let g3 = maass_g_p(3, 5, 5, 10).unwrap();
        let ratio3 = |n: i64| g3.plus_coeff(n).value.checked_div(&g3.plus_coeff(1).value).unwrap();
        assert_eq!(ratio3(2), PadicNum::from_rat(&rat(129, 128), 5, 10));
        assert_eq!(ratio3(5), PadicNum::from_rat(&rat(1, 78125), 5, 10));
    }

    #[test]
    fn stabilization() {
        assert!(stabilization_check(1, 5, 50).unwrap());
        assert!(stabilization_check(2, 2, 50).unwrap());
    }
}
