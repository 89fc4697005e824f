//! p-adic distance between expansions, congruences between members of a weight
//! family, and convergence of families to a p-adic limit.
//!
//! Nonconstant coefficients of harmonic families are compared after
//! multiplying by `|n|^{1 - floor(kappa)}`; holomorphic families and all
//! constant terms are compared as they stand.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::HalfInt;
use crate::error::{domain, precondition, Result};
use crate::padic::{PadicNum, PadicWeight};
use crate::qexp::{eisenstein_p, maass_g_p, maass_h_p, HarmonicQExp, PadicCoeff, PadicQExp};

/// Precision used when rational expansions are embedded for comparison.
pub const RATIONAL_EMBED_PREC: u32 = 60;

/// Minimum valuation over a set of coefficient differences. `saturated` means
/// the minimum is attained by a difference that vanishes to the precision
/// carried, so the true valuation may be larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Floor {
    pub min: Option<i64>,
    pub saturated: bool,
}

impl Floor {
    const EMPTY: Floor = Floor {
        min: None,
        saturated: false,
    };

    fn add(&mut self, v: i64, sat: bool) {
        match self.min {
            Some(m) if m < v => {}
            Some(m) if m == v => self.saturated &= sat,
            _ => {
                self.min = Some(v);
                self.saturated = sat;
            }
        }
    }

    fn merge(&mut self, o: Floor) {
        if let Some(v) = o.min {
            self.add(v, o.saturated);
        }
    }

    /// `None` (nothing compared) counts as reaching every level.
    pub fn at_least(&self, a: i64) -> bool {
        self.min.is_none_or(|m| m >= a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CongruenceReport {
    pub forms: [String; 2],
    pub p: u64,
    pub level: Option<u32>,
    pub checked_range: u64,
    pub floor_plus: Floor,
    pub floor_minus: Floor,
    pub floor_constants: Floor,
    pub floor: Floor,
    pub pass: bool,
    pub exceptional: Vec<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Normalisation exponent `1 - floor(kappa)` (0 for holomorphic families).
pub fn norm_exponent(f: &PadicQExp) -> i64 {
    if f.family.is_holomorphic() {
        0
    } else {
        1 - f.weight.floor()
    }
}

fn normalised(f: &PadicQExp, n: i64, c: &PadicCoeff) -> Result<PadicCoeff> {
    let e = norm_exponent(f);
    if e == 0 || c.value.is_exact_zero() {
        return Ok(c.clone());
    }
    let m = PadicNum::from_int(n.abs(), f.p, f.precision.max(c.value.rel_prec()));
    Ok(PadicCoeff {
        value: &c.value * &m.pow(e)?,
        ..c.clone()
    })
}

/// Valuation of `a - b`, with `None` when both are exact zeros.
fn diff_val(a: &PadicCoeff, b: &PadicCoeff) -> Result<Option<(i64, bool)>> {
    if a.value.is_exact_zero() && b.value.is_exact_zero() {
        return Ok(None);
    }
    if !a.value.is_exact_zero() && !b.value.is_exact_zero() && !a.same_shape(b) {
        return Err(domain!("coefficients {a} and {b} carry different formal factors"));
    }
    let d = &a.value - &b.value;
    Ok(Some((d.val_or_abs(), d.is_zero())))
}

/// Embeds a rational expansion at [`RATIONAL_EMBED_PREC`].
pub fn embed(f: &HarmonicQExp, p: u64) -> Result<PadicQExp> {
    PadicQExp::from_rational(f, p, RATIONAL_EMBED_PREC)
}

fn padic_form_id(f: &PadicQExp) -> String {
    format!("{}[weight {}, p = {}]", f.family.name(), f.weight, f.p)
}

/// Valuation floors of the normalised coefficient differences of `f` and `g`
/// through `range`, split into plus part, minus part and constant terms.
pub fn vp_expansion_diff(f: &PadicQExp, g: &PadicQExp, range: u64) -> Result<CongruenceReport> {
    if f.p != g.p {
        return Err(domain!("expansions are over different primes {} and {}", f.p, g.p));
    }
    if f.family.is_holomorphic() != g.family.is_holomorphic() || f.weight.is_integer() != g.weight.is_integer() {
        return Err(domain!(
            "{} and {} have different shapes",
            padic_form_id(f),
            padic_form_id(g)
        ));
    }
    let range = range.min(f.truncation).min(g.truncation);
    let (mut fp, mut fm, mut fc) = (Floor::EMPTY, Floor::EMPTY, Floor::EMPTY);
    for n in 1..=range as i64 {
        for idx in [n, -n] {
            if let Some((v, s)) = diff_val(
                &normalised(f, idx, &f.plus_coeff(idx))?,
                &normalised(g, idx, &g.plus_coeff(idx))?,
            )? {
                fp.add(v, s);
            }
            if let Some((v, s)) = diff_val(
                &normalised(f, idx, &f.minus_coeff(idx))?,
                &normalised(g, idx, &g.minus_coeff(idx))?,
            )? {
                fm.add(v, s);
            }
        }
    }
    if let Some((v, s)) = diff_val(&f.plus_coeff(0), &g.plus_coeff(0))? {
        fc.add(v, s);
    }
    if let Some((v, s)) = diff_val(&f.minus_zero, &g.minus_zero)? {
        fc.add(v, s);
    }
    let mut floor = fp;
    floor.merge(fm);
    floor.merge(fc);
    Ok(CongruenceReport {
        forms: [padic_form_id(f), padic_form_id(g)],
        p: f.p,
        level: None,
        checked_range: range,
        floor_plus: fp,
        floor_minus: fm,
        floor_constants: fc,
        floor,
        pass: true,
        exceptional: Vec::new(),
        notes: Vec::new(),
    })
}

/// Reports for a weight pair `k1 = k2 mod (p-1) p^{a-1}`: the Eisenstein pair
/// `G_{k1}^{(p)}, G_{k2}^{(p)}` and the p-adic Maass counterparts of weights
/// `2 - k1, 2 - k2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyCongruence {
    pub eisenstein: CongruenceReport,
    pub maass: CongruenceReport,
    pub pass: bool,
}

/// Checks the congruence of weight `k1` and `k2` members mod `p^a`: all terms of
/// the Eisenstein pair, and the nonconstant non-holomorphic part of the p-adic
/// Maass pair. The Maass plus part and constants are reported only.
pub fn family_congruence(p: u64, k1: i64, k2: i64, a: u32, range: u64) -> Result<FamilyCongruence> {
    if !crate::arith::is_prime(p) || p == 2 {
        return Err(domain!("family_congruence needs an odd prime, got {p}"));
    }
    let pm1 = p as i64 - 1;
    if a < 1 {
        return Err(precondition!("congruence level must be >= 1"));
    }
    for k in [k1, k2] {
        if k < 4 || k % 2 != 0 {
            return Err(precondition!("weights must be even and >= 4, got {k}"));
        }
        if k % pm1 == 0 {
            return Err(precondition!("p - 1 = {pm1} divides the weight {k}"));
        }
    }
    let modulus = pm1 * (p as i64).pow(a - 1);
    if (k1 - k2) % modulus != 0 {
        return Err(precondition!("{k1} and {k2} are not congruent mod {modulus}"));
    }
    let level = a as i64;
    let e1 = embed(&eisenstein_p(k1, p, range)?, p)?;
    let e2 = embed(&eisenstein_p(k2, p, range)?, p)?;
    let mut eis = vp_expansion_diff(&e1, &e2, range)?;
    eis.level = Some(a);
    eis.pass = eis.floor.at_least(level);

    let prec = a + 8;
    let g1 = maass_g_p((k1 - 2) / 2, p, range, prec)?;
    let g2 = maass_g_p((k2 - 2) / 2, p, range, prec)?;
    let mut maass = vp_expansion_diff(&g1, &g2, range)?;
    maass.level = Some(a);
    maass.pass = maass.floor_minus.at_least(level);
    if !maass.floor_plus.at_least(level) {
        maass.notes.push(format!(
            "plus part floor {:?} below {a} (reported only)",
            maass.floor_plus.min
        ));
    }
    if !maass.floor_constants.at_least(level) {
        maass.notes.push(format!(
            "constant terms floor {:?} below {a} (reported only)",
            maass.floor_constants.min
        ));
    }
    let pass = eis.pass && maass.pass;
    Ok(FamilyCongruence {
        eisenstein: eis,
        maass,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitFamily {
    G,
    H,
}

/// One coefficient slot followed along the weight sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    pub slot: String,
    /// `v_p(f_i - f)` for each member of the sequence; `None` where both vanish.
    pub valuations: Vec<Option<i64>>,
    pub saturated: Vec<bool>,
    pub increasing: bool,
    pub exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub family: LimitFamily,
    pub target: String,
    pub target_weight: String,
    pub p: u64,
    pub depth: u32,
    pub sequence: Vec<i64>,
    pub checked_range: u64,
    pub precision: u32,
    pub rows: Vec<LimitRow>,
    pub exceptional: Vec<i64>,
    pub pass: bool,
    pub first_failure: Option<String>,
}

/// Valuations must increase strictly until they reach the working precision
/// (`saturated`), after which every later entry must be saturated too.
fn strictly_increasing(vals: &[Option<i64>], sat: &[bool]) -> bool {
    let mut prev: Option<(i64, bool)> = None;
    for (v, s) in vals.iter().zip(sat) {
        let Some(v) = v else { continue };
        if let Some((pv, ps)) = prev {
            let ok = if ps { *s } else { *s || *v > pv };
            if !ok {
                return false;
            }
        }
        prev = Some((*v, *s));
    }
    true
}

fn member(family: LimitFamily, k: i64, p: u64, range: u64, prec: u32) -> Result<PadicQExp> {
    match family {
        LimitFamily::G => maass_g_p(k, p, range, prec),
        LimitFamily::H => maass_h_p(k, p, range, prec),
    }
}

/// The weight sequence `k_i = k0 + (p-1) p^i`, `i = 1..=depth`.
pub fn weight_sequence(k0: i64, p: u64, depth: u32) -> Vec<i64> {
    (1..=depth).map(|i| k0 + (p as i64 - 1) * (p as i64).pow(i)).collect()
}

/// Convergence of `G^{(p)}(z, -2k_i)` (or `H^{(p)}(z, -r_i + 1/2)`) to the
/// member at `k0` along [`weight_sequence`]: for every nonconstant slot the
/// normalised coefficients, and for the constants the raw coefficients, must
/// approach the target with strictly increasing valuations.
///
/// For the H family, indices `N` whose discriminant `D` is divisible by `p` are
/// exceptional: the normalisation multiplies them by `D^{1+r_i}`, which tends
/// to 0 while the target keeps `D^{1+r}`. They are reported, not judged.
pub fn padic_limit_check(
    family: LimitFamily,
    k0: i64,
    p: u64,
    depth: u32,
    range: u64,
    prec: u32,
) -> Result<LimitReport> {
    if depth == 0 {
        return Err(domain!("depth must be positive"));
    }
    padic_limit_check_along(family, k0, p, &weight_sequence(k0, p, depth), range, prec)
}

/// [`padic_limit_check`] along an explicit sequence `k_1, k_2, ...`.
pub fn padic_limit_check_along(
    family: LimitFamily,
    k0: i64,
    p: u64,
    seq: &[i64],
    range: u64,
    prec: u32,
) -> Result<LimitReport> {
    if seq.is_empty() {
        return Err(domain!("empty weight sequence"));
    }
    let depth = seq.len() as u32;
    let seq = seq.to_vec();
    let target = member(family, k0, p, range, prec)?;
    let members = seq
        .iter()
        .map(|&k| member(family, k, p, range, prec))
        .collect::<Result<Vec<_>>>()?;

    let mut slots: Vec<(String, i64, bool)> = vec![("plus(0)".into(), 0, true), ("minus_zero".into(), 0, false)];
    for n in 1..=range as i64 {
        for idx in [n, -n] {
            slots.push((format!("plus({idx})"), idx, true));
            slots.push((format!("minus({idx})"), idx, false));
        }
    }
    let exceptional_idx: BTreeSet<i64> = match family {
        LimitFamily::G => BTreeSet::new(),
        LimitFamily::H => (1..=range as i64)
            .flat_map(|n| [n, -n])
            .filter(|&n| {
                let sd = if k0 % 2 == 0 { n } else { -n };
                matches!(crate::arith::decompose_disc(sd), Ok(Some(dd)) if dd.d % p as i64 == 0)
            })
            .collect(),
    };

    let pick = |f: &PadicQExp, name: &str, idx: i64, plus: bool| -> Result<PadicCoeff> {
        if name == "minus_zero" {
            return Ok(f.minus_zero.clone());
        }
        let c = if plus { f.plus_coeff(idx) } else { f.minus_coeff(idx) };
        if idx == 0 {
            Ok(c)
        } else {
            normalised(f, idx, &c)
        }
    };

    let mut rows = Vec::new();
    let mut first_failure = None;
    for (name, idx, plus) in slots {
        let t = pick(&target, &name, idx, plus)?;
        let mut vals = Vec::new();
        let mut sats = Vec::new();
        for m in &members {
            match diff_val(&pick(m, &name, idx, plus)?, &t)? {
                Some((v, s)) => {
                    vals.push(Some(v));
                    sats.push(s);
                }
                None => {
                    vals.push(None);
                    sats.push(true);
                }
            }
        }
        if vals.iter().all(Option::is_none) {
            continue;
        }
        let increasing = strictly_increasing(&vals, &sats);
        let exceptional = idx != 0 && exceptional_idx.contains(&idx);
        if !increasing && !exceptional && first_failure.is_none() {
            first_failure = Some(name.clone());
        }
        rows.push(LimitRow {
            slot: name,
            valuations: vals,
            saturated: sats,
            increasing,
            exceptional,
        });
    }
    let weight = target.weight;
    Ok(LimitReport {
        family,
        target: padic_form_id(&target),
        target_weight: describe_weight(&PadicWeight::from_weight(weight, p, prec)?, weight),
        p,
        depth,
        sequence: seq,
        checked_range: range,
        precision: prec,
        rows,
        exceptional: exceptional_idx.into_iter().collect(),
        pass: first_failure.is_none(),
        first_failure,
    })
}

fn describe_weight(w: &PadicWeight, k: HalfInt) -> String {
    format!("{k} in X (residue {} mod p-1)", w.residue)
}

/// Outcome of comparing `xi` of the weight 0 p-adic form with Serre's `G_2^{(p)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SerreReport {
    pub p: u64,
    pub range: u64,
    /// The constant `c` with `xi(G^{(p)}(z, 0)) = c G_2^{(p)}`, when determined.
    pub constant: Option<String>,
    pub first_mismatch: Option<i64>,
    /// `v_p` of `sigma^{(p)}_{2k_i+1}(n) - sigma^{(p)}_1(n)` minimised over `n`,
    /// for the ratios of the approximants' `xi` images.
    pub approximant_floors: Vec<Option<i64>>,
    pub pass: bool,
}

/// `xi_0` on a weight 0 p-adic expansion, p-adically: constant `c-(0)`,
/// `q^n` coefficient `-4 pi^{(p)} c-(-n) n`.
fn xi_weight0(f: &PadicQExp, prec: u32) -> Result<Vec<PadicNum>> {
    let pi = crate::padic::padic_pi(f.p, prec + 4)?;
    let mut out = vec![f.minus_zero.value.clone()];
    for n in 1..=f.truncation as i64 {
        let c = f.minus_coeff(-n);
        out.push((&(&pi * &c.value) * &PadicNum::from_int(n, f.p, prec + 4)).mul_int(-4));
    }
    Ok(out)
}

/// Applies `xi_0` to `G^{(p)}(z, 0)` and compares with `G_2^{(p)}` up to one
/// global constant, to working precision. Also checks that the `q^n / q`
/// coefficient ratios of `xi` of the approximants `G^{(p)}(z, -2k_i)` move
/// towards `sigma^{(p)}_1(n)` with non-decreasing valuations.
pub fn xi_serre_check(p: u64, depth: u32, range: u64, prec: u32) -> Result<SerreReport> {
    if range <= 1 {
        return Ok(SerreReport {
            p,
            range,
            constant: None,
            first_mismatch: None,
            approximant_floors: Vec::new(),
            pass: true,
        });
    }
    let f = maass_g_p(0, p, range, prec)?;
    let x = xi_weight0(&f, prec)?;
    let e2 = embed(&eisenstein_p(2, p, range)?, p)?;
    let c = x[1].checked_div(&e2.plus_coeff(1).value)?;
    let mut first_mismatch = None;
    for n in 0..=range as i64 {
        let want = &c * &e2.plus_coeff(n).value;
        let d = &x[n as usize] - &want;
        if !d.is_zero() {
            first_mismatch = Some(n);
            break;
        }
    }
    let mut floors = Vec::new();
    for k in weight_sequence(0, p, depth) {
        let g = maass_g_p(k, p, range, prec)?;
        let one = g.minus_coeff(-1).value;
        let mut fl = Floor::EMPTY;
        for n in 2..=range as i64 {
            let cn = &g.minus_coeff(-n).value * &PadicNum::from_int(n, p, prec).pow(2 * k + 1)?;
            let ratio = cn.checked_div(&one)?;
            let d = &ratio - &e2.plus_coeff(n).value;
            fl.add(d.val_or_abs(), d.is_zero());
        }
        floors.push(fl.min);
    }
    let nondecreasing = floors.windows(2).all(|w| w[0] <= w[1]);
    Ok(SerreReport {
        p,
        range,
        constant: Some(c.to_string()),
        first_mismatch,
        approximant_floors: floors,
        pass: first_mismatch.is_none() && nondecreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, vp_rat};

    #[test]
    fn self_difference_is_saturated() {
        let f = maass_g_p(1, 5, 10, 8).unwrap();
        let r = vp_expansion_diff(&f, &f, 10).unwrap();
        assert!(r.floor.saturated);
        assert!(r.floor_minus.at_least(8));
    }

    #[test]
    fn eisenstein_mod_5() {
        let e1 = embed(&eisenstein_p(6, 5, 50).unwrap(), 5).unwrap();
        let e2 = embed(&eisenstein_p(10, 5, 50).unwrap(), 5).unwrap();
        let r = vp_expansion_diff(&e1, &e2, 50).unwrap();
        assert!(r.floor.at_least(1));
        assert_eq!(
            vp_rat(&(rat(781, 126) - rat(488281, 66)), 5).map(|v| v >= 1),
            Some(true)
        );
    }

    #[test]
    fn family_examples() {
        assert!(family_congruence(5, 6, 10, 1, 30).unwrap().pass);
        assert!(family_congruence(5, 6, 26, 2, 30).unwrap().pass);
        assert!(matches!(
            family_congruence(5, 4, 8, 1, 30),
            Err(crate::Error::Precondition(_))
        ));
        assert!(matches!(
            family_congruence(5, 6, 14, 2, 30),
            Err(crate::Error::Precondition(_))
        ));
    }

    #[test]
    fn limit_small() {
        let r = padic_limit_check(LimitFamily::G, 1, 5, 3, 10, 14).unwrap();
        assert!(r.pass, "{:?}", r.first_failure);
    }

    #[test]
    fn limit_plateaus_still_converge() {
        // plus(2) for k0 = 2 sits on a plateau at the first step: [4, 4, 5, 6]
        let r = padic_limit_check(LimitFamily::G, 2, 5, 4, 20, 18).unwrap();
        assert!(!r.pass);
        let row = r.rows.iter().find(|row| row.slot == "plus(2)").unwrap();
        assert_eq!(row.valuations, vec![Some(4), Some(4), Some(5), Some(6)]);
        for row in &r.rows {
            let (first, last) = (row.valuations[0], row.valuations[3]);
            assert!(row.saturated[3] || last > first, "{row:?}");
        }
        let seq = [6, 22, 102];
        let along = padic_limit_check_along(LimitFamily::G, 2, 5, &seq, 5, 12).unwrap();
        assert_eq!(along.sequence, seq);
    }

    #[test]
    fn serre_small() {
        let r = xi_serre_check(5, 2, 12, 10).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(xi_serre_check(5, 2, 1, 10).unwrap().pass);
    }
}
