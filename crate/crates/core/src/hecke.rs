//! Hecke operators `T(p)` and `T(p^2)` on harmonic expansions, the `xi`
//! operator, eigenvalue checks and the `xi`–Hecke intertwining identity.

use serde::Serialize;

use crate::arith::{is_prime, kronecker, pow_int, HalfInt, Rat};
use crate::error::{domain, resource, Result};
use crate::qexp::{Family, HarmonicQExp};
use crate::sym::SymScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeOp {
    /// `T(p)` on integral weight.
    Tp(u64),
    /// `T(p^2)` on half-integral weight.
    Tp2(u64),
}

impl HeckeOp {
    pub fn p(self) -> u64 {
        match self {
            HeckeOp::Tp(p) | HeckeOp::Tp2(p) => p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HeckeOp::Tp(_) => "T(p)",
            HeckeOp::Tp2(_) => "T(p^2)",
        }
    }

    /// The operator matching the weight of `f`.
    pub fn for_weight(weight: HalfInt, p: u64) -> Self {
        if weight.is_integer() {
            HeckeOp::Tp(p)
        } else {
            HeckeOp::Tp2(p)
        }
    }

    pub fn apply(self, f: &HarmonicQExp) -> Result<HarmonicQExp> {
        match self {
            HeckeOp::Tp(p) => hecke_tp(f, p),
            HeckeOp::Tp2(p) => hecke_tp2(f, p),
        }
    }

    fn step(self) -> u64 {
        match self {
            HeckeOp::Tp(p) => p,
            HeckeOp::Tp2(p) => p * p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeckeReport {
    pub form: String,
    pub operator: String,
    pub p: u64,
    pub eigenvalue: String,
    pub checked_range: u64,
    pub pass: bool,
    pub first_failure: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Short identifier used in reports.
pub fn form_id(f: &HarmonicQExp) -> String {
    format!("{}[weight {}, level {}]", f.family.name(), f.weight, f.level)
}

fn idx(n: i64, d: u64) -> Option<i64> {
    (n % d as i64 == 0).then(|| n / d as i64)
}

/// `T(p)` in integral weight `kappa`, trivial character:
/// `c(n) -> c(pn) + p^{kappa-1} c(n/p)` on both parts and
/// `c-(0) -> (p^{kappa-1} + 1) c-(0)`. Valid through `floor(N_max/p)`.
pub fn hecke_tp(f: &HarmonicQExp, p: u64) -> Result<HarmonicQExp> {
    if !f.weight.is_integer() {
        return Err(domain!("T(p) needs integral weight, got {}", f.weight));
    }
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    let k = f.weight.floor();
    let pk = pow_int(p as i64, k - 1);
    let t = f.truncation / p;
    let mut out = HarmonicQExp::new(f.family, f.weight, f.level, t);
    let pi = p as i64;
    for n in -(t as i64)..=t as i64 {
        let mut plus = f.plus(pi * n).clone();
        let mut minus = f.minus(pi * n).clone();
        if let Some(m) = idx(n, p) {
            plus += f.plus(m).scale(&pk);
            minus += f.minus(m).scale(&pk);
        }
        out.set_plus(n, plus)?;
        if n != 0 {
            out.set_minus(n, minus)?;
        }
    }
    out.set_minus_zero(f.minus_zero().scale(&(pk + Rat::from_integer(1.into()))));
    Ok(out)
}

/// `chi*(p) = ((-1)^{kappa-1/2} / p)`.
fn chi_star(kappa: HalfInt, p: u64) -> i64 {
    let e = (kappa - HalfInt::from_twice(1)).floor();
    let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    kronecker(sign, p as i64) as i64
}

/// `T(p^2)` in half-integral weight `kappa`, trivial character:
/// `c(n) -> c(p^2 n) + chi*(p) (n/p) p^{kappa-3/2} c(n) + p^{2kappa-2} c(n/p^2)`
/// and `c-(0) -> (p^{2kappa-2} + 1) c-(0)`. The plus constant uses the
/// generic formula. Valid through `floor(N_max/p^2)`.
pub fn hecke_tp2(f: &HarmonicQExp, p: u64) -> Result<HarmonicQExp> {
    if f.weight.is_integer() {
        return Err(domain!("T(p^2) needs half-integral weight, got {}", f.weight));
    }
    if !is_prime(p) || p == 2 {
        return Err(domain!("T(p^2) needs an odd prime, got {p}"));
    }
    let pi = p as i64;
    let mid =
        pow_int(pi, (f.weight - HalfInt::from_twice(3)).floor()) * Rat::from_integer(chi_star(f.weight, p).into());
    let last = pow_int(pi, (f.weight + f.weight).floor() - 2);
    let t = f.truncation / (p * p);
    let mut out = HarmonicQExp::new(f.family, f.weight, f.level, t);
    for n in -(t as i64)..=t as i64 {
        let leg = Rat::from_integer((kronecker(n, pi) as i64).into());
        let m = &mid * &leg;
        let mut plus = f.plus(pi * pi * n) + f.plus(n).scale(&m);
        let mut minus = f.minus(pi * pi * n) + f.minus(n).scale(&m);
        if let Some(q) = idx(n, p * p) {
            plus += f.plus(q).scale(&last);
            minus += f.minus(q).scale(&last);
        }
        out.set_plus(n, plus)?;
        if n != 0 {
            out.set_minus(n, minus)?;
        }
    }
    out.set_minus_zero(f.minus_zero().scale(&(last + Rat::from_integer(1.into()))));
    Ok(out)
}

/// Indices in checking order: by `|n|`, `n` before `-n`.
fn check_order(range: u64) -> impl Iterator<Item = i64> {
    (0..=range as i64).flat_map(|n| if n == 0 { vec![0] } else { vec![n, -n] })
}

/// First index (in [`check_order`]) where `a` and `b` differ, with `None` for
/// agreement on plus, minus and `c-(0)` through `range`.
pub fn first_difference(a: &HarmonicQExp, b: &HarmonicQExp, range: u64) -> Option<i64> {
    for n in check_order(range) {
        if a.plus(n) != b.plus(n) {
            return Some(n);
        }
        if n == 0 {
            if a.minus_zero() != b.minus_zero() {
                return Some(0);
            }
        } else if a.minus(n) != b.minus(n) {
            return Some(n);
        }
    }
    None
}

/// Checks `f | T = lambda f` exactly through `min(n_range, valid truncation)`.
pub fn eigen_check(f: &HarmonicQExp, op: HeckeOp, lambda: &SymScalar, n_range: u64) -> Result<HeckeReport> {
    let g = op.apply(f)?;
    let range = n_range.min(g.truncation);
    if range == 0 {
        return Err(resource!(
            "truncation {} leaves nothing to check under {} with p = {}",
            f.truncation,
            op.name(),
            op.p()
        ));
    }
    let target = f.scale(lambda);
    let first_failure = first_difference(&g, &target, range);
    let mut notes = Vec::new();
    if matches!(op, HeckeOp::Tp2(_)) && !f.plus(0).is_zero() {
        notes.push("plus constant checked with the generic T(p^2) formula at n = 0".into());
    }
    debug_assert!(range <= f.truncation / op.step());
    Ok(HeckeReport {
        form: form_id(f),
        operator: op.name().into(),
        p: op.p(),
        eigenvalue: lambda.to_string(),
        checked_range: range,
        pass: first_failure.is_none(),
        first_failure,
        notes,
    })
}

/// `1 + p^{-(2k+1)}`.
pub fn expected_eigenvalue(p: u64, k: i64) -> SymScalar {
    SymScalar::from_rat(Rat::from_integer(1.into()) + pow_int(p as i64, -(2 * k + 1)))
}

/// `xi_{kappa}` applied to an expansion of weight `kappa`; the result has weight
/// `K = 2 - kappa`, constant `(K-1) conj(c-(0))` and `q^{-m}` coefficient
/// `-(4 pi)^{K-1} conj(c-(m)) |m|^{K-1}`.
pub fn xi(f: &HarmonicQExp) -> Result<HarmonicQExp> {
    let k_out = HalfInt::from_int(2) - f.weight;
    let e2 = (k_out - HalfInt::from_int(1)).twice();
    let family = match f.family {
        Family::G => Family::Eis,
        Family::H => Family::Cohen,
        other => other,
    };
    let mut out = HarmonicQExp::new(family, k_out, f.level, f.truncation);
    let four_pi = SymScalar::from_rat(pow_int(2, e2)) * SymScalar::pi_half_pow(e2);
    out.set_plus(0, f.minus_zero().conj().scale(&(k_out - HalfInt::from_int(1)).to_rat()))?;
    for (m, c) in f.minus_terms() {
        let v = -(&four_pi * &c.conj() * SymScalar::abs_pow_half(m, e2)?);
        out.set_plus(-m, v)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiReport {
    pub form: String,
    pub target: String,
    pub checked_range: u64,
    /// `c` with `xi(f) = c * target` on the nonconstant coefficients.
    pub constant: Option<String>,
    pub first_failure: Option<i64>,
    /// Ratio of the constant terms, when the target constant is nonzero.
    pub constant_ratio: Option<String>,
    pub constant_matches: bool,
    pub pass: bool,
}

/// Compares `xi(f)` with the Eisenstein series of weight `2 - kappa`
/// (`eisenstein` in integral, `cohen_eisenstein` in half-integral weight).
/// `pass` judges `n >= 1`; the constant term is reported in `constant_matches`.
pub fn xi_check(f: &HarmonicQExp, n_range: u64) -> Result<XiReport> {
    if f.is_holomorphic() {
        return Err(domain!("xi of a holomorphic expansion vanishes"));
    }
    let x = xi(f)?;
    let range = n_range.min(x.truncation);
    let target = if x.weight.is_integer() {
        crate::qexp::eisenstein(x.weight.floor(), range)?
    } else {
        crate::qexp::cohen_eisenstein(x.weight.floor(), range)?
    };
    let mut constant: Option<SymScalar> = None;
    let mut first_failure = None;
    for n in 1..=range as i64 {
        let (a, b) = (x.plus(n), target.plus(n));
        let ok = if b.is_zero() {
            a.is_zero()
        } else {
            match a.ratio(b)? {
                Some(r) => match &constant {
                    None => {
                        constant = Some(r);
                        true
                    }
                    Some(c) => *c == r,
                },
                None => false,
            }
        };
        if !ok {
            first_failure = Some(n);
            break;
        }
    }
    let constant_ratio = if target.plus(0).is_zero() {
        None
    } else {
        x.plus(0).ratio(target.plus(0))?
    };
    let constant_matches = match (&constant, target.plus(0).is_zero()) {
        (Some(c), false) => constant_ratio.as_ref() == Some(c),
        (_, true) => x.plus(0).is_zero(),
        (None, false) => false,
    };
    Ok(XiReport {
        form: form_id(f),
        target: form_id(&target),
        checked_range: range,
        pass: first_failure.is_none() && constant.is_some(),
        constant: constant.map(|c| c.to_string()),
        first_failure,
        constant_ratio: constant_ratio.map(|c| c.to_string()),
        constant_matches,
    })
}

/// `p^{d(1-kappa)} xi(f | T(p^d)) = xi(f) | T(p^d)` with `d = 1` in integral and
/// `d = 2` in half-integral weight, compared through `n_range`.
pub fn intertwine_check(f: &HarmonicQExp, p: u64, n_range: u64) -> Result<bool> {
    let op = HeckeOp::for_weight(f.weight, p);
    let one_minus = HalfInt::from_int(1) - f.weight;
    let e = if f.weight.is_integer() {
        one_minus.floor()
    } else {
        one_minus.twice()
    };
    let lhs = xi(&op.apply(f)?)?.scale(&SymScalar::from_rat(pow_int(p as i64, e)));
    let rhs = op.apply(&xi(f)?)?;
    let range = n_range.min(lhs.truncation).min(rhs.truncation);
    if range == 0 {
        return Err(resource!("truncation {} too small for p = {p}", f.truncation));
    }
    Ok(first_difference(&lhs, &rhs, range).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::qexp::{eisenstein, maass_g, maass_h};

    #[test]
    fn tp_on_g_normalised() {
        let g = maass_g(1, 8).unwrap();
        let t = hecke_tp(&g, 2).unwrap();
        assert_eq!(t.truncation, 4);
        assert_eq!(t.plus(1).rational_ratio(g.plus(1)), Some(rat(9, 8)));
        assert_eq!(t.plus(2).rational_ratio(g.plus(1)), Some(rat(81, 64)));
        assert_eq!(t.minus_zero().rational_ratio(g.minus_zero()), Some(rat(9, 8)));
    }

    #[test]
    fn eigenvalues() {
        for k in 1..=2 {
            for p in [2, 3] {
                let g = maass_g(k, 60).unwrap();
                let r = eigen_check(&g, HeckeOp::Tp(p), &expected_eigenvalue(p, k), 100).unwrap();
                assert!(r.pass, "{r:?}");
            }
        }
        let h = maass_h(1, 90).unwrap();
        let r = eigen_check(&h, HeckeOp::Tp2(3), &expected_eigenvalue(3, 1), 100).unwrap();
        assert!(r.pass, "{r:?}");
        let bad = eigen_check(&h, HeckeOp::Tp2(3), &expected_eigenvalue(3, 2), 100).unwrap();
        assert!(!bad.pass);
        assert_eq!(bad.first_failure, Some(0));
    }

    #[test]
    fn tp2_minus_zero_scaling() {
        let h = maass_h(1, 20).unwrap();
        let t = hecke_tp2(&h, 3).unwrap();
        assert_eq!(t.minus_zero().rational_ratio(h.minus_zero()), Some(rat(28, 27)));
        assert!(hecke_tp2(&maass_g(1, 20).unwrap(), 3).is_err());
        assert!(hecke_tp(&h, 3).is_err());
    }

    #[test]
    fn xi_of_g_is_eisenstein() {
        for k in 1..=3 {
            let x = xi(&maass_g(k, 20).unwrap()).unwrap();
            let e = eisenstein(2 * k + 2, 20).unwrap();
            let sign = if k % 2 == 0 { -1 } else { 1 };
            let c = SymScalar::from_rat(pow_int(2, 2 * k + 2) * rat(sign, 1)) * SymScalar::pi_pow(1);
            assert_eq!(first_difference(&x, &e.scale(&c), 20), None, "k = {k}");
        }
        let e = eisenstein(4, 10).unwrap();
        assert!(xi(&e).unwrap().plus_terms().next().is_none());
    }

    #[test]
    fn intertwining() {
        assert!(intertwine_check(&maass_g(1, 50).unwrap(), 2, 50).unwrap());
        assert!(intertwine_check(&maass_h(1, 81).unwrap(), 3, 25).unwrap());
        assert!(matches!(
            intertwine_check(&maass_g(1, 1).unwrap(), 2, 50),
            Err(crate::Error::Resource(_))
        ));
    }
}
