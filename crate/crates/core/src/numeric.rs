//! Double-precision evaluation of expansions at points of the upper half-plane,
//! and numerical checks of harmonicity and modularity.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::{kronecker, HalfInt};
use crate::bernoulli::bernoulli;
use crate::error::{domain, Result};
use crate::qexp::HarmonicQExp;
use crate::sym::{SymScalar, Transcendental};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `exp(x^2) erfc(x)` for `x >= 2` by the continued fraction
/// `1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`, evaluated with Lentz's method.
fn erfcx_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        d = if d.abs() < tiny { tiny } else { d };
        c = x + a / c;
        c = if c.abs() < tiny { tiny } else { c };
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (f * SQRT_PI)
}

fn erf_series(x: f64) -> f64 {
    // erf x = 2/sqrt(pi) sum (-1)^n x^{2n+1} / (n! (2n+1))
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let t = term / (2 * n + 1) as f64;
        sum += t;
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 / SQRT_PI * sum
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfcx_cf(x) * (-x * x).exp()
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`, `x >= 0`.
pub fn erfcx(x: f64) -> f64 {
    if x < 2.0 {
        (x * x).exp() * erfc(x)
    } else {
        erfcx_cf(x)
    }
}

/// `exp(x) Gamma(s, x)` for `s` in `{1/2, 1, 3/2, ...}`, `x > 0`, by upward
/// recurrence `G(s+1) = s G(s) + x^s` from `G(1) = 1`, `G(1/2) = sqrt(pi) erfcx(sqrt x)`.
pub fn inc_gamma_scaled(s: HalfInt, x: f64) -> Result<f64> {
    if s.twice() <= 0 {
        return Err(domain!("inc_gamma needs s > 0, got {s}"));
    }
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(domain!("inc_gamma needs x > 0, got {x}"));
    }
    let (mut g, mut cur) = if s.is_integer() {
        (1.0, 1.0)
    } else {
        (SQRT_PI * erfcx(x.sqrt()), 0.5)
    };
    let target = s.to_f64();
    while cur < target - 0.25 {
        g = cur * g + x.powf(cur);
        cur += 1.0;
    }
    Ok(g)
}

/// Upper incomplete gamma `Gamma(s, x)`.
pub fn inc_gamma(s: HalfInt, x: f64) -> Result<f64> {
    Ok(inc_gamma_scaled(s, x)? * (-x).exp())
}

/// Hurwitz zeta `zeta(s, a)` for real `s > 1`, `a > 0`, by Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    const N: usize = 20;
    const M: u64 = 12;
    let mut sum: f64 = (0..N).map(|k| (k as f64 + a).powf(-s)).sum();
    let x = N as f64 + a;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // + sum_j B_{2j}/(2j)! s(s+1)...(s+2j-2) x^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    for j in 1..=M {
        let b = bernoulli(2 * j).to_f64().unwrap_or(0.0);
        sum += b / fact * rising * x.powf(-s - 2.0 * j as f64 + 1.0);
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
    }
    sum
}

pub fn zeta(s: f64) -> f64 {
    hurwitz_zeta(s, 1.0)
}

/// `L(s, chi_D) = |D|^{-s} sum_{a=1}^{|D|} chi_D(a) zeta(s, a/|D|)` for `s > 1`.
pub fn dirichlet_l(d: i64, s: f64) -> f64 {
    let m = d.unsigned_abs();
    if m == 1 {
        return zeta(s);
    }
    let mf = m as f64;
    (1..=m)
        .map(|a| kronecker(d, a as i64) as f64 * hurwitz_zeta(s, a as f64 / mf))
        .sum::<f64>()
        * mf.powf(-s)
}

fn transcendental_value(t: &Transcendental) -> f64 {
    match *t {
        Transcendental::Zeta(m) => zeta(m as f64),
        Transcendental::L { d, s } => dirichlet_l(d, s as f64),
    }
}

/// Numerical value of an exact scalar.
pub fn eval_scalar(c: &SymScalar) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, r) in c.terms() {
        let mut v = r.to_f64().unwrap_or(f64::NAN) * PI.powf(m.pi_half_exp() as f64 / 2.0);
        if m.sqrt_radicand() != 1 {
            v *= (m.sqrt_radicand() as f64).sqrt();
        }
        for (t, e) in m.transcendentals() {
            v *= transcendental_value(t).powi(*e as i32);
        }
        acc += if m.has_i() {
            Complex64::new(0.0, v)
        } else {
            Complex64::new(v, 0.0)
        };
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointEval {
    pub z: Complex64,
    pub truncation: u64,
    pub value: Complex64,
    /// Sum of the term magnitudes over the top tenth of the index range.
    pub tail_estimate: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Evaluates `f` at `z` with coefficients precomputed to doubles.
pub struct Evaluator<'a> {
    f: &'a HarmonicQExp,
    plus: HashMap<i64, Complex64>,
    minus: HashMap<i64, Complex64>,
    minus_zero: Complex64,
}

impl<'a> Evaluator<'a> {
    pub fn new(f: &'a HarmonicQExp) -> Self {
        Evaluator {
            f,
            plus: f.plus_terms().map(|(n, c)| (n, eval_scalar(c))).collect(),
            minus: f.minus_terms().map(|(n, c)| (n, eval_scalar(c))).collect(),
            minus_zero: eval_scalar(f.minus_zero()),
        }
    }

    pub fn eval(&self, z: Complex64, truncation: u64) -> Result<PointEval> {
        let y = z.im;
        if y.is_nan() || y <= 0.0 {
            return Err(domain!("z = {z} is not in the upper half-plane"));
        }
        let t = truncation.min(self.f.truncation) as i64;
        let s = HalfInt::from_int(1) - self.f.weight;
        let tail_from = t - t / 10;
        let mut value = Complex64::new(0.0, 0.0);
        let mut tail = 0.0;
        let q = |n: i64| Complex64::from_polar((-2.0 * PI * n as f64 * y).exp(), 2.0 * PI * n as f64 * z.re);
        for (&n, c) in &self.plus {
            if n.abs() > t {
                continue;
            }
            let term = c * q(n);
            value += term;
            if n.abs() > tail_from {
                tail += term.norm();
            }
        }
        if self.minus_zero.norm() != 0.0 {
            value += self.minus_zero * y.powf(s.to_f64());
        }
        for (&n, c) in &self.minus {
            if n.abs() > t {
                continue;
            }
            if n > 0 {
                return Err(domain!("minus coefficient at n = {n} > 0 is not supported"));
            }
            // Gamma(s, X) q^n with X = -4 pi n y: exp(X) Gamma(s, X) * exp(2 pi n y) * phase
            let x = -4.0 * PI * n as f64 * y;
            let g = inc_gamma_scaled(s, x)?;
            let term = c * Complex64::from_polar(g * (2.0 * PI * n as f64 * y).exp(), 2.0 * PI * n as f64 * z.re);
            value += term;
            if n.abs() > tail_from {
                tail += term.norm();
            }
        }
        let mut warnings = Vec::new();
        if !(0.8..=3.0).contains(&y) {
            warnings.push(format!("Im z = {y} is outside the reliable window [0.8, 3]"));
        }
        if tail > 1e-8 * (value.norm() + 1.0) {
            warnings.push(format!("truncation {t} leaves a tail estimate of {tail:e}"));
        }
        Ok(PointEval {
            z,
            truncation: t as u64,
            value,
            tail_estimate: tail,
            warnings,
        })
    }
}

/// `f(z)` summed through `|n| <= truncation`.
pub fn eval_form(f: &HarmonicQExp, z: Complex64, truncation: u64) -> Result<PointEval> {
    Evaluator::new(f).eval(z, truncation)
}

/// `|Delta_kappa f(z)| / (|f(z)| + 1)` with
/// `Delta_kappa = -y^2 (d_x^2 + d_y^2) + i kappa y (d_x + i d_y)` and
/// fourth-order central differences of step `h`.
pub fn laplacian_residual(f: &HarmonicQExp, z: Complex64, h: f64, truncation: u64) -> Result<f64> {
    if z.im - 2.0 * h <= 0.0 {
        return Err(domain!("stencil of step {h} leaves the upper half-plane at {z}"));
    }
    let ev = Evaluator::new(f);
    let at = |dx: f64, dy: f64| -> Result<Complex64> { Ok(ev.eval(z + Complex64::new(dx, dy), truncation)?.value) };
    let f0 = at(0.0, 0.0)?;
    let (xp1, xm1, xp2, xm2) = (at(h, 0.0)?, at(-h, 0.0)?, at(2.0 * h, 0.0)?, at(-2.0 * h, 0.0)?);
    let (yp1, ym1, yp2, ym2) = (at(0.0, h)?, at(0.0, -h)?, at(0.0, 2.0 * h)?, at(0.0, -2.0 * h)?);
    let d1 = |p1: Complex64, m1: Complex64, p2: Complex64, m2: Complex64| (-p2 + p1 * 8.0 - m1 * 8.0 + m2) / (12.0 * h);
    let d2 = |p1: Complex64, m1: Complex64, p2: Complex64, m2: Complex64| {
        (-p2 + p1 * 16.0 - f0 * 30.0 + m1 * 16.0 - m2) / (12.0 * h * h)
    };
    let fx = d1(xp1, xm1, xp2, xm2);
    let fy = d1(yp1, ym1, yp2, ym2);
    let fxx = d2(xp1, xm1, xp2, xm2);
    let fyy = d2(yp1, ym1, yp2, ym2);
    let y = z.im;
    let k = f.weight.to_f64();
    let i = Complex64::i();
    let lap = -(fxx + fyy) * (y * y) + i * (k * y) * (fx + i * fy);
    Ok(lap.norm() / (f0.norm() + 1.0))
}

/// `|f(gamma z) - (cz + d)^kappa f(z)| / (|f(z)| + 1)` for integral weight.
pub fn modularity_residual(f: &HarmonicQExp, gamma: [i64; 4], z: Complex64, truncation: u64) -> Result<f64> {
    if !f.weight.is_integer() {
        return Err(domain!(
            "modularity check is only implemented for integral weight, got {}",
            f.weight
        ));
    }
    let [a, b, c, d] = gamma;
    if a * d - b * c != 1 {
        return Err(domain!("{gamma:?} is not in SL2(Z)"));
    }
    let cz_d = z * c as f64 + d as f64;
    let gz = (z * a as f64 + b as f64) / cz_d;
    let ev = Evaluator::new(f);
    let fz = ev.eval(z, truncation)?.value;
    let fgz = ev.eval(gz, truncation)?.value;
    let k = f.weight.floor() as i32;
    Ok((fgz - cz_d.powi(k) * fz).norm() / (fz.norm() + 1.0))
}

pub const S_MATRIX: [i64; 4] = [0, -1, 1, 0];
pub const T_MATRIX: [i64; 4] = [1, 1, 0, 1];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::{eisenstein, maass_g, maass_h};

    #[test]
    fn erfc_reference() {
        assert!((erfc(0.5) - 0.479_500_122_186_953_5).abs() < 1e-15);
        assert!((erfc(3.0) - 2.209_049_699_858_544e-5).abs() < 1e-18);
        assert!((erfc(2.0) - 0.004_677_734_981_047_266).abs() < 1e-16);
    }

    #[test]
    fn inc_gamma_examples() {
        let h = HalfInt::from_int;
        assert!((inc_gamma(h(1), 2.5).unwrap() - (-2.5f64).exp()).abs() < 1e-15);
        assert!((inc_gamma(h(2), 1.0).unwrap() - 2.0 / std::f64::consts::E).abs() < 1e-15);
        assert!((inc_gamma(HalfInt::from_twice(1), 1.0).unwrap() - 0.278_805_585_2).abs() < 1e-10);
        assert!(inc_gamma(h(1), 0.0).is_err());
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(3.0) - 1.202_056_903_159_594_2).abs() < 1e-14);
        // L(2, chi_{-4}) is Catalan's constant
        assert!((dirichlet_l(-4, 2.0) - 0.915_965_594_177_219).abs() < 1e-14);
    }

    #[test]
    fn periodicity_and_harmonicity() {
        let g = maass_g(1, 40).unwrap();
        let a = eval_form(&g, Complex64::new(0.0, 2.0), 40).unwrap();
        let b = eval_form(&g, Complex64::new(1.0, 2.0), 40).unwrap();
        assert!((a.value - b.value).norm() < 1e-12 * (a.value.norm() + 1.0));
        assert!(laplacian_residual(&g, Complex64::new(0.3, 1.5), 1e-3, 40).unwrap() < 1e-5);
        let h = maass_h(1, 40).unwrap();
        assert!(laplacian_residual(&h, Complex64::new(0.2, 2.0), 1e-3, 40).unwrap() < 1e-5);
    }

    #[test]
    fn modularity() {
        let g = maass_g(1, 60).unwrap();
        assert!(modularity_residual(&g, S_MATRIX, Complex64::new(0.1, 1.2), 60).unwrap() < 1e-4);
        assert!(modularity_residual(&g, T_MATRIX, Complex64::new(0.1, 1.2), 60).unwrap() < 1e-12);
        let e = eisenstein(4, 60).unwrap();
        assert!(modularity_residual(&e, S_MATRIX, Complex64::new(0.0, 1.0), 60).unwrap() < 1e-12);
        assert!(modularity_residual(&maass_h(1, 10).unwrap(), S_MATRIX, Complex64::new(0.0, 1.0), 10).is_err());
    }
}
