//! Gauss sums `gamma_c(n)`, the Dirichlet series `E_n(s)` built from them and
//! their closed forms in terms of `L(s, chi_D)` and `zeta(2s)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{decompose_disc, divisors, kronecker, mobius_u64, Rat};
use crate::error::{domain, Result};

/// `lambda(a, c)`; `i^{a/2}` for odd `a` is `exp(i pi a / 4)`.
pub fn lambda_sym(a: u64, c: u64) -> Complex64 {
    match (a % 2, c % 2) {
        (0, 1) => {
            let e = (1 - c as i64) / 2;
            Complex64::i().powi(e.rem_euclid(4) as i32) * kronecker(a as i64, c as i64) as f64
        }
        (1, 0) => Complex64::from_polar(1.0, PI * a as f64 / 4.0) * kronecker(c as i64, a as i64) as f64,
        _ => Complex64::zero(),
    }
}

/// `gamma_c(n) = c^{-1/2} sum_{a=1}^{2c} lambda(a, c) exp(-pi i n a / c)`.
pub fn gauss_gamma(c: u64, n: i64) -> Complex64 {
    let two_c = 2 * c as i64;
    let mut acc = Complex64::zero();
    for a in 1..=2 * c {
        let l = lambda_sym(a, c);
        if l.is_zero() {
            continue;
        }
        // reduce n a mod 2c before scaling to keep the angle small
        let t = (n.rem_euclid(two_c) * a as i64).rem_euclid(two_c);
        acc += l * Complex64::from_polar(1.0, -PI * t as f64 / c as f64);
    }
    acc / (c as f64).sqrt()
}

/// `a_1, ..., a_M` with `E_n(s) = sum a_m m^{-s}`.
pub fn en_coeffs(n: i64, m_max: usize) -> Vec<Complex64> {
    (1..=m_max as u64)
        .map(|m| {
            let even = gauss_gamma(2 * m, n);
            if m % 2 == 1 {
                (gauss_gamma(m, n) + even) * 0.5
            } else {
                even * 0.5
            }
        })
        .collect()
}

/// Coefficients of `E_n^odd(s) = sum_{c odd} gamma_c(n) c^{-s}`.
pub fn en_odd_coeffs(n: i64, m_max: usize) -> Vec<Complex64> {
    (1..=m_max as u64)
        .map(|m| {
            if m % 2 == 1 {
                gauss_gamma(m, n)
            } else {
                Complex64::zero()
            }
        })
        .collect()
}

/// Coefficients of `E_n^even(s) = sum_{c even} gamma_c(n) (c/2)^{-s}`.
pub fn en_even_coeffs(n: i64, m_max: usize) -> Vec<Complex64> {
    (1..=m_max as u64).map(|m| gauss_gamma(2 * m, n)).collect()
}

/// Truncated Dirichlet series `sum_{m <= M} a_m m^{-s}` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletPoly {
    coeffs: Vec<Rat>,
}

impl DirichletPoly {
    pub fn zeros(m_max: usize) -> Self {
        assert!(m_max >= 1, "a Dirichlet polynomial needs length >= 1");
        DirichletPoly {
            coeffs: vec![Rat::zero(); m_max],
        }
    }

    pub fn from_fn(m_max: usize, f: impl Fn(u64) -> Rat) -> Self {
        let mut d = Self::zeros(m_max);
        for m in 1..=m_max {
            d.coeffs[m - 1] = f(m as u64);
        }
        d
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient of `m^{-s}`, `m >= 1`.
    pub fn coeff(&self, m: usize) -> &Rat {
        &self.coeffs[m - 1]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Dirichlet convolution, truncated to the shorter length.
    pub fn convolve(&self, o: &DirichletPoly) -> DirichletPoly {
        let m_max = self.len().min(o.len());
        let mut out = Self::zeros(m_max);
        for i in 1..=m_max {
            if self.coeffs[i - 1].is_zero() {
                continue;
            }
            for j in 1..=m_max / i {
                if !o.coeffs[j - 1].is_zero() {
                    out.coeffs[i * j - 1] += &self.coeffs[i - 1] * &o.coeffs[j - 1];
                }
            }
        }
        out
    }

    /// `sum a_m m^{-s}` in floating point.
    pub fn eval(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.to_f64().unwrap_or(f64::NAN) * ((i + 1) as f64).powf(-s))
            .sum()
    }
}

fn inv_zeta_2s(m_max: usize) -> DirichletPoly {
    DirichletPoly::from_fn(m_max, |m| {
        let r = (m as f64).sqrt().round() as u64;
        if r * r == m {
            Rat::from_integer(mobius_u64(r).into())
        } else {
            Rat::zero()
        }
    })
}

/// Exact coefficients of the closed form of `E_n(s)`:
/// `L(s, chi_D) zeta(2s)^{-1} sum_{ac | v} mu(a) chi_D(a) c^{1-2s} a^{-s}` for
/// `n = D v^2 != 0` and `zeta(2s-1)/zeta(2s)` for `n = 0`.
pub fn rhs_coeffs(n: i64, m_max: usize) -> Result<DirichletPoly> {
    if m_max == 0 {
        return Err(domain!("need at least one coefficient"));
    }
    let inv = inv_zeta_2s(m_max);
    if n == 0 {
        let z = DirichletPoly::from_fn(m_max, |m| {
            let r = (m as f64).sqrt().round() as u64;
            if r * r == m {
                Rat::from_integer(r.into())
            } else {
                Rat::zero()
            }
        });
        return Ok(z.convolve(&inv));
    }
    let dd = decompose_disc(n)?.ok_or_else(|| domain!("{n} is not 0 or 1 mod 4"))?;
    let l = DirichletPoly::from_fn(m_max, |m| Rat::from_integer((kronecker(dd.d, m as i64) as i64).into()));
    let mut fin = DirichletPoly::zeros(m_max);
    for a in divisors(dd.v) {
        let mu = mobius_u64(a) as i64 * kronecker(dd.d, a as i64) as i64;
        if mu == 0 {
            continue;
        }
        for c in divisors(dd.v / a) {
            let idx = a * c * c;
            if idx as usize <= m_max {
                fin.coeffs[idx as usize - 1] += Rat::from_integer((mu * c as i64).into());
            }
        }
    }
    Ok(l.convolve(&inv).convolve(&fin))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZagierReport {
    pub n: i64,
    pub s: i64,
    pub m_max: usize,
    /// `n = 2, 3 mod 4`, where `E_n` must vanish.
    pub vanishing_branch: bool,
    pub max_coeff_deviation: f64,
    pub series_deviation: f64,
    /// Largest imaginary part among the computed `a_m`.
    pub max_imag: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_m: Option<Vec<(usize, f64, f64)>>,
}

/// Compares `E_n(s)` assembled from Gauss sums with its closed form, both
/// coefficientwise and as truncated series at `s`.
pub fn verify_zagier(n: i64, s: i64, m_max: usize, tol: f64, table: bool) -> Result<ZagierReport> {
    if s < 2 {
        return Err(domain!("verify_zagier needs s >= 2, got {s}"));
    }
    if m_max == 0 {
        return Err(domain!("need at least one coefficient"));
    }
    let a = en_coeffs(n, m_max);
    let max_imag = a.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let lhs: Complex64 = a
        .iter()
        .enumerate()
        .map(|(i, z)| z * ((i + 1) as f64).powf(-(s as f64)))
        .sum();
    let vanishing = matches!(n.rem_euclid(4), 2 | 3);
    let rhs = if vanishing {
        DirichletPoly::zeros(m_max)
    } else {
        rhs_coeffs(n, m_max)?
    };
    let mut max_dev: f64 = 0.0;
    let mut rows = Vec::new();
    for (i, z) in a.iter().enumerate() {
        let exact = rhs.coeffs[i].to_f64().unwrap_or(f64::NAN);
        let dev = (z - Complex64::new(exact, 0.0)).norm();
        max_dev = max_dev.max(dev);
        if table {
            rows.push((i + 1, z.re, exact));
        }
    }
    let series_dev = (lhs - Complex64::new(rhs.eval(s as f64), 0.0)).norm();
    Ok(ZagierReport {
        n,
        s,
        m_max,
        vanishing_branch: vanishing,
        max_coeff_deviation: max_dev,
        series_deviation: series_dev,
        max_imag,
        pass: max_dev < tol && series_dev < tol,
        per_m: table.then_some(rows),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn lambda_cases() {
        assert!((lambda_sym(2, 1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(lambda_sym(3, 3), Complex64::zero());
        let l = lambda_sym(1, 2);
        assert!((l - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    }

    #[test]
    fn gamma_small() {
        for n in -5..5 {
            assert!((gauss_gamma(1, n) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        for c in 1..8u64 {
            for n in -6..6 {
                assert!((gauss_gamma(c, n) - gauss_gamma(c, n + 2 * c as i64)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rhs_examples() {
        let one = rhs_coeffs(1, 30).unwrap();
        for m in 1..=30u64 {
            let sqfree = mobius_u64(m) != 0;
            assert_eq!(*one.coeff(m as usize), Rat::from_integer((sqfree as i64).into()));
        }
        let zero = rhs_coeffs(0, 8).unwrap();
        assert_eq!(zero.coeff(1), &rat(1, 1));
        assert_eq!(zero.coeff(2), &rat(0, 1));
        assert_eq!(zero.coeff(4), &rat(1, 1));
        assert!(rhs_coeffs(7, 10).is_err());
    }

    #[test]
    fn identity_small() {
        for n in [0, 1, 5, -3, -4, 12] {
            let r = verify_zagier(n, 2, 40, 1e-8, false).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let v = verify_zagier(7, 2, 40, 1e-8, false).unwrap();
        assert!(v.vanishing_branch && v.pass);
    }
}
