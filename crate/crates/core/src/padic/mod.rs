//! Finite-precision p-adic arithmetic, the p-adic Gamma function, p-adic
//! zeta and L-values, and the weight space `Z_p x Z/(p-1)`.

mod gamma;
mod lfunc;
mod num;

pub use gamma::{
    gamma_valuation, padic_gamma, padic_gamma_half, padic_gamma_int, padic_gamma_int_mod, padic_gamma_one_half,
    padic_pi, padic_pi_half_pow, GAMMA_BUDGET,
};
pub use lfunc::{
    at_least, gen_kummer_check, kummer_check, padic_l, padic_l_int, padic_l_interpolation, padic_zeta_branch,
    padic_zeta_neg,
};
pub use num::{principal_unit, teichmuller, PadicNum};

use num_bigint::BigInt;

use crate::arith::{is_prime, HalfInt};
use crate::error::{domain, Result};

/// `omega(a)` for `a` prime to `p`.
pub fn teichmuller_checked(a: i64, p: u64, prec: u32) -> Result<PadicNum> {
    if !is_prime(p) {
        return Err(domain!("{p} is not prime"));
    }
    if a.rem_euclid(p as i64) == 0 {
        return Err(domain!("teichmuller({a}) at p = {p}: p divides a"));
    }
    Ok(teichmuller(&BigInt::from(a), p, prec))
}

/// A point of the weight space `X = Z_p x Z/(p-1)Z`.
///
/// An integer weight `k` embeds as `(k, k mod p-1)`. A half-integral weight
/// `k` embeds with its `Z_p` component `k` (p odd) and residue `floor(k) mod p-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicWeight {
    pub s: PadicNum,
    pub residue: u64,
}

impl PadicWeight {
    pub fn from_weight(k: HalfInt, p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(domain!("{p} is not prime"));
        }
        if !k.is_integer() && p == 2 {
            return Err(domain!("half-integral weights are not 2-adic integers"));
        }
        let (n, d) = k.num_den();
        let s = PadicNum::from_rat(&crate::arith::rat(n, d), p, prec);
        let residue = k.floor().rem_euclid(p as i64 - 1) as u64;
        Ok(PadicWeight { s, residue })
    }
}
