//! Shared inputs for the benchmarks.

use maasslab::qexp::{maass_g, maass_h};
use maasslab::{Complex64, HarmonicQExp};

/// `G(z, -2k)` and `H(z, -r + 1/2)` truncated at `n`.
pub fn forms(k: i64, r: i64, n: u64) -> (HarmonicQExp, HarmonicQExp) {
    (maass_g(k, n).expect("valid k"), maass_h(r, n).expect("valid r"))
}

/// Points inside the reliable evaluation window.
pub const POINTS: [Complex64; 3] = [
    Complex64::new(0.1, 1.2),
    Complex64::new(-0.3, 1.0),
    Complex64::new(0.45, 2.0),
];
