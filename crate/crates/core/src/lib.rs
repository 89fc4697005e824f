//! Exact and p-adic computations with the harmonic Maass–Eisenstein series
//! `G(z, -2k)` and `H(z, -r + 1/2)`, their Hecke and `xi` images, their
//! p-adic analogues, and the supporting arithmetic.

pub mod acceptance;
pub mod arith;
pub mod bernoulli;
pub mod congruence;
pub mod error;
pub mod hecke;
pub mod numeric;
pub mod padic;
pub mod qexp;
pub mod sym;
pub mod zagier;

pub use arith::{HalfInt, Rat};
pub use bernoulli::{BernoulliValue, DirichletChar};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use padic::{PadicNum, PadicWeight};
pub use qexp::{Family, HarmonicQExp, PadicCoeff, PadicQExp};
pub use sym::SymScalar;
