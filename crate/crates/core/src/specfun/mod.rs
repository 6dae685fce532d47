//! Special functions at arbitrary precision.

pub mod bernoulli;
pub mod bessel;
pub mod gamma;
pub mod stieltjes;
pub mod zeta;

pub use bernoulli::{bernoulli, bernoulli_poly};
pub use bessel::{bessel_k, bessel_k0, bessel_y0};
pub use gamma::{gamma, polygamma};
pub use stieltjes::stieltjes_gamma1;
pub use zeta::{chi_factor, hurwitz_zeta, riemann_zeta};

use rug::Rational;

/// `B_n` for `n = 0, 1` or even `n`; odd `n > 1` gives 0.
pub fn bernoulli_number(n: usize) -> Rational {
    bernoulli(n)
}
