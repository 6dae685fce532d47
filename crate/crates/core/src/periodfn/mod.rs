//! The q-series `S_a(z)`, its period function `psi_a` continued to the slit
//! plane through `g_a`, Taylor data of `g_a` at `1`, and the saddle-point
//! integral behind their asymptotics.

pub mod contour;
pub mod relations;
pub mod saddle;
pub mod series;
pub mod taylor;

pub use contour::{g_a, residue_correction, residue_count, GaKernel, ResidueCorrection};
pub use relations::{combined, period_relation_residual, psi_a, psi_a_series, rfs_rhs, three_term_residual};
pub use series::{divisor_counts, s_a, sigma_table, spf_sieve};
pub use taylor::{a_m_coeffs, a_m_exact, coeff_exact, h_coeffs, taylor_asym, taylor_g_at_1, AmCoeff, Const, PiPoly, TaylorCoeffTable};
pub use saddle::{saddle_asym, saddle_integral};
