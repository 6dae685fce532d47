//! The Estermann function `D(s, a, h/k)`, its sine part and the shifted
//! Vasyunin identity.

pub mod dfunc;
pub mod sine;
pub mod vasyunin;

pub use dfunc::{estermann, estermann_mp, estermann_dirichlet, estermann_fe_residual, estermann_fe_rhs, DPath, EstermannEval, POLE_RADIUS};
pub use sine::{sine_series, sine_series_abel, sine_series_at_1};
pub use vasyunin::{vasyunin_lhs, vasyunin_nu, vasyunin_rhs};
