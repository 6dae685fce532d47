//! Period functions of the divisor-sum q-series `sum sigma_a(n) e(nz)`,
//! generalized cotangent sums with a reciprocity-based fast evaluator, the
//! exact formula for the smoothed second moment of zeta, and extended Voronoi
//! summation.
//!
//! Every analytic value comes back as an [`EvalResult`] carrying an error
//! estimate. Precision is chosen per call through [`PrecisionCtx`].

pub mod cotangent;
pub mod ctx;
pub mod estermann;
pub mod error;
pub mod fast;
pub mod moments;
pub mod mp;
pub mod periodfn;
pub mod quad;
pub mod specfun;
pub mod voronoi;

pub use ctx::{EvalResult, LimitPolicy, PrecisionCtx, Rational, Sector, SectorPoint, ShiftParam};
pub use error::{Error, ErrorClass, Result};
