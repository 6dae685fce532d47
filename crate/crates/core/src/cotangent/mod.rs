//! Generalized cotangent sums `c_a(h/k)`, Dedekind and Vasyunin sums, and a
//! fast evaluator that descends through the reciprocity law.

pub mod reciprocity;
pub mod stieltjes;
pub mod sums;

pub use reciprocity::{c0_fast, ca_fast, reciprocity_lhs, reciprocity_residual, DescentTrace};
pub use stieltjes::{c_star_minus1, q_function, stieltjes_reciprocity_residual, zeta_prime_2, GPrime};
pub use sums::{
    c_a_direct, c_n_bernoulli, c_neg_n_polygamma, cot_table, dedekind_reciprocity_defect, dedekind_sum, dedekind_sum_f64, vasyunin_sum,
    vasyunin_via_c0, CotangentValue, Method,
};
