//! Cohen-Ramanujan expansions `f(n) = sum_r f^(r) c_r^s(arg)`.
//!
//! A [`CoefficientFamily`] pairs a coefficient rule with the argument mode:
//! the closed-form divisor and Jordan families expand in `c_r^s(n^s)`,
//! while the general theory (and everything built on shifts) reads
//! `c_r^s(n)`. Mixing the two is rejected unless the caller opts in with
//! [`CoefficientFamily::reinterpret_plain`].

mod eval;
mod family;
mod tabulated;

pub use eval::{
    crs_magnitude_bound, eval_euler_product, eval_truncated, extract_coeff, rank_for_tail, tabulate_truncated,
    TruncatedEvaluation,
};
pub use family::{shift_family, ArgumentMode, CoefficientFamily, Envelope, FamilyKind};
pub use tabulated::{parse_exact, TabulatedFunction};
