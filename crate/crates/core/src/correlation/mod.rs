//! Shifted convolution sums `sum_{n<=N} f(n) g(n+h)`: empirical values,
//! predicted leading constants, and grid checks of the bounds that
//! control them.

mod constants;
mod descriptor;
mod lemmas;
mod sums;

pub use constants::{
    admissible_diagonal, admissible_shifted, jordan_correlation_constant, predicted_diagonal, predicted_shifted, sigma_correlation_constant};
pub use descriptor::FunctionDescriptor;
pub use lemmas::{
    lem2_constant_by_n, verify_lemma_bounds, write_records_csv, BoundCheckRecord, Lemma, LemmaGrid, Shifts,
};
pub use sums::{correlate, decade_checkpoints, normalize_checkpoints, CorrelationReport, CorrelationSums, TracePoint};
