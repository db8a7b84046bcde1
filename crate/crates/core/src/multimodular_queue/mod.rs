//! Multimodular functions, window averages along 0-1 sequences, and an
//! admission-control queue.
//!
//! A function `J: Z^m -> R` is multimodular when
//! `J(u + v) + J(u + w) >= J(u) + J(u + v + w)` for all `u` and all distinct
//! `v, w` in the basis `f_0 = -e_1`, `f_i = e_i - e_{i+1}`, `f_m = e_m`. Along
//! a 0-1 sequence the long-run average of `J` over sliding windows is
//! minimized by mechanical words, which in the queue means Sturmian
//! splitting beats any other admission pattern with the same rate.

mod lattice;
mod queue;
mod window;

pub use lattice::{
    check_multimodular, multimodular_fixtures, LatticeBox, LatticeFunction, MultimodularBasis,
    MultimodularVerdict, Violation,
};
pub use queue::{
    queue_competition, random_admission, simulate_admission, simulate_queue, AdmissionSource,
    CompetitionReport, QueueConfig, QueueSummary,
};
pub use window::{
    cyclic_window_sum, min_cyclic_window_sum, min_cyclic_window_sum_brute,
    streaming_window_average, verify_mechanical_minimality, window_average, MinimalityReport,
    SymbolSource,
};
