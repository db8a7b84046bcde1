//! Joint spectral radius of pairs of 2×2 matrices.
//!
//! The testbed centres on `A_0 = [[1, 1], [0, 1]]`, `A_1 = [[1, 0], [1, 1]]`
//! and the family `{A_0, alpha A_1}`. For `alpha = 1` the alternating
//! product is maximizing and the joint spectral radius is the golden ratio.
//! For each `alpha` there is a unique optimal 1-ratio `r(alpha)`, and the
//! inverse `r^{-1}(gamma)` at an irrational `gamma` is the limit of ratios of
//! spectral radii of the standard matrices `B_n` ([`alpha`]).

pub mod alpha;
mod bounds;
mod mat2;
mod standard;

pub use alpha::{
    alpha_inverse, alpha_star_tau, fibonacci_traces, AlphaEstimate, ALPHA_STAR_REFERENCE,
};
pub use bounds::{
    jsr_bounds, optimal_ratio_scan, scaled_pair, scaled_pair_exact, JsrBounds, LengthBounds,
    MatrixNorm, RatioScan, RatioScanner, DEFAULT_SCAN_BOUND,
};
pub use mat2::{a0, a1, Mat2};
pub use standard::{standard_matrices, StandardMatrixSequence};
