//! Balanced and Sturmian words as optimizers.
//!
//! The crate bundles the combinatorics-on-words machinery ([`words`]) with a
//! handful of optimization testbeds in which balanced words turn out to be
//! optimal. Each testbed comes with an exhaustive brute-force search so the
//! optimality claims can be checked directly at small sizes:
//!
//! * [`multimodular_queue`]: multimodular lattice functions, sliding-window
//!   averages and an admission-control queue simulation.
//! * [`cyclic_products`]: products of binary values over all rotations.
//! * [`sturmian_measures`]: periodic orbit measures of the doubling map and
//!   the convex order.
//! * [`heaps`]: two-piece heaps of pieces in max-plus algebra.
//! * [`jsr`]: joint spectral radius of `{A_0, alpha A_1}` and the constant
//!   `alpha_*`.
//! * [`wigner`]: ground states of electrons on a ring.
//!
//! [`dispatch`] exposes everything through a single manifest-driven entry
//! point used by the `sturmian-lab` binary.

pub mod cyclic_products;
pub mod dispatch;
pub mod error;
pub mod heaps;
pub mod jsr;
pub mod multimodular_queue;
pub mod precision;
pub mod rational;
pub mod sturmian_measures;
pub mod verify;
pub mod wigner;
pub mod words;

pub use error::{Error, Result};
pub use words::{ContinuedFraction, MechanicalSpec, Orbit, Word};
