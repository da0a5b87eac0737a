//! Simulation and asymptotics of time-dependent coined quantum walks on `Z`.
//!
//! The walker carries a two-component coin state; at step `t` a 2x2 unitary
//! `U_t` mixes the components and the top/bottom rows shift amplitude left
//! and right. The crate provides:
//!
//! * [`walk`]: dense amplitude fields, one-step evolution, distributions.
//! * [`coin`]: coin matrices and schedules (periodic, two-period orthogonal,
//!   alternating-phase and linear-phase families).
//! * [`density`]: closed-form limit densities of `X_t / t` with CDFs and moments.
//! * [`spectral`]: momentum-space eigenanalysis of the two-period walk.
//! * [`harness`]: convergence reports and exact-identity checks.

// `!(x <= tol)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coin;
pub mod density;
pub mod error;
pub mod harness;
pub mod matrix;
mod quadrature;
pub mod spectral;
pub mod walk;

pub use coin::{orthogonal_coin, CoinMatrix, CoinSchedule, CoinSpec, ScheduleKind, ScheduleSpec};
pub use density::{
    density_cdf, density_moment, konno_density, theorem1_density, theorem1_density_for_coins,
    theorem2_density, theorem3_density, DensitySource, LimitDensity,
};
pub use error::{Error, Result};
pub use harness::{
    case1_reduction_check, convergence_report, ks_distance, theorem_equivalence_check, ConvergenceCriteria,
    ConvergenceReport,
};
pub use matrix::Mat2;
pub use walk::{empirical_moment, new_walk, Distribution, Spinor, WalkState};

pub use num_complex::Complex64;
