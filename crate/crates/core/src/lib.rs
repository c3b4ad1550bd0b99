//! Exact and approximate Lasso regularization paths.
//!
//! This crate computes the full piecewise-linear solution path of the Lasso
//!
//! ```text
//! min_w  0.5 * ||y - X w||^2  +  lambda * ||w||_1
//! ```
//!
//! as `lambda` sweeps from `lambda_max = ||X' y||_inf` (where `w = 0`) down
//! to a caller-chosen floor, together with:
//!
//! * an exact homotopy solver that records every kink of the path
//!   ([`homotopy::compute_exact_path`]), with an extended-precision variant
//!   for paths whose kinks decay below what double precision can certify
//!   ([`extended::compute_exact_path_extended`]),
//! * an epsilon-approximate homotopy that trades kinks for certified
//!   suboptimality ([`approx::compute_approx_path`]),
//! * a generator for worst-case instances whose exact path has
//!   `(3^p + 1) / 2` linear segments ([`adversarial::gen_pathological`]),
//! * duality-gap certification of any primal iterate or recorded path
//!   ([`model::ProblemInstance::duality_gap`], [`verify::verify_path`]),
//! * a cyclic coordinate-descent solver used both as a first-order fallback
//!   and as an independent cross-check oracle ([`cd::cd_solve`],
//!   [`verify::grid_oracle`]).
//!
//! Everything is dense `f64`; instances are expected at desk scale
//! (`n`, `p` up to a few thousand).

// `!(x > 0.0)` is the NaN-rejecting form of every scalar validation here,
// and `(3^p + 1) / 2` is a formula, not a rounding idiom.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_div_ceil)]

pub mod adversarial;
pub mod approx;
pub mod cd;
pub mod extended;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod model;
pub mod tol;
pub mod verify;

pub use model::{
    gap_bound_factor, sign_pattern, Certificate, Kink, ModelError, OptReport, OptimalityReport,
    PathKind, ProblemInstance, RegularizationPath, SignPattern,
};

pub use homotopy::{compute_exact_path, HomotopyOptions, PathError, TruncationReason};

pub use extended::compute_exact_path_extended;

pub use approx::{
    compute_approx_path, sampled_exact_path, segment_bound, theta, ApproxOptions, ApproxPath,
};

pub use adversarial::{
    expected_pattern_sequence, extend_instance, gen_pathological, gen_pathological_with,
    AdversarialConfig, GenError,
};

pub use cd::{cd_solve, soft_threshold, CdError, CdOptions};

pub use verify::{
    check_structural_bounds, count_segments, geometric_grid, grid_oracle, verify_path,
    VerificationReport, VerifyOptions,
};
