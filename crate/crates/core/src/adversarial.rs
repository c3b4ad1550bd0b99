//! Worst-case instances whose exact path has `(3^p + 1) / 2` segments.
//!
//! The construction is recursive. Given an instance whose path is known, one
//! extra observation and one extra column are appended:
//!
//! ```text
//! y' = [y, y_next],    X' = | X   2 alpha y      |
//!                           | 0   alpha y_next   |
//! ```
//!
//! with `alpha = alpha_factor * lambda_1 / (2 y'y + y_next^2)`, where
//! `lambda_1` is the smallest event lambda of the current path. The new
//! column correlates with the residual only through terms of order `alpha`,
//! so the old path is replayed untouched until its last event; below that
//! the new variable enters and the *entire* old path is traversed twice
//! more (once reflected), tripling the segment count up to one shared
//! segment. Starting from the single-column instance `y = [1]`, `X = [[1]]`
//! (two segments), `p` columns give `(3^p + 1) / 2` segments.
//!
//! Event lambdas shrink geometrically (by one to two orders of magnitude per
//! level), so the generator traces the intermediate paths with the
//! extended-precision engine of [`crate::extended`]; when even that cannot
//! resolve a path the generator reports how far it got instead of returning
//! a corrupted instance.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::extended::compute_exact_path_extended;
use crate::homotopy::{HomotopyOptions, PathError};
use crate::model::{ModelError, PathKind, ProblemInstance, RegularizationPath, SignPattern};
use crate::tol;

/// Parameters of the recursive construction.
#[derive(Debug, Clone)]
pub struct AdversarialConfig {
    /// Number of columns of the final instance (`>= 1`).
    pub p: usize,
    /// Fraction of `lambda_1` at which the appended variable first enters;
    /// must lie strictly in `(0, 1)`.
    pub alpha_factor: f64,
    /// Value of the appended observation (`> 0`).
    pub y_next: f64,
}

impl AdversarialConfig {
    pub fn new(p: usize) -> Self {
        Self {
            p,
            alpha_factor: 0.5,
            y_next: 1.0,
        }
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("input path is unusable for extension: {0}")]
    InvalidPath(String),
    #[error(
        "floating-point precision exhausted: the exact path of the p = {achieved_p} instance \
         cannot be traced to completion, so deeper levels cannot be built"
    )]
    PrecisionExhausted {
        achieved_p: usize,
        /// Largest instance that was still constructed exactly.
        instance: Box<ProblemInstance>,
    },
    #[error("pattern recursion requires the all-zero leading pattern")]
    InvalidSequence,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Generates the `p`-column worst-case instance with default parameters.
pub fn gen_pathological(p: usize) -> Result<ProblemInstance, GenError> {
    gen_pathological_with(&AdversarialConfig::new(p))
}

/// Generates the worst-case instance described by `config`.
pub fn gen_pathological_with(config: &AdversarialConfig) -> Result<ProblemInstance, GenError> {
    validate(config)?;
    let mut inst = base_instance()?;
    for built in 1..config.p {
        let path = match compute_exact_path_extended(&inst, &HomotopyOptions::default()) {
            Ok(path) => path,
            Err(PathError::Truncated { .. }) => {
                return Err(GenError::PrecisionExhausted {
                    achieved_p: built,
                    instance: Box::new(inst),
                })
            }
            Err(e) => return Err(GenError::InvalidPath(e.to_string())),
        };
        inst = extend_instance(&inst, &path, config.alpha_factor, config.y_next)?;
    }
    Ok(inst)
}

/// Appends one observation and one column so that the extended exact path
/// replays `path` three times (the third reflected), given the exact path of
/// `inst`.
pub fn extend_instance(
    inst: &ProblemInstance,
    path: &RegularizationPath,
    alpha_factor: f64,
    y_next: f64,
) -> Result<ProblemInstance, GenError> {
    if !matches!(path.kind, PathKind::Exact) {
        return Err(GenError::InvalidPath(
            "extension requires an exact path".to_string(),
        ));
    }
    if !path.complete || path.kinks.len() < 2 {
        return Err(GenError::InvalidPath(
            "extension requires a complete path with at least one event".to_string(),
        ));
    }
    let lambda1 = path.last_event_lambda();
    if !(lambda1 > 0.0) || !lambda1.is_finite() {
        return Err(GenError::InvalidPath(format!(
            "last event lambda must be finite and positive, got {lambda1}"
        )));
    }
    let n = inst.n();
    let p = inst.p();
    let y = inst.y();
    let x = inst.x();
    let yty: f64 = y.iter().map(|v| v * v).sum();
    let alpha = alpha_factor * lambda1 / (2.0 * yty + y_next * y_next);
    let mut y_ext = Array1::zeros(n + 1);
    y_ext.slice_mut(ndarray::s![..n]).assign(y);
    y_ext[n] = y_next;
    let mut x_ext = Array2::zeros((n + 1, p + 1));
    x_ext.slice_mut(ndarray::s![..n, ..p]).assign(x);
    for i in 0..n {
        x_ext[[i, p]] = 2.0 * alpha * y[i];
    }
    x_ext[[n, p]] = alpha * y_next;
    Ok(ProblemInstance::new(y_ext, x_ext)?)
}

/// The sign-pattern sequence of the `p`-column instance's exact path, top
/// segment first: each level maps the previous sequence `eta^1..eta^N`
/// (where `eta^1 = 0`) to
///
/// ```text
/// [eta^1; 0] .. [eta^N; 0],  [eta^N; 1] .. [eta^1; 1],  [-eta^2; 1] .. [-eta^N; 1]
/// ```
///
/// for `3N - 1 = (3^(k+1) + 1) / 2` patterns in total.
pub fn expected_pattern_sequence(p: usize) -> Result<Vec<SignPattern>, GenError> {
    if p == 0 {
        return Err(GenError::InvalidConfig(
            "pattern sequence requires p >= 1".to_string(),
        ));
    }
    let count = (3u128.pow(p as u32) + 1) / 2;
    if count > tol::MAX_KINKS_CAP as u128 {
        return Err(GenError::InvalidConfig(format!(
            "pattern sequence for p = {p} has {count} entries, beyond the in-memory cap"
        )));
    }
    let mut seq: Vec<Vec<i8>> = vec![vec![0], vec![1]];
    for _ in 1..p {
        if !seq[0].iter().all(|&s| s == 0) {
            return Err(GenError::InvalidSequence);
        }
        let mut next = Vec::with_capacity(3 * seq.len() - 1);
        for s in &seq {
            next.push(appended(s, 0));
        }
        for s in seq.iter().rev() {
            next.push(appended(s, 1));
        }
        for s in seq.iter().skip(1) {
            let negated: Vec<i8> = s.iter().map(|&v| -v).collect();
            next.push(appended(&negated, 1));
        }
        seq = next;
    }
    seq.into_iter()
        .map(|s| SignPattern::new(s).map_err(GenError::from))
        .collect()
}

fn appended(s: &[i8], last: i8) -> Vec<i8> {
    let mut out = Vec::with_capacity(s.len() + 1);
    out.extend_from_slice(s);
    out.push(last);
    out
}

fn base_instance() -> Result<ProblemInstance, GenError> {
    Ok(ProblemInstance::new(
        Array1::from_vec(vec![1.0]),
        Array2::from_shape_vec((1, 1), vec![1.0]).expect("1x1 shape"),
    )?)
}

fn validate(config: &AdversarialConfig) -> Result<(), GenError> {
    if config.p == 0 {
        return Err(GenError::InvalidConfig("p must be at least 1".to_string()));
    }
    if !(config.alpha_factor > 0.0 && config.alpha_factor < 1.0) {
        return Err(GenError::InvalidConfig(format!(
            "alpha_factor must lie strictly in (0, 1), got {}",
            config.alpha_factor
        )));
    }
    if !(config.y_next > 0.0) || !config.y_next.is_finite() {
        return Err(GenError::InvalidConfig(format!(
            "y_next must be finite and positive, got {}",
            config.y_next
        )));
    }
    Ok(())
}
