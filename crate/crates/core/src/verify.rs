//! Path certification: duality-gap sampling and structural bounds.
//!
//! [`verify_path`] samples a computed path on a geometric lambda grid and
//! measures the relative duality gap of the reconstructed solution at every
//! sample. Exact paths must certify to roundoff; an epsilon-approximate path
//! must certify to its own epsilon, using the band-rescaling argument: a
//! record `(lambda_i, w_i)` that satisfies the `(eps/2, eps/2)` band at
//! `lambda_i` satisfies the `(eps1', eps2')` band at any smaller `lambda`
//! with `eps1' = (1 + eps/2) lambda_i / lambda - 1`, and the step-size rule
//! keeps the implied gap bound at `eps` over the whole recorded hold
//! interval.
//!
//! [`check_structural_bounds`] tests the combinatorial facts that make path
//! complexity meaningful: the number of recorded segments never exceeds
//! `(3^p + 1) / 2`, and no sign pattern (up to global negation) appears
//! twice.

use std::collections::HashSet;

use crate::cd::{cd_solve, CdError, CdOptions};
use crate::homotopy::{interpolate, PathError};
use crate::model::{
    sign_pattern, ModelError, PathKind, ProblemInstance, RegularizationPath, SignPattern,
};
use crate::tol;

/// Options for [`verify_path`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Number of geometric samples over `[lambda_last, lambda_max]`.
    pub samples: usize,
    /// Gap target override; defaults to the path's own epsilon (zero for
    /// exact paths).
    pub epsilon: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 100,
            epsilon: None,
        }
    }
}

/// Outcome of [`verify_path`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerificationReport {
    pub samples: usize,
    /// Gap target the path was held to.
    pub epsilon: f64,
    pub max_relative_gap: f64,
    /// Sample lambda attaining `max_relative_gap`.
    pub worst_lambda: f64,
    /// Every sampled relative gap stayed within `epsilon +
    /// tol::VERIFY_GAP_SLACK` plus the sample's own roundoff floor
    /// (`tol::VERIFY_ROUNDOFF_FACTOR * epsilon_machine * lambda_max /
    /// lambda`).
    pub gap_pass: bool,
    pub segment_count: usize,
    /// Distinct sign patterns among the records.
    pub pattern_count: usize,
    pub upper_bound_ok: bool,
    pub antipodal_free: bool,
    /// Conjunction of the gap and structural checks.
    pub pass: bool,
}

/// Number of stored records (segments for an exact path).
pub fn count_segments(path: &RegularizationPath) -> usize {
    path.kinks.len()
}

/// Descending geometric grid from `hi` to `lo` with exact endpoints.
pub fn geometric_grid(hi: f64, lo: f64, m: usize) -> Vec<f64> {
    assert!(m >= 1, "grid needs at least one point");
    assert!(
        hi >= lo && lo > 0.0 && hi.is_finite(),
        "grid requires 0 < lo <= hi"
    );
    if m == 1 {
        return vec![hi];
    }
    let ratio = lo / hi;
    (0..m)
        .map(|i| {
            if i == 0 {
                hi
            } else if i == m - 1 {
                lo
            } else {
                hi * ratio.powf(i as f64 / (m - 1) as f64)
            }
        })
        .collect()
}

/// Samples the path and certifies its duality gap, then attaches the
/// structural checks.
pub fn verify_path(
    inst: &ProblemInstance,
    path: &RegularizationPath,
    options: &VerifyOptions,
) -> Result<VerificationReport, PathError> {
    if path.kinks.is_empty() {
        return Err(ModelError::InvalidInstance("path has no records".into()).into());
    }
    if path.p() != inst.p() {
        return Err(ModelError::DimensionMismatch {
            what: "path",
            expected: inst.p(),
            actual: path.p(),
        }
        .into());
    }
    let target = options.epsilon.unwrap_or_else(|| path.epsilon().unwrap_or(0.0));
    let samples = options.samples.max(1);
    let grid = geometric_grid(path.lambda_max(), path.lambda_last(), samples);
    let mut max_relative_gap = 0.0f64;
    let mut worst_lambda = path.lambda_max();
    let mut gap_pass = true;
    for &lambda in &grid {
        let w = interpolate(path, lambda)?;
        let eps1 = match path.kind {
            PathKind::Exact => 0.0,
            PathKind::Approximate { epsilon } => {
                let hi = &path.kinks[governing_index(path, lambda)];
                if lambda >= hi.lambda || hi.valid_until.is_none_or(|v| v > lambda) {
                    // At a record, or inside a homotopy ride: the
                    // (interpolated) iterate is in-band at lambda itself.
                    epsilon / 2.0
                } else {
                    // Constant hold: rescale the record's band down to
                    // lambda.
                    (1.0 + epsilon / 2.0) * hi.lambda / lambda - 1.0
                }
            }
        };
        let mut kappa = inst.dual_from_primal(&w, eps1);
        let attained = inst
            .x()
            .t()
            .dot(&kappa)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if attained > lambda {
            kappa *= lambda / attained;
        }
        let cert = inst.duality_gap(&w, &kappa, lambda)?;
        if cert.relative_gap > max_relative_gap {
            max_relative_gap = cert.relative_gap;
            worst_lambda = lambda;
        }
        let roundoff_floor =
            tol::VERIFY_ROUNDOFF_FACTOR * f64::EPSILON * path.lambda_max() / lambda;
        if cert.relative_gap > target + tol::VERIFY_GAP_SLACK + roundoff_floor {
            gap_pass = false;
        }
    }
    // The segment-count and antipodal facts are statements about exact
    // paths; approximate records may legitimately repeat a pattern across
    // holds, so they pass these vacuously.
    let (upper_bound_ok, antipodal_free) = match path.kind {
        PathKind::Exact => check_structural_bounds(path),
        PathKind::Approximate { .. } => (true, true),
    };
    let pattern_count = path
        .kinks
        .iter()
        .map(|k| &k.pattern)
        .collect::<HashSet<_>>()
        .len();
    Ok(VerificationReport {
        samples,
        epsilon: target,
        max_relative_gap,
        worst_lambda,
        gap_pass,
        segment_count: count_segments(path),
        pattern_count,
        upper_bound_ok,
        antipodal_free,
        pass: gap_pass && upper_bound_ok && antipodal_free,
    })
}

/// Index of the last record with `lambda_rec >= lambda` (the one whose hold
/// interval contains `lambda`).
fn governing_index(path: &RegularizationPath, lambda: f64) -> usize {
    let count = path.kinks.partition_point(|k| k.lambda >= lambda);
    count.saturating_sub(1)
}

/// Structural facts about path complexity: `(upper_bound_ok,
/// antipodal_free)`.
///
/// * `upper_bound_ok`: at most `(3^p + 1) / 2` records (trivially true once
///   `p` is large enough that the bound exceeds any in-memory path).
/// * `antipodal_free`: no sign pattern appears twice, counting `eta` and
///   `-eta` as the same pattern.
pub fn check_structural_bounds(path: &RegularizationPath) -> (bool, bool) {
    let p = path.p();
    let upper_bound_ok = if p > 80 {
        true
    } else {
        (path.kinks.len() as u128) <= (3u128.pow(p as u32) + 1) / 2
    };
    let mut seen: HashSet<SignPattern> = HashSet::with_capacity(path.kinks.len());
    let mut antipodal_free = true;
    for kink in &path.kinks {
        if !seen.insert(canonical(&kink.pattern)) {
            antipodal_free = false;
            break;
        }
    }
    (upper_bound_ok, antipodal_free)
}

/// Canonical representative of the pair `{eta, -eta}`: the first nonzero
/// entry is made positive.
fn canonical(pattern: &SignPattern) -> SignPattern {
    match pattern.as_slice().iter().find(|&&v| v != 0) {
        Some(&-1) => pattern.negated(),
        _ => pattern.clone(),
    }
}

/// Independent pattern oracle: solves cold-started coordinate descent at
/// each grid lambda and returns the sign patterns in order of appearance
/// (consecutive duplicates collapsed).
pub fn grid_oracle(
    inst: &ProblemInstance,
    lambdas: &[f64],
    options: &CdOptions,
) -> Result<Vec<SignPattern>, CdError> {
    let mut out: Vec<SignPattern> = Vec::new();
    for &lambda in lambdas {
        let w = cd_solve(inst, lambda, None, options)?;
        let pattern = sign_pattern(w.as_slice().expect("standard layout"), 0.0);
        if out.last() != Some(&pattern) {
            out.push(pattern);
        }
    }
    Ok(out)
}
