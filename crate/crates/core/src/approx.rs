//! Approximate regularization paths with certified relative duality gap.
//!
//! The iteration maintains a point `w` that satisfies the relaxed optimality
//! band with parameters `(eps/2, eps/2)` at the current lambda. At each step
//! it either
//!
//! * rides the homotopy direction through the current iterate downward as
//!   far as the band allows (active-coordinate offsets are constant along
//!   the direction, so the exit lambda is explicit), or
//! * shrinks lambda by the fixed factor `1 - theta(eps) sqrt(eps)` and
//!   re-solves to the `(eps/2, eps/2)` band by warm-started coordinate
//!   descent (a first-order step).
//!
//! A homotopy step is taken when it covers at least `lambda theta(eps)
//! sqrt(eps)`; otherwise the first-order step runs. Because every
//! first-order step shrinks lambda geometrically, their total number is at
//! most [`segment_bound`]. The interval between two records certifies in
//! one of two ways. Across a homotopy step the iterate moves affinely and
//! stays inside the band at every intermediate lambda, so linear
//! interpolation of the records reconstructs a certified point. Across a
//! first-order step the upper record is held constant: rescaling its band
//! to a smaller lambda inflates the band parameter to exactly
//! `(1 + eps/2) lambda_i / lambda - 1`, and the `theta`-sized shrink is
//! precisely what keeps the implied relative duality gap at most `eps` down
//! to the next record. A record's `valid_until` stores the bottom of its
//! constant hold (its own lambda when the next step is a ride).
//!
//! With `eps = 0` the method degenerates to exact event stepping and reports
//! the same kinks as the exact path computation.

use ndarray::Array1;

use crate::cd::{cd_solve, CdError, CdOptions};
use crate::homotopy::{
    scan_affine_event, EventKind, PathError, PathWorkspace, SegmentState, TruncationReason,
};
use crate::model::{
    sign_pattern, Kink, ModelError, PathKind, ProblemInstance, RegularizationPath,
};
use crate::tol;

/// Options for [`compute_approx_path`].
#[derive(Debug, Clone)]
pub struct ApproxOptions {
    /// Target relative duality gap (`>= 0`; zero reproduces the exact path).
    pub epsilon: f64,
    /// End of the lambda range; the last record is anchored exactly here.
    pub lambda_min: f64,
    /// Maximum number of records before truncating. `None` uses
    /// [`tol::MAX_KINKS_CAP`].
    pub max_records: Option<usize>,
    /// Sweep budget for each inner coordinate-descent solve.
    pub max_sweeps: usize,
}

impl ApproxOptions {
    pub fn new(epsilon: f64, lambda_min: f64) -> Self {
        Self {
            epsilon,
            lambda_min,
            max_records: None,
            max_sweeps: 1_000_000,
        }
    }
}

/// An approximate path together with its step-count breakdown.
#[derive(Debug, Clone)]
pub struct ApproxPath {
    pub path: RegularizationPath,
    /// Steps that rode the homotopy direction (not counted by the bound).
    pub homotopy_steps: usize,
    /// Geometric shrink-and-resolve steps; at most [`segment_bound`].
    pub first_order_steps: usize,
}

/// The step-size factor `theta(eps) = 1 + eps/2 - sqrt(eps)/2`.
pub fn theta(epsilon: f64) -> f64 {
    1.0 + epsilon / 2.0 - epsilon.sqrt() / 2.0
}

/// Upper bound on the number of first-order steps over `[lambda_min,
/// lambda_max]`: `ceil(ln(lambda_max / lambda_min) / (theta(eps)
/// sqrt(eps)))`.
///
/// A value within a relative [`tol::CEIL_INTEGER_SNAP`] of an integer is
/// treated as that integer before rounding up, so the bound is stable under
/// the last-digit wobble of the logarithm.
pub fn segment_bound(
    lambda_max: f64,
    lambda_min: f64,
    epsilon: f64,
) -> Result<u64, ModelError> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(ModelError::InvalidInstance(format!(
            "segment bound requires a positive epsilon, got {epsilon}"
        )));
    }
    if !(lambda_min > 0.0) || !(lambda_max >= lambda_min) || !lambda_max.is_finite() {
        return Err(ModelError::InvalidInstance(format!(
            "segment bound requires 0 < lambda_min <= lambda_max, got [{lambda_min}, {lambda_max}]"
        )));
    }
    let v = (lambda_max / lambda_min).ln() / (theta(epsilon) * epsilon.sqrt());
    let nearest = v.round();
    let snapped = if (v - nearest).abs() <= tol::CEIL_INTEGER_SNAP * nearest.abs().max(1.0) {
        nearest
    } else {
        v.ceil()
    };
    Ok(snapped.max(0.0) as u64)
}

/// Computes an `epsilon`-approximate path from `lambda_max` down to
/// `options.lambda_min`.
///
/// Records start with `(lambda_max, 0)` and end exactly at
/// `options.lambda_min`. A record's `valid_until` is the next record's
/// lambda when the step below it held the iterate constant (first-order
/// step), and its own lambda when the step below it rode the homotopy
/// direction (evaluate those intervals by linear interpolation).
pub fn compute_approx_path(
    inst: &ProblemInstance,
    options: &ApproxOptions,
) -> Result<ApproxPath, PathError> {
    let epsilon = options.epsilon;
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(ModelError::InvalidInstance(format!(
            "epsilon must be finite and nonnegative, got {epsilon}"
        ))
        .into());
    }
    let lambda_min = options.lambda_min;
    if !(lambda_min > 0.0) || !lambda_min.is_finite() {
        return Err(ModelError::InvalidInstance(format!(
            "lambda_min must be finite and positive, got {lambda_min}"
        ))
        .into());
    }
    let p = inst.p();
    let kind = PathKind::Approximate { epsilon };
    let max_records = options.max_records.unwrap_or(tol::MAX_KINKS_CAP).max(1);
    let (lambda_max, j0) = inst.lambda_max_with_index();
    if lambda_max <= lambda_min {
        // The zero solution is optimal on the whole requested range.
        let record = Kink {
            lambda: lambda_min,
            active_set: Vec::new(),
            values: Vec::new(),
            pattern: crate::model::SignPattern::zeros(p),
            valid_until: Some(lambda_min),
        };
        return Ok(ApproxPath {
            path: RegularizationPath {
                kind,
                kinks: vec![record],
                complete: true,
            },
            homotopy_steps: 0,
            first_order_steps: 0,
        });
    }
    let ws = PathWorkspace::new(inst);
    let band = (1.0 + epsilon / 2.0) * (1.0 - tol::ENTER_BOUNDARY_SHAVE);
    let shrink = theta(epsilon) * epsilon.sqrt();
    let cd_options = CdOptions {
        epsilon1: epsilon / 2.0,
        epsilon2: epsilon / 2.0,
        max_sweeps: options.max_sweeps,
        check_every: 1,
    };
    let mut w: Array1<f64> = Array1::zeros(p);
    let mut lambda = lambda_max;
    let mut indices: Vec<usize> = vec![j0];
    let mut signs: Vec<f64> = vec![ws.q[j0].signum()];
    let mut just_changed: Option<usize> = Some(j0);
    let mut homotopy_steps = 0usize;
    let mut first_order_steps = 0usize;
    let mut records = vec![record_for(lambda, &w)];
    let truncated = |records: Vec<Kink>, reason: TruncationReason| PathError::Truncated {
        path: Box::new(RegularizationPath {
            kind,
            kinks: seal(records),
            complete: false,
        }),
        reason,
    };
    while lambda > lambda_min {
        if records.len() >= max_records {
            return Err(truncated(records, TruncationReason::MaxKinks { limit: max_records }));
        }
        let c = inst.correlations(&w);
        let state = if indices.is_empty() {
            None
        } else {
            match SegmentState::new(inst, &ws, indices.clone(), signs.clone()) {
                Ok(state) => Some(state),
                Err(e) => {
                    if epsilon == 0.0 {
                        return Err(truncated(records, singular(e)));
                    }
                    // No usable direction: fall back to a first-order step.
                    match first_order_step(
                        inst,
                        &mut w,
                        &mut lambda,
                        lambda_min,
                        shrink,
                        &cd_options,
                    ) {
                        Ok(()) => {
                            rebuild_support(&w, &mut indices, &mut signs);
                            just_changed = None;
                            first_order_steps += 1;
                            push_record(&mut records, lambda, &w, true);
                            continue;
                        }
                        Err(reason) => return Err(truncated(records, reason)),
                    }
                }
            }
        };
        let (event, delta_max, b) = match &state {
            None => {
                let active = vec![false; p];
                let t = vec![0.0; p];
                let u: Vec<f64> = c.to_vec();
                let event = scan_affine_event(
                    &active,
                    &[],
                    &[],
                    &[],
                    &u,
                    &t,
                    lambda,
                    band,
                    None,
                    just_changed,
                );
                (event, 0.0, Vec::new())
            }
            Some(state) => {
                let a_line: Vec<f64> = indices
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| w[j] + lambda * state.b[i])
                    .collect();
                let u_line: Vec<f64> = (0..p).map(|j| c[j] - lambda * state.t[j]).collect();
                let event = scan_affine_event(
                    &state.active,
                    &indices,
                    &a_line,
                    &state.b,
                    &u_line,
                    &state.t,
                    lambda,
                    band,
                    None,
                    just_changed,
                );
                let delta_max = indices
                    .iter()
                    .zip(&signs)
                    .map(|(&j, &s)| (c[j] - lambda * s).abs())
                    .fold(0.0f64, f64::max);
                (event, delta_max, state.b.clone())
            }
        };
        let active_floor = if epsilon > 0.0 && delta_max > 0.0 {
            2.0 * delta_max / epsilon
        } else {
            0.0
        };
        let stop = lambda_min
            .max(active_floor)
            .max(event.map_or(f64::NEG_INFINITY, |e| e.lambda));
        let tau = lambda - stop;
        if stop < lambda && tau >= lambda * shrink {
            for (i, &j) in indices.iter().enumerate() {
                w[j] += tau * b[i];
            }
            lambda = stop;
            homotopy_steps += 1;
            just_changed = None;
            if let Some(ev) = event {
                if ev.lambda >= stop {
                    match ev.kind {
                        EventKind::Enter { index, sign } => {
                            indices.push(index);
                            signs.push(f64::from(sign));
                            just_changed = Some(index);
                        }
                        EventKind::Leave { index } => {
                            if indices.len() == 1 {
                                return Err(truncated(
                                    records,
                                    TruncationReason::Precision {
                                        lambda,
                                        violation: f64::INFINITY,
                                    },
                                ));
                            }
                            let pos = indices
                                .iter()
                                .position(|&k| k == index)
                                .expect("leave event names a tracked variable");
                            indices.remove(pos);
                            signs.remove(pos);
                            w[index] = 0.0;
                            just_changed = Some(index);
                        }
                    }
                }
            }
            push_record(&mut records, lambda, &w, false);
        } else {
            debug_assert!(epsilon > 0.0, "zero-epsilon steps always ride the direction");
            match first_order_step(inst, &mut w, &mut lambda, lambda_min, shrink, &cd_options) {
                Ok(()) => {
                    rebuild_support(&w, &mut indices, &mut signs);
                    just_changed = None;
                    first_order_steps += 1;
                    push_record(&mut records, lambda, &w, true);
                }
                Err(reason) => return Err(truncated(records, reason)),
            }
        }
    }
    Ok(ApproxPath {
        path: RegularizationPath {
            kind,
            kinks: seal(records),
            complete: true,
        },
        homotopy_steps,
        first_order_steps,
    })
}

/// Shrinks lambda by the fixed factor and re-solves to the `(eps/2, eps/2)`
/// band by warm-started coordinate descent.
fn first_order_step(
    inst: &ProblemInstance,
    w: &mut Array1<f64>,
    lambda: &mut f64,
    lambda_min: f64,
    shrink: f64,
    cd_options: &CdOptions,
) -> Result<(), TruncationReason> {
    let next = (*lambda * (1.0 - shrink)).max(lambda_min);
    match cd_solve(inst, next, Some(w), cd_options) {
        Ok(solved) => {
            *w = solved;
            *lambda = next;
            Ok(())
        }
        Err(CdError::MaxSweepsExceeded {
            worst_active_high,
            worst_active_low,
            worst_inactive,
            ..
        }) => Err(TruncationReason::Precision {
            lambda: next,
            violation: worst_active_high.max(worst_active_low).max(worst_inactive) / next,
        }),
        Err(CdError::Model(_)) => Err(TruncationReason::Precision {
            lambda: next,
            violation: f64::NAN,
        }),
    }
}

fn rebuild_support(w: &Array1<f64>, indices: &mut Vec<usize>, signs: &mut Vec<f64>) {
    indices.clear();
    signs.clear();
    for (j, &v) in w.iter().enumerate() {
        if v != 0.0 {
            indices.push(j);
            signs.push(v.signum());
        }
    }
}

fn record_for(lambda: f64, w: &Array1<f64>) -> Kink {
    let mut active_set = Vec::new();
    let mut values = Vec::new();
    for (j, &v) in w.iter().enumerate() {
        if v != 0.0 {
            active_set.push(j);
            values.push(v);
        }
    }
    Kink {
        lambda,
        active_set,
        values,
        pattern: sign_pattern(w.as_slice().expect("standard layout"), 0.0),
        valid_until: None,
    }
}

/// Appends a record; `hold` says whether the step from the previous record
/// kept the iterate constant (first-order) rather than riding the direction.
fn push_record(records: &mut Vec<Kink>, lambda: f64, w: &Array1<f64>, hold: bool) {
    if let Some(prev) = records.last_mut() {
        prev.valid_until = Some(if hold { lambda } else { prev.lambda });
    }
    records.push(record_for(lambda, w));
}

/// Closes the hold chain: the final record holds only at its own lambda.
fn seal(mut records: Vec<Kink>) -> Vec<Kink> {
    if let Some(last) = records.last_mut() {
        if last.valid_until.is_none() {
            last.valid_until = Some(last.lambda);
        }
    }
    records
}

fn singular(e: crate::linalg::LinalgError) -> TruncationReason {
    match e {
        crate::linalg::LinalgError::Singular { condition } => {
            TruncationReason::Singular { condition }
        }
        _ => TruncationReason::Singular {
            condition: f64::INFINITY,
        },
    }
}

/// Evaluates the exact path at each requested lambda (descending or not),
/// computing it once down to the smallest of them.
pub fn sampled_exact_path(
    inst: &ProblemInstance,
    lambdas: &[f64],
) -> Result<Vec<Array1<f64>>, PathError> {
    if lambdas.is_empty() {
        return Ok(Vec::new());
    }
    let mut lo = f64::INFINITY;
    for &lambda in lambdas {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(ModelError::InvalidInstance(format!(
                "sample lambdas must be finite and positive, got {lambda}"
            ))
            .into());
        }
        lo = lo.min(lambda);
    }
    let path = crate::homotopy::compute_exact_path(
        inst,
        &crate::homotopy::HomotopyOptions {
            lambda_min: Some(lo),
            ..crate::homotopy::HomotopyOptions::default()
        },
    )?;
    lambdas
        .iter()
        .map(|&lambda| crate::homotopy::interpolate(&path, lambda))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::{compute_exact_path, interpolate, HomotopyOptions};
    use approx::assert_abs_diff_eq;
    use ndarray::{arr1, arr2};

    fn two_var_instance() -> ProblemInstance {
        let y = arr1(&[1.0, 1.0]);
        let x = arr2(&[[1.0, 1.0 / 3.0], [0.0, 1.0 / 6.0]]);
        ProblemInstance::new(y, x).unwrap()
    }

    #[test]
    fn theta_reference_values() {
        assert_abs_diff_eq!(theta(0.0), 1.0);
        assert_abs_diff_eq!(theta(0.25), 0.875, epsilon = 1e-15);
        assert_abs_diff_eq!(theta(1.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn segment_bound_reference_and_snap() {
        // ln(1e4) / (0.955 * 0.1) = 96.44..., rounded up.
        assert_eq!(segment_bound(1e4, 1.0, 0.01).unwrap(), 97);
        // A ratio engineered so the quotient is an integer up to the last
        // digit: it must not round up to 11.
        let epsilon = 0.04;
        let ratio = (10.0 * theta(epsilon) * epsilon.sqrt()).exp();
        assert_eq!(segment_bound(ratio, 1.0, epsilon).unwrap(), 10);
        assert!(segment_bound(1.0, 2.0, 0.1).is_err());
        assert!(segment_bound(1.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn zero_epsilon_reproduces_the_exact_kinks() {
        let inst = two_var_instance();
        let exact = compute_exact_path(&inst, &HomotopyOptions::default()).unwrap();
        // Stop a hair below the last event so both solvers process it even
        // when their roundoff images of its lambda differ in the last digit.
        let lambda1 = exact.last_event_lambda() * (1.0 - 1e-6);
        let exact_cut = compute_exact_path(
            &inst,
            &HomotopyOptions {
                lambda_min: Some(lambda1),
                ..HomotopyOptions::default()
            },
        )
        .unwrap();
        let approx = compute_approx_path(&inst, &ApproxOptions::new(0.0, lambda1)).unwrap();
        assert!(approx.path.complete);
        assert_eq!(approx.first_order_steps, 0);
        assert_eq!(approx.path.kinks.len(), exact_cut.kinks.len());
        for (a, e) in approx.path.kinks.iter().zip(&exact_cut.kinks) {
            assert_abs_diff_eq!(a.lambda, e.lambda, epsilon = 1e-9 * e.lambda);
            let da = a.dense(2);
            let de = e.dense(2);
            for j in 0..2 {
                assert_abs_diff_eq!(da[j], de[j], epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn records_form_a_contiguous_hold_chain() {
        let inst = ProblemInstance::gaussian(30, 10, 21).unwrap();
        let lambda_min = inst.lambda_max() / 50.0;
        let approx = compute_approx_path(&inst, &ApproxOptions::new(0.05, lambda_min)).unwrap();
        let kinks = &approx.path.kinks;
        assert!(approx.path.complete);
        assert_abs_diff_eq!(kinks[0].lambda, inst.lambda_max());
        assert_abs_diff_eq!(kinks.last().unwrap().lambda, lambda_min);
        assert_eq!(
            approx.homotopy_steps + approx.first_order_steps,
            kinks.len() - 1
        );
        for pair in kinks.windows(2) {
            assert!(pair[1].lambda < pair[0].lambda);
            // Hold down to the next record (first-order step) or no hold at
            // all (homotopy ride).
            let v = pair[0].valid_until.unwrap();
            assert!(v == pair[1].lambda || v == pair[0].lambda);
        }
        assert_eq!(
            kinks.last().unwrap().valid_until,
            Some(kinks.last().unwrap().lambda)
        );
    }

    #[test]
    fn every_record_passes_its_own_band() {
        let inst = ProblemInstance::gaussian(30, 10, 22).unwrap();
        let epsilon = 0.02;
        let lambda_min = inst.lambda_max() / 100.0;
        let approx = compute_approx_path(&inst, &ApproxOptions::new(epsilon, lambda_min)).unwrap();
        for kink in &approx.path.kinks {
            let w = kink.dense(inst.p());
            let report = inst
                .check_opt_condition(&w, kink.lambda, epsilon / 2.0, epsilon / 2.0)
                .unwrap();
            // Ride records satisfy the band in the affine model; measuring
            // them through fresh correlations adds plain roundoff.
            let worst = report
                .worst_active_high
                .max(report.worst_active_low)
                .max(report.worst_inactive);
            assert!(
                worst <= 1e-12 * kink.lambda,
                "record at lambda = {} violates its band: {report:?}",
                kink.lambda
            );
        }
    }

    #[test]
    fn intervals_certify_by_their_kind() {
        let inst = ProblemInstance::gaussian(40, 15, 23).unwrap();
        let epsilon = 0.1;
        let lambda_min = inst.lambda_max() / 200.0;
        let approx = compute_approx_path(&inst, &ApproxOptions::new(epsilon, lambda_min)).unwrap();
        let kinks = &approx.path.kinks;
        let mut holds = 0usize;
        for pair in kinks.windows(2) {
            let hi = &pair[0];
            let mid = (hi.lambda * pair[1].lambda).sqrt();
            let w = interpolate(&approx.path, mid).unwrap();
            let eps1 = if hi.valid_until.unwrap() <= mid {
                holds += 1;
                // Constant hold: the record itself with the rescaled band.
                assert_eq!(w, hi.dense(inst.p()));
                let eps1 = (1.0 + epsilon / 2.0) * hi.lambda / mid - 1.0;
                let eps2 = 1.0 - (1.0 - epsilon / 2.0) * hi.lambda / mid;
                let report = inst.check_opt_condition(&w, mid, eps1, eps2).unwrap();
                assert!(report.pass, "hold violated at lambda = {mid}: {report:?}");
                eps1
            } else {
                // Homotopy ride: the interpolated iterate is in-band.
                let report = inst
                    .check_opt_condition(&w, mid, epsilon / 2.0, epsilon / 2.0)
                    .unwrap();
                let worst = report
                    .worst_active_high
                    .max(report.worst_active_low)
                    .max(report.worst_inactive);
                assert!(
                    worst <= 1e-12 * mid,
                    "ride out of band at lambda = {mid}: {report:?}"
                );
                epsilon / 2.0
            };
            let kappa = inst.dual_from_primal(&w, eps1);
            let cert = inst.duality_gap(&w, &kappa, mid).unwrap();
            assert!(
                cert.relative_gap <= epsilon + tol::VERIFY_GAP_SLACK,
                "gap {} exceeds epsilon at lambda = {mid}",
                cert.relative_gap
            );
        }
        assert!(holds > 0, "expected at least one first-order hold");
    }

    #[test]
    fn first_order_steps_respect_the_bound() {
        let inst = ProblemInstance::gaussian(50, 20, 24).unwrap();
        let epsilon = 0.01;
        let lambda_min = inst.lambda_max() / 1e4;
        let approx = compute_approx_path(&inst, &ApproxOptions::new(epsilon, lambda_min)).unwrap();
        let bound = segment_bound(inst.lambda_max(), lambda_min, epsilon).unwrap();
        assert!(
            (approx.first_order_steps as u64) <= bound,
            "{} first-order steps exceed the bound {bound}",
            approx.first_order_steps
        );
    }

    #[test]
    fn interpolate_holds_across_first_order_steps_and_blends_rides() {
        let inst = ProblemInstance::gaussian(30, 10, 25).unwrap();
        let lambda_min = inst.lambda_max() / 50.0;
        let approx = compute_approx_path(&inst, &ApproxOptions::new(0.1, lambda_min)).unwrap();
        let kinks = &approx.path.kinks;
        let hold_pair = kinks
            .windows(2)
            .find(|pair| pair[0].valid_until == Some(pair[1].lambda))
            .expect("an epsilon = 0.1 path takes first-order steps");
        let mid = 0.5 * (hold_pair[0].lambda + hold_pair[1].lambda);
        let w = interpolate(&approx.path, mid).unwrap();
        let expect = hold_pair[0].dense(inst.p());
        for j in 0..inst.p() {
            assert_eq!(w[j], expect[j]);
        }
        assert!(interpolate(&approx.path, lambda_min * 0.9).is_err());

        // A zero-epsilon path only rides; between records it is linear.
        let inst = two_var_instance();
        let exact = compute_exact_path(&inst, &HomotopyOptions::default()).unwrap();
        let lambda1 = exact.last_event_lambda() * (1.0 - 1e-6);
        let ride = compute_approx_path(&inst, &ApproxOptions::new(0.0, lambda1)).unwrap();
        let pair = &ride.path.kinks[1..3];
        let mid = 0.5 * (pair[0].lambda + pair[1].lambda);
        let w = interpolate(&ride.path, mid).unwrap();
        let blend = (pair[0].dense(2) + pair[1].dense(2)) * 0.5;
        for j in 0..2 {
            assert_abs_diff_eq!(w[j], blend[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn degenerate_range_returns_the_zero_record() {
        let inst = two_var_instance();
        let approx = compute_approx_path(&inst, &ApproxOptions::new(0.1, 5.0)).unwrap();
        assert_eq!(approx.path.kinks.len(), 1);
        assert!(approx.path.kinks[0].pattern.is_all_zero());
        assert_eq!(approx.homotopy_steps + approx.first_order_steps, 0);
    }

    #[test]
    fn sampled_exact_path_matches_interpolation() {
        let inst = two_var_instance();
        let lambdas = [0.5, 0.2, 0.1, 0.03];
        let samples = sampled_exact_path(&inst, &lambdas).unwrap();
        let path = compute_exact_path(
            &inst,
            &HomotopyOptions {
                lambda_min: Some(0.03),
                ..HomotopyOptions::default()
            },
        )
        .unwrap();
        for (lambda, w) in lambdas.iter().zip(&samples) {
            let expect = interpolate(&path, *lambda).unwrap();
            for j in 0..2 {
                assert_abs_diff_eq!(w[j], expect[j], epsilon = 1e-12);
            }
        }
    }
}
