//! Exact homotopy computation of the Lasso regularization path.
//!
//! Between two consecutive events the active set `J` and the sign vector
//! `eta` are constant and the restricted solution is affine in `lambda`:
//! `w_J(lambda) = a - lambda b` with `a = (X_J' X_J)^-1 X_J' y` and
//! `b = (X_J' X_J)^-1 eta_J`. Correlations of inactive variables are affine
//! as well, `c_j(lambda) = u_j + lambda t_j`, so every event (a variable
//! entering the active set or a coefficient crossing zero) is the root of an
//! explicit affine function. The path is traced event by event from
//! `lambda_max` downward.
//!
//! All correlation coefficients are computed in Gram form (`u = q - G_J a`,
//! `t = G_J b`), never through the residual vector. This keeps both a tiny
//! column's correlation and its rounding error proportional to that column's
//! own scale, which is what makes instances with breakpoints spread over many
//! orders of magnitude tractable in double precision.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::linalg::{GramSystem, LinalgError};
use crate::model::{
    Kink, ModelError, PathKind, ProblemInstance, RegularizationPath, SignPattern,
};
use crate::tol;

/// Why an exact path computation stopped before reaching its target lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationReason {
    /// The active Gram system became numerically singular.
    Singular { condition: f64 },
    /// The kink budget was exhausted.
    MaxKinks { limit: usize },
    /// The in-loop stationarity audit failed: an inactive correlation
    /// exceeded its bound by more than the audit tolerance, so continuing
    /// would record segments that are not actually on the path.
    Precision { lambda: f64, violation: f64 },
}

impl std::fmt::Display for TruncationReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TruncationReason::Singular { condition } => {
                write!(f, "singular active Gram system (condition estimate {condition:e})")
            }
            TruncationReason::MaxKinks { limit } => {
                write!(f, "kink budget of {limit} exhausted")
            }
            TruncationReason::Precision { lambda, violation } => write!(
                f,
                "stationarity audit failed at lambda = {lambda:e} (relative violation {violation:e})"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum PathError {
    /// The computation stopped early; `path` holds the valid prefix
    /// (`complete == false`).
    #[error("path truncated: {reason}")]
    Truncated {
        path: Box<RegularizationPath>,
        reason: TruncationReason,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("lambda = {lambda:e} is outside the covered range [{lambda_lo:e}, {lambda_hi:e}]")]
    OutOfRange {
        lambda: f64,
        lambda_lo: f64,
        lambda_hi: f64,
    },
}

/// Options for [`compute_exact_path`].
#[derive(Debug, Clone)]
pub struct HomotopyOptions {
    /// Stop the path at this lambda. `None` (or zero) lets the path run until
    /// no further event exists; the final record is then anchored at half the
    /// last event lambda.
    pub lambda_min: Option<f64>,
    /// Absolute window within which two event lambdas are reported as
    /// simultaneous. `None` uses [`tol::EVENT_TOL_FRACTION`] of the current
    /// segment top.
    pub event_tol: Option<f64>,
    /// Maximum number of recorded kinks before truncating. `None` uses
    /// [`tol::MAX_KINKS_CAP`].
    pub max_kinks: Option<usize>,
    /// Magnitude below which a coefficient of a caller-supplied iterate is
    /// treated as zero when reconstructing its support.
    pub zero_tol: f64,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        Self {
            lambda_min: None,
            event_tol: None,
            max_kinks: None,
            zero_tol: tol::SIGN_ZERO_TOL,
        }
    }
}

/// A path event: the largest lambda below the current segment top at which
/// the active set changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub lambda: f64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EventKind {
    /// Variable `index` enters the active set with sign `sign`.
    Enter { index: usize, sign: i8 },
    /// The coefficient of variable `index` reaches zero and leaves.
    Leave { index: usize },
}

impl EventKind {
    pub(crate) fn index(&self) -> usize {
        match self {
            EventKind::Enter { index, .. } | EventKind::Leave { index } => *index,
        }
    }
}

/// Affine description of one path segment: active set, signs, and the
/// coefficients of `w_J(lambda) = a - lambda b` and
/// `c_j(lambda) = u_j + lambda t_j`.
pub(crate) struct SegmentState {
    /// Active variables in insertion order.
    pub(crate) indices: Vec<usize>,
    /// Segment signs `eta`, aligned with `indices`.
    pub(crate) signs: Vec<f64>,
    pub(crate) active: Vec<bool>,
    sys: GramSystem,
    pub(crate) a: Vec<f64>,
    pub(crate) b: Vec<f64>,
    pub(crate) u: Vec<f64>,
    pub(crate) t: Vec<f64>,
    events_since_rebuild: usize,
}

/// Shared per-instance data the segment engine needs: `q = X'y` and the full
/// Gram matrix.
pub(crate) struct PathWorkspace {
    pub(crate) q: Array1<f64>,
    pub(crate) gram: Array2<f64>,
}

impl PathWorkspace {
    pub(crate) fn new(inst: &ProblemInstance) -> Self {
        let q = inst.xty();
        let gram = inst.x().t().dot(inst.x());
        Self { q, gram }
    }
}

impl SegmentState {
    pub(crate) fn new(
        inst: &ProblemInstance,
        ws: &PathWorkspace,
        indices: Vec<usize>,
        signs: Vec<f64>,
    ) -> Result<Self, LinalgError> {
        debug_assert_eq!(indices.len(), signs.len());
        let sys = GramSystem::build(inst, &indices)?;
        let mut active = vec![false; inst.p()];
        for &j in &indices {
            active[j] = true;
        }
        let mut state = Self {
            indices,
            signs,
            active,
            sys,
            a: Vec::new(),
            b: Vec::new(),
            u: Vec::new(),
            t: Vec::new(),
            events_since_rebuild: 0,
        };
        state.refresh(ws);
        Ok(state)
    }

    /// Recomputes `a`, `b`, `u`, `t` from the current factorization.
    fn refresh(&mut self, ws: &PathWorkspace) {
        let rhs: Vec<f64> = self.indices.iter().map(|&j| ws.q[j]).collect();
        self.a = self.sys.solve(&rhs);
        self.b = self.sys.solve(&self.signs);
        let p = ws.q.len();
        self.u = (0..p)
            .map(|j| {
                let mut acc = ws.q[j];
                for (i, &k) in self.indices.iter().enumerate() {
                    acc -= ws.gram[[j, k]] * self.a[i];
                }
                acc
            })
            .collect();
        self.t = (0..p)
            .map(|j| {
                let mut acc = 0.0;
                for (i, &k) in self.indices.iter().enumerate() {
                    acc += ws.gram[[j, k]] * self.b[i];
                }
                acc
            })
            .collect();
    }

    pub(crate) fn correlation_at(&self, j: usize, lambda: f64) -> f64 {
        self.u[j] + lambda * self.t[j]
    }

    /// Coefficient values at `lambda`, aligned with `indices`.
    pub(crate) fn values_at(&self, lambda: f64) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| a - lambda * b)
            .collect()
    }

    pub(crate) fn enter(
        &mut self,
        inst: &ProblemInstance,
        ws: &PathWorkspace,
        j: usize,
        sign: f64,
    ) -> Result<(), LinalgError> {
        self.indices.push(j);
        self.signs.push(sign);
        self.active[j] = true;
        self.refactor(inst, |sys, inst| sys.extend(inst, j))?;
        self.refresh(ws);
        Ok(())
    }

    pub(crate) fn leave(
        &mut self,
        inst: &ProblemInstance,
        ws: &PathWorkspace,
        pos: usize,
    ) -> Result<(), LinalgError> {
        let var = self.indices.remove(pos);
        self.signs.remove(pos);
        self.active[var] = false;
        self.refactor(inst, |sys, _| sys.remove(pos))?;
        self.refresh(ws);
        Ok(())
    }

    /// Applies an incremental factor update, or rebuilds from scratch every
    /// [`tol::GRAM_REFRESH_INTERVAL`] events to stop roundoff accumulating.
    fn refactor(
        &mut self,
        inst: &ProblemInstance,
        update: impl FnOnce(&mut GramSystem, &ProblemInstance) -> Result<(), LinalgError>,
    ) -> Result<(), LinalgError> {
        self.events_since_rebuild += 1;
        if self.events_since_rebuild >= tol::GRAM_REFRESH_INTERVAL {
            self.sys = GramSystem::build(inst, &self.indices)?;
            self.events_since_rebuild = 0;
        } else {
            update(&mut self.sys, inst)?;
        }
        Ok(())
    }

    /// Finds the next event strictly below `lambda_top` on this segment.
    pub(crate) fn next_event(
        &self,
        lambda_top: f64,
        band: f64,
        event_tol: Option<f64>,
        just_changed: Option<usize>,
    ) -> Option<Event> {
        scan_affine_event(
            &self.active,
            &self.indices,
            &self.a,
            &self.b,
            &self.u,
            &self.t,
            lambda_top,
            band,
            event_tol,
            just_changed,
        )
    }

    /// Relative stationarity violation of the worst inactive variable at
    /// `lambda`, for the in-loop audit.
    fn worst_inactive_violation(&self, lambda: f64, band: f64) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.u.len() {
            if self.active[j] {
                continue;
            }
            let c = self.correlation_at(j, lambda);
            worst = worst.max((c.abs() - band * lambda) / lambda);
        }
        worst
    }

    /// Records the kink that terminates the current segment at `lambda`.
    /// For a leave event the departing coefficient is stored as exactly zero.
    fn record_kink(&self, p: usize, lambda: f64, leaving: Option<usize>) -> Kink {
        let values = self.values_at(lambda);
        let mut entries: Vec<(usize, f64, f64)> = self
            .indices
            .iter()
            .zip(values.iter().zip(&self.signs))
            .map(|(&j, (&v, &s))| (j, if leaving == Some(j) { 0.0 } else { v }, s))
            .collect();
        entries.sort_by_key(|&(j, _, _)| j);
        let mut pattern = vec![0i8; p];
        for &(j, _, s) in &entries {
            pattern[j] = s as i8;
        }
        Kink {
            lambda,
            active_set: entries.iter().map(|&(j, _, _)| j).collect(),
            values: entries.iter().map(|&(_, v, _)| v).collect(),
            pattern: SignPattern::new(pattern).expect("segment signs are in {-1, 0, 1}"),
            valid_until: None,
        }
    }
}

/// Next event of the affine segment `w_J(lambda) = a - lambda b`,
/// `c_j(lambda) = u_j + lambda t_j`, strictly below `lambda_top`.
///
/// `band` is the correlation bound factor: inactive variables enter when
/// `|c_j(lambda)| = band * lambda` (1 on the exact path, a widened value for
/// the approximate variant). A variable sitting on the bound at `lambda_top`
/// and moving outward as lambda decreases enters immediately (at `lambda_top`
/// less a relative shave), which resolves near-simultaneous events one at a
/// time. `just_changed` names the variable whose event produced the current
/// segment top, so that the roundoff image of its own event is not
/// rediscovered as a new one.
#[allow(clippy::too_many_arguments)]
pub(crate) fn scan_affine_event(
    active: &[bool],
    indices: &[usize],
    a: &[f64],
    b: &[f64],
    u: &[f64],
    t: &[f64],
    lambda_top: f64,
    band: f64,
    event_tol: Option<f64>,
    just_changed: Option<usize>,
) -> Option<Event> {
    let p = active.len();
    let tie_tol = event_tol.unwrap_or(tol::EVENT_TOL_FRACTION * lambda_top);
    let inside_cut = band * lambda_top * (1.0 - tol::EVENT_REL_WINDOW);
    let audit_cut = band * lambda_top * (1.0 + tol::KKT_AUDIT_REL_TOL);
    let sitter_lambda = lambda_top * (1.0 - tol::ENTER_BOUNDARY_SHAVE);
    let mut candidates: Vec<Event> = Vec::new();
    for j in 0..p {
        if active[j] {
            continue;
        }
        let c_top = u[j] + lambda_top * t[j];
        for sign in [1.0f64, -1.0] {
            let den = band - sign * t[j];
            let sc = sign * c_top;
            if sc < inside_cut {
                if den > 0.0 {
                    let lambda = sign * u[j] / den;
                    if lambda > 0.0 && lambda < lambda_top {
                        candidates.push(Event {
                            lambda,
                            kind: EventKind::Enter {
                                index: j,
                                sign: sign as i8,
                            },
                        });
                    }
                }
            } else if sc <= audit_cut && den > 0.0 && just_changed != Some(j) {
                // Sitting on (or a hair past) the bound and moving outward
                // as lambda decreases: enters immediately.
                candidates.push(Event {
                    lambda: sitter_lambda,
                    kind: EventKind::Enter {
                        index: j,
                        sign: sign as i8,
                    },
                });
            }
        }
    }
    for (i, &k) in indices.iter().enumerate() {
        if b[i] == 0.0 {
            continue;
        }
        let root = a[i] / b[i];
        if !(root > 0.0 && root < lambda_top) {
            continue;
        }
        if just_changed == Some(k) && root >= lambda_top * (1.0 - tol::EVENT_REL_WINDOW) {
            // A variable that entered at lambda_top has its coefficient root
            // exactly there; rounding must not turn it into a leave.
            continue;
        }
        candidates.push(Event {
            lambda: root.min(sitter_lambda),
            kind: EventKind::Leave { index: k },
        });
    }
    let best_lambda = candidates
        .iter()
        .map(|e| e.lambda)
        .fold(f64::NEG_INFINITY, f64::max);
    if !best_lambda.is_finite() {
        return None;
    }
    let mut tied: Vec<Event> = candidates
        .into_iter()
        .filter(|e| e.lambda >= best_lambda - tie_tol)
        .collect();
    if tied.len() > 1 {
        let desc: Vec<String> = tied
            .iter()
            .map(|e| match e.kind {
                EventKind::Enter { index, sign } => {
                    format!("enter({index}, {sign:+}) at {:e}", e.lambda)
                }
                EventKind::Leave { index } => format!("leave({index}) at {:e}", e.lambda),
            })
            .collect();
        log::warn!(
            "simultaneous events near lambda = {:e}: {}; taking the smallest index",
            best_lambda,
            desc.join(", ")
        );
    }
    tied.sort_by_key(|e| e.kind.index());
    tied.into_iter().next()
}

/// Builds a [`SegmentState`] from an iterate's support and signs.
fn state_from_iterate(
    inst: &ProblemInstance,
    ws: &PathWorkspace,
    w: &Array1<f64>,
    zero_tol: f64,
) -> Result<Option<SegmentState>, LinalgError> {
    let mut indices = Vec::new();
    let mut signs = Vec::new();
    for j in 0..inst.p() {
        if w[j].abs() > zero_tol {
            indices.push(j);
            signs.push(w[j].signum());
        }
    }
    if indices.is_empty() {
        return Ok(None);
    }
    SegmentState::new(inst, ws, indices, signs).map(Some)
}

/// Traces the exact regularization path of `inst` from `lambda_max` down to
/// `options.lambda_min` (or until no further event exists).
///
/// The returned path stores one kink per segment: the first kink is
/// `(lambda_max, w = 0)`, each interior kink is anchored at an event lambda
/// and carries the active set and sign pattern of the segment above it, and
/// the final kink is a stop anchor inside the last segment. Coefficients
/// between consecutive kinks are exact linear interpolations of the stored
/// values.
///
/// Early stops (singular Gram system, kink budget, failed stationarity
/// audit) return [`PathError::Truncated`] carrying the valid prefix.
pub fn compute_exact_path(
    inst: &ProblemInstance,
    options: &HomotopyOptions,
) -> Result<RegularizationPath, PathError> {
    let p = inst.p();
    let lambda_min = options.lambda_min.unwrap_or(0.0);
    if !lambda_min.is_finite() || lambda_min < 0.0 {
        return Err(ModelError::InvalidInstance(format!(
            "lambda_min must be finite and nonnegative, got {lambda_min}"
        ))
        .into());
    }
    let max_kinks = options.max_kinks.unwrap_or(tol::MAX_KINKS_CAP).max(1);
    let ws = PathWorkspace::new(inst);
    let (lambda_max, j0) = inst.lambda_max_with_index();
    let mut kinks = vec![Kink {
        lambda: lambda_max,
        active_set: Vec::new(),
        values: Vec::new(),
        pattern: SignPattern::zeros(p),
        valid_until: None,
    }];
    if lambda_max <= lambda_min || lambda_max == 0.0 {
        return Ok(RegularizationPath {
            kind: PathKind::Exact,
            kinks,
            complete: true,
        });
    }
    let top_tie = options.event_tol.unwrap_or(tol::EVENT_TOL_FRACTION * lambda_max);
    for j in 0..p {
        if j != j0 && ws.q[j].abs() >= lambda_max - top_tie {
            log::warn!(
                "simultaneous events near lambda = {lambda_max:e}: variables {j0} and {j} \
                 reach the correlation bound together; taking the smallest index"
            );
        }
    }
    let truncated = |kinks: Vec<Kink>, reason: TruncationReason| PathError::Truncated {
        path: Box::new(RegularizationPath {
            kind: PathKind::Exact,
            kinks,
            complete: false,
        }),
        reason,
    };
    let mut state =
        match SegmentState::new(inst, &ws, vec![j0], vec![ws.q[j0].signum()]) {
            Ok(s) => s,
            Err(e) => return Err(truncated(kinks, singular_reason(e))),
        };
    let mut lambda_top = lambda_max;
    let mut just_changed = Some(j0);
    loop {
        let event = state.next_event(lambda_top, 1.0, options.event_tol, just_changed);
        let Some(event) = event else { break };
        if event.lambda <= lambda_min {
            break;
        }
        let violation = state.worst_inactive_violation(event.lambda, 1.0);
        if violation > tol::KKT_AUDIT_REL_TOL {
            return Err(truncated(
                kinks,
                TruncationReason::Precision {
                    lambda: event.lambda,
                    violation,
                },
            ));
        }
        let leaving = match event.kind {
            EventKind::Leave { index } => Some(index),
            EventKind::Enter { .. } => None,
        };
        kinks.push(state.record_kink(p, event.lambda, leaving));
        if kinks.len() >= max_kinks {
            return Err(truncated(kinks, TruncationReason::MaxKinks { limit: max_kinks }));
        }
        let applied = match event.kind {
            EventKind::Enter { index, sign } => state.enter(inst, &ws, index, f64::from(sign)),
            EventKind::Leave { index } => {
                if state.indices.len() == 1 {
                    // An empty active set below lambda_max contradicts
                    // stationarity; only numerical corruption gets here.
                    return Err(truncated(
                        kinks,
                        TruncationReason::Precision {
                            lambda: event.lambda,
                            violation: f64::INFINITY,
                        },
                    ));
                }
                let pos = state
                    .indices
                    .iter()
                    .position(|&k| k == index)
                    .expect("leave event names an active variable");
                state.leave(inst, &ws, pos)
            }
        };
        if let Err(e) = applied {
            return Err(truncated(kinks, singular_reason(e)));
        }
        lambda_top = event.lambda;
        just_changed = Some(event.kind.index());
    }
    let lambda_stop = if lambda_min > 0.0 {
        lambda_min
    } else {
        lambda_top / 2.0
    };
    let violation = state.worst_inactive_violation(lambda_stop, 1.0);
    if violation > tol::KKT_AUDIT_REL_TOL {
        return Err(truncated(
            kinks,
            TruncationReason::Precision {
                lambda: lambda_stop,
                violation,
            },
        ));
    }
    kinks.push(state.record_kink(p, lambda_stop, None));
    Ok(RegularizationPath {
        kind: PathKind::Exact,
        kinks,
        complete: true,
    })
}

fn singular_reason(e: LinalgError) -> TruncationReason {
    match e {
        LinalgError::Singular { condition } => TruncationReason::Singular { condition },
        _ => TruncationReason::Singular {
            condition: f64::INFINITY,
        },
    }
}

/// Derivative `dw/dlambda` of the path through the iterate `w` at `lambda`,
/// as a dense length-`p` vector (zero off the support).
///
/// The support and signs are read from `w` itself; entries with magnitude at
/// most `zero_tol` count as zero. An all-zero iterate has derivative zero.
pub fn path_direction(
    inst: &ProblemInstance,
    lambda: f64,
    w: &Array1<f64>,
    zero_tol: f64,
) -> Result<Array1<f64>, PathError> {
    check_query_lambda(lambda)?;
    check_iterate_len(inst, w)?;
    let ws = PathWorkspace::new(inst);
    let state = state_from_iterate(inst, &ws, w, zero_tol)?;
    let mut d = Array1::zeros(inst.p());
    if let Some(state) = state {
        for (i, &j) in state.indices.iter().enumerate() {
            d[j] = -state.b[i];
        }
    }
    Ok(d)
}

/// Next path event strictly below `lambda`, starting from the segment that
/// contains the iterate `w`. Returns `None` when the active set stays fixed
/// for all smaller lambdas.
pub fn next_event(
    inst: &ProblemInstance,
    lambda: f64,
    w: &Array1<f64>,
    zero_tol: f64,
) -> Result<Option<Event>, PathError> {
    check_query_lambda(lambda)?;
    check_iterate_len(inst, w)?;
    let ws = PathWorkspace::new(inst);
    match state_from_iterate(inst, &ws, w, zero_tol)? {
        Some(state) => Ok(state.next_event(lambda, 1.0, None, None)),
        None => {
            // Zero iterate: the first entering variable defines the event.
            let (lambda_max, j0) = inst.lambda_max_with_index();
            if lambda_max < lambda && lambda_max > 0.0 {
                Ok(Some(Event {
                    lambda: lambda_max,
                    kind: EventKind::Enter {
                        index: j0,
                        sign: ws.q[j0].signum() as i8,
                    },
                }))
            } else {
                Ok(None)
            }
        }
    }
}

/// Evaluates a path at an arbitrary `lambda` in its covered range.
///
/// Exact paths interpolate linearly between the two bracketing kinks (this is
/// exact, since the path is affine between events). On approximate paths the
/// bracketing records either form a constant hold (the upper record's
/// `valid_until` reaches `lambda`, after a shrink-and-resolve step) or a
/// homotopy ride, which interpolates linearly just like an exact segment.
/// Lambdas above `lambda_max` evaluate to the zero vector; lambdas below the
/// last record are [`PathError::OutOfRange`].
pub fn interpolate(path: &RegularizationPath, lambda: f64) -> Result<Array1<f64>, PathError> {
    if path.kinks.is_empty() {
        return Err(ModelError::InvalidInstance("path has no kinks".into()).into());
    }
    check_query_lambda(lambda)?;
    let p = path.p();
    let last = path.lambda_last();
    if lambda < last {
        return Err(PathError::OutOfRange {
            lambda,
            lambda_lo: last,
            lambda_hi: f64::INFINITY,
        });
    }
    // Kinks are sorted by strictly decreasing lambda; `count` records sit at
    // or above the query.
    let count = path.kinks.partition_point(|k| k.lambda >= lambda);
    if count == 0 {
        return Ok(Array1::zeros(p));
    }
    let hi = &path.kinks[count - 1];
    if count == path.kinks.len() || lambda >= hi.lambda {
        return Ok(hi.dense(p));
    }
    let lo = &path.kinks[count];
    if let PathKind::Approximate { .. } = path.kind {
        if hi.valid_until.is_some_and(|v| v <= lambda) {
            return Ok(hi.dense(p));
        }
    }
    let span = hi.lambda - lo.lambda;
    if span <= 0.0 {
        return Ok(lo.dense(p));
    }
    let theta = (lambda - lo.lambda) / span;
    Ok(&hi.dense(p) * theta + &lo.dense(p) * (1.0 - theta))
}

fn check_query_lambda(lambda: f64) -> Result<(), PathError> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(ModelError::InvalidInstance(format!(
            "lambda must be finite and positive, got {lambda}"
        ))
        .into());
    }
    Ok(())
}

fn check_iterate_len(inst: &ProblemInstance, w: &Array1<f64>) -> Result<(), PathError> {
    if w.len() != inst.p() {
        return Err(ModelError::DimensionMismatch {
            what: "iterate length",
            expected: inst.p(),
            actual: w.len(),
        }
        .into());
    }
    Ok(())
}
