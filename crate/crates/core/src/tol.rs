//! Numerical tolerances and limits used across the crate.
//!
//! Every hard-coded threshold lives here so that the trade-offs are
//! documented in one place. Values are chosen for dense `f64` problems at
//! desk scale; they are deliberately conservative rather than tight.

/// Absolute magnitude below which a coefficient counts as zero when a sign
/// pattern is derived from a weight vector.
pub const SIGN_ZERO_TOL: f64 = 1e-10;

/// Relative slack accepted on the dual feasibility test
/// `||X' kappa||_inf <= lambda * (1 + DUAL_FEASIBILITY_SLACK)`.
/// Covers roundoff in the max-correlation reduction without letting a
/// materially infeasible dual point through.
pub const DUAL_FEASIBILITY_SLACK: f64 = 1e-10;

/// A computed duality gap may round below zero by at most
/// `GAP_NEGATIVE_SLACK * max(1, f)`; anything more negative indicates a bug.
pub const GAP_NEGATIVE_SLACK: f64 = 1e-10;

/// Condition-number estimate (of the diagonally equilibrated active Gram
/// matrix) above which a factorization is refused. The equilibrated matrix
/// has unit diagonal, so this measures genuine near-collinearity of the
/// active columns rather than benign differences in column scale.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Default path floor as a fraction of `lambda_max`.
pub const LAMBDA_MIN_FRACTION: f64 = 1e-10;

/// Default spacing (as a fraction of `lambda_max`) under which two candidate
/// events are reported as simultaneous.
pub const EVENT_TOL_FRACTION: f64 = 1e-12;

/// Hard cap on the number of kinks recorded by a single path computation.
pub const MAX_KINKS_CAP: usize = 10_000_000;

/// Relative window below the current lambda within which no new event is
/// accepted. Protects against a variable that just entered (or just left)
/// the active set immediately re-triggering on floating-point noise. Kinks
/// of interest are separated by far more than this in relative terms.
pub const EVENT_REL_WINDOW: f64 = 1e-9;

/// Relative shave applied to the inflated entering boundary of the
/// approximate homotopy so that recorded iterates satisfy the optimality
/// band inequalities strictly rather than at floating-point equality.
pub const ENTER_BOUNDARY_SHAVE: f64 = 1e-12;

/// Inactive correlations are audited at every recorded kink; exceeding the
/// boundary by more than this relative amount truncates the path rather
/// than letting a silently wrong path escape.
pub const KKT_AUDIT_REL_TOL: f64 = 1e-6;

/// Recorded kinks of an exact path must satisfy the stationarity conditions
/// within `KKT_RECORD_FRACTION * lambda_max`.
pub const KKT_RECORD_FRACTION: f64 = 1e-8;

/// Rebuild the incremental Cholesky factor from scratch after this many
/// active-set changes to cap drift on very long paths.
pub const GRAM_REFRESH_INTERVAL: usize = 64;

/// Full residual recomputation interval (in sweeps) for coordinate descent.
pub const CD_RESIDUAL_REFRESH_SWEEPS: usize = 1000;

/// Verification declares a path epsilon-approximate when the worst sampled
/// relative gap is at most `epsilon + VERIFY_GAP_SLACK` plus the roundoff
/// floor below.
pub const VERIFY_GAP_SLACK: f64 = 1e-12;

/// Gap certification evaluates correlations that cancel from the
/// `lambda_max` scale down to the sample lambda, so a computed relative gap
/// carries noise near `epsilon_machine * lambda_max / lambda` no matter how
/// exact the path is. Samples are allowed this many multiples of that floor.
pub const VERIFY_ROUNDOFF_FACTOR: f64 = 16.0;

/// Snap tolerance for near-integer values inside ceiled iteration bounds,
/// relative to the value itself. Guards `ceil` against arguments that are
/// mathematically integral but land a few ulps high.
pub const CEIL_INTEGER_SNAP: f64 = 1e-9;

// Counterparts of the event-scan windows for the extended-precision segment
// engine. Event roots come out of double-double arithmetic with relative
// error far below 1e-20, while the tightest genuinely distinct events the
// self-similar worst-case family produces before double precision gives out
// sit a few times 1e-16 apart in relative terms (the spacing contracts by
// roughly the same factor as the kink scale itself: about 4e-11 at depth 8,
// 1e-12 at depth 9, and so on). The windows below live in the gap between
// those two scales: wide enough that arithmetic noise can never re-trigger a
// just-processed event, and narrow enough that a boundary event processed a
// shave below the current kink cannot leapfrog a real neighbor.

/// Extended-precision analogue of [`EVENT_REL_WINDOW`].
pub const DD_EVENT_REL_WINDOW: f64 = 1e-18;

/// Extended-precision analogue of [`ENTER_BOUNDARY_SHAVE`].
pub const DD_ENTER_BOUNDARY_SHAVE: f64 = 1e-18;

/// Extended-precision analogue of [`KKT_AUDIT_REL_TOL`].
pub const DD_KKT_AUDIT_REL_TOL: f64 = 1e-8;

/// Extended-precision analogue of [`EVENT_TOL_FRACTION`].
pub const DD_EVENT_TOL_FRACTION: f64 = 1e-20;

/// Condition guard for the extended-precision factorization. Mirrors
/// [`CONDITION_LIMIT`] at double-double accuracy: refusal only begins where
/// even ~32 significant digits would leave fewer than half of them in the
/// solution.
pub const DD_CONDITION_LIMIT: f64 = 1e24;
