//! Extended-precision exact homotopy for instances whose event lambdas span
//! more orders of magnitude than double precision can certify.
//!
//! The worst-case instances of [`crate::adversarial`] shrink their smallest
//! event lambda by one to two orders of magnitude per appended column while
//! the data stays of order one. Inactive correlations along such a path are
//! differences of order-one quantities that cancel down to the current
//! lambda, so their double-precision rounding error is a fixed absolute
//! amount near 1e-16; once lambda approaches 1e-12 the standard engine can
//! no longer tell a genuine boundary crossing from noise and truncates.
//! This engine reruns the same homotopy with double-double scalars (about
//! 32 significant digits), which moves that floor to lambdas near 1e-17 —
//! enough to resolve the instances double precision can still *represent*.
//!
//! Accuracy, not speed, is the point of this tier: the active Gram system is
//! refactored from scratch at every event instead of being updated, and all
//! segment coefficients are kept in double-double form until the moment a
//! kink is recorded. Recorded kinks are ordinary `f64` [`Kink`]s; if two
//! adjacent events are so close that they collapse onto the same double, the
//! path is truncated with a precision report rather than silently merged.

use twofloat::TwoFloat;

use crate::homotopy::{EventKind, HomotopyOptions, PathError, TruncationReason};
use crate::model::{Kink, ModelError, PathKind, ProblemInstance, RegularizationPath, SignPattern};
use crate::tol;

/// `X' X` and `X' y` accumulated in double-double from the exact `f64`
/// entries of the instance.
struct DdWorkspace {
    p: usize,
    q: Vec<TwoFloat>,
    /// Row-major `p x p` Gram matrix.
    gram: Vec<TwoFloat>,
}

impl DdWorkspace {
    fn new(inst: &ProblemInstance) -> Self {
        let (n, p) = (inst.n(), inst.p());
        let x = inst.x();
        let y = inst.y();
        let zero = TwoFloat::from(0.0);
        let mut q = vec![zero; p];
        let mut gram = vec![zero; p * p];
        for j in 0..p {
            let mut acc = zero;
            for r in 0..n {
                acc += TwoFloat::new_mul(x[[r, j]], y[r]);
            }
            q[j] = acc;
        }
        for a in 0..p {
            for b in 0..=a {
                let mut acc = zero;
                for r in 0..n {
                    acc += TwoFloat::new_mul(x[[r, a]], x[[r, b]]);
                }
                gram[a * p + b] = acc;
                gram[b * p + a] = acc;
            }
        }
        Self { p, q, gram }
    }

    fn g(&self, i: usize, j: usize) -> TwoFloat {
        self.gram[i * self.p + j]
    }

    /// Largest `|q_j|` and the smallest index attaining it.
    fn lambda_max_with_index(&self) -> (TwoFloat, usize) {
        let mut best = self.q[0].abs();
        let mut idx = 0;
        for (j, qj) in self.q.iter().enumerate().skip(1) {
            let a = qj.abs();
            if a > best {
                best = a;
                idx = j;
            }
        }
        (best, idx)
    }
}

/// One candidate event with its lambda still in double-double form.
struct DdEvent {
    lambda: TwoFloat,
    kind: EventKind,
}

/// Double-double analogue of the segment state: active set, signs, the
/// equilibrated Cholesky factor, and the affine coefficients of
/// `w_J(lambda) = a - lambda b`, `c_j(lambda) = u_j + lambda t_j`.
struct DdState {
    indices: Vec<usize>,
    signs: Vec<f64>,
    active: Vec<bool>,
    /// Column norms of the active columns, for diagonal equilibration.
    scale: Vec<TwoFloat>,
    /// Row-major `m x m` lower Cholesky factor of the equilibrated block.
    l: Vec<TwoFloat>,
    a: Vec<TwoFloat>,
    b: Vec<TwoFloat>,
    u: Vec<TwoFloat>,
    t: Vec<TwoFloat>,
}

impl DdState {
    fn build(
        ws: &DdWorkspace,
        n_rows: usize,
        indices: Vec<usize>,
        signs: Vec<f64>,
    ) -> Result<Self, TruncationReason> {
        debug_assert_eq!(indices.len(), signs.len());
        let mut active = vec![false; ws.p];
        for &j in &indices {
            active[j] = true;
        }
        let mut state = Self {
            indices,
            signs,
            active,
            scale: Vec::new(),
            l: Vec::new(),
            a: Vec::new(),
            b: Vec::new(),
            u: Vec::new(),
            t: Vec::new(),
        };
        state.refactor(ws, n_rows)?;
        Ok(state)
    }

    fn enter(&mut self, ws: &DdWorkspace, n_rows: usize, j: usize, sign: f64) -> Result<(), TruncationReason> {
        self.indices.push(j);
        self.signs.push(sign);
        self.active[j] = true;
        self.refactor(ws, n_rows)
    }

    fn leave(&mut self, ws: &DdWorkspace, n_rows: usize, pos: usize) -> Result<(), TruncationReason> {
        let var = self.indices.remove(pos);
        self.signs.remove(pos);
        self.active[var] = false;
        self.refactor(ws, n_rows)
    }

    /// From-scratch factorization of the equilibrated active Gram block,
    /// followed by recomputation of `a`, `b`, `u`, `t`.
    fn refactor(&mut self, ws: &DdWorkspace, n_rows: usize) -> Result<(), TruncationReason> {
        let m = self.indices.len();
        debug_assert!(m > 0);
        if m > n_rows {
            // Rank cannot exceed the number of rows.
            return Err(singular(f64::INFINITY));
        }
        let scale: Vec<TwoFloat> = self.indices.iter().map(|&j| ws.g(j, j).sqrt()).collect();
        let mut block = vec![TwoFloat::from(0.0); m * m];
        for a in 0..m {
            block[a * m + a] = TwoFloat::from(1.0);
            for b in 0..a {
                let v = dd_div(ws.g(self.indices[a], self.indices[b]), scale[a] * scale[b]);
                block[a * m + b] = v;
                block[b * m + a] = v;
            }
        }
        let l = dd_cholesky(&block, m).ok_or_else(|| singular(f64::INFINITY))?;
        let mut min_diag = f64::INFINITY;
        for i in 0..m {
            min_diag = min_diag.min(f64::from(l[i * m + i]));
        }
        // `1 / min_diag^2` lower-bounds the condition number of the
        // equilibrated block (its largest eigenvalue is at least one), so
        // this guard only fires on genuine near-collinearity.
        let condition = 1.0 / (min_diag * min_diag);
        if condition > tol::DD_CONDITION_LIMIT {
            return Err(singular(condition));
        }
        self.scale = scale;
        self.l = l;
        self.refresh(ws);
        Ok(())
    }

    fn refresh(&mut self, ws: &DdWorkspace) {
        let rhs: Vec<TwoFloat> = self.indices.iter().map(|&j| ws.q[j]).collect();
        self.a = self.solve(&rhs);
        let srhs: Vec<TwoFloat> = self.signs.iter().map(|&s| TwoFloat::from(s)).collect();
        self.b = self.solve(&srhs);
        self.u = (0..ws.p)
            .map(|j| {
                let mut acc = ws.q[j];
                for (i, &k) in self.indices.iter().enumerate() {
                    acc -= ws.g(j, k) * self.a[i];
                }
                acc
            })
            .collect();
        self.t = (0..ws.p)
            .map(|j| {
                let mut acc = TwoFloat::from(0.0);
                for (i, &k) in self.indices.iter().enumerate() {
                    acc += ws.g(j, k) * self.b[i];
                }
                acc
            })
            .collect();
    }

    /// Solves `(X_J' X_J) v = rhs` through the equilibrated factor.
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, rhs: &[TwoFloat]) -> Vec<TwoFloat> {
        let m = rhs.len();
        debug_assert_eq!(m, self.indices.len());
        let mut z: Vec<TwoFloat> = rhs
            .iter()
            .zip(&self.scale)
            .map(|(r, s)| dd_div(*r, *s))
            .collect();
        for i in 0..m {
            let mut sum = z[i];
            for k in 0..i {
                sum -= self.l[i * m + k] * z[k];
            }
            z[i] = dd_div(sum, self.l[i * m + i]);
        }
        for i in (0..m).rev() {
            let mut sum = z[i];
            for k in i + 1..m {
                sum -= self.l[k * m + i] * z[k];
            }
            z[i] = dd_div(sum, self.l[i * m + i]);
        }
        z.iter().zip(&self.scale).map(|(v, s)| dd_div(*v, *s)).collect()
    }

    /// Next event strictly below `lambda_top`, with the same selection rules
    /// as the double-precision scan but windows sized for double-double
    /// noise.
    fn scan(
        &self,
        lambda_top: TwoFloat,
        event_tol: Option<f64>,
        just_changed: Option<usize>,
    ) -> Option<DdEvent> {
        let tie_tol = match event_tol {
            Some(v) => TwoFloat::from(v),
            None => lambda_top * tol::DD_EVENT_TOL_FRACTION,
        };
        // The windows are narrower than an ulp of 1.0, so the cuts must be
        // formed as double-double offsets: `1.0 - 1e-18` would round back to
        // one and erase them.
        let inside_cut = lambda_top - lambda_top * tol::DD_EVENT_REL_WINDOW;
        let audit_cut = lambda_top * (1.0 + tol::DD_KKT_AUDIT_REL_TOL);
        let sitter_lambda = lambda_top - lambda_top * tol::DD_ENTER_BOUNDARY_SHAVE;
        let mut candidates: Vec<DdEvent> = Vec::new();
        for j in 0..self.active.len() {
            if self.active[j] {
                continue;
            }
            let c_top = self.u[j] + lambda_top * self.t[j];
            for sign in [1.0f64, -1.0] {
                let den = 1.0 - self.t[j] * sign;
                let sc = c_top * sign;
                if sc < inside_cut {
                    if den > 0.0 {
                        let lambda = dd_div(self.u[j] * sign, den);
                        if lambda > 0.0 && lambda < lambda_top {
                            candidates.push(DdEvent {
                                lambda,
                                kind: EventKind::Enter {
                                    index: j,
                                    sign: sign as i8,
                                },
                            });
                        }
                    }
                } else if sc <= audit_cut && den > 0.0 && just_changed != Some(j) {
                    // Sitting on (or a hair past) the bound and moving
                    // outward as lambda decreases: enters immediately. The
                    // crossing itself is still well conditioned, so prefer
                    // the computed root and fall back to a shave below the
                    // kink only when the root rounds onto or above it.
                    let root = dd_div(self.u[j] * sign, den);
                    let lambda = if root > 0.0 && root < lambda_top {
                        root
                    } else {
                        sitter_lambda
                    };
                    candidates.push(DdEvent {
                        lambda,
                        kind: EventKind::Enter {
                            index: j,
                            sign: sign as i8,
                        },
                    });
                }
            }
        }
        for (i, &k) in self.indices.iter().enumerate() {
            if self.b[i] == 0.0 {
                continue;
            }
            let root = dd_div(self.a[i], self.b[i]);
            if !(root > 0.0 && root < lambda_top) {
                continue;
            }
            if just_changed == Some(k) && root >= inside_cut {
                // A variable that entered at lambda_top has its coefficient
                // root exactly there; rounding must not turn it into a leave.
                continue;
            }
            candidates.push(DdEvent {
                lambda: root,
                kind: EventKind::Leave { index: k },
            });
        }
        let mut best: Option<TwoFloat> = None;
        for e in &candidates {
            if best.is_none_or(|b| e.lambda > b) {
                best = Some(e.lambda);
            }
        }
        let best = best?;
        let mut tied: Vec<DdEvent> = candidates
            .into_iter()
            .filter(|e| e.lambda >= best - tie_tol)
            .collect();
        if tied.len() > 1 {
            let desc: Vec<String> = tied
                .iter()
                .map(|e| match e.kind {
                    EventKind::Enter { index, sign } => {
                        format!("enter({index}, {sign:+}) at {:e}", f64::from(e.lambda))
                    }
                    EventKind::Leave { index } => {
                        format!("leave({index}) at {:e}", f64::from(e.lambda))
                    }
                })
                .collect();
            log::warn!(
                "simultaneous events near lambda = {:e}: {}; taking the smallest index",
                f64::from(best),
                desc.join(", ")
            );
        }
        tied.sort_by_key(|e| e.kind.index());
        tied.into_iter().next()
    }

    /// Largest relative stationarity violation among inactive variables at
    /// `lambda`.
    fn worst_inactive_violation(&self, lambda: TwoFloat) -> TwoFloat {
        let mut worst = TwoFloat::from(0.0);
        for j in 0..self.u.len() {
            if self.active[j] {
                continue;
            }
            let c = self.u[j] + lambda * self.t[j];
            let v = dd_div(c.abs() - lambda, lambda);
            if v > worst {
                worst = v;
            }
        }
        worst
    }

    /// Records the kink terminating the current segment at `lambda`,
    /// rounding to `f64`. For a leave event the departing coefficient is
    /// stored as exactly zero.
    fn record_kink(&self, p: usize, lambda: TwoFloat, leaving: Option<usize>) -> Kink {
        let mut entries: Vec<(usize, f64, f64)> = self
            .indices
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                let v = if leaving == Some(j) {
                    0.0
                } else {
                    f64::from(self.a[i] - lambda * self.b[i])
                };
                (j, v, self.signs[i])
            })
            .collect();
        entries.sort_by_key(|&(j, _, _)| j);
        let mut pattern = vec![0i8; p];
        for &(j, _, s) in &entries {
            pattern[j] = s as i8;
        }
        Kink {
            lambda: f64::from(lambda),
            active_set: entries.iter().map(|&(j, _, _)| j).collect(),
            values: entries.iter().map(|&(_, v, _)| v).collect(),
            pattern: SignPattern::new(pattern).expect("segment signs are in {-1, 0, 1}"),
            valid_until: None,
        }
    }
}

fn singular(condition: f64) -> TruncationReason {
    TruncationReason::Singular { condition }
}

/// Full-accuracy double-double division.
///
/// The `TwoFloat / TwoFloat` operator computes its reciprocal residual
/// without a fused multiply-add, which caps the quotient at ordinary double
/// accuracy — three hundred times too coarse for the audits in this module.
/// This helper instead divides by the high word (that path is exact long
/// division) and repairs the low word with one Newton step; the residual is
/// formed with exact double-double products, so the result is accurate to
/// roundly 1e-31 relative.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q0 = a / b.hi();
    let r = a - q0 * b;
    q0 + r / b.hi()
}

/// Plain lower-triangular Cholesky in double-double; `None` when a pivot is
/// not strictly positive.
fn dd_cholesky(a: &[TwoFloat], m: usize) -> Option<Vec<TwoFloat>> {
    let mut l = vec![TwoFloat::from(0.0); m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut sum = a[i * m + j];
            for k in 0..j {
                sum -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if !(sum > 0.0) || !f64::from(sum).is_finite() {
                    return None;
                }
                l[i * m + i] = sum.sqrt();
            } else {
                l[i * m + j] = dd_div(sum, l[j * m + j]);
            }
        }
    }
    Some(l)
}

/// Traces the exact regularization path of `inst` with double-double
/// arithmetic. Same contract and record layout as
/// [`crate::homotopy::compute_exact_path`]; only the precision differs.
///
/// Use this engine when event lambdas decay far below the scale of the data,
/// as on the deeper worst-case instances, where the double-precision engine
/// truncates with a stationarity-audit failure. It is several times slower
/// per event and rebuilds its factorization at every step, which is
/// irrelevant at the problem sizes (tens of columns) where it is needed.
pub fn compute_exact_path_extended(
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
    let ws = DdWorkspace::new(inst);
    let (lambda_max, j0) = ws.lambda_max_with_index();
    let mut kinks = vec![Kink {
        lambda: f64::from(lambda_max),
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
    let top_tie = match options.event_tol {
        Some(v) => TwoFloat::from(v),
        None => lambda_max * tol::DD_EVENT_TOL_FRACTION,
    };
    for j in 0..p {
        if j != j0 && ws.q[j].abs() >= lambda_max - top_tie {
            log::warn!(
                "simultaneous events near lambda = {:e}: variables {j0} and {j} reach the \
                 correlation bound together; taking the smallest index",
                f64::from(lambda_max)
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
    let sign0 = if ws.q[j0] >= 0.0 { 1.0 } else { -1.0 };
    let mut state = match DdState::build(&ws, inst.n(), vec![j0], vec![sign0]) {
        Ok(s) => s,
        Err(r) => return Err(truncated(kinks, r)),
    };
    let mut lambda_top = lambda_max;
    let mut just_changed = Some(j0);
    while let Some(event) = state.scan(lambda_top, options.event_tol, just_changed) {
        if event.lambda <= lambda_min {
            break;
        }
        let violation = state.worst_inactive_violation(event.lambda);
        if violation > tol::DD_KKT_AUDIT_REL_TOL {
            return Err(truncated(
                kinks,
                TruncationReason::Precision {
                    lambda: f64::from(event.lambda),
                    violation: f64::from(violation),
                },
            ));
        }
        let lambda_f = f64::from(event.lambda);
        if lambda_f >= kinks.last().expect("at least the top record").lambda {
            // Adjacent events collapse onto one double: the remaining
            // records cannot be represented faithfully.
            return Err(truncated(
                kinks,
                TruncationReason::Precision {
                    lambda: lambda_f,
                    violation: f64::EPSILON,
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
            EventKind::Enter { index, sign } => {
                state.enter(&ws, inst.n(), index, f64::from(sign))
            }
            EventKind::Leave { index } => {
                if state.indices.len() == 1 {
                    // An empty active set below lambda_max contradicts
                    // stationarity; only numerical corruption gets here.
                    return Err(truncated(
                        kinks,
                        TruncationReason::Precision {
                            lambda: f64::from(event.lambda),
                            violation: f64::INFINITY,
                        },
                    ));
                }
                let pos = state
                    .indices
                    .iter()
                    .position(|&k| k == index)
                    .expect("leave event names an active variable");
                state.leave(&ws, inst.n(), pos)
            }
        };
        if let Err(r) = applied {
            return Err(truncated(kinks, r));
        }
        lambda_top = event.lambda;
        just_changed = Some(event.kind.index());
    }
    let lambda_stop = if lambda_min > 0.0 {
        TwoFloat::from(lambda_min)
    } else {
        lambda_top * 0.5
    };
    let violation = state.worst_inactive_violation(lambda_stop);
    if violation > tol::DD_KKT_AUDIT_REL_TOL {
        return Err(truncated(
            kinks,
            TruncationReason::Precision {
                lambda: f64::from(lambda_stop),
                violation: f64::from(violation),
            },
        ));
    }
    if f64::from(lambda_stop) >= kinks.last().expect("at least the top record").lambda {
        return Err(truncated(
            kinks,
            TruncationReason::Precision {
                lambda: f64::from(lambda_stop),
                violation: f64::EPSILON,
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::gen_pathological;
    use crate::homotopy::compute_exact_path;
    use approx::assert_abs_diff_eq;
    use ndarray::{arr1, arr2};

    #[test]
    fn division_helper_is_double_double_accurate() {
        let pairs = [
            (TwoFloat::new_div(1.0, 3.0), TwoFloat::new_add(2.33957952e9, 2.355e-7)),
            (TwoFloat::new_mul(1.1e-11, 0.37), TwoFloat::new_add(1.0, 1.1e-17)),
            (TwoFloat::new_add(-3.4482e-2, 5.8e-19), TwoFloat::new_add(7.0, -3.0e-17)),
            (TwoFloat::from(1.0), TwoFloat::new_div(-1.0, 7.0)),
        ];
        for (a, b) in pairs {
            let q = dd_div(a, b);
            let residual = q * b - a;
            let bound = 1e-30 * f64::from(a.abs());
            assert!(
                f64::from(residual.abs()) <= bound,
                "residual {:e} exceeds {:e} for a = {:?}, b = {:?}",
                f64::from(residual.abs()),
                bound,
                a,
                b
            );
        }
    }

    fn two_var_instance() -> ProblemInstance {
        let y = arr1(&[1.0, 1.0]);
        let x = arr2(&[[1.0, 1.0 / 3.0], [0.0, 1.0 / 6.0]]);
        ProblemInstance::new(y, x).unwrap()
    }

    fn orthonormal_instance() -> ProblemInstance {
        let y = arr1(&[3.0, -2.0, 1.0]);
        let x = arr2(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        ProblemInstance::new(y, x).unwrap()
    }

    #[test]
    fn matches_the_hand_computed_two_variable_path() {
        let path = compute_exact_path_extended(&two_var_instance(), &HomotopyOptions::default())
            .unwrap();
        assert!(path.complete);
        assert_eq!(path.kinks.len(), 5);
        let lambdas: Vec<f64> = path.kinks.iter().map(|k| k.lambda).collect();
        assert_abs_diff_eq!(lambdas[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambdas[1], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(lambdas[2], 1.0 / 7.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambdas[3], 1.0 / 17.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambdas[4], 0.5 / 17.0, epsilon = 1e-15);
        assert_eq!(path.kinks[2].values[0], 0.0);
        assert_abs_diff_eq!(path.kinks[2].values[1], 18.0 / 7.0, epsilon = 1e-14);
    }

    #[test]
    fn orthonormal_design_soft_thresholds() {
        let path = compute_exact_path_extended(&orthonormal_instance(), &HomotopyOptions::default())
            .unwrap();
        assert!(path.complete);
        let lambdas: Vec<f64> = path.kinks.iter().map(|k| k.lambda).collect();
        assert_eq!(path.kinks.len(), 4);
        assert_abs_diff_eq!(lambdas[0], 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambdas[1], 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambdas[2], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(lambdas[3], 0.5, epsilon = 1e-15);
        assert_eq!(path.kinks[2].pattern.as_slice(), &[1, -1, 0]);
    }

    #[test]
    fn agrees_with_the_double_precision_engine() {
        let inst = ProblemInstance::gaussian(20, 6, 5).unwrap();
        let fast = compute_exact_path(&inst, &HomotopyOptions::default()).unwrap();
        let exact = compute_exact_path_extended(&inst, &HomotopyOptions::default()).unwrap();
        assert_eq!(fast.kinks.len(), exact.kinks.len());
        for (f, e) in fast.kinks.iter().zip(&exact.kinks) {
            assert_abs_diff_eq!(f.lambda, e.lambda, epsilon = 1e-9 * e.lambda.max(1e-300));
            assert_eq!(f.pattern, e.pattern);
            for (vf, ve) in f.values.iter().zip(&e.values) {
                assert_abs_diff_eq!(vf, ve, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn resolves_depths_beyond_double_precision() {
        let inst = gen_pathological(9).unwrap();
        let fast = compute_exact_path(&inst, &HomotopyOptions::default());
        assert!(
            matches!(fast, Err(PathError::Truncated { .. })),
            "double precision is expected to exhaust at p = 9"
        );
        let path = compute_exact_path_extended(&inst, &HomotopyOptions::default()).unwrap();
        assert!(path.complete);
        assert_eq!(path.kinks.len(), (usize::pow(3, 9) + 1) / 2);
        for pair in path.kinks.windows(2) {
            assert!(pair[1].lambda < pair[0].lambda);
        }
    }

    #[test]
    fn lambda_min_stops_inside_a_segment() {
        let options = HomotopyOptions {
            lambda_min: Some(1.5),
            ..HomotopyOptions::default()
        };
        let path = compute_exact_path_extended(&orthonormal_instance(), &options).unwrap();
        assert!(path.complete);
        assert_eq!(path.kinks.len(), 3);
        assert_abs_diff_eq!(path.lambda_last(), 1.5);
        assert_abs_diff_eq!(path.kinks[2].values[0], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(path.kinks[2].values[1], -0.5, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_lambda_min_above_lambda_max() {
        let options = HomotopyOptions {
            lambda_min: Some(10.0),
            ..HomotopyOptions::default()
        };
        let path = compute_exact_path_extended(&orthonormal_instance(), &options).unwrap();
        assert!(path.complete);
        assert_eq!(path.kinks.len(), 1);
        assert!(path.kinks[0].pattern.is_all_zero());
    }

    #[test]
    fn max_kinks_truncates_with_partial_path() {
        let options = HomotopyOptions {
            max_kinks: Some(2),
            ..HomotopyOptions::default()
        };
        let err = compute_exact_path_extended(&orthonormal_instance(), &options).unwrap_err();
        match err {
            PathError::Truncated { path, reason } => {
                assert_eq!(reason, TruncationReason::MaxKinks { limit: 2 });
                assert!(!path.complete);
                assert_eq!(path.kinks.len(), 2);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }
}

