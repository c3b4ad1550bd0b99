//! Problem data, path data structures, and optimality machinery.
//!
//! The primal objective is `f(w) = 0.5 * ||y - X w||^2 + lambda * ||w||_1`
//! and the associated dual, in terms of `kappa` with `X' kappa` constrained
//! to the `lambda` box, is `g(kappa) = -0.5 * kappa' kappa - kappa' y` over
//! `||X' kappa||_inf <= lambda`. For any feasible pair the duality gap
//! `f(w) - g(kappa)` is nonnegative and certifies suboptimality of `w`.
//!
//! A solution `w` is exactly optimal at `lambda` iff the correlations
//! `c = X' (y - X w)` satisfy `c_j = lambda * sign(w_j)` on the support and
//! `|c_j| <= lambda` off it. The relaxed band used by approximate solvers
//! replaces those equalities with
//! `lambda * (1 - eps2) <= c_j * sign(w_j) <= lambda * (1 + eps1)` on the
//! support and `|c_j| <= lambda * (1 + eps1)` off it.

use ndarray::{Array1, Array2, ArrayView1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::tol;

/// Errors produced by instance construction and the optimality operations.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error(
        "invalid epsilon pair ({epsilon1}, {epsilon2}): need epsilon1 >= 0 and epsilon2 >= -epsilon1"
    )]
    InvalidEpsilon { epsilon1: f64, epsilon2: f64 },
    #[error(
        "dual point infeasible at lambda = {lambda}: ||X' kappa||_inf = {attained} exceeds {bound}"
    )]
    InfeasibleDual {
        lambda: f64,
        attained: f64,
        bound: f64,
    },
    #[error("sign pattern entry {value} at index {index} is not in {{-1, 0, +1}}")]
    InvalidPatternEntry { index: usize, value: i8 },
}

/// A dense Lasso instance: responses `y` (length `n`), design `X`
/// (`n x p`, column access), and cached squared column norms.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    y: Array1<f64>,
    x: Array2<f64>,
    column_norms_sq: Vec<f64>,
}

impl ProblemInstance {
    /// Builds an instance, validating that dimensions agree, all entries are
    /// finite, and no column of `X` is identically zero.
    pub fn new(y: Array1<f64>, x: Array2<f64>) -> Result<Self, ModelError> {
        let n = x.nrows();
        let p = x.ncols();
        if n == 0 || p == 0 {
            return Err(ModelError::InvalidInstance(
                "X must have at least one row and one column".into(),
            ));
        }
        if y.len() != n {
            return Err(ModelError::DimensionMismatch {
                what: "y",
                expected: n,
                actual: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) || x.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::InvalidInstance(
                "all entries of y and X must be finite".into(),
            ));
        }
        let column_norms_sq: Vec<f64> = (0..p).map(|j| x.column(j).dot(&x.column(j))).collect();
        if let Some(j) = column_norms_sq.iter().position(|&s| s == 0.0) {
            return Err(ModelError::InvalidInstance(format!(
                "column {j} of X is identically zero"
            )));
        }
        Ok(Self {
            y,
            x,
            column_norms_sq,
        })
    }

    /// Draws an `n x p` instance with i.i.d. standard normal entries in both
    /// `X` and `y`. Deterministic in `seed`.
    pub fn gaussian(n: usize, p: usize, seed: u64) -> Result<Self, ModelError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = StandardNormal;
        let x = Array2::from_shape_fn((n, p), |_| normal.sample(&mut rng));
        let y = Array1::from_shape_fn(n, |_| normal.sample(&mut rng));
        Self::new(y, x)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn y(&self) -> &Array1<f64> {
        &self.y
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn column(&self, j: usize) -> ArrayView1<'_, f64> {
        self.x.column(j)
    }

    /// Cached `||x_j||^2`.
    pub fn column_norm_sq(&self, j: usize) -> f64 {
        self.column_norms_sq[j]
    }

    /// `X' y`.
    pub fn xty(&self) -> Array1<f64> {
        self.x.t().dot(&self.y)
    }

    /// `lambda_max = ||X' y||_inf`, the smallest lambda whose solution is 0,
    /// together with the smallest attaining column index.
    pub fn lambda_max_with_index(&self) -> (f64, usize) {
        let q = self.xty();
        let mut best = 0usize;
        let mut best_val = f64::NEG_INFINITY;
        for (j, v) in q.iter().enumerate() {
            if v.abs() > best_val {
                best_val = v.abs();
                best = j;
            }
        }
        (best_val, best)
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max_with_index().0
    }

    /// Residual `y - X w`.
    pub fn residual(&self, w: &Array1<f64>) -> Array1<f64> {
        assert_eq!(w.len(), self.p(), "w must have length p");
        &self.y - &self.x.dot(w)
    }

    /// Correlations `X' (y - X w)`.
    pub fn correlations(&self, w: &Array1<f64>) -> Array1<f64> {
        self.x.t().dot(&self.residual(w))
    }

    /// Primal objective `0.5 * ||y - X w||^2 + lambda * ||w||_1`.
    pub fn objective(&self, w: &Array1<f64>, lambda: f64) -> f64 {
        assert!(lambda >= 0.0, "lambda must be nonnegative");
        let r = self.residual(w);
        0.5 * r.dot(&r) + lambda * w.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// Dual objective `-0.5 * kappa' kappa - kappa' y` and the feasibility
    /// flag `||X' kappa||_inf <= lambda` (with a relative roundoff slack).
    pub fn dual_objective(&self, kappa: &Array1<f64>, lambda: f64) -> (f64, bool) {
        assert_eq!(kappa.len(), self.n(), "kappa must have length n");
        let value = -0.5 * kappa.dot(kappa) - kappa.dot(&self.y);
        let attained = self
            .x
            .t()
            .dot(kappa)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let feasible = attained <= lambda * (1.0 + tol::DUAL_FEASIBILITY_SLACK);
        (value, feasible)
    }

    /// The canonical dual point `kappa = (X w - y) / (1 + epsilon1)`.
    ///
    /// For `w` satisfying the relaxed optimality band with parameters
    /// `(epsilon1, epsilon2)` this point is dual feasible at `lambda`.
    pub fn dual_from_primal(&self, w: &Array1<f64>, epsilon1: f64) -> Array1<f64> {
        assert!(epsilon1 >= 0.0, "epsilon1 must be nonnegative");
        self.residual(w).mapv(|r| -r / (1.0 + epsilon1))
    }

    /// Duality-gap certificate for the pair `(w, kappa)` at `lambda`.
    ///
    /// Errors with [`ModelError::InfeasibleDual`] when `kappa` violates the
    /// dual box beyond the roundoff slack. The stored gap is clamped at zero;
    /// weak duality guarantees the true value is nonnegative and roundoff may
    /// only produce a negligibly negative number. `relative_gap` is zero
    /// whenever the primal objective is zero.
    pub fn duality_gap(
        &self,
        w: &Array1<f64>,
        kappa: &Array1<f64>,
        lambda: f64,
    ) -> Result<Certificate, ModelError> {
        let (g, feasible) = self.dual_objective(kappa, lambda);
        if !feasible {
            let attained = self
                .x
                .t()
                .dot(kappa)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            return Err(ModelError::InfeasibleDual {
                lambda,
                attained,
                bound: lambda * (1.0 + tol::DUAL_FEASIBILITY_SLACK),
            });
        }
        let f = self.objective(w, lambda);
        let gap = (f - g).max(0.0);
        let relative_gap = if f > 0.0 { gap / f } else { 0.0 };
        Ok(Certificate {
            lambda,
            w: w.clone(),
            kappa: kappa.clone(),
            gap,
            relative_gap,
        })
    }

    /// Checks the exact stationarity conditions at `lambda` within an
    /// absolute tolerance `tol` on the correlations.
    pub fn check_exact_optimality(
        &self,
        w: &Array1<f64>,
        lambda: f64,
        tol: f64,
    ) -> OptimalityReport {
        let c = self.correlations(w);
        let mut worst_active = 0.0f64;
        let mut worst_inactive = 0.0f64;
        for j in 0..self.p() {
            if w[j] != 0.0 {
                let target = lambda * w[j].signum();
                worst_active = worst_active.max((c[j] - target).abs());
            } else {
                worst_inactive = worst_inactive.max((c[j].abs() - lambda).max(0.0));
            }
        }
        OptimalityReport {
            pass: worst_active <= tol && worst_inactive <= tol,
            worst_active,
            worst_inactive,
        }
    }

    /// Checks the relaxed optimality band
    /// `lambda (1 - eps2) <= c_j sign(w_j) <= lambda (1 + eps1)` on the
    /// support and `|c_j| <= lambda (1 + eps1)` off it.
    pub fn check_opt_condition(
        &self,
        w: &Array1<f64>,
        lambda: f64,
        epsilon1: f64,
        epsilon2: f64,
    ) -> Result<OptReport, ModelError> {
        validate_epsilons(epsilon1, epsilon2)?;
        let c = self.correlations(w);
        Ok(opt_report_from_correlations(
            &c, w, lambda, epsilon1, epsilon2,
        ))
    }
}

/// Validates the relaxed-band parameters: `epsilon1 >= 0`, `epsilon2 >= -epsilon1`.
pub fn validate_epsilons(epsilon1: f64, epsilon2: f64) -> Result<(), ModelError> {
    if !(epsilon1 >= 0.0) || !(epsilon2 >= -epsilon1) {
        return Err(ModelError::InvalidEpsilon { epsilon1, epsilon2 });
    }
    Ok(())
}

/// Band check on precomputed correlations; shared with coordinate descent so
/// the stopping rule is bit-identical to the public check.
pub(crate) fn opt_report_from_correlations(
    c: &Array1<f64>,
    w: &Array1<f64>,
    lambda: f64,
    epsilon1: f64,
    epsilon2: f64,
) -> OptReport {
    let hi = lambda * (1.0 + epsilon1);
    let lo = lambda * (1.0 - epsilon2);
    let mut worst_active_high = 0.0f64;
    let mut worst_active_low = 0.0f64;
    let mut worst_inactive = 0.0f64;
    for j in 0..w.len() {
        if w[j] != 0.0 {
            let cs = c[j] * w[j].signum();
            worst_active_high = worst_active_high.max((cs - hi).max(0.0));
            worst_active_low = worst_active_low.max((lo - cs).max(0.0));
        } else {
            worst_inactive = worst_inactive.max((c[j].abs() - hi).max(0.0));
        }
    }
    OptReport {
        pass: worst_active_high == 0.0 && worst_active_low == 0.0 && worst_inactive == 0.0,
        worst_active_high,
        worst_active_low,
        worst_inactive,
    }
}

/// Worst-case bound on the relative duality gap of a point satisfying the
/// relaxed band with parameters `(epsilon1, epsilon2)`, certified through
/// `dual_from_primal`: `max(eps1^2 / (1+eps1)^2, (eps1+eps2) / (1+eps1))`.
pub fn gap_bound_factor(epsilon1: f64, epsilon2: f64) -> Result<f64, ModelError> {
    validate_epsilons(epsilon1, epsilon2)?;
    let a = epsilon1 / (1.0 + epsilon1);
    Ok((a * a).max((epsilon1 + epsilon2) / (1.0 + epsilon1)))
}

/// Result of an exact stationarity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityReport {
    pub pass: bool,
    /// Worst `|c_j - lambda sign(w_j)|` over the support.
    pub worst_active: f64,
    /// Worst `max(0, |c_j| - lambda)` off the support.
    pub worst_inactive: f64,
}

/// Result of a relaxed-band check. Violations are positive parts; all three
/// are exactly zero iff the check passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptReport {
    pub pass: bool,
    pub worst_active_high: f64,
    pub worst_active_low: f64,
    pub worst_inactive: f64,
}

/// A duality-gap certificate for a primal/dual pair at a fixed `lambda`.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub lambda: f64,
    pub w: Array1<f64>,
    pub kappa: Array1<f64>,
    /// `f(w) - g(kappa)`, clamped at zero.
    pub gap: f64,
    /// `gap / f(w)`, or zero when `f(w) = 0`.
    pub relative_gap: f64,
}

/// A vector in `{-1, 0, +1}^p` describing the signs of a solution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(entries: Vec<i8>) -> Result<Self, ModelError> {
        if let Some((index, &value)) = entries
            .iter()
            .enumerate()
            .find(|(_, v)| !matches!(**v, -1..=1))
        {
            return Err(ModelError::InvalidPatternEntry { index, value });
        }
        Ok(Self(entries))
    }

    pub fn zeros(p: usize) -> Self {
        Self(vec![0; p])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn is_all_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    /// The antipodal pattern `-eta`.
    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&v| -v).collect())
    }
}

impl std::ops::Index<usize> for SignPattern {
    type Output = i8;

    fn index(&self, j: usize) -> &i8 {
        &self.0[j]
    }
}

/// Sign pattern of `w` under an absolute zero tolerance.
pub fn sign_pattern(w: &[f64], zero_tol: f64) -> SignPattern {
    SignPattern(
        w.iter()
            .map(|&v| {
                if v.abs() <= zero_tol {
                    0
                } else if v > 0.0 {
                    1
                } else {
                    -1
                }
            })
            .collect(),
    )
}

/// One recorded point of a regularization path.
///
/// Exact paths store one kink per linear segment, anchored at the lambda
/// where that segment ends (the last kink is anchored at the stop point of
/// the final segment). `pattern` is the sign pattern attained in the
/// interior of the segment; it agrees with `sign(values)` everywhere except
/// that a variable leaving the active set keeps its segment sign even though
/// its coefficient is exactly zero at the kink itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Kink {
    pub lambda: f64,
    /// Active indices in insertion order.
    pub active_set: Vec<usize>,
    /// Coefficient values aligned with `active_set`.
    pub values: Vec<f64>,
    /// Full-length sign pattern of the segment this kink terminates.
    pub pattern: SignPattern,
    /// Approximate paths: the recorded pair, held constant, keeps its gap
    /// certificate down to this lambda. A record whose following step rode
    /// the homotopy direction stores its own lambda here (no hold; the path
    /// continues to the next record by linear interpolation). `None` on
    /// exact paths, which always interpolate linearly.
    pub valid_until: Option<f64>,
}

impl Kink {
    /// Densifies the sparse coefficients into a length-`p` vector.
    pub fn dense(&self, p: usize) -> Array1<f64> {
        let mut w = Array1::zeros(p);
        for (&j, &v) in self.active_set.iter().zip(&self.values) {
            w[j] = v;
        }
        w
    }
}

/// What kind of path a [`RegularizationPath`] stores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathKind {
    Exact,
    Approximate { epsilon: f64 },
}

/// An ordered list of kinks with strictly decreasing lambdas, starting at
/// `lambda_max` with the all-zero solution.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationPath {
    pub kind: PathKind,
    pub kinks: Vec<Kink>,
    /// False when the computation stopped early (singular Gram system, kink
    /// budget, or a failed numerical audit); the recorded prefix is still a
    /// valid path but its tail (and hence the last-event lambda) is missing.
    pub complete: bool,
}

impl RegularizationPath {
    /// Number of variables, taken from the first kink's pattern.
    pub fn p(&self) -> usize {
        self.kinks.first().map_or(0, |k| k.pattern.len())
    }

    /// `lambda` of the first kink (`lambda_max` of the instance).
    pub fn lambda_max(&self) -> f64 {
        self.kinks.first().map_or(f64::NAN, |k| k.lambda)
    }

    /// `lambda` of the last recorded kink.
    pub fn lambda_last(&self) -> f64 {
        self.kinks.last().map_or(f64::NAN, |k| k.lambda)
    }

    /// Smallest lambda at which the path direction actually changes.
    ///
    /// On a complete exact path the final record is a stop anchor inside the
    /// last segment rather than a direction change, so the last event sits
    /// one record earlier.
    pub fn last_event_lambda(&self) -> f64 {
        if self.complete && self.kinks.len() >= 2 {
            self.kinks[self.kinks.len() - 2].lambda
        } else {
            self.lambda_last()
        }
    }

    pub fn epsilon(&self) -> Option<f64> {
        match self.kind {
            PathKind::Exact => None,
            PathKind::Approximate { epsilon } => Some(epsilon),
        }
    }
}
