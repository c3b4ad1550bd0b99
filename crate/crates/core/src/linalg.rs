//! Factorization of active-set Gram systems `X_J' X_J`.
//!
//! The homotopy solvers repeatedly solve small symmetric positive definite
//! systems whose matrix is the Gram matrix of the active columns. This
//! module maintains a Cholesky factorization of the *diagonally
//! equilibrated* Gram matrix `D^-1 (X_J' X_J) D^-1` with
//! `D = diag(||x_j||)`: equilibration makes the condition estimate measure
//! genuine near-collinearity of the active columns instead of benign
//! differences in column scale, which matters for instances whose column
//! norms span many orders of magnitude.
//!
//! The factor can be rebuilt from scratch, extended by one column, or have
//! one column removed. The incremental operations are an optimization; the
//! from-scratch result defines correctness and the two agree to roundoff.

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::model::ProblemInstance;
use crate::tol;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("active Gram system is singular or near-singular (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("active index {index} out of range for p = {p}")]
    IndexOutOfRange { index: usize, p: usize },
    #[error("active index {index} listed twice")]
    DuplicateIndex { index: usize },
    #[error("active set is empty")]
    EmptyActiveSet,
}

/// Cholesky factorization of an active-set Gram matrix.
#[derive(Debug, Clone)]
pub struct GramSystem {
    indices: Vec<usize>,
    /// Equilibrated Gram matrix (unit diagonal).
    gram: Array2<f64>,
    /// Lower-triangular Cholesky factor of `gram`.
    l: Array2<f64>,
    /// Column norms `||x_j||` for the active columns, in order.
    scale: Vec<f64>,
    condition_estimate: f64,
}

impl GramSystem {
    /// Factors `X_J' X_J` from scratch.
    ///
    /// Fails with [`LinalgError::Singular`] when the factorization breaks
    /// down or the condition estimate of the equilibrated matrix exceeds
    /// [`tol::CONDITION_LIMIT`].
    pub fn build(inst: &ProblemInstance, indices: &[usize]) -> Result<Self, LinalgError> {
        validate_indices(inst, indices)?;
        if indices.len() > inst.n() {
            // Rank cannot exceed the number of rows.
            return Err(LinalgError::Singular {
                condition: f64::INFINITY,
            });
        }
        let m = indices.len();
        let scale: Vec<f64> = indices
            .iter()
            .map(|&j| inst.column_norm_sq(j).sqrt())
            .collect();
        let mut gram = Array2::zeros((m, m));
        for a in 0..m {
            gram[[a, a]] = 1.0;
            for b in 0..a {
                let v = inst.column(indices[a]).dot(&inst.column(indices[b]))
                    / (scale[a] * scale[b]);
                gram[[a, b]] = v;
                gram[[b, a]] = v;
            }
        }
        let l = cholesky(&gram).ok_or(LinalgError::Singular {
            condition: f64::INFINITY,
        })?;
        let condition_estimate = condition_estimate(&gram, &l);
        if condition_estimate > tol::CONDITION_LIMIT {
            return Err(LinalgError::Singular {
                condition: condition_estimate,
            });
        }
        Ok(Self {
            indices: indices.to_vec(),
            gram,
            l,
            scale,
            condition_estimate,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// 1-norm condition estimate of the equilibrated Gram matrix.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Solves `(X_J' X_J) u = rhs` (`rhs` in active-set order).
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        assert_eq!(rhs.len(), self.len(), "rhs length must match |J|");
        let scaled: Vec<f64> = rhs.iter().zip(&self.scale).map(|(r, s)| r / s).collect();
        let u = solve_with_factor(&self.l, &scaled);
        u.iter().zip(&self.scale).map(|(v, s)| v / s).collect()
    }

    /// Applies the factored matrix: returns `(X_J' X_J) v`. Used to check
    /// that the factorization reproduces the Gram matrix.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.len(), "v length must match |J|");
        let scaled = Array1::from_iter(v.iter().zip(&self.scale).map(|(x, s)| x * s));
        let out = self.gram.dot(&scaled);
        out.iter().zip(&self.scale).map(|(x, s)| x * s).collect()
    }

    /// Appends column `j` to the active set, growing the factor by one row.
    pub fn extend(&mut self, inst: &ProblemInstance, j: usize) -> Result<(), LinalgError> {
        if j >= inst.p() {
            return Err(LinalgError::IndexOutOfRange {
                index: j,
                p: inst.p(),
            });
        }
        if self.indices.contains(&j) {
            return Err(LinalgError::DuplicateIndex { index: j });
        }
        let m = self.len();
        if m + 1 > inst.n() {
            return Err(LinalgError::Singular {
                condition: f64::INFINITY,
            });
        }
        let s_new = inst.column_norm_sq(j).sqrt();
        let cross: Vec<f64> = (0..m)
            .map(|a| inst.column(self.indices[a]).dot(&inst.column(j)) / (self.scale[a] * s_new))
            .collect();
        let l12 = forward_substitute(&self.l, &cross);
        let pivot_sq = 1.0 - l12.iter().map(|v| v * v).sum::<f64>();
        if pivot_sq <= 0.0 || !pivot_sq.is_finite() {
            return Err(LinalgError::Singular {
                condition: f64::INFINITY,
            });
        }
        let mut gram = Array2::zeros((m + 1, m + 1));
        gram.slice_mut(ndarray::s![..m, ..m]).assign(&self.gram);
        for a in 0..m {
            gram[[a, m]] = cross[a];
            gram[[m, a]] = cross[a];
        }
        gram[[m, m]] = 1.0;
        let mut l = Array2::zeros((m + 1, m + 1));
        l.slice_mut(ndarray::s![..m, ..m]).assign(&self.l);
        for a in 0..m {
            l[[m, a]] = l12[a];
        }
        l[[m, m]] = pivot_sq.sqrt();
        let condition_estimate = condition_estimate(&gram, &l);
        if condition_estimate > tol::CONDITION_LIMIT {
            return Err(LinalgError::Singular {
                condition: condition_estimate,
            });
        }
        self.indices.push(j);
        self.scale.push(s_new);
        self.gram = gram;
        self.l = l;
        self.condition_estimate = condition_estimate;
        Ok(())
    }

    /// Removes the active-set entry at position `pos` (compacting the order)
    /// and restores the factor with a rank-one update of the trailing block.
    pub fn remove(&mut self, pos: usize) -> Result<(), LinalgError> {
        let m = self.len();
        assert!(pos < m, "position {pos} out of range for |J| = {m}");
        let keep: Vec<usize> = (0..m).filter(|&a| a != pos).collect();
        let mut gram = Array2::zeros((m - 1, m - 1));
        for (a, &ka) in keep.iter().enumerate() {
            for (b, &kb) in keep.iter().enumerate() {
                gram[[a, b]] = self.gram[[ka, kb]];
            }
        }
        // Rows above `pos` keep their factor rows; the trailing block gets a
        // rank-one update with the deleted column of L.
        let tail = m - pos - 1;
        let mut l = Array2::zeros((m - 1, m - 1));
        for a in 0..pos {
            for b in 0..=a {
                l[[a, b]] = self.l[[a, b]];
            }
        }
        if tail > 0 {
            let mut block = Array2::zeros((tail, tail));
            for a in 0..tail {
                for b in 0..=a {
                    block[[a, b]] = self.l[[pos + 1 + a, pos + 1 + b]];
                }
            }
            let mut x: Vec<f64> = (0..tail).map(|a| self.l[[pos + 1 + a, pos]]).collect();
            rank_one_update(&mut block, &mut x);
            for a in 0..tail {
                for b in 0..pos {
                    l[[pos + a, b]] = self.l[[pos + 1 + a, b]];
                }
                for b in 0..=a {
                    l[[pos + a, pos + b]] = block[[a, b]];
                }
            }
        }
        let condition_estimate = condition_estimate(&gram, &l);
        if condition_estimate > tol::CONDITION_LIMIT {
            return Err(LinalgError::Singular {
                condition: condition_estimate,
            });
        }
        self.indices.remove(pos);
        self.scale.remove(pos);
        self.gram = gram;
        self.l = l;
        self.condition_estimate = condition_estimate;
        Ok(())
    }
}

/// Builds and factors the active-set Gram system `X_J' X_J`.
pub fn build_gram(inst: &ProblemInstance, indices: &[usize]) -> Result<GramSystem, LinalgError> {
    GramSystem::build(inst, indices)
}

/// Solves `(X_J' X_J) u = rhs` against an already-built system.
pub fn gram_solve(sys: &GramSystem, rhs: &[f64]) -> Vec<f64> {
    sys.solve(rhs)
}

fn validate_indices(inst: &ProblemInstance, indices: &[usize]) -> Result<(), LinalgError> {
    if indices.is_empty() {
        return Err(LinalgError::EmptyActiveSet);
    }
    let mut seen = vec![false; inst.p()];
    for &j in indices {
        if j >= inst.p() {
            return Err(LinalgError::IndexOutOfRange {
                index: j,
                p: inst.p(),
            });
        }
        if seen[j] {
            return Err(LinalgError::DuplicateIndex { index: j });
        }
        seen[j] = true;
    }
    Ok(())
}

/// Plain lower-triangular Cholesky; `None` when a pivot is not strictly
/// positive (the matrix is numerically semidefinite).
fn cholesky(a: &Array2<f64>) -> Option<Array2<f64>> {
    let m = a.nrows();
    let mut l = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..=i {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return None;
                }
                l[[i, i]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    Some(l)
}

fn forward_substitute(l: &Array2<f64>, rhs: &[f64]) -> Vec<f64> {
    let m = rhs.len();
    let mut z = vec![0.0; m];
    for i in 0..m {
        let mut sum = rhs[i];
        for k in 0..i {
            sum -= l[[i, k]] * z[k];
        }
        z[i] = sum / l[[i, i]];
    }
    z
}

fn back_substitute(l: &Array2<f64>, rhs: &[f64]) -> Vec<f64> {
    let m = rhs.len();
    let mut u = vec![0.0; m];
    for i in (0..m).rev() {
        let mut sum = rhs[i];
        for k in i + 1..m {
            sum -= l[[k, i]] * u[k];
        }
        u[i] = sum / l[[i, i]];
    }
    u
}

fn solve_with_factor(l: &Array2<f64>, rhs: &[f64]) -> Vec<f64> {
    back_substitute(l, &forward_substitute(l, rhs))
}

/// In-place rank-one update `L L' + x x' -> L~ L~'` on a lower factor.
fn rank_one_update(l: &mut Array2<f64>, x: &mut [f64]) {
    let m = x.len();
    for k in 0..m {
        let lkk = l[[k, k]];
        let xk = x[k];
        let r = (lkk * lkk + xk * xk).sqrt();
        let c = r / lkk;
        let s = xk / lkk;
        l[[k, k]] = r;
        for i in k + 1..m {
            let lik = (l[[i, k]] + s * x[i]) / c;
            l[[i, k]] = lik;
            x[i] = c * x[i] - s * lik;
        }
    }
}

/// 1-norm condition estimate `||A||_1 * ||A^-1||_1` with the inverse norm
/// estimated by Hager's method (a handful of triangular solves).
fn condition_estimate(gram: &Array2<f64>, l: &Array2<f64>) -> f64 {
    let m = gram.nrows();
    if m == 0 {
        return 0.0;
    }
    let norm1 = (0..m)
        .map(|j| (0..m).map(|i| gram[[i, j]].abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let mut x = vec![1.0 / m as f64; m];
    let mut estimate = 0.0f64;
    for _ in 0..5 {
        let y = solve_with_factor(l, &x);
        estimate = estimate.max(y.iter().map(|v| v.abs()).sum());
        let xi: Vec<f64> = y
            .iter()
            .map(|v| if *v >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        let z = solve_with_factor(l, &xi);
        let (jmax, zmax) = z.iter().enumerate().fold((0usize, 0.0f64), |acc, (j, v)| {
            if v.abs() > acc.1 {
                (j, v.abs())
            } else {
                acc
            }
        });
        let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
        if zmax <= ztx {
            break;
        }
        x = vec![0.0; m];
        x[jmax] = 1.0;
    }
    norm1 * estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProblemInstance;
    use approx::assert_abs_diff_eq;
    use ndarray::{arr1, arr2, Array1};

    fn random_instance(n: usize, p: usize, seed: u64) -> ProblemInstance {
        ProblemInstance::gaussian(n, p, seed).unwrap()
    }

    /// Independent 3x3 inverse through the cofactor expansion.
    fn invert3(a: &Array2<f64>) -> Array2<f64> {
        let det = a[[0, 0]] * (a[[1, 1]] * a[[2, 2]] - a[[1, 2]] * a[[2, 1]])
            - a[[0, 1]] * (a[[1, 0]] * a[[2, 2]] - a[[1, 2]] * a[[2, 0]])
            + a[[0, 2]] * (a[[1, 0]] * a[[2, 1]] - a[[1, 1]] * a[[2, 0]]);
        let mut inv = Array2::zeros((3, 3));
        for i in 0..3 {
            for j in 0..3 {
                let r: Vec<usize> = (0..3).filter(|&k| k != j).collect();
                let c: Vec<usize> = (0..3).filter(|&k| k != i).collect();
                let minor = a[[r[0], c[0]]] * a[[r[1], c[1]]] - a[[r[0], c[1]]] * a[[r[1], c[0]]];
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                inv[[i, j]] = sign * minor / det;
            }
        }
        inv
    }

    fn dense_gram(inst: &ProblemInstance, indices: &[usize]) -> Array2<f64> {
        let m = indices.len();
        Array2::from_shape_fn((m, m), |(a, b)| {
            inst.column(indices[a]).dot(&inst.column(indices[b]))
        })
    }

    #[test]
    fn solve_matches_direct_residual() {
        let inst = random_instance(8, 5, 7);
        let indices = [0, 1, 2, 3, 4];
        let sys = GramSystem::build(&inst, &indices).unwrap();
        let rhs: Vec<f64> = (0..5).map(|i| (i as f64) - 1.5).collect();
        let u = sys.solve(&rhs);
        let gram = dense_gram(&inst, &indices);
        let res = &gram.dot(&Array1::from_vec(u)) - &Array1::from_vec(rhs.to_vec());
        let rhs_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(res.dot(&res).sqrt() <= 1e-10 * rhs_norm);
    }

    #[test]
    fn solve_matches_cofactor_inverse() {
        let inst = random_instance(6, 3, 11);
        let indices = [0, 1, 2];
        let sys = GramSystem::build(&inst, &indices).unwrap();
        let gram = dense_gram(&inst, &indices);
        let inv = invert3(&gram);
        let rhs = arr1(&[0.3, -1.2, 2.0]);
        let expected = inv.dot(&rhs);
        let got = sys.solve(rhs.as_slice().unwrap());
        for i in 0..3 {
            assert_abs_diff_eq!(got[i], expected[i], epsilon = 1e-10);
        }
        assert!(sys.condition_estimate().is_finite());
    }

    #[test]
    fn duplicate_columns_are_singular() {
        let x = arr2(&[[1.0, 1.0], [2.0, 2.0], [-1.0, -1.0]]);
        let inst = ProblemInstance::new(arr1(&[1.0, 0.0, 1.0]), x).unwrap();
        let err = GramSystem::build(&inst, &[0, 1]);
        assert!(matches!(err, Err(LinalgError::Singular { .. })));
    }

    #[test]
    fn wide_active_set_is_singular() {
        let inst = random_instance(2, 4, 3);
        let err = GramSystem::build(&inst, &[0, 1, 2]);
        assert!(matches!(err, Err(LinalgError::Singular { .. })));
    }

    #[test]
    fn rejects_bad_index_sets() {
        let inst = random_instance(4, 3, 5);
        assert!(matches!(
            GramSystem::build(&inst, &[]),
            Err(LinalgError::EmptyActiveSet)
        ));
        assert!(matches!(
            GramSystem::build(&inst, &[0, 0]),
            Err(LinalgError::DuplicateIndex { .. })
        ));
        assert!(matches!(
            GramSystem::build(&inst, &[7]),
            Err(LinalgError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn apply_reproduces_gram() {
        let inst = random_instance(10, 6, 13);
        let indices = [5, 0, 3, 2];
        let sys = GramSystem::build(&inst, &indices).unwrap();
        let gram = dense_gram(&inst, &indices);
        let v = arr1(&[0.5, -2.0, 1.0, 0.25]);
        let expected = gram.dot(&v);
        let got = Array1::from_vec(sys.apply(v.as_slice().unwrap()));
        let diff = &got - &expected;
        assert!(diff.dot(&diff).sqrt() <= 1e-8 * expected.dot(&expected).sqrt());
    }

    #[test]
    fn extend_matches_from_scratch() {
        let inst = random_instance(12, 7, 17);
        let mut sys = GramSystem::build(&inst, &[1, 4]).unwrap();
        sys.extend(&inst, 6).unwrap();
        sys.extend(&inst, 0).unwrap();
        let fresh = GramSystem::build(&inst, &[1, 4, 6, 0]).unwrap();
        for i in 0..4 {
            for j in 0..=i {
                assert_abs_diff_eq!(sys.l[[i, j]], fresh.l[[i, j]], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn remove_matches_from_scratch() {
        let inst = random_instance(12, 7, 19);
        let mut sys = GramSystem::build(&inst, &[0, 2, 4, 6]).unwrap();
        sys.remove(1).unwrap();
        let fresh = GramSystem::build(&inst, &[0, 4, 6]).unwrap();
        assert_eq!(sys.indices(), fresh.indices());
        for i in 0..3 {
            for j in 0..=i {
                assert_abs_diff_eq!(sys.l[[i, j]], fresh.l[[i, j]], epsilon = 1e-10);
            }
        }
        let rhs = [1.0, -1.0, 0.5];
        let a = sys.solve(&rhs);
        let b = fresh.solve(&rhs);
        for k in 0..3 {
            assert_abs_diff_eq!(a[k], b[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn extend_rejects_duplicates_and_detects_collinearity() {
        let x = arr2(&[[1.0, 0.0, 1.0], [0.0, 1.0, 1.0], [0.0, 0.0, 0.000000000001]]);
        let inst = ProblemInstance::new(arr1(&[1.0, 1.0, 1.0]), x).unwrap();
        let mut sys = GramSystem::build(&inst, &[0, 1]).unwrap();
        assert!(matches!(
            sys.clone().extend(&inst, 0),
            Err(LinalgError::DuplicateIndex { .. })
        ));
        // Column 2 is numerically inside span(0, 1).
        assert!(matches!(
            sys.extend(&inst, 2),
            Err(LinalgError::Singular { .. })
        ));
    }
}
