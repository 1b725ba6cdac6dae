//! Approximate G-optimal designs and least-squares estimation.
//!
//! For arms with features `x_i` and a distribution `pi` over an active set,
//! `V(pi) = sum_i pi_i x_i x_i^T` and `g(pi) = max_i x_i^T V(pi)^-1 x_i`.
//! The optimum is `g = d`; the solver stops as soon as `g <= 2d`, which is
//! all the elimination analysis needs.
//!
//! When the active arms only span a `d' < d` dimensional subspace, all
//! computations happen in an orthonormal basis of that span and the
//! certificate is `g <= 2d'`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{invalid, Error, Result};
use crate::schedule::fuzzy_ceil;

/// Frank-Wolfe iteration cap.
pub const MAX_ITERATIONS: usize = 10_000;
/// Weights below this are dropped after convergence.
pub const PRUNE_BELOW: f64 = 1e-6;
/// Largest accepted condition number of a Gram matrix.
pub const MAX_CONDITION: f64 = 1e12;
/// Constant `c` in the support bound `c * d * max(1, ln ln d)`.
pub const SUPPORT_CONSTANT: f64 = 4.0;

const RANK_TOL: f64 = 1e-10;

/// Documented cap on the support size of a returned design.
pub fn support_bound(dim: usize) -> usize {
    let d = dim as f64;
    let loglog = d.max(3.0).ln().ln().max(1.0);
    (SUPPORT_CONSTANT * d * loglog).ceil() as usize
}

/// A distribution over the active arms.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignWeights {
    /// Active arms, ascending.
    pub arms: Vec<usize>,
    /// `weights[j]` is the mass on `arms[j]`.
    pub weights: Vec<f64>,
    /// Arms with positive mass.
    pub support: Vec<usize>,
    /// `g` achieved by the returned weights.
    pub g_value: f64,
    /// Dimension `d'` of the span of the active features.
    pub dim: usize,
}

impl DesignWeights {
    pub fn weight_of(&self, arm: usize) -> f64 {
        self.arms
            .iter()
            .position(|&a| a == arm)
            .map_or(0.0, |j| self.weights[j])
    }
}

/// Orthonormal basis (`d x d'`) of the span of the rows of `rows`.
pub fn span_basis(rows: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let svd = rows.clone().svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed".into()))?;
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Err(invalid("active features are all zero"));
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] > RANK_TOL * smax)
        .collect();
    let d = rows.ncols();
    let mut b = DMatrix::zeros(d, keep.len());
    for (c, &j) in keep.iter().enumerate() {
        b.set_column(c, &v_t.row(j).transpose());
    }
    Ok(b)
}

fn active_rows(features: &DMatrix<f64>, active: &[usize]) -> Result<DMatrix<f64>> {
    if active.is_empty() {
        return Err(invalid("active set is empty"));
    }
    let d = features.ncols();
    let mut rows = DMatrix::zeros(active.len(), d);
    for (r, &i) in active.iter().enumerate() {
        if i >= features.nrows() {
            return Err(Error::Index {
                what: "arm",
                index: i,
                lo: 0,
                hi: features.nrows() - 1,
            });
        }
        rows.set_row(r, &features.row(i));
    }
    Ok(rows)
}

fn sorted_unique(active: &[usize]) -> Vec<usize> {
    let mut a = active.to_vec();
    a.sort_unstable();
    a.dedup();
    a
}

/// Leverages `z_i^T V^-1 z_i` for the rows of `z` under weights `w`.
fn leverages(z: &DMatrix<f64>, w: &[f64]) -> Result<Vec<f64>> {
    let dp = z.ncols();
    let mut v = DMatrix::zeros(dp, dp);
    for (r, &wr) in w.iter().enumerate() {
        if wr > 0.0 {
            let row = z.row(r).transpose();
            v += wr * &row * row.transpose();
        }
    }
    let chol = v
        .cholesky()
        .ok_or_else(|| Error::Numerical("design matrix is singular".into()))?;
    Ok((0..z.nrows())
        .map(|r| {
            let row = z.row(r).transpose();
            row.dot(&chol.solve(&row))
        })
        .collect())
}

/// Greedy spanning start: repeatedly take the arm with the largest residual
/// outside the current span, plus the arm most opposed to it along that
/// direction.
fn initial_support(z: &DMatrix<f64>) -> Vec<usize> {
    let (m, dp) = (z.nrows(), z.ncols());
    let mut chosen: Vec<usize> = Vec::new();
    let mut q: Vec<DVector<f64>> = Vec::new();
    for _ in 0..dp {
        let mut best = (0, -1.0);
        let mut best_res = DVector::zeros(dp);
        for r in 0..m {
            let mut res = z.row(r).transpose();
            for qj in &q {
                let c = qj.dot(&res);
                res -= c * qj;
            }
            let n = res.norm();
            if n > best.1 {
                best = (r, n);
                best_res = res;
            }
        }
        if best.1 <= 0.0 {
            break;
        }
        let dir = best_res / best.1;
        let lo = (0..m)
            .min_by(|&a, &b| {
                let pa = z.row(a).transpose().dot(&dir);
                let pb = z.row(b).transpose().dot(&dir);
                pa.partial_cmp(&pb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(best.0);
        for r in [best.0, lo] {
            if !chosen.contains(&r) {
                chosen.push(r);
            }
        }
        q.push(dir);
    }
    chosen
}

/// Frank-Wolfe (Fedorov-Wynn step) on `log det V(pi)` over the active arms.
pub fn approx_g_optimal(features: &DMatrix<f64>, active: &[usize]) -> Result<DesignWeights> {
    let arms = sorted_unique(active);
    let rows = active_rows(features, &arms)?;
    let basis = span_basis(&rows)?;
    let z = &rows * &basis;
    let (m, dp) = (z.nrows(), z.ncols());
    let target = 2.0 * dp as f64;

    let mut w = vec![0.0; m];
    let start = initial_support(&z);
    for &r in &start {
        w[r] = 1.0 / start.len() as f64;
    }

    let mut lev = leverages(&z, &w)?;
    for _ in 0..MAX_ITERATIONS {
        let (k, gk) = lev
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, g)| if g > acc.1 { (i, g) } else { acc });
        if gk <= target {
            break;
        }
        let step = (gk / dp as f64 - 1.0) / (gk - 1.0);
        for wi in w.iter_mut() {
            *wi *= 1.0 - step;
        }
        w[k] += step;
        lev = leverages(&z, &w)?;
    }

    let g_raw = lev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut pruned: Vec<f64> = w.iter().map(|&x| if x < PRUNE_BELOW { 0.0 } else { x }).collect();
    let total: f64 = pruned.iter().sum();
    pruned.iter_mut().for_each(|x| *x /= total);
    let (w, g) = match leverages(&z, &pruned) {
        Ok(l) => {
            let g = l.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if g <= target.max(g_raw) {
                (pruned, g)
            } else {
                (w, g_raw)
            }
        }
        Err(_) => (w, g_raw),
    };

    let support = arms
        .iter()
        .zip(&w)
        .filter(|(_, &x)| x > 0.0)
        .map(|(&a, _)| a)
        .collect();
    Ok(DesignWeights {
        arms,
        weights: w,
        support,
        g_value: g,
        dim: dp,
    })
}

/// `max_{i in active} x_i^T V(pi)^+ x_i`, evaluated in the original
/// coordinates through an eigendecomposition of `V(pi)`.
///
/// Fails if some active arm lies outside the range of `V(pi)`.
pub fn g_value(weights: &DesignWeights, features: &DMatrix<f64>, active: &[usize]) -> Result<f64> {
    let d = features.ncols();
    let mut v = DMatrix::zeros(d, d);
    for (&arm, &w) in weights.arms.iter().zip(&weights.weights) {
        if w > 0.0 {
            let x = features.row(arm).transpose();
            v += w * &x * x.transpose();
        }
    }
    let eig = SymmetricEigen::new(v);
    let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if lmax <= 0.0 {
        return Err(Error::Numerical("V(pi) is zero".into()));
    }
    let rows = active_rows(features, active)?;
    let mut g = f64::NEG_INFINITY;
    for r in 0..rows.nrows() {
        let x = rows.row(r).transpose();
        let mut val = 0.0;
        let mut resid = x.norm_squared();
        for j in 0..d {
            let lam = eig.eigenvalues[j];
            let c = eig.eigenvectors.column(j).dot(&x);
            if lam > RANK_TOL * lmax {
                val += c * c / lam;
                resid -= c * c;
            }
        }
        if resid > 1e-9 * x.norm_squared().max(1e-300) {
            return Err(Error::Numerical(format!(
                "arm {} lies outside the span of the design",
                active[r]
            )));
        }
        g = g.max(val);
    }
    Ok(g)
}

/// `ceil(n_lin * pi_i)` pulls for support arms, aligned with `weights.arms`.
pub fn phase_allocation(weights: &DesignWeights, n_lin: f64) -> Vec<u64> {
    weights
        .weights
        .iter()
        .map(|&w| if w > 0.0 { fuzzy_ceil(n_lin * w) as u64 } else { 0 })
        .collect()
}

/// `N_lin(p) = 16 a^(2p) sigma^2 d`.
pub fn linear_phase_budget(p: usize, a: f64, sigma: f64, dim: usize) -> f64 {
    16.0 * a.powi(2 * p as i32) * sigma * sigma * dim as f64
}

/// Solves `G theta = b` for a symmetric positive definite Gram matrix,
/// refusing condition numbers above `MAX_CONDITION`.
pub fn solve_normal_equations(gram: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    let eig = SymmetricEigen::new(gram.clone());
    let lmax = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lmin = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(lmin > 0.0) || lmax / lmin > MAX_CONDITION {
        return Err(Error::Numerical(format!(
            "rank-deficient or ill-conditioned design (eigenvalues in [{lmin:e}, {lmax:e}])"
        )));
    }
    let chol = gram
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("Cholesky factorization failed".into()))?;
    Ok(chol.solve(rhs))
}

/// Ordinary least squares `argmin ||X theta - y||^2` for full-column-rank `X`.
pub fn least_squares(observed: &DMatrix<f64>, rewards: &DVector<f64>) -> Result<DVector<f64>> {
    if observed.nrows() != rewards.len() {
        return Err(invalid(format!(
            "{} feature rows but {} rewards",
            observed.nrows(),
            rewards.len()
        )));
    }
    let gram = observed.transpose() * observed;
    let rhs = observed.transpose() * rewards;
    solve_normal_equations(&gram, &rhs)
}
