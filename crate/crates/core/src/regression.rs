//! ε-insensitive support vector regression on precomputed Gram matrices.
//!
//! The dual is solved in the usual 2n-variable form (one variable per side of
//! the ε-tube) by SMO with maximal-violating-pair selection. The box bound is
//! `C = lambda / n_train`.

use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_psd, Matrix};
use crate::rng::rng_from_seed;

pub const KKT_TOLERANCE: f64 = 1e-3;
pub const MAX_ITERATIONS: usize = 1_000_000;
pub const PSD_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    /// `alpha_i - alpha_i*` per training sample.
    pub dual_coeffs: Vec<f64>,
    pub bias: f64,
    pub support_indices: Vec<usize>,
    pub lambda: f64,
    pub epsilon: f64,
    pub fingerprint: u64,
    pub converged: bool,
    pub iterations: usize,
}

impl SvrModel {
    pub fn n_train(&self) -> usize {
        self.dual_coeffs.len()
    }

    pub fn box_bound(&self) -> f64 {
        self.lambda / self.n_train() as f64
    }
}

/// Hash of a training set (Gram bits and targets), used to tie a model to the
/// data it was fitted on.
pub fn training_fingerprint(gram: &Matrix, targets: &[f64]) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    gram.rows.hash(&mut h);
    gram.cols.hash(&mut h);
    for v in gram.data.iter().chain(targets) {
        v.to_bits().hash(&mut h);
    }
    h.finish()
}

fn check_hyper(lambda: f64, epsilon: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::arg(format!("lambda must be positive, got {lambda}")));
    }
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::arg(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    Ok(())
}

/// Stopping rule of the SMO solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvrOptions {
    /// Largest KKT violation accepted at convergence.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SvrOptions {
    fn default() -> Self {
        Self {
            tolerance: KKT_TOLERANCE,
            max_iterations: MAX_ITERATIONS,
        }
    }
}

/// Fits an ε-SVR model. A Gram matrix that is not symmetric positive
/// semidefinite within [`PSD_TOLERANCE`] is rejected.
pub fn svr_train(gram: &Matrix, targets: &[f64], lambda: f64, epsilon: f64) -> Result<SvrModel> {
    svr_train_with(gram, targets, lambda, epsilon, &SvrOptions::default())
}

pub fn svr_train_with(gram: &Matrix, targets: &[f64], lambda: f64, epsilon: f64, opts: &SvrOptions) -> Result<SvrModel> {
    if !(opts.tolerance > 0.0) {
        return Err(Error::arg("solver tolerance must be positive"));
    }
    check_hyper(lambda, epsilon)?;
    if !gram.is_square() || gram.rows != targets.len() {
        return Err(Error::arg(format!(
            "Gram matrix {}x{} does not match {} targets",
            gram.rows,
            gram.cols,
            targets.len()
        )));
    }
    if targets.is_empty() {
        return Err(Error::arg("cannot train on an empty set"));
    }
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(Error::arg("targets must be finite"));
    }
    check_psd(gram, PSD_TOLERANCE)?;
    let mut model = solve_dual(gram, targets, lambda, epsilon, opts);
    model.fingerprint = training_fingerprint(gram, targets);
    if !model.converged {
        log::warn!(
            "SVR (lambda={lambda}, epsilon={epsilon}) stopped after {} iterations without reaching the KKT tolerance",
            model.iterations
        );
    }
    Ok(model)
}

fn solve_dual(k: &Matrix, z: &[f64], lambda: f64, epsilon: f64, opts: &SvrOptions) -> SvrModel {
    let n = z.len();
    let c = lambda / n as f64;
    let l = 2 * n;
    let sign = |t: usize| if t < n { 1.0 } else { -1.0 };
    let idx = |t: usize| if t < n { t } else { t - n };
    let q = |s: usize, t: usize| sign(s) * sign(t) * k.get(idx(s), idx(t));

    let mut a = vec![0.0; l];
    let mut g: Vec<f64> = (0..l)
        .map(|t| if t < n { epsilon - z[t] } else { epsilon + z[t - n] })
        .collect();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        // First index: maximal violation. Second index: largest guaranteed
        // decrease of the objective among the violating partners.
        let (mut gmax, mut i) = (f64::NEG_INFINITY, usize::MAX);
        for t in 0..l {
            let y = sign(t);
            let up = if y > 0.0 { a[t] < c } else { a[t] > 0.0 };
            if up && -y * g[t] > gmax {
                gmax = -y * g[t];
                i = t;
            }
        }
        let (mut gmin, mut j, mut best) = (f64::INFINITY, usize::MAX, f64::INFINITY);
        for t in 0..l {
            let y = sign(t);
            let low = if y > 0.0 { a[t] > 0.0 } else { a[t] < c };
            if !low {
                continue;
            }
            let v = -y * g[t];
            gmin = gmin.min(v);
            if i != usize::MAX && v < gmax {
                let b = gmax - v;
                let curv = (k.get(idx(i), idx(i)) + k.get(idx(t), idx(t)) - 2.0 * k.get(idx(i), idx(t))).max(1e-12);
                let gain = -b * b / curv;
                if gain < best {
                    best = gain;
                    j = t;
                }
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax - gmin < opts.tolerance {
            converged = true;
            break;
        }
        iterations += 1;

        let (old_i, old_j) = (a[i], a[j]);
        let (qii, qjj, qij) = (q(i, i), q(j, j), q(i, j));
        if sign(i) != sign(j) {
            let quad = (qii + qjj + 2.0 * qij).max(1e-12);
            let delta = (-g[i] - g[j]) / quad;
            let diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if diff > 0.0 {
                if a[j] < 0.0 {
                    a[j] = 0.0;
                    a[i] = diff;
                }
            } else if a[i] < 0.0 {
                a[i] = 0.0;
                a[j] = -diff;
            }
            if diff > 0.0 {
                if a[i] > c {
                    a[i] = c;
                    a[j] = c - diff;
                }
            } else if a[j] > c {
                a[j] = c;
                a[i] = c + diff;
            }
        } else {
            let quad = (qii + qjj - 2.0 * qij).max(1e-12);
            let delta = (g[i] - g[j]) / quad;
            let sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if sum > c {
                if a[i] > c {
                    a[i] = c;
                    a[j] = sum - c;
                }
            } else if a[j] < 0.0 {
                a[j] = 0.0;
                a[i] = sum;
            }
            if sum > c {
                if a[j] > c {
                    a[j] = c;
                    a[i] = sum - c;
                }
            } else if a[i] < 0.0 {
                a[i] = 0.0;
                a[j] = sum;
            }
        }
        let (di, dj) = (a[i] - old_i, a[j] - old_j);
        for (t, gt) in g.iter_mut().enumerate() {
            *gt += q(t, i) * di + q(t, j) * dj;
        }
    }

    // Offset from free variables, else the midpoint of the feasible interval.
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free_sum, mut n_free) = (0.0, 0usize);
    for t in 0..l {
        let y = sign(t);
        let yg = y * g[t];
        if a[t] >= c {
            if y < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if a[t] <= 0.0 {
            if y > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            free_sum += yg;
        }
    }
    let rho = if n_free > 0 {
        free_sum / n_free as f64
    } else {
        (ub + lb) / 2.0
    };
    let dual_coeffs: Vec<f64> = (0..n).map(|i| a[i] - a[i + n]).collect();
    let support_indices = (0..n).filter(|&i| dual_coeffs[i] != 0.0).collect();
    SvrModel {
        dual_coeffs,
        bias: -rho,
        support_indices,
        lambda,
        epsilon,
        fingerprint: 0,
        converged,
        iterations,
    }
}

/// Predictions `cross_gram * dual_coeffs + bias`, one per row.
pub fn svr_predict(model: &SvrModel, cross_gram: &Matrix) -> Result<Vec<f64>> {
    if cross_gram.cols != model.n_train() {
        return Err(Error::arg(format!(
            "cross Gram has {} columns but the model was trained on {} samples",
            cross_gram.cols,
            model.n_train()
        )));
    }
    Ok(cross_gram
        .mul_vec(&model.dual_coeffs)?
        .into_iter()
        .map(|v| v + model.bias)
        .collect())
}

/// Dual objective `1/2 b'Kb + eps |b|_1 - z'b` of a coefficient vector.
pub fn dual_objective(gram: &Matrix, targets: &[f64], epsilon: f64, coeffs: &[f64]) -> f64 {
    let kb = gram.mul_vec(coeffs).expect("shape checked by caller");
    let quad: f64 = kb.iter().zip(coeffs).map(|(a, b)| a * b).sum();
    let l1: f64 = coeffs.iter().map(|b| b.abs()).sum();
    let lin: f64 = targets.iter().zip(coeffs).map(|(z, b)| z * b).sum();
    0.5 * quad + epsilon * l1 - lin
}

pub fn mse(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::arg(format!(
            "{} predictions for {} targets",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::arg("mean squared error of an empty set"));
    }
    Ok(pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum::<f64>() / pred.len() as f64)
}

/// Population variance, the MSE of predicting the mean.
pub fn variance(values: &[f64]) -> f64 {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub lambdas: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// Mean held-out MSE, indexed `[lambda][epsilon]` row-major.
    pub mean_mse: Vec<f64>,
    /// Fold of each training sample.
    pub folds: Vec<usize>,
    pub n_folds: usize,
    pub selected: (f64, f64),
}

impl CvReport {
    pub fn mse_at(&self, li: usize, ei: usize) -> f64 {
        self.mean_mse[li * self.epsilons.len() + ei]
    }
}

/// Seeded fold assignment: a random permutation, position `i` going to fold
/// `i % n_folds`.
pub fn fold_assignment(n: usize, n_folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from_seed(seed));
    let mut folds = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        folds[i] = pos % n_folds;
    }
    folds
}

/// Relative slack under which two mean MSEs count as a tie.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Grid search over `(lambda, epsilon)` with k-fold cross-validation on the
/// training Gram matrix. Ties go to the smaller lambda, then smaller epsilon.
pub fn grid_search_cv(
    gram: &Matrix,
    targets: &[f64],
    lambdas: &[f64],
    epsilons: &[f64],
    n_folds: usize,
    seed: u64,
) -> Result<CvReport> {
    let n = targets.len();
    if !gram.is_square() || gram.rows != n {
        return Err(Error::arg("Gram matrix does not match the targets"));
    }
    if n_folds < 2 || n_folds > n {
        return Err(Error::arg(format!(
            "need 2 <= folds <= {n} training samples, got {n_folds}"
        )));
    }
    if lambdas.is_empty() || epsilons.is_empty() {
        return Err(Error::arg("hyperparameter grids must be nonempty"));
    }
    for &l in lambdas {
        for &e in epsilons {
            check_hyper(l, e)?;
        }
    }
    check_psd(gram, PSD_TOLERANCE)?;
    let folds = fold_assignment(n, n_folds, seed);
    let splits: Vec<(Vec<usize>, Vec<usize>)> = (0..n_folds)
        .map(|f| {
            let train = (0..n).filter(|&i| folds[i] != f).collect();
            let test = (0..n).filter(|&i| folds[i] == f).collect();
            (train, test)
        })
        .collect();
    let jobs: Vec<(usize, usize, usize)> = (0..lambdas.len())
        .flat_map(|li| (0..epsilons.len()).flat_map(move |ei| (0..n_folds).map(move |f| (li, ei, f))))
        .collect();
    let fold_mse: Vec<f64> = jobs
        .par_iter()
        .map(|&(li, ei, f)| {
            let (train, test) = &splits[f];
            let k_train = gram.select(train, train);
            let y_train: Vec<f64> = train.iter().map(|&i| targets[i]).collect();
            let model = solve_dual(&k_train, &y_train, lambdas[li], epsilons[ei], &SvrOptions::default());
            let pred = svr_predict(&model, &gram.select(test, train))?;
            let truth: Vec<f64> = test.iter().map(|&i| targets[i]).collect();
            mse(&pred, &truth)
        })
        .collect::<Result<_>>()?;
    let mean_mse: Vec<f64> = fold_mse
        .chunks(n_folds)
        .map(|c| c.iter().sum::<f64>() / n_folds as f64)
        .collect();
    let mut best = 0;
    for (idx, &v) in mean_mse.iter().enumerate() {
        let cur = mean_mse[best];
        // Row-major order visits smaller lambda, then smaller epsilon, first;
        // a later entry only wins if clearly better.
        if v < cur - TIE_TOLERANCE * cur.abs().max(1.0) {
            best = idx;
        }
    }
    let selected = (lambdas[best / epsilons.len()], epsilons[best % epsilons.len()]);
    Ok(CvReport {
        lambdas: lambdas.to_vec(),
        epsilons: epsilons.to_vec(),
        mean_mse,
        folds,
        n_folds,
        selected,
    })
}
