//! Discrete path signatures over a truncated tensor algebra, and signature
//! kernels computed either from explicit tensors or by dynamic programming
//! over the increment Gram matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{moment_kernel, FeaturePath};
use crate::linalg::Matrix;
use crate::persistence::DiagramPath;

/// Default cap on the bytes a materialised signature may occupy (512 MiB).
pub const DEFAULT_TENSOR_BUDGET: usize = 512 << 20;

/// Element of the tensor algebra truncated at `level`; level `k` is stored
/// flat with multi-index `(i1, ..., ik)` at `i1 * D^(k-1) + ... + ik`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedTensor {
    pub ambient_dim: usize,
    pub level: usize,
    pub levels: Vec<Vec<f64>>,
}

/// Number of coefficients in levels `0..=level` over `dim` letters, or `None`
/// on overflow.
pub fn tensor_size(dim: usize, level: usize) -> Option<usize> {
    let mut total: usize = 1;
    let mut width: usize = 1;
    for _ in 0..level {
        width = width.checked_mul(dim)?;
        total = total.checked_add(width)?;
    }
    Some(total)
}

impl TruncatedTensor {
    /// The unit `(1, 0, 0, ...)`.
    pub fn one(ambient_dim: usize, level: usize) -> Self {
        let mut levels = Vec::with_capacity(level + 1);
        levels.push(vec![1.0]);
        let mut width = 1;
        for _ in 0..level {
            width *= ambient_dim;
            levels.push(vec![0.0; width]);
        }
        Self {
            ambient_dim,
            level,
            levels,
        }
    }

    pub fn level_norms_sq(&self) -> Vec<f64> {
        self.levels
            .iter()
            .map(|l| l.iter().map(|v| v * v).sum())
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.level_norms_sq().iter().sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TruncatedTensor) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum())
    }

    fn check_compatible(&self, other: &TruncatedTensor) -> Result<()> {
        if self.ambient_dim != other.ambient_dim || self.level != other.level {
            return Err(Error::arg(format!(
                "tensors over (D={}, M={}) and (D={}, M={}) are not compatible",
                self.ambient_dim, self.level, other.ambient_dim, other.level
            )));
        }
        Ok(())
    }

    /// Truncated tensor product.
    pub fn product(&self, other: &TruncatedTensor) -> Result<TruncatedTensor> {
        self.check_compatible(other)?;
        let mut out = TruncatedTensor::one(self.ambient_dim, self.level);
        out.levels[0][0] = self.levels[0][0] * other.levels[0][0];
        for k in 1..=self.level {
            let target = &mut out.levels[k];
            for i in 0..=k {
                let (a, b) = (&self.levels[i], &other.levels[k - i]);
                let wb = b.len();
                for (ia, &va) in a.iter().enumerate() {
                    if va == 0.0 {
                        continue;
                    }
                    let row = &mut target[ia * wb..(ia + 1) * wb];
                    for (t, &vb) in row.iter_mut().zip(b) {
                        *t += va * vb;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplies level `k` by `lambda^k`.
    pub fn scaled(&self, lambda: f64) -> TruncatedTensor {
        let mut out = self.clone();
        let mut factor = 1.0;
        for level in out.levels.iter_mut().skip(1) {
            factor *= lambda;
            level.iter_mut().for_each(|v| *v *= factor);
        }
        out
    }
}

/// Discrete signature of a path truncated at `level`, built increment by
/// increment with `S_k += S_(k-1) (x) delta`. Fails with a size error when
/// the tensor would exceed `budget_bytes`.
pub fn discrete_signature(path: &FeaturePath, level: usize, budget_bytes: usize) -> Result<TruncatedTensor> {
    if path.is_empty() {
        return Err(Error::arg("signature of an empty path"));
    }
    let d = path.dim;
    let coeffs = tensor_size(d, level).unwrap_or(usize::MAX);
    let bytes = (coeffs as u128) * 8;
    if bytes > budget_bytes as u128 {
        return Err(Error::Size {
            what: format!("signature tensor (D={d}, M={level}; bytes, use the kernel-trick route instead)"),
            estimate: bytes,
            limit: budget_bytes as u128,
        });
    }
    let mut sig = TruncatedTensor::one(d, level);
    let mut delta = vec![0.0; d];
    for t in 1..path.len() {
        let (prev, next) = (path.row(t - 1), path.row(t));
        for j in 0..d {
            delta[j] = next[j] - prev[j];
        }
        for k in (1..=level).rev() {
            let (lower, upper) = sig.levels.split_at_mut(k);
            let (src, dst) = (&lower[k - 1], &mut upper[0]);
            for (i, &s) in src.iter().enumerate() {
                let row = &mut dst[i * d..(i + 1) * d];
                for (r, &dj) in row.iter_mut().zip(&delta) {
                    *r += s * dj;
                }
            }
        }
    }
    Ok(sig)
}

/// Increment Gram matrix `A[s, t] = <p1(s+1) - p1(s), p2(t+1) - p2(t)>`.
pub fn increment_gram(p1: &FeaturePath, p2: &FeaturePath) -> Result<Matrix> {
    if p1.dim != p2.dim {
        return Err(Error::arg(format!(
            "paths of dimension {} and {} cannot be paired",
            p1.dim, p2.dim
        )));
    }
    let inc = |p: &FeaturePath| -> Vec<Vec<f64>> {
        (1..p.len())
            .map(|t| p.row(t).iter().zip(p.row(t - 1)).map(|(a, b)| a - b).collect())
            .collect()
    };
    let (a, b) = (inc(p1), inc(p2));
    Ok(Matrix::from_fn(a.len(), b.len(), |s, t| {
        a[s].iter().zip(&b[t]).map(|(x, y)| x * y).sum()
    }))
}

/// Increment Gram matrix from a kernel matrix over path states, by the second
/// difference `K[j+1,k+1] - K[j,k+1] - K[j+1,k] + K[j,k]`.
pub fn increment_gram_from_kernel(k: &Matrix) -> Result<Matrix> {
    if k.rows == 0 || k.cols == 0 {
        return Err(Error::arg("state kernel matrix must be nonempty"));
    }
    Ok(Matrix::from_fn(k.rows - 1, k.cols - 1, |j, l| {
        k.get(j + 1, l + 1) - k.get(j, l + 1) - k.get(j + 1, l) + k.get(j, l)
    }))
}

/// Per-level contributions `<S_m(p1), S_m(p2)>` for `m = 0..=level`, from the
/// increment Gram matrix alone.
pub fn signature_kernel_levels(a: &Matrix, level: usize) -> Vec<f64> {
    let mut sums = Vec::with_capacity(level + 1);
    sums.push(1.0);
    if level == 0 {
        return sums;
    }
    let (rows, cols) = (a.rows, a.cols);
    let mut r = a.data.clone();
    sums.push(r.iter().sum());
    let mut next = vec![0.0; rows * cols];
    let mut acc = vec![0.0; cols];
    for _ in 2..=level {
        // acc[t] holds sum_{s' < s, t' < t} r[s', t'] while row s is processed.
        acc.iter_mut().for_each(|v| *v = 0.0);
        let mut total = 0.0;
        for s in 0..rows {
            for t in 0..cols {
                let v = a.data[s * cols + t] * acc[t];
                next[s * cols + t] = v;
                total += v;
            }
            let mut running = 0.0;
            for t in 0..cols {
                acc[t] += running;
                running += r[s * cols + t];
            }
        }
        std::mem::swap(&mut r, &mut next);
        sums.push(total);
    }
    sums
}

/// Truncated signature kernel `1 + sum_m sum_(s,t) R^(m)[s,t]`.
pub fn signature_kernel_dp(a: &Matrix, level: usize) -> f64 {
    signature_kernel_levels(a, level).iter().sum()
}

/// Normalisation function `psi(x) = 2 - 1/x`.
pub fn psi(x: f64) -> f64 {
    2.0 - 1.0 / x
}

/// Dilation `lambda` in (0, 1] solving `sum_(k>=1) lambda^(2k) n_k = psi(|t|) - 1`,
/// where `n_k` are the squared level norms (index 0 is level 0).
pub fn normalization_factor(level_norms_sq: &[f64]) -> f64 {
    let higher: f64 = level_norms_sq.iter().skip(1).sum();
    if !(higher > 0.0) {
        return 1.0;
    }
    let norm = (level_norms_sq.first().copied().unwrap_or(1.0) + higher).sqrt();
    let target = psi(norm) - 1.0;
    let lhs = |lambda: f64| -> f64 {
        let l2 = lambda * lambda;
        let mut p = 1.0;
        level_norms_sq
            .iter()
            .skip(1)
            .map(|n| {
                p *= l2;
                p * n
            })
            .sum()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if lhs(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rescales a tensor by the dilation that brings its squared norm to
/// `psi(|t|)`. Returns the tensor and the dilation used.
pub fn tensor_normalize(t: &TruncatedTensor) -> (TruncatedTensor, f64) {
    let lambda = normalization_factor(&t.level_norms_sq());
    if lambda == 1.0 {
        return (t.clone(), 1.0);
    }
    (t.scaled(lambda), lambda)
}

/// Delay embedding: row `t` of the output stacks `path(t - i*tau)` for
/// `i = 0..=lags`, with zeros before the start of the path.
pub fn sliding_window(path: &FeaturePath, lags: usize, tau: usize) -> Result<FeaturePath> {
    if tau == 0 {
        return Err(Error::arg("delay must be at least 1"));
    }
    if lags == 0 {
        return Ok(path.clone());
    }
    let d = path.dim;
    let width = d * (lags + 1);
    let mut data = vec![0.0; width * path.len()];
    for t in 0..path.len() {
        for i in 0..=lags {
            if let Some(src) = t.checked_sub(i * tau) {
                data[t * width + i * d..t * width + (i + 1) * d].copy_from_slice(path.row(src));
            }
        }
    }
    FeaturePath::new(path.times.clone(), width, data, path.provenance)
}

/// Sum of the Euclidean norms of the increments.
pub fn one_variation(path: &FeaturePath) -> f64 {
    (1..path.len())
        .map(|t| {
            path.row(t)
                .iter()
                .zip(path.row(t - 1))
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .sum()
}

/// `sqrt(exp(ell^2) ell^(M+1) / (M+1)!)`, a bound on the norm of the levels
/// above `M` of a discrete signature whose path has 1-variation `ell`.
pub fn signature_truncation_bound(ell: f64, level: usize) -> f64 {
    if ell <= 0.0 {
        return 0.0;
    }
    let log_fact: f64 = (1..=level + 1).map(|k| (k as f64).ln()).sum();
    (0.5 * (ell * ell + (level + 1) as f64 * ell.ln() - log_fact)).exp()
}

/// How signature kernels between paths are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelRoute {
    /// Materialise truncated signatures and take inner products.
    Explicit,
    /// Dynamic programming over increment Gram matrices.
    KernelTrick,
}

impl std::str::FromStr for KernelRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit" => Ok(KernelRoute::Explicit),
            "kernel-trick" | "dp" => Ok(KernelRoute::KernelTrick),
            other => Err(Error::arg(format!("unknown kernel route {other:?}"))),
        }
    }
}

impl std::fmt::Display for KernelRoute {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KernelRoute::Explicit => "explicit",
            KernelRoute::KernelTrick => "kernel-trick",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SignatureKernelConfig {
    pub level: usize,
    pub route: KernelRoute,
    pub normalize: bool,
    pub lags: usize,
    pub tau: usize,
    pub budget_bytes: usize,
}

impl Default for SignatureKernelConfig {
    fn default() -> Self {
        Self {
            level: 3,
            route: KernelRoute::KernelTrick,
            normalize: false,
            lags: 0,
            tau: 1,
            budget_bytes: DEFAULT_TENSOR_BUDGET,
        }
    }
}

/// A collection of paths whose pairwise increment Gram matrices can be formed.
pub trait PathCollection: Sync {
    fn count(&self) -> usize;
    fn increment_gram(&self, i: usize, other: &Self, j: usize) -> Result<Matrix>;
}

impl PathCollection for [FeaturePath] {
    fn count(&self) -> usize {
        self.len()
    }

    fn increment_gram(&self, i: usize, other: &Self, j: usize) -> Result<Matrix> {
        increment_gram(&self[i], &other[j])
    }
}

/// Diagram paths compared through the closed-form moment kernel on each
/// frame, summed over the selected homology dimensions.
pub struct MomentKernelPaths<'a> {
    pub paths: &'a [DiagramPath],
    pub dims: Vec<usize>,
}

impl MomentKernelPaths<'_> {
    fn state_kernel(&self, i: usize, other: &Self, j: usize) -> Result<Matrix> {
        let (a, b) = (&self.paths[i], &other.paths[j]);
        let mut k = Matrix::zeros(a.frames.len(), b.frames.len());
        for (s, fa) in a.frames.iter().enumerate() {
            for (t, fb) in b.frames.iter().enumerate() {
                let mut v = 0.0;
                for &d in &self.dims {
                    v += moment_kernel(&fa[d], &fb[d])?;
                }
                k.set(s, t, v);
            }
        }
        Ok(k)
    }
}

impl PathCollection for MomentKernelPaths<'_> {
    fn count(&self) -> usize {
        self.paths.len()
    }

    fn increment_gram(&self, i: usize, other: &Self, j: usize) -> Result<Matrix> {
        increment_gram_from_kernel(&self.state_kernel(i, other, j)?)
    }
}

fn normalized_sum(levels: &[f64], scale: f64) -> f64 {
    let mut p = 1.0;
    let mut total = 0.0;
    for &v in levels {
        total += p * v;
        p *= scale;
    }
    total
}

/// Signature-kernel Gram matrix by dynamic programming. With `cols` absent the
/// Gram of `rows` with itself is computed (and symmetrised).
pub fn dp_gram<C: PathCollection + ?Sized>(rows: &C, cols: Option<&C>, level: usize, normalize: bool) -> Result<Matrix> {
    let (n, symmetric) = (rows.count(), cols.is_none());
    let cols_ref = cols.unwrap_or(rows);
    let m = cols_ref.count();
    let self_factors = |c: &C| -> Result<Vec<f64>> {
        (0..c.count())
            .into_par_iter()
            .map(|i| Ok(normalization_factor(&signature_kernel_levels(&c.increment_gram(i, c, i)?, level))))
            .collect()
    };
    let (row_lambda, col_lambda) = if normalize {
        let r = self_factors(rows)?;
        let c = if symmetric { r.clone() } else { self_factors(cols_ref)? };
        (r, c)
    } else {
        (vec![1.0; n], vec![1.0; m])
    };
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (if symmetric { i } else { 0 }..m).map(move |j| (i, j)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let levels = signature_kernel_levels(&rows.increment_gram(i, cols_ref, j)?, level);
            Ok(normalized_sum(&levels, row_lambda[i] * col_lambda[j]))
        })
        .collect::<Result<_>>()?;
    let mut g = Matrix::zeros(n, m);
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        g.set(i, j, v);
        if symmetric {
            g.set(j, i, v);
        }
    }
    if symmetric {
        g.symmetrize();
    }
    Ok(g)
}

/// Signature-kernel Gram matrix from explicit truncated signatures.
pub fn explicit_gram(rows: &[FeaturePath], cols: Option<&[FeaturePath]>, level: usize, normalize: bool, budget_bytes: usize) -> Result<Matrix> {
    let sigs = |paths: &[FeaturePath]| -> Result<Vec<TruncatedTensor>> {
        paths
            .par_iter()
            .map(|p| {
                let s = discrete_signature(p, level, budget_bytes)?;
                Ok(if normalize { tensor_normalize(&s).0 } else { s })
            })
            .collect()
    };
    let a = sigs(rows)?;
    let b = match cols {
        Some(c) => sigs(c)?,
        None => Vec::new(),
    };
    let other = if cols.is_some() { &b } else { &a };
    let data: Vec<f64> = (0..a.len() * other.len())
        .into_par_iter()
        .map(|idx| a[idx / other.len()].dot(&other[idx % other.len()]))
        .collect::<Result<_>>()?;
    let mut g = Matrix::from_vec(a.len(), other.len(), data)?;
    if cols.is_none() {
        g.symmetrize();
    }
    Ok(g)
}

/// Applies the configured delay embedding, then evaluates the Gram matrix by
/// the configured route.
pub fn signature_gram(rows: &[FeaturePath], cols: Option<&[FeaturePath]>, cfg: &SignatureKernelConfig) -> Result<Matrix> {
    let embed = |paths: &[FeaturePath]| -> Result<Vec<FeaturePath>> {
        paths.iter().map(|p| sliding_window(p, cfg.lags, cfg.tau)).collect()
    };
    let a = embed(rows)?;
    let b = cols.map(embed).transpose()?;
    match cfg.route {
        KernelRoute::Explicit => explicit_gram(&a, b.as_deref(), cfg.level, cfg.normalize, cfg.budget_bytes),
        KernelRoute::KernelTrick => dp_gram(a.as_slice(), b.as_deref(), cfg.level, cfg.normalize),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::Provenance;

    fn path1(values: &[f64]) -> FeaturePath {
        FeaturePath::from_rows(&values.iter().map(|&v| vec![v]).collect::<Vec<_>>(), Provenance::Other).unwrap()
    }

    #[test]
    fn constant_path_signature() {
        let p = FeaturePath::from_rows(&vec![vec![1.0, 2.0]; 4], Provenance::Other).unwrap();
        let s = discrete_signature(&p, 3, DEFAULT_TENSOR_BUDGET).unwrap();
        assert_eq!(s, TruncatedTensor::one(2, 3));
    }

    #[test]
    fn one_dimensional_examples() {
        let s = discrete_signature(&path1(&[0.0, 1.0, 3.0]), 2, DEFAULT_TENSOR_BUDGET).unwrap();
        assert_eq!(s.levels, vec![vec![1.0], vec![3.0], vec![2.0]]);
        let s = discrete_signature(&path1(&[0.0, 2.0, 6.0]), 2, DEFAULT_TENSOR_BUDGET).unwrap();
        assert_eq!(s.levels, vec![vec![1.0], vec![6.0], vec![8.0]]);
    }

    #[test]
    fn budget_guard() {
        let p = FeaturePath::from_rows(&[vec![0.0; 66], vec![1.0; 66]], Provenance::Moment).unwrap();
        assert!(matches!(
            discrete_signature(&p, 8, DEFAULT_TENSOR_BUDGET),
            Err(Error::Size { .. })
        ));
        assert!(discrete_signature(&p, 3, DEFAULT_TENSOR_BUDGET).is_ok());
    }

    #[test]
    fn gram_examples() {
        let a = increment_gram(&path1(&[0.0, 1.0, 3.0]), &path1(&[0.0, 2.0])).unwrap();
        assert_eq!((a.rows, a.cols, a.data.clone()), (2, 1, vec![2.0, 4.0]));
        let z = increment_gram(&path1(&[0.0, 1.0, 3.0]), &path1(&[5.0, 5.0, 5.0])).unwrap();
        assert!(z.data.iter().all(|&v| v == 0.0));
        assert_eq!(signature_kernel_dp(&z, 4), 1.0);
        let two = FeaturePath::from_rows(&[vec![0.0, 0.0]], Provenance::Other).unwrap();
        assert!(increment_gram(&path1(&[0.0]), &two).is_err());
    }

    #[test]
    fn kernel_route_matches_linear_kernel() {
        let p = FeaturePath::from_rows(&[vec![0.0, 1.0], vec![2.0, -1.0], vec![3.0, 3.0]], Provenance::Other).unwrap();
        let q = FeaturePath::from_rows(&[vec![1.0, 1.0], vec![0.0, 4.0]], Provenance::Other).unwrap();
        let k = Matrix::from_fn(3, 2, |s, t| p.row(s).iter().zip(q.row(t)).map(|(a, b)| a * b).sum());
        assert_eq!(increment_gram_from_kernel(&k).unwrap(), increment_gram(&p, &q).unwrap());
    }

    #[test]
    fn dp_examples() {
        let p = path1(&[0.0, 1.0, 3.0]);
        let a = increment_gram(&p, &p).unwrap();
        assert_eq!(signature_kernel_dp(&a, 0), 1.0);
        assert_eq!(signature_kernel_dp(&a, 2), 14.0);
        assert_eq!(signature_kernel_levels(&a, 2), vec![1.0, 9.0, 4.0]);
    }

    #[test]
    fn normalization_examples() {
        let unit = TruncatedTensor::one(2, 3);
        let (n, lambda) = tensor_normalize(&unit);
        assert_eq!((n, lambda), (unit, 1.0));

        for v in [0.3, 1.0, 4.0, 50.0] {
            let mut t = TruncatedTensor::one(1, 2);
            t.levels[1][0] = v;
            let (out, lambda) = tensor_normalize(&t);
            let expected = (psi((1.0 + v * v).sqrt()) - 1.0).sqrt() / v;
            assert!((lambda - expected).abs() < 1e-11, "{v}: {lambda} vs {expected}");
            assert!((out.norm().powi(2) - psi(t.norm())).abs() < 1e-10);
        }
    }

    #[test]
    fn window_and_variation() {
        let p = path1(&[5.0, 7.0]);
        assert_eq!(sliding_window(&p, 0, 1).unwrap(), p);
        let w = sliding_window(&p, 1, 1).unwrap();
        assert_eq!((w.dim, w.data.clone()), (2, vec![5.0, 0.0, 7.0, 5.0]));
        assert!(sliding_window(&p, 1, 0).is_err());
        assert_eq!(one_variation(&path1(&[2.0, 2.0, 2.0])), 0.0);
        assert_eq!(one_variation(&path1(&[0.0, 1.0, 3.0])), 3.0);
        assert_eq!(one_variation(&path1(&[-1.0, 0.5, 2.0, 7.5])), 8.5);
    }

    #[test]
    fn truncation_bound_values() {
        assert_eq!(signature_truncation_bound(0.0, 3), 0.0);
        let b = signature_truncation_bound(1.0, 3);
        assert!((b - (std::f64::consts::E / 24.0).sqrt()).abs() < 1e-14);
        assert!((b - 0.33658).abs() < 1e-4);
    }

    #[test]
    fn gram_routes_agree() {
        let paths: Vec<FeaturePath> = (0..4)
            .map(|i| {
                let rows: Vec<Vec<f64>> = (0..5)
                    .map(|t| vec![(t * (i + 1)) as f64 * 0.1, ((t + i) % 3) as f64 * 0.2])
                    .collect();
                FeaturePath::from_rows(&rows, Provenance::Other).unwrap()
            })
            .collect();
        for normalize in [false, true] {
            let mut cfg = SignatureKernelConfig {
                level: 3,
                normalize,
                lags: 1,
                ..Default::default()
            };
            let dp = signature_gram(&paths, None, &cfg).unwrap();
            cfg.route = KernelRoute::Explicit;
            let ex = signature_gram(&paths, None, &cfg).unwrap();
            for (a, b) in dp.data.iter().zip(&ex.data) {
                assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{a} vs {b}");
            }
            let cross = signature_gram(&paths[..2], Some(&paths[1..]), &cfg).unwrap();
            assert_eq!((cross.rows, cross.cols), (2, 3));
            assert!((cross.get(0, 0) - ex.get(0, 1)).abs() <= 1e-12 * ex.get(0, 1).abs());
        }
    }
}
