//! Feature maps for static diagrams and their assembly into paths.
//!
//! The moment map sends a point `(x1, x2)` (birth, lifetime) to the monomials
//! `sqrt(1 / (a! b!)) x1^a x2^b` with `b >= 1`, plus a constant slot; a
//! diagram maps to the sum over its points. Its inner products have the closed
//! form implemented by [`moment_kernel`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::{betti_curve, DiagramFrame, DiagramPath, PersistenceDiagram};
use crate::signature::{discrete_signature, DEFAULT_TENSOR_BUDGET};
use crate::swarm::Point3;

/// Where the vectors of a [`FeaturePath`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Other,
    Moment,
    CrockerColumn,
    BettiSignature,
    BettiCurve,
}

impl Provenance {
    pub fn tag(self) -> u8 {
        match self {
            Provenance::Other => 0,
            Provenance::Moment => 1,
            Provenance::CrockerColumn => 2,
            Provenance::BettiSignature => 3,
            Provenance::BettiCurve => 4,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => Provenance::Other,
            1 => Provenance::Moment,
            2 => Provenance::CrockerColumn,
            3 => Provenance::BettiSignature,
            4 => Provenance::BettiCurve,
            _ => return None,
        })
    }
}

/// A discrete path of fixed-dimension real vectors, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePath {
    pub times: Vec<f64>,
    pub dim: usize,
    pub data: Vec<f64>,
    pub provenance: Provenance,
}

impl FeaturePath {
    pub fn new(times: Vec<f64>, dim: usize, data: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if data.len() != times.len() * dim {
            return Err(Error::arg(format!(
                "feature path with {} times and dimension {dim} needs {} values, got {}",
                times.len(),
                times.len() * dim,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::arg("feature path entries must be finite"));
        }
        Ok(Self {
            times,
            dim,
            data,
            provenance,
        })
    }

    /// Path with times `0, 1, 2, ...`.
    pub fn from_rows(rows: &[Vec<f64>], provenance: Provenance) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::arg("all rows of a feature path must have the same length"));
        }
        let times = (0..rows.len()).map(|t| t as f64).collect();
        Self::new(times, dim, rows.concat(), provenance)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1)).take(self.len())
    }
}

/// Exponent pairs `(a, b)` of the degree-`n` moment vector, after the constant
/// slot: graded by total degree, then `a` ascending, always with `b >= 1`.
pub fn moment_exponents(degree: usize) -> Vec<(u32, u32)> {
    (1..=degree as u32)
        .flat_map(|m| (0..m).map(move |a| (a, m - a)))
        .collect()
}

/// Length of a degree-`n` moment vector: `n(n+1)/2 + 1`.
pub fn moment_len(degree: usize) -> usize {
    degree * (degree + 1) / 2 + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub degree: usize,
    pub bound: f64,
    /// Constant slot first, then [`moment_exponents`] order.
    pub coeffs: Vec<f64>,
}

impl MomentVector {
    /// Point mass of the diagram (the constant slot).
    pub fn mass(&self) -> f64 {
        self.coeffs[0]
    }

    /// The coefficients of the monomials, without the constant slot.
    pub fn monomials(&self) -> &[f64] {
        &self.coeffs[1..]
    }

    pub fn dot(&self, other: &MomentVector) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }
}

fn factorials(n: usize) -> Vec<f64> {
    let mut f = vec![1.0; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as f64;
    }
    f
}

/// Truncated moment map of a diagram: the sum over its points of the
/// normalised monomials of total degree `<= degree`.
pub fn moment_features(diagram: &PersistenceDiagram, degree: usize) -> Result<MomentVector> {
    if degree == 0 {
        return Err(Error::arg("moment degree must be at least 1"));
    }
    let exps = moment_exponents(degree);
    let fact = factorials(degree);
    let norm: Vec<f64> = exps
        .iter()
        .map(|&(a, b)| (1.0 / (fact[a as usize] * fact[b as usize])).sqrt())
        .collect();
    let mut coeffs = vec![0.0; exps.len() + 1];
    let mut pow_b = vec![0.0; degree + 1];
    let mut pow_l = vec![0.0; degree + 1];
    for p in &diagram.points {
        pow_b[0] = 1.0;
        pow_l[0] = 1.0;
        for k in 1..=degree {
            pow_b[k] = pow_b[k - 1] * p.birth;
            pow_l[k] = pow_l[k - 1] * p.lifetime;
        }
        coeffs[0] += 1.0;
        for (slot, (&(a, b), &c)) in exps.iter().zip(&norm).enumerate() {
            coeffs[slot + 1] += c * pow_b[a as usize] * pow_l[b as usize];
        }
    }
    if diagram.weight != 1.0 {
        coeffs.iter_mut().for_each(|c| *c *= diagram.weight);
    }
    Ok(MomentVector {
        degree,
        bound: diagram.bound,
        coeffs,
    })
}

/// Closed-form inner product of the untruncated moment maps:
/// `sum_ij exp(x_i . y_j) - exp(x_i1 y_j1) + 1`.
pub fn moment_kernel(x: &PersistenceDiagram, y: &PersistenceDiagram) -> Result<f64> {
    let mut total = 0.0;
    for p in &x.points {
        for q in &y.points {
            let births = p.birth * q.birth;
            let lifetimes = p.lifetime * q.lifetime;
            // exp(x.y) - exp(x1 y1) = exp(x1 y1) * expm1(x2 y2), kept in log form
            // until the magnitude is known to fit.
            let e = lifetimes.exp_m1();
            let log_term = births + e.ln();
            if !e.is_finite() || log_term >= f64::MAX.ln() {
                return Err(Error::Overflow(format!(
                    "moment kernel term exp({}) exceeds f64 range",
                    births + lifetimes
                )));
            }
            total += births.exp() * e + 1.0;
        }
    }
    let total = total * x.weight * y.weight;
    if !total.is_finite() {
        return Err(Error::Overflow("moment kernel sum exceeds f64 range".into()));
    }
    Ok(total)
}

/// Upper bound on the norm of the moment map's degree-`n` truncation error:
/// `sum_i exp(s_i) s_i^(n+1) / (n+1)!` with `s_i = birth_i + lifetime_i`.
pub fn moment_truncation_bound(diagram: &PersistenceDiagram, degree: usize) -> f64 {
    let log_fact: f64 = (1..=degree + 1).map(|k| (k as f64).ln()).sum();
    diagram.weight
        * diagram
            .points
            .iter()
            .map(|p| {
                let s = p.birth + p.lifetime;
                if s <= 0.0 {
                    0.0
                } else {
                    (s + (degree + 1) as f64 * s.ln() - log_fact).exp()
                }
            })
            .sum::<f64>()
}

/// Betti curves of a frame on a scale grid, as a path in R^3 over the grid.
pub fn betti_embedding(frame: &DiagramFrame, eps_grid: &[f64]) -> Result<FeaturePath> {
    if eps_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg("eps grid must be strictly increasing"));
    }
    let data = eps_grid
        .iter()
        .flat_map(|&eps| frame.iter().map(move |d| betti_curve(d, eps)))
        .collect();
    FeaturePath::new(eps_grid.to_vec(), 3, data, Provenance::BettiCurve)
}

/// Frame indices `0, stride, 2*stride, ...` below `len`.
fn strided(len: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..len).step_by(stride.max(1))
}

/// Crocker vector: Betti curves of dimensions 0, 1, 2 on `eps_grid` at every
/// `time_stride`-th frame, flattened in `[dim][time][eps]` order.
pub fn crocker_vector(path: &DiagramPath, eps_grid: &[f64], time_stride: usize) -> Result<Vec<f64>> {
    if eps_grid.is_empty() || path.frames.is_empty() {
        return Err(Error::arg("crocker vector needs a nonempty scale grid and path"));
    }
    if time_stride == 0 {
        return Err(Error::arg("time stride must be at least 1"));
    }
    let frames: Vec<usize> = strided(path.frames.len(), time_stride).collect();
    let mut out = Vec::with_capacity(3 * frames.len() * eps_grid.len());
    for dim in 0..3 {
        for &t in &frames {
            let d = &path.frames[t][dim];
            out.extend(eps_grid.iter().map(|&eps| betti_curve(d, eps)));
        }
    }
    Ok(out)
}

/// Number of time columns a crocker vector keeps.
pub fn crocker_time_count(n_frames: usize, time_stride: usize) -> usize {
    n_frames.div_ceil(time_stride.max(1))
}

/// Path of concatenated moment vectors (dimensions in `dims`, each of degree
/// `degree`), one row per frame.
pub fn moment_path(path: &DiagramPath, degree: usize, dims: &[usize]) -> Result<FeaturePath> {
    if dims.iter().any(|&d| d > 2) {
        return Err(Error::arg("homology dimensions must be 0, 1 or 2"));
    }
    let width = dims.len() * moment_len(degree);
    let mut data = Vec::with_capacity(width * path.frames.len());
    for frame in &path.frames {
        for &d in dims {
            data.extend(moment_features(&frame[d], degree)?.coeffs);
        }
    }
    FeaturePath::new(path.times.clone(), width, data, Provenance::Moment)
}

/// Path over time of the level-`level` signatures of each frame's Betti
/// embedding (levels 1..=level flattened; the constant level is dropped).
pub fn betti_signature_path(path: &DiagramPath, eps_grid: &[f64], level: usize) -> Result<FeaturePath> {
    let width: usize = (1..=level as u32).map(|k| 3usize.pow(k)).sum();
    let mut data = Vec::with_capacity(width * path.frames.len());
    for frame in &path.frames {
        let curve = betti_embedding(frame, eps_grid)?;
        let sig = discrete_signature(&curve, level, DEFAULT_TENSOR_BUDGET)?;
        data.extend(sig.levels.iter().skip(1).flatten());
    }
    FeaturePath::new(path.times.clone(), width, data, Provenance::BettiSignature)
}

/// Crocker columns as a path: one row per kept frame, `[dim][eps]` within the row.
pub fn crocker_path(path: &DiagramPath, eps_grid: &[f64], time_stride: usize) -> Result<FeaturePath> {
    if time_stride == 0 {
        return Err(Error::arg("time stride must be at least 1"));
    }
    let frames: Vec<usize> = strided(path.frames.len(), time_stride).collect();
    let mut data = Vec::with_capacity(frames.len() * 3 * eps_grid.len());
    for &t in &frames {
        for dim in 0..3 {
            data.extend(eps_grid.iter().map(|&eps| betti_curve(&path.frames[t][dim], eps)));
        }
    }
    let times = frames.iter().map(|&t| path.times[t]).collect();
    FeaturePath::new(times, 3 * eps_grid.len(), data, Provenance::CrockerColumn)
}

/// Multiplies cloud coordinates by `n^(1/d)`.
pub fn normalize_by_count(cloud: &[Point3], n: usize, ambient_dim: usize) -> Result<Vec<Point3>> {
    if n == 0 || ambient_dim == 0 {
        return Err(Error::arg("count and ambient dimension must be positive"));
    }
    if n == 1 {
        return Ok(cloud.to_vec());
    }
    let s = (n as f64).powf(1.0 / ambient_dim as f64);
    Ok(cloud.iter().map(|p| [p[0] * s, p[1] * s, p[2] * s]).collect())
}

/// The diagram as a measure with mass `1/n` per point.
pub fn diagram_scale(diagram: &PersistenceDiagram, n: usize) -> Result<PersistenceDiagram> {
    if n == 0 {
        return Err(Error::arg("count must be positive"));
    }
    Ok(diagram.scaled(1.0 / n as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::DiagramPoint;

    fn diag(points: &[(f64, f64)], bound: f64) -> PersistenceDiagram {
        PersistenceDiagram::new(1, bound, points.iter().map(|&(b, l)| DiagramPoint::new(b, l))).unwrap()
    }

    #[test]
    fn exponent_layout() {
        assert_eq!(moment_len(6), 22);
        assert_eq!(moment_exponents(6).len() + 1, 22);
        assert_eq!(moment_exponents(2), vec![(0, 1), (0, 2), (1, 1)]);
        assert!(moment_exponents(9).iter().all(|&(_, b)| b >= 1));
    }

    #[test]
    fn moments_of_unit_point() {
        let m = moment_features(&diag(&[(1.0, 1.0)], 2.0), 2).unwrap();
        // constant, (0,1), (0,2), (1,1)
        assert_eq!(m.coeffs[0], 1.0);
        assert_eq!(m.coeffs[1], 1.0);
        assert!((m.coeffs[2] - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.coeffs[3], 1.0);
        let twice = moment_features(&diag(&[(1.0, 1.0), (1.0, 1.0)], 2.0), 2).unwrap();
        for (a, b) in twice.coeffs.iter().zip(&m.coeffs) {
            assert_eq!(*a, 2.0 * b);
        }
    }

    #[test]
    fn empty_diagram_moments_are_zero() {
        let m = moment_features(&PersistenceDiagram::empty(0, 1.0), 4).unwrap();
        assert_eq!(m.coeffs, vec![0.0; moment_len(4)]);
        assert!(moment_features(&PersistenceDiagram::empty(0, 1.0), 0).is_err());
    }

    #[test]
    fn kernel_closed_form_values() {
        let unit = diag(&[(1.0, 1.0)], 2.0);
        let k = moment_kernel(&unit, &unit).unwrap();
        let e = std::f64::consts::E;
        assert!((k - (e * e - e + 1.0)).abs() < 1e-12);
        assert_eq!(moment_kernel(&unit, &PersistenceDiagram::empty(1, 2.0)).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_pairs_contribute_the_constant() {
        // Built directly: the constructor would drop zero-lifetime points.
        let on_diag = |b: f64| PersistenceDiagram {
            dim: 1,
            points: vec![DiagramPoint::new(b, 0.0)],
            bound: 10.0,
            weight: 1.0,
        };
        for (a, b) in [(0.3, 2.0), (1.5, 4.0), (0.0, 0.0)] {
            assert_eq!(moment_kernel(&on_diag(a), &on_diag(b)).unwrap(), 1.0);
        }
    }

    #[test]
    fn kernel_overflow_is_reported() {
        let big = diag(&[(20.0, 20.0)], 40.0);
        assert!(matches!(moment_kernel(&big, &big), Err(Error::Overflow(_))));
    }

    #[test]
    fn truncation_bound_values() {
        assert_eq!(moment_truncation_bound(&PersistenceDiagram::empty(1, 1.0), 6), 0.0);
        let unit = diag(&[(1.0, 1.0)], 2.0);
        let e2 = std::f64::consts::E.powi(2);
        let b6 = moment_truncation_bound(&unit, 6);
        assert!((b6 - e2 * 128.0 / 5040.0).abs() < 1e-14);
        assert!((b6 - 0.18766).abs() < 1e-5);
        let mut prev = f64::INFINITY;
        for n in 1..30 {
            let b = moment_truncation_bound(&unit, n);
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn betti_embedding_examples() {
        let empty: DiagramFrame = [
            PersistenceDiagram::empty(0, 2.0),
            PersistenceDiagram::empty(1, 2.0),
            PersistenceDiagram::empty(2, 2.0),
        ];
        let p = betti_embedding(&empty, &[0.1, 0.5, 1.0]).unwrap();
        assert!(p.data.iter().all(|&v| v == 0.0));

        let mut frame = empty.clone();
        frame[1] = diag(&[(1.0, 2f64.sqrt() - 1.0)], 2.0);
        let p = betti_embedding(&frame, &[0.5, 1.2, 1.5]).unwrap();
        let beta1: Vec<f64> = p.rows().map(|r| r[1]).collect();
        assert_eq!(beta1, vec![0.0, 1.0, 0.0]);

        let mut single = empty;
        single[0] = PersistenceDiagram::new(0, 2.0, [DiagramPoint::new(0.0, 2.0)]).unwrap();
        let p = betti_embedding(&single, &[1.0, 3.0]).unwrap();
        assert_eq!(p.rows().map(|r| r[0]).collect::<Vec<_>>(), vec![1.0, 0.0]);

        assert!(betti_embedding(&single, &[1.0, 1.0]).is_err());
    }

    fn constant_path(frames: usize, frame: &DiagramFrame) -> DiagramPath {
        DiagramPath {
            times: (0..frames).map(|t| t as f64).collect(),
            frames: vec![frame.clone(); frames],
            sim_id: 0,
            scheme: "full".into(),
        }
    }

    #[test]
    fn crocker_shapes() {
        let empty: DiagramFrame = [
            PersistenceDiagram::empty(0, 1.0),
            PersistenceDiagram::empty(1, 1.0),
            PersistenceDiagram::empty(2, 1.0),
        ];
        let grid = crate::grid::Grid::log(1e-4, 1.0, 200).values();
        let v = crocker_vector(&constant_path(400, &empty), &grid, 20).unwrap();
        assert_eq!(v.len(), 12_000);
        assert_eq!(crocker_time_count(400, 20), 20);
        assert!(v.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn crocker_constant_path_tiles_columns() {
        let frame: DiagramFrame = [
            PersistenceDiagram::new(0, 1.0, [DiagramPoint::new(0.0, 0.4), DiagramPoint::new(0.0, 1.0)]).unwrap(),
            PersistenceDiagram::new(1, 1.0, [DiagramPoint::new(0.2, 0.3)]).unwrap(),
            PersistenceDiagram::empty(2, 1.0),
        ];
        let grid = [0.1, 0.3, 0.45, 0.6];
        let v = crocker_vector(&constant_path(7, &frame), &grid, 3).unwrap();
        let nt = crocker_time_count(7, 3);
        assert_eq!(nt, 3);
        for dim in 0..3 {
            let block = &v[dim * nt * grid.len()..(dim + 1) * nt * grid.len()];
            for t in 1..nt {
                assert_eq!(block[t * grid.len()..(t + 1) * grid.len()], block[..grid.len()]);
            }
        }
        assert_eq!(&v[..4], &[2.0, 2.0, 1.0, 1.0]);
        assert_eq!(&v[12..16], &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn count_normalisation() {
        let cloud = vec![[0.1, 0.2, 0.3], [1.0, -1.0, 0.5]];
        assert_eq!(normalize_by_count(&cloud, 1, 3).unwrap(), cloud);
        let doubled = normalize_by_count(&cloud, 8, 3).unwrap();
        for (p, q) in doubled.iter().zip(&cloud) {
            for k in 0..3 {
                assert!((p[k] - 2.0 * q[k]).abs() < 1e-15);
            }
        }
        let d = diag(&[(0.1, 0.5), (0.2, 0.2)], 1.0);
        let scaled = diagram_scale(&d, 4).unwrap();
        let (a, b) = (moment_features(&scaled, 5).unwrap(), moment_features(&d, 5).unwrap());
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y / 4.0).abs() <= 1e-16 * y.abs().max(1.0));
        }
    }

    #[test]
    fn moment_path_concatenates_dimensions() {
        let frame: DiagramFrame = [
            PersistenceDiagram::new(0, 1.0, [DiagramPoint::new(0.0, 0.4)]).unwrap(),
            PersistenceDiagram::new(1, 1.0, [DiagramPoint::new(0.2, 0.3)]).unwrap(),
            PersistenceDiagram::empty(2, 1.0),
        ];
        let p = moment_path(&constant_path(3, &frame), 3, &[0, 1]).unwrap();
        assert_eq!(p.dim, 2 * moment_len(3));
        assert_eq!(p.len(), 3);
        assert_eq!(p.row(0)[0], 1.0);
        assert_eq!(p.row(0)[moment_len(3)], 1.0);
    }
}
