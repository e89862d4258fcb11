//! Vietoris–Rips persistent homology in dimensions 0, 1 and 2.
//!
//! Diagrams are stored in birth/lifetime coordinates and bounded by a cap `T`:
//! every stored point has `birth >= 0`, `lifetime > 0` and
//! `birth + lifetime <= T`. Classes still alive at the filtration threshold
//! are given death `T`.

mod reduce;
mod rips;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::swarm::{Point3, PointCloudSeries};
pub use reduce::persistence_diagrams;
pub use rips::{enclosing_radius, rips_filtration, FilteredComplex, Simplex, DEFAULT_SIMPLEX_LIMIT};

/// Highest homology dimension tracked in a frame.
pub const MAX_HOMOLOGY_DIM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub birth: f64,
    pub lifetime: f64,
}

impl DiagramPoint {
    pub fn new(birth: f64, lifetime: f64) -> Self {
        Self { birth, lifetime }
    }

    pub fn death(&self) -> f64 {
        self.birth + self.lifetime
    }
}

/// A finite bounded persistence diagram for one homology dimension.
///
/// `weight` is the mass carried by each point. Ordinary diagrams have weight
/// one; diagrams rescaled as measures (see [`PersistenceDiagram::scaled`])
/// carry a fractional weight, and every linear feature scales with it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub dim: usize,
    pub points: Vec<DiagramPoint>,
    pub bound: f64,
    pub weight: f64,
}

impl PersistenceDiagram {
    pub fn empty(dim: usize, bound: f64) -> Self {
        Self {
            dim,
            points: Vec::new(),
            bound,
            weight: 1.0,
        }
    }

    /// Builds a diagram from birth/lifetime points, dropping points on the
    /// diagonal (lifetime <= 0). Fails if a point leaves the bounded region.
    pub fn new(dim: usize, bound: f64, points: impl IntoIterator<Item = DiagramPoint>) -> Result<Self> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(Error::arg(format!("diagram bound must be positive, got {bound}")));
        }
        let mut kept = Vec::new();
        for p in points {
            if !(p.birth.is_finite() && p.lifetime.is_finite()) {
                return Err(Error::arg("diagram points must be finite"));
            }
            if p.lifetime <= 0.0 {
                continue;
            }
            if p.birth < 0.0 || p.death() > bound * (1.0 + 1e-12) {
                return Err(Error::arg(format!(
                    "point ({}, {}) outside the bounded region for T = {bound}",
                    p.birth, p.lifetime
                )));
            }
            kept.push(p);
        }
        Ok(Self {
            dim,
            points: kept,
            bound,
            weight: 1.0,
        })
    }

    /// Builds a diagram from (birth, death) pairs. Deaths beyond the bound
    /// are capped at the bound.
    pub fn from_pairs(dim: usize, bound: f64, pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            dim,
            bound,
            pairs
                .iter()
                .map(|&(b, d)| DiagramPoint::new(b, d.min(bound) - b)),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The diagram viewed as a measure and multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            weight: self.weight * factor,
            ..self.clone()
        }
    }

    /// Points sorted by (birth, lifetime); handy for multiset comparison.
    pub fn sorted_points(&self) -> Vec<DiagramPoint> {
        let mut pts = self.points.clone();
        pts.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.lifetime.total_cmp(&b.lifetime))
        });
        pts
    }
}

/// Number of bars whose open interval `(birth, birth + lifetime)` contains `eps`.
pub fn betti_number(diagram: &PersistenceDiagram, eps: f64) -> usize {
    diagram
        .points
        .iter()
        .filter(|p| p.birth < eps && eps < p.death())
        .count()
}

/// Betti curve value at `eps`, scaled by the diagram's point weight.
pub fn betti_curve(diagram: &PersistenceDiagram, eps: f64) -> f64 {
    diagram.weight * betti_number(diagram, eps) as f64
}

/// Diagrams for dimensions 0, 1 and 2 at one time step.
pub type DiagramFrame = [PersistenceDiagram; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramPath {
    pub times: Vec<f64>,
    pub frames: Vec<DiagramFrame>,
    pub sim_id: u64,
    pub scheme: String,
}

impl DiagramPath {
    pub fn bound(&self) -> Option<f64> {
        self.frames.first().map(|f| f[0].bound)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.frames.len() {
            return Err(Error::arg("diagram path needs one frame per time"));
        }
        if let Some(t) = self.bound() {
            if self.frames.iter().flatten().any(|d| d.bound != t) {
                return Err(Error::arg("all frames of a diagram path must share one bound"));
            }
        }
        Ok(())
    }
}

/// How the Rips threshold is chosen for each cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ThresholdRepr", into = "ThresholdRepr")]
pub enum ThresholdPolicy {
    /// Enclosing radius of the cloud; beyond it the complex is a cone.
    Auto,
    Value(f64),
}

/// Config form of a threshold: `"auto"` or a number.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ThresholdRepr {
    Name(String),
    Value(f64),
}

impl TryFrom<ThresholdRepr> for ThresholdPolicy {
    type Error = Error;

    fn try_from(r: ThresholdRepr) -> Result<Self> {
        match r {
            ThresholdRepr::Name(s) => s.parse(),
            ThresholdRepr::Value(v) => v.to_string().parse(),
        }
    }
}

impl From<ThresholdPolicy> for ThresholdRepr {
    fn from(t: ThresholdPolicy) -> Self {
        match t {
            ThresholdPolicy::Auto => ThresholdRepr::Name("auto".into()),
            ThresholdPolicy::Value(v) => ThresholdRepr::Value(v),
        }
    }
}

impl std::str::FromStr for ThresholdPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(ThresholdPolicy::Auto);
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| *v > 0.0)
            .map(ThresholdPolicy::Value)
            .ok_or_else(|| Error::arg(format!("threshold must be `auto` or a positive number, got `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PersistenceConfig {
    pub max_dim: usize,
    pub threshold: ThresholdPolicy,
    /// Shared diagram bound `T`. `None` uses the largest per-cloud threshold.
    pub cap: Option<f64>,
    pub simplex_limit: usize,
}

impl Default for PersistenceConfig {
    fn default() -> Self {
        Self {
            max_dim: 2,
            threshold: ThresholdPolicy::Auto,
            cap: None,
            simplex_limit: DEFAULT_SIMPLEX_LIMIT,
        }
    }
}

impl PersistenceConfig {
    pub fn threshold_for(&self, cloud: &[Point3]) -> f64 {
        match self.threshold {
            ThresholdPolicy::Value(v) => v,
            // A single point (or all-duplicate cloud) has radius zero.
            ThresholdPolicy::Auto => enclosing_radius(cloud).max(f64::MIN_POSITIVE),
        }
    }
}

/// Computes the diagram frame of every cloud in a series. Clouds are
/// processed in parallel; each one is single-threaded.
pub fn diagram_path(
    series: &PointCloudSeries,
    config: &PersistenceConfig,
    sim_id: u64,
    scheme: &str,
) -> Result<DiagramPath> {
    series.validate()?;
    if config.max_dim > MAX_HOMOLOGY_DIM {
        return Err(Error::arg(format!("max_dim must be at most {MAX_HOMOLOGY_DIM}")));
    }
    let thresholds: Vec<f64> = series.clouds.iter().map(|c| config.threshold_for(c)).collect();
    let max_threshold = thresholds.iter().copied().fold(0.0, f64::max);
    let cap = config.cap.unwrap_or(max_threshold);
    if cap < max_threshold {
        return Err(Error::arg(format!(
            "cap T = {cap} is below the largest threshold {max_threshold}"
        )));
    }
    let frames = series
        .clouds
        .par_iter()
        .zip(thresholds.par_iter())
        .map(|(cloud, &threshold)| {
            let complex = rips_filtration(cloud, config.max_dim, threshold, config.simplex_limit)?;
            persistence_diagrams(&complex, cap)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagramPath {
        times: series.times.clone(),
        frames,
        sim_id,
        scheme: scheme.to_string(),
    })
}

/// Convenience: Rips persistence of one cloud with an explicit threshold and cap.
pub fn cloud_diagrams(cloud: &[Point3], max_dim: usize, threshold: f64, cap: f64) -> Result<DiagramFrame> {
    let complex = rips_filtration(cloud, max_dim, threshold, DEFAULT_SIMPLEX_LIMIT)?;
    persistence_diagrams(&complex, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_h1() -> PersistenceDiagram {
        PersistenceDiagram::new(1, 2.0, [DiagramPoint::new(1.0, 2f64.sqrt() - 1.0)]).unwrap()
    }

    #[test]
    fn betti_curve_strict_inequalities() {
        let d = square_h1();
        assert_eq!(betti_number(&d, 1.2), 1);
        assert_eq!(betti_number(&d, 0.9), 0);
        assert_eq!(betti_number(&d, 2f64.sqrt()), 0);
        assert_eq!(betti_number(&d, 1.0), 0);
        assert_eq!(betti_curve(&PersistenceDiagram::empty(0, 1.0), 0.3), 0.0);
    }

    #[test]
    fn overlapping_bars() {
        let d = PersistenceDiagram::new(
            0,
            2.0,
            [DiagramPoint::new(0.0, 1.0), DiagramPoint::new(0.5, 1.0)],
        )
        .unwrap();
        assert_eq!(betti_number(&d, 0.75), 2);
    }

    #[test]
    fn diagonal_points_are_dropped_and_bounds_enforced() {
        let d = PersistenceDiagram::new(
            1,
            1.0,
            [DiagramPoint::new(0.2, 0.0), DiagramPoint::new(0.1, 0.3)],
        )
        .unwrap();
        assert_eq!(d.len(), 1);
        assert!(PersistenceDiagram::new(1, 1.0, [DiagramPoint::new(0.5, 0.6)]).is_err());
        assert!(PersistenceDiagram::new(1, 1.0, [DiagramPoint::new(-0.1, 0.2)]).is_err());
    }

    #[test]
    fn scaled_diagram_scales_betti_curve() {
        let d = square_h1().scaled(0.25);
        assert_eq!(betti_curve(&d, 1.2), 0.25);
    }

    #[test]
    fn threshold_policy_parsing() {
        assert_eq!("auto".parse::<ThresholdPolicy>().unwrap(), ThresholdPolicy::Auto);
        assert_eq!("0.5".parse::<ThresholdPolicy>().unwrap(), ThresholdPolicy::Value(0.5));
        assert!("-1".parse::<ThresholdPolicy>().is_err());
        assert!("x".parse::<ThresholdPolicy>().is_err());
    }
}
