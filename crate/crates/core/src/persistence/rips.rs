use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::swarm::Point3;

/// Default cap on the number of simplices a single filtration may hold.
pub const DEFAULT_SIMPLEX_LIMIT: usize = 20_000_000;

/// A simplex with up to four vertices, stored sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simplex {
    vertices: [u32; 4],
    dim: u8,
    pub value: f64,
}

impl Simplex {
    pub fn new(vertices: &[u32], value: f64) -> Self {
        assert!((1..=4).contains(&vertices.len()), "simplex needs 1 to 4 vertices");
        let mut v = [u32::MAX; 4];
        v[..vertices.len()].copy_from_slice(vertices);
        v[..vertices.len()].sort_unstable();
        Self {
            vertices: v,
            dim: (vertices.len() - 1) as u8,
            value,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices[..self.dim as usize + 1]
    }

    pub(crate) fn key(&self) -> [u32; 4] {
        self.vertices
    }

    /// Codimension-one faces (empty for vertices).
    pub fn faces(&self) -> impl Iterator<Item = [u32; 4]> + '_ {
        let n = self.dim as usize + 1;
        (0..if n > 1 { n } else { 0 }).map(move |skip| {
            let mut f = [u32::MAX; 4];
            let mut k = 0;
            for (i, &v) in self.vertices[..n].iter().enumerate() {
                if i != skip {
                    f[k] = v;
                    k += 1;
                }
            }
            f
        })
    }

    fn filtration_cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.dim.cmp(&other.dim))
            .then_with(|| self.vertices().cmp(other.vertices()))
    }
}

/// Simplices of a Rips filtration in filtration order.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub simplices: Vec<Simplex>,
    /// Homology is reported up to this dimension; simplices exist up to one
    /// dimension higher.
    pub max_dim: usize,
    pub threshold: f64,
    pub n_vertices: usize,
}

impl FilteredComplex {
    pub fn count_of_dim(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == dim).count()
    }
}

fn dist(a: &Point3, b: &Point3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Smallest radius `r` such that some point is within `r` of every other point.
pub fn enclosing_radius(cloud: &[Point3]) -> f64 {
    cloud
        .iter()
        .map(|p| cloud.iter().map(|q| dist(p, q)).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
        .min(f64::MAX)
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All simplices up to dimension `max_dim + 1` with diameter `<= threshold`.
/// A simplex enters at its diameter; vertices enter at 0.
pub fn rips_filtration(
    cloud: &[Point3],
    max_dim: usize,
    threshold: f64,
    simplex_limit: usize,
) -> Result<FilteredComplex> {
    if cloud.is_empty() {
        return Err(Error::arg("point cloud is empty"));
    }
    if max_dim > 2 {
        return Err(Error::arg(format!("max_dim must be 0, 1 or 2, got {max_dim}")));
    }
    if !(threshold > 0.0) {
        return Err(Error::arg(format!("threshold must be positive, got {threshold}")));
    }
    let n = cloud.len();
    if n > u32::MAX as usize {
        return Err(Error::arg("too many points"));
    }
    let top = max_dim + 1;

    let mut d = vec![0.0; n * n];
    let mut n_edges = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            let r = dist(&cloud[i], &cloud[j]);
            d[i * n + j] = r;
            d[j * n + i] = r;
            if r <= threshold {
                n_edges += 1;
            }
        }
    }

    // Erdős–Rényi style estimate: a k-simplex survives with probability
    // p^(k+1 choose 2) when a fraction p of the pairs are edges.
    let pairs = binomial(n, 2).max(1.0);
    let p = n_edges as f64 / pairs;
    let estimate: f64 = (0..=top)
        .map(|k| binomial(n, k + 1) * p.powf(binomial(k + 1, 2)))
        .sum();
    if estimate > simplex_limit as f64 {
        return Err(Error::Size {
            what: format!("Rips complex on {n} points up to dimension {top} (simplices)"),
            estimate: estimate as u128,
            limit: simplex_limit as u128,
        });
    }

    let mut simplices: Vec<Simplex> = (0..n as u32).map(|v| Simplex::new(&[v], 0.0)).collect();
    // Higher neighbours of each vertex within the threshold.
    let nbrs: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| d[i * n + j] <= threshold)
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    if top >= 1 {
        for i in 0..n {
            for &j in &nbrs[i] {
                let dij = d[i * n + j as usize];
                simplices.push(Simplex::new(&[i as u32, j], dij));
                if top < 2 {
                    continue;
                }
                for &k in nbrs[j as usize].iter() {
                    let (dik, djk) = (d[i * n + k as usize], d[j as usize * n + k as usize]);
                    if dik > threshold {
                        continue;
                    }
                    let tri = dij.max(dik).max(djk);
                    simplices.push(Simplex::new(&[i as u32, j, k], tri));
                    if top < 3 {
                        continue;
                    }
                    for &l in nbrs[k as usize].iter() {
                        let (dil, djl, dkl) = (
                            d[i * n + l as usize],
                            d[j as usize * n + l as usize],
                            d[k as usize * n + l as usize],
                        );
                        if dil > threshold || djl > threshold {
                            continue;
                        }
                        simplices.push(Simplex::new(
                            &[i as u32, j, k, l],
                            tri.max(dil).max(djl).max(dkl),
                        ));
                    }
                    if simplices.len() > simplex_limit {
                        return Err(Error::Size {
                            what: format!("Rips complex on {n} points up to dimension {top} (simplices)"),
                            estimate: simplices.len() as u128,
                            limit: simplex_limit as u128,
                        });
                    }
                }
            }
        }
    }

    simplices.sort_by(Simplex::filtration_cmp);
    Ok(FilteredComplex {
        simplices,
        max_dim,
        threshold,
        n_vertices: n,
    })
}
