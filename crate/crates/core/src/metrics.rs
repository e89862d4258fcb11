//! Exact partial 1-Wasserstein distance between finite persistence diagrams.
//!
//! Mass may be sent to the diagonal. Padding each diagram with one diagonal
//! copy per point of the other turns the problem into a balanced assignment
//! on a square matrix of size `|X| + |Y|`, solved exactly with the
//! shortest-augmenting-path Hungarian method.

use crate::error::{Error, Result};
use crate::persistence::{DiagramPoint, PersistenceDiagram};

/// One matched pair; `None` stands for the diagonal.
pub type Match = (Option<usize>, Option<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    /// Every off-diagonal point of either diagram appears exactly once.
    pub matches: Vec<Match>,
    pub cost: f64,
}

/// Euclidean ground distance in birth/lifetime coordinates.
pub fn ground_distance(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    (a.birth - b.birth).hypot(a.lifetime - b.lifetime)
}

/// Cost of a plan summed in canonical order: matches sorted by X index
/// (diagonal last), then by Y index.
pub fn plan_cost(x: &[DiagramPoint], y: &[DiagramPoint], matches: &[Match]) -> f64 {
    let mut sorted = matches.to_vec();
    sorted.sort_by_key(|&(i, j)| (i.is_none(), i, j));
    sorted
        .iter()
        .map(|&(i, j)| match (i, j) {
            (Some(i), Some(j)) => ground_distance(&x[i], &y[j]),
            (Some(i), None) => x[i].lifetime,
            (None, Some(j)) => y[j].lifetime,
            (None, None) => 0.0,
        })
        .sum()
}

/// Minimum-cost perfect assignment for a square cost matrix (row-major).
/// Returns `assignment[row] = column`.
pub fn hungarian(cost: &[f64], n: usize) -> Vec<usize> {
    debug_assert_eq!(cost.len(), n * n);
    // 1-based potentials with a virtual column 0.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for c in 1..=n {
                if used[c] {
                    continue;
                }
                let reduced = cost[(r - 1) * n + (c - 1)] - u[r] - v[c];
                if reduced < min_to[c] {
                    min_to[c] = reduced;
                    way[c] = col0;
                }
                if min_to[c] < delta {
                    delta = min_to[c];
                    col1 = c;
                }
            }
            for c in 0..=n {
                if used[c] {
                    u[owner[c]] += delta;
                    v[c] -= delta;
                } else {
                    min_to[c] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for c in 1..=n {
        if owner[c] > 0 {
            assignment[owner[c] - 1] = c - 1;
        }
    }
    assignment
}

/// Partial 1-Wasserstein distance and an optimal plan.
pub fn w1_partial(x: &PersistenceDiagram, y: &PersistenceDiagram) -> Result<(f64, TransportPlan)> {
    if x.dim != y.dim {
        return Err(Error::arg(format!(
            "cannot compare diagrams of homology dimensions {} and {}",
            x.dim, y.dim
        )));
    }
    if x.weight != y.weight {
        return Err(Error::arg("diagrams must carry the same point weight"));
    }
    let (xs, ys) = (&x.points, &y.points);
    let (nx, ny) = (xs.len(), ys.len());
    let n = nx + ny;
    if n == 0 {
        return Ok((0.0, TransportPlan { matches: Vec::new(), cost: 0.0 }));
    }
    // Rows: X then diagonal copies; columns: Y then diagonal copies.
    let mut cost = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            cost[r * n + c] = match (r < nx, c < ny) {
                (true, true) => ground_distance(&xs[r], &ys[c]),
                (true, false) => xs[r].lifetime,
                (false, true) => ys[c].lifetime,
                (false, false) => 0.0,
            };
        }
    }
    let assignment = hungarian(&cost, n);
    let mut matches = Vec::with_capacity(n);
    for (r, &c) in assignment.iter().enumerate() {
        let i = (r < nx).then_some(r);
        let j = (c < ny).then_some(c);
        if i.is_some() || j.is_some() {
            matches.push((i, j));
        }
    }
    matches.sort_by_key(|&(i, j)| (i.is_none(), i, j));
    let total = plan_cost(xs, ys, &matches);
    let scaled = total * x.weight;
    Ok((
        scaled,
        TransportPlan {
            matches,
            cost: scaled,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(1, 10.0, points.iter().map(|&(b, l)| DiagramPoint::new(b, l))).unwrap()
    }

    #[test]
    fn self_distance_is_zero_with_identity_plan() {
        let x = diag(&[(0.1, 0.5), (0.3, 0.2), (1.0, 1.0)]);
        let (d, plan) = w1_partial(&x, &x).unwrap();
        assert_eq!(d, 0.0);
        for (k, m) in plan.matches.iter().enumerate() {
            assert_eq!(*m, (Some(k), Some(k)));
        }
    }

    #[test]
    fn distance_to_empty_is_total_persistence() {
        let x = diag(&[(0.1, 0.5), (0.3, 0.2), (1.0, 1.0)]);
        let (d, plan) = w1_partial(&x, &diag(&[])).unwrap();
        assert!((d - 1.7).abs() < 1e-15);
        assert!(plan.matches.iter().all(|m| m.1.is_none()));
    }

    #[test]
    fn extra_point_pays_its_lifetime() {
        let (d, _) = w1_partial(&diag(&[(0.0, 1.0)]), &diag(&[(0.0, 1.0), (0.0, 0.4)])).unwrap();
        assert!((d - 0.4).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = PersistenceDiagram::empty(0, 1.0);
        let b = PersistenceDiagram::empty(1, 1.0);
        assert!(matches!(w1_partial(&a, &b), Err(Error::Argument(_))));
    }

    #[test]
    fn hungarian_small_matrix() {
        let cost = [4.0, 1.0, 3.0, 2.0, 0.0, 5.0, 3.0, 2.0, 2.0];
        let a = hungarian(&cost, 3);
        let total: f64 = a.iter().enumerate().map(|(r, &c)| cost[r * 3 + c]).sum();
        assert_eq!(total, 5.0);
    }
}
