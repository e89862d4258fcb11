//! Pairing of a Rips filtration into persistence diagrams.
//!
//! H0 comes from a union-find sweep over edges (elder rule; all vertices are
//! born at 0). Higher dimensions use mod-2 column reduction of the boundary
//! matrix, processed from the top dimension down so that columns of simplices
//! already known to be negative can be cleared without reduction.

use std::collections::HashMap;

use super::rips::FilteredComplex;
use super::{DiagramFrame, PersistenceDiagram};
use crate::error::{Error, Result};

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already connected.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Symmetric difference of two sorted index lists.
fn add_columns(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// Persistence diagrams in dimensions 0, 1, 2 (dimensions above the
/// complex's `max_dim` are empty). Classes alive at the threshold die at `cap`.
pub fn persistence_diagrams(complex: &FilteredComplex, cap: f64) -> Result<DiagramFrame> {
    if !(cap >= complex.threshold) {
        return Err(Error::arg(format!(
            "cap T = {cap} must be at least the filtration threshold {}",
            complex.threshold
        )));
    }
    let simplices = &complex.simplices;
    let mut pairs: [Vec<(f64, f64)>; 3] = Default::default();

    // Dimension 0, plus the edges that create 1-cycles.
    let mut uf = UnionFind::new(complex.n_vertices);
    let mut positive = vec![false; simplices.len()];
    for (idx, s) in simplices.iter().enumerate() {
        if s.dim() != 1 {
            continue;
        }
        let v = s.vertices();
        if uf.union(v[0] as usize, v[1] as usize) {
            pairs[0].push((0.0, s.value));
        } else {
            positive[idx] = true;
        }
    }
    let components = (0..complex.n_vertices)
        .filter(|&v| uf.find(v) == v)
        .count();
    pairs[0].extend(std::iter::repeat_n((0.0, cap), components));

    if complex.max_dim >= 1 {
        // Edges are looked up in a dense vertex-pair table, triangles by key.
        let nv = complex.n_vertices;
        let mut edge_index = vec![usize::MAX; nv * nv];
        let mut index: HashMap<[u32; 4], usize> = HashMap::new();
        for (i, s) in simplices.iter().enumerate() {
            match s.dim() {
                1 => {
                    let v = s.vertices();
                    edge_index[v[0] as usize * nv + v[1] as usize] = i;
                }
                2 if complex.max_dim >= 2 => {
                    index.insert(s.key(), i);
                }
                _ => {}
            }
        }
        let lookup = |f: [u32; 4]| {
            if f[2] == u32::MAX {
                edge_index[f[0] as usize * nv + f[1] as usize]
            } else {
                index[&f]
            }
        };
        let top = complex.max_dim + 1;
        // pivot_owner[row] = column whose reduced form has lowest entry `row`.
        let mut pivot_owner = vec![usize::MAX; simplices.len()];
        let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); simplices.len()];
        let mut cleared = vec![false; simplices.len()];
        let mut scratch = Vec::new();

        for dim in (2..=top).rev() {
            for (col, s) in simplices.iter().enumerate() {
                if s.dim() != dim || cleared[col] {
                    continue;
                }
                let mut column: Vec<usize> = s.faces().map(lookup).collect();
                column.sort_unstable();
                while let Some(&low) = column.last() {
                    let other = pivot_owner[low];
                    if other == usize::MAX {
                        break;
                    }
                    add_columns(&column, &reduced[other], &mut scratch);
                    std::mem::swap(&mut column, &mut scratch);
                }
                match column.last() {
                    Some(&low) => {
                        pivot_owner[low] = col;
                        cleared[low] = true;
                        let birth = &simplices[low];
                        if s.value > birth.value {
                            pairs[dim - 1].push((birth.value, s.value));
                        }
                        reduced[col] = column;
                    }
                    None => positive[col] = true,
                }
            }
        }
        // Positive simplices never paired as a birth are essential.
        for (idx, s) in simplices.iter().enumerate() {
            let dim = s.dim();
            if (1..=complex.max_dim).contains(&dim) && positive[idx] && !cleared[idx] {
                pairs[dim].push((s.value, cap));
            }
        }
    }

    let make = |dim: usize| PersistenceDiagram::from_pairs(dim, cap, &pairs[dim]);
    Ok([make(0)?, make(1)?, make(2)?])
}
