//! Vietoris–Rips persistence in dimensions 0 and 1 for planar landmark clouds.
//!
//! Dimension 0 is single linkage: edges are swept in filtration order through
//! a union-find, and every merge closes a bar at the edge length. Dimension 1
//! is computed as persistent cohomology: the coboundary columns of the edges
//! that did not merge components are reduced right to left (largest edge
//! first). Edges that merged components are never reduced, since their
//! columns are known to vanish (clearing).
//!
//! Filtration values are compared as exact squared integer distances. Ties
//! are broken by lexicographic vertex order, so the edge order is total and
//! the reduction is deterministic.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ulbp::PointCloud;

/// Largest cloud accepted by [`brute_force_barcode`].
pub const BRUTE_FORCE_MAX_POINTS: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum PersistenceError {
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("point cloud has {0} points; the brute-force reduction accepts at most {BRUTE_FORCE_MAX_POINTS}")]
    CloudTooLarge(usize),
    #[error("invalid filtration parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiltrationParams {
    pub max_dim: usize,
    pub threshold: f64,
}

impl Default for FiltrationParams {
    fn default() -> Self {
        Self {
            max_dim: 1,
            threshold: 25.0,
        }
    }
}

impl FiltrationParams {
    pub fn validate(&self) -> Result<(), PersistenceError> {
        if self.max_dim > 1 {
            return Err(PersistenceError::InvalidParams(format!(
                "max_dim must be 0 or 1, got {}",
                self.max_dim
            )));
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(PersistenceError::InvalidParams(format!(
                "threshold must be positive and finite, got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// A persistence interval. Essential bars never die inside the filtration and
/// carry `death = threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, bool)", into = "(f64, f64, bool)")]
pub struct Bar {
    pub birth: f64,
    pub death: f64,
    pub essential: bool,
}

impl Bar {
    pub fn finite(birth: f64, death: f64) -> Self {
        Self {
            birth,
            death,
            essential: false,
        }
    }

    pub fn essential(birth: f64, threshold: f64) -> Self {
        Self {
            birth,
            death: threshold,
            essential: true,
        }
    }

    pub fn lifespan(&self) -> f64 {
        self.death - self.birth
    }
}

impl From<(f64, f64, bool)> for Bar {
    fn from((birth, death, essential): (f64, f64, bool)) -> Self {
        Self {
            birth,
            death,
            essential,
        }
    }
}

impl From<Bar> for (f64, f64, bool) {
    fn from(b: Bar) -> Self {
        (b.birth, b.death, b.essential)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceBarcode {
    #[serde(rename = "threshold")]
    pub threshold_used: f64,
    pub dim0: Vec<Bar>,
    pub dim1: Vec<Bar>,
}

impl PersistenceBarcode {
    pub fn empty(threshold: f64) -> Self {
        Self {
            threshold_used: threshold,
            dim0: Vec::new(),
            dim1: Vec::new(),
        }
    }

    pub fn bars(&self, dim: usize) -> &[Bar] {
        match dim {
            0 => &self.dim0,
            1 => &self.dim1,
            _ => &[],
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("barcode serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Bars of both dimensions sorted by (birth, death, essential), for
    /// order-independent comparison.
    pub fn sorted(&self) -> Self {
        let sort = |bars: &[Bar]| {
            let mut v = bars.to_vec();
            v.sort_by(|a, b| {
                a.birth
                    .total_cmp(&b.birth)
                    .then(a.death.total_cmp(&b.death))
                    .then(a.essential.cmp(&b.essential))
            });
            v
        };
        Self {
            threshold_used: self.threshold_used,
            dim0: sort(&self.dim0),
            dim1: sort(&self.dim1),
        }
    }
}

#[derive(Debug)]
pub(crate) struct DisjointSet {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// Returns false when both already share a root.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra as usize] >= self.rank[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo as usize] = hi;
        if self.rank[hi as usize] == self.rank[lo as usize] {
            self.rank[hi as usize] += 1;
        }
        true
    }
}

struct Edge {
    len2: u64,
    a: u32,
    b: u32,
}

/// Rips graph: edges sorted by (length, a, b) plus per-vertex neighbour lists
/// `(neighbour, edge rank)` sorted by neighbour.
struct RipsGraph {
    edges: Vec<Edge>,
    neighbors: Vec<Vec<(u32, u32)>>,
}

impl RipsGraph {
    fn build(points: &[(u32, u32)], threshold: f64) -> Self {
        let n = points.len();
        let max_len2 = threshold * threshold;
        let mut edges = Vec::new();
        for a in 0..n {
            let (ra, ca) = points[a];
            for b in a + 1..n {
                let (rb, cb) = points[b];
                let dr = u64::from(ra.abs_diff(rb));
                let dc = u64::from(ca.abs_diff(cb));
                let len2 = dr * dr + dc * dc;
                if (len2 as f64) <= max_len2 {
                    edges.push(Edge {
                        len2,
                        a: a as u32,
                        b: b as u32,
                    });
                }
            }
        }
        edges.sort_unstable_by_key(|e| (e.len2, e.a, e.b));
        let mut neighbors = vec![Vec::new(); n];
        for (rank, e) in edges.iter().enumerate() {
            neighbors[e.a as usize].push((e.b, rank as u32));
            neighbors[e.b as usize].push((e.a, rank as u32));
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }
        Self { edges, neighbors }
    }

    fn length(&self, rank: u32) -> f64 {
        (self.edges[rank as usize].len2 as f64).sqrt()
    }

    /// Sorted coboundary of an edge. A triangle is keyed by its longest edge
    /// (highest rank) in the high word and the opposite vertex in the low
    /// word, so key order refines the filtration order on triangles.
    fn coboundary(&self, rank: u32) -> Vec<u64> {
        let e = &self.edges[rank as usize];
        let (na, nb) = (&self.neighbors[e.a as usize], &self.neighbors[e.b as usize]);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < na.len() && j < nb.len() {
            let (va, ra) = na[i];
            let (vb, rb) = nb[j];
            match va.cmp(&vb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let (top, opposite) = if rank > ra && rank > rb {
                        (rank, va)
                    } else if ra > rb {
                        (ra, e.b)
                    } else {
                        (rb, e.a)
                    };
                    out.push((u64::from(top) << 32) | u64::from(opposite));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Symmetric difference of two sorted, duplicate-free columns.
fn add_columns(lhs: &[u64], rhs: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(lhs.len() + rhs.len());
    let (mut i, mut j) = (0, 0);
    while i < lhs.len() && j < rhs.len() {
        match lhs[i].cmp(&rhs[j]) {
            std::cmp::Ordering::Less => {
                out.push(lhs[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(rhs[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&lhs[i..]);
    out.extend_from_slice(&rhs[j..]);
    out
}

/// Barcode of the Rips filtration of `pc`, truncated at `params.threshold`.
pub fn vr_barcode(
    pc: &PointCloud,
    params: &FiltrationParams,
) -> Result<PersistenceBarcode, PersistenceError> {
    params.validate()?;
    if pc.is_empty() {
        return Err(PersistenceError::EmptyCloud);
    }
    let t = params.threshold;
    let graph = RipsGraph::build(&pc.points, t);
    let n = pc.len();

    let mut dim0 = Vec::with_capacity(n);
    let mut cycle_edges = Vec::new();
    let mut components = DisjointSet::new(n);
    for (rank, e) in graph.edges.iter().enumerate() {
        if components.union(e.a, e.b) {
            dim0.push(Bar::finite(0.0, (e.len2 as f64).sqrt()));
        } else {
            cycle_edges.push(rank as u32);
        }
    }
    let survivors = n - dim0.len();
    dim0.extend(std::iter::repeat_n(Bar::essential(0.0, t), survivors));

    let mut dim1 = Vec::new();
    if params.max_dim >= 1 {
        let mut pivot_owner: HashMap<u64, usize> = HashMap::new();
        let mut reduced: Vec<Vec<u64>> = Vec::new();
        for &rank in cycle_edges.iter().rev() {
            let mut column = graph.coboundary(rank);
            while let Some(&pivot) = column.first() {
                match pivot_owner.get(&pivot) {
                    Some(&slot) => column = add_columns(&column, &reduced[slot]),
                    None => break,
                }
            }
            let birth = graph.length(rank);
            match column.first() {
                None => dim1.push(Bar::essential(birth, t)),
                Some(&pivot) => {
                    let death = graph.length((pivot >> 32) as u32);
                    if death > birth {
                        dim1.push(Bar::finite(birth, death));
                    }
                    pivot_owner.insert(pivot, reduced.len());
                    reduced.push(column);
                }
            }
        }
    }

    Ok(PersistenceBarcode {
        threshold_used: t,
        dim0,
        dim1,
    })
}

/// Reference barcode from the full filtered boundary matrix (vertices, edges,
/// triangles) and the textbook left-to-right column reduction. Only meant for
/// small clouds; used to cross-check [`vr_barcode`].
pub fn brute_force_barcode(
    pc: &PointCloud,
    params: &FiltrationParams,
) -> Result<PersistenceBarcode, PersistenceError> {
    params.validate()?;
    if pc.is_empty() {
        return Err(PersistenceError::EmptyCloud);
    }
    if pc.len() > BRUTE_FORCE_MAX_POINTS {
        return Err(PersistenceError::CloudTooLarge(pc.len()));
    }
    let t = params.threshold;
    let n = pc.len();
    let dist = |a: usize, b: usize| {
        let (ra, ca) = pc.points[a];
        let (rb, cb) = pc.points[b];
        (f64::from(ra) - f64::from(rb)).hypot(f64::from(ca) - f64::from(cb))
    };

    let mut simplices: Vec<(f64, Vec<usize>)> = (0..n).map(|v| (0.0, vec![v])).collect();
    for a in 0..n {
        for b in a + 1..n {
            simplices.push((dist(a, b), vec![a, b]));
            if params.max_dim >= 1 {
                for c in b + 1..n {
                    let d = dist(a, b).max(dist(a, c)).max(dist(b, c));
                    simplices.push((d, vec![a, b, c]));
                }
            }
        }
    }
    simplices.retain(|(d, _)| *d <= t);
    simplices.sort_by(|(da, va), (db, vb)| {
        da.total_cmp(db)
            .then(va.len().cmp(&vb.len()))
            .then(va.cmp(vb))
    });

    let index: HashMap<Vec<usize>, usize> = simplices
        .iter()
        .enumerate()
        .map(|(i, (_, v))| (v.clone(), i))
        .collect();
    let mut columns: Vec<Vec<usize>> = simplices
        .iter()
        .map(|(_, verts)| {
            let mut col: Vec<usize> = if verts.len() == 1 {
                Vec::new()
            } else {
                (0..verts.len())
                    .map(|skip| {
                        let face: Vec<usize> = verts
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        index[&face]
                    })
                    .collect()
            };
            col.sort_unstable();
            col
        })
        .collect();

    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    let mut paired = vec![false; simplices.len()];
    let mut dim0 = Vec::new();
    let mut dim1 = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            let Some(&k) = low_owner.get(&low) else { break };
            let other = columns[k].clone();
            let mut merged: Vec<usize> = columns[j]
                .iter()
                .copied()
                .filter(|x| !other.contains(x))
                .chain(other.iter().copied().filter(|x| !columns[j].contains(x)))
                .collect();
            merged.sort_unstable();
            columns[j] = merged;
        }
        if let Some(&low) = columns[j].last() {
            low_owner.insert(low, j);
            paired[low] = true;
            paired[j] = true;
            let birth = simplices[low].0;
            let death = simplices[j].0;
            match simplices[low].1.len() {
                1 => dim0.push(Bar::finite(birth, death)),
                2 if death > birth => dim1.push(Bar::finite(birth, death)),
                _ => {}
            }
        }
    }
    for (i, (d, verts)) in simplices.iter().enumerate() {
        if paired[i] || !columns[i].is_empty() {
            continue;
        }
        match verts.len() {
            1 => dim0.push(Bar::essential(*d, t)),
            2 if params.max_dim >= 1 => dim1.push(Bar::essential(*d, t)),
            _ => {}
        }
    }

    Ok(PersistenceBarcode {
        threshold_used: t,
        dim0,
        dim1,
    })
}
