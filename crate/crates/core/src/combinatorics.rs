//! Maximum-weight bipartite matching and 2-approximate weighted vertex cover.

use std::collections::{BTreeMap, BTreeSet};

use crate::table::{ConflictGraph, TupleId, EPS};

/// Left nodes `0..left`, right nodes `0..right`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        BipartiteGraph {
            left,
            right,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, l: usize, r: usize, w: f64) {
        assert!(
            l < self.left && r < self.right,
            "edge endpoint out of range"
        );
        assert!(w >= 0.0, "negative edge weight");
        self.edges.push((l, r, w));
    }

    pub fn weight_of(&self, matching: &[(usize, usize)]) -> f64 {
        let weights = self.weight_map();
        matching
            .iter()
            .map(|e| weights.get(e).copied().unwrap_or(0.0))
            .sum()
    }

    fn weight_map(&self) -> BTreeMap<(usize, usize), f64> {
        let mut map = BTreeMap::new();
        for &(l, r, w) in &self.edges {
            let slot = map.entry((l, r)).or_insert(w);
            *slot = slot.max(w);
        }
        map
    }
}

/// A matching of maximum total weight, as `(left, right)` pairs sorted by
/// left node. Zero-weight edges are never included.
///
/// Solves the assignment problem on the zero-padded square matrix of negated
/// weights (Hungarian method with potentials, O(n³)).
pub fn max_weight_matching(g: &BipartiteGraph) -> Vec<(usize, usize)> {
    let weights = g.weight_map();
    if weights.values().all(|&w| w <= EPS) {
        return Vec::new();
    }
    let n = g.left.max(g.right);
    let mut cost = vec![vec![0.0f64; n]; n];
    for (&(l, r), &w) in &weights {
        cost[l][r] = -w;
    }
    let assignment = hungarian(&cost);
    let mut out: Vec<(usize, usize)> = assignment
        .into_iter()
        .enumerate()
        .filter(|&(l, r)| weights.get(&(l, r)).is_some_and(|&w| w > EPS))
        .collect();
    out.sort_unstable();
    out
}

/// Minimum-cost perfect assignment on a square matrix; returns the column
/// assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-indexed potentials, column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0; n];
    for j in 1..=n {
        if row_of[j] > 0 {
            col_of[row_of[j] - 1] = j - 1;
        }
    }
    col_of
}

/// Output of the local-ratio cover.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexCover {
    pub cover: BTreeSet<TupleId>,
    pub weight: f64,
    /// Total weight subtracted during the run. Every vertex cover weighs at
    /// least this much, and `weight <= 2 * lower_bound`.
    pub lower_bound: f64,
}

/// Local-ratio vertex cover over edges given as index pairs. Mutates
/// `residual` and returns the dual sum; the cover is the set of indices whose
/// residual reached zero while incident to a processed edge.
pub(crate) fn local_ratio(
    edges: impl IntoIterator<Item = (usize, usize)>,
    residual: &mut [f64],
    in_cover: &mut [bool],
) -> f64 {
    let mut dual = 0.0;
    for (a, b) in edges {
        if in_cover[a] || in_cover[b] {
            continue;
        }
        let delta = residual[a].min(residual[b]);
        residual[a] -= delta;
        residual[b] -= delta;
        dual += delta;
        // Exactly one zeroed endpoint joins the cover; prefer `a` on ties.
        if residual[a] <= EPS {
            in_cover[a] = true;
        } else {
            in_cover[b] = true;
        }
    }
    dual
}

/// 2-approximate minimum-weight vertex cover. Edges are processed in
/// `(min id, max id)` order.
pub fn weighted_vertex_cover_2approx(
    g: &ConflictGraph,
    weights: &BTreeMap<TupleId, f64>,
) -> VertexCover {
    let index: BTreeMap<TupleId, usize> =
        g.nodes.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut residual: Vec<f64> = g.nodes.iter().map(|id| weights[id]).collect();
    let mut in_cover = vec![false; g.nodes.len()];
    let edges = g.edges.keys().map(|(a, b)| (index[a], index[b]));
    let lower_bound = local_ratio(edges, &mut residual, &mut in_cover);
    let cover: BTreeSet<TupleId> = g
        .nodes
        .iter()
        .zip(&in_cover)
        .filter(|(_, &c)| c)
        .map(|(&id, _)| id)
        .collect();
    let weight = cover.iter().map(|id| weights[id]).sum();
    VertexCover {
        cover,
        weight,
        lower_bound,
    }
}
