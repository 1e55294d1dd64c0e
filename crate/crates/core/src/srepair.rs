//! Subset repairs: the tractability classifier, the exact recursive solver,
//! the vertex-cover 2-approximation and an exhaustive oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::combinatorics::{max_weight_matching, weighted_vertex_cover_2approx, BipartiteGraph};
use crate::fd::{AttrSet, FdSet, Simplification};
use crate::table::{
    conflict_graph, dist_sub, Guarantee, SubsetRepair, Table, TableError, TupleId, EPS,
};

/// Default tuple cap for [`brute_s_repair`].
pub const BRUTE_S_CAP: usize = 20;

#[derive(Debug, Error)]
pub enum RepairError {
    #[error("no polynomial-time optimal subset repair is known for {0}")]
    IntractableFdSet(String),
    #[error("{what} has {size} tuples, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("{what} has {size} attributes, above the cap of {cap}")]
    AttributeCapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("update repair input contains a consensus FD")]
    ConsensusPresent,
    #[error("subset is inconsistent: {0} violation(s)")]
    InconsistentSubset(usize),
    #[error("update is inconsistent: {0} violation(s)")]
    InconsistentUpdate(usize),
    #[error("probability {value} of tuple {id} is outside [0, 1]")]
    InvalidProbability { id: TupleId, value: f64 },
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    CommonLhs,
    Consensus,
    LhsMarriage,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::CommonLhs => "common-lhs",
            StepKind::Consensus => "consensus",
            StepKind::LhsMarriage => "lhs-marriage",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub removed: AttrSet,
    /// The FD set after removal, trivial FDs dropped.
    pub result: FdSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierTrace {
    pub steps: Vec<TraceStep>,
    pub verdict: bool,
}

/// Runs the simplification loop until the set is trivial (success) or no
/// simplification applies (failure).
pub fn osr_succeeds(d: &FdSet) -> (bool, ClassifierTrace) {
    let mut current = d.without_trivial();
    let mut steps = Vec::new();
    loop {
        let (kind, removed) = match current.detect_simplification() {
            Simplification::Trivial => break,
            Simplification::Stuck => {
                return (
                    false,
                    ClassifierTrace {
                        steps,
                        verdict: false,
                    },
                )
            }
            Simplification::CommonLhs(a) => (StepKind::CommonLhs, AttrSet::singleton(a)),
            Simplification::Consensus(x) => (StepKind::Consensus, x),
            Simplification::LhsMarriage(x1, x2) => (StepKind::LhsMarriage, x1.union(x2)),
        };
        current = current.remove_attrs(removed).without_trivial();
        steps.push(TraceStep {
            kind,
            removed,
            result: current.clone(),
        });
    }
    (
        true,
        ClassifierTrace {
            steps,
            verdict: true,
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SAlgorithm {
    OptSRepair,
    VertexCover2Approx,
    BruteForce,
}

impl SAlgorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            SAlgorithm::OptSRepair => "optsrepair",
            SAlgorithm::VertexCover2Approx => "vertex-cover-2approx",
            SAlgorithm::BruteForce => "brute-force",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SRepairReport {
    pub repair: SubsetRepair,
    pub algorithm: SAlgorithm,
    pub trace: Option<ClassifierTrace>,
}

fn finish(
    t: &Table,
    retained: BTreeSet<TupleId>,
    guarantee: Guarantee,
) -> Result<SubsetRepair, RepairError> {
    let distance = dist_sub(t, &retained)?;
    Ok(SubsetRepair {
        retained_ids: retained,
        distance,
        guarantee,
    })
}

/// Optimal subset repair for FD sets accepted by [`osr_succeeds`].
pub fn opt_s_repair(d: &FdSet, t: &Table) -> Result<SRepairReport, RepairError> {
    t.check_schema(d)?;
    let (ok, trace) = osr_succeeds(d);
    if !ok {
        return Err(RepairError::IntractableFdSet(d.to_string()));
    }
    let rows: Vec<usize> = (0..t.len()).collect();
    let (kept, _) = opt_rec(t, &d.without_trivial(), rows, 0);
    let retained = kept.into_iter().map(|p| t.rows()[p].id).collect();
    Ok(SRepairReport {
        repair: finish(t, retained, Guarantee::Exact)?,
        algorithm: SAlgorithm::OptSRepair,
        trace: Some(trace),
    })
}

type Block = (Vec<usize>, f64);

fn group_by<'t>(
    t: &'t Table,
    rows: &[usize],
    attrs: AttrSet,
) -> BTreeMap<Vec<&'t str>, Vec<usize>> {
    let mut groups: BTreeMap<Vec<&str>, Vec<usize>> = BTreeMap::new();
    for &r in rows {
        let key = attrs
            .iter()
            .map(|a| t.rows()[r].values[a].as_str())
            .collect();
        groups.entry(key).or_default().push(r);
    }
    groups
}

/// Solves every block against `sub`, in key order. Top-level blocks may run
/// on the rayon pool; the merge is by key so the result does not depend on
/// scheduling.
fn solve_blocks<K: Send>(
    t: &Table,
    sub: &FdSet,
    blocks: Vec<(K, Vec<usize>)>,
    depth: usize,
) -> Vec<(K, Block)> {
    #[cfg(feature = "parallel")]
    if depth == 0 && blocks.len() > 1 {
        use rayon::prelude::*;
        return blocks
            .into_par_iter()
            .map(|(k, rows)| (k, opt_rec(t, sub, rows, depth + 1)))
            .collect();
    }
    blocks
        .into_iter()
        .map(|(k, rows)| (k, opt_rec(t, sub, rows, depth + 1)))
        .collect()
}

fn weight(t: &Table, rows: &[usize]) -> f64 {
    rows.iter().map(|&r| t.rows()[r].weight).sum()
}

fn opt_rec(t: &Table, d: &FdSet, rows: Vec<usize>, depth: usize) -> Block {
    if rows.len() <= 1 {
        let w = weight(t, &rows);
        return (rows, w);
    }
    match d.detect_simplification() {
        Simplification::Trivial => {
            let w = weight(t, &rows);
            (rows, w)
        }
        Simplification::CommonLhs(a) => {
            let x = AttrSet::singleton(a);
            let sub = d.remove_attrs(x).without_trivial();
            let blocks = group_by(t, &rows, x).into_iter().collect();
            let mut kept = Vec::new();
            let mut w = 0.0;
            for (_, (block, bw)) in solve_blocks(t, &sub, blocks, depth) {
                kept.extend(block);
                w += bw;
            }
            kept.sort_unstable();
            (kept, w)
        }
        Simplification::Consensus(x) => {
            let sub = d.remove_attrs(x).without_trivial();
            let blocks = group_by(t, &rows, x).into_iter().collect();
            let mut best: Option<Block> = None;
            for (_, (block, bw)) in solve_blocks(t, &sub, blocks, depth) {
                // Strict improvement keeps the least key on ties.
                if best.as_ref().is_none_or(|(_, w)| bw > w + EPS) {
                    best = Some((block, bw));
                }
            }
            best.unwrap_or_default()
        }
        Simplification::LhsMarriage(x1, x2) => {
            let sub = d.remove_attrs(x1.union(x2)).without_trivial();
            let mut blocks: BTreeMap<(Vec<&str>, Vec<&str>), Vec<usize>> = BTreeMap::new();
            for &r in &rows {
                let values = &t.rows()[r].values;
                let k1 = x1.iter().map(|a| values[a].as_str()).collect();
                let k2 = x2.iter().map(|a| values[a].as_str()).collect();
                blocks.entry((k1, k2)).or_default().push(r);
            }
            let solved = solve_blocks(t, &sub, blocks.into_iter().collect(), depth);
            let left: BTreeSet<&Vec<&str>> = solved.iter().map(|((k1, _), _)| k1).collect();
            let right: BTreeSet<&Vec<&str>> = solved.iter().map(|((_, k2), _)| k2).collect();
            let left: Vec<_> = left.into_iter().collect();
            let right: Vec<_> = right.into_iter().collect();
            let mut g = BipartiteGraph::new(left.len(), right.len());
            let mut by_edge = BTreeMap::new();
            for (i, ((k1, k2), (_, bw))) in solved.iter().enumerate() {
                let l = left.binary_search(&k1).expect("left key present");
                let r = right.binary_search(&k2).expect("right key present");
                g.add_edge(l, r, *bw);
                by_edge.insert((l, r), i);
            }
            let mut kept = Vec::new();
            let mut w = 0.0;
            for e in max_weight_matching(&g) {
                let (block, bw) = &solved[by_edge[&e]].1;
                kept.extend(block.iter().copied());
                w += bw;
            }
            kept.sort_unstable();
            (kept, w)
        }
        Simplification::Stuck => unreachable!("classifier accepted a stuck FD set"),
    }
}

/// Deletes a local-ratio vertex cover of the conflict graph. Works for every
/// FD set; the deleted weight is at most twice the optimum.
pub fn approx_s_repair(d: &FdSet, t: &Table) -> Result<SRepairReport, RepairError> {
    let g = conflict_graph(t, d)?;
    let weights: BTreeMap<TupleId, f64> = t.rows().iter().map(|r| (r.id, r.weight)).collect();
    let vc = weighted_vertex_cover_2approx(&g, &weights);
    let retained = t.ids().filter(|id| !vc.cover.contains(id)).collect();
    Ok(SRepairReport {
        repair: finish(t, retained, Guarantee::Approx(2.0))?,
        algorithm: SAlgorithm::VertexCover2Approx,
        trace: None,
    })
}

/// Exhaustive optimum with the default cap.
pub fn brute_s_repair(d: &FdSet, t: &Table) -> Result<SRepairReport, RepairError> {
    brute_s_repair_capped(d, t, BRUTE_S_CAP)
}

/// Branch and bound over keep/delete decisions in id order. Among optima the
/// lexicographically least retained-id set is returned.
pub fn brute_s_repair_capped(
    d: &FdSet,
    t: &Table,
    cap: usize,
) -> Result<SRepairReport, RepairError> {
    t.check_schema(d)?;
    if t.len() > cap {
        return Err(RepairError::CapExceeded {
            what: "brute-force subset search",
            size: t.len(),
            cap,
        });
    }
    let g = conflict_graph(t, d)?;
    let n = t.len();
    let mut adj = vec![0u64; n];
    for &(a, b) in g.edges.keys() {
        let (i, j) = (t.position(a).unwrap(), t.position(b).unwrap());
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let w: Vec<f64> = t.rows().iter().map(|r| r.weight).collect();
    let mut search = IndependentSetSearch {
        adj: &adj,
        w: &w,
        best_deleted: f64::INFINITY,
        best_kept: 0,
    };
    search.go(0, 0, 0.0);
    let retained = (0..n)
        .filter(|&i| search.best_kept & (1 << i) != 0)
        .map(|i| t.rows()[i].id)
        .collect();
    Ok(SRepairReport {
        repair: finish(t, retained, Guarantee::Exact)?,
        algorithm: SAlgorithm::BruteForce,
        trace: None,
    })
}

/// FD consistency is pairwise, so consistent subsets are exactly the
/// independent sets of the conflict graph.
struct IndependentSetSearch<'a> {
    adj: &'a [u64],
    w: &'a [f64],
    best_deleted: f64,
    best_kept: u64,
}

impl IndependentSetSearch<'_> {
    fn go(&mut self, i: usize, kept: u64, deleted: f64) {
        let n = self.w.len();
        let forced: f64 = (i..n)
            .filter(|&j| self.adj[j] & kept != 0)
            .map(|j| self.w[j])
            .sum();
        if deleted + forced >= self.best_deleted - EPS {
            return;
        }
        if i == n {
            self.best_deleted = deleted;
            self.best_kept = kept;
            return;
        }
        if self.adj[i] & kept == 0 {
            self.go(i + 1, kept | 1 << i, deleted);
        }
        self.go(i + 1, kept, deleted + self.w[i]);
    }
}
