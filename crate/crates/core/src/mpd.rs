//! Most probable consistent subset of a tuple-independent table.
//!
//! Tuple `i` is present with probability `p_i`, independently, so a subset
//! `S` has probability `∏_{i∈S} p_i · ∏_{i∉S} (1 − p_i)`. Maximizing it over
//! consistent subsets is an optimal subset repair under the log-odds weights
//! `log(p / (1 − p))`.

use std::collections::{BTreeMap, BTreeSet};

use crate::fd::FdSet;
use crate::srepair::{brute_s_repair_capped, opt_s_repair, osr_succeeds, RepairError, SAlgorithm};
use crate::table::{conflict_graph, read_csv, satisfies, Row, Table, TableError, TupleId, EPS};

/// Tuple cap for exhaustive enumeration.
pub const BRUTE_MPD_CAP: usize = 15;

/// A table whose weights are probabilities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilisticTable {
    table: Table,
}

impl ProbabilisticTable {
    /// Reads the same CSV layout as [`Table::from_csv`]; the `weight` column
    /// holds probabilities and is required.
    pub fn from_csv(text: &str) -> Result<Self, RepairError> {
        let raw = read_csv(text)?;
        let table = Table::from_raw(raw);
        ProbabilisticTable::check(&table)?;
        Ok(ProbabilisticTable { table })
    }

    pub fn from_rows<S: AsRef<str>>(schema: &[S], rows: Vec<Row>) -> Result<Self, RepairError> {
        // Table::new insists on positive weights; validate with a stand-in
        // weight, then restore the probabilities.
        let probs: BTreeMap<TupleId, f64> = rows.iter().map(|r| (r.id, r.weight)).collect();
        let stand_in = rows.into_iter().map(|r| Row { weight: 1.0, ..r }).collect();
        let table = Table::new(schema, stand_in)?.reweighted(|r| probs[&r.id]);
        ProbabilisticTable::check(&table)?;
        Ok(ProbabilisticTable { table })
    }

    fn check(t: &Table) -> Result<(), RepairError> {
        match t.rows().iter().find(|r| !(0.0..=1.0).contains(&r.weight)) {
            Some(r) => Err(RepairError::InvalidProbability {
                id: r.id,
                value: r.weight,
            }),
            None => Ok(()),
        }
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn probability(&self, id: TupleId) -> Option<f64> {
        self.table.row(id).map(|r| r.weight)
    }

    /// Natural log of the probability of exactly `retained` being present.
    pub fn log_probability(&self, retained: &BTreeSet<TupleId>) -> f64 {
        self.table
            .rows()
            .iter()
            .map(|r| {
                if retained.contains(&r.id) {
                    r.weight.ln()
                } else {
                    (1.0 - r.weight).ln()
                }
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MpdResult {
    pub retained_ids: BTreeSet<TupleId>,
    /// `-inf` when every consistent subset has probability zero.
    pub log_probability: f64,
    /// Certain tuples jointly violate the FDs.
    pub zero_probability: bool,
    /// Tuples with probability 1, weighted above everything else.
    pub clamped_certain: Vec<TupleId>,
    /// Tuples with probability at most 0.5, left out up front.
    pub dropped_low: Vec<TupleId>,
    pub algorithm: SAlgorithm,
}

impl MpdResult {
    pub fn probability(&self) -> f64 {
        self.log_probability.exp()
    }
}

/// Most probable consistent subset. Uses the exact subset-repair algorithm
/// when the FD set allows it and exhaustive search (up to
/// [`BRUTE_MPD_CAP`] candidate tuples) otherwise.
pub fn mpd_solve(d: &FdSet, pt: &ProbabilisticTable) -> Result<MpdResult, RepairError> {
    let t = pt.table();
    t.check_schema(d)?;
    let dropped_low: Vec<TupleId> = t
        .rows()
        .iter()
        .filter(|r| r.weight <= 0.5)
        .map(|r| r.id)
        .collect();
    let clamped_certain: Vec<TupleId> = t
        .rows()
        .iter()
        .filter(|r| r.weight >= 1.0)
        .map(|r| r.id)
        .collect();

    let certain = t.subset(&clamped_certain.iter().copied().collect())?;
    if !satisfies(&certain, d)?.is_empty() {
        return Ok(MpdResult {
            retained_ids: BTreeSet::new(),
            log_probability: f64::NEG_INFINITY,
            zero_probability: true,
            clamped_certain,
            dropped_low,
            algorithm: SAlgorithm::OptSRepair,
        });
    }

    let candidates: BTreeSet<TupleId> = t
        .rows()
        .iter()
        .filter(|r| r.weight > 0.5)
        .map(|r| r.id)
        .collect();
    let uncertain_mass: f64 = t
        .rows()
        .iter()
        .filter(|r| r.weight > 0.5 && r.weight < 1.0)
        .map(|r| log_odds(r.weight))
        .sum();
    // A certain tuple outweighs every uncertain tuple together, so no
    // optimum leaves one out.
    let certain_weight = uncertain_mass + 1.0;
    let weighted = t.subset(&candidates)?.reweighted(|r| {
        if r.weight >= 1.0 {
            certain_weight
        } else {
            log_odds(r.weight)
        }
    });

    let (retained, algorithm) = if osr_succeeds(d).0 {
        (
            opt_s_repair(d, &weighted)?.repair.retained_ids,
            SAlgorithm::OptSRepair,
        )
    } else {
        let r = brute_s_repair_capped(d, &weighted, BRUTE_MPD_CAP)?;
        (r.repair.retained_ids, SAlgorithm::BruteForce)
    };
    Ok(MpdResult {
        log_probability: pt.log_probability(&retained),
        retained_ids: retained,
        zero_probability: false,
        clamped_certain,
        dropped_low,
        algorithm,
    })
}

fn log_odds(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Exhaustive maximization over consistent subsets. Ties go to the larger
/// subset, then to the lexicographically least id list.
pub fn brute_mpd(d: &FdSet, pt: &ProbabilisticTable) -> Result<MpdResult, RepairError> {
    brute_mpd_capped(d, pt, BRUTE_MPD_CAP)
}

pub fn brute_mpd_capped(
    d: &FdSet,
    pt: &ProbabilisticTable,
    cap: usize,
) -> Result<MpdResult, RepairError> {
    let t = pt.table();
    t.check_schema(d)?;
    let n = t.len();
    if n > cap {
        return Err(RepairError::CapExceeded {
            what: "brute-force MPD search",
            size: n,
            cap,
        });
    }
    let g = conflict_graph(t, d)?;
    let pos = |id: TupleId| t.position(id).ok_or(TableError::UnknownId(id));
    let mut adj = vec![0u32; n];
    for &(a, b) in g.edges.keys() {
        let (i, j) = (pos(a)?, pos(b)?);
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    let p: Vec<f64> = t.rows().iter().map(|r| r.weight).collect();
    let ids = |mask: u32| -> Vec<TupleId> {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| t.rows()[i].id)
            .collect()
    };

    let mut best: Option<(f64, u32)> = None;
    for mask in 0u32..1 << n {
        if (0..n).any(|i| mask >> i & 1 == 1 && adj[i] & mask != 0) {
            continue;
        }
        let lp: f64 = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    p[i].ln()
                } else {
                    (1.0 - p[i]).ln()
                }
            })
            .sum();
        let better = match best {
            None => true,
            Some((b, bm)) => {
                if lp > b + EPS {
                    true
                } else if lp >= b - EPS {
                    let (size, bsize) = (mask.count_ones(), bm.count_ones());
                    size > bsize || (size == bsize && ids(mask) < ids(bm))
                } else {
                    false
                }
            }
        };
        if better {
            best = Some((lp, mask));
        }
    }
    let (log_probability, mask) = best.expect("the empty subset is consistent");
    Ok(MpdResult {
        retained_ids: ids(mask).into_iter().collect(),
        log_probability,
        zero_probability: log_probability == f64::NEG_INFINITY,
        clamped_certain: Vec::new(),
        dropped_low: Vec::new(),
        algorithm: SAlgorithm::BruteForce,
    })
}
