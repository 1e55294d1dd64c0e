//! Exhaustive optimal update repair for small tables.
//!
//! Only the equality pattern among cells matters for FD satisfaction, so the
//! search decides which cells change rather than what they change to. A
//! choice of changed cells is feasible iff the FD chase over the unchanged
//! values, with every changed cell a labeled null, never equates two distinct
//! constants. The chase result then supplies the new values: a constant of
//! the column's active domain, or a fresh value. Per column at most one
//! fresh value per tuple is ever needed.
//!
//! The search is two-level. The outer level enumerates the set `K` of
//! tuples left untouched, which must be an independent set of the conflict
//! graph. The inner level picks a nonempty set of changed cells for every
//! other tuple. Changing a minimum lhs cover detaches a tuple from all
//! others, so larger changes are never needed. Both levels prune with the
//! bound `Σ w_j · c_j`, where `c_j` is the fewest cells tuple `j` must
//! change to fit with what is already fixed.

use std::collections::HashMap;

use crate::fd::FdSet;
use crate::srepair::RepairError;
use crate::table::{dist_upd, violates, FreshValues, Guarantee, Table, UpdateRepair, EPS};

pub const BRUTE_U_MAX_TUPLES: usize = 6;
pub const BRUTE_U_MAX_ATTRIBUTES: usize = 4;

/// Hard limit from the bitset representation.
const MAX_ROWS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteUCaps {
    pub max_tuples: usize,
    pub max_attributes: usize,
}

impl Default for BruteUCaps {
    fn default() -> Self {
        BruteUCaps {
            max_tuples: BRUTE_U_MAX_TUPLES,
            max_attributes: BRUTE_U_MAX_ATTRIBUTES,
        }
    }
}

pub fn brute_u_repair(d: &FdSet, t: &Table) -> Result<UpdateRepair, RepairError> {
    brute_u_repair_capped(d, t, BruteUCaps::default())
}

/// Optimal update repair by exhaustive search; see the module docs.
pub fn brute_u_repair_capped(
    d: &FdSet,
    t: &Table,
    caps: BruteUCaps,
) -> Result<UpdateRepair, RepairError> {
    t.check_schema(d)?;
    let cap = caps.max_tuples.min(MAX_ROWS);
    if t.len() > cap {
        return Err(RepairError::CapExceeded {
            what: "brute-force update search",
            size: t.len(),
            cap,
        });
    }
    if t.schema().len() > caps.max_attributes {
        return Err(RepairError::AttributeCapExceeded {
            what: "brute-force update search",
            size: t.schema().len(),
            cap: caps.max_attributes,
        });
    }
    let d = d.without_trivial();
    let ctx = Ctx::new(&d, t);
    let mut search = Search {
        ctx: &ctx,
        best_cost: f64::INFINITY,
        best: Vec::new(),
    };
    let root = Chase::new(&ctx);
    let c: Vec<u32> = (0..ctx.n).map(|j| ctx.min_change(&root, j).0).collect();
    search.outer(0, root, 0, &c);

    let mut chase = Chase::new(&ctx);
    for &(r, p) in &search.best {
        assert!(chase.add(&ctx, r, p), "optimal pattern is feasible");
    }
    let mut u = chase.materialize(&ctx);
    u.distance = dist_upd(t, &u)?;
    u.guarantee = Some(Guarantee::Exact);
    Ok(u)
}

/// The instance restricted to attributes mentioned by the FDs, with values
/// interned per column.
struct Ctx<'a> {
    t: &'a Table,
    n: usize,
    /// Schema position of each tracked column.
    cols: Vec<usize>,
    /// `(lhs columns, rhs column)`.
    fds: Vec<(Vec<usize>, usize)>,
    /// `ids[row][col]`: interned value.
    ids: Vec<Vec<u32>>,
    domain: Vec<usize>,
    /// Nonempty change patterns over columns, cheapest first.
    options: Vec<u64>,
    /// Direct conflicts between original tuples.
    conflicts: Vec<u64>,
    weights: Vec<f64>,
}

impl<'a> Ctx<'a> {
    fn new(d: &FdSet, t: &'a Table) -> Self {
        let cols: Vec<usize> = d.attrs().iter().collect();
        let col_of = |attr: usize| {
            cols.iter()
                .position(|&c| c == attr)
                .expect("attribute tracked")
        };
        let fds = d
            .fds()
            .iter()
            .map(|fd| (fd.lhs.iter().map(col_of).collect(), col_of(fd.rhs)))
            .collect();

        let mut ids = vec![Vec::with_capacity(cols.len()); t.len()];
        let mut domain = Vec::with_capacity(cols.len());
        for &attr in &cols {
            let mut intern: HashMap<&str, u32> = HashMap::new();
            for (r, row) in t.rows().iter().enumerate() {
                let next = intern.len() as u32;
                ids[r].push(*intern.entry(row.values[attr].as_str()).or_insert(next));
            }
            domain.push(intern.len());
        }

        let cover = d
            .min_lhs_cover()
            .map(|c| c.iter().map(col_of).fold(0u64, |acc, col| acc | 1 << col));
        let mut options: Vec<u64> = (1u64..1 << cols.len())
            .filter(|p| cover.is_none_or(|c| p.count_ones() < c.count_ones()))
            .collect();
        if let Some(c) = cover {
            if !options.contains(&c) {
                options.push(c);
            }
        }
        options.sort_by_key(|p| (p.count_ones(), *p));

        let n = t.len();
        let mut conflicts = vec![0u64; n];
        for (i, mask) in conflicts.iter_mut().enumerate() {
            for j in 0..n {
                if d.fds()
                    .iter()
                    .any(|fd| violates(fd, &t.rows()[i], &t.rows()[j]))
                {
                    *mask |= 1 << j;
                }
            }
        }
        Ctx {
            t,
            n,
            cols,
            fds,
            ids,
            domain,
            options,
            conflicts,
            weights: t.rows().iter().map(|r| r.weight).collect(),
        }
    }

    /// Fewest cells row `j` must change to fit into `chase`, and the first
    /// pattern achieving it.
    fn min_change(&self, chase: &Chase, j: usize) -> (u32, u64) {
        self.min_change_from(chase, j, 0)
    }

    fn min_change_from(&self, chase: &Chase, j: usize, at_least: u32) -> (u32, u64) {
        for &p in self.options.iter().filter(|p| p.count_ones() >= at_least) {
            let mut next = chase.clone();
            if next.add(self, j, p) {
                return (p.count_ones(), p);
            }
        }
        // Changing every tracked cell always fits.
        let all = (1u64 << self.cols.len()) - 1;
        (all.count_ones(), all)
    }
}

struct Search<'c, 'a> {
    ctx: &'c Ctx<'a>,
    best_cost: f64,
    best: Vec<(usize, u64)>,
}

impl Search<'_, '_> {
    /// Decides membership in `K` for rows `i..`. `c[j]` lower-bounds the
    /// cells row `j` changes if it ends up outside `K`, given the rows kept
    /// so far.
    fn outer(&mut self, i: usize, kept_chase: Chase, kept: u64, c: &[u32]) {
        let ctx = self.ctx;
        let n = ctx.n;
        // Rows before `i` not kept, and later rows that conflict with `K`,
        // must change.
        let mut bound = 0.0;
        let mut free = Vec::new();
        for (j, &cj) in c.iter().enumerate().take(n) {
            let forced = if j < i {
                kept & 1 << j == 0
            } else {
                ctx.conflicts[j] & kept != 0
            };
            if forced {
                bound += ctx.weights[j] * f64::from(cj);
            } else if j >= i {
                free.push(j);
            }
        }
        bound += local_ratio(ctx, &free);
        if bound >= self.best_cost - EPS {
            return;
        }
        if i == n {
            let changed: Vec<usize> = (0..n).filter(|&j| kept & 1 << j == 0).collect();
            let mut order = changed;
            // Most constrained rows first.
            order.sort_by_key(|&j| (std::cmp::Reverse(c[j]), j));
            self.inner(&order, 0, kept_chase, 0.0, &mut Vec::new());
            return;
        }
        if ctx.conflicts[i] & kept == 0 {
            let mut with = kept_chase.clone();
            let ok = with.add(ctx, i, 0);
            debug_assert!(ok, "rows without direct conflicts chase cleanly");
            let raised: Vec<u32> = (0..n)
                .map(|j| {
                    if j == i || kept & 1 << j != 0 {
                        c[j]
                    } else {
                        ctx.min_change_from(&with, j, c[j]).0
                    }
                })
                .collect();
            self.outer(i + 1, with, kept | 1 << i, &raised);
        }
        self.outer(i + 1, kept_chase, kept, c);
    }

    /// Assigns change patterns to `order[k..]` on top of `chase`.
    fn inner(
        &mut self,
        order: &[usize],
        k: usize,
        chase: Chase,
        cost: f64,
        chosen: &mut Vec<(usize, u64)>,
    ) {
        let ctx = self.ctx;
        if k == order.len() {
            if cost < self.best_cost - EPS {
                self.best_cost = cost;
                self.best = (0..ctx.n)
                    .filter(|j| !chosen.iter().any(|&(r, _)| r == *j))
                    .map(|j| (j, 0))
                    .chain(chosen.iter().copied())
                    .collect();
            }
            return;
        }
        let mut bound = cost;
        for &j in &order[k..] {
            bound += ctx.weights[j] * f64::from(ctx.min_change(&chase, j).0);
            if bound >= self.best_cost - EPS {
                return;
            }
        }
        let j = order[k];
        let w = ctx.weights[j];
        for &p in &ctx.options {
            let c = cost + w * f64::from(p.count_ones());
            if c >= self.best_cost - EPS {
                break;
            }
            let mut next = chase.clone();
            if next.add(ctx, j, p) {
                chosen.push((j, p));
                self.inner(order, k + 1, next, c, chosen);
                chosen.pop();
            }
        }
    }
}

/// Local-ratio lower bound on the weight that must change among `rows`
/// because of their mutual conflicts.
fn local_ratio(ctx: &Ctx, rows: &[usize]) -> f64 {
    let mut residual: Vec<f64> = rows.iter().map(|&j| ctx.weights[j]).collect();
    let mut dual = 0.0;
    for x in 0..rows.len() {
        for y in x + 1..rows.len() {
            if ctx.conflicts[rows[x]] & 1 << rows[y] != 0 {
                let delta = residual[x].min(residual[y]);
                residual[x] -= delta;
                residual[y] -= delta;
                dual += delta;
            }
        }
    }
    dual
}

const NONE: u32 = u32::MAX;

/// Union-find over the tracked cells of the rows added so far; classes may
/// carry a constant.
#[derive(Clone)]
struct Chase {
    rows: Vec<(usize, u64)>,
    parent: Vec<u32>,
    constant: Vec<u32>,
    /// Per column, the cell holding each constant.
    holder: Vec<Vec<u32>>,
}

impl Chase {
    fn new(ctx: &Ctx) -> Self {
        Chase {
            rows: Vec::new(),
            parent: Vec::new(),
            constant: Vec::new(),
            holder: ctx.domain.iter().map(|&d| vec![NONE; d]).collect(),
        }
    }

    fn cell(&self, ctx: &Ctx, k: usize, col: usize) -> u32 {
        (k * ctx.cols.len() + col) as u32
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    /// Merges two classes; false when both carry different constants.
    fn union(&mut self, x: u32, y: u32) -> bool {
        let (x, y) = (self.find(x), self.find(y));
        if x == y {
            return true;
        }
        match (self.constant[x as usize], self.constant[y as usize]) {
            (a, b) if a != NONE && b != NONE => false,
            (NONE, _) => {
                self.parent[x as usize] = y;
                true
            }
            _ => {
                self.parent[y as usize] = x;
                true
            }
        }
    }

    /// Adds row `r` with the columns in `changed` turned into nulls and
    /// chases to a fixpoint. Returns false on a constant clash, leaving
    /// `self` unusable.
    fn add(&mut self, ctx: &Ctx, r: usize, changed: u64) -> bool {
        let k = self.rows.len();
        self.rows.push((r, changed));
        for col in 0..ctx.cols.len() {
            let cell = self.cell(ctx, k, col);
            self.parent.push(cell);
            if changed & 1 << col != 0 {
                self.constant.push(NONE);
                continue;
            }
            let v = ctx.ids[r][col];
            self.constant.push(v);
            match self.holder[col][v as usize] {
                NONE => self.holder[col][v as usize] = cell,
                h => {
                    let root = self.find(h);
                    self.parent[cell as usize] = root;
                }
            }
        }
        self.propagate(ctx)
    }

    fn propagate(&mut self, ctx: &Ctx) -> bool {
        let m = self.rows.len();
        loop {
            let mut merged = false;
            for (lhs, rhs) in &ctx.fds {
                for a in 0..m {
                    for b in a + 1..m {
                        let agree = lhs.iter().all(|&col| {
                            let (x, y) = (self.cell(ctx, a, col), self.cell(ctx, b, col));
                            self.find(x) == self.find(y)
                        });
                        if !agree {
                            continue;
                        }
                        let (x, y) = (self.cell(ctx, a, *rhs), self.cell(ctx, b, *rhs));
                        let (x, y) = (self.find(x), self.find(y));
                        if x != y {
                            if !self.union(x, y) {
                                return false;
                            }
                            merged = true;
                        }
                    }
                }
            }
            if !merged {
                return true;
            }
        }
    }

    /// Constant classes keep their constant; every other class gets its own
    /// fresh value, numbered in row then column order.
    fn materialize(mut self, ctx: &Ctx) -> UpdateRepair {
        let mut values: Vec<HashMap<u32, &str>> = vec![HashMap::new(); ctx.cols.len()];
        for (r, row) in ctx.t.rows().iter().enumerate() {
            for (col, &attr) in ctx.cols.iter().enumerate() {
                values[col].insert(ctx.ids[r][col], row.values[attr].as_str());
            }
        }
        let mut fresh = FreshValues::for_table(ctx.t);
        let mut named: HashMap<u32, String> = HashMap::new();
        let mut u = UpdateRepair::default();
        let mut rows = self.rows.clone();
        rows.sort_by_key(|&(r, _)| r);
        let position: HashMap<usize, usize> = self
            .rows
            .iter()
            .enumerate()
            .map(|(k, &(r, _))| (r, k))
            .collect();
        for (r, changed) in rows {
            let k = position[&r];
            for col in (0..ctx.cols.len()).filter(|col| changed & 1 << col != 0) {
                let cell = self.cell(ctx, k, col);
                let root = self.find(cell);
                let value = match self.constant[root as usize] {
                    NONE => named.entry(root).or_insert_with(|| fresh.mint()).clone(),
                    v => values[col][&v].to_string(),
                };
                let row = &ctx.t.rows()[r];
                let attr = ctx.cols[col];
                if row.values[attr] != value {
                    u.set(row.id, attr, value);
                }
            }
        }
        u
    }
}
