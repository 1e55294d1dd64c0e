#![allow(dead_code)]

pub mod props;

use std::collections::{BTreeSet, HashSet};

use fdrepair::gadgets::{gen_random_instance, RandomParams};
use fdrepair::{FdSet, Row, Table};

/// Optimal update-repair distance by enumerating cell values literally:
/// every cell ranges over its column's active domain plus `fresh` new
/// symbols shared across the column.
pub fn value_space_u_optimum(d: &FdSet, t: &Table, fresh: usize) -> f64 {
    let m = t.schema().len();
    let domains: Vec<Vec<String>> = (0..m)
        .map(|a| {
            let mut vals: Vec<String> = t
                .rows()
                .iter()
                .map(|r| r.values[a].clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            vals.extend((0..fresh).map(|i| format!("#new{i}")));
            vals
        })
        .collect();
    let mut cells: Vec<Vec<String>> = t.rows().iter().map(|r| r.values.clone()).collect();
    let mut best = f64::INFINITY;
    search(d, t, &domains, &mut cells, 0, 0.0, &mut best);
    best
}

fn consistent_prefix(d: &FdSet, cells: &[Vec<String>], upto: usize) -> bool {
    let last = &cells[upto];
    cells[..upto].iter().all(|other| {
        d.fds()
            .iter()
            .all(|fd| !fd.lhs.iter().all(|a| last[a] == other[a]) || last[fd.rhs] == other[fd.rhs])
    })
}

fn search(
    d: &FdSet,
    t: &Table,
    domains: &[Vec<String>],
    cells: &mut Vec<Vec<String>>,
    pos: usize,
    cost: f64,
    best: &mut f64,
) {
    if cost >= *best {
        return;
    }
    let m = domains.len();
    if pos == t.len() * m {
        *best = cost;
        return;
    }
    let (r, a) = (pos / m, pos % m);
    let original = t.rows()[r].values[a].clone();
    for v in std::iter::once(&original).chain(domains[a].iter().filter(|v| **v != original)) {
        cells[r][a] = v.clone();
        let step = if *v == original {
            0.0
        } else {
            t.rows()[r].weight
        };
        if a + 1 == m && !consistent_prefix(d, cells, r) {
            continue;
        }
        search(d, t, domains, cells, pos + 1, cost + step, best);
    }
    cells[r][a] = original;
}

/// Exhaustive optimal subset repair: the heaviest consistent subset.
pub fn subset_optimum(d: &FdSet, t: &Table) -> f64 {
    let n = t.len();
    let rows = t.rows();
    let mut best = f64::INFINITY;
    for mask in 0u32..1 << n {
        let kept: Vec<&Row> = (0..n)
            .filter(|i| mask & 1 << i != 0)
            .map(|i| &rows[i])
            .collect();
        let ok = kept.iter().enumerate().all(|(i, a)| {
            kept[i + 1..].iter().all(|b| {
                d.fds().iter().all(|fd| {
                    !fd.lhs.iter().all(|x| a.values[x] == b.values[x])
                        || a.values[fd.rhs] == b.values[fd.rhs]
                })
            })
        });
        if ok {
            let deleted: f64 = (0..n)
                .filter(|i| mask & 1 << i == 0)
                .map(|i| rows[i].weight)
                .sum();
            best = best.min(deleted);
        }
    }
    best
}

/// Minimum vertex cover size of a graph on `n` vertices.
pub fn min_vertex_cover(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|s| edges.iter().all(|&(u, v)| s & (1 << u | 1 << v) != 0))
        .map(u32::count_ones)
        .min()
        .unwrap() as usize
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative edge list per isomorphism class of simple graphs on
/// exactly `n` vertices.
pub fn graphs_up_to_isomorphism(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = (0..pairs.len())
            .filter(|i| mask & 1 << i != 0)
            .map(|i| pairs[i])
            .collect();
        let canon = perms
            .iter()
            .map(|p| {
                let mut e: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                    .collect();
                e.sort_unstable();
                e
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(edges);
        }
    }
    out
}

/// Seeded instance drawn from `catalog`, with tuple and attribute counts
/// varying with the seed.
pub fn instance(
    seed: u64,
    catalog: &[&str],
    tuples: usize,
    attrs: usize,
    domain: usize,
    weights: &[f64],
) -> (Table, FdSet) {
    let params = RandomParams {
        tuples,
        attrs,
        domain,
        weights: weights.to_vec(),
        catalog: catalog.iter().map(|s| s.to_string()).collect(),
    };
    gen_random_instance(seed, &params).expect("valid parameters")
}

/// Catalog entries whose attributes all lie in the first `attrs` letters.
pub fn fitting<'a>(catalog: &[&'a str], attrs: usize) -> Vec<&'a str> {
    let names = fdrepair::gadgets::attribute_names(attrs);
    catalog
        .iter()
        .copied()
        .filter(|text| fdrepair::parse_fds(text, &names).is_ok())
        .collect()
}

pub const TRACTABLE: &[&str] = &[
    "A -> B",
    "A -> B\nA -> C",
    "A -> B\nA, B -> C",
    "A -> B\nA, B -> C\nA, B, C -> D",
    "A -> C\nA, B -> D",
    "A -> B\nB -> A",
    "A -> B\nB -> A\nB -> C",
    "-> A",
    "-> A\nB -> C",
    "A, B -> C\nC -> A, B",
];

pub const INTRACTABLE: &[&str] = &["A -> B\nB -> C", "A -> B\nC -> D", "A, B -> C\nC -> B"];

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}
