//! Instance generators: the vertex-cover gadget, the `Δ_k` and `Δ'_k`
//! families, and seeded random tables.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fd::{parse_fds, AttrSet, Fd, FdError, FdSet};
use crate::table::{Row, Table, TableError};

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("k must be at least 1")]
    KTooSmall,
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("parallel edge `{0}-{1}`")]
    ParallelEdge(String, String),
    #[error("malformed edge `{0}` (expected `u-v`)")]
    MalformedEdge(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Fd(#[from] FdError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Simple undirected graph with named vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Graph {
    /// Vertices keep their given order; edge endpoints missing from
    /// `vertices` are appended in order of appearance.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self, GadgetError> {
        let mut g = Graph {
            vertices: Vec::new(),
            edges: Vec::new(),
        };
        for v in vertices {
            g.add_vertex(v.as_ref());
        }
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            if u == v {
                return Err(GadgetError::SelfLoop(u.to_string()));
            }
            let key = if u < v { (u, v) } else { (v, u) };
            if !seen.insert(key) {
                return Err(GadgetError::ParallelEdge(u.to_string(), v.to_string()));
            }
            g.add_vertex(u);
            g.add_vertex(v);
            g.edges.push((u.to_string(), v.to_string()));
        }
        Ok(g)
    }

    fn add_vertex(&mut self, v: &str) {
        if !self.vertices.iter().any(|x| x == v) {
            self.vertices.push(v.to_string());
        }
    }

    /// Parses `u-v,v-w,...`; an isolated vertex may be listed on its own.
    pub fn parse(text: &str) -> Result<Self, GadgetError> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('-') {
                Some((u, v)) => {
                    let (u, v) = (u.trim(), v.trim());
                    if u.is_empty() || v.is_empty() || v.contains('-') {
                        return Err(GadgetError::MalformedEdge(item.to_string()));
                    }
                    edges.push((u.to_string(), v.to_string()));
                }
                None => vertices.push(item.to_string()),
            }
        }
        Graph::new(&vertices, &edges)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }
}

/// Table over `R(A, B, C)` with tuples `(u, v, 0)` and `(v, u, 0)` per edge
/// and `(v, v, 1)` per vertex, under `{A -> B, B -> A, B -> C}`. Its optimal
/// update repair costs `2|E|` plus the minimum vertex cover size.
pub fn gen_vertex_cover_gadget(g: &Graph) -> (Table, FdSet) {
    let mut rows = Vec::new();
    let mut push = |a: &str, b: &str, c: &str| {
        rows.push(Row {
            id: rows.len() as u64 + 1,
            values: vec![a.to_string(), b.to_string(), c.to_string()],
            weight: 1.0,
        })
    };
    for (u, v) in &g.edges {
        push(u, v, "0");
        push(v, u, "0");
    }
    for v in &g.vertices {
        push(v, v, "1");
    }
    let schema = ["A", "B", "C"];
    let table = Table::new(&schema, rows).expect("gadget rows are well formed");
    let fds = parse_fds("A -> B\nB -> A\nB -> C", &schema).expect("fixed FD text");
    (table, fds)
}

/// `{A0⋯Ak -> B0, B0 -> C, B1 -> A0, …, Bk -> A0}` over `A0..Ak, B0..Bk, C`.
pub fn gen_delta_k(k: usize) -> Result<FdSet, GadgetError> {
    if k < 1 {
        return Err(GadgetError::KTooSmall);
    }
    let mut schema: Vec<String> = (0..=k).map(|i| format!("A{i}")).collect();
    schema.extend((0..=k).map(|i| format!("B{i}")));
    schema.push("C".into());
    let (a, b, c) = (|i: usize| i, |i: usize| k + 1 + i, 2 * k + 2);
    let mut fds = vec![
        Fd::new((0..=k).map(a).collect(), b(0)),
        Fd::new(AttrSet::singleton(b(0)), c),
    ];
    fds.extend((1..=k).map(|i| Fd::new(AttrSet::singleton(b(i)), a(0))));
    Ok(FdSet::new(&schema, fds)?)
}

/// `{A0A1 -> B0, A1A2 -> B1, …, AkAk+1 -> Bk}` over `A0..Ak+1, B0..Bk`.
pub fn gen_delta_prime_k(k: usize) -> Result<FdSet, GadgetError> {
    if k < 1 {
        return Err(GadgetError::KTooSmall);
    }
    let mut schema: Vec<String> = (0..=k + 1).map(|i| format!("A{i}")).collect();
    schema.extend((0..=k).map(|i| format!("B{i}")));
    let fds = (0..=k).map(|i| Fd::new([i, i + 1].into_iter().collect(), k + 2 + i));
    Ok(FdSet::new(&schema, fds)?)
}

/// Parameters for [`gen_random_instance`].
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub tuples: usize,
    /// Attributes are named `A`, `B`, `C`, ...
    pub attrs: usize,
    /// Cell values are drawn from `0..domain`.
    pub domain: usize,
    /// Each tuple's weight is drawn uniformly from this list.
    pub weights: Vec<f64>,
    /// FD texts over the attribute names; one is drawn per instance. When
    /// empty, a random FD set is generated instead.
    pub catalog: Vec<String>,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            tuples: 6,
            attrs: 3,
            domain: 3,
            weights: vec![1.0],
            catalog: Vec::new(),
        }
    }
}

pub const MAX_RANDOM_TUPLES: usize = 100_000;
pub const MAX_RANDOM_ATTRS: usize = 26;

pub fn attribute_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| char::from(b'A' + i as u8).to_string())
        .collect()
}

/// Reproducible random instance. The generator is ChaCha8 seeded with
/// `seed`; draws happen in a fixed order (FD set, then each tuple's values
/// left to right followed by its weight), so a seed pins the instance.
pub fn gen_random_instance(
    seed: u64,
    params: &RandomParams,
) -> Result<(Table, FdSet), GadgetError> {
    let p = params;
    if p.attrs == 0 || p.attrs > MAX_RANDOM_ATTRS {
        return Err(GadgetError::InvalidParams(format!(
            "attrs must be in 1..={MAX_RANDOM_ATTRS}"
        )));
    }
    if p.tuples > MAX_RANDOM_TUPLES {
        return Err(GadgetError::InvalidParams(format!(
            "tuples must be at most {MAX_RANDOM_TUPLES}"
        )));
    }
    if p.domain == 0 {
        return Err(GadgetError::InvalidParams("domain must be positive".into()));
    }
    if p.weights.is_empty() || p.weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(GadgetError::InvalidParams(
            "weights must be a non-empty list of positive numbers".into(),
        ));
    }
    let schema = attribute_names(p.attrs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fds = match p.catalog.choose(&mut rng) {
        Some(text) => parse_fds(text, &schema)?,
        None => random_fds(&mut rng, &schema)?,
    };
    let rows = (0..p.tuples)
        .map(|i| {
            let values = (0..p.attrs)
                .map(|_| rng.gen_range(0..p.domain).to_string())
                .collect();
            let weight = p.weights[rng.gen_range(0..p.weights.len())];
            Row {
                id: i as u64 + 1,
                values,
                weight,
            }
        })
        .collect();
    Ok((Table::new(&schema, rows)?, fds))
}

/// One to three FDs, each with a lhs of up to two attributes.
fn random_fds(rng: &mut ChaCha8Rng, schema: &[String]) -> Result<FdSet, GadgetError> {
    let n = schema.len();
    let count = rng.gen_range(1..=3);
    let mut fds = Vec::new();
    for _ in 0..count {
        let rhs = rng.gen_range(0..n);
        let lhs_size = rng.gen_range(0..=2.min(n - 1));
        let others: Vec<usize> = (0..n).filter(|&a| a != rhs).collect();
        let lhs: AttrSet = others.choose_multiple(rng, lhs_size).copied().collect();
        fds.push(Fd::new(lhs, rhs));
    }
    Ok(FdSet::new(schema, fds)?)
}
