//! Repairing inconsistent tables under functional dependencies.
//!
//! Subset repairs delete tuples, update repairs rewrite cells. The crate
//! classifies FD sets by whether an optimal subset repair is computable in
//! polynomial time, computes exact or approximate repairs accordingly, and
//! ships brute-force oracles for small instances.

pub mod combinatorics;
pub mod fd;
pub mod gadgets;
pub mod mpd;
pub mod report;
pub mod srepair;
pub mod table;
mod ubrute;
pub mod urepair;

#[cfg(test)]
pub(crate) mod fixtures;

pub use fd::{
    infer_schema, parse_fds, parse_schema, AttrSet, Fd, FdError, FdMetrics, FdSet, Simplification,
};
pub use table::{
    conflict_graph, dist_sub, dist_upd, satisfies, ConflictGraph, FreshValues, Guarantee, Row,
    SubsetRepair, Table, TableError, TupleId, UpdateRepair, Violation, EPS,
};
