#![allow(dead_code)]

use std::collections::BTreeSet;

use fdrepair::gadgets::attribute_names;
use fdrepair::urepair::{brute_u_repair, strip_consensus};
use fdrepair::{satisfies, AttrSet, Fd, FdSet, Row, Table};
use proptest::prelude::*;

pub const ATTRS: usize = 5;

/// FD sets over `A..` with `m` attributes: up to four FDs, lhs of any size.
pub fn fd_set(m: usize) -> impl Strategy<Value = FdSet> {
    let mask = (1u64 << m) - 1;
    prop::collection::vec((0..=mask, 0..m), 0..=4).prop_map(move |raw| {
        let fds = raw
            .into_iter()
            .map(|(lhs, rhs)| Fd::new(AttrSet::from_bits(lhs), rhs));
        FdSet::new(&attribute_names(m), fds).unwrap()
    })
}

/// Chain FD sets: lhs sets form a nested sequence.
pub fn chain_set(m: usize) -> impl Strategy<Value = FdSet> {
    (
        Just((0..m).collect::<Vec<usize>>()).prop_shuffle(),
        prop::collection::vec((0..=m, 0..m), 1..=4),
    )
        .prop_map(move |(order, raw)| {
            let fds = raw
                .into_iter()
                .map(|(len, rhs)| Fd::new(order[..len].iter().copied().collect(), rhs));
            FdSet::new(&attribute_names(m), fds).unwrap()
        })
}

/// Small tables over `m` attributes with values in `0..domain`.
pub fn table(m: usize, max_rows: usize, domain: u8) -> impl Strategy<Value = Table> {
    prop::collection::vec((prop::collection::vec(0..domain, m), 1u8..=3), 0..=max_rows).prop_map(
        move |rows| {
            let rows = rows
                .into_iter()
                .enumerate()
                .map(|(i, (values, w))| Row {
                    id: i as u64 + 1,
                    values: values.iter().map(|v| v.to_string()).collect(),
                    weight: f64::from(w),
                })
                .collect();
            Table::new(&attribute_names(m), rows).unwrap()
        },
    )
}

pub fn closure_laws(d: &FdSet, x: AttrSet, y: AttrSet) -> Result<(), TestCaseError> {
    let cx = d.closure(x);
    prop_assert!(x.is_subset(cx), "extensive");
    prop_assert_eq!(d.closure(cx), cx, "idempotent");
    let xy = x.union(y);
    prop_assert!(cx.is_subset(d.closure(xy)), "monotone");
    Ok(())
}

pub fn removal_absence(d: &FdSet, x: AttrSet) -> Result<(), TestCaseError> {
    let r = d.remove_attrs(x);
    for fd in r.fds() {
        prop_assert!(
            !fd.attrs().intersects(x),
            "{} mentions a removed attribute",
            r.fd_to_string(fd)
        );
    }
    prop_assert!(!r.attrs().intersects(x));
    Ok(())
}

/// `Δ` and `{∅ → cl(∅)} ∪ (Δ − cl(∅))` accept the same tables.
pub fn consensus_equivalence(d: &FdSet, t: &Table) -> Result<(), TestCaseError> {
    let c = d.consensus_attrs();
    let split = d.with_fds(
        c.iter()
            .map(|a| Fd::new(AttrSet::EMPTY, a))
            .chain(d.remove_attrs(c).fds().iter().copied()),
    );
    let left = satisfies(t, d).unwrap().is_empty();
    let right = satisfies(t, &split).unwrap().is_empty();
    prop_assert_eq!(left, right, "{} vs {}", d, split);
    Ok(())
}

/// Optimal update distance is additive over attribute-disjoint FD sets.
pub fn disjoint_composition(d1: &FdSet, d2: &FdSet, t: &Table) -> Result<(), TestCaseError> {
    let union = d1.with_fds(d1.fds().iter().chain(d2.fds()).copied());
    let whole = brute_u_repair(&union, t).unwrap().distance;
    let parts = brute_u_repair(d1, t).unwrap().distance + brute_u_repair(d2, t).unwrap().distance;
    prop_assert!(
        (whole - parts).abs() < 1e-9,
        "{whole} vs {parts} for {union}"
    );
    Ok(())
}

/// Fixing the consensus attributes separately loses nothing.
pub fn consensus_additivity(d: &FdSet, t: &Table) -> Result<(), TestCaseError> {
    let strip = strip_consensus(d, t).unwrap();
    let whole = brute_u_repair(d, t).unwrap().distance;
    let rest = brute_u_repair(&strip.residual, t).unwrap().distance;
    prop_assert!((whole - (strip.update.distance + rest)).abs() < 1e-9);
    Ok(())
}

/// Splits attributes `0..m` into two non-empty halves and keeps only FDs
/// inside one half each.
pub fn disjoint_pair(m: usize) -> impl Strategy<Value = (FdSet, FdSet)> {
    (1..m, fd_set(m), fd_set(m)).prop_map(move |(cut, a, b)| {
        let left = AttrSet::prefix(cut);
        let right = AttrSet::prefix(m).difference(left);
        let keep = |d: &FdSet, side: AttrSet| {
            d.with_fds(
                d.fds()
                    .iter()
                    .map(|fd| Fd::new(fd.lhs.intersection(side), fd.rhs))
                    .filter(|fd| side.contains(fd.rhs))
                    .collect::<Vec<_>>(),
            )
        };
        (keep(&a, left), keep(&b, right))
    })
}

pub fn ids(t: &Table) -> BTreeSet<u64> {
    t.ids().collect()
}
