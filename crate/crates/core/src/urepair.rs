//! Update repairs.
//!
//! [`repair_u`] first fixes the consensus attributes optimally, then splits
//! the remaining FDs into attribute-disjoint fragments and repairs each one
//! on its own, exactly where a polynomial algorithm is known and with the
//! `2·mlc` approximation elsewhere. [`brute_u_repair`] is an exhaustive
//! oracle for small tables.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::fd::{AttrSet, Fd, FdSet};
use crate::srepair::{approx_s_repair, opt_s_repair, osr_succeeds, RepairError};
use crate::table::{
    dist_sub, dist_upd, satisfies, FreshValues, Guarantee, SubsetRepair, Table, TupleId,
    UpdateRepair, EPS,
};
pub use crate::ubrute::{
    brute_u_repair, brute_u_repair_capped, BruteUCaps, BRUTE_U_MAX_ATTRIBUTES, BRUTE_U_MAX_TUPLES,
};

/// Drops every tuple with at least one changed cell.
pub fn update_to_subset(
    d: &FdSet,
    t: &Table,
    u: &UpdateRepair,
) -> Result<SubsetRepair, RepairError> {
    let updated = t.apply(u)?;
    let violations = satisfies(&updated, d)?;
    if !violations.is_empty() {
        return Err(RepairError::InconsistentUpdate(violations.len()));
    }
    let touched: BTreeSet<TupleId> = u.change_log(t).into_iter().map(|(id, ..)| id).collect();
    let retained: BTreeSet<TupleId> = t.ids().filter(|id| !touched.contains(id)).collect();
    let distance = dist_sub(t, &retained)?;
    let guarantee = match (u.guarantee, d.metrics().mlc) {
        (Some(g), Some(mlc)) => Guarantee::Approx(g.ratio() * mlc.max(1) as f64),
        _ => Guarantee::Unknown,
    };
    Ok(SubsetRepair {
        retained_ids: retained,
        distance,
        guarantee,
    })
}

/// Gives every deleted tuple fresh values on a minimum lhs cover, which
/// detaches it from every other tuple.
pub fn subset_to_update(
    d: &FdSet,
    t: &Table,
    s: &SubsetRepair,
) -> Result<UpdateRepair, RepairError> {
    let d = d.without_trivial();
    if d.has_consensus_fd() {
        return Err(RepairError::ConsensusPresent);
    }
    let kept = t.subset(&s.retained_ids)?;
    let violations = satisfies(&kept, &d)?;
    if !violations.is_empty() {
        return Err(RepairError::InconsistentSubset(violations.len()));
    }
    let mut fresh = FreshValues::for_table(t);
    let mut u = isolate_deleted(&d, t, &s.retained_ids, &mut fresh);
    u.distance = dist_upd(t, &u)?;
    u.guarantee = d
        .metrics()
        .mlc
        .map(|mlc| Guarantee::Approx(s.guarantee.ratio() * mlc.max(1) as f64));
    Ok(u)
}

fn isolate_deleted(
    d: &FdSet,
    t: &Table,
    retained: &BTreeSet<TupleId>,
    fresh: &mut FreshValues,
) -> UpdateRepair {
    let cover = d
        .min_lhs_cover()
        .expect("consensus-free FD set has an lhs cover");
    let mut u = UpdateRepair::default();
    for id in t.ids().filter(|id| !retained.contains(id)) {
        for attr in cover.iter() {
            u.set(id, attr, fresh.mint());
        }
    }
    u
}

/// The consensus part of an update repair.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsensusStrip {
    /// Optimal rewrite of the attributes in `cl(∅)`.
    pub update: UpdateRepair,
    pub consensus_attrs: AttrSet,
    /// `Δ − cl(∅)`, trivial FDs dropped.
    pub residual: FdSet,
}

/// Sets every consensus attribute to its heaviest value (ties go to the
/// least value). This part of the repair is optimal on its own.
pub fn strip_consensus(d: &FdSet, t: &Table) -> Result<ConsensusStrip, RepairError> {
    t.check_schema(d)?;
    let consensus_attrs = d.consensus_attrs();
    let mut update = UpdateRepair::default();
    for attr in consensus_attrs.iter() {
        let mut mass: BTreeMap<&str, f64> = BTreeMap::new();
        for row in t.rows() {
            *mass.entry(row.values[attr].as_str()).or_default() += row.weight;
        }
        let mut best: Option<(&str, f64)> = None;
        for (&value, &w) in &mass {
            if best.is_none_or(|(_, bw)| w > bw + EPS) {
                best = Some((value, w));
            }
        }
        if let Some((value, _)) = best {
            for row in t.rows().iter().filter(|r| r.values[attr] != value) {
                update.set(row.id, attr, value.to_string());
            }
        }
    }
    update.distance = dist_upd(t, &update)?;
    update.guarantee = Some(Guarantee::Exact);
    Ok(ConsensusStrip {
        update,
        consensus_attrs,
        residual: d.remove_attrs(consensus_attrs).without_trivial(),
    })
}

/// Splits the nontrivial FDs into connected components, two FDs being
/// adjacent when they share an attribute. Fragments come out ordered by
/// their least attribute position.
pub fn decompose(d: &FdSet) -> Vec<FdSet> {
    let mut groups: Vec<(AttrSet, Vec<Fd>)> = Vec::new();
    for &fd in d.fds().iter().filter(|fd| !fd.is_trivial()) {
        let mut attrs = fd.attrs();
        let mut fds = vec![fd];
        groups.retain(|(ga, gf)| {
            if ga.intersects(attrs) {
                attrs = attrs.union(*ga);
                fds.extend(gf.iter().copied());
                false
            } else {
                true
            }
        });
        groups.push((attrs, fds));
    }
    groups.sort_by_key(|(attrs, _)| attrs.iter().next());
    groups.into_iter().map(|(_, fds)| d.with_fds(fds)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UStrategy {
    ConsensusExact,
    CommonLhsExact,
    AbBaExact,
    Approx2Mlc,
}

impl UStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            UStrategy::ConsensusExact => "consensus-exact",
            UStrategy::CommonLhsExact => "common-lhs-exact",
            UStrategy::AbBaExact => "ab-ba-exact",
            UStrategy::Approx2Mlc => "approx-2mlc",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UFragment {
    pub fds: FdSet,
    pub strategy: UStrategy,
    pub ratio: f64,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UComponentPlan {
    pub components: Vec<UFragment>,
    pub declared_ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct URepairReport {
    pub repair: UpdateRepair,
    pub plan: UComponentPlan,
    /// `(MCI + 2)(2·MFS − 1)`, for comparison.
    pub kl_ratio_bound: f64,
    pub two_mlc_bound: f64,
    pub combined_bound: f64,
}

/// `2·mlc`, maximized over the fragments of `Δ − cl(∅)`; 1 when nothing is
/// left after removing the consensus attributes.
pub fn two_mlc_bound(d: &FdSet) -> f64 {
    let residual = d.remove_attrs(d.consensus_attrs()).without_trivial();
    decompose(&residual)
        .iter()
        .filter_map(|f| f.min_lhs_cover())
        .map(|c| 2.0 * c.len() as f64)
        .fold(1.0, f64::max)
}

pub fn kl_ratio_bound(d: &FdSet) -> f64 {
    let m = d.metrics();
    ((m.mci + 2) * (2 * m.mfs).saturating_sub(1)) as f64
}

/// The `{A -> B, B -> A}` shape: returns `(A, B)`.
fn ab_ba_shape(f: &FdSet) -> Option<(usize, usize)> {
    match f.fds() {
        [x, y] if x.lhs.len() == 1 && y.lhs.len() == 1 => {
            let a = x.lhs.iter().next()?;
            let b = y.lhs.iter().next()?;
            (x.rhs == b && y.rhs == a && a != b).then_some((a, b))
        }
        _ => None,
    }
}

fn has_common_lhs(f: &FdSet) -> bool {
    !f.fds()
        .iter()
        .fold(f.active(), |acc, fd| acc.intersection(fd.lhs))
        .is_empty()
}

/// Update repair for any FD set, exact where the structure allows.
pub fn repair_u(d: &FdSet, t: &Table) -> Result<URepairReport, RepairError> {
    let d = d.without_trivial();
    let strip = strip_consensus(&d, t)?;
    let mut fresh = FreshValues::for_table(t);
    let mut repair = UpdateRepair::default();
    let mut components = Vec::new();

    if !strip.consensus_attrs.is_empty() {
        let fds = d.with_fds(
            strip
                .consensus_attrs
                .iter()
                .map(|a| Fd::new(AttrSet::EMPTY, a)),
        );
        components.push(UFragment {
            fds,
            strategy: UStrategy::ConsensusExact,
            ratio: 1.0,
            distance: strip.update.distance,
        });
        repair.extend(strip.update);
    }

    for fragment in decompose(&strip.residual) {
        let (update, strategy, ratio) = if let Some((a, b)) = ab_ba_shape(&fragment) {
            (
                ab_ba_repair(&fragment, t, a, b, &mut fresh)?,
                UStrategy::AbBaExact,
                1.0,
            )
        } else if has_common_lhs(&fragment) && osr_succeeds(&fragment).0 {
            let s = opt_s_repair(&fragment, t)?.repair;
            let u = isolate_deleted(&fragment, t, &s.retained_ids, &mut fresh);
            (u, UStrategy::CommonLhsExact, 1.0)
        } else {
            let s = approx_s_repair(&fragment, t)?.repair;
            let mlc = fragment.min_lhs_cover().map_or(1, AttrSet::len);
            let u = isolate_deleted(&fragment, t, &s.retained_ids, &mut fresh);
            (u, UStrategy::Approx2Mlc, 2.0 * mlc as f64)
        };
        components.push(UFragment {
            distance: dist_upd(t, &update)?,
            fds: fragment,
            strategy,
            ratio,
        });
        repair.extend(update);
    }

    let declared_ratio = components.iter().map(|c| c.ratio).fold(1.0, f64::max);
    repair.distance = dist_upd(t, &repair)?;
    repair.guarantee = Some(if declared_ratio == 1.0 {
        Guarantee::Exact
    } else {
        Guarantee::Approx(declared_ratio)
    });
    let kl = kl_ratio_bound(&d);
    let two_mlc = two_mlc_bound(&d);
    Ok(URepairReport {
        repair,
        plan: UComponentPlan {
            components,
            declared_ratio,
        },
        kl_ratio_bound: kl,
        two_mlc_bound: two_mlc,
        combined_bound: kl.min(two_mlc),
    })
}

/// Under `{A -> B, B -> A}` every deleted tuple of an optimal subset repair
/// shares its A or its B value with a kept tuple, so copying the other value
/// over costs exactly one cell.
fn ab_ba_repair(
    f: &FdSet,
    t: &Table,
    a: usize,
    b: usize,
    fresh: &mut FreshValues,
) -> Result<UpdateRepair, RepairError> {
    let s = opt_s_repair(f, t)?.repair;
    let mut b_of_a: HashMap<&str, &str> = HashMap::new();
    let mut a_of_b: HashMap<&str, &str> = HashMap::new();
    for row in t.rows().iter().filter(|r| s.retained_ids.contains(&r.id)) {
        b_of_a.insert(&row.values[a], &row.values[b]);
        a_of_b.insert(&row.values[b], &row.values[a]);
    }
    let mut u = UpdateRepair::default();
    for row in t.rows().iter().filter(|r| !s.retained_ids.contains(&r.id)) {
        if let Some(&vb) = b_of_a.get(row.values[a].as_str()) {
            u.set(row.id, b, vb.to_string());
        } else if let Some(&va) = a_of_b.get(row.values[b].as_str()) {
            u.set(row.id, a, va.to_string());
        } else {
            // Unreachable for a maximal subset; isolating keeps the output
            // consistent regardless.
            u.set(row.id, a, fresh.mint());
            u.set(row.id, b, fresh.mint());
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fds, office_fds, office_table};

    fn consistent(d: &FdSet, t: &Table, u: &UpdateRepair) -> bool {
        satisfies(&t.apply(u).unwrap(), d).unwrap().is_empty()
    }

    fn figure_update(cells: &[(TupleId, usize, &str)]) -> UpdateRepair {
        let mut u = UpdateRepair::default();
        for &(id, attr, v) in cells {
            u.set(id, attr, v.to_string());
        }
        u
    }

    #[test]
    fn update_to_subset_examples() {
        let (d, t) = (office_fds(), office_table());
        let u1 = figure_update(&[(1, 0, "F01")]);
        let s = update_to_subset(&d, &t, &u1).unwrap();
        assert_eq!(
            (s.retained_ids.clone(), s.distance),
            ([2, 3, 4].into(), 2.0)
        );
        assert_eq!(dist_upd(&t, &u1).unwrap(), 2.0);

        let u2 = figure_update(&[(2, 2, "3"), (2, 3, "Paris"), (3, 3, "Paris")]);
        let s = update_to_subset(&d, &t, &u2).unwrap();
        assert_eq!((s.retained_ids, s.distance), ([1, 4].into(), 2.0));

        let clean = t.subset(&[1, 4].into()).unwrap();
        let s = update_to_subset(&d, &clean, &UpdateRepair::default()).unwrap();
        assert_eq!(s.distance, 0.0);

        assert!(matches!(
            update_to_subset(&d, &t, &UpdateRepair::default()),
            Err(RepairError::InconsistentUpdate(_))
        ));
    }

    #[test]
    fn subset_to_update_examples() {
        let d = fds("A -> B");
        let t = Table::from_csv("id,A,B\n1,a,b\n2,a,c\n").unwrap();
        let s = SubsetRepair {
            retained_ids: [1].into(),
            distance: 1.0,
            guarantee: Guarantee::Exact,
        };
        let u = subset_to_update(&d, &t, &s).unwrap();
        assert_eq!(u.updates[&2][&0], "⟨fresh:1⟩");
        assert_eq!(u.distance, 1.0);
        assert!(consistent(&d, &t, &u));

        let all = SubsetRepair {
            retained_ids: [1].into(),
            ..s.clone()
        };
        let single = t.subset(&[1].into()).unwrap();
        assert_eq!(subset_to_update(&d, &single, &all).unwrap().distance, 0.0);

        let d = fds("-> A");
        assert!(matches!(
            subset_to_update(&d, &Table::from_csv("id,A\n").unwrap(), &s),
            Err(RepairError::ConsensusPresent)
        ));
    }

    #[test]
    fn subset_to_update_uses_common_lhs_cover() {
        let d = crate::fd::parse_fds(
            "A0, A1 -> B0\nA1, A2 -> B1",
            &["A0", "A1", "A2", "B0", "B1"],
        )
        .unwrap();
        let t =
            Table::from_csv("id,A0,A1,A2,B0,B1,weight\n1,x,x,x,x,x,1\n2,x,x,x,y,x,2\n").unwrap();
        let s = SubsetRepair {
            retained_ids: [1].into(),
            distance: 2.0,
            guarantee: Guarantee::Exact,
        };
        let u = subset_to_update(&d, &t, &s).unwrap();
        assert_eq!(u.distance, 2.0);
        assert_eq!(u.updates[&2].keys().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn strip_consensus_examples() {
        let d = fds("-> A");
        let t = Table::from_csv("id,A,weight\n1,x,2\n2,y,1\n").unwrap();
        let s = strip_consensus(&d, &t).unwrap();
        assert_eq!(s.update.updates[&2][&0], "x");
        assert_eq!(s.update.distance, 1.0);
        assert!(s.residual.is_empty());

        let d = office_fds();
        let s = strip_consensus(&d, &office_table()).unwrap();
        assert!(s.update.updates.is_empty());
        assert_eq!(s.residual, d);

        let d = crate::fd::parse_fds("-> D\nA, D -> B\nB -> C, D", &["A", "B", "C", "D"]).unwrap();
        let s = strip_consensus(&d, &Table::from_csv("id,A,B,C,D\n").unwrap()).unwrap();
        assert_eq!(s.residual.to_text(), "A -> B\nB -> C\n");
    }

    #[test]
    fn consensus_ties_go_to_least_value() {
        let d = fds("-> A");
        let t = Table::from_csv("id,A\n1,y\n2,x\n").unwrap();
        let s = strip_consensus(&d, &t).unwrap();
        assert_eq!(s.update.updates[&1][&0], "x");
    }

    #[test]
    fn decompose_examples() {
        let d = crate::fd::parse_fds(
            "item -> cost\nbuyer -> address",
            &["item", "cost", "buyer", "address"],
        )
        .unwrap();
        let parts = decompose(&d);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].to_text(), "item -> cost\n");
        assert_eq!(parts[1].to_text(), "buyer -> address\n");
        assert_eq!(decompose(&fds("A -> B\nB -> C")).len(), 1);
        assert!(decompose(&fds("")).is_empty());
    }

    #[test]
    fn decompose_merges_bridged_groups() {
        let d = fds("A -> B\nC -> D\nB -> C");
        assert_eq!(decompose(&d).len(), 1);
    }

    #[test]
    fn repair_u_office_is_exact() {
        let (d, t) = (office_fds(), office_table());
        let r = repair_u(&d, &t).unwrap();
        assert_eq!(r.repair.distance, 2.0);
        assert_eq!(r.repair.guarantee, Some(Guarantee::Exact));
        assert_eq!(r.plan.components[0].strategy, UStrategy::CommonLhsExact);
        assert!(consistent(&d, &t, &r.repair));
    }

    #[test]
    fn repair_u_ab_ba() {
        let d = fds("A -> B\nB -> A");
        let t = Table::from_csv("id,A,B\n1,a,b\n2,a,c\n").unwrap();
        let r = repair_u(&d, &t).unwrap();
        assert_eq!(r.repair.distance, 1.0);
        assert_eq!(r.plan.components[0].strategy, UStrategy::AbBaExact);
        assert_eq!(r.repair.updates[&2][&1], "b");
        assert_eq!(brute_u_repair(&d, &t).unwrap().distance, 1.0);
    }

    #[test]
    fn repair_u_approx_path() {
        let d = fds("A -> B\nB -> C");
        let t = Table::from_csv("id,A,B,C\n1,a,b,c\n2,a,b,d\n3,a,e,c\n").unwrap();
        let r = repair_u(&d, &t).unwrap();
        // {A} and {B} are disjoint lhs, so mlc = 2.
        assert_eq!(r.plan.declared_ratio, 4.0);
        assert_eq!(r.repair.guarantee, Some(Guarantee::Approx(4.0)));
        let opt = brute_u_repair(&d, &t).unwrap().distance;
        assert!(r.repair.distance <= 4.0 * opt + EPS);
        assert!(consistent(&d, &t, &r.repair));
    }

    #[test]
    fn repair_u_with_consensus_and_fragments() {
        let d = crate::fd::parse_fds("-> D\nA -> B\nC -> E", &["A", "B", "C", "D", "E"]).unwrap();
        let t = Table::from_csv("id,A,B,C,D,E\n1,a,b,c,x,e\n2,a,z,c,y,f\n3,q,b,c,x,e\n").unwrap();
        let r = repair_u(&d, &t).unwrap();
        let kinds: Vec<UStrategy> = r.plan.components.iter().map(|c| c.strategy).collect();
        assert_eq!(
            kinds,
            vec![
                UStrategy::ConsensusExact,
                UStrategy::CommonLhsExact,
                UStrategy::CommonLhsExact
            ]
        );
        assert!(consistent(&d, &t, &r.repair));
        assert_eq!(r.repair.distance, 3.0);
    }

    #[test]
    fn bounds_for_simple_sets() {
        let d = fds("A -> B\nB -> C");
        assert_eq!(two_mlc_bound(&d), 4.0);
        assert_eq!(kl_ratio_bound(&d), 4.0);
        assert_eq!(two_mlc_bound(&fds("A -> B\nA -> C")), 2.0);
        assert_eq!(two_mlc_bound(&fds("-> A")), 1.0);
    }
}
