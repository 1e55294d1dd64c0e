//! JSON payloads for classification, repairs and MPD results.
//!
//! Floats are written with exactly nine decimals. Non-finite values become
//! `null`.

use std::str::FromStr;

use serde_json::{json, Number, Value};

use crate::fd::{AttrSet, FdSet};
use crate::mpd::MpdResult;
use crate::srepair::{osr_succeeds, ClassifierTrace, SRepairReport};
use crate::table::{Guarantee, Table, UpdateRepair, Violation};
use crate::urepair::{kl_ratio_bound, two_mlc_bound, URepairReport};

/// Smallest probability written out next to its logarithm.
pub const MIN_REPORTED_PROBABILITY: f64 = 1e-300;

pub fn fixed(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    // -0.000000000 reads oddly and compares unequal as text.
    let x = if x == 0.0 { 0.0 } else { x };
    let text = format!("{x:.9}");
    Value::Number(Number::from_str(&text).expect("formatted float parses"))
}

fn names(d: &FdSet, set: AttrSet) -> Value {
    json!(d.sorted_names(set))
}

fn fd_lines(d: &FdSet) -> Value {
    json!(d
        .fds()
        .iter()
        .map(|fd| d.fd_to_string(fd))
        .collect::<Vec<_>>())
}

pub fn trace_json(d: &FdSet, trace: &ClassifierTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "step": s.kind.as_str(),
                "removed": names(d, s.removed),
                "remaining": fd_lines(&s.result),
            })
        })
        .collect();
    json!(steps)
}

pub fn classify_json(d: &FdSet) -> Value {
    let (tractable, trace) = osr_succeeds(d);
    let m = d.metrics();
    let (b2, kl) = (two_mlc_bound(d), kl_ratio_bound(d));
    json!({
        "fds": fd_lines(d),
        "tractable_s": tractable,
        "trace": trace_json(d, &trace),
        "is_chain": m.is_chain,
        "consensus_attributes": names(d, m.consensus_attrs),
        "mlc": m.mlc,
        "mfs": m.mfs,
        "mci": m.mci,
        "bound_2mlc": fixed(b2),
        "bound_kl": fixed(kl),
        "combined_bound": fixed(b2.min(kl)),
    })
}

fn guarantee(g: Guarantee) -> Value {
    json!({ "label": g.label(), "ratio": fixed(g.ratio()) })
}

pub fn subset_json(d: &FdSet, t: &Table, r: &SRepairReport) -> Value {
    json!({
        "distance": fixed(r.repair.distance),
        "retained_ids": r.repair.retained_ids,
        "deleted_ids": r.repair.deleted_ids(t),
        "algorithm": r.algorithm.as_str(),
        "guarantee": guarantee(r.repair.guarantee),
        "trace": r.trace.as_ref().map(|tr| trace_json(d, tr)),
    })
}

pub fn update_json(r: &URepairReport) -> Value {
    let fragments: Vec<Value> = r
        .plan
        .components
        .iter()
        .map(|f| {
            json!({
                "fds": fd_lines(&f.fds),
                "strategy": f.strategy.as_str(),
                "ratio": fixed(f.ratio),
                "distance": fixed(f.distance),
            })
        })
        .collect();
    json!({
        "distance": fixed(r.repair.distance),
        "guarantee": guarantee(r.repair.guarantee.unwrap_or(Guarantee::Approx(r.plan.declared_ratio))),
        "changed_cells": r.repair.updates.values().map(|cells| cells.len()).sum::<usize>(),
        "per_fragment": fragments,
        "kl_ratio_bound": fixed(r.kl_ratio_bound),
        "two_mlc_bound": fixed(r.two_mlc_bound),
        "combined_bound": fixed(r.combined_bound),
    })
}

/// Payload for an exhaustively computed update repair.
pub fn brute_update_json(d: &FdSet, u: &UpdateRepair) -> Value {
    let (b2, kl) = (two_mlc_bound(d), kl_ratio_bound(d));
    json!({
        "distance": fixed(u.distance),
        "guarantee": guarantee(Guarantee::Exact),
        "changed_cells": u.updates.values().map(|cells| cells.len()).sum::<usize>(),
        "per_fragment": [{
            "fds": fd_lines(d),
            "strategy": "brute-force",
            "ratio": fixed(1.0),
            "distance": fixed(u.distance),
        }],
        "kl_ratio_bound": fixed(kl),
        "two_mlc_bound": fixed(b2),
        "combined_bound": fixed(b2.min(kl)),
    })
}

pub fn mpd_json(r: &MpdResult) -> Value {
    let p = r.probability();
    let mut v = json!({
        "retained_ids": r.retained_ids,
        "log_probability": fixed(r.log_probability),
        "zero_probability": r.zero_probability,
        "algorithm": r.algorithm.as_str(),
        "preprocessing": {
            "clamped_certain": r.clamped_certain,
            "dropped_low": r.dropped_low,
        },
    });
    if p > MIN_REPORTED_PROBABILITY {
        v["probability"] = fixed(p);
    }
    v
}

pub fn verify_json(d: &FdSet, violations: &[Violation]) -> Value {
    let list: Vec<Value> = violations
        .iter()
        .map(|v| json!({ "fd": d.fd_to_string(&v.fd), "ids": [v.ids.0, v.ids.1] }))
        .collect();
    json!({
        "consistent": violations.is_empty(),
        "violation_count": violations.len(),
        "violations": list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fds, office_fds, office_table};
    use crate::srepair::opt_s_repair;
    use crate::urepair::repair_u;

    #[test]
    fn nine_decimals() {
        assert_eq!(fixed(2.0).to_string(), "2.000000000");
        assert_eq!(fixed(1.0 / 3.0).to_string(), "0.333333333");
        assert_eq!(fixed(-0.0).to_string(), "0.000000000");
        assert_eq!(fixed(f64::NEG_INFINITY), Value::Null);
    }

    #[test]
    fn classify_chain_example() {
        let v = classify_json(&fds("A -> B\nB -> C"));
        assert_eq!(v["tractable_s"], false);
        assert_eq!(v["mlc"], 2);
        assert_eq!(v["bound_2mlc"].to_string(), "4.000000000");
        assert_eq!(v["bound_kl"].to_string(), "4.000000000");
    }

    #[test]
    fn subset_and_update_payloads() {
        let (d, t) = (office_fds(), office_table());
        let s = subset_json(&d, &t, &opt_s_repair(&d, &t).unwrap());
        assert_eq!(s["distance"].to_string(), "2.000000000");
        assert_eq!(s["deleted_ids"], json!([1]));
        assert_eq!(s["trace"][0]["step"], "common-lhs");
        assert_eq!(s["trace"][0]["removed"], json!(["facility"]));
        let u = update_json(&repair_u(&d, &t).unwrap());
        assert_eq!(u["guarantee"]["label"], "exact");
        assert_eq!(u["per_fragment"].as_array().unwrap().len(), 1);
    }
}
