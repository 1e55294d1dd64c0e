//! Browser bindings: classification, repair and the ratio curves of the
//! two FD families, each returning a JSON string.

use fdrepair::gadgets::{gen_delta_k, gen_delta_prime_k};
use fdrepair::report::{self, fixed};
use fdrepair::srepair::{approx_s_repair, opt_s_repair, osr_succeeds};
use fdrepair::urepair::{kl_ratio_bound, repair_u, two_mlc_bound};
use fdrepair::{infer_schema, parse_fds, FdSet, Table};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest `k` accepted by [`ratio_curves`].
pub const MAX_K: usize = 12;

fn text(v: Value) -> String {
    serde_json::to_string(&v).expect("serializable")
}

pub fn classify_text(fds: &str) -> Result<String, String> {
    let schema = infer_schema(fds).map_err(|e| e.to_string())?;
    let d = parse_fds(fds, &schema).map_err(|e| e.to_string())?;
    Ok(text(report::classify_json(&d)))
}

/// Picks the exact subset algorithm when it applies and the approximation
/// otherwise; `update` runs the update-repair pipeline.
pub fn repair_text(table: &str, fds: &str, mode: &str) -> Result<String, String> {
    let t = Table::from_csv(table).map_err(|e| e.to_string())?;
    let d: FdSet = parse_fds(fds, t.schema()).map_err(|e| e.to_string())?;
    let (payload, repaired) = match mode {
        "subset" => {
            let r = if osr_succeeds(&d).0 {
                opt_s_repair(&d, &t)
            } else {
                approx_s_repair(&d, &t)
            }
            .map_err(|e| e.to_string())?;
            let kept = t
                .subset(&r.repair.retained_ids)
                .map_err(|e| e.to_string())?;
            (report::subset_json(&d, &t, &r), kept)
        }
        "update" => {
            let r = repair_u(&d, &t).map_err(|e| e.to_string())?;
            let applied = t.apply(&r.repair).map_err(|e| e.to_string())?;
            let mut payload = report::update_json(&r);
            payload["changes_csv"] = json!(r.repair.change_log_csv(&t));
            (payload, applied)
        }
        other => {
            return Err(format!(
                "unknown mode `{other}` (expected subset or update)"
            ))
        }
    };
    Ok(text(
        json!({ "report": payload, "table_csv": repaired.to_csv() }),
    ))
}

/// `2·mlc` and `(MCI + 2)(2·MFS − 1)` for both families, `k = 1..=max_k`.
pub fn ratio_curves_text(max_k: usize) -> Result<String, String> {
    if !(1..=MAX_K).contains(&max_k) {
        return Err(format!("k must be in 1..={MAX_K}"));
    }
    let curve = |gen: fn(usize) -> Result<FdSet, fdrepair::gadgets::GadgetError>| -> Vec<Value> {
        (1..=max_k)
            .map(|k| {
                let d = gen(k).expect("k >= 1");
                json!({ "k": k, "two_mlc": fixed(two_mlc_bound(&d)), "kl": fixed(kl_ratio_bound(&d)) })
            })
            .collect()
    };
    Ok(text(
        json!({ "delta": curve(gen_delta_k), "delta_prime": curve(gen_delta_prime_k) }),
    ))
}

#[wasm_bindgen]
pub fn classify(fds: &str) -> Result<String, JsError> {
    classify_text(fds).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn repair(table: &str, fds: &str, mode: &str) -> Result<String, JsError> {
    repair_text(table, fds, mode).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ratio_curves(max_k: usize) -> Result<String, JsError> {
    ratio_curves_text(max_k).map_err(|e| JsError::new(&e))
}
