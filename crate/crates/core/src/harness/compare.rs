use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use super::commands::SweepReport;
use crate::diagnostics::DiagnosticsReport;

/// Flattens to `path -> scalar`. Arrays of objects with a `name` field are
/// keyed by that name, so verdicts are reported by inequality.
fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                let key = x
                    .get("name")
                    .and_then(Value::as_str)
                    .map(str::to_string)
                    .unwrap_or_else(|| i.to_string());
                flatten(&format!("{prefix}.{key}"), x, out);
            }
        }
        _ => {
            out.insert(prefix.to_string(), v.clone());
        }
    }
}

fn diff<T: Serialize>(stored: &T, fresh: &T) -> Vec<String> {
    let mut a = BTreeMap::new();
    let mut b = BTreeMap::new();
    flatten("", &serde_json::to_value(stored).expect("serializes"), &mut a);
    flatten("", &serde_json::to_value(fresh).expect("serializes"), &mut b);
    let mut keys: Vec<&String> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|k| a.get(*k) != b.get(*k))
        .map(|k| {
            let show = |m: &BTreeMap<String, Value>| m.get(k).map(|v| v.to_string()).unwrap_or_else(|| "absent".into());
            format!("{k}: stored {} recomputed {}", show(&a), show(&b))
        })
        .collect()
}

/// Fields that differ between a stored and a recomputed report.
pub fn diff_reports(stored: &DiagnosticsReport, fresh: &DiagnosticsReport) -> Vec<String> {
    diff(stored, fresh)
}

pub fn diff_sweep(stored: &SweepReport, fresh: &SweepReport) -> Vec<String> {
    diff(stored, fresh)
}
