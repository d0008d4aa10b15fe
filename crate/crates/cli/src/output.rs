//! Deterministic CSV and JSON emission. Floats render at 17 significant
//! digits so identical runs produce byte-identical output.

use serde_json::{json, Value};
use weyl_lab::Sample;

pub fn f17(x: f64) -> String {
    format!("{:.16e}", x)
}

fn opt17(x: Option<f64>) -> String {
    x.map(f17).unwrap_or_default()
}

pub const CSV_HEADER: &str = "tau,count,leading,remainder,normalized";

pub fn samples_csv(samples: &[Sample]) -> String {
    let mut out = String::with_capacity(64 * (samples.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            f17(s.tau),
            s.count,
            opt17(s.leading),
            opt17(s.remainder),
            opt17(s.normalized_remainder)
        ));
    }
    out
}

pub fn count_value(count: u128) -> Value {
    match u64::try_from(count) {
        Ok(v) => json!(v),
        Err(_) => json!(count.to_string()),
    }
}

pub fn sample_row(s: &Sample) -> Value {
    json!({
        "tau": s.tau,
        "count": count_value(s.count),
        "leading": s.leading,
        "remainder": s.remainder,
        "normalized": s.normalized_remainder,
    })
}

pub fn samples_json(meta: Value, samples: &[Sample]) -> String {
    let rows: Vec<Value> = samples.iter().map(sample_row).collect();
    let doc = json!({ "meta": meta, "rows": rows });
    let mut text = serde_json::to_string_pretty(&doc).expect("json serialization cannot fail");
    text.push('\n');
    text
}
