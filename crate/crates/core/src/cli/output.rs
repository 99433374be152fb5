use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::Format;

const FORMAT_TAG: &str = "gaussclone v1";

/// SHA-256 of the canonical JSON form of a resolved configuration.
///
/// `serde_json` maps keep keys sorted, so equal configs hash equally.
pub fn config_hash(config: &Value) -> String {
    let canonical = serde_json::to_string(config).expect("JSON values always serialize");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Column-oriented numeric output of the figure commands.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn render(&self, config: &Value, format: Format) -> String {
        let hash = config_hash(config);
        match format {
            Format::Csv => {
                let mut out = format!("# {FORMAT_TAG}; config-hash={hash}\n");
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|&v| number(v)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .cloned()
                            .zip(row.iter().map(|&v| json!(v)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "format": FORMAT_TAG,
                    "config_hash": hash,
                    "config": config,
                    "columns": self.columns,
                    "rows": rows,
                });
                pretty(&doc)
            }
        }
    }
}

/// Structured output of the `clone` and `optimize-ancilla` commands.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub result: Value,
}

impl Report {
    /// JSON document, or `key,value` lines of the flattened result for CSV.
    pub fn render(&self, config: &Value, format: Format) -> String {
        let hash = config_hash(config);
        match format {
            Format::Json => pretty(&json!({
                "format": FORMAT_TAG,
                "config_hash": hash,
                "config": config,
                "result": self.result,
            })),
            Format::Csv => {
                let mut out = format!("# {FORMAT_TAG}; config-hash={hash}\nkey,value\n");
                let mut flat = Vec::new();
                flatten("", &self.result, &mut flat);
                for (k, v) in flat {
                    out.push_str(&format!("{k},{v}\n"));
                }
                out
            }
        }
    }
}

/// Shortest round-trip form, with an exponent for very large or small values.
fn number(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v}")
    } else {
        json!(v).to_string()
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_key_order() {
        let a = json!({"eta": 1.0, "grid": [0.0, 0.5]});
        let b: Value = serde_json::from_str(r#"{"grid":[0.0,0.5],"eta":1.0}"#).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_ne!(config_hash(&a), config_hash(&json!({"eta": 0.5})));
    }

    #[test]
    fn csv_layout() {
        let t = Table {
            columns: vec!["r".into(), "f".into()],
            rows: vec![vec![0.0, 2.0 / 3.0]],
        };
        let csv = t.render(&json!({}), Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# gaussclone v1; config-hash="));
        assert_eq!(lines[1], "r,f");
        assert_eq!(lines[2], "0,0.6666666666666666");
    }

    #[test]
    fn report_flattens_for_csv() {
        let r = Report {
            result: json!({"a": {"b": [1.5, 2.0]}, "s": "x"}),
        };
        let csv = r.render(&json!({}), Format::Csv);
        assert!(csv.contains("a.b.0,1.5\n"));
        assert!(csv.contains("s,x\n"));
    }
}
