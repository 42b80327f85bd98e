//! Canonical JSON emission and report records: sorted keys, fixed float
//! formatting (17 significant digits), sha256 input digests. Reruns of the
//! same problem are byte-identical apart from the timing fields.

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Serialize with sorted keys and canonical float formatting.
pub fn canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_canonical(v, &mut out);
    out
}

fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                let f = n.as_f64().unwrap_or(f64::NAN);
                out.push_str(&format_float(f));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"));
        }
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (k, key) in keys.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push(':');
                write_canonical(&map[*key], out);
            }
            out.push('}');
        }
    }
}

/// 17 significant digits in scientific notation; stable across runs.
pub fn format_float(f: f64) -> String {
    if f.is_nan() {
        "\"nan\"".into()
    } else if f.is_infinite() {
        if f > 0.0 { "\"+inf\"".into() } else { "\"-inf\"".into() }
    } else {
        format!("{f:.16e}")
    }
}

pub fn input_digest(problem: &Value) -> String {
    let canon = canonical_string(problem);
    let mut hasher = Sha256::new();
    hasher.update(canon.as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

pub fn report(problem: &Value, outcome: Value, wall_ms: f64) -> Value {
    serde_json::json!({
        "input_digest": input_digest(problem),
        "outcome": outcome,
        "timings": { "wall_ms": wall_ms },
        "tool_version": env!("CARGO_PKG_VERSION"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorted_keys_and_floats() {
        let v = json!({"b": 1.5, "a": [true, null, "x"], "c": {"z": 2, "y": 0.1}});
        let s = canonical_string(&v);
        assert_eq!(
            s,
            "{\"a\":[true,null,\"x\"],\"b\":1.5000000000000000e0,\"c\":{\"y\":1.0000000000000001e-1,\"z\":2}}"
        );
    }

    #[test]
    fn digest_stable_under_key_order() {
        let a = json!({"x": 1, "y": 2});
        let b = json!({"y": 2, "x": 1});
        assert_eq!(input_digest(&a), input_digest(&b));
    }
}
