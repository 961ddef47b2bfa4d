//! Comparison of emitted files against stored golden copies.
//!
//! JSON is compared structurally with the timestamp field removed; CSV is
//! compared line by line.

use std::path::Path;

use serde_json::Value;

use crate::error::{LabError, Result};
use crate::report::TIMESTAMP_FIELD;

/// Removes every timestamp field, at any depth.
pub fn strip_timestamps(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove(TIMESTAMP_FIELD);
            map.values_mut().for_each(strip_timestamps);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timestamps),
        _ => {}
    }
}

/// Paths at which `actual` differs from `expected`, ignoring timestamps.
pub fn diff_json(expected: &Value, actual: &Value) -> Vec<String> {
    let (mut e, mut a) = (expected.clone(), actual.clone());
    strip_timestamps(&mut e);
    strip_timestamps(&mut a);
    let mut out = Vec::new();
    walk("$", &e, &a, &mut out);
    out
}

fn walk(path: &str, e: &Value, a: &Value, out: &mut Vec<String>) {
    match (e, a) {
        (Value::Object(em), Value::Object(am)) => {
            for (k, ev) in em {
                match am.get(k) {
                    Some(av) => walk(&format!("{path}.{k}"), ev, av, out),
                    None => out.push(format!("{path}.{k}: missing")),
                }
            }
            for k in am.keys().filter(|k| !em.contains_key(*k)) {
                out.push(format!("{path}.{k}: unexpected"));
            }
        }
        (Value::Array(ev), Value::Array(av)) => {
            if ev.len() != av.len() {
                out.push(format!("{path}: length {} != {}", ev.len(), av.len()));
            }
            for (i, (x, y)) in ev.iter().zip(av).enumerate() {
                walk(&format!("{path}[{i}]"), x, y, out);
            }
        }
        _ if e != a => out.push(format!("{path}: expected {e}, got {a}")),
        _ => {}
    }
}

pub fn diff_csv(expected: &str, actual: &str) -> Vec<String> {
    let (e, a): (Vec<&str>, Vec<&str>) = (expected.lines().collect(), actual.lines().collect());
    let mut out: Vec<String> = e
        .iter()
        .zip(&a)
        .enumerate()
        .filter(|(_, (x, y))| x != y)
        .map(|(i, (x, y))| format!("line {}: expected {x:?}, got {y:?}", i + 1))
        .collect();
    if e.len() != a.len() {
        out.push(format!("line count {} != {}", e.len(), a.len()));
    }
    out
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))
}

/// Compares one file, choosing JSON or CSV by extension.
pub fn diff_files(expected: &Path, actual: &Path) -> Result<Vec<String>> {
    let (e, a) = (read(expected)?, read(actual)?);
    let is_json = expected.extension().is_some_and(|x| x == "json");
    if is_json {
        let (ev, av): (Value, Value) = (serde_json::from_str(&e)?, serde_json::from_str(&a)?);
        Ok(diff_json(&ev, &av))
    } else {
        Ok(diff_csv(&e, &a))
    }
}

/// Compares every listed file of `actual_dir` against `golden_dir`; each
/// difference is prefixed with the file name.
pub fn diff_dirs(golden_dir: &Path, actual_dir: &Path, files: &[&str]) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for name in files {
        for d in diff_files(&golden_dir.join(name), &actual_dir.join(name))? {
            out.push(format!("{name}: {d}"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn timestamps_ignored() {
        let a = json!({"header": {"generated_at_unix": 1, "tool": "x"}, "v": [1, 2]});
        let b = json!({"header": {"generated_at_unix": 2, "tool": "x"}, "v": [1, 2]});
        assert!(diff_json(&a, &b).is_empty());
    }

    #[test]
    fn json_differences_located() {
        let a = json!({"v": [1.0, 2.0], "k": "a"});
        let b = json!({"v": [1.0, 2.5], "extra": true});
        let d = diff_json(&a, &b);
        assert_eq!(d.len(), 3, "{d:?}");
        assert!(d.iter().any(|s| s.starts_with("$.v[1]")));
        assert!(d.iter().any(|s| s == "$.k: missing"));
        assert!(d.iter().any(|s| s == "$.extra: unexpected"));
    }

    #[test]
    fn csv_differences_located() {
        let d = diff_csv("a,b\n1,2\n", "a,b\n1,3\n4,5\n");
        assert_eq!(d.len(), 2);
        assert!(d[0].starts_with("line 2"));
        assert!(diff_csv("x\n", "x\n").is_empty());
    }
}
