//! Plain-text rendering of a JSON report for `--pretty`.

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => v.to_string(),
        other => other.to_string(),
    }
}

fn is_table(a: &[Value]) -> bool {
    !a.is_empty() && a.iter().all(|r| r.as_object().is_some_and(|o| o.values().all(|v| !v.is_object())))
}

fn table(rows: &[Value], indent: &str, out: &mut String) {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.as_object().unwrap().keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows.iter().map(|r| cols.iter().map(|c| r.get(c).map_or(String::new(), scalar)).collect()).collect();
    let widths: Vec<usize> = cols.iter().enumerate().map(|(i, c)| cells.iter().map(|r| r[i].len()).max().unwrap_or(0).max(c.len())).collect();
    let line = |vals: Vec<&str>| vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string();
    out.push_str(&format!("{indent}{}\n", line(cols.iter().map(|s| s.as_str()).collect())));
    for r in &cells {
        out.push_str(&format!("{indent}{}\n", line(r.iter().map(|s| s.as_str()).collect())));
    }
}

fn walk(v: &Value, indent: &str, out: &mut String) {
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        walk(x, &format!("{indent}  "), out);
                    }
                    Value::Array(a) if is_table(a) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        table(a, &format!("{indent}  "), out);
                    }
                    Value::Array(a) if a.iter().any(|e| e.is_object()) => {
                        out.push_str(&format!("{indent}{k}:\n"));
                        for e in a {
                            out.push_str(&format!("{indent}  -\n"));
                            walk(e, &format!("{indent}    "), out);
                        }
                    }
                    _ => out.push_str(&format!("{indent}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(a) if is_table(a) => table(a, indent, out),
        other => out.push_str(&format!("{indent}{}\n", scalar(other))),
    }
}

pub fn pretty(v: &Value) -> String {
    let mut out = String::new();
    walk(v, "", &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn renders_tables() {
        let v = json!({ "rows": [{ "ell": 17, "status": "Split" }, { "ell": 13, "status": "NotSplit" }], "index": 2 });
        let s = pretty(&v);
        assert!(s.contains("index: 2"));
        assert!(s.contains("ell  status"));
        assert!(s.contains("13   NotSplit"));
    }
}
