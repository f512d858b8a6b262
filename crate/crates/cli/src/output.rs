use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Flattens a JSON value into `path value` rows; leaves print exactly as in the JSON form.
pub fn table_rows(v: &Value) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    rows
}

fn flatten(path: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(&p, x, rows);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (k, x) in items.iter().enumerate() {
                flatten(&format!("{path}[{k}]"), x, rows);
            }
        }
        Value::String(s) => rows.push((path.to_string(), s.clone())),
        other => rows.push((path.to_string(), other.to_string())),
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("JSON values serialize"),
        Format::Table => {
            let rows = table_rows(v);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().map(|(k, x)| format!("{k:<width$}  {x}")).collect::<Vec<_>>().join("\n")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flattens_nested_values() {
        let v = json!({"a": {"b": [1, "x"]}, "c": null, "d": []});
        let rows = table_rows(&v);
        assert_eq!(
            rows,
            vec![
                ("a.b[0]".into(), "1".into()),
                ("a.b[1]".into(), "x".into()),
                ("c".into(), "null".into()),
                ("d".into(), "[]".into()),
            ]
        );
    }
}
