use serde_json::Value;

use crate::config::OutputFormat;
use crate::report::RunReport;

/// Column order for threshold tables.
pub const TABLE_COLUMNS: [&str; 4] = ["theta", "k", "ell_or_L", "h_k"];

pub fn render(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report.to_json() + "\n",
        OutputFormat::Csv => csv_payload(&report.results),
        OutputFormat::Text => text(report),
    }
}

/// Numbers and strings exactly as JSON would print them, without quotes.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}

fn write_rows(header: &[String], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

fn object_rows(items: &[Value]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header: Vec<String> = Vec::new();
    let flat: Vec<Vec<(String, String)>> = items
        .iter()
        .map(|it| {
            let mut f = Vec::new();
            flatten("", it, &mut f);
            f
        })
        .collect();
    for (k, _) in flat.iter().flatten() {
        if !header.contains(k) {
            header.push(k.clone());
        }
    }
    let rows = flat
        .iter()
        .map(|f| header.iter().map(|h| f.iter().find(|(k, _)| k == h).map(|(_, v)| v.clone()).unwrap_or_default()).collect())
        .collect();
    (header, rows)
}

/// Threshold tables use the fixed columns; other row lists use their own
/// keys; anything else becomes `field,value` pairs.
pub fn csv_payload(results: &Value) -> String {
    if let Some(Value::Array(table)) = results.get("table") {
        let header: Vec<String> = TABLE_COLUMNS.iter().map(|s| s.to_string()).collect();
        let rows: Vec<Vec<String>> = table
            .iter()
            .map(|r| TABLE_COLUMNS.iter().map(|c| r.get(*c).map(cell).unwrap_or_default()).collect())
            .collect();
        return write_rows(&header, &rows);
    }
    for key in ["rows", "checks"] {
        if let Some(Value::Array(items)) = results.get(key) {
            let (header, rows) = object_rows(items);
            return write_rows(&header, &rows);
        }
    }
    let mut pairs = Vec::new();
    flatten("", results, &mut pairs);
    let rows: Vec<Vec<String>> = pairs.into_iter().map(|(k, v)| vec![k, v]).collect();
    write_rows(&["field".to_string(), "value".to_string()], &rows)
}

fn text(report: &RunReport) -> String {
    let mut s = format!("primetuples {} ({})\n", report.version, report.config.command_name());
    if let Some(e) = &report.error {
        s += &format!("error: {e}\n");
    }
    if let Some(Value::Array(table)) = report.results.get("table") {
        s += &format!("{:>8} {:>6} {:>9} {:>7}\n", "theta", "k", "ell_or_L", "h_k");
        for r in table {
            let c = |k: &str| r.get(k).map(cell).filter(|v| !v.is_empty()).unwrap_or_else(|| "-".into());
            s += &format!("{:>8} {:>6} {:>9} {:>7}\n", c("theta"), c("k"), c("ell_or_L"), c("h_k"));
        }
    } else if let Some(Value::Array(checks)) = report.results.get("checks") {
        for c in checks {
            let pass = c.get("pass").and_then(Value::as_bool).unwrap_or(false);
            let name = c.get("name").map(cell).unwrap_or_default();
            let actual = c.get("actual").map(cell).unwrap_or_default();
            s += &format!("{} {name}: {actual}\n", if pass { "PASS" } else { "FAIL" });
        }
    } else {
        let mut pairs = Vec::new();
        flatten("", &report.results, &mut pairs);
        for (k, v) in pairs {
            s += &format!("{k}: {v}\n");
        }
    }
    for w in &report.warnings {
        s += &format!("warning: {w}\n");
    }
    if let Some(t) = report.wall_time_secs {
        s += &format!("wall time: {t:.3} s\n");
    }
    s
}
