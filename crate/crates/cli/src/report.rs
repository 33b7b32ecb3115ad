use serde::Serialize;
use serde_json::Value;

/// One CLI invocation's worth of output: header metadata plus either scalar
/// results or tabular curve data.
#[derive(Debug, Serialize)]
pub struct Report {
    pub id: String,
    pub version: String,
    /// Wall-clock stamp; excluded from determinism comparisons.
    pub timestamp: String,
    pub inputs: Value,
    pub results: Value,
    /// Column names when the report carries a table.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rows: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

fn now() -> String {
    // Seconds since the epoch; good enough for a stamp without extra deps.
    let d = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("{}", d.as_secs())
}

impl Report {
    pub fn scalar(id: &str, inputs: Value, results: Value) -> Self {
        Report {
            id: id.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: now(),
            inputs,
            results,
            columns: None,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn table(id: &str, inputs: Value, columns: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        Report {
            id: id.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: now(),
            inputs,
            results: Value::Null,
            columns: Some(columns),
            rows,
            notes: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(cols) = &self.columns {
            out.push_str(&cols.join(","));
            out.push('\n');
            for row in &self.rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.12}")).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        } else {
            // Flatten scalar results into key,value lines.
            out.push_str("key,value\n");
            if let Value::Object(map) = &self.results {
                for (k, v) in map {
                    out.push_str(&format!("{k},{v}\n"));
                }
            }
        }
        out
    }
}
