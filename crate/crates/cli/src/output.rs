//! Rendering: plain tables, CSV and JSON-lines, all byte-deterministic for
//! a fixed run configuration.

use confrep_core::matrix::RatMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Human-readable table.
    Plain,
    /// Comma-separated values.
    Csv,
    /// One JSON object per line.
    Json,
}

/// The run header: every invocation echoes its own configuration so output
/// is self-describing and reproducible. The basis convention note covers the
/// fact that representation matrices depend on this tool's fixed monomial
/// ordering.
pub fn header(format: Format, subcommand: &str, params: &[(&str, String)]) -> String {
    match format {
        Format::Plain | Format::Csv => {
            let mut line = format!("# confrep {subcommand}");
            for (k, v) in params {
                line.push_str(&format!(" {k}={v}"));
            }
            line.push('\n');
            line
        }
        Format::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("subcommand".into(), subcommand.into());
            for (k, v) in params {
                obj.insert((*k).into(), (*v).clone().into());
            }
            let mut line =
                serde_json::to_string(&serde_json::Value::Object(obj)).expect("serializable");
            line.push('\n');
            line
        }
    }
}

pub fn render_dims_table(format: Format, table: &[Vec<usize>]) -> String {
    let mut out = String::new();
    let n_max = table.first().map_or(0, |row| row.len());
    match format {
        Format::Plain => {
            out.push_str("i\\n");
            for n in 0..n_max {
                out.push_str(&format!("\t{n}"));
            }
            out.push('\n');
            for (i, row) in table.iter().enumerate() {
                out.push_str(&format!("{i}"));
                for d in row {
                    out.push_str(&format!("\t{d}"));
                }
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push('i');
            for n in 0..n_max {
                out.push_str(&format!(",n{n}"));
            }
            out.push('\n');
            for (i, row) in table.iter().enumerate() {
                out.push_str(&format!("{i}"));
                for d in row {
                    out.push_str(&format!(",{d}"));
                }
                out.push('\n');
            }
        }
        Format::Json => {
            for (i, row) in table.iter().enumerate() {
                for (n, d) in row.iter().enumerate() {
                    out.push_str(
                        &serde_json::json!({"i": i, "n": n, "dim": d}).to_string(),
                    );
                    out.push('\n');
                }
            }
        }
    }
    out
}

/// Matrix entries as exact `p/q` strings, row-major.
pub fn matrix_rows(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_string()).collect())
        .collect()
}

pub fn render_matrix(format: Format, m: &RatMatrix) -> String {
    let rows = matrix_rows(m);
    let mut out = String::new();
    match format {
        Format::Plain => {
            for row in rows {
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        Format::Csv => {
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        Format::Json => {
            for (i, row) in rows.iter().enumerate() {
                out.push_str(&serde_json::json!({"row": i, "entries": row}).to_string());
                out.push('\n');
            }
        }
    }
    out
}
