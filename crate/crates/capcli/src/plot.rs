//! gnuplot scripts for sweep CSVs: `e_up` solid, `e_down` dashed, one pair
//! of curves per file.

use std::fmt::Write;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::sweep::CSV_COLUMNS;

/// Which capacity columns of a sweep CSV carry data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CsvSummary {
    pub rows: usize,
    pub has_up: bool,
    pub has_down: bool,
}

pub fn check_sweep_csv(text: &str, path: &str) -> Result<CsvSummary> {
    let bad = |reason: String| CliError::MalformedCsv {
        path: path.to_string(),
        reason,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(bad(format!("header must be {}", CSV_COLUMNS.join(","))));
    }
    let mut summary = CsvSummary {
        rows: 0,
        has_up: false,
        has_down: false,
    };
    for (n, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| -> Result<Option<f64>> {
            let cell = rec.get(i).unwrap_or("");
            if cell.is_empty() {
                return Ok(None);
            }
            cell.parse::<f64>().map(Some).map_err(|_| {
                bad(format!(
                    "row {}: '{cell}' in {} is not a number",
                    n + 1,
                    CSV_COLUMNS[i]
                ))
            })
        };
        if num(0)?.is_none() {
            return Err(bad(format!("row {}: empty sweep_value", n + 1)));
        }
        summary.has_up |= num(1)?.is_some();
        summary.has_down |= num(2)?.is_some();
        summary.rows += 1;
    }
    if summary.rows == 0 {
        return Err(bad("no data rows".to_string()));
    }
    Ok(summary)
}

fn quoted(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// Each entry is a CSV path and the text already read from it.
pub fn plot_script(files: &[(String, String)]) -> Result<String> {
    if files.is_empty() {
        return Err(CliError::validation("plot-script needs at least one CSV"));
    }
    let mut curves = Vec::new();
    for (i, (path, text)) in files.iter().enumerate() {
        let summary = check_sweep_csv(text, path)?;
        let name = Path::new(path)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.clone());
        let color = i + 1;
        if summary.has_up {
            curves.push(format!(
                "{} using 1:2 with lines dt 1 lc {color} title {}",
                quoted(path),
                quoted(&format!("{name} E_up"))
            ));
        }
        if summary.has_down {
            curves.push(format!(
                "{} using 1:3 with lines dt 2 lc {color} title {}",
                quoted(path),
                quoted(&format!("{name} E_down"))
            ));
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set key outside right");
    let _ = writeln!(s, "set xlabel 'sweep value (rad)'");
    let _ = writeln!(s, "set ylabel 'ebits'");
    let _ = writeln!(s, "set yrange [0:*]");
    let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    Ok(s)
}
