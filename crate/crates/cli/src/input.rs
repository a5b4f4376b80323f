use std::path::Path;

use crate::CliError;

/// Numeric rows of a CSV file, with the optional label column split off.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvData {
    pub rows: Vec<Vec<f64>>,
    pub labels: Option<Vec<usize>>,
    /// Feature columns per row (label column excluded).
    pub columns: usize,
}

/// Reads comma-separated numeric rows in file order.
///
/// Errors name the 1-based line and column of the offending cell.
pub fn load_csv(path: &Path, has_header: bool, label_column: Option<usize>) -> Result<CsvData, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Ingestion(format!("{}: {e}", path.display())))?;

    let mut rows = Vec::new();
    let mut labels = label_column.map(|_| Vec::new());
    let mut width = None;

    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Ingestion(format!("{}: {e}", path.display())))?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let cells = record.len();
        match width {
            None => width = Some(cells),
            Some(w) if w != cells => {
                return Err(CliError::Ingestion(format!(
                    "line {line}: expected {w} columns, found {cells}"
                )))
            }
            _ => {}
        }
        if let Some(lc) = label_column {
            if lc >= cells {
                return Err(CliError::Ingestion(format!(
                    "line {line}: label column {lc} out of range for {cells} columns"
                )));
            }
        }

        let mut row = Vec::with_capacity(cells);
        for (col, cell) in record.iter().enumerate() {
            if Some(col) == label_column {
                let label = cell.parse::<usize>().map_err(|_| {
                    CliError::Ingestion(format!(
                        "line {line}, column {}: label {cell:?} is not a nonnegative integer",
                        col + 1
                    ))
                })?;
                labels.as_mut().expect("label column set").push(label);
                continue;
            }
            let value = cell.parse::<f64>().map_err(|_| {
                CliError::Ingestion(format!("line {line}, column {}: {cell:?} is not a number", col + 1))
            })?;
            row.push(value);
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(CliError::Ingestion(format!("{}: no data rows", path.display())));
    }
    let columns = rows[0].len();
    Ok(CsvData { rows, labels, columns })
}
