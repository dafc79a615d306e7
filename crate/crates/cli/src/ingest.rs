//! CSV ingestion: target selection by name or index, optional feature
//! subset, one-hot encoding of categorical columns, and NA-row dropping.

use regimb::synth::Dataset;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

/// How a dataset CSV is interpreted.
#[derive(Clone, Debug)]
pub struct CsvDatasetSpec {
    pub target: String,
    pub feature_columns: Option<Vec<String>>,
    pub categorical_columns: Vec<String>,
    pub has_header: bool,
}

/// Data-shaped failure; maps to exit code 3.
#[derive(Debug)]
pub struct IngestError(pub String);

impl fmt::Display for IngestError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for IngestError {}

const NA_TOKENS: [&str; 6] = ["", "NA", "N/A", "NaN", "nan", "?"];

fn is_na(cell: &str) -> bool {
    NA_TOKENS.contains(&cell.trim())
}

/// Resolves a column reference (name or 0-based index) to an index.
fn resolve_column(refname: &str, headers: &[String]) -> Result<usize, IngestError> {
    if let Ok(idx) = refname.parse::<usize>() {
        if idx < headers.len() {
            return Ok(idx);
        }
        return Err(IngestError(format!(
            "column index {idx} out of range ({} columns)",
            headers.len()
        )));
    }
    headers.iter().position(|h| h == refname).ok_or_else(|| {
        IngestError(format!("column '{refname}' not found; available: {}", headers.join(", ")))
    })
}

/// Loads a dataset: numeric features (categoricals one-hot encoded in
/// place, category values sorted), numeric target, rows with NA tokens
/// dropped. Rows that fail to parse otherwise abort with their 1-based
/// row number. Requires at least 10 rows after dropping.
pub fn load_dataset(path: &Path, spec: &CsvDatasetSpec) -> Result<Dataset, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(spec.has_header)
        .flexible(false)
        .from_path(path)
        .map_err(|e| IngestError(format!("cannot read {}: {e}", path.display())))?;

    let headers: Vec<String> = if spec.has_header {
        reader
            .headers()
            .map_err(|e| IngestError(format!("bad header row: {e}")))?
            .iter()
            .map(str::to_string)
            .collect()
    } else {
        // Peek the width from the first record by reading all rows below;
        // headers become positional names.
        Vec::new()
    };

    let mut rows: Vec<csv::StringRecord> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| IngestError(format!("malformed CSV at data row {}: {e}", i + 1)))?;
        rows.push(record);
    }
    if rows.is_empty() {
        return Err(IngestError("CSV contains no data rows".into()));
    }
    let headers = if spec.has_header {
        headers
    } else {
        (0..rows[0].len()).map(|i| i.to_string()).collect()
    };

    let target_idx = resolve_column(&spec.target, &headers)?;
    let feature_idx: Vec<usize> = match &spec.feature_columns {
        Some(cols) => cols
            .iter()
            .map(|c| resolve_column(c, &headers))
            .collect::<Result<Vec<_>, _>>()?,
        None => (0..headers.len()).filter(|i| *i != target_idx).collect(),
    };
    if feature_idx.contains(&target_idx) {
        return Err(IngestError("target column cannot also be a feature".into()));
    }
    let categorical_idx: Vec<usize> = spec
        .categorical_columns
        .iter()
        .map(|c| resolve_column(c, &headers))
        .collect::<Result<Vec<_>, _>>()?;

    // First pass: drop NA rows, collect category values.
    let mut kept: Vec<&csv::StringRecord> = Vec::new();
    let mut categories: Vec<BTreeSet<String>> = vec![BTreeSet::new(); headers.len()];
    'rows: for record in &rows {
        for &idx in feature_idx.iter().chain(std::iter::once(&target_idx)) {
            if is_na(record.get(idx).unwrap_or("")) {
                continue 'rows;
            }
        }
        for &c in &categorical_idx {
            if let Some(cell) = record.get(c) {
                categories[c].insert(cell.trim().to_string());
            }
        }
        kept.push(record);
    }

    // Second pass: parse numerics and expand one-hot columns.
    let mut features = Vec::with_capacity(kept.len());
    let mut targets = Vec::with_capacity(kept.len());
    for record in &kept {
        let row_no = record.position().map_or(0, |p| p.line());
        let mut row: Vec<f64> = Vec::new();
        for &idx in &feature_idx {
            let cell = record.get(idx).unwrap_or("").trim();
            if categorical_idx.contains(&idx) {
                for value in &categories[idx] {
                    row.push(f64::from(cell == value));
                }
            } else {
                let v: f64 = cell.parse().map_err(|_| {
                    IngestError(format!(
                        "row {row_no}: non-numeric value '{cell}' in column '{}'",
                        headers[idx]
                    ))
                })?;
                row.push(v);
            }
        }
        let cell = record.get(target_idx).unwrap_or("").trim();
        let target: f64 = cell.parse().map_err(|_| {
            IngestError(format!(
                "row {row_no}: non-numeric target '{cell}' in column '{}'",
                headers[target_idx]
            ))
        })?;
        if !target.is_finite() {
            return Err(IngestError(format!("row {row_no}: non-finite target {target}")));
        }
        features.push(row);
        targets.push(target);
    }

    if targets.len() < 10 {
        return Err(IngestError(format!(
            "only {} usable rows after dropping NA values; need at least 10",
            targets.len()
        )));
    }
    Dataset::new(features, targets).map_err(|e| IngestError(e.to_string()))
}

/// Loads a prediction column: one value per line, optional single header
/// line. Must match the number of ingested dataset rows.
pub fn load_predictions(path: &Path, expected_len: usize) -> Result<Vec<f64>, IngestError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IngestError(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => return Err(IngestError(format!("line {}: non-finite prediction {v}", i + 1))),
            Err(_) if i == 0 => {} // header line
            Err(_) => {
                return Err(IngestError(format!("line {}: non-numeric prediction '{line}'", i + 1)))
            }
        }
    }
    if values.len() != expected_len {
        return Err(IngestError(format!(
            "{} predictions for {} dataset rows",
            values.len(),
            expected_len
        )));
    }
    Ok(values)
}
