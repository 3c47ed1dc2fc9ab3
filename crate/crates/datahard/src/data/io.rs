use crate::data::{Dataset, Features};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::path::Path;

/// Knobs for [`load_dataset`].
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Label column by header name, or by 0-based index if the name does
    /// not appear in the header. Defaults to the last column.
    pub label_column: Option<String>,
    /// Raw label value that should map to 1. Defaults to the rarer value.
    pub positive_label: Option<String>,
}

/// Load a CSV file (header row, numeric features, one label column) or an
/// ARFF file (`@relation`/`@attribute`/`@data`) into a [`Dataset`].
///
/// The two distinct raw label values are mapped to `{0, 1}`: the rarer one
/// becomes 1 unless `positive_label` says otherwise (on an exact tie the
/// lexicographically later value becomes 1). Any row with a non-numeric or
/// missing feature value is rejected with its row number.
pub fn load_dataset(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());

    let looks_arff = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('%'))
        .is_some_and(|l| l.starts_with('@'));
    let table = if looks_arff {
        parse_arff(&text)?
    } else {
        parse_csv(&text)?
    };
    assemble(table, options, id)
}

/// Header plus raw string cells, still unsplit into features/labels.
struct RawTable {
    header: Vec<String>,
    /// (1-based source row number, cells)
    rows: Vec<(usize, Vec<String>)>,
}

fn parse_csv(text: &str) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::BadRow {
            row: 1,
            reason: e.to_string(),
        })?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 2; // 1-based, after the header
        let record = record.map_err(|e| Error::BadRow {
            row,
            reason: e.to_string(),
        })?;
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        if record.len() != header.len() {
            return Err(Error::BadRow {
                row,
                reason: format!("{} cells, header has {}", record.len(), header.len()),
            });
        }
        rows.push((row, record.iter().map(str::to_owned).collect()));
    }
    Ok(RawTable { header, rows })
}

fn parse_arff(text: &str) -> Result<RawTable> {
    let mut header = Vec::new();
    let mut rows = Vec::new();
    let mut in_data = false;
    for (k, raw) in text.lines().enumerate() {
        let row = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                continue;
            }
            if let Some(rest) = line
                .strip_prefix("@attribute")
                .or_else(|| line.strip_prefix("@ATTRIBUTE"))
                .or_else(|| line.strip_prefix("@Attribute"))
            {
                let rest = rest.trim();
                // Name is either quoted or the first whitespace-delimited token.
                let name = if let Some(stripped) = rest.strip_prefix('\'') {
                    stripped
                        .split('\'')
                        .next()
                        .unwrap_or_default()
                        .to_owned()
                } else {
                    rest.split_whitespace().next().unwrap_or_default().to_owned()
                };
                if name.is_empty() {
                    return Err(Error::BadRow {
                        row,
                        reason: "attribute line without a name".into(),
                    });
                }
                header.push(name);
                continue;
            }
            if lower.starts_with("@data") {
                in_data = true;
                continue;
            }
            return Err(Error::BadRow {
                row,
                reason: format!("unrecognized declaration {line:?}"),
            });
        }
        let cells: Vec<String> = line
            .split(',')
            .map(|c| c.trim().trim_matches('\'').to_owned())
            .collect();
        if cells.len() != header.len() {
            return Err(Error::BadRow {
                row,
                reason: format!("{} cells, {} attributes declared", cells.len(), header.len()),
            });
        }
        rows.push((row, cells));
    }
    if header.is_empty() {
        return Err(Error::BadRow {
            row: 1,
            reason: "no @attribute declarations".into(),
        });
    }
    Ok(RawTable { header, rows })
}

fn assemble(table: RawTable, options: &LoadOptions, id: String) -> Result<Dataset> {
    if table.rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let label_idx = match &options.label_column {
        None => table.header.len().saturating_sub(1),
        Some(name) => match table.header.iter().position(|h| h == name) {
            Some(idx) => idx,
            None => name
                .parse::<usize>()
                .ok()
                .filter(|&idx| idx < table.header.len())
                .ok_or_else(|| Error::LabelColumnNotFound(name.clone()))?,
        },
    };

    let feature_names: Vec<String> = table
        .header
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != label_idx)
        .map(|(_, h)| h.clone())
        .collect();

    let mut raw_labels = Vec::with_capacity(table.rows.len());
    let mut rows = Vec::with_capacity(table.rows.len());
    for (row_no, cells) in &table.rows {
        let mut row = Vec::with_capacity(feature_names.len());
        for (j, cell) in cells.iter().enumerate() {
            if j == label_idx {
                continue;
            }
            let parsed = if cell.is_empty() || cell == "?" {
                None
            } else {
                cell.parse::<f64>().ok().filter(|v| v.is_finite())
            };
            match parsed {
                Some(v) => row.push(v),
                None => {
                    return Err(Error::NonNumericCell {
                        row: *row_no,
                        column: table.header[j].clone(),
                        value: cell.clone(),
                    })
                }
            }
        }
        raw_labels.push(cells[label_idx].clone());
        rows.push(row);
    }

    // Count the distinct raw label values (BTreeMap keeps them ordered).
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for l in &raw_labels {
        *counts.entry(l.as_str()).or_default() += 1;
    }
    if counts.len() != 2 {
        return Err(Error::LabelCardinality {
            count: counts.len(),
            values: counts.keys().map(|s| s.to_string()).collect(),
        });
    }
    let positive: &str = match &options.positive_label {
        Some(value) => {
            if !counts.contains_key(value.as_str()) {
                return Err(Error::PositiveLabelMissing(value.clone()));
            }
            value.as_str()
        }
        None => {
            // Rarer value → 1; on a tie the lexicographically later value.
            let pairs: Vec<(&str, usize)> = counts.iter().map(|(&v, &n)| (v, n)).collect();
            if pairs[0].1 < pairs[1].1 {
                pairs[0].0
            } else {
                pairs[1].0
            }
        }
    };
    let labels: Vec<u8> = raw_labels.iter().map(|l| u8::from(l == positive)).collect();

    Dataset::new(Features::from_rows(&rows)?, labels, feature_names, id)
}
