//! CSV ingestion and the canonical CSV serialization of a dataset.
//!
//! Dialect: comma separated, one header row, MISSING written as an empty
//! field (`NA` and any configured token are accepted on input).

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::dataset::{Code, OrdinalDataset, OrdinalScale};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestConfig {
    /// Header name of the response column.
    pub response: String,
    /// Tokens (after trimming) that denote MISSING. The empty string always does.
    pub missing_tokens: Vec<String>,
    /// Declared scales by column name, response included.
    pub scales: BTreeMap<String, OrdinalScale>,
    /// Scale for columns without an entry in `scales`; `None` infers `1..max observed`.
    pub default_scale: Option<OrdinalScale>,
    /// Columns dropped before parsing (identifiers, free text).
    pub ignore_columns: Vec<String>,
}

impl IngestConfig {
    pub fn new(response: impl Into<String>) -> Self {
        IngestConfig {
            response: response.into(),
            missing_tokens: vec!["NA".into()],
            scales: BTreeMap::new(),
            default_scale: None,
            ignore_columns: Vec::new(),
        }
    }

    pub fn with_scale(mut self, column: impl Into<String>, scale: OrdinalScale) -> Self {
        self.scales.insert(column.into(), scale);
        self
    }

    pub fn with_default_scale(mut self, scale: OrdinalScale) -> Self {
        self.default_scale = Some(scale);
        self
    }

    /// Declares every scale of `ds`, so re-ingesting its CSV reproduces it exactly.
    pub fn matching(ds: &OrdinalDataset) -> Self {
        let mut cfg = IngestConfig::new(ds.response_name());
        for (name, scale) in ds.attribute_names().iter().zip(ds.attribute_scales()) {
            cfg.scales.insert(name.clone(), scale.clone());
        }
        cfg.scales
            .insert(ds.response_name().to_string(), ds.response_scale().clone());
        cfg
    }

    fn is_missing(&self, token: &str) -> bool {
        token.is_empty() || self.missing_tokens.iter().any(|m| m == token)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    pub rows_read: usize,
    pub rows_rejected: usize,
    /// Columns whose scale was inferred, with the inferred `max_code`.
    pub inferred_scales: BTreeMap<String, Code>,
    pub errors: Vec<String>,
}

fn parse_code(token: &str, row: usize, column: &str) -> Result<Code> {
    let parsed: i64 = token.parse().map_err(|_| Error::Parse {
        row,
        column: column.to_string(),
        message: format!("`{token}` is not an integer code"),
    })?;
    if !(1..=Code::MAX as i64).contains(&parsed) {
        return Err(Error::Parse {
            row,
            column: column.to_string(),
            message: format!("code {parsed} is not a positive ordinal code"),
        });
    }
    Ok(parsed as Code)
}

/// Reads a dataset from CSV bytes. Rows without a response are dropped and
/// counted in the report; any unparsable or out-of-scale cell is fatal.
pub fn load_csv<R: Read>(source: R, config: &IngestConfig) -> Result<(OrdinalDataset, ValidationReport)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let response_col = header
        .iter()
        .position(|h| *h == config.response)
        .ok_or_else(|| Error::MissingResponseColumn(config.response.clone()))?;
    let attr_cols: Vec<usize> = (0..header.len())
        .filter(|&j| j != response_col && !config.ignore_columns.contains(&header[j]))
        .collect();
    if attr_cols.is_empty() {
        return Err(Error::InvalidDataset("no attribute columns besides the response".into()));
    }

    let mut report = ValidationReport {
        schema_version: SCHEMA_VERSION,
        ..Default::default()
    };
    let mut rows = Vec::new();
    let mut response = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record?;
        let line = idx + 1;
        report.rows_read += 1;
        let field = |j: usize| record.get(j).unwrap_or("");
        let resp_token = field(response_col);
        if config.is_missing(resp_token) {
            report.rows_rejected += 1;
            report
                .errors
                .push(format!("row {line}: missing response, row rejected"));
            continue;
        }
        response.push(parse_code(resp_token, line, &header[response_col])?);
        let mut row = Vec::with_capacity(attr_cols.len());
        for &j in &attr_cols {
            let token = field(j);
            row.push(if config.is_missing(token) {
                None
            } else {
                Some(parse_code(token, line, &header[j])?)
            });
        }
        rows.push(row);
    }
    if rows.len() < 2 {
        return Err(Error::TooFewRows(rows.len()));
    }

    let mut resolve = |name: &str, observed: Code| -> Result<OrdinalScale> {
        if let Some(scale) = config.scales.get(name).or(config.default_scale.as_ref()) {
            return Ok(scale.clone());
        }
        let max = observed.max(2);
        report.inferred_scales.insert(name.to_string(), max);
        OrdinalScale::new(max)
    };
    let mut scales = Vec::with_capacity(attr_cols.len());
    for (k, &j) in attr_cols.iter().enumerate() {
        let observed = rows.iter().filter_map(|r| r[k]).max().unwrap_or(1);
        scales.push(resolve(&header[j], observed)?);
    }
    let response_scale = resolve(
        &header[response_col],
        response.iter().copied().max().unwrap_or(1),
    )?;

    let ds = OrdinalDataset::from_rows(
        attr_cols.iter().map(|&j| header[j].clone()).collect(),
        scales,
        header[response_col].clone(),
        response_scale,
        rows,
        response,
    )?;
    Ok((ds, report))
}

/// Writes the canonical CSV: attribute columns in declaration order, then the response.
pub fn write_csv<W: Write>(ds: &OrdinalDataset, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    let mut header: Vec<&str> = ds.attribute_names().iter().map(String::as_str).collect();
    header.push(ds.response_name());
    writer.write_record(&header)?;
    for i in 0..ds.n_rows() {
        let mut record: Vec<String> = ds
            .row(i)
            .iter()
            .map(|v| v.map(|c| c.to_string()).unwrap_or_default())
            .collect();
        record.push(ds.response(i).to_string());
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn to_csv_string(ds: &OrdinalDataset) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(ds, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv writer emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn loads_small_file_with_declared_scales() {
        let text = "a,b,y\n1,7,3\n4,4,5\n7,1,2\n";
        let cfg = IngestConfig::new("y").with_default_scale(OrdinalScale::likert7());
        let (ds, report) = load_csv(text.as_bytes(), &cfg).unwrap();
        assert_eq!(ds.n_rows(), 3);
        assert_eq!(ds.attribute_names(), ["a", "b"]);
        assert!(ds.attribute_scales().iter().all(|s| s.max_code() == 7));
        assert_eq!(ds.response_scale().max_code(), 7);
        assert_eq!(report.rows_read, 3);
        assert_eq!(report.rows_rejected, 0);
        assert!(report.inferred_scales.is_empty());
    }

    #[test]
    fn blank_response_rejects_row() {
        let text = "a,y\n1,3\n2,\n3,4\n";
        let (ds, report) = load_csv(text.as_bytes(), &IngestConfig::new("y")).unwrap();
        assert_eq!(ds.n_rows(), 2);
        assert_eq!(report.rows_rejected, 1);
        assert_eq!(report.rows_read, 3);
    }

    #[test]
    fn out_of_scale_names_row_and_column() {
        let text = "a,b,y\n1,2,3\n4,8,5\n";
        let cfg = IngestConfig::new("y").with_default_scale(OrdinalScale::likert7());
        match load_csv(text.as_bytes(), &cfg) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "b");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_integer_cell_is_fatal() {
        let text = "a,y\n1,3\n2.5,4\n";
        let err = load_csv(text.as_bytes(), &IngestConfig::new("y")).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");
        assert!(err.to_string().contains("`a`"), "{err}");
    }

    #[test]
    fn missing_markers_and_inference() {
        let text = "a,b,y\nNA,2,1\n3,,2\n5,4,2\n";
        let (ds, report) = load_csv(text.as_bytes(), &IngestConfig::new("y")).unwrap();
        assert_eq!(ds.value(0, 0), None);
        assert_eq!(ds.value(1, 1), None);
        assert_eq!(ds.scale(0).max_code(), 5);
        assert_eq!(report.inferred_scales["a"], 5);
        assert_eq!(report.inferred_scales["y"], 2);
    }

    #[test]
    fn too_few_rows_and_missing_response_column() {
        let err = load_csv("a,y\n1,\n2,3\n".as_bytes(), &IngestConfig::new("y")).unwrap_err();
        assert!(matches!(err, Error::TooFewRows(1)));
        let err = load_csv("a,y\n1,2\n2,3\n".as_bytes(), &IngestConfig::new("z")).unwrap_err();
        assert!(matches!(err, Error::MissingResponseColumn(ref c) if c == "z"));
    }

    fn arb_dataset() -> impl Strategy<Value = OrdinalDataset> {
        (2usize..20, 1usize..4).prop_flat_map(|(n, a)| {
            (
                proptest::collection::vec(proptest::collection::vec(proptest::option::weighted(0.8, 1u8..=7), a), n),
                proptest::collection::vec(1u8..=5, n),
            )
                .prop_filter_map("response needs two classes", move |(rows, mut resp)| {
                    if resp.iter().all(|&r| r == resp[0]) {
                        resp[0] = if resp[0] == 1 { 2 } else { 1 };
                    }
                    OrdinalDataset::from_rows(
                        (0..a).map(|j| format!("q{j}")).collect(),
                        vec![OrdinalScale::likert7(); a],
                        "y",
                        OrdinalScale::new(5).unwrap(),
                        rows,
                        resp,
                    )
                    .ok()
                })
        })
    }

    proptest! {
        #[test]
        fn csv_roundtrip(ds in arb_dataset()) {
            let text = to_csv_string(&ds).unwrap();
            let (back, report) = load_csv(text.as_bytes(), &IngestConfig::matching(&ds)).unwrap();
            prop_assert_eq!(report.rows_rejected, 0);
            prop_assert_eq!(back, ds);
        }
    }
}
