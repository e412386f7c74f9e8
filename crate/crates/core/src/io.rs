//! Frame-field documents (CSV and JSON) and atomic file output.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveKind, CurveSpec, SampledCurve};
use crate::frames::FrameKind;
use crate::pipeline::{curvature_columns, FrameField, FrameMethod};

/// Columns shared by every frame kind.
pub const BASE_COLUMNS: [&str; 13] = [
    "s", "x", "y", "z", "e1x", "e1y", "e1z", "e2x", "e2y", "e2z", "e3x", "e3y", "e3z",
];

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("expected {expected} columns for a {kind} frame, found {got}")]
    ColumnCount { kind: &'static str, expected: usize, got: usize },
    #[error("non-finite value in row {row}, column `{column}`")]
    NonFinite { row: usize, column: String },
    #[error("arc length is not strictly increasing at row {0}")]
    NotIncreasing(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocumentFormat {
    Csv,
    /// JSON with the same header, columns and rows.
    StructuredText,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFieldHeader {
    pub curve: String,
    pub frame: FrameKind,
    pub method: FrameMethod,
    pub step: f64,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFieldDocument {
    pub header: FrameFieldHeader,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Short description of a curve spec, e.g. `helix(a=1,b=1 t=0..8.9 samples=12567)`.
pub fn describe_curve(spec: &CurveSpec) -> String {
    match spec.kind {
        CurveKind::Polyline => format!("polyline({} points)", spec.points.len()),
        kind => {
            let params: Vec<String> = spec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!(
                "{}({} t={}..{} samples={})",
                kind.name(),
                params.join(","),
                spec.domain[0],
                spec.domain[1],
                spec.sample_count
            )
        }
    }
}

impl FrameFieldDocument {
    pub fn new(header: FrameFieldHeader, curve: &SampledCurve, field: &FrameField) -> Self {
        let mut columns: Vec<String> = BASE_COLUMNS.iter().map(|c| c.to_string()).collect();
        columns.extend(field.columns.iter().map(|(name, _)| name.to_string()));
        let rows = (0..curve.len())
            .map(|i| {
                let f = &field.path.frames[i];
                let mut row = Vec::with_capacity(columns.len());
                row.push(curve.s[i]);
                for v in [curve.position[i], f.e1, f.e2, f.e3] {
                    row.extend_from_slice(v.as_slice());
                }
                row.extend(field.columns.iter().map(|(_, values)| values[i]));
                row
            })
            .collect();
        Self { header, columns, rows }
    }

    /// Checks the column layout, finiteness and monotone arc length.
    pub fn validate(&self) -> Result<(), IoError> {
        let kind = self.header.frame;
        let expected: Vec<&str> = BASE_COLUMNS.iter().chain(curvature_columns(kind)).copied().collect();
        if self.columns.len() != expected.len() {
            return Err(IoError::ColumnCount {
                kind: kind.name(),
                expected: expected.len(),
                got: self.columns.len(),
            });
        }
        if self.columns.iter().zip(&expected).any(|(a, b)| a != b) {
            return Err(IoError::Malformed(format!("column names must be {}", expected.join(","))));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() != expected.len() {
                return Err(IoError::ColumnCount {
                    kind: kind.name(),
                    expected: expected.len(),
                    got: row.len(),
                });
            }
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(IoError::NonFinite {
                    row: r,
                    column: self.columns[c].clone(),
                });
            }
            if r > 0 && !(row[0] > self.rows[r - 1][0]) {
                return Err(IoError::NotIncreasing(r));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let h = &self.header;
        let mut out = format!(
            "# curve={}; frame={}; method={}; step={}; version={}",
            h.curve,
            h.frame.name(),
            h.method.name(),
            format_real(h.step),
            h.version
        );
        if let Some(t) = &h.timestamp {
            let _ = write!(out, "; timestamp={t}");
        }
        out.push('\n');
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|v| format_real(*v)))
                .expect("in-memory write");
        }
        let body = writer.into_inner().expect("in-memory write");
        out.push_str(std::str::from_utf8(&body).expect("ascii output"));
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, IoError> {
        let (first, body) = text
            .split_once('\n')
            .ok_or_else(|| IoError::Malformed("missing header line".into()))?;
        let header = parse_header(first)?;
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| IoError::Malformed(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| IoError::Malformed(e.to_string()))?;
            let row = record
                .iter()
                .map(|v| v.trim().parse::<f64>().map_err(|_| IoError::Malformed(format!("bad number `{v}`"))))
                .collect::<Result<Vec<f64>, IoError>>()?;
            rows.push(row);
        }
        let doc = Self { header, columns, rows };
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        let doc: Self = serde_json::from_str(text).map_err(|e| IoError::Malformed(e.to_string()))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn render(&self, format: DocumentFormat) -> String {
        match format {
            DocumentFormat::Csv => self.to_csv(),
            DocumentFormat::StructuredText => self.to_json(),
        }
    }

    pub fn parse(text: &str, format: DocumentFormat) -> Result<Self, IoError> {
        match format {
            DocumentFormat::Csv => Self::from_csv(text),
            DocumentFormat::StructuredText => Self::from_json(text),
        }
    }

    /// Values of one column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|n| n == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

/// 17 significant digits, enough to read back the same double.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_header(line: &str) -> Result<FrameFieldHeader, IoError> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| IoError::Malformed("header line must start with '#'".into()))?;
    let mut fields = std::collections::BTreeMap::new();
    for part in body.split(';') {
        let (k, v) = part
            .trim()
            .split_once('=')
            .ok_or_else(|| IoError::Malformed(format!("bad header field `{}`", part.trim())))?;
        fields.insert(k.trim(), v.trim());
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| IoError::Malformed(format!("header is missing `{k}`")))
    };
    Ok(FrameFieldHeader {
        curve: get("curve")?.to_string(),
        frame: get("frame")?.parse().map_err(IoError::Malformed)?,
        method: get("method")?.parse().map_err(IoError::Malformed)?,
        step: get("step")?
            .parse()
            .map_err(|_| IoError::Malformed("bad step".into()))?,
        version: get("version")?.to_string(),
        timestamp: fields.get("timestamp").map(|t| t.to_string()),
    })
}

/// Writes `contents` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| IoError::Io(e.error))?;
    Ok(())
}
