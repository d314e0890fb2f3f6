//! Stable on-disk formats: the counts CSV, process-matrix JSON, witness
//! JSON and sweep CSV.
//!
//! Counts files carry one row per (preparation, basis, outcome) with the
//! header `prep,basis,outcome,count`; a complete tomography has exactly 24
//! data rows. Output rows follow the canonical order (preparations z0, z1,
//! x1, y1; bases x, y, z; outcomes 0, 1) but input order is free.
//!
//! All parsers are total: malformed input yields an error naming the row
//! and field, never a panic.

use crate::bases::{BasisLabel, Setting};
use crate::campaign::SweepRecord;
use crate::linalg::CMatrix;
use crate::tomography::{ChoiMatrix, CountsTable};
use crate::witness::Witness;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("json: {0}")]
    Json(String),
    #[error("{0}")]
    Validation(String),
}

fn malformed(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Malformed { line, msg: msg.into() }
}

pub const COUNTS_HEADER: &str = "prep,basis,outcome,count";

/// Serialize a counts table in canonical row order.
pub fn counts_to_csv(counts: &CountsTable) -> String {
    let mut out = String::from(COUNTS_HEADER);
    out.push('\n');
    for (prep, setting, outcome, n) in counts.rows() {
        out.push_str(&format!("{},{},{},{}\n", prep.as_str(), setting.as_str(), outcome, n));
    }
    out
}

/// Parse a counts CSV. Rows may arrive in any order; duplicate
/// (prep, basis, outcome) rows are rejected. Completeness is not enforced
/// here — callers that need a full tomography check `is_complete`.
pub fn parse_counts_csv(text: &str) -> Result<CountsTable, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    if header.trim() != COUNTS_HEADER {
        return Err(malformed(1, format!("expected header `{COUNTS_HEADER}`, got `{}`", header.trim())));
    }
    let mut table = CountsTable::new();
    let mut seen: Vec<(BasisLabel, Setting, u8)> = Vec::new();
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(malformed(line_no, format!("expected 4 fields, got {}", fields.len())));
        }
        let prep: BasisLabel = fields[0]
            .trim()
            .parse()
            .map_err(|_| malformed(line_no, format!("bad prep label `{}`", fields[0])))?;
        if !prep.is_canonical() {
            return Err(malformed(line_no, format!("prep `{}` is not one of z0,z1,x1,y1", fields[0])));
        }
        let basis: Setting = fields[1]
            .trim()
            .parse()
            .map_err(|_| malformed(line_no, format!("bad basis `{}`", fields[1])))?;
        let outcome: u8 = match fields[2].trim() {
            "0" => 0,
            "1" => 1,
            other => return Err(malformed(line_no, format!("bad outcome `{other}` (want 0 or 1)"))),
        };
        let count: u64 = fields[3]
            .trim()
            .parse()
            .map_err(|_| malformed(line_no, format!("bad count `{}`", fields[3])))?;
        if seen.contains(&(prep, basis, outcome)) {
            return Err(malformed(
                line_no,
                format!("duplicate row ({},{},{})", prep.as_str(), basis.as_str(), outcome),
            ));
        }
        seen.push((prep, basis, outcome));
        table.accumulate(prep, basis, outcome, count);
    }
    // a setting mentioned at all must carry both outcome rows
    for &(prep, basis, outcome) in &seen {
        if !seen.contains(&(prep, basis, 1 - outcome)) {
            return Err(FormatError::Validation(format!(
                "incomplete setting ({},{}): outcome {} row missing",
                prep.as_str(),
                basis.as_str(),
                1 - outcome
            )));
        }
    }
    Ok(table)
}

/// Optional provenance attached to a stored process matrix.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct ChoiMetadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entry_uncertainty: Option<f64>,
}

/// JSON form of a reconstructed process matrix: 4x4 entries as (re, im)
/// pairs under the trace-d (d = 2) normalization.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChoiFile {
    pub dim: usize,
    pub normalization: String,
    pub matrix: Vec<Vec<(f64, f64)>>,
    #[serde(default)]
    pub metadata: ChoiMetadata,
}

impl ChoiFile {
    pub fn from_choi(choi: &ChoiMatrix, metadata: ChoiMetadata) -> Self {
        let matrix = (0..4)
            .map(|i| (0..4).map(|j| (choi.matrix[(i, j)].re, choi.matrix[(i, j)].im)).collect())
            .collect();
        ChoiFile { dim: 2, normalization: "trace-d".to_string(), matrix, metadata }
    }

    /// Validate and convert to a matrix. Rejects wrong dimensions, missing
    /// entries, non-finite values and matrices that are not Hermitian
    /// within 1e-8.
    pub fn to_choi(&self) -> Result<ChoiMatrix, FormatError> {
        if self.dim != 2 {
            return Err(FormatError::Validation(format!("dim must be 2, got {}", self.dim)));
        }
        if self.normalization != "trace-d" {
            return Err(FormatError::Validation(format!(
                "normalization must be `trace-d`, got `{}`",
                self.normalization
            )));
        }
        if self.matrix.len() != 4 || self.matrix.iter().any(|r| r.len() != 4) {
            return Err(FormatError::Validation("matrix must be 4x4".to_string()));
        }
        let mut m = CMatrix::zeros(4, 4);
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &(re, im)) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(FormatError::Validation(format!("non-finite entry at ({i},{j})")));
                }
                m[(i, j)] = crate::linalg::C64::new(re, im);
            }
        }
        if m.hermiticity_deviation() > 1e-8 {
            return Err(FormatError::Validation(format!(
                "matrix is not Hermitian (deviation {:.3e})",
                m.hermiticity_deviation()
            )));
        }
        Ok(ChoiMatrix::new(m))
    }
}

pub fn parse_choi_json(text: &str) -> Result<ChoiFile, FormatError> {
    let file: ChoiFile = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    file.to_choi()?;
    Ok(file)
}

pub fn choi_to_json(file: &ChoiFile) -> String {
    serde_json::to_string_pretty(file).expect("serializable")
}

/// Parse and validate a stored witness: unit 4-vector, 16 coefficients,
/// 12 ranges, all finite, with a consistent range constant.
pub fn parse_witness_json(text: &str) -> Result<Witness, FormatError> {
    let w: Witness = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    if w.vector.len() != 4 {
        return Err(FormatError::Validation(format!("vector must have 4 components, got {}", w.vector.len())));
    }
    if w.coefficients.len() != 16 {
        return Err(FormatError::Validation(format!("expected 16 coefficients, got {}", w.coefficients.len())));
    }
    if w.per_setting_ranges.len() != 12 {
        return Err(FormatError::Validation(format!("expected 12 setting ranges, got {}", w.per_setting_ranges.len())));
    }
    let finite = w.vector.iter().all(|(a, b)| a.is_finite() && b.is_finite())
        && w.coefficients.iter().all(|c| c.is_finite())
        && w.per_setting_ranges.iter().all(|(lo, hi)| lo.is_finite() && hi.is_finite() && lo <= hi)
        && w.range_constant.is_finite();
    if !finite {
        return Err(FormatError::Validation("non-finite witness data".to_string()));
    }
    let norm2: f64 = w.vector.iter().map(|(a, b)| a * a + b * b).sum();
    if (norm2 - 1.0).abs() > 1e-6 {
        return Err(FormatError::Validation(format!("witness vector is not normalized (|v|² = {norm2})")));
    }
    let c: f64 = w.per_setting_ranges.iter().map(|(lo, hi)| (hi - lo) * (hi - lo)).sum();
    if (c - w.range_constant).abs() > 1e-6 * c.max(1.0) {
        return Err(FormatError::Validation("range constant does not match the setting ranges".to_string()));
    }
    Ok(w)
}

pub fn witness_to_json(w: &Witness) -> String {
    serde_json::to_string_pretty(w).expect("serializable")
}

pub const SWEEP_HEADER: &str = "model,n_shots,repetitions,alpha,discard_fraction,mean_abs_t,seed";

/// Serialize sweep records as CSV, one row per record, in input order.
pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.model, r.n_shots, r.repetitions, r.alpha, r.discard_fraction, r.mean_abs_t, r.master_seed
        ));
    }
    out
}
