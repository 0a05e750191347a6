//! Likert response matrices read from CSV.
//!
//! The header names question ids. Columns prefixed `demo_` carry
//! demographics and are ignored. Empty cells are missing responses.

use crate::instrument::Instrument;
use serde::Serialize;
use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;
use thiserror::Error;

/// Header prefix for ignored demographics columns.
pub const DEMOGRAPHIC_PREFIX: &str = "demo_";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("column {0:?} is not a question of the instrument")]
    UnknownColumn(String),
    #[error("column {0:?} appears twice")]
    DuplicateColumn(String),
    #[error("instrument question {0:?} has no column")]
    MissingColumn(String),
    #[error("row {row}, column {column:?}: response {value:?} is not an integer in 1..=5")]
    OutOfRangeResponse { row: usize, column: String, value: String },
    #[error("dataset has no response rows")]
    EmptyDataset,
}

/// A response left blank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MissingCell {
    /// 1-based data row, header excluded.
    pub row: usize,
    pub question: String,
}

/// Respondents by questions, columns in instrument order.
#[derive(Clone, Debug, PartialEq)]
pub struct SurveyDataset {
    pub question_ids: Vec<String>,
    pub rows: Vec<Vec<Option<u8>>>,
}

impl SurveyDataset {
    /// Builds a dataset from complete rows in instrument order.
    pub fn from_rows(instrument: &Instrument, rows: Vec<Vec<u8>>) -> Result<SurveyDataset, DatasetError> {
        let ids: Vec<String> = instrument.questions.iter().map(|q| q.id.clone()).collect();
        let mut out = Vec::with_capacity(rows.len());
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != ids.len() {
                return Err(DatasetError::Csv(format!("row {} has {} cells, expected {}", r + 1, row.len(), ids.len())));
            }
            for (c, v) in row.iter().enumerate() {
                if !(1..=5).contains(v) {
                    return Err(DatasetError::OutOfRangeResponse { row: r + 1, column: ids[c].clone(), value: v.to_string() });
                }
            }
            out.push(row.into_iter().map(Some).collect());
        }
        if out.is_empty() {
            return Err(DatasetError::EmptyDataset);
        }
        Ok(SurveyDataset { question_ids: ids, rows: out })
    }

    pub fn respondents(&self) -> usize {
        self.rows.len()
    }

    /// Non-missing responses to question column `col`.
    pub fn column(&self, col: usize) -> Vec<u8> {
        self.rows.iter().filter_map(|r| r[col]).collect()
    }

    pub fn missing(&self) -> Vec<MissingCell> {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, cell) in row.iter().enumerate() {
                if cell.is_none() {
                    out.push(MissingCell { row: r + 1, question: self.question_ids[c].clone() });
                }
            }
        }
        out
    }
}

pub fn parse_dataset(input: impl Read, instrument: &Instrument) -> Result<SurveyDataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| DatasetError::Csv(e.to_string()))?.clone();

    // Maps each CSV column to an instrument position, or None if ignored.
    let mut mapping = Vec::with_capacity(headers.len());
    let mut seen = BTreeSet::new();
    for h in headers.iter() {
        if h.starts_with(DEMOGRAPHIC_PREFIX) {
            mapping.push(None);
            continue;
        }
        let pos = instrument.position(h).ok_or_else(|| DatasetError::UnknownColumn(h.to_string()))?;
        if !seen.insert(pos) {
            return Err(DatasetError::DuplicateColumn(h.to_string()));
        }
        mapping.push(Some(pos));
    }
    if let Some(q) = instrument.questions.iter().enumerate().find(|(i, _)| !seen.contains(i)) {
        return Err(DatasetError::MissingColumn(q.1.id.clone()));
    }

    let n = instrument.questions.len();
    let mut rows = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| DatasetError::Csv(e.to_string()))?;
        let mut row = vec![None; n];
        for (cell, slot) in record.iter().zip(&mapping) {
            let Some(pos) = *slot else { continue };
            if cell.is_empty() {
                continue;
            }
            match cell.parse::<u8>() {
                Ok(v @ 1..=5) => row[pos] = Some(v),
                _ => {
                    return Err(DatasetError::OutOfRangeResponse {
                        row: r + 1,
                        column: instrument.questions[pos].id.clone(),
                        value: cell.to_string(),
                    })
                }
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    Ok(SurveyDataset { question_ids: instrument.questions.iter().map(|q| q.id.clone()).collect(), rows })
}

pub fn load_dataset(path: impl AsRef<Path>, instrument: &Instrument) -> Result<SurveyDataset, DatasetError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| DatasetError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_dataset(file, instrument)
}
