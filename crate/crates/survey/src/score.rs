use crate::dataset::{MissingCell, SurveyDataset};
use crate::instrument::{Dimension, Factor, Instrument};
use crate::stats::{mean_sd, SdKind};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Printed in every report.
pub const FORMULA: &str =
    "quality_score = 100 * (alpha_px * (mean_px - 1) / 4 + alpha_us * (mean_us - 1) / 4) / (alpha_px + alpha_us)";

/// Scores above this are excellent.
pub const EXCELLENT_ABOVE: f64 = 65.0;
/// Scores below this are poor.
pub const POOR_BELOW: f64 = 42.5;

/// Reliability weights of the two scored dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub alpha_px: f64,
    pub alpha_us: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { alpha_px: 1.0, alpha_us: 1.0 }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("weights must be positive and finite, got alpha_px={0} alpha_us={1}")]
    NonPositiveWeight(f64, f64),
    #[error("question {0:?} has no responses")]
    NoResponses(String),
    #[error("no questions for dimension {0}")]
    MissingDimension(Dimension),
    #[error("unknown question {0:?}")]
    UnknownQuestion(String),
    #[error("expected {expected} question means, got {got}")]
    MeanCount { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Excellent,
    Regular,
    Poor,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Excellent => "excellent",
            Classification::Regular => "regular",
            Classification::Poor => "poor",
        })
    }
}

pub fn classify(score: f64) -> Classification {
    if score > EXCELLENT_ABOVE {
        Classification::Excellent
    } else if score < POOR_BELOW {
        Classification::Poor
    } else {
        Classification::Regular
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuestionStat {
    pub id: String,
    pub factor: Factor,
    pub dimension: Dimension,
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

/// Pooled over the factor's questions and respondents.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorStat {
    pub factor: Factor,
    pub dimension: Dimension,
    pub questions: usize,
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionStat {
    pub dimension: Dimension,
    pub questions: usize,
    pub n: usize,
    pub mean: f64,
    /// `(mean - 1) / 4` on a 0-100 scale.
    pub rescaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreReport {
    pub formula: String,
    pub weights: Weights,
    pub sd: SdKind,
    pub respondents: usize,
    pub questions: Vec<QuestionStat>,
    pub factors: Vec<FactorStat>,
    pub dimensions: Vec<DimensionStat>,
    pub quality_score: f64,
    pub classification: Classification,
    pub missing: Vec<MissingCell>,
}

impl ScoreReport {
    pub fn factor(&self, f: Factor) -> Option<&FactorStat> {
        self.factors.iter().find(|s| s.factor == f)
    }

    pub fn dimension(&self, d: Dimension) -> Option<&DimensionStat> {
        self.dimensions.iter().find(|s| s.dimension == d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Mean and SD of one question's non-missing responses.
pub fn question_stats(dataset: &SurveyDataset, question: &str, sd: SdKind) -> Result<(f64, f64), ScoreError> {
    let col = dataset
        .question_ids
        .iter()
        .position(|q| q == question)
        .ok_or_else(|| ScoreError::UnknownQuestion(question.to_string()))?;
    let values: Vec<f64> = dataset.column(col).into_iter().map(f64::from).collect();
    mean_sd(&values, sd).ok_or_else(|| ScoreError::NoResponses(question.to_string()))
}

/// Full report for a response matrix.
pub fn quality_score(
    dataset: &SurveyDataset,
    instrument: &Instrument,
    weights: Weights,
    sd: SdKind,
) -> Result<ScoreReport, ScoreError> {
    let columns: Vec<Vec<f64>> = instrument
        .questions
        .iter()
        .map(|q| {
            let col = dataset.question_ids.iter().position(|id| *id == q.id);
            col.map(|c| dataset.column(c).into_iter().map(f64::from).collect()).unwrap_or_default()
        })
        .collect();
    aggregate(instrument, columns, dataset.respondents(), dataset.missing(), weights, sd)
}

/// Report built from one mean per question, as if a single respondent had
/// answered each question with its mean.
pub fn aggregate_from_question_means(
    instrument: &Instrument,
    means: &[f64],
    weights: Weights,
) -> Result<ScoreReport, ScoreError> {
    if means.len() != instrument.questions.len() {
        return Err(ScoreError::MeanCount { expected: instrument.questions.len(), got: means.len() });
    }
    let columns = means.iter().map(|m| vec![*m]).collect();
    aggregate(instrument, columns, 1, Vec::new(), weights, SdKind::Population)
}

fn aggregate(
    instrument: &Instrument,
    columns: Vec<Vec<f64>>,
    respondents: usize,
    missing: Vec<MissingCell>,
    weights: Weights,
    sd: SdKind,
) -> Result<ScoreReport, ScoreError> {
    let Weights { alpha_px, alpha_us } = weights;
    if !(alpha_px.is_finite() && alpha_us.is_finite() && alpha_px > 0.0 && alpha_us > 0.0) {
        return Err(ScoreError::NonPositiveWeight(alpha_px, alpha_us));
    }

    let mut questions = Vec::with_capacity(columns.len());
    for (q, col) in instrument.questions.iter().zip(&columns) {
        let (mean, qsd) = mean_sd(col, sd).ok_or_else(|| ScoreError::NoResponses(q.id.clone()))?;
        questions.push(QuestionStat { id: q.id.clone(), factor: q.factor, dimension: q.dimension, n: col.len(), mean, sd: qsd });
    }

    let pooled = |keep: &dyn Fn(usize) -> bool| -> (usize, Vec<f64>) {
        let picked: Vec<usize> = (0..columns.len()).filter(|i| keep(*i)).collect();
        let values = picked.iter().flat_map(|i| columns[*i].iter().copied()).collect();
        (picked.len(), values)
    };

    let mut factors = Vec::new();
    for f in Factor::ALL {
        let (count, values) = pooled(&|i| instrument.questions[i].factor == f);
        if let Some((mean, fsd)) = mean_sd(&values, sd) {
            factors.push(FactorStat { factor: f, dimension: f.dimension(), questions: count, n: values.len(), mean, sd: fsd });
        }
    }

    let mut dimensions = Vec::new();
    let mut shifted_by_dim = Vec::new();
    for d in Dimension::ALL {
        let (count, values) = pooled(&|i| instrument.questions[i].dimension == d);
        if values.is_empty() {
            if d != Dimension::Pedagogy {
                return Err(ScoreError::MissingDimension(d));
            }
            continue;
        }
        let n = values.len() as f64;
        let sum: f64 = values.iter().sum();
        // (sum - n) / n is exact for integer responses, which keeps
        // threshold datasets on the right side of the boundary.
        let shifted = (sum - n) / n;
        shifted_by_dim.push((d, shifted));
        dimensions.push(DimensionStat {
            dimension: d,
            questions: count,
            n: values.len(),
            mean: sum / n,
            rescaled: 100.0 * shifted / 4.0,
        });
    }

    let shifted = |d: Dimension| shifted_by_dim.iter().find(|(x, _)| *x == d).map(|(_, v)| *v).expect("scored dimension present");
    let px = shifted(Dimension::PlayerExperience);
    let us = shifted(Dimension::Usability);
    let score = (100.0 * (alpha_px * px + alpha_us * us) / (4.0 * (alpha_px + alpha_us))).clamp(0.0, 100.0);

    Ok(ScoreReport {
        formula: FORMULA.to_string(),
        weights,
        sd,
        respondents,
        questions,
        factors,
        dimensions,
        quality_score: score,
        classification: classify(score),
        missing,
    })
}
