//! Scoring pipeline for the post-game questionnaire: load likert responses,
//! compute question, factor and dimension statistics, and rate overall
//! quality on a 0-100 scale.

pub mod dataset;
pub mod instrument;
pub mod score;
pub mod stats;

pub use dataset::{load_dataset, parse_dataset, DatasetError, MissingCell, SurveyDataset};
pub use instrument::{Dimension, Factor, Instrument, InstrumentError, Question};
pub use score::{
    aggregate_from_question_means, classify, quality_score, question_stats, Classification, ScoreError, ScoreReport,
    Weights, FORMULA,
};
pub use stats::SdKind;
