use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Factor {
    /// Attitudinal/behavioural change.
    #[serde(rename = "ABC")]
    Abc,
    /// Learning outcome.
    #[serde(rename = "LO")]
    Lo,
    /// Aesthetics.
    #[serde(rename = "A")]
    A,
    /// Accessibility.
    #[serde(rename = "Acc")]
    Acc,
    /// Learnability.
    #[serde(rename = "L")]
    L,
    /// Operability.
    #[serde(rename = "O")]
    O,
    /// Confidence.
    #[serde(rename = "C")]
    C,
    /// Challenge.
    #[serde(rename = "Ch")]
    Ch,
    /// Fun.
    #[serde(rename = "F")]
    F,
    /// Focused attention.
    #[serde(rename = "FA")]
    Fa,
    /// Relevance.
    #[serde(rename = "R")]
    R,
    /// Satisfaction.
    #[serde(rename = "S")]
    S,
    /// Social interaction.
    #[serde(rename = "SI")]
    Si,
}

impl Factor {
    pub const ALL: [Factor; 13] = [
        Factor::Abc,
        Factor::Lo,
        Factor::A,
        Factor::Acc,
        Factor::L,
        Factor::O,
        Factor::C,
        Factor::Ch,
        Factor::F,
        Factor::Fa,
        Factor::R,
        Factor::S,
        Factor::Si,
    ];

    pub fn dimension(self) -> Dimension {
        match self {
            Factor::Lo | Factor::Abc => Dimension::Pedagogy,
            Factor::Fa | Factor::F | Factor::Ch | Factor::Si | Factor::C | Factor::R | Factor::S => {
                Dimension::PlayerExperience
            }
            Factor::L | Factor::O | Factor::A | Factor::Acc => Dimension::Usability,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Factor::Abc => "ABC",
            Factor::Lo => "LO",
            Factor::A => "A",
            Factor::Acc => "Acc",
            Factor::L => "L",
            Factor::O => "O",
            Factor::C => "C",
            Factor::Ch => "Ch",
            Factor::F => "F",
            Factor::Fa => "FA",
            Factor::R => "R",
            Factor::S => "S",
            Factor::Si => "SI",
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Pedagogy,
    PlayerExperience,
    Usability,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::Pedagogy, Dimension::PlayerExperience, Dimension::Usability];
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Pedagogy => "pedagogy",
            Dimension::PlayerExperience => "player_experience",
            Dimension::Usability => "usability",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Question {
    pub id: String,
    pub factor: Factor,
    pub dimension: Dimension,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scale {
    pub min: u8,
    pub max: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instrument {
    pub name: String,
    pub scale: Scale,
    pub questions: Vec<Question>,
}

#[derive(Debug, Error)]
pub enum InstrumentError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed instrument: {0}")]
    Parse(String),
    #[error("instrument has no questions")]
    Empty,
    #[error("question id {0:?} appears twice")]
    DuplicateId(String),
    #[error("question {id}: factor {factor} belongs to {expected}, not {found}")]
    WrongDimension { id: String, factor: Factor, expected: Dimension, found: Dimension },
    #[error("scale must be 1..5, got {min}..{max}")]
    Scale { min: u8, max: u8 },
}

const BUNDLED: &str = include_str!("../instrument.json");

impl Instrument {
    /// The 32-question instrument shipped with the crate.
    pub fn bundled() -> Instrument {
        Instrument::from_json(BUNDLED).expect("bundled instrument is valid")
    }

    pub fn from_json(text: &str) -> Result<Instrument, InstrumentError> {
        let inst: Instrument = serde_json::from_str(text).map_err(|e| InstrumentError::Parse(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Instrument, InstrumentError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| InstrumentError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Instrument::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), InstrumentError> {
        if self.scale.min != 1 || self.scale.max != 5 {
            return Err(InstrumentError::Scale { min: self.scale.min, max: self.scale.max });
        }
        if self.questions.is_empty() {
            return Err(InstrumentError::Empty);
        }
        let mut seen = BTreeSet::new();
        for q in &self.questions {
            if !seen.insert(q.id.as_str()) {
                return Err(InstrumentError::DuplicateId(q.id.clone()));
            }
            if q.factor.dimension() != q.dimension {
                return Err(InstrumentError::WrongDimension {
                    id: q.id.clone(),
                    factor: q.factor,
                    expected: q.factor.dimension(),
                    found: q.dimension,
                });
            }
        }
        Ok(())
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.questions.iter().position(|q| q.id == id)
    }
}
