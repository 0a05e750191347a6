//! Stage file format, loader and campaign validation.
//!
//! One JSON document per stage, stored as `stage_<n>.json`. Coordinates are
//! integer cells, origin top-left, x rightward, y downward. Unknown fields
//! are rejected.

use crate::geom::Cell;
use crate::map::{campaign_monotone, Goals, Issue, StageSpec, WorldMap};
use crate::model::PickupKind;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Environment variable overriding the stage directory.
pub const STAGES_ENV: &str = "COOPVAX_STAGES";

#[derive(Debug, Error)]
pub enum MapError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed stage document: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: invalid stage: {}", issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    Validation { path: PathBuf, issues: Vec<Issue> },
    #[error("stage index {0} appears in more than one file")]
    DuplicateStageIndex(u32),
    #[error("stage {next} does not raise strain and vaccine target over stage {prev}")]
    NonMonotoneCampaign { prev: u32, next: u32 },
    #[error("no stage files found in {0}")]
    EmptyCampaign(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalsDoc {
    pub grocery: u32,
    pub treat: u32,
    pub disinfect: u32,
    pub crowd: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub width: u32,
    pub height: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PickupDoc {
    pub kind: PickupKind,
    pub x: i32,
    pub y: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VirusDoc {
    pub x: i32,
    pub y: i32,
    pub strain: u32,
}

/// Raw on-disk stage document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageDocument {
    pub stage_index: u32,
    pub strain_level: u32,
    pub vaccine_target: u32,
    pub goals: GoalsDoc,
    pub grid: GridDoc,
    pub walls: Vec<Cell>,
    pub spawns: Vec<Cell>,
    pub camps: Vec<Cell>,
    pub pickups: Vec<PickupDoc>,
    pub viruses: Vec<VirusDoc>,
    pub crowds: Vec<Cell>,
    pub civilians: Vec<Cell>,
}

impl From<StageDocument> for StageSpec {
    fn from(d: StageDocument) -> Self {
        StageSpec {
            stage_index: d.stage_index,
            strain_level: d.strain_level,
            vaccine_target: d.vaccine_target,
            goals: Goals {
                grocery: d.goals.grocery,
                treat: d.goals.treat,
                disinfect: d.goals.disinfect,
                crowd: d.goals.crowd,
            },
            map: WorldMap {
                width: d.grid.width,
                height: d.grid.height,
                walls: d.walls.into_iter().collect(),
                player_spawns: d.spawns,
                camps: d.camps,
                initial_pickups: d.pickups.into_iter().map(|p| (p.kind, Cell::new(p.x, p.y))).collect(),
                virus_spawns: d.viruses.into_iter().map(|v| (Cell::new(v.x, v.y), v.strain)).collect(),
                crowds: d.crowds,
                civilians: d.civilians,
            },
        }
    }
}

impl From<&StageSpec> for StageDocument {
    fn from(s: &StageSpec) -> Self {
        let m = &s.map;
        StageDocument {
            stage_index: s.stage_index,
            strain_level: s.strain_level,
            vaccine_target: s.vaccine_target,
            goals: GoalsDoc {
                grocery: s.goals.grocery,
                treat: s.goals.treat,
                disinfect: s.goals.disinfect,
                crowd: s.goals.crowd,
            },
            grid: GridDoc { width: m.width, height: m.height },
            walls: m.walls.iter().copied().collect(),
            spawns: m.player_spawns.clone(),
            camps: m.camps.clone(),
            pickups: m
                .initial_pickups
                .iter()
                .map(|&(kind, c)| PickupDoc { kind, x: c.x, y: c.y })
                .collect(),
            viruses: m
                .virus_spawns
                .iter()
                .map(|&(c, strain)| VirusDoc { x: c.x, y: c.y, strain })
                .collect(),
            crowds: m.crowds.clone(),
            civilians: m.civilians.clone(),
        }
    }
}

/// Parses and validates one stage document held in memory.
pub fn parse_stage(text: &str, origin: &Path) -> Result<StageSpec, MapError> {
    let doc: StageDocument = serde_json::from_str(text).map_err(|e| MapError::Parse {
        path: origin.to_path_buf(),
        message: e.to_string(),
    })?;
    let spec = StageSpec::from(doc);
    let mut issues = spec.layout_issues();
    issues.extend(spec.achievability_issues());
    if !issues.is_empty() {
        return Err(MapError::Validation { path: origin.to_path_buf(), issues });
    }
    Ok(spec)
}

pub fn load_stage(path: impl AsRef<Path>) -> Result<StageSpec, MapError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| MapError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_stage(&text, path)
}

/// Pretty-printed stage document.
pub fn to_json(spec: &StageSpec) -> String {
    serde_json::to_string_pretty(&StageDocument::from(spec)).expect("stage document serializes")
}

fn is_stage_file(path: &Path) -> bool {
    let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
        return false;
    };
    name.strip_prefix("stage_")
        .and_then(|rest| rest.strip_suffix(".json"))
        .is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()))
}

/// Loads every `stage_<n>.json` in `dir`, ordered by `stage_index`.
pub fn load_campaign(dir: impl AsRef<Path>) -> Result<Vec<StageSpec>, MapError> {
    let dir = dir.as_ref();
    let entries = std::fs::read_dir(dir).map_err(|source| MapError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| MapError::Io { path: dir.to_path_buf(), source })?;
        let path = entry.path();
        if path.is_file() && is_stage_file(&path) {
            paths.push(path);
        }
    }
    paths.sort();
    let stages = paths.iter().map(load_stage).collect::<Result<Vec<_>, _>>()?;
    if stages.is_empty() {
        return Err(MapError::EmptyCampaign(dir.to_path_buf()));
    }
    validate_campaign(stages)
}

/// Orders stages by index and enforces uniqueness and rising difficulty.
pub fn validate_campaign(mut stages: Vec<StageSpec>) -> Result<Vec<StageSpec>, MapError> {
    stages.sort_by_key(|s| s.stage_index);
    for pair in stages.windows(2) {
        if pair[0].stage_index == pair[1].stage_index {
            return Err(MapError::DuplicateStageIndex(pair[0].stage_index));
        }
    }
    campaign_monotone(&stages).map_err(|(prev, next)| MapError::NonMonotoneCampaign { prev, next })?;
    Ok(stages)
}

/// Stage directory: `$COOPVAX_STAGES` if set, else the repository's
/// `stages/` directory.
pub fn stages_dir() -> PathBuf {
    std::env::var_os(STAGES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../stages")))
}

const BUNDLED: [(&str, &str); 4] = [
    ("stage_1.json", include_str!("../../../stages/stage_1.json")),
    ("stage_2.json", include_str!("../../../stages/stage_2.json")),
    ("stage_3.json", include_str!("../../../stages/stage_3.json")),
    ("stage_4.json", include_str!("../../../stages/stage_4.json")),
];

/// The four stages shipped with the repository, compiled in.
pub fn bundled_campaign() -> Vec<StageSpec> {
    let stages = BUNDLED
        .iter()
        .map(|(name, text)| parse_stage(text, Path::new(name)).expect("bundled stage is valid"))
        .collect();
    validate_campaign(stages).expect("bundled campaign is monotone")
}
