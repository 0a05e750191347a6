//! Stage layout and per-stage goal targets.

use crate::geom::Cell;
use crate::model::{PickupKind, Role};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Highest stage index a stage file may declare.
pub const MAX_STAGE_INDEX: u32 = 4;
/// Minimum number of player spawn cells on every map.
pub const MIN_SPAWNS: usize = 4;

/// Per-role personal goal targets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goals {
    pub grocery: u32,
    pub treat: u32,
    pub disinfect: u32,
    pub crowd: u32,
}

impl Goals {
    pub fn for_role(&self, role: Role) -> u32 {
        match role {
            Role::Citizen => self.grocery,
            Role::Doctor => self.treat,
            Role::SanitationWorker => self.disinfect,
            Role::LawEnforcer => self.crowd,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldMap {
    pub width: u32,
    pub height: u32,
    pub walls: BTreeSet<Cell>,
    pub player_spawns: Vec<Cell>,
    pub camps: Vec<Cell>,
    pub initial_pickups: Vec<(PickupKind, Cell)>,
    pub virus_spawns: Vec<(Cell, u32)>,
    pub crowds: Vec<Cell>,
    pub civilians: Vec<Cell>,
}

impl WorldMap {
    /// Empty open field with no placements.
    pub fn open(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            walls: BTreeSet::new(),
            player_spawns: Vec::new(),
            camps: Vec::new(),
            initial_pickups: Vec::new(),
            virus_spawns: Vec::new(),
            crowds: Vec::new(),
            civilians: Vec::new(),
        }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.x >= 0 && cell.y >= 0 && (cell.x as u32) < self.width && (cell.y as u32) < self.height
    }

    pub fn is_wall(&self, cell: Cell) -> bool {
        self.walls.contains(&cell)
    }

    /// Inside the grid and not a wall.
    pub fn is_open(&self, cell: Cell) -> bool {
        self.contains(cell) && !self.is_wall(cell)
    }

    pub fn pickup_count(&self, kind: PickupKind) -> u32 {
        self.initial_pickups.iter().filter(|(k, _)| *k == kind).count() as u32
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageSpec {
    pub stage_index: u32,
    pub map: WorldMap,
    pub strain_level: u32,
    pub vaccine_target: u32,
    pub goals: Goals,
}

/// A single validation finding, located by field path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub field: String,
    pub message: String,
}

impl Issue {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl StageSpec {
    /// Structural checks: ranges, grid bounds, wall overlap, spawn/camp counts.
    pub fn layout_issues(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        let map = &self.map;
        if !(1..=MAX_STAGE_INDEX).contains(&self.stage_index) {
            issues.push(Issue::new(
                "stage_index",
                format!("must be in 1..={MAX_STAGE_INDEX}, got {}", self.stage_index),
            ));
        }
        if self.strain_level == 0 {
            issues.push(Issue::new("strain_level", "must be positive"));
        }
        if self.vaccine_target == 0 {
            issues.push(Issue::new("vaccine_target", "must be positive"));
        }
        if map.width == 0 || map.height == 0 {
            issues.push(Issue::new("grid", "width and height must be positive"));
        }
        for (i, &c) in map.walls.iter().enumerate() {
            if !map.contains(c) {
                issues.push(Issue::new(format!("walls[{i}]"), format!("cell {c} is outside the grid")));
            }
        }
        let mut check = |field: String, c: Cell| {
            if !map.contains(c) {
                issues.push(Issue::new(field, format!("cell {c} is outside the grid")));
            } else if map.is_wall(c) {
                issues.push(Issue::new(field, format!("cell {c} is a wall")));
            }
        };
        for (i, &c) in map.player_spawns.iter().enumerate() {
            check(format!("spawns[{i}]"), c);
        }
        for (i, &c) in map.camps.iter().enumerate() {
            check(format!("camps[{i}]"), c);
        }
        for (i, &(_, c)) in map.initial_pickups.iter().enumerate() {
            check(format!("pickups[{i}]"), c);
        }
        for (i, &(c, _)) in map.virus_spawns.iter().enumerate() {
            check(format!("viruses[{i}]"), c);
        }
        for (i, &c) in map.crowds.iter().enumerate() {
            check(format!("crowds[{i}]"), c);
        }
        for (i, &c) in map.civilians.iter().enumerate() {
            check(format!("civilians[{i}]"), c);
        }
        for (i, &(_, strain)) in map.virus_spawns.iter().enumerate() {
            if strain != self.strain_level {
                issues.push(Issue::new(
                    format!("viruses[{i}].strain"),
                    format!("must equal the stage strain_level {}, got {strain}", self.strain_level),
                ));
            }
        }
        let distinct: BTreeSet<Cell> = map.player_spawns.iter().copied().collect();
        if distinct.len() < MIN_SPAWNS {
            issues.push(Issue::new(
                "spawns",
                format!("need at least {MIN_SPAWNS} distinct spawn cells, got {}", distinct.len()),
            ));
        }
        if map.camps.is_empty() {
            issues.push(Issue::new("camps", "need at least one healthcare camp"));
        }
        issues
    }

    /// Goal targets that exceed what the map places.
    pub fn achievability_issues(&self) -> Vec<Issue> {
        let map = &self.map;
        let supply = [
            ("vaccine_target", self.vaccine_target, map.pickup_count(PickupKind::VaccinePart)),
            ("goals.grocery", self.goals.grocery, map.pickup_count(PickupKind::Grocery)),
            ("goals.treat", self.goals.treat, map.civilians.len() as u32),
            ("goals.disinfect", self.goals.disinfect, map.virus_spawns.len() as u32),
            ("goals.crowd", self.goals.crowd, map.crowds.len() as u32),
        ];
        supply
            .into_iter()
            .filter(|&(_, target, available)| target > available)
            .map(|(field, target, available)| {
                Issue::new(field, format!("target {target} exceeds the {available} placed on the map"))
            })
            .collect()
    }
}

/// Checks that a stage sequence is ordered with strictly rising strain and
/// vaccine targets. Returns the offending pair on failure.
pub fn campaign_monotone(stages: &[StageSpec]) -> Result<(), (u32, u32)> {
    for pair in stages.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.strain_level <= a.strain_level || b.vaccine_target <= a.vaccine_target {
            return Err((a.stage_index, b.stage_index));
        }
    }
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::fixtures::small_stage;
    use super::*;

    #[test]
    fn fixture_is_valid() {
        let s = small_stage(1);
        assert!(s.layout_issues().is_empty(), "{:?}", s.layout_issues());
        assert!(s.achievability_issues().is_empty());
    }

    #[test]
    fn pickup_on_wall_is_reported_with_cell() {
        let mut s = small_stage(1);
        s.map.walls.insert(Cell::new(6, 5));
        let issues = s.layout_issues();
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].field, "pickups[0]");
        assert!(issues[0].message.contains("(6, 5)"));
    }

    #[test]
    fn out_of_grid_and_counts() {
        let mut s = small_stage(1);
        s.map.crowds.push(Cell::new(12, 0));
        s.map.player_spawns.truncate(3);
        s.map.camps.clear();
        let fields: Vec<String> = s.layout_issues().into_iter().map(|i| i.field).collect();
        assert!(fields.contains(&"crowds[1]".to_string()));
        assert!(fields.contains(&"spawns".to_string()));
        assert!(fields.contains(&"camps".to_string()));
    }

    #[test]
    fn unachievable_goal_detected() {
        let mut s = small_stage(1);
        s.goals.grocery = 2;
        s.vaccine_target = 3;
        let issues = s.achievability_issues();
        assert_eq!(issues.len(), 2);
        assert_eq!(issues[0].field, "vaccine_target");
        assert_eq!(issues[1].field, "goals.grocery");
    }

    #[test]
    fn monotone_campaign_check() {
        let mut a = small_stage(1);
        let mut b = small_stage(2);
        a.vaccine_target = 1;
        b.vaccine_target = 2;
        assert!(campaign_monotone(&[a.clone(), b.clone()]).is_ok());
        b.vaccine_target = 1;
        assert_eq!(campaign_monotone(&[a, b]), Err((1, 2)));
    }
}
