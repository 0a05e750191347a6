use coopvax_core::{Cell, EntityId, GameState, Phase, PickupKind, PlayerId, Point, Role};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerView {
    pub player_name: String,
    pub role: Role,
    pub position: Point,
    pub health: f64,
    pub mask_meter: f64,
    pub shielded: bool,
    pub shield_ticks: u32,
    pub sanitizer_count: u32,
    pub ammo: u32,
    pub items_collected: u32,
    pub items_target: u32,
    pub score: u32,
    pub connected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirusView {
    pub id: EntityId,
    pub position: Point,
    pub strain_level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PickupView {
    pub id: EntityId,
    pub kind: PickupKind,
    pub cell: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrowdView {
    pub cell: Cell,
    pub dispersed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CivilianView {
    pub cell: Cell,
    pub treated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeView {
    pub from: String,
    pub to: String,
    pub points: u32,
    pub expires_at_tick: u64,
}

/// Static layout of the current stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridView {
    pub width: u32,
    pub height: u32,
    pub walls: Vec<Cell>,
    pub camps: Vec<Cell>,
}

/// What one client sees of the game. Players appear in roster order; every
/// field except `hint` is identical across recipients for the same tick.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClientView {
    pub tick: u64,
    pub stage_index: u32,
    pub stage_count: u32,
    pub phase: Phase,
    pub grid: GridView,
    pub players: Vec<PlayerView>,
    pub viruses: Vec<VirusView>,
    pub pickups: Vec<PickupView>,
    pub crowds: Vec<CrowdView>,
    pub civilians: Vec<CivilianView>,
    pub team_vaccines: u32,
    pub vaccine_target: u32,
    pub pending_trade: Option<TradeView>,
    /// Unit vector toward the recipient's nearest vaccine part.
    pub hint: Option<[f64; 2]>,
}

impl ClientView {
    /// Projects `state` for `recipient`. Unknown or absent recipients get no
    /// hint.
    pub fn project(state: &GameState, recipient: Option<&PlayerId>) -> ClientView {
        let stage = state.stage();
        let goals = stage.goals;
        let players = state
            .players()
            .iter()
            .map(|p| PlayerView {
                player_name: p.id.0.clone(),
                role: p.role,
                position: p.position,
                health: p.health,
                mask_meter: p.mask_meter,
                shielded: p.shielded(),
                shield_ticks: p.shield_ticks,
                sanitizer_count: p.sanitizer_count,
                ammo: p.ammo,
                items_collected: p.items_collected,
                items_target: goals.for_role(p.role),
                score: p.score,
                connected: p.connected,
            })
            .collect();
        let hint = recipient
            .and_then(|id| state.vaccine_direction_hint(id).ok().flatten())
            .map(|(x, y)| [x, y]);
        ClientView {
            tick: state.tick_count(),
            stage_index: stage.stage_index,
            stage_count: state.stages().len() as u32,
            phase: state.phase(),
            grid: GridView {
                width: stage.map.width,
                height: stage.map.height,
                walls: stage.map.walls.iter().copied().collect(),
                camps: stage.map.camps.clone(),
            },
            players,
            viruses: state
                .viruses()
                .iter()
                .filter(|v| v.alive)
                .map(|v| VirusView { id: v.id, position: v.position, strain_level: v.strain_level })
                .collect(),
            pickups: state
                .remaining_pickups()
                .iter()
                .map(|p| PickupView { id: p.id, kind: p.kind, cell: p.cell })
                .collect(),
            crowds: state.crowds().iter().map(|c| CrowdView { cell: c.cell, dispersed: c.dispersed }).collect(),
            civilians: state
                .civilians()
                .iter()
                .map(|c| CivilianView { cell: c.cell, treated: c.treated })
                .collect(),
            team_vaccines: state.team_vaccines(),
            vaccine_target: stage.vaccine_target,
            pending_trade: state.pending_trade().map(|t| TradeView {
                from: t.from_player.0.clone(),
                to: t.to_player.0.clone(),
                points: t.points_offered,
                expires_at_tick: t.expires_at_tick,
            }),
            hint,
        }
    }

    pub fn player(&self, name: &str) -> Option<&PlayerView> {
        self.players.iter().find(|p| p.player_name == name)
    }

    pub fn is_wall(&self, cell: Cell) -> bool {
        self.grid.walls.binary_search(&cell).is_ok()
    }

    /// Inside the grid and not a wall.
    pub fn is_open(&self, cell: Cell) -> bool {
        cell.x >= 0
            && cell.y >= 0
            && (cell.x as u32) < self.grid.width
            && (cell.y as u32) < self.grid.height
            && !self.is_wall(cell)
    }
}
