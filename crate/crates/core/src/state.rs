//! Authoritative per-room game state.
//!
//! Every field is private: the only ways to change a [`GameState`] are
//! [`GameState::queue_command`], [`GameState::tick`] and the connection
//! bookkeeping in [`GameState::set_connected`].

use crate::command::PlayerCommand;
use crate::error::SimError;
use crate::event::{GameEvent, LossReason, TradeCancel};
use crate::geom::{Cell, Point};
use crate::map::StageSpec;
use crate::model::{EntityId, PickupKind, PlayerId, Role};
use crate::rng::SimRng;
use crate::rules::{self, MAX_HEALTH};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};

/// Most players a game admits.
pub const MAX_PLAYERS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Running,
    /// One-tick intermission after a non-final stage is cleared; the next
    /// tick loads the following stage.
    StageCleared,
    Won,
    Lost,
}

impl Phase {
    pub fn is_over(self) -> bool {
        matches!(self, Phase::Won | Phase::Lost)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlayerState {
    pub id: PlayerId,
    pub role: Role,
    pub position: Point,
    pub health: f64,
    pub mask_meter: f64,
    pub sanitizer_count: u32,
    pub shield_ticks: u32,
    pub ammo: u32,
    /// Progress toward the personal goal of the role currently held.
    pub items_collected: u32,
    pub score: u32,
    pub connected: bool,
    pub disconnected_since: Option<u64>,
}

impl PlayerState {
    /// A player is immune while a sanitizer shield runs or the mask meter is
    /// non-empty.
    pub fn shielded(&self) -> bool {
        self.shield_ticks > 0 || self.mask_meter > 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VirusState {
    pub id: EntityId,
    pub position: Point,
    pub strain_level: u32,
    pub alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Civilian {
    pub cell: Cell,
    pub treated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crowd {
    pub cell: Cell,
    pub dispersed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pickup {
    pub id: EntityId,
    pub kind: PickupKind,
    pub cell: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeOffer {
    pub from_player: PlayerId,
    pub to_player: PlayerId,
    pub points_offered: u32,
    pub expires_at_tick: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct Contact {
    pub virus: EntityId,
    pub player: usize,
    pub tick: u64,
}

/// Role-bound resources parked while no player holds the role.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct Holdings {
    pub ammo: u32,
    pub progress: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Ticks a disconnected player may stay away before the game is lost.
    pub disconnect_grace_ticks: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            disconnect_grace_ticks: rules::DEFAULT_GRACE_TICKS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub(crate) rng_seed: u64,
    pub(crate) rng: SimRng,
    pub(crate) config: SimConfig,
    pub(crate) tick: u64,
    pub(crate) stage_tick: u64,
    pub(crate) stages: Vec<StageSpec>,
    pub(crate) stage_pos: usize,
    pub(crate) players: Vec<PlayerState>,
    pub(crate) viruses: Vec<VirusState>,
    pub(crate) civilians: Vec<Civilian>,
    pub(crate) crowds: Vec<Crowd>,
    pub(crate) remaining_pickups: Vec<Pickup>,
    pub(crate) collected: BTreeMap<PickupKind, u32>,
    pub(crate) team_vaccines: u32,
    pub(crate) vaccinated_through: u32,
    pub(crate) phase: Phase,
    pub(crate) pending_trade: Option<TradeOffer>,
    pub(crate) queued: BTreeMap<PlayerId, PlayerCommand>,
    pub(crate) contacts: Vec<Contact>,
    pub(crate) stash: BTreeMap<Role, Holdings>,
    pub(crate) next_virus_id: EntityId,
    pub(crate) loss: Option<LossReason>,
}

/// Builds a running game. Players take spawn cells in roster order; roles
/// missing from the roster have their personal goals waived.
pub fn new_game(
    stages: Vec<StageSpec>,
    roster: Vec<(PlayerId, Role)>,
    seed: u64,
) -> Result<GameState, SimError> {
    GameState::with_config(stages, roster, seed, SimConfig::default())
}

impl GameState {
    pub fn with_config(
        stages: Vec<StageSpec>,
        roster: Vec<(PlayerId, Role)>,
        seed: u64,
        config: SimConfig,
    ) -> Result<GameState, SimError> {
        if roster.is_empty() {
            return Err(SimError::EmptyRoster);
        }
        if roster.len() > MAX_PLAYERS {
            return Err(SimError::RosterTooLarge(roster.len()));
        }
        let mut roles = BTreeSet::new();
        let mut ids = BTreeSet::new();
        for (id, role) in &roster {
            if !roles.insert(*role) {
                return Err(SimError::DuplicateRole(*role));
            }
            if !ids.insert(id.clone()) {
                return Err(SimError::DuplicatePlayer(id.clone()));
            }
        }
        if stages.is_empty() {
            return Err(SimError::NoStages);
        }
        for stage in &stages {
            let issues = stage.layout_issues();
            if !issues.is_empty() {
                return Err(SimError::InvalidStage { stage: stage.stage_index, issues });
            }
            let issues = stage.achievability_issues();
            if !issues.is_empty() {
                return Err(SimError::UnachievableGoals { stage: stage.stage_index, issues });
            }
        }

        let players = roster
            .into_iter()
            .map(|(id, role)| PlayerState {
                id,
                role,
                position: Point::new(0.0, 0.0),
                health: MAX_HEALTH,
                mask_meter: 0.0,
                sanitizer_count: 0,
                shield_ticks: 0,
                ammo: 0,
                items_collected: 0,
                score: 0,
                connected: true,
                disconnected_since: None,
            })
            .collect();

        let mut state = GameState {
            rng_seed: seed,
            rng: SimRng::seed_from_u64(seed),
            config,
            tick: 0,
            stage_tick: 0,
            stages,
            stage_pos: 0,
            players,
            viruses: Vec::new(),
            civilians: Vec::new(),
            crowds: Vec::new(),
            remaining_pickups: Vec::new(),
            collected: BTreeMap::new(),
            team_vaccines: 0,
            vaccinated_through: 0,
            phase: Phase::Running,
            pending_trade: None,
            queued: BTreeMap::new(),
            contacts: Vec::new(),
            stash: BTreeMap::new(),
            next_virus_id: 0,
            loss: None,
        };
        state.load_stage(0);
        Ok(state)
    }

    /// Resets the world to stage `pos`, respawning players with stage
    /// defaults while keeping scores and connection flags.
    pub(crate) fn load_stage(&mut self, pos: usize) -> Vec<GameEvent> {
        let mut events = Vec::new();
        if let Some(offer) = self.pending_trade.take() {
            events.push(GameEvent::TradeCancelled {
                from: offer.from_player,
                to: offer.to_player,
                reason: TradeCancel::StageEnded,
            });
        }
        self.stage_pos = pos;
        self.stage_tick = 0;
        let stage = &self.stages[pos];
        let map = &stage.map;
        self.viruses = map
            .virus_spawns
            .iter()
            .enumerate()
            .map(|(i, &(cell, strain))| VirusState {
                id: i as EntityId,
                position: cell.center(),
                strain_level: strain,
                alive: true,
            })
            .collect();
        self.next_virus_id = self.viruses.len() as EntityId;
        self.civilians = map.civilians.iter().map(|&cell| Civilian { cell, treated: false }).collect();
        self.crowds = map.crowds.iter().map(|&cell| Crowd { cell, dispersed: false }).collect();
        self.remaining_pickups = map
            .initial_pickups
            .iter()
            .enumerate()
            .map(|(i, &(kind, cell))| Pickup { id: i as EntityId, kind, cell })
            .collect();
        self.collected.clear();
        self.team_vaccines = 0;
        self.contacts.clear();
        self.stash.clear();
        self.queued.clear();
        for (i, p) in self.players.iter_mut().enumerate() {
            p.position = map.player_spawns[i].center();
            p.health = MAX_HEALTH;
            p.mask_meter = 0.0;
            p.shield_ticks = 0;
            p.sanitizer_count = 0;
            p.ammo = if p.role.uses_ammo() { rules::STARTING_AMMO } else { 0 };
            p.items_collected = 0;
        }
        events.push(GameEvent::StageStarted { stage_index: stage.stage_index });
        events
    }

    pub fn seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn tick_count(&self) -> u64 {
        self.tick
    }

    /// Ticks elapsed since the current stage was loaded.
    pub fn stage_tick(&self) -> u64 {
        self.stage_tick
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn stage(&self) -> &StageSpec {
        &self.stages[self.stage_pos]
    }

    pub fn stages(&self) -> &[StageSpec] {
        &self.stages
    }

    pub fn is_last_stage(&self) -> bool {
        self.stage_pos + 1 == self.stages.len()
    }

    pub fn players(&self) -> &[PlayerState] {
        &self.players
    }

    pub fn player(&self, id: &PlayerId) -> Option<&PlayerState> {
        self.players.iter().find(|p| &p.id == id)
    }

    pub(crate) fn player_index(&self, id: &PlayerId) -> Result<usize, SimError> {
        self.players
            .iter()
            .position(|p| &p.id == id)
            .ok_or_else(|| SimError::UnknownPlayer(id.clone()))
    }

    pub fn viruses(&self) -> &[VirusState] {
        &self.viruses
    }

    pub fn civilians(&self) -> &[Civilian] {
        &self.civilians
    }

    pub fn crowds(&self) -> &[Crowd] {
        &self.crowds
    }

    pub fn remaining_pickups(&self) -> &[Pickup] {
        &self.remaining_pickups
    }

    pub fn team_vaccines(&self) -> u32 {
        self.team_vaccines
    }

    /// Highest stage index cleared so far; strains at or below it deal half
    /// damage.
    pub fn vaccinated_through(&self) -> u32 {
        self.vaccinated_through
    }

    pub fn pending_trade(&self) -> Option<&TradeOffer> {
        self.pending_trade.as_ref()
    }

    pub fn loss_reason(&self) -> Option<&LossReason> {
        self.loss.as_ref()
    }

    /// Commands waiting for the next tick.
    pub fn queued_commands(&self) -> &BTreeMap<PlayerId, PlayerCommand> {
        &self.queued
    }

    /// A role's personal goal counts only while some player holds the role.
    pub fn goal_waived(&self, role: Role) -> bool {
        !self.players.iter().any(|p| p.role == role)
    }

    /// Placed on the current stage's map.
    pub fn placed_count(&self, kind: PickupKind) -> u32 {
        self.stage().map.pickup_count(kind)
    }

    /// Collected during the current stage.
    pub fn collected_count(&self, kind: PickupKind) -> u32 {
        self.collected.get(&kind).copied().unwrap_or(0)
    }

    pub fn remaining_count(&self, kind: PickupKind) -> u32 {
        self.remaining_pickups.iter().filter(|p| p.kind == kind).count() as u32
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn state_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("game state serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// True when the vaccine target and every non-waived personal goal of the
    /// current stage are met.
    pub fn check_stage_clear(&self) -> bool {
        let stage = self.stage();
        self.team_vaccines >= stage.vaccine_target
            && self
                .players
                .iter()
                .all(|p| p.items_collected >= stage.goals.for_role(p.role))
    }

    /// Unit vector from the player to the nearest uncollected vaccine part.
    /// Ties go to the lowest pickup id. `None` when no part remains.
    pub fn vaccine_direction_hint(&self, id: &PlayerId) -> Result<Option<(f64, f64)>, SimError> {
        let p = &self.players[self.player_index(id)?];
        let nearest = self
            .remaining_pickups
            .iter()
            .filter(|k| k.kind == PickupKind::VaccinePart)
            .map(|k| (p.position.distance(k.cell.center()), k))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.id.cmp(&b.1.id)));
        Ok(nearest.and_then(|(_, k)| p.position.direction_to(k.cell.center())))
    }

    /// Marks a player as (dis)connected. A disconnected avatar idles; the game
    /// is lost if it stays away past the grace period.
    pub fn set_connected(&mut self, id: &PlayerId, connected: bool) -> Result<Vec<GameEvent>, SimError> {
        let idx = self.player_index(id)?;
        let mut events = Vec::new();
        let tick = self.tick;
        let p = &mut self.players[idx];
        if p.connected == connected {
            return Ok(events);
        }
        p.connected = connected;
        if connected {
            p.disconnected_since = None;
            events.push(GameEvent::PlayerReconnected { player: id.clone() });
        } else {
            p.disconnected_since = Some(tick);
            self.queued.remove(id);
            events.push(GameEvent::PlayerDisconnected { player: id.clone() });
            if let Some(offer) = &self.pending_trade {
                if &offer.from_player == id || &offer.to_player == id {
                    let offer = self.pending_trade.take().expect("checked above");
                    events.push(GameEvent::TradeCancelled {
                        from: offer.from_player,
                        to: offer.to_player,
                        reason: TradeCancel::Disconnected,
                    });
                }
            }
        }
        Ok(events)
    }
}
