use coopvax_core::{GameEvent, PickupKind};
use coopvax_protocol::ScoreEntry;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Won,
    Lost,
    /// The tick cap was reached first.
    TimedOut,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameReport {
    pub seed: u64,
    pub outcome: Outcome,
    pub ticks: u64,
    pub stage_reached: u32,
    /// Infection events per player.
    pub infections: BTreeMap<String, u32>,
    /// Pickups collected over the whole game, by kind.
    pub pickups: BTreeMap<PickupKind, u32>,
    /// Ticks each cleared stage took, keyed by stage index.
    pub stage_clear_ticks: BTreeMap<u32, u64>,
    pub final_scores: Vec<ScoreEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_state_hash: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub games: usize,
    pub wins: usize,
    pub win_rate: f64,
    /// Mean ticks to clear each stage, over the games that cleared it.
    pub mean_ticks_to_clear: BTreeMap<u32, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: String,
    pub policies: Vec<String>,
    pub games: Vec<GameReport>,
    pub aggregate: Aggregate,
}

impl RunReport {
    pub fn new(mode: &str, policies: Vec<String>, games: Vec<GameReport>) -> RunReport {
        let aggregate = Aggregate::of(&games);
        RunReport { mode: mode.to_string(), policies, games, aggregate }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Aggregate {
    pub fn of(games: &[GameReport]) -> Aggregate {
        let wins = games.iter().filter(|g| g.outcome == Outcome::Won).count();
        let mut sums: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
        for g in games {
            for (stage, ticks) in &g.stage_clear_ticks {
                let e = sums.entry(*stage).or_default();
                e.0 += ticks;
                e.1 += 1;
            }
        }
        Aggregate {
            games: games.len(),
            wins,
            win_rate: if games.is_empty() { 0.0 } else { wins as f64 / games.len() as f64 },
            mean_ticks_to_clear: sums.into_iter().map(|(s, (t, n))| (s, t as f64 / n as f64)).collect(),
        }
    }
}

/// Folds a game's event stream into report counters.
#[derive(Clone, Debug, Default)]
pub struct EventTally {
    pub infections: BTreeMap<String, u32>,
    pub pickups: BTreeMap<PickupKind, u32>,
    pub stage_clear_ticks: BTreeMap<u32, u64>,
    pub outcome: Option<Outcome>,
    stage_started_at: u64,
}

impl EventTally {
    pub fn new(players: impl IntoIterator<Item = String>) -> EventTally {
        EventTally { infections: players.into_iter().map(|p| (p, 0)).collect(), ..Default::default() }
    }

    pub fn record(&mut self, tick: u64, event: &GameEvent) {
        match event {
            GameEvent::PlayerInfected { player, .. } => *self.infections.entry(player.0.clone()).or_insert(0) += 1,
            GameEvent::PickupCollected { item, .. } => *self.pickups.entry(*item).or_insert(0) += 1,
            GameEvent::StageCleared { stage_index } => {
                self.stage_clear_ticks.insert(*stage_index, tick - self.stage_started_at);
            }
            GameEvent::StageStarted { .. } => self.stage_started_at = tick,
            GameEvent::GameWon => self.outcome = Some(Outcome::Won),
            GameEvent::GameLost { .. } => self.outcome = Some(Outcome::Lost),
            _ => {}
        }
    }
}
