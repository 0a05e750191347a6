//! Drives the simulation directly, one view per bot per tick.

use crate::policy::{roster, roster_bots, Bot, PolicyKind};
use crate::report::{EventTally, GameReport, Outcome, RunReport};
use coopvax_core::{new_game, GameEvent, GameState, PlayerId, SimError, StageSpec};
use coopvax_protocol::{ClientView, ScoreEntry};

/// Default tick cap per game (50 minutes of play).
pub const DEFAULT_MAX_TICKS: u64 = 60_000;

/// One headless game that can be stepped tick by tick.
pub struct HeadlessGame {
    state: GameState,
    bots: Vec<Bot>,
    ids: Vec<PlayerId>,
    tally: EventTally,
}

impl HeadlessGame {
    pub fn new(campaign: &[StageSpec], policies: &[PolicyKind], seed: u64) -> Result<HeadlessGame, SimError> {
        let roster = roster(policies.len());
        let ids: Vec<PlayerId> = roster.iter().map(|(id, _)| id.clone()).collect();
        let state = new_game(campaign.to_vec(), roster, seed)?;
        let tally = EventTally::new(ids.iter().map(|i| i.0.clone()));
        Ok(HeadlessGame { state, bots: roster_bots(policies, seed), ids, tally })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn is_over(&self) -> bool {
        self.state.phase().is_over()
    }

    /// Every bot answers its view of the current state; then the sim ticks.
    pub fn step(&mut self) -> Vec<GameEvent> {
        for (bot, id) in self.bots.iter_mut().zip(&self.ids) {
            let view = ClientView::project(&self.state, Some(id));
            let cmd = bot.decide(&view);
            // Commands from a policy are always well formed.
            let _ = self.state.queue_command(id, cmd);
        }
        let events = self.state.tick().unwrap_or_default();
        let tick = self.state.tick_count();
        for e in &events {
            self.tally.record(tick, e);
        }
        events
    }

    pub fn report(&self) -> GameReport {
        let outcome = self.tally.outcome.unwrap_or(Outcome::TimedOut);
        GameReport {
            seed: self.state.seed(),
            outcome,
            ticks: self.state.tick_count(),
            stage_reached: self.state.stage().stage_index,
            infections: self.tally.infections.clone(),
            pickups: self.tally.pickups.clone(),
            stage_clear_ticks: self.tally.stage_clear_ticks.clone(),
            final_scores: self
                .state
                .players()
                .iter()
                .map(|p| ScoreEntry { player_name: p.id.0.clone(), role: p.role, score: p.score })
                .collect(),
            final_state_hash: Some(self.state.state_hash()),
        }
    }
}

/// Plays one game to completion or the tick cap.
pub fn run_game(campaign: &[StageSpec], policies: &[PolicyKind], seed: u64, max_ticks: u64) -> Result<GameReport, SimError> {
    let mut game = HeadlessGame::new(campaign, policies, seed)?;
    while !game.is_over() && game.state().tick_count() < max_ticks {
        game.step();
    }
    Ok(game.report())
}

fn seeds(seed: u64, reps: usize) -> Vec<u64> {
    (0..reps as u64).map(|i| seed.wrapping_add(i)).collect()
}

fn names(policies: &[PolicyKind]) -> Vec<String> {
    policies.iter().map(|p| p.to_string()).collect()
}

/// Runs repetitions one after another.
pub fn run_headless_sequential(
    campaign: &[StageSpec],
    policies: &[PolicyKind],
    seed: u64,
    reps: usize,
    max_ticks: u64,
) -> Result<RunReport, SimError> {
    let games = seeds(seed, reps)
        .into_iter()
        .map(|s| run_game(campaign, policies, s, max_ticks))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunReport::new("headless", names(policies), games))
}

/// Runs repetitions across the rayon pool. Each game stays single-threaded
/// and results keep seed order, so the report equals the sequential one.
#[cfg(feature = "parallel")]
pub fn run_headless_parallel(
    campaign: &[StageSpec],
    policies: &[PolicyKind],
    seed: u64,
    reps: usize,
    max_ticks: u64,
) -> Result<RunReport, SimError> {
    use rayon::prelude::*;
    let games = seeds(seed, reps)
        .into_par_iter()
        .map(|s| run_game(campaign, policies, s, max_ticks))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunReport::new("headless", names(policies), games))
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
pub fn run_headless(
    campaign: &[StageSpec],
    policies: &[PolicyKind],
    seed: u64,
    reps: usize,
    max_ticks: u64,
) -> Result<RunReport, SimError> {
    #[cfg(feature = "parallel")]
    return run_headless_parallel(campaign, policies, seed, reps, max_ticks);
    #[cfg(not(feature = "parallel"))]
    return run_headless_sequential(campaign, policies, seed, reps, max_ticks);
}
