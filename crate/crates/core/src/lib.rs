//! Deterministic simulation for a cooperative outbreak-control game.
//!
//! A [`GameState`] holds one room's world. Clients never touch it directly:
//! they queue [`PlayerCommand`]s, and [`GameState::tick`] applies them and
//! advances the world by one fixed step, returning the [`GameEvent`]s that
//! describe what changed. No I/O happens here.

pub mod command;
pub mod error;
pub mod event;
pub mod geom;
pub mod map;
pub mod maps;
pub mod model;
pub mod rng;
pub mod rules;
pub mod sim;
pub mod state;

pub use command::PlayerCommand;
pub use error::SimError;
pub use event::{GameEvent, LossReason, Rejection, TradeCancel};
pub use geom::{Cell, Point};
pub use map::{Goals, Issue, StageSpec, WorldMap};
pub use model::{EntityId, PickupKind, PlayerId, Role};
pub use rng::SimRng;
pub use state::{new_game, GameState, Phase, PlayerState, SimConfig, TradeOffer, VirusState};
