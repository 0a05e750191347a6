use crate::geom::Cell;
use crate::model::{EntityId, PickupKind, PlayerId, Role};
use serde::{Deserialize, Serialize};

/// Why an action had no effect. Delivered only to the acting player.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    NoAmmo,
    NoTarget,
    NoSanitizer,
    InsufficientPoints,
    TradePending,
    NoPendingTrade,
    TradeExpired,
    UnknownTarget,
    SelfTrade,
    TargetDisconnected,
    NoFreeRole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TradeCancel {
    Declined,
    Expired,
    Disconnected,
    StageEnded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cause", rename_all = "snake_case")]
pub enum LossReason {
    PlayerDown { player: PlayerId },
    DisconnectTimeout { player: PlayerId },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GameEvent {
    PickupCollected { player: PlayerId, pickup: EntityId, item: PickupKind, cell: Cell },
    PlayerInfected { player: PlayerId, virus: EntityId, damage: f64, health: f64 },
    PlayerHealed { player: PlayerId, amount: f64, health: f64 },
    ShieldActivated { player: PlayerId, ticks: u32 },
    VirusSpawned { virus: EntityId, cell: Cell, strain: u32 },
    VirusKilled { virus: EntityId, player: PlayerId },
    CivilianTreated { player: PlayerId, cell: Cell },
    CrowdDispersed { player: PlayerId, cell: Cell },
    TradeProposed { from: PlayerId, to: PlayerId, points: u32, expires_at_tick: u64 },
    TradeCompleted { from: PlayerId, to: PlayerId, points: u32, from_role: Role, to_role: Role },
    TradeCancelled { from: PlayerId, to: PlayerId, reason: TradeCancel },
    ActionRejected { player: PlayerId, reason: Rejection },
    PlayerDisconnected { player: PlayerId },
    PlayerReconnected { player: PlayerId },
    StageCleared { stage_index: u32 },
    StageStarted { stage_index: u32 },
    GameWon,
    GameLost { reason: LossReason },
}

impl GameEvent {
    /// The only player who should see this event, for private feedback.
    pub fn private_to(&self) -> Option<&PlayerId> {
        match self {
            GameEvent::ActionRejected { player, .. } => Some(player),
            _ => None,
        }
    }
}
