use crate::map::Issue;
use crate::model::PlayerId;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("roster is empty")]
    EmptyRoster,
    #[error("roster has {0} players, at most 4 allowed")]
    RosterTooLarge(usize),
    #[error("role {0} appears more than once in the roster")]
    DuplicateRole(crate::model::Role),
    #[error("player id {0} appears more than once in the roster")]
    DuplicatePlayer(PlayerId),
    #[error("no stages supplied")]
    NoStages,
    #[error("stage {stage} is invalid: {}", join(.issues))]
    InvalidStage { stage: u32, issues: Vec<Issue> },
    #[error("stage {stage} goals cannot be met: {}", join(.issues))]
    UnachievableGoals { stage: u32, issues: Vec<Issue> },
    #[error("unknown player {0}")]
    UnknownPlayer(PlayerId),
    #[error("game is not running")]
    NotRunning,
    #[error("move components must be in -1..=1")]
    InvalidCommand,
    #[error("no trade is pending")]
    NoPendingTrade,
    #[error("trade offer expired")]
    TradeExpired,
    #[error("offer exceeds the proposer's score")]
    InsufficientPoints,
    #[error("another trade is already pending")]
    TradePending,
    #[error("trade partner {0} is not in this game")]
    UnknownTarget(PlayerId),
    #[error("trade partner is disconnected")]
    TargetDisconnected,
    #[error("cannot trade with yourself while other players are present")]
    SelfTrade,
    #[error("no free role to switch to")]
    NoFreeRole,
}

fn join(issues: &[Issue]) -> String {
    issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
}
