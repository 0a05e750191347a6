use crate::model::{PlayerId, Role};
use serde::{Deserialize, Serialize};

/// One player's intent for the next tick.
///
/// `Move` carries an 8-way direction as a pair of components in `-1..=1`;
/// the simulation normalizes diagonals to unit length. A zero vector is idle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "WireCommand", into = "WireCommand")]
pub enum PlayerCommand {
    Move {
        dx: i8,
        dy: i8,
    },
    Act,
    UseSanitizer,
    /// Offer `points` to `target` in exchange for swapping roles. In a
    /// single-player game `target` is the proposer and `role` names the free
    /// role to switch to.
    ProposeTrade {
        target: PlayerId,
        points: u32,
        role: Option<Role>,
    },
    RespondTrade {
        accept: bool,
    },
    Idle,
}

// Unit variants of an internally tagged enum silently accept extra fields,
// so the wire form uses empty struct variants to keep decoding strict.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum WireCommand {
    Move {
        dx: i8,
        dy: i8,
    },
    Act {},
    UseSanitizer {},
    ProposeTrade {
        target: PlayerId,
        points: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        role: Option<Role>,
    },
    RespondTrade {
        accept: bool,
    },
    Idle {},
}

impl From<WireCommand> for PlayerCommand {
    fn from(w: WireCommand) -> Self {
        match w {
            WireCommand::Move { dx, dy } => PlayerCommand::Move { dx, dy },
            WireCommand::Act {} => PlayerCommand::Act,
            WireCommand::UseSanitizer {} => PlayerCommand::UseSanitizer,
            WireCommand::ProposeTrade { target, points, role } => PlayerCommand::ProposeTrade { target, points, role },
            WireCommand::RespondTrade { accept } => PlayerCommand::RespondTrade { accept },
            WireCommand::Idle {} => PlayerCommand::Idle,
        }
    }
}

impl From<PlayerCommand> for WireCommand {
    fn from(c: PlayerCommand) -> Self {
        match c {
            PlayerCommand::Move { dx, dy } => WireCommand::Move { dx, dy },
            PlayerCommand::Act => WireCommand::Act {},
            PlayerCommand::UseSanitizer => WireCommand::UseSanitizer {},
            PlayerCommand::ProposeTrade { target, points, role } => WireCommand::ProposeTrade { target, points, role },
            PlayerCommand::RespondTrade { accept } => WireCommand::RespondTrade { accept },
            PlayerCommand::Idle => WireCommand::Idle {},
        }
    }
}

impl PlayerCommand {
    /// Collapses degenerate moves to `Idle`; rejects out-of-range components.
    pub fn normalized(self) -> Option<PlayerCommand> {
        match self {
            PlayerCommand::Move { dx, dy } => {
                if !(-1..=1).contains(&dx) || !(-1..=1).contains(&dy) {
                    None
                } else if dx == 0 && dy == 0 {
                    Some(PlayerCommand::Idle)
                } else {
                    Some(self)
                }
            }
            other => Some(other),
        }
    }
}

/// Unit vector for a normalized move.
pub fn move_vector(dx: i8, dy: i8) -> (f64, f64) {
    let (x, y) = (dx as f64, dy as f64);
    let len = x.hypot(y);
    (x / len, y / len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_move_is_idle() {
        assert_eq!(PlayerCommand::Move { dx: 0, dy: 0 }.normalized(), Some(PlayerCommand::Idle));
        assert_eq!(PlayerCommand::Move { dx: 2, dy: 0 }.normalized(), None);
        assert_eq!(
            PlayerCommand::Move { dx: -1, dy: 1 }.normalized(),
            Some(PlayerCommand::Move { dx: -1, dy: 1 })
        );
    }

    #[test]
    fn diagonal_is_unit() {
        let (x, y) = move_vector(1, -1);
        assert!((x.hypot(y) - 1.0).abs() < 1e-15);
        assert_eq!(move_vector(1, 0), (1.0, 0.0));
    }

    #[test]
    fn wire_shape() {
        let c = PlayerCommand::Move { dx: 1, dy: 0 };
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"kind":"move","dx":1,"dy":0}"#);
        let t: PlayerCommand =
            serde_json::from_str(r#"{"kind":"propose_trade","target":"ana","points":20}"#).unwrap();
        assert_eq!(t, PlayerCommand::ProposeTrade { target: "ana".into(), points: 20, role: None });
        assert!(serde_json::from_str::<PlayerCommand>(r#"{"kind":"act","extra":1}"#).is_err());
        assert_eq!(serde_json::to_string(&PlayerCommand::Act).unwrap(), r#"{"kind":"act"}"#);
    }
}
