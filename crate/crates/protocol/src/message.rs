use crate::error::ErrorCode;
use crate::view::ClientView;
use coopvax_core::{GameEvent, PlayerCommand, Role};
use serde::{Deserialize, Serialize};

/// Current protocol version.
pub const VERSION: u32 = 1;
pub const MAX_NAME_CHARS: usize = 32;
pub const MAX_CHAT_CHARS: usize = 512;

/// Room and player names: 1-32 of `[A-Za-z0-9_-]`.
pub fn is_valid_name(name: &str) -> bool {
    (1..=MAX_NAME_CHARS).contains(&name.len())
        && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub player_name: String,
    pub role: Option<Role>,
    pub is_creator: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub player_name: String,
    pub role: Role,
    pub score: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AvatarRejectReason {
    RoleTaken,
}

/// Every protocol message. Field order here is the wire key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Message {
    // client -> server
    CreateRoom { room_name: String, player_name: String },
    JoinRoom { room_name: String, player_name: String },
    SelectAvatar { role: Role },
    StartGame,
    Input { command: PlayerCommand },
    Chat { text: String },
    LeaveRoom,

    // server -> client
    RoomState { room_name: String, members: Vec<Member>, started: bool },
    AvatarRejected { role: Role, reason: AvatarRejectReason },
    Snapshot { tick: u64, view: Box<ClientView> },
    Event { tick: u64, game_event: GameEvent },
    ChatRelay { player_name: String, text: String },
    Error { code: ErrorCode, detail: String },
    GameOver { won: bool, tick: u64, stage_reached: u32, final_scores: Vec<ScoreEntry> },
}

impl Message {
    /// Every `type` tag, in declaration order.
    pub const TYPES: [&'static str; 14] = [
        "create_room",
        "join_room",
        "select_avatar",
        "start_game",
        "input",
        "chat",
        "leave_room",
        "room_state",
        "avatar_rejected",
        "snapshot",
        "event",
        "chat_relay",
        "error",
        "game_over",
    ];

    pub fn type_name(&self) -> &'static str {
        match self {
            Message::CreateRoom { .. } => "create_room",
            Message::JoinRoom { .. } => "join_room",
            Message::SelectAvatar { .. } => "select_avatar",
            Message::StartGame => "start_game",
            Message::Input { .. } => "input",
            Message::Chat { .. } => "chat",
            Message::LeaveRoom => "leave_room",
            Message::RoomState { .. } => "room_state",
            Message::AvatarRejected { .. } => "avatar_rejected",
            Message::Snapshot { .. } => "snapshot",
            Message::Event { .. } => "event",
            Message::ChatRelay { .. } => "chat_relay",
            Message::Error { .. } => "error",
            Message::GameOver { .. } => "game_over",
        }
    }

    /// True for messages a client may send.
    pub fn is_client_message(&self) -> bool {
        matches!(
            self,
            Message::CreateRoom { .. }
                | Message::JoinRoom { .. }
                | Message::SelectAvatar { .. }
                | Message::StartGame
                | Message::Input { .. }
                | Message::Chat { .. }
                | Message::LeaveRoom
        )
    }

    pub fn error(code: ErrorCode, detail: impl Into<String>) -> Message {
        Message::Error { code, detail: detail.into() }
    }
}
