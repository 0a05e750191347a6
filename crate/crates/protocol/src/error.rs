use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Machine-readable error codes carried by `Error` frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    MalformedInput,
    UnknownType,
    VersionMismatch,
    SchemaViolation,
    UnexpectedMessage,
    InvalidName,
    RoomExists,
    RoomNotFound,
    RoomFull,
    NameTaken,
    AlreadyInRoom,
    NotInRoom,
    NotCreator,
    UnassignedRoles,
    AlreadyStarted,
    NotRunning,
    StageLoadFailed,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::MalformedInput => "malformed_input",
            ErrorCode::UnknownType => "unknown_type",
            ErrorCode::VersionMismatch => "version_mismatch",
            ErrorCode::SchemaViolation => "schema_violation",
            ErrorCode::UnexpectedMessage => "unexpected_message",
            ErrorCode::InvalidName => "invalid_name",
            ErrorCode::RoomExists => "room_exists",
            ErrorCode::RoomNotFound => "room_not_found",
            ErrorCode::RoomFull => "room_full",
            ErrorCode::NameTaken => "name_taken",
            ErrorCode::AlreadyInRoom => "already_in_room",
            ErrorCode::NotInRoom => "not_in_room",
            ErrorCode::NotCreator => "not_creator",
            ErrorCode::UnassignedRoles => "unassigned_roles",
            ErrorCode::AlreadyStarted => "already_started",
            ErrorCode::NotRunning => "not_running",
            ErrorCode::StageLoadFailed => "stage_load_failed",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Codec failure. Only the four framing codes are produced here.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{code}: {detail}")]
pub struct ProtocolError {
    pub code: ErrorCode,
    pub detail: String,
}

impl ProtocolError {
    pub fn new(code: ErrorCode, detail: impl Into<String>) -> Self {
        ProtocolError { code, detail: detail.into() }
    }

    pub(crate) fn malformed(detail: impl Into<String>) -> Self {
        Self::new(ErrorCode::MalformedInput, detail)
    }

    pub(crate) fn schema(detail: impl Into<String>) -> Self {
        Self::new(ErrorCode::SchemaViolation, detail)
    }
}
