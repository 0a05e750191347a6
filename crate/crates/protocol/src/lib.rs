//! Protocol v1 shared by the server, the bots and the web client.
//!
//! Every frame is one compact JSON object whose first two keys are `v` and
//! `type`. WebSocket carries one frame per text message; plain TCP carries
//! the same frames separated by `\n`.

mod codec;
mod error;
mod message;
mod view;

pub use codec::{decode, decode_str, encode, encode_line, validate, MAX_FRAME_BYTES};
pub use error::{ErrorCode, ProtocolError};
pub use message::{
    is_valid_name, AvatarRejectReason, Member, Message, ScoreEntry, MAX_CHAT_CHARS, MAX_NAME_CHARS, VERSION,
};
pub use view::{CivilianView, ClientView, CrowdView, GridView, PickupView, PlayerView, TradeView, VirusView};
