use crate::error::{ErrorCode, ProtocolError};
use crate::message::{is_valid_name, Message, MAX_CHAT_CHARS, VERSION};
use coopvax_core::PlayerCommand;
use serde::Serialize;
use serde_json::Value;

/// Frames above this size are rejected unparsed.
pub const MAX_FRAME_BYTES: usize = 1 << 20;

#[derive(Serialize)]
struct Outbound<'a> {
    v: u32,
    #[serde(flatten)]
    msg: &'a Message,
}

fn check_name(field: &str, name: &str) -> Result<(), ProtocolError> {
    if is_valid_name(name) {
        Ok(())
    } else {
        Err(ProtocolError::schema(format!("{field} must be 1-32 characters of [A-Za-z0-9_-], got {name:?}")))
    }
}

fn check_chat(text: &str) -> Result<(), ProtocolError> {
    let n = text.chars().count();
    if n > MAX_CHAT_CHARS {
        return Err(ProtocolError::schema(format!("text is {n} characters, limit {MAX_CHAT_CHARS}")));
    }
    Ok(())
}

/// Field limits the type system cannot express.
pub fn validate(msg: &Message) -> Result<(), ProtocolError> {
    match msg {
        Message::CreateRoom { room_name, player_name } | Message::JoinRoom { room_name, player_name } => {
            check_name("room_name", room_name)?;
            check_name("player_name", player_name)
        }
        Message::Input { command } => match command {
            PlayerCommand::Move { dx, dy } if !(-1..=1).contains(dx) || !(-1..=1).contains(dy) => {
                Err(ProtocolError::schema("move components must be -1, 0 or 1"))
            }
            PlayerCommand::ProposeTrade { target, .. } => check_name("target", &target.0),
            _ => Ok(()),
        },
        Message::Chat { text } => check_chat(text),
        Message::ChatRelay { player_name, text } => {
            check_name("player_name", player_name)?;
            check_chat(text)
        }
        Message::RoomState { room_name, members, .. } => {
            check_name("room_name", room_name)?;
            members.iter().try_for_each(|m| check_name("player_name", &m.player_name))
        }
        _ => Ok(()),
    }
}

/// Canonical encoding: compact JSON, keys in declaration order, `v` first.
pub fn encode(msg: &Message) -> Result<Vec<u8>, ProtocolError> {
    validate(msg)?;
    serde_json::to_vec(&Outbound { v: VERSION, msg }).map_err(|e| ProtocolError::schema(e.to_string()))
}

/// [`encode`] plus the trailing newline used on TCP.
pub fn encode_line(msg: &Message) -> Result<Vec<u8>, ProtocolError> {
    let mut bytes = encode(msg)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn decode(bytes: &[u8]) -> Result<Message, ProtocolError> {
    if bytes.len() > MAX_FRAME_BYTES {
        return Err(ProtocolError::malformed(format!("frame of {} bytes exceeds {MAX_FRAME_BYTES}", bytes.len())));
    }
    let text = std::str::from_utf8(bytes).map_err(|e| ProtocolError::malformed(format!("invalid UTF-8: {e}")))?;
    decode_str(text)
}

pub fn decode_str(text: &str) -> Result<Message, ProtocolError> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let value: Value = serde_json::from_str(text).map_err(|e| ProtocolError::malformed(e.to_string()))?;
    let Value::Object(mut obj) = value else {
        return Err(ProtocolError::malformed("frame is not a JSON object"));
    };
    match obj.remove("v") {
        None => return Err(ProtocolError::schema("missing field `v`")),
        Some(Value::Number(n)) => match n.as_u64() {
            Some(v) if v == VERSION as u64 => {}
            Some(v) => {
                return Err(ProtocolError::new(
                    ErrorCode::VersionMismatch,
                    format!("protocol version {v} not supported, expected {VERSION}"),
                ))
            }
            None => {
                return Err(ProtocolError::new(ErrorCode::VersionMismatch, format!("protocol version {n} not supported")))
            }
        },
        Some(_) => return Err(ProtocolError::schema("`v` must be an integer")),
    }
    match obj.get("type") {
        None => return Err(ProtocolError::schema("missing field `type`")),
        Some(Value::String(t)) if Message::TYPES.contains(&t.as_str()) => {}
        Some(Value::String(t)) => {
            return Err(ProtocolError::new(ErrorCode::UnknownType, format!("unknown message type {t:?}")))
        }
        Some(_) => return Err(ProtocolError::schema("`type` must be a string")),
    }
    let input = Value::Object(obj);
    let msg: Message = serde_json::from_value(input.clone()).map_err(|e| ProtocolError::schema(e.to_string()))?;
    let canonical = serde_json::to_value(&msg).map_err(|e| ProtocolError::schema(e.to_string()))?;
    if let Some(path) = unknown_key(&input, &canonical, String::new()) {
        return Err(ProtocolError::schema(format!("unknown field `{path}`")));
    }
    validate(&msg)?;
    Ok(msg)
}

/// First key present in `input` but absent from the re-encoded message. An
/// explicit `null` counts as absent.
fn unknown_key(input: &Value, canonical: &Value, path: String) -> Option<String> {
    match (input, canonical) {
        (Value::Object(a), Value::Object(b)) => a.iter().find_map(|(k, va)| {
            let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
            match b.get(k) {
                None if va.is_null() => None,
                None => Some(p),
                Some(vb) => unknown_key(va, vb, p),
            }
        }),
        (Value::Array(a), Value::Array(b)) => a
            .iter()
            .zip(b)
            .enumerate()
            .find_map(|(i, (va, vb))| unknown_key(va, vb, format!("{path}[{i}]"))),
        _ => None,
    }
}
