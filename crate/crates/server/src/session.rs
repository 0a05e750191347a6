//! Per-connection protocol handling shared by both transports.

use crate::registry::{ConnTx, Registry, RoomLink};
use crate::room::ConnId;
use coopvax_protocol::{decode, ErrorCode, Message};
use std::sync::Arc;

pub(crate) struct Session {
    registry: Arc<Registry>,
    conn: ConnId,
    tx: ConnTx,
    room: Option<RoomLink>,
}

impl Session {
    pub(crate) fn new(registry: Arc<Registry>, tx: ConnTx) -> Session {
        let conn = registry.next_conn_id();
        Session { registry, conn, tx, room: None }
    }

    fn reply_error(&self, code: ErrorCode, detail: impl Into<String>) {
        let _ = self.tx.send(Message::error(code, detail));
    }

    /// Decodes one frame. Bad frames get an error reply; the connection stays.
    pub(crate) async fn on_frame(&mut self, bytes: &[u8]) {
        match decode(bytes) {
            Ok(msg) => self.on_message(msg).await,
            Err(e) => {
                tracing::debug!(event = "bad_frame", conn = self.conn, code = %e.code, detail = %e.detail);
                self.reply_error(e.code, e.detail);
            }
        }
    }

    async fn on_message(&mut self, msg: Message) {
        if !msg.is_client_message() {
            return self.reply_error(ErrorCode::UnexpectedMessage, format!("{} is sent by the server", msg.type_name()));
        }
        match (&self.room, msg) {
            (None, Message::CreateRoom { room_name, player_name }) => {
                match self.registry.create(&room_name, &player_name, self.conn, self.tx.clone()) {
                    Ok(link) => self.room = Some(link),
                    Err((code, detail)) => self.reply_error(code, detail),
                }
            }
            (None, Message::JoinRoom { room_name, player_name }) => {
                match self.registry.join(&room_name, &player_name, self.conn, self.tx.clone()).await {
                    Ok(link) => self.room = Some(link),
                    Err((code, detail)) => self.reply_error(code, detail),
                }
            }
            (None, other) => self.reply_error(ErrorCode::NotInRoom, format!("join a room before sending {}", other.type_name())),
            (Some(link), Message::LeaveRoom) => {
                link.send(self.conn, Message::LeaveRoom);
                self.room = None;
            }
            (Some(link), other) => {
                let type_name = other.type_name();
                if !link.send(self.conn, other) {
                    self.room = None;
                    self.reply_error(ErrorCode::NotInRoom, format!("room closed; {type_name} dropped"));
                }
            }
        }
    }

    pub(crate) fn close(self) {
        if let Some(link) = self.room {
            link.disconnect(self.conn);
        }
    }
}
