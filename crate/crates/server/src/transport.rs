use crate::registry::Registry;
use crate::session::Session;
use axum::extract::ws::{Message as WsMessage, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use coopvax_protocol::{encode, encode_line, ErrorCode, Message, MAX_FRAME_BYTES};
use futures::{SinkExt, StreamExt};
use std::sync::Arc;
use tokio::io::{AsyncBufReadExt, AsyncReadExt, AsyncWriteExt, BufReader};
use tokio::net::{TcpListener, TcpStream};
use tokio::sync::mpsc;

pub(crate) fn ws_router(registry: Arc<Registry>) -> Router {
    Router::new().route("/ws", get(ws_upgrade)).with_state(registry)
}

async fn ws_upgrade(ws: WebSocketUpgrade, State(registry): State<Arc<Registry>>) -> Response {
    ws.max_message_size(MAX_FRAME_BYTES).on_upgrade(move |socket| ws_session(socket, registry))
}

async fn ws_session(socket: WebSocket, registry: Arc<Registry>) {
    let (mut sink, mut stream) = socket.split();
    let (tx, mut rx) = mpsc::unbounded_channel::<Message>();
    let writer = tokio::spawn(async move {
        while let Some(msg) = rx.recv().await {
            let Ok(bytes) = encode(&msg) else { continue };
            let text = String::from_utf8(bytes).expect("encoder emits UTF-8");
            if sink.send(WsMessage::Text(text.into())).await.is_err() {
                break;
            }
        }
    });
    let mut session = Session::new(registry, tx);
    while let Some(Ok(frame)) = stream.next().await {
        match frame {
            WsMessage::Text(t) => session.on_frame(t.as_bytes()).await,
            WsMessage::Binary(b) => session.on_frame(&b).await,
            WsMessage::Close(_) => break,
            _ => {}
        }
    }
    session.close();
    writer.abort();
}

pub(crate) async fn tcp_accept_loop(listener: TcpListener, registry: Arc<Registry>) {
    loop {
        match listener.accept().await {
            Ok((stream, peer)) => {
                tracing::debug!(event = "tcp_connected", %peer);
                tokio::spawn(tcp_session(stream, registry.clone()));
            }
            Err(e) => tracing::warn!(event = "accept_failed", error = %e),
        }
    }
}

async fn tcp_session(stream: TcpStream, registry: Arc<Registry>) {
    let _ = stream.set_nodelay(true);
    let (read, mut write) = stream.into_split();
    let (tx, mut rx) = mpsc::unbounded_channel::<Message>();
    let writer = tokio::spawn(async move {
        while let Some(msg) = rx.recv().await {
            let Ok(bytes) = encode_line(&msg) else { continue };
            if write.write_all(&bytes).await.is_err() {
                break;
            }
        }
    });
    let mut reader = BufReader::new(read);
    let mut session = Session::new(registry, tx.clone());
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let limit = (MAX_FRAME_BYTES + 1) as u64;
        match (&mut reader).take(limit).read_until(b'\n', &mut buf).await {
            Ok(0) | Err(_) => break,
            Ok(_) => {}
        }
        if buf.last() != Some(&b'\n') && buf.len() as u64 >= limit {
            let _ = tx.send(Message::error(ErrorCode::MalformedInput, "line exceeds the frame limit"));
            break;
        }
        let line = buf.strip_suffix(b"\n").unwrap_or(&buf);
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        session.on_frame(line).await;
    }
    session.close();
    drop(tx);
    // Let queued replies drain before the socket closes.
    let _ = tokio::time::timeout(std::time::Duration::from_secs(1), writer).await;
}
