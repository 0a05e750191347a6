//! Room server: lobby, avatar selection, authoritative tick loop, snapshot
//! broadcast and chat relay over WebSocket (`/ws`) and newline-delimited TCP.

pub mod config;
pub mod registry;
pub mod results;
pub mod room;
mod session;
mod transport;

pub use config::ServerConfig;
pub use registry::Registry;
pub use room::{ConnId, Delivery, GameResult, Room, RoomSettings};

use anyhow::{Context, Result};
use std::net::SocketAddr;
use std::sync::Arc;
use tokio::task::JoinHandle;

/// A started server. Dropping it stops the listeners.
pub struct ServerHandle {
    pub ws_addr: Option<SocketAddr>,
    pub tcp_addr: Option<SocketAddr>,
    pub registry: Arc<Registry>,
    tasks: Vec<JoinHandle<()>>,
}

impl ServerHandle {
    pub fn shutdown(&mut self) {
        for t in self.tasks.drain(..) {
            t.abort();
        }
    }

    /// Waits until a listener task ends.
    pub async fn wait(mut self) {
        if let Some(t) = self.tasks.pop() {
            let _ = t.await;
        }
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        self.shutdown();
    }
}

/// Loads the campaign, binds the listeners and starts accepting.
pub async fn start(config: ServerConfig) -> Result<ServerHandle> {
    config.validate()?;
    let stages = coopvax_core::maps::load_campaign(&config.stages_dir)
        .with_context(|| format!("loading stages from {}", config.stages_dir.display()))?;
    let results = match &config.results {
        Some(p) => Some(Arc::new(
            results::ResultsLog::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
        None => None,
    };
    let idle = (config.room_idle_secs > 0).then(|| std::time::Duration::from_secs(config.room_idle_secs));
    let registry = Registry::new(config.room_settings(), idle, Arc::new(stages), config.seed, results);
    let mut tasks = Vec::new();
    let mut ws_addr = None;
    let mut tcp_addr = None;
    if let Some(addr) = config.listen {
        let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
        ws_addr = Some(listener.local_addr()?);
        let app = transport::ws_router(registry.clone());
        tasks.push(tokio::spawn(async move {
            if let Err(e) = axum::serve(listener, app).await {
                tracing::error!(event = "ws_server_failed", error = %e);
            }
        }));
    }
    if let Some(addr) = config.tcp_listen {
        let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
        tcp_addr = Some(listener.local_addr()?);
        tasks.push(tokio::spawn(transport::tcp_accept_loop(listener, registry.clone())));
    }
    tracing::info!(
        event = "server_started",
        ws = ?ws_addr,
        tcp = ?tcp_addr,
        tick_rate = config.tick_rate,
        snapshot_rate = config.snapshot_rate,
        lockstep = config.lockstep,
        seed = ?config.seed
    );
    Ok(ServerHandle { ws_addr, tcp_addr, registry, tasks })
}
