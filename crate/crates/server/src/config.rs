use anyhow::{bail, Result};
use coopvax_core::rules::TICK_RATE;
use std::net::SocketAddr;
use std::path::PathBuf;

use crate::room::RoomSettings;

#[derive(Clone, Debug)]
pub struct ServerConfig {
    /// WebSocket listener (`/ws`). `None` disables it.
    pub listen: Option<SocketAddr>,
    /// Newline-delimited TCP listener. `None` disables it.
    pub tcp_listen: Option<SocketAddr>,
    pub stages_dir: PathBuf,
    pub tick_rate: u32,
    pub snapshot_rate: u32,
    pub grace_secs: u64,
    /// Seconds a room without a running game may go without any client
    /// message before it is closed. 0 keeps idle rooms forever.
    pub room_idle_secs: u64,
    pub results: Option<PathBuf>,
    pub lockstep: bool,
    /// Fixed seed for every game instead of a fresh one per room.
    pub seed: Option<u64>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            listen: Some(([127, 0, 0, 1], 8080).into()),
            tcp_listen: Some(([127, 0, 0, 1], 8081).into()),
            stages_dir: coopvax_core::maps::stages_dir(),
            tick_rate: TICK_RATE,
            snapshot_rate: 10,
            grace_secs: 60,
            room_idle_secs: 600,
            results: None,
            lockstep: false,
            seed: None,
        }
    }
}

impl ServerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tick_rate == 0 || self.snapshot_rate == 0 {
            bail!("tick and snapshot rates must be positive");
        }
        if self.snapshot_rate > self.tick_rate {
            bail!("snapshot rate {} exceeds tick rate {}", self.snapshot_rate, self.tick_rate);
        }
        if self.listen.is_none() && self.tcp_listen.is_none() {
            bail!("no listener configured");
        }
        Ok(())
    }

    pub fn room_settings(&self) -> RoomSettings {
        RoomSettings {
            tick_rate: self.tick_rate,
            snapshot_every: (self.tick_rate / self.snapshot_rate).max(1) as u64,
            grace_ticks: self.grace_secs * self.tick_rate as u64,
            lockstep: self.lockstep,
        }
    }
}
