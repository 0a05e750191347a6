//! Room registry and per-room actors.

use crate::results::ResultsLog;
use crate::room::{ConnId, Delivery, Room, RoomSettings, SERVER_NAME};
use coopvax_core::StageSpec;
use coopvax_protocol::{ErrorCode, Message};
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;
use tokio::time::Instant;
use tokio::sync::{mpsc, oneshot};
use tokio::time::MissedTickBehavior;

/// Outbound channel of one connection.
pub type ConnTx = mpsc::UnboundedSender<Message>;

pub(crate) enum RoomCmd {
    Join { conn: ConnId, player_name: String, tx: ConnTx, reply: oneshot::Sender<Result<(), (ErrorCode, String)>> },
    Frame { conn: ConnId, msg: Message },
    Disconnect { conn: ConnId },
}

/// Handle to a room actor held by member connections.
#[derive(Clone)]
pub struct RoomLink {
    pub(crate) tx: mpsc::UnboundedSender<RoomCmd>,
}

impl RoomLink {
    /// False once the room actor has gone away.
    pub(crate) fn send(&self, conn: ConnId, msg: Message) -> bool {
        self.tx.send(RoomCmd::Frame { conn, msg }).is_ok()
    }

    pub(crate) fn disconnect(&self, conn: ConnId) {
        let _ = self.tx.send(RoomCmd::Disconnect { conn });
    }
}

struct Entry {
    generation: u64,
    link: RoomLink,
}

pub struct Registry {
    rooms: Mutex<HashMap<String, Entry>>,
    settings: RoomSettings,
    idle_timeout: Option<Duration>,
    stages: Arc<Vec<StageSpec>>,
    fixed_seed: Option<u64>,
    results: Option<Arc<ResultsLog>>,
    next_id: AtomicU64,
}

fn fresh_seed(counter: u64) -> u64 {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0);
    coopvax_core::rng::splitmix64(nanos ^ counter.rotate_left(32))
}

impl Registry {
    pub fn new(
        settings: RoomSettings,
        idle_timeout: Option<Duration>,
        stages: Arc<Vec<StageSpec>>,
        fixed_seed: Option<u64>,
        results: Option<Arc<ResultsLog>>,
    ) -> Arc<Registry> {
        Arc::new(Registry {
            rooms: Mutex::new(HashMap::new()),
            settings,
            idle_timeout,
            stages,
            fixed_seed,
            results,
            next_id: AtomicU64::new(1),
        })
    }

    pub fn next_conn_id(&self) -> ConnId {
        self.next_id.fetch_add(1, Ordering::Relaxed)
    }

    pub fn room_count(&self) -> usize {
        self.rooms.lock().unwrap().len()
    }

    /// Creates the room and its actor. Name reservation and insertion happen
    /// under one lock.
    pub(crate) fn create(
        self: &Arc<Self>,
        room_name: &str,
        player_name: &str,
        conn: ConnId,
        tx: ConnTx,
    ) -> Result<RoomLink, (ErrorCode, String)> {
        if player_name == SERVER_NAME {
            return Err((ErrorCode::InvalidName, format!("{SERVER_NAME:?} is reserved")));
        }
        let mut rooms = self.rooms.lock().unwrap();
        if rooms.contains_key(room_name) {
            return Err((ErrorCode::RoomExists, format!("room {room_name} already exists")));
        }
        let generation = self.next_id.fetch_add(1, Ordering::Relaxed);
        let seed = self.fixed_seed.unwrap_or_else(|| fresh_seed(generation));
        let (room, initial) = Room::new(room_name, self.settings.clone(), self.stages.clone(), seed, player_name, conn);
        let (cmd_tx, cmd_rx) = mpsc::unbounded_channel();
        let link = RoomLink { tx: cmd_tx };
        rooms.insert(room_name.to_string(), Entry { generation, link: link.clone() });
        drop(rooms);
        tracing::info!(event = "room_created", room = room_name, creator = player_name, seed);
        let mut conns = HashMap::new();
        conns.insert(conn, tx);
        let actor = Actor { registry: self.clone(), room, generation, conns };
        actor.dispatch(initial);
        tokio::spawn(actor.run(cmd_rx));
        Ok(link)
    }

    pub(crate) async fn join(
        &self,
        room_name: &str,
        player_name: &str,
        conn: ConnId,
        tx: ConnTx,
    ) -> Result<RoomLink, (ErrorCode, String)> {
        if player_name == SERVER_NAME {
            return Err((ErrorCode::InvalidName, format!("{SERVER_NAME:?} is reserved")));
        }
        let not_found = || (ErrorCode::RoomNotFound, format!("no room named {room_name}"));
        let link = self.rooms.lock().unwrap().get(room_name).map(|e| e.link.clone()).ok_or_else(not_found)?;
        let (reply, rx) = oneshot::channel();
        link.tx
            .send(RoomCmd::Join { conn, player_name: player_name.to_string(), tx, reply })
            .map_err(|_| not_found())?;
        rx.await.map_err(|_| not_found())??;
        Ok(link)
    }

    fn remove(&self, room_name: &str, generation: u64) {
        let mut rooms = self.rooms.lock().unwrap();
        if rooms.get(room_name).is_some_and(|e| e.generation == generation) {
            rooms.remove(room_name);
        }
    }
}

struct Actor {
    registry: Arc<Registry>,
    room: Room,
    generation: u64,
    conns: HashMap<ConnId, ConnTx>,
}

impl Actor {
    fn dispatch(&self, out: Vec<Delivery>) {
        for d in out {
            if let Some(tx) = self.conns.get(&d.to) {
                let _ = tx.send(d.msg);
            }
        }
    }

    fn apply(&mut self, cmd: RoomCmd) {
        match cmd {
            RoomCmd::Join { conn, player_name, tx, reply } => {
                let was_started = self.room.started();
                match self.room.join(conn, &player_name) {
                    Ok(out) => {
                        self.conns.insert(conn, tx);
                        let _ = reply.send(Ok(()));
                        if was_started {
                            tracing::info!(event = "player_reconnected", room = self.room.name(), player = %player_name);
                        }
                        self.dispatch(out);
                    }
                    Err(e) => {
                        let _ = reply.send(Err(e));
                    }
                }
            }
            RoomCmd::Frame { conn, msg } => {
                let leaving = matches!(msg, Message::LeaveRoom);
                let starting = matches!(msg, Message::StartGame) && !self.room.started();
                let out = self.room.handle(conn, msg);
                self.dispatch(out);
                if starting && self.room.started() {
                    let roster: Vec<String> = self
                        .room
                        .game()
                        .map(|g| g.players().iter().map(|p| format!("{}:{}", p.id, p.role.as_str())).collect())
                        .unwrap_or_default();
                    tracing::info!(event = "game_started", room = self.room.name(), seed = self.room.seed(), roster = ?roster);
                }
                if leaving {
                    self.conns.remove(&conn);
                }
            }
            RoomCmd::Disconnect { conn } => {
                let out = self.room.disconnect(conn);
                self.conns.remove(&conn);
                self.dispatch(out);
            }
        }
    }

    fn tick(&mut self) {
        let out = self.room.tick();
        self.dispatch(out);
        if let Some(result) = self.room.take_result() {
            tracing::info!(
                event = "game_over",
                room = %result.room,
                seed = result.seed,
                outcome = result.outcome,
                stage_reached = result.stage_reached,
                ticks = result.duration_ticks
            );
            if let Some(log) = &self.registry.results {
                if let Err(e) = log.append(&result) {
                    tracing::error!(event = "results_write_failed", error = %e);
                }
            }
        }
    }

    async fn run(mut self, mut rx: mpsc::UnboundedReceiver<RoomCmd>) {
        let period = Duration::from_secs_f64(1.0 / self.room_tick_rate() as f64);
        let mut interval = tokio::time::interval(period);
        interval.set_missed_tick_behavior(MissedTickBehavior::Burst);
        let mut was_timer = false;
        let idle = self.registry.idle_timeout;
        let mut last_activity = Instant::now();
        loop {
            let timer = self.room.wants_timer_tick();
            if timer && !was_timer {
                interval.reset();
            }
            was_timer = timer;
            tokio::select! {
                cmd = rx.recv() => {
                    let Some(cmd) = cmd else { break };
                    last_activity = Instant::now();
                    self.apply(cmd);
                    while self.room.lockstep_ready() {
                        self.tick();
                    }
                }
                _ = interval.tick(), if timer => self.tick(),
                _ = tokio::time::sleep_until(last_activity + idle.unwrap_or_default()), if idle.is_some() && !self.room.running() => {
                    self.close_idle(idle.unwrap_or_default());
                    break;
                }
            }
            if self.room.is_dead() {
                break;
            }
        }
        self.registry.remove(self.room.name(), self.generation);
        tracing::info!(event = "room_closed", room = self.room.name());
    }

    fn close_idle(&self, idle: Duration) {
        tracing::info!(event = "room_idle_timeout", room = self.room.name(), idle_secs = idle.as_secs());
        self.registry.remove(self.room.name(), self.generation);
        let detail = format!("room {} closed after {} s without activity", self.room.name(), idle.as_secs());
        for tx in self.conns.values() {
            let _ = tx.send(Message::error(ErrorCode::NotInRoom, detail.clone()));
        }
    }

    fn room_tick_rate(&self) -> u32 {
        self.registry.settings.tick_rate
    }
}
