//! Room lifecycle as a pure state machine. The actor in [`crate::actor`]
//! owns one `Room` and turns its deliveries into socket writes.

use coopvax_core::{GameEvent, GameState, PlayerCommand, PlayerId, Role, SimConfig, SimError, StageSpec};
use coopvax_protocol::{AvatarRejectReason, ClientView, ErrorCode, Member, Message, ScoreEntry};
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;

/// Connection identifier, unique per server process.
pub type ConnId = u64;

/// Display name used for server-originated chat. Players may not take it.
pub const SERVER_NAME: &str = "server";

/// Instruction list sent as chat when a game starts.
pub const INSTRUCTIONS: [&str; 7] = [
    "Welcome! The whole team wins or loses together.",
    "Shared goal: collect the stage's vaccine parts. Follow your arrow to the nearest one.",
    "Personal goals: citizens buy groceries, doctors treat civilians, sanitation workers disinfect viruses, law enforcers break up crowds.",
    "Press act next to your target. Doctors and sanitation workers use ammo; pick up refills to restock.",
    "Virus contact lowers your health and slows you down. Masks and sanitizers shield you; camps and vitamins heal.",
    "If anyone's health reaches zero, the game is over for everyone.",
    "Offer points to trade roles with a teammate. Offers lapse after 10 seconds.",
];

#[derive(Clone, Debug)]
pub struct RoomSettings {
    pub tick_rate: u32,
    /// Ticks between snapshots in free-running mode.
    pub snapshot_every: u64,
    pub grace_ticks: u64,
    pub lockstep: bool,
}

impl Default for RoomSettings {
    fn default() -> Self {
        RoomSettings { tick_rate: 20, snapshot_every: 2, grace_ticks: 1200, lockstep: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Delivery {
    pub to: ConnId,
    pub msg: Message,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RosterEntry {
    pub player_name: String,
    pub role: Role,
}

/// One line of `results.jsonl`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameResult {
    pub room: String,
    pub roster: Vec<RosterEntry>,
    pub seed: u64,
    pub outcome: &'static str,
    pub stage_reached: u32,
    pub final_scores: Vec<ScoreEntry>,
    pub duration_ticks: u64,
}

#[derive(Clone, Debug)]
struct Slot {
    name: String,
    conn: Option<ConnId>,
    role: Option<Role>,
}

#[derive(Debug)]
pub struct Room {
    name: String,
    settings: RoomSettings,
    stages: Arc<Vec<StageSpec>>,
    seed: u64,
    /// Join order; index 0 is the creator.
    slots: Vec<Slot>,
    game: Option<GameState>,
    submitted: BTreeSet<String>,
    result: Option<GameResult>,
}

fn error(to: ConnId, code: ErrorCode, detail: impl Into<String>) -> Vec<Delivery> {
    vec![Delivery { to, msg: Message::error(code, detail) }]
}

impl Room {
    pub fn new(
        name: &str,
        settings: RoomSettings,
        stages: Arc<Vec<StageSpec>>,
        seed: u64,
        creator: &str,
        conn: ConnId,
    ) -> (Room, Vec<Delivery>) {
        let room = Room {
            name: name.to_string(),
            settings,
            stages,
            seed,
            slots: vec![Slot { name: creator.to_string(), conn: Some(conn), role: None }],
            game: None,
            submitted: BTreeSet::new(),
            result: None,
        };
        let out = room.broadcast(room.room_state());
        (room, out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn game(&self) -> Option<&GameState> {
        self.game.as_ref()
    }

    pub fn started(&self) -> bool {
        self.game.is_some()
    }

    pub fn creator(&self) -> Option<&str> {
        self.slots.first().map(|s| s.name.as_str())
    }

    pub fn member_count(&self) -> usize {
        self.slots.len()
    }

    pub fn running(&self) -> bool {
        self.game.as_ref().is_some_and(|g| !g.phase().is_over())
    }

    pub fn has_connected(&self) -> bool {
        self.slots.iter().any(|s| s.conn.is_some())
    }

    /// The room can be dropped: nobody is connected and no game is in play.
    pub fn is_dead(&self) -> bool {
        !self.has_connected() && !self.running()
    }

    /// Free-running rooms tick on the timer. Lockstep rooms tick on input,
    /// falling back to the timer when nobody is connected so a grace period
    /// can still run out.
    pub fn wants_timer_tick(&self) -> bool {
        self.running() && (!self.settings.lockstep || !self.has_connected())
    }

    /// Lockstep: every connected player has sent an input since the last tick.
    pub fn lockstep_ready(&self) -> bool {
        self.settings.lockstep
            && self.running()
            && self.has_connected()
            && self.slots.iter().filter(|s| s.conn.is_some()).all(|s| self.submitted.contains(&s.name))
    }

    pub fn take_result(&mut self) -> Option<GameResult> {
        self.result.take()
    }

    fn slot_of(&self, conn: ConnId) -> Option<usize> {
        self.slots.iter().position(|s| s.conn == Some(conn))
    }

    fn conns(&self) -> impl Iterator<Item = ConnId> + '_ {
        self.slots.iter().filter_map(|s| s.conn)
    }

    fn broadcast(&self, msg: Message) -> Vec<Delivery> {
        self.conns().map(|to| Delivery { to, msg: msg.clone() }).collect()
    }

    pub fn room_state(&self) -> Message {
        Message::RoomState {
            room_name: self.name.clone(),
            members: self
                .slots
                .iter()
                .enumerate()
                .map(|(i, s)| Member { player_name: s.name.clone(), role: s.role, is_creator: i == 0 })
                .collect(),
            started: self.started(),
        }
    }

    /// Adds a lobby member, or reattaches a disconnected player mid-game.
    pub fn join(&mut self, conn: ConnId, player_name: &str) -> Result<Vec<Delivery>, (ErrorCode, String)> {
        let existing = self.slots.iter().position(|s| s.name == player_name);
        if let Some(game) = self.game.as_mut() {
            let Some(i) = existing else {
                return Err((ErrorCode::AlreadyStarted, format!("room {} is already playing", self.name)));
            };
            if self.slots[i].conn.is_some() {
                return Err((ErrorCode::NameTaken, format!("{player_name} is already connected")));
            }
            if game.phase().is_over() {
                return Err((ErrorCode::AlreadyStarted, "the game has ended".into()));
            }
            self.slots[i].conn = Some(conn);
            let events = game.set_connected(&PlayerId::new(player_name), true).unwrap_or_default();
            let tick = game.tick_count();
            let mut out = vec![Delivery { to: conn, msg: self.room_state() }];
            out.extend(self.route_events(tick, events));
            out.push(Delivery { to: conn, msg: self.snapshot_for(&self.slots[i].name) });
            return Ok(out);
        }
        if existing.is_some() {
            return Err((ErrorCode::NameTaken, format!("{player_name} is already in room {}", self.name)));
        }
        if self.slots.len() >= coopvax_core::state::MAX_PLAYERS {
            return Err((ErrorCode::RoomFull, format!("room {} already has 4 players", self.name)));
        }
        self.slots.push(Slot { name: player_name.to_string(), conn: Some(conn), role: None });
        Ok(self.broadcast(self.room_state()))
    }

    /// Connection lost or `leave_room`. Lobby members are removed (the oldest
    /// remaining member inherits the room); players in a game are flagged
    /// disconnected and may rejoin within the grace period.
    pub fn disconnect(&mut self, conn: ConnId) -> Vec<Delivery> {
        let Some(i) = self.slot_of(conn) else {
            return Vec::new();
        };
        match self.game.as_mut() {
            None => {
                self.slots.remove(i);
                self.broadcast(self.room_state())
            }
            Some(game) => {
                self.slots[i].conn = None;
                self.submitted.remove(&self.slots[i].name);
                if game.phase().is_over() {
                    return Vec::new();
                }
                let events = game.set_connected(&PlayerId::new(self.slots[i].name.clone()), false).unwrap_or_default();
                let tick = game.tick_count();
                self.route_events(tick, events)
            }
        }
    }

    /// Handles a decoded frame from a member connection.
    pub fn handle(&mut self, conn: ConnId, msg: Message) -> Vec<Delivery> {
        let Some(i) = self.slot_of(conn) else {
            return error(conn, ErrorCode::NotInRoom, "not a member of this room");
        };
        match msg {
            Message::SelectAvatar { role } => self.select_avatar(i, conn, role),
            Message::StartGame => self.start(i, conn),
            Message::Input { command } => self.input(i, conn, command),
            Message::Chat { text } => {
                self.broadcast(Message::ChatRelay { player_name: self.slots[i].name.clone(), text })
            }
            Message::LeaveRoom => self.disconnect(conn),
            Message::CreateRoom { .. } | Message::JoinRoom { .. } => {
                error(conn, ErrorCode::AlreadyInRoom, format!("already in room {}", self.name))
            }
            other => error(conn, ErrorCode::UnexpectedMessage, format!("{} is sent by the server", other.type_name())),
        }
    }

    fn select_avatar(&mut self, i: usize, conn: ConnId, role: Role) -> Vec<Delivery> {
        if self.started() {
            return error(conn, ErrorCode::AlreadyStarted, "roles are fixed once the game starts");
        }
        if self.slots.iter().enumerate().any(|(j, s)| j != i && s.role == Some(role)) {
            return vec![Delivery { to: conn, msg: Message::AvatarRejected { role, reason: AvatarRejectReason::RoleTaken } }];
        }
        self.slots[i].role = Some(role);
        self.broadcast(self.room_state())
    }

    fn start(&mut self, i: usize, conn: ConnId) -> Vec<Delivery> {
        if self.started() {
            return error(conn, ErrorCode::AlreadyStarted, "the game is already running");
        }
        if i != 0 {
            return error(conn, ErrorCode::NotCreator, "only the room creator can start the game");
        }
        let unassigned: Vec<&str> = self.slots.iter().filter(|s| s.role.is_none()).map(|s| s.name.as_str()).collect();
        if !unassigned.is_empty() {
            return error(conn, ErrorCode::UnassignedRoles, format!("no role selected: {}", unassigned.join(", ")));
        }
        let roster = self.slots.iter().map(|s| (PlayerId::new(s.name.clone()), s.role.unwrap())).collect();
        let config = SimConfig { disconnect_grace_ticks: self.settings.grace_ticks };
        let game = match GameState::with_config(self.stages.as_ref().clone(), roster, self.seed, config) {
            Ok(g) => g,
            Err(e) => return error(conn, ErrorCode::StageLoadFailed, e.to_string()),
        };
        self.game = Some(game);
        let mut out = self.broadcast(self.room_state());
        for line in INSTRUCTIONS {
            out.extend(self.broadcast(Message::ChatRelay { player_name: SERVER_NAME.into(), text: line.into() }));
        }
        out.extend(self.snapshots());
        out
    }

    fn input(&mut self, i: usize, conn: ConnId, command: PlayerCommand) -> Vec<Delivery> {
        let Some(game) = self.game.as_mut() else {
            return error(conn, ErrorCode::NotRunning, "the game has not started");
        };
        let name = self.slots[i].name.clone();
        match game.queue_command(&PlayerId::new(name.clone()), command) {
            Ok(()) => {
                self.submitted.insert(name);
                Vec::new()
            }
            Err(SimError::InvalidCommand) => error(conn, ErrorCode::SchemaViolation, "invalid command"),
            Err(e) => error(conn, ErrorCode::NotRunning, e.to_string()),
        }
    }

    fn snapshot_for(&self, name: &str) -> Message {
        let game = self.game.as_ref().expect("snapshots need a game");
        Message::Snapshot {
            tick: game.tick_count(),
            view: Box::new(ClientView::project(game, Some(&PlayerId::new(name)))),
        }
    }

    fn snapshots(&self) -> Vec<Delivery> {
        self.slots
            .iter()
            .filter_map(|s| s.conn.map(|to| Delivery { to, msg: self.snapshot_for(&s.name) }))
            .collect()
    }

    fn route_events(&self, tick: u64, events: Vec<GameEvent>) -> Vec<Delivery> {
        let mut out = Vec::new();
        for e in events {
            match e.private_to() {
                Some(p) => {
                    if let Some(to) = self.slots.iter().find(|s| s.name == p.0).and_then(|s| s.conn) {
                        out.push(Delivery { to, msg: Message::Event { tick, game_event: e } });
                    }
                }
                None => out.extend(self.broadcast(Message::Event { tick, game_event: e })),
            }
        }
        out
    }

    /// Advances the game one tick: events, then snapshots when due, then
    /// `game_over` if the game just ended.
    pub fn tick(&mut self) -> Vec<Delivery> {
        let Some(game) = self.game.as_mut() else {
            return Vec::new();
        };
        let Ok(events) = game.tick() else {
            return Vec::new();
        };
        self.submitted.clear();
        let tick = game.tick_count();
        let over = game.phase().is_over();
        let mut out = self.route_events(tick, events);
        if over || self.settings.lockstep || tick % self.settings.snapshot_every == 0 {
            out.extend(self.snapshots());
        }
        if over {
            let (msg, result) = self.finish();
            out.extend(self.broadcast(msg));
            self.result = Some(result);
        }
        out
    }

    fn finish(&self) -> (Message, GameResult) {
        let game = self.game.as_ref().expect("finish needs a game");
        let won = game.phase() == coopvax_core::Phase::Won;
        let final_scores: Vec<ScoreEntry> = game
            .players()
            .iter()
            .map(|p| ScoreEntry { player_name: p.id.0.clone(), role: p.role, score: p.score })
            .collect();
        let stage_reached = game.stage().stage_index;
        let msg = Message::GameOver { won, tick: game.tick_count(), stage_reached, final_scores: final_scores.clone() };
        let result = GameResult {
            room: self.name.clone(),
            roster: self
                .slots
                .iter()
                .map(|s| RosterEntry { player_name: s.name.clone(), role: s.role.expect("started rooms have roles") })
                .collect(),
            seed: self.seed,
            outcome: if won { "won" } else { "lost" },
            stage_reached,
            final_scores,
            duration_ticks: game.tick_count(),
        };
        (msg, result)
    }
}
