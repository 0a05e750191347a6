//! Bots as TCP clients of a live server: full lobby flow, then one task per
//! bot answering every snapshot with one input.

use crate::policy::{bot_name, bot_role, roster_bots, Bot, PolicyKind};
use crate::report::{EventTally, GameReport, Outcome, RunReport};
use coopvax_core::GameEvent;
use coopvax_protocol::{decode_str, encode_line, ErrorCode, Message, ScoreEntry};
use std::net::SocketAddr;
use std::time::Duration;
use thiserror::Error;
use tokio::io::{AsyncBufReadExt, AsyncWriteExt, BufReader};
use tokio::net::tcp::{OwnedReadHalf, OwnedWriteHalf};
use tokio::net::TcpStream;

/// Garbage line sent in fault-injection mode.
pub const FAULT_FRAME: &[u8] = b"{\"v\":1,\"type\":\"input\",\"command\":\n";

#[derive(Clone, Debug)]
pub struct NetOptions {
    /// Bots disconnect once a snapshot reaches this tick.
    pub max_ticks: u64,
    /// Send a malformed frame after every n-th snapshot.
    pub fault_every: Option<u64>,
    /// Close bot `slot`'s connection at `tick` without reconnecting.
    pub drop_bot: Option<(usize, u64)>,
    /// Longest wait for any single frame.
    pub read_timeout: Duration,
}

impl Default for NetOptions {
    fn default() -> Self {
        NetOptions {
            max_ticks: crate::headless::DEFAULT_MAX_TICKS,
            fault_every: None,
            drop_bot: None,
            read_timeout: Duration::from_secs(30),
        }
    }
}

#[derive(Debug, Error)]
pub enum NetError {
    #[error("cannot connect to {addr}: {source}")]
    ConnectFailed {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("{bot}: protocol error: {detail} (frame {frame:?})")]
    Protocol { bot: String, detail: String, frame: String },
    #[error("{bot}: server refused {step}: {code}: {detail}")]
    Refused { bot: String, step: &'static str, code: String, detail: String },
    #[error("{bot}: no frame within {0:?}", .timeout)]
    Timeout { bot: String, timeout: Duration },
    #[error("{bot}: connection lost: {detail}")]
    Closed { bot: String, detail: String },
    #[error("roster must have 1-4 bots, got {0}")]
    Roster(usize),
}

/// What one bot saw by the end of the game.
#[derive(Clone, Debug)]
pub struct BotResult {
    pub name: String,
    pub game_over: Option<(bool, u64, u32, Vec<ScoreEntry>)>,
    pub stages_cleared: Vec<u32>,
    pub errors_received: Vec<ErrorCode>,
    pub dropped: bool,
    pub last_tick: u64,
    /// Every game event received, with its tick.
    pub events: Vec<(u64, GameEvent)>,
    tally: EventTally,
}

#[derive(Clone, Debug)]
pub struct NetworkedRun {
    pub report: RunReport,
    pub bots: Vec<BotResult>,
}

struct Conn {
    name: String,
    reader: BufReader<OwnedReadHalf>,
    writer: OwnedWriteHalf,
    timeout: Duration,
}

impl Conn {
    async fn open(addr: SocketAddr, name: String, timeout: Duration) -> Result<Conn, NetError> {
        let stream = TcpStream::connect(addr).await.map_err(|source| NetError::ConnectFailed { addr, source })?;
        let _ = stream.set_nodelay(true);
        let (r, w) = stream.into_split();
        Ok(Conn { name, reader: BufReader::new(r), writer: w, timeout })
    }

    fn closed(&self, detail: impl ToString) -> NetError {
        NetError::Closed { bot: self.name.clone(), detail: detail.to_string() }
    }

    async fn send_raw(&mut self, bytes: &[u8]) -> Result<(), NetError> {
        self.writer.write_all(bytes).await.map_err(|e| self.closed(e))
    }

    async fn send(&mut self, msg: &Message) -> Result<(), NetError> {
        let bytes = encode_line(msg).map_err(|e| NetError::Protocol {
            bot: self.name.clone(),
            detail: e.to_string(),
            frame: format!("{msg:?}"),
        })?;
        self.send_raw(&bytes).await
    }

    async fn recv(&mut self) -> Result<Message, NetError> {
        let mut line = String::new();
        let read = tokio::time::timeout(self.timeout, self.reader.read_line(&mut line))
            .await
            .map_err(|_| NetError::Timeout { bot: self.name.clone(), timeout: self.timeout })?;
        match read {
            Ok(0) => Err(self.closed("server closed the connection")),
            Ok(_) => decode_str(&line).map_err(|e| {
                tracing::warn!(bot = %self.name, frame = %line.trim_end(), error = %e, "undecodable frame");
                NetError::Protocol { bot: self.name.clone(), detail: e.to_string(), frame: line.trim_end().to_string() }
            }),
            Err(e) => Err(self.closed(e)),
        }
    }

    /// Reads until `pick` accepts a frame. Error frames abort with `step`.
    async fn expect<T>(&mut self, step: &'static str, pick: impl Fn(&Message) -> Option<T>) -> Result<T, NetError> {
        loop {
            let msg = self.recv().await?;
            if let Some(t) = pick(&msg) {
                return Ok(t);
            }
            match msg {
                Message::Error { code, detail } => {
                    return Err(NetError::Refused { bot: self.name.clone(), step, code: code.to_string(), detail })
                }
                Message::AvatarRejected { role, .. } => {
                    return Err(NetError::Refused {
                        bot: self.name.clone(),
                        step,
                        code: "role_taken".into(),
                        detail: role.to_string(),
                    })
                }
                _ => {}
            }
        }
    }
}

async fn lobby(addr: SocketAddr, room: &str, n: usize, opts: &NetOptions) -> Result<Vec<Conn>, NetError> {
    let mut conns = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = Conn::open(addr, bot_name(i), opts.read_timeout).await?;
        let msg = if i == 0 {
            Message::CreateRoom { room_name: room.into(), player_name: bot_name(i) }
        } else {
            Message::JoinRoom { room_name: room.into(), player_name: bot_name(i) }
        };
        c.send(&msg).await?;
        let step = if i == 0 { "create_room" } else { "join_room" };
        c.expect(step, |m| matches!(m, Message::RoomState { .. }).then_some(())).await?;
        conns.push(c);
    }
    for (i, c) in conns.iter_mut().enumerate() {
        let role = bot_role(i);
        let me = bot_name(i);
        c.send(&Message::SelectAvatar { role }).await?;
        c.expect("select_avatar", |m| match m {
            Message::RoomState { members, .. } => {
                members.iter().any(|x| x.player_name == me && x.role == Some(role)).then_some(())
            }
            _ => None,
        })
        .await?;
    }
    conns[0].send(&Message::StartGame).await?;
    Ok(conns)
}

async fn play(mut conn: Conn, mut bot: Bot, slot: usize, players: Vec<String>, opts: NetOptions) -> Result<BotResult, NetError> {
    let mut result = BotResult {
        name: conn.name.clone(),
        game_over: None,
        stages_cleared: Vec::new(),
        errors_received: Vec::new(),
        dropped: false,
        last_tick: 0,
        events: Vec::new(),
        tally: EventTally::new(players),
    };
    let mut snapshots = 0u64;
    loop {
        match conn.recv().await? {
            Message::Snapshot { tick, view } => {
                result.last_tick = tick;
                if opts.drop_bot.is_some_and(|(s, t)| s == slot && tick >= t) {
                    result.dropped = true;
                    return Ok(result);
                }
                if tick >= opts.max_ticks {
                    return Ok(result);
                }
                let cmd = bot.decide(&view);
                conn.send(&Message::Input { command: cmd }).await?;
                snapshots += 1;
                if opts.fault_every.is_some_and(|n| snapshots.is_multiple_of(n)) {
                    conn.send_raw(FAULT_FRAME).await?;
                }
            }
            Message::Event { tick, game_event } => {
                if let GameEvent::StageCleared { stage_index } = game_event {
                    result.stages_cleared.push(stage_index);
                }
                result.tally.record(tick, &game_event);
                result.events.push((tick, game_event));
            }
            Message::Error { code, detail } => {
                if opts.fault_every.is_none() {
                    tracing::warn!(bot = %conn.name, %code, %detail, "server error");
                }
                result.errors_received.push(code);
            }
            Message::GameOver { won, tick, stage_reached, final_scores } => {
                result.last_tick = tick;
                result.game_over = Some((won, tick, stage_reached, final_scores));
                return Ok(result);
            }
            _ => {}
        }
    }
}

/// Plays one game on the server at `addr` in room `room`. The server decides
/// the game seed; `seed` drives the bots and is recorded in the report.
pub async fn run_networked(
    addr: SocketAddr,
    room: &str,
    policies: &[PolicyKind],
    seed: u64,
    opts: &NetOptions,
) -> Result<NetworkedRun, NetError> {
    let n = policies.len();
    if !(1..=4).contains(&n) {
        return Err(NetError::Roster(n));
    }
    let conns = lobby(addr, room, n, opts).await?;
    let players: Vec<String> = (0..n).map(bot_name).collect();
    let tasks: Vec<_> = conns
        .into_iter()
        .zip(roster_bots(policies, seed))
        .enumerate()
        .map(|(slot, (conn, bot))| tokio::spawn(play(conn, bot, slot, players.clone(), opts.clone())))
        .collect();
    let mut bots = Vec::with_capacity(n);
    for t in tasks {
        bots.push(t.await.expect("bot task panicked")?);
    }
    let reporter = bots.iter().find(|b| !b.dropped).unwrap_or(&bots[0]);
    let (outcome, ticks, stage_reached, final_scores) = match &reporter.game_over {
        Some((won, tick, stage, scores)) => {
            (if *won { Outcome::Won } else { Outcome::Lost }, *tick, *stage, scores.clone())
        }
        None => (Outcome::TimedOut, reporter.last_tick, reporter.stages_cleared.last().map_or(1, |s| s + 1), Vec::new()),
    };
    let game = GameReport {
        seed,
        outcome,
        ticks,
        stage_reached,
        infections: reporter.tally.infections.clone(),
        pickups: reporter.tally.pickups.clone(),
        stage_clear_ticks: reporter.tally.stage_clear_ticks.clone(),
        final_scores,
        final_state_hash: None,
    };
    let report = RunReport::new("networked", policies.iter().map(|p| p.to_string()).collect(), vec![game]);
    Ok(NetworkedRun { report, bots })
}
