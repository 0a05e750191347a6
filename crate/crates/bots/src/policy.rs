//! Bot policies. Each decision is a function of the current view and the
//! policy's own state (RNG, stuck memory), so equal seeds give equal command
//! streams whether the view came from the network or straight from the sim.

use coopvax_core::rng::splitmix64;
use coopvax_core::{Cell, PickupKind, PlayerCommand, PlayerId, Point, Role, SimRng};
use coopvax_protocol::{ClientView, PlayerView};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

/// Reach of role actions, matching the simulation.
const ACT_RANGE: f64 = 1.5;
/// Greedy bots grab a mask when unshielded and a virus is this close.
const MASK_ALERT: f64 = 4.0;
/// Greedy bots steer around viruses inside this radius.
const AVOID_RADIUS: f64 = 2.5;
const HEAL_BELOW: f64 = 45.0;
const HEALED_AT: f64 = 90.0;
/// Ticks without progress before a detour starts.
const STUCK_TICKS: u32 = 8;
const DETOUR_TICKS: u32 = 12;
/// Paths are recomputed at least this often.
const REPLAN_TICKS: u32 = 5;

const DIRS: [(i8, i8); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Greedy,
    Random,
    /// Fixed commands keyed by the tick of the view they answer.
    Scripted(Vec<(u64, PlayerCommand)>),
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyKind::Greedy => f.write_str("greedy"),
            PolicyKind::Random => f.write_str("random"),
            PolicyKind::Scripted(s) => write!(f, "scripted({} commands)", s.len()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PolicyParseError {
    #[error("unknown policy {0:?}; expected greedy, random or scripted:FILE")]
    Unknown(String),
    #[error("cannot read script {path}: {message}")]
    Script { path: String, message: String },
}

impl FromStr for PolicyKind {
    type Err = PolicyParseError;

    /// `greedy`, `random`, or `scripted:FILE` where FILE holds a JSON list of
    /// `[tick, command]` pairs.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "greedy" => Ok(PolicyKind::Greedy),
            "random" => Ok(PolicyKind::Random),
            other => match other.strip_prefix("scripted:") {
                Some(path) => {
                    let err = |message: String| PolicyParseError::Script { path: path.to_string(), message };
                    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
                    let script = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
                    Ok(PolicyKind::Scripted(script))
                }
                None => Err(PolicyParseError::Unknown(other.to_string())),
            },
        }
    }
}

/// Parses a comma-separated policy list.
pub fn parse_policies(list: &str) -> Result<Vec<PolicyKind>, PolicyParseError> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// Player name of roster slot `i`.
pub fn bot_name(i: usize) -> String {
    format!("bot{i}")
}

/// Role of roster slot `i`.
pub fn bot_role(i: usize) -> Role {
    Role::ALL[i]
}

/// Per-bot RNG seed derived from the game seed and slot.
pub fn bot_seed(game_seed: u64, slot: usize) -> u64 {
    splitmix64(game_seed ^ (slot as u64 + 1).wrapping_mul(0xA076_1D64_78BD_642F))
}

#[derive(Clone, Debug)]
pub struct Bot {
    pub name: String,
    kind: PolicyKind,
    rng: SimRng,
    last_pos: Option<Point>,
    stuck: u32,
    detour: Option<((i8, i8), u32)>,
    healing: bool,
    plan: Option<Plan>,
}

fn dist(a: Point, b: Point) -> f64 {
    a.distance(b)
}

impl Bot {
    pub fn new(name: impl Into<String>, kind: PolicyKind, seed: u64) -> Bot {
        Bot {
            name: name.into(),
            kind,
            rng: SimRng::seed_from_u64(seed),
            last_pos: None,
            stuck: 0,
            detour: None,
            healing: false,
            plan: None,
        }
    }

    pub fn kind(&self) -> &PolicyKind {
        &self.kind
    }

    /// The command answering `view`.
    pub fn decide(&mut self, view: &ClientView) -> PlayerCommand {
        match &self.kind {
            PolicyKind::Scripted(script) => script
                .iter()
                .find(|(t, _)| *t == view.tick)
                .map(|(_, c)| c.clone())
                .unwrap_or(PlayerCommand::Idle),
            PolicyKind::Random => self.random(),
            PolicyKind::Greedy => self.greedy(view),
        }
    }

    fn random(&mut self) -> PlayerCommand {
        if self.rng.chance(0.1) {
            return PlayerCommand::Act;
        }
        let dx = self.rng.below(3) as i8 - 1;
        let dy = self.rng.below(3) as i8 - 1;
        PlayerCommand::Move { dx, dy }.normalized().unwrap_or(PlayerCommand::Idle)
    }

    fn greedy(&mut self, view: &ClientView) -> PlayerCommand {
        let Some(me) = view.player(&self.name).cloned() else {
            return PlayerCommand::Idle;
        };
        if view.phase != coopvax_core::Phase::Running {
            self.last_pos = None;
            self.plan = None;
            return PlayerCommand::Idle;
        }
        if view.pending_trade.as_ref().is_some_and(|t| t.to == self.name) {
            return PlayerCommand::RespondTrade { accept: false };
        }
        let pos = me.position;
        let nearest_virus = view.viruses.iter().map(|v| dist(pos, v.position)).fold(f64::INFINITY, f64::min);
        if !me.shielded && me.sanitizer_count > 0 && nearest_virus <= ACT_RANGE {
            return PlayerCommand::UseSanitizer;
        }
        if self.target_in_reach(view, &me) {
            return PlayerCommand::Act;
        }
        let goals = self.destinations(view, &me, nearest_virus);
        if goals.is_empty() {
            return PlayerCommand::Idle;
        }
        self.steer(view, &me, &goals)
    }

    fn target_in_reach(&self, view: &ClientView, me: &PlayerView) -> bool {
        let pos = me.position;
        match me.role {
            Role::Citizen => false,
            Role::Doctor => {
                me.ammo > 0 && view.civilians.iter().any(|c| !c.treated && dist(c.cell.center(), pos) <= ACT_RANGE)
            }
            Role::SanitationWorker => me.ammo > 0 && view.viruses.iter().any(|v| dist(v.position, pos) <= ACT_RANGE),
            Role::LawEnforcer => view.crowds.iter().any(|c| !c.dispersed && dist(c.cell.center(), pos) <= ACT_RANGE),
        }
    }

    /// Candidate destinations in the highest-priority group that has any.
    fn destinations(&mut self, view: &ClientView, me: &PlayerView, nearest_virus: f64) -> Vec<Point> {
        let pos = me.position;
        let pickups = |kind: PickupKind| view.pickups.iter().filter(move |p| p.kind == kind).map(|p| p.cell.center());

        if me.health < HEAL_BELOW {
            self.healing = true;
        } else if me.health >= HEALED_AT {
            self.healing = false;
        }
        if self.healing {
            let healers: Vec<Point> = view.grid.camps.iter().map(|c| c.center()).chain(pickups(PickupKind::HealthVitamin)).collect();
            if !healers.is_empty() {
                return healers;
            }
        }
        if !me.shielded && nearest_virus <= MASK_ALERT {
            let masks: Vec<Point> = pickups(PickupKind::Mask).filter(|p| dist(*p, pos) <= 2.0 * MASK_ALERT).collect();
            if !masks.is_empty() {
                return masks;
            }
        }

        let mut targets: Vec<Point> = Vec::new();
        if me.items_collected < me.items_target {
            if me.role.uses_ammo() && me.ammo == 0 {
                let refill = if me.role == Role::Doctor { PickupKind::MedicineRefill } else { PickupKind::DisinfectantRefill };
                targets.extend(pickups(refill));
            } else {
                match me.role {
                    Role::Citizen => targets.extend(pickups(PickupKind::Grocery)),
                    Role::Doctor => targets.extend(view.civilians.iter().filter(|c| !c.treated).map(|c| c.cell.center())),
                    Role::SanitationWorker => targets.extend(view.viruses.iter().map(|v| v.position)),
                    Role::LawEnforcer => targets.extend(view.crowds.iter().filter(|c| !c.dispersed).map(|c| c.cell.center())),
                }
            }
        }
        if view.team_vaccines < view.vaccine_target {
            targets.extend(pickups(PickupKind::VaccinePart));
        }
        targets
    }

    /// Next point to head for on a shortest grid path to the nearest goal.
    fn waypoint(&mut self, view: &ClientView, pos: Point, goals: &[Point]) -> Option<Point> {
        let here = pos.cell();
        let stale = match &self.plan {
            None => true,
            Some(p) => {
                p.age >= REPLAN_TICKS
                    || !goals.contains(&p.goal)
                    || p.path.first().is_some_and(|c| (c.x - here.x).abs() > 1 || (c.y - here.y).abs() > 1)
            }
        };
        if stale {
            self.plan = plan_path(view, here, goals);
        }
        let plan = self.plan.as_mut()?;
        plan.age += 1;
        while plan.path.first() == Some(&here) {
            plan.path.remove(0);
        }
        Some(if plan.path.len() > 1 { plan.path[0].center() } else { plan.goal })
    }

    fn steer(&mut self, view: &ClientView, me: &PlayerView, goals: &[Point]) -> PlayerCommand {
        let pos = me.position;
        let progressed = self.last_pos.is_none_or(|last| dist(last, pos) > 0.01);
        self.last_pos = Some(pos);
        self.stuck = if progressed { 0 } else { self.stuck + 1 };

        if let Some((dir, left)) = self.detour {
            if left > 0 && progressed {
                self.detour = Some((dir, left - 1));
                return PlayerCommand::Move { dx: dir.0, dy: dir.1 };
            }
            self.detour = None;
            self.plan = None;
        }
        let Some(goal) = self.waypoint(view, pos, goals) else {
            return PlayerCommand::Idle;
        };
        let Some((gx, gy)) = pos.direction_to(goal) else {
            return PlayerCommand::Idle;
        };
        let (mut wx, mut wy) = (gx, gy);
        let avoid = !me.shielded && !(me.role == Role::SanitationWorker && me.ammo > 0);
        if avoid {
            for v in &view.viruses {
                let d = dist(v.position, pos);
                if d < AVOID_RADIUS && d > 0.0 {
                    let push = (AVOID_RADIUS - d) / AVOID_RADIUS * 2.0;
                    wx += (pos.x - v.position.x) / d * push;
                    wy += (pos.y - v.position.y) / d * push;
                }
            }
        }
        let score = |(dx, dy): (i8, i8)| {
            let len = (dx as f64).hypot(dy as f64);
            (dx as f64 * wx + dy as f64 * wy) / len
        };
        let open = |(dx, dy): (i8, i8)| {
            let len = (dx as f64).hypot(dy as f64);
            view.is_open(pos.offset(dx as f64 / len * 0.6, dy as f64 / len * 0.6).cell())
        };

        if self.stuck >= STUCK_TICKS {
            self.stuck = 0;
            let choices: Vec<(i8, i8)> = DIRS.iter().copied().filter(|d| open(*d)).collect();
            if !choices.is_empty() {
                let dir = choices[self.rng.below(choices.len() as u64) as usize];
                self.detour = Some((dir, DETOUR_TICKS));
                return PlayerCommand::Move { dx: dir.0, dy: dir.1 };
            }
        }

        // Near the goal, head straight in so pickups on the target cell land.
        if dist(pos, goal) < 0.3 {
            let dx = (goal.x - pos.x).signum() as i8 * ((goal.x - pos.x).abs() > 0.08) as i8;
            let dy = (goal.y - pos.y).signum() as i8 * ((goal.y - pos.y).abs() > 0.08) as i8;
            return PlayerCommand::Move { dx, dy }.normalized().unwrap_or(PlayerCommand::Idle);
        }
        let best = DIRS
            .iter()
            .copied()
            .filter(|d| open(*d))
            .max_by(|a, b| score(*a).total_cmp(&score(*b)));
        match best {
            Some((dx, dy)) => PlayerCommand::Move { dx, dy },
            None => PlayerCommand::Idle,
        }
    }
}

#[derive(Clone, Debug)]
struct Plan {
    goal: Point,
    /// Cells still to enter, ending with the goal's cell.
    path: Vec<Cell>,
    age: u32,
}

/// Breadth-first search over open cells from `start` to the nearest goal
/// cell. Diagonal steps need both side cells open.
fn plan_path(view: &ClientView, start: Cell, goals: &[Point]) -> Option<Plan> {
    let (w, h) = (view.grid.width as i32, view.grid.height as i32);
    let index = |c: Cell| (c.y * w + c.x) as usize;
    let inside = |c: Cell| c.x >= 0 && c.y >= 0 && c.x < w && c.y < h;
    if !inside(start) {
        return None;
    }
    let mut goal_at: Vec<Option<usize>> = vec![None; (w * h) as usize];
    for (i, g) in goals.iter().enumerate() {
        let c = g.cell();
        if inside(c) && goal_at[index(c)].is_none() {
            goal_at[index(c)] = Some(i);
        }
    }
    let mut parent: Vec<u32> = vec![u32::MAX; (w * h) as usize];
    parent[index(start)] = index(start) as u32;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        if let Some(g) = goal_at[index(c)] {
            let mut path = vec![c];
            let mut at = c;
            while at != start {
                let p = parent[index(at)] as i32;
                at = Cell::new(p % w, p / w);
                path.push(at);
            }
            path.pop();
            path.reverse();
            return Some(Plan { goal: goals[g], path, age: 0 });
        }
        for &(dx, dy) in &DIRS {
            let n = Cell::new(c.x + dx as i32, c.y + dy as i32);
            if !inside(n) || parent[index(n)] != u32::MAX || !view.is_open(n) {
                continue;
            }
            if dx != 0 && dy != 0 {
                let side_a = Cell::new(c.x + dx as i32, c.y);
                let side_b = Cell::new(c.x, c.y + dy as i32);
                if !view.is_open(side_a) || !view.is_open(side_b) {
                    continue;
                }
            }
            parent[index(n)] = index(c) as u32;
            queue.push_back(n);
        }
    }
    None
}

/// Builds the bot roster for a game: names `bot0..`, roles in canonical order.
pub fn roster_bots(policies: &[PolicyKind], game_seed: u64) -> Vec<Bot> {
    policies
        .iter()
        .enumerate()
        .map(|(i, k)| Bot::new(bot_name(i), k.clone(), bot_seed(game_seed, i)))
        .collect()
}

/// Roster for `new_game`.
pub fn roster(n: usize) -> Vec<(PlayerId, Role)> {
    (0..n).map(|i| (PlayerId::new(bot_name(i)), bot_role(i))).collect()
}

