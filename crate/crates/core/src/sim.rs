//! Tick pipeline and player actions.

use crate::command::{move_vector, PlayerCommand};
use crate::error::SimError;
use crate::event::{GameEvent, LossReason, Rejection, TradeCancel};
use crate::geom::Point;
use crate::map::WorldMap;
use crate::model::{PickupKind, PlayerId, Role};
use crate::rules::{self, MAX_HEALTH, MAX_MASK};
use crate::state::{Contact, GameState, Holdings, Phase, TradeOffer};

/// The eight compass steps used for random virus wandering, clockwise from
/// east.
const WANDER_DIRS: [(i8, i8); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

/// Moves `from` by `(dx, dy)`, sliding along an axis when the full step would
/// enter a wall or leave the grid. Stays put when both axes are blocked.
pub fn slide_move(map: &WorldMap, from: Point, dx: f64, dy: f64) -> Point {
    let full = from.offset(dx, dy);
    if map.is_open(full.cell()) {
        return full;
    }
    if dx != 0.0 {
        let x_only = from.offset(dx, 0.0);
        if map.is_open(x_only.cell()) {
            return x_only;
        }
    }
    if dy != 0.0 {
        let y_only = from.offset(0.0, dy);
        if map.is_open(y_only.cell()) {
            return y_only;
        }
    }
    from
}

fn rejection_for(err: &SimError) -> Rejection {
    match err {
        SimError::InsufficientPoints => Rejection::InsufficientPoints,
        SimError::TradePending => Rejection::TradePending,
        SimError::TradeExpired => Rejection::TradeExpired,
        SimError::UnknownTarget(_) => Rejection::UnknownTarget,
        SimError::TargetDisconnected => Rejection::TargetDisconnected,
        SimError::SelfTrade => Rejection::SelfTrade,
        SimError::NoFreeRole => Rejection::NoFreeRole,
        _ => Rejection::NoPendingTrade,
    }
}

impl GameState {
    /// Records `cmd` for the next tick, replacing any command the player
    /// already queued this tick.
    pub fn queue_command(&mut self, id: &PlayerId, cmd: PlayerCommand) -> Result<(), SimError> {
        self.player_index(id)?;
        if !matches!(self.phase, Phase::Running | Phase::StageCleared) {
            return Err(SimError::NotRunning);
        }
        let cmd = cmd.normalized().ok_or(SimError::InvalidCommand)?;
        self.queued.insert(id.clone(), cmd);
        Ok(())
    }

    /// Advances one tick and returns the events it produced.
    ///
    /// Order: moves, role actions and sanitizer use, crowd spawns and virus
    /// movement, contact damage, meter decay, camp healing, pickups, trades,
    /// then loss / stage-clear evaluation. During the post-clear intermission
    /// the tick loads the next stage instead and queued commands are dropped.
    pub fn tick(&mut self) -> Result<Vec<GameEvent>, SimError> {
        match self.phase {
            Phase::Running => {}
            Phase::StageCleared => {
                self.tick += 1;
                self.phase = Phase::Running;
                return Ok(self.load_stage(self.stage_pos + 1));
            }
            Phase::Won | Phase::Lost => return Err(SimError::NotRunning),
        }
        self.tick += 1;
        self.stage_tick += 1;
        let commands = std::mem::take(&mut self.queued);
        let mut events = Vec::new();

        self.apply_moves(&commands);
        for idx in 0..self.players.len() {
            match commands.get(&self.players[idx].id) {
                Some(PlayerCommand::Act) => events.extend(self.role_action_at(idx)),
                Some(PlayerCommand::UseSanitizer) => events.extend(self.sanitizer_at(idx)),
                _ => {}
            }
        }
        self.spawn_from_crowds(&mut events);
        for vi in 0..self.viruses.len() {
            if self.viruses[vi].alive {
                self.viruses[vi].position = self.virus_step(vi);
            }
        }
        self.resolve_contacts(&mut events);
        for p in &mut self.players {
            p.mask_meter = (p.mask_meter - rules::MASK_DECAY_PER_TICK).max(0.0);
            p.shield_ticks = p.shield_ticks.saturating_sub(1);
        }
        self.heal_at_camps(&mut events);
        self.collect_pickups(&mut events);
        self.process_trades(&commands, &mut events);
        self.evaluate(&mut events);
        Ok(events)
    }

    fn apply_moves(&mut self, commands: &std::collections::BTreeMap<PlayerId, PlayerCommand>) {
        let map = &self.stages[self.stage_pos].map;
        for p in &mut self.players {
            if let Some(&PlayerCommand::Move { dx, dy }) = commands.get(&p.id) {
                let (ux, uy) = move_vector(dx, dy);
                let step = rules::PLAYER_STEP * rules::speed_multiplier(p.health);
                p.position = slide_move(map, p.position, ux * step, uy * step);
            }
        }
    }

    /// Next position of virus `index`: straight-line pursuit of the nearest
    /// player within the aggro radius (ties to the earliest roster slot),
    /// otherwise a random 8-way step drawn from the game RNG.
    pub fn virus_step(&mut self, index: usize) -> Point {
        let v = &self.viruses[index];
        let step = rules::virus_step_length(v.strain_level);
        let target = self
            .players
            .iter()
            .map(|p| (v.position.distance(p.position), p.position))
            .filter(|(d, _)| *d <= rules::AGGRO_RADIUS)
            .min_by(|a, b| a.0.total_cmp(&b.0));
        let from = v.position;
        let (dx, dy) = match target {
            Some((_, at)) => match from.direction_to(at) {
                Some((ux, uy)) => (ux * step, uy * step),
                None => return from,
            },
            None => {
                let (wx, wy) = WANDER_DIRS[self.rng.below(8) as usize];
                let (ux, uy) = move_vector(wx, wy);
                (ux * step, uy * step)
            }
        };
        slide_move(&self.stages[self.stage_pos].map, from, dx, dy)
    }

    fn spawn_from_crowds(&mut self, events: &mut Vec<GameEvent>) {
        if !self.stage_tick.is_multiple_of(rules::CROWD_SPAWN_TICKS) {
            return;
        }
        let strain = self.stages[self.stage_pos].strain_level;
        for crowd in self.crowds.iter().filter(|c| !c.dispersed) {
            let id = self.next_virus_id;
            self.next_virus_id += 1;
            self.viruses.push(crate::state::VirusState {
                id,
                position: crowd.cell.center(),
                strain_level: strain,
                alive: true,
            });
            events.push(GameEvent::VirusSpawned { virus: id, cell: crowd.cell, strain });
        }
    }

    fn resolve_contacts(&mut self, events: &mut Vec<GameEvent>) {
        let now = self.tick;
        for v in self.viruses.iter().filter(|v| v.alive) {
            for (pi, p) in self.players.iter_mut().enumerate() {
                if p.shielded() || v.position.distance(p.position) > rules::CONTACT_RADIUS {
                    continue;
                }
                let last = self.contacts.iter_mut().find(|c| c.virus == v.id && c.player == pi);
                match last {
                    Some(c) if now - c.tick < rules::CONTACT_COOLDOWN_TICKS => continue,
                    Some(c) => c.tick = now,
                    None => self.contacts.push(Contact { virus: v.id, player: pi, tick: now }),
                }
                let damage = rules::contact_damage(v.strain_level, self.vaccinated_through);
                p.health = (p.health - damage).max(0.0);
                events.push(GameEvent::PlayerInfected {
                    player: p.id.clone(),
                    virus: v.id,
                    damage,
                    health: p.health,
                });
            }
        }
    }

    fn heal_at_camps(&mut self, events: &mut Vec<GameEvent>) {
        let camps = &self.stages[self.stage_pos].map.camps;
        for p in &mut self.players {
            if p.health >= MAX_HEALTH {
                continue;
            }
            let inside = camps.iter().any(|c| c.center().distance(p.position) <= rules::CAMP_RADIUS);
            if inside {
                let amount = rules::CAMP_HEAL_PER_TICK.min(MAX_HEALTH - p.health);
                p.health += amount;
                events.push(GameEvent::PlayerHealed { player: p.id.clone(), amount, health: p.health });
            }
        }
    }

    fn collect_pickups(&mut self, events: &mut Vec<GameEvent>) {
        for p in &mut self.players {
            let cell = p.position.cell();
            let role = p.role;
            let mut i = 0;
            while i < self.remaining_pickups.len() {
                let pk = self.remaining_pickups[i];
                if pk.cell != cell || !pk.kind.collectible_by(role) {
                    i += 1;
                    continue;
                }
                self.remaining_pickups.remove(i);
                *self.collected.entry(pk.kind).or_insert(0) += 1;
                match pk.kind {
                    PickupKind::Grocery => {
                        p.items_collected += 1;
                        p.score += rules::GOAL_POINTS;
                    }
                    PickupKind::MedicineRefill | PickupKind::DisinfectantRefill => {
                        p.ammo += rules::REFILL_AMMO;
                    }
                    PickupKind::HealthVitamin => {
                        p.health = (p.health + rules::VITAMIN_HEAL).min(MAX_HEALTH);
                    }
                    PickupKind::VaccinePart => {
                        self.team_vaccines += 1;
                        p.score += rules::GOAL_POINTS;
                    }
                    PickupKind::Mask => {
                        p.mask_meter = MAX_MASK;
                        p.score += rules::SAFETY_POINTS;
                    }
                    PickupKind::Sanitizer => {
                        p.sanitizer_count += 1;
                        p.score += rules::SAFETY_POINTS;
                    }
                }
                events.push(GameEvent::PickupCollected {
                    player: p.id.clone(),
                    pickup: pk.id,
                    item: pk.kind,
                    cell: pk.cell,
                });
            }
        }
    }

    /// Performs the acting player's role action immediately. Failures such as
    /// an empty magazine come back as a private `ActionRejected` event.
    pub fn apply_role_action(&mut self, id: &PlayerId) -> Result<Vec<GameEvent>, SimError> {
        let idx = self.player_index(id)?;
        if self.phase != Phase::Running {
            return Err(SimError::NotRunning);
        }
        Ok(self.role_action_at(idx))
    }

    fn role_action_at(&mut self, idx: usize) -> Vec<GameEvent> {
        let p = &self.players[idx];
        let (pos, role, id) = (p.position, p.role, p.id.clone());
        let reject = |reason| vec![GameEvent::ActionRejected { player: id.clone(), reason }];
        let in_range = |cell: crate::geom::Cell| cell.center().distance(pos);
        match role {
            Role::Citizen => Vec::new(),
            Role::Doctor => {
                if self.players[idx].ammo == 0 {
                    return reject(Rejection::NoAmmo);
                }
                let target = self
                    .civilians
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.treated)
                    .map(|(i, c)| (in_range(c.cell), i))
                    .filter(|(d, _)| *d <= rules::ACTION_RANGE)
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                let Some((_, ci)) = target else {
                    return reject(Rejection::NoTarget);
                };
                self.civilians[ci].treated = true;
                let p = &mut self.players[idx];
                p.ammo -= 1;
                p.items_collected += 1;
                p.score += rules::GOAL_POINTS;
                vec![GameEvent::CivilianTreated { player: id, cell: self.civilians[ci].cell }]
            }
            Role::SanitationWorker => {
                if self.players[idx].ammo == 0 {
                    return reject(Rejection::NoAmmo);
                }
                let mut events = Vec::new();
                for v in &mut self.viruses {
                    if v.alive && v.position.distance(pos) <= rules::ACTION_RANGE {
                        v.alive = false;
                        events.push(GameEvent::VirusKilled { virus: v.id, player: id.clone() });
                    }
                }
                if events.is_empty() {
                    return reject(Rejection::NoTarget);
                }
                let kills = events.len() as u32;
                let p = &mut self.players[idx];
                p.ammo -= 1;
                p.items_collected += kills;
                p.score += rules::GOAL_POINTS * kills;
                events
            }
            Role::LawEnforcer => {
                let target = self
                    .crowds
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.dispersed)
                    .map(|(i, c)| (in_range(c.cell), i))
                    .filter(|(d, _)| *d <= rules::ACTION_RANGE)
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                let Some((_, ci)) = target else {
                    return reject(Rejection::NoTarget);
                };
                self.crowds[ci].dispersed = true;
                let p = &mut self.players[idx];
                p.items_collected += 1;
                p.score += rules::GOAL_POINTS;
                vec![GameEvent::CrowdDispersed { player: id, cell: self.crowds[ci].cell }]
            }
        }
    }

    fn sanitizer_at(&mut self, idx: usize) -> Vec<GameEvent> {
        let p = &mut self.players[idx];
        if p.sanitizer_count == 0 {
            return vec![GameEvent::ActionRejected { player: p.id.clone(), reason: Rejection::NoSanitizer }];
        }
        p.sanitizer_count -= 1;
        p.shield_ticks += rules::SANITIZER_SHIELD_TICKS;
        vec![GameEvent::ShieldActivated { player: p.id.clone(), ticks: p.shield_ticks }]
    }

    fn process_trades(
        &mut self,
        commands: &std::collections::BTreeMap<PlayerId, PlayerCommand>,
        events: &mut Vec<GameEvent>,
    ) {
        if let Some(offer) = &self.pending_trade {
            if self.tick > offer.expires_at_tick {
                let offer = self.pending_trade.take().expect("checked above");
                events.push(GameEvent::TradeCancelled {
                    from: offer.from_player,
                    to: offer.to_player,
                    reason: TradeCancel::Expired,
                });
            }
        }
        let order: Vec<PlayerId> = self.players.iter().map(|p| p.id.clone()).collect();
        for id in &order {
            if let Some(&PlayerCommand::RespondTrade { accept }) = commands.get(id) {
                let addressed = self.pending_trade.as_ref().is_some_and(|o| &o.to_player == id);
                let result = if addressed {
                    self.resolve_trade(accept)
                } else {
                    Err(SimError::NoPendingTrade)
                };
                match result {
                    Ok(evs) => events.extend(evs),
                    Err(e) => events.push(GameEvent::ActionRejected { player: id.clone(), reason: rejection_for(&e) }),
                }
            }
        }
        for id in &order {
            if let Some(PlayerCommand::ProposeTrade { target, points, role }) = commands.get(id) {
                match self.propose_trade(id, target, *points, *role) {
                    Ok(evs) => events.extend(evs),
                    Err(e) => events.push(GameEvent::ActionRejected { player: id.clone(), reason: rejection_for(&e) }),
                }
            }
        }
    }

    /// Opens a trade offer, or in a single-player game switches the player to
    /// a free role for a flat cost.
    pub fn propose_trade(
        &mut self,
        from: &PlayerId,
        target: &PlayerId,
        points: u32,
        role: Option<Role>,
    ) -> Result<Vec<GameEvent>, SimError> {
        let fi = self.player_index(from)?;
        if !matches!(self.phase, Phase::Running) {
            return Err(SimError::NotRunning);
        }
        if from == target {
            return self.solo_switch(fi, role);
        }
        let ti = self
            .player_index(target)
            .map_err(|_| SimError::UnknownTarget(target.clone()))?;
        if self.pending_trade.is_some() {
            return Err(SimError::TradePending);
        }
        if points == 0 || points > self.players[fi].score {
            return Err(SimError::InsufficientPoints);
        }
        if !self.players[ti].connected {
            return Err(SimError::TargetDisconnected);
        }
        let offer = TradeOffer {
            from_player: from.clone(),
            to_player: target.clone(),
            points_offered: points,
            expires_at_tick: self.tick + rules::TRADE_TTL_TICKS,
        };
        let ev = GameEvent::TradeProposed {
            from: from.clone(),
            to: target.clone(),
            points,
            expires_at_tick: offer.expires_at_tick,
        };
        self.pending_trade = Some(offer);
        Ok(vec![ev])
    }

    fn solo_switch(&mut self, idx: usize, role: Option<Role>) -> Result<Vec<GameEvent>, SimError> {
        if self.players.len() != 1 {
            return Err(SimError::SelfTrade);
        }
        let current = self.players[idx].role;
        let new_role = match role {
            Some(r) if r != current => r,
            Some(_) => return Err(SimError::NoFreeRole),
            None => Role::ALL.into_iter().find(|r| *r != current).ok_or(SimError::NoFreeRole)?,
        };
        if self.players[idx].score < rules::SOLO_SWITCH_COST {
            return Err(SimError::InsufficientPoints);
        }
        let p = &mut self.players[idx];
        self.stash.insert(current, Holdings { ammo: p.ammo, progress: p.items_collected });
        let restored = self.stash.remove(&new_role).unwrap_or(Holdings {
            ammo: if new_role.uses_ammo() { rules::STARTING_AMMO } else { 0 },
            progress: 0,
        });
        p.role = new_role;
        p.ammo = restored.ammo;
        p.items_collected = restored.progress;
        p.score -= rules::SOLO_SWITCH_COST;
        Ok(vec![GameEvent::TradeCompleted {
            from: p.id.clone(),
            to: p.id.clone(),
            points: rules::SOLO_SWITCH_COST,
            from_role: new_role,
            to_role: current,
        }])
    }

    /// Settles the pending offer. On acceptance the two players exchange
    /// roles, ammo and goal progress, and the offered points move from
    /// proposer to acceptor. Declining just clears the offer.
    pub fn resolve_trade(&mut self, accepted: bool) -> Result<Vec<GameEvent>, SimError> {
        let offer = self.pending_trade.take().ok_or(SimError::NoPendingTrade)?;
        let cancelled = |reason| GameEvent::TradeCancelled {
            from: offer.from_player.clone(),
            to: offer.to_player.clone(),
            reason,
        };
        if self.tick > offer.expires_at_tick {
            return Err(SimError::TradeExpired);
        }
        let fi = self.player_index(&offer.from_player)?;
        let ti = self.player_index(&offer.to_player)?;
        if !self.players[fi].connected || !self.players[ti].connected {
            return Ok(vec![cancelled(TradeCancel::Disconnected)]);
        }
        if !accepted {
            return Ok(vec![cancelled(TradeCancel::Declined)]);
        }
        if self.players[fi].score < offer.points_offered {
            return Err(SimError::InsufficientPoints);
        }
        let (a, b) = if fi < ti {
            let (l, r) = self.players.split_at_mut(ti);
            (&mut l[fi], &mut r[0])
        } else {
            let (l, r) = self.players.split_at_mut(fi);
            (&mut r[0], &mut l[ti])
        };
        std::mem::swap(&mut a.role, &mut b.role);
        std::mem::swap(&mut a.ammo, &mut b.ammo);
        std::mem::swap(&mut a.items_collected, &mut b.items_collected);
        a.score -= offer.points_offered;
        b.score += offer.points_offered;
        Ok(vec![GameEvent::TradeCompleted {
            from: offer.from_player.clone(),
            to: offer.to_player.clone(),
            points: offer.points_offered,
            from_role: a.role,
            to_role: b.role,
        }])
    }

    fn evaluate(&mut self, events: &mut Vec<GameEvent>) {
        let down = self.players.iter().find(|p| p.health <= 0.0);
        let timed_out = self.players.iter().find(|p| {
            p.disconnected_since
                .is_some_and(|since| self.tick - since >= self.config.disconnect_grace_ticks)
        });
        let loss = match (down, timed_out) {
            (Some(p), _) => Some(LossReason::PlayerDown { player: p.id.clone() }),
            (None, Some(p)) => Some(LossReason::DisconnectTimeout { player: p.id.clone() }),
            _ => None,
        };
        if let Some(reason) = loss {
            self.phase = Phase::Lost;
            self.loss = Some(reason.clone());
            events.push(GameEvent::GameLost { reason });
            return;
        }
        if self.check_stage_clear() {
            let index = self.stage().stage_index;
            events.push(GameEvent::StageCleared { stage_index: index });
            self.vaccinated_through = self.vaccinated_through.max(index);
            if self.is_last_stage() {
                self.phase = Phase::Won;
                events.push(GameEvent::GameWon);
            } else {
                self.phase = Phase::StageCleared;
            }
        }
    }
}
