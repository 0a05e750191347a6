//! Numeric rule constants. Rates are expressed per tick at [`TICK_RATE`].

pub const TICK_RATE: u32 = 20;

pub const MAX_HEALTH: f64 = 100.0;
pub const MAX_MASK: f64 = 100.0;

/// Player displacement per tick at full health (3 cells/s).
pub const PLAYER_STEP: f64 = 3.0 / TICK_RATE as f64;

/// Virus pursuit radius in cells.
pub const AGGRO_RADIUS: f64 = 6.0;
/// Virus speed relative to [`PLAYER_STEP`] at strain 1.
pub const VIRUS_SPEED_FACTOR: f64 = 0.4;
/// Distance at which a virus touches a player.
pub const CONTACT_RADIUS: f64 = 0.5;
pub const DAMAGE_PER_STRAIN: f64 = 5.0;
/// Per virus, per player (1 s).
pub const CONTACT_COOLDOWN_TICKS: u64 = TICK_RATE as u64;

/// Reach of role actions, measured to cell centers.
pub const ACTION_RANGE: f64 = 1.5;
/// Healing radius around a camp center.
pub const CAMP_RADIUS: f64 = 1.5;
/// +5 health per second.
pub const CAMP_HEAL_PER_TICK: f64 = 5.0 / TICK_RATE as f64;
pub const VITAMIN_HEAL: f64 = 10.0;
/// 10 mask points per second.
pub const MASK_DECAY_PER_TICK: f64 = 10.0 / TICK_RATE as f64;
/// Shield granted per sanitizer use (5 s).
pub const SANITIZER_SHIELD_TICKS: u32 = 5 * TICK_RATE;

pub const STARTING_AMMO: u32 = 5;
pub const REFILL_AMMO: u32 = 3;

pub const GOAL_POINTS: u32 = 10;
pub const SAFETY_POINTS: u32 = 5;

/// Each undispersed crowd spawns a virus this often (15 s).
pub const CROWD_SPAWN_TICKS: u64 = 15 * TICK_RATE as u64;
/// Trade offers lapse after 10 s.
pub const TRADE_TTL_TICKS: u64 = 10 * TICK_RATE as u64;
/// Flat cost of a solo role switch.
pub const SOLO_SWITCH_COST: u32 = 20;
/// Default grace before a disconnected player forfeits the game (60 s).
pub const DEFAULT_GRACE_TICKS: u64 = 60 * TICK_RATE as u64;

/// Movement slowdown from infection: linear from 0.5 at zero health to 1.0 at
/// full health. Inputs outside `[0, 100]` are clamped.
pub fn speed_multiplier(health: f64) -> f64 {
    0.5 + 0.5 * (health.clamp(0.0, MAX_HEALTH) / MAX_HEALTH)
}

/// Per-tick virus displacement for a strain level.
pub fn virus_step_length(strain_level: u32) -> f64 {
    VIRUS_SPEED_FACTOR * (1.0 + 0.1 * (strain_level as f64 - 1.0)) * PLAYER_STEP
}

/// Contact damage, halved for strains the team is already vaccinated against.
pub fn contact_damage(strain_level: u32, vaccinated_through: u32) -> f64 {
    let base = DAMAGE_PER_STRAIN * strain_level as f64;
    if strain_level <= vaccinated_through {
        base / 2.0
    } else {
        base
    }
}
