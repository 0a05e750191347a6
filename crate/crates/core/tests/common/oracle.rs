//! Brute-force reference for the 5x5 single-virus scenario.
//!
//! Written from the rule text alone: it shares no code with the simulator
//! beyond the stage document it is compared against.

#![allow(dead_code)]

/// The scenario as a stage file: one wall, one camp, one strain-1 virus, and
/// a Doctor goal that the scripts never satisfy so the stage runs all ticks.
pub const SCENARIO_JSON: &str = r#"{
  "stage_index": 1,
  "strain_level": 1,
  "vaccine_target": 1,
  "goals": {"grocery": 0, "treat": 1, "disinfect": 0, "crowd": 0},
  "grid": {"width": 5, "height": 5},
  "walls": [[2, 2]],
  "spawns": [[0, 0], [1, 0], [0, 1], [1, 1]],
  "camps": [[0, 4]],
  "pickups": [{"kind": "vaccine_part", "x": 4, "y": 0}],
  "viruses": [{"x": 4, "y": 4, "strain": 1}],
  "crowds": [],
  "civilians": [[3, 0]]
}"#;

const W: i64 = 5;
const H: i64 = 5;
const WALL: (i64, i64) = (2, 2);
const CAMP: (f64, f64) = (0.5, 4.5);

fn open(x: f64, y: f64) -> bool {
    let (cx, cy) = (x.floor() as i64, y.floor() as i64);
    cx >= 0 && cy >= 0 && cx < W && cy < H && (cx, cy) != WALL
}

fn slide(x: f64, y: f64, dx: f64, dy: f64) -> (f64, f64) {
    for (nx, ny) in [(x + dx, y + dy), (x + dx, y), (x, y + dy)] {
        if open(nx, ny) {
            return (nx, ny);
        }
    }
    (x, y)
}

/// Plain-text transcription of splitmix64 seeding and xoshiro256**.
struct Xoshiro([u64; 4]);

impl Xoshiro {
    fn new(seed: u64) -> Self {
        let mut z = seed;
        let mut s = [0u64; 4];
        for slot in &mut s {
            z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut v = z;
            v = (v ^ (v >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            v = (v ^ (v >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            *slot = v ^ (v >> 31);
        }
        Xoshiro(s)
    }

    fn next(&mut self) -> u64 {
        let s = &mut self.0;
        let out = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        out
    }
}

/// Health after each of `script.len()` ticks for a lone Doctor who moves per
/// `script` (each entry a compass step, `(0, 0)` meaning idle).
pub fn health_trajectory(seed: u64, script: &[(i8, i8)]) -> Vec<f64> {
    let mut rng = Xoshiro::new(seed);
    let (mut px, mut py) = (0.5f64, 0.5f64);
    let (mut vx, mut vy) = (4.5f64, 4.5f64);
    let mut health = 100.0f64;
    let mut last_hit: Option<usize> = None;
    let player_step = 3.0 / 20.0;
    let virus_step = 0.4 * 1.0 * player_step;
    let dirs = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
    let mut out = Vec::with_capacity(script.len());

    for (i, &(mx, my)) in script.iter().enumerate() {
        let tick = i + 1;
        // Player moves at 3 cells/s scaled by 0.5 + 0.5 * health/100.
        if (mx, my) != (0, 0) {
            let len = (mx as f64).hypot(my as f64);
            let step = player_step * (0.5 + 0.5 * (health / 100.0));
            (px, py) = slide(px, py, mx as f64 / len * step, my as f64 / len * step);
        }
        // Virus chases within 6 cells, else wanders one of eight directions.
        let (ddx, ddy) = (px - vx, py - vy);
        let dist = ddx.hypot(ddy);
        if dist <= 6.0 {
            if dist > 0.0 {
                (vx, vy) = slide(vx, vy, ddx / dist * virus_step, ddy / dist * virus_step);
            }
        } else {
            let (wx, wy) = dirs[(rng.next() >> 61) as usize];
            let len = (wx as f64).hypot(wy as f64);
            (vx, vy) = slide(vx, vy, wx as f64 / len * virus_step, wy as f64 / len * virus_step);
        }
        // Contact within half a cell costs 5 x strain, at most once a second.
        if (px - vx).hypot(py - vy) <= 0.5 && last_hit.is_none_or(|t| tick - t >= 20) {
            last_hit = Some(tick);
            health = (health - 5.0).max(0.0);
        }
        // Camps restore 5 health per second within 1.5 cells of their center.
        if health < 100.0 && (CAMP.0 - px).hypot(CAMP.1 - py) <= 1.5 {
            health += (5.0 / 20.0f64).min(100.0 - health);
        }
        out.push(health);
    }
    out
}
