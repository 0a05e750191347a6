#[path = "common/oracle.rs"]
mod oracle;

use coopvax_core::maps::parse_stage;
use coopvax_core::{new_game, PlayerCommand, PlayerId, Role};
use proptest::prelude::*;

fn core_trajectory(seed: u64, script: &[(i8, i8)]) -> Vec<f64> {
    let stage = parse_stage(oracle::SCENARIO_JSON, std::path::Path::new("oracle.json")).unwrap();
    let id = PlayerId::new("solo");
    let mut game = new_game(vec![stage], vec![(id.clone(), Role::Doctor)], seed).unwrap();
    script
        .iter()
        .map(|&(dx, dy)| {
            game.queue_command(&id, PlayerCommand::Move { dx, dy }).unwrap();
            game.tick().unwrap();
            game.players()[0].health
        })
        .collect()
}

/// Walks into the virus, retreats to the camp, then loiters.
pub fn fixed_script() -> Vec<(i8, i8)> {
    let mut s = vec![(1, 1); 30];
    s.extend(vec![(0, 0); 30]);
    s.extend(vec![(-1, 1); 25]);
    s.extend(vec![(0, 0); 15]);
    s
}

#[test]
fn fixed_script_matches_oracle() {
    let script = fixed_script();
    let expected = oracle::health_trajectory(7, &script);
    assert_eq!(core_trajectory(7, &script), expected);
    assert!(expected.windows(2).any(|w| w[1] < w[0]), "scenario must exercise damage");
    assert!(expected.windows(2).any(|w| w[1] > w[0]), "scenario must exercise healing");
}

#[test]
fn standing_still_takes_one_hit_per_second() {
    // The virus closes in, then hits every 20 ticks while in contact.
    let script = vec![(0, 0); 200];
    let t = oracle::health_trajectory(1, &script);
    assert_eq!(core_trajectory(1, &script), t);
    let hits = t.windows(2).filter(|w| w[1] < w[0]).count();
    assert!(hits >= 2, "{hits}");
}

fn step() -> impl Strategy<Value = (i8, i8)> {
    (-1i8..=1, -1i8..=1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_scripts_match_oracle(seed in any::<u64>(), script in prop::collection::vec(step(), 100)) {
        prop_assert_eq!(core_trajectory(seed, &script), oracle::health_trajectory(seed, &script));
    }
}
