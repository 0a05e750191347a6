use coopvax_bots::headless::{run_game, run_headless, run_headless_sequential, HeadlessGame};
use coopvax_bots::policy::{bot_seed, parse_policies, Bot, PolicyKind};
use coopvax_bots::report::Outcome;
use coopvax_core::maps::bundled_campaign;
use coopvax_core::{PickupKind, PlayerCommand};
use coopvax_protocol::ClientView;
use std::collections::BTreeMap;

const MAX: u64 = 20_000;

fn greedy(n: usize) -> Vec<PolicyKind> {
    vec![PolicyKind::Greedy; n]
}

#[test]
fn same_seed_gives_byte_identical_reports() {
    let c = bundled_campaign();
    let a = run_headless_sequential(&c, &greedy(4), 42, 2, MAX).unwrap().to_json();
    let b = run_headless_sequential(&c, &greedy(4), 42, 2, MAX).unwrap().to_json();
    assert_eq!(a, b);
    let other = run_headless_sequential(&c, &greedy(4), 43, 2, MAX).unwrap().to_json();
    assert_ne!(a, other);
}

#[test]
fn dispatching_runner_matches_sequential() {
    let c = bundled_campaign();
    let seq = run_headless_sequential(&c, &greedy(4), 5, 4, MAX).unwrap();
    let any = run_headless(&c, &greedy(4), 5, 4, MAX).unwrap();
    assert_eq!(seq.to_json(), any.to_json());
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_runner_matches_sequential() {
    let c = bundled_campaign();
    let seq = run_headless_sequential(&c, &greedy(4), 9, 6, MAX).unwrap();
    let par = coopvax_bots::headless::run_headless_parallel(&c, &greedy(4), 9, 6, MAX).unwrap();
    assert_eq!(seq.to_json(), par.to_json());
}

#[test]
fn greedy_beats_random() {
    let c = bundled_campaign();
    let g = run_headless(&c, &greedy(4), 1, 20, MAX).unwrap();
    let r = run_headless(&c, &vec![PolicyKind::Random; 4], 1, 20, MAX).unwrap();
    assert!(g.aggregate.wins >= 1, "greedy never won");
    assert!(r.aggregate.win_rate < g.aggregate.win_rate, "random {} vs greedy {}", r.aggregate.win_rate, g.aggregate.win_rate);
}

#[test]
fn single_greedy_player_can_clear_the_campaign() {
    let c = bundled_campaign();
    let wins = (0..5).filter(|s| run_game(&c, &greedy(1), *s, MAX).unwrap().outcome == Outcome::Won).count();
    assert!(wins >= 1);
}

#[test]
fn report_fields_are_consistent() {
    let c = bundled_campaign();
    let r = run_game(&c, &greedy(4), 3, MAX).unwrap();
    assert_eq!(r.seed, 3);
    assert_eq!(r.final_scores.len(), 4);
    assert!(r.final_state_hash.as_ref().is_some_and(|h| h.len() == 64));
    let cleared: Vec<u32> = r.stage_clear_ticks.keys().copied().collect();
    let expect: Vec<u32> = match r.outcome {
        Outcome::Won => (1..=4).collect(),
        _ => (1..r.stage_reached).collect(),
    };
    assert_eq!(cleared, expect);
    assert!(r.infections.keys().all(|k| k.starts_with("bot")));
}

/// Pickups tallied from events equal, summed over stages, pickups placed
/// minus those left on the map, on every tick.
#[test]
fn pickup_tally_is_conserved() {
    let c = bundled_campaign();
    for seed in [1, 2] {
        let mut g = HeadlessGame::new(&c, &greedy(4), seed).unwrap();
        let mut carried: BTreeMap<PickupKind, i64> = BTreeMap::new();
        let mut current: BTreeMap<PickupKind, i64> = BTreeMap::new();
        let mut stage = g.state().stage().stage_index;
        while !g.is_over() && g.state().tick_count() < MAX {
            g.step();
            let now = g.state().stage().stage_index;
            if now != stage {
                for (k, v) in std::mem::take(&mut current) {
                    *carried.entry(k).or_default() += v;
                }
                stage = now;
            }
            current.clear();
            for (k, _) in &g.state().stage().map.initial_pickups {
                *current.entry(*k).or_default() += 1;
            }
            for p in ClientView::project(g.state(), None).pickups {
                *current.get_mut(&p.kind).unwrap() -= 1;
            }
            let mut expected = carried.clone();
            for (k, v) in &current {
                *expected.entry(*k).or_default() += v;
            }
            expected.retain(|_, v| *v != 0);
            let tallied: BTreeMap<PickupKind, i64> = g.report().pickups.into_iter().map(|(k, v)| (k, v as i64)).collect();
            assert_eq!(tallied, expected, "seed {seed} tick {}", g.state().tick_count());
        }
    }
}

#[test]
fn scripted_policy_replays_by_tick() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("script.json");
    std::fs::write(&path, r#"[[0, {"kind":"move","dx":1,"dy":0}], [2, {"kind":"act"}]]"#).unwrap();
    let policies = parse_policies(&format!("scripted:{},random", path.display())).unwrap();
    assert_eq!(policies[1], PolicyKind::Random);
    let PolicyKind::Scripted(script) = &policies[0] else { panic!("not scripted") };
    assert_eq!(script.len(), 2);

    let c = bundled_campaign();
    let mut g = HeadlessGame::new(&c, &policies[..1], 0).unwrap();
    let start = g.state().players()[0].position;
    g.step();
    assert!(g.state().players()[0].position.x > start.x);
    let mut bot = Bot::new("bot0", policies[0].clone(), 0);
    let view = ClientView::project(g.state(), None);
    assert_eq!(bot.decide(&view), PlayerCommand::Idle);
}

#[test]
fn policy_parse_errors() {
    assert!(parse_policies("greedy,smart").is_err());
    assert!(parse_policies("scripted:/nonexistent/file.json").is_err());
    assert_eq!(parse_policies("greedy, random").unwrap(), vec![PolicyKind::Greedy, PolicyKind::Random]);
}

#[test]
fn bot_seeds_differ_by_slot() {
    let seeds: Vec<u64> = (0..4).map(|i| bot_seed(42, i)).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            assert_ne!(seeds[i], seeds[j]);
        }
    }
    assert_eq!(bot_seed(42, 0), bot_seed(42, 0));
}
