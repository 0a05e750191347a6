use coopvax_core::maps::bundled_campaign;
use coopvax_core::{GameEvent, PlayerCommand, Role};
use coopvax_protocol::{AvatarRejectReason, ErrorCode, Message};
use coopvax_server::room::{Delivery, Room, RoomSettings, INSTRUCTIONS, SERVER_NAME};
use std::sync::Arc;

fn settings(grace_ticks: u64, lockstep: bool) -> RoomSettings {
    RoomSettings { tick_rate: 20, snapshot_every: 2, grace_ticks, lockstep }
}

fn lobby(names: &[&str]) -> Room {
    let (mut room, _) = Room::new("alpha", settings(40, false), Arc::new(bundled_campaign()), 42, names[0], 1);
    for (i, n) in names.iter().enumerate().skip(1) {
        room.join(i as u64 + 1, n).unwrap();
    }
    room
}

fn started(n: usize) -> Room {
    let names = ["a", "b", "c", "d"];
    let mut room = lobby(&names[..n]);
    for i in 0..n {
        room.handle(i as u64 + 1, Message::SelectAvatar { role: Role::ALL[i] });
    }
    let out = room.handle(1, Message::StartGame);
    assert!(room.started(), "{out:?}");
    room
}

fn error_code(out: &[Delivery]) -> Option<ErrorCode> {
    out.iter().find_map(|d| match &d.msg {
        Message::Error { code, .. } => Some(*code),
        _ => None,
    })
}

fn to(out: &[Delivery], conn: u64) -> Vec<&Message> {
    out.iter().filter(|d| d.to == conn).map(|d| &d.msg).collect()
}

#[test]
fn creator_gets_room_state() {
    let (room, out) = Room::new("alpha", settings(40, false), Arc::new(bundled_campaign()), 1, "moksha", 7);
    assert_eq!(out.len(), 1);
    match &out[0].msg {
        Message::RoomState { members, started, .. } => {
            assert_eq!(members.len(), 1);
            assert!(members[0].is_creator);
            assert!(!started);
        }
        m => panic!("{m:?}"),
    }
    assert_eq!(room.creator(), Some("moksha"));
}

#[test]
fn fifth_join_is_room_full() {
    let mut room = lobby(&["a", "b", "c", "d"]);
    assert_eq!(room.join(9, "e").unwrap_err().0, ErrorCode::RoomFull);
    assert_eq!(room.join(9, "b").unwrap_err().0, ErrorCode::NameTaken);
    assert_eq!(room.member_count(), 4);
}

#[test]
fn duplicate_role_is_rejected() {
    let mut room = lobby(&["a", "b"]);
    let out = room.handle(1, Message::SelectAvatar { role: Role::Doctor });
    assert_eq!(out.len(), 2, "state broadcast to both members");
    let out = room.handle(2, Message::SelectAvatar { role: Role::Doctor });
    assert_eq!(
        out,
        vec![Delivery { to: 2, msg: Message::AvatarRejected { role: Role::Doctor, reason: AvatarRejectReason::RoleTaken } }]
    );
    // Re-selecting your own role and switching to a free one both work.
    assert_eq!(room.handle(1, Message::SelectAvatar { role: Role::Doctor }).len(), 2);
    assert_eq!(room.handle(1, Message::SelectAvatar { role: Role::Citizen }).len(), 2);
    assert_eq!(room.handle(2, Message::SelectAvatar { role: Role::Doctor }).len(), 2);
}

#[test]
fn start_preconditions() {
    let mut room = lobby(&["a", "b"]);
    room.handle(1, Message::SelectAvatar { role: Role::Doctor });
    assert_eq!(error_code(&room.handle(2, Message::StartGame)), Some(ErrorCode::NotCreator));
    assert_eq!(error_code(&room.handle(1, Message::StartGame)), Some(ErrorCode::UnassignedRoles));
    room.handle(2, Message::SelectAvatar { role: Role::Citizen });
    let out = room.handle(1, Message::StartGame);
    assert!(room.started());
    for conn in [1, 2] {
        let msgs = to(&out, conn);
        assert!(matches!(msgs[0], Message::RoomState { started: true, .. }));
        let chat: Vec<&str> = msgs
            .iter()
            .filter_map(|m| match m {
                Message::ChatRelay { player_name, text } if player_name == SERVER_NAME => Some(text.as_str()),
                _ => None,
            })
            .collect();
        assert_eq!(chat, INSTRUCTIONS);
        assert!(matches!(msgs.last().unwrap(), Message::Snapshot { tick: 0, .. }));
    }
    assert_eq!(error_code(&room.handle(2, Message::SelectAvatar { role: Role::LawEnforcer })), Some(ErrorCode::AlreadyStarted));
    assert_eq!(error_code(&room.handle(1, Message::StartGame)), Some(ErrorCode::AlreadyStarted));
    assert_eq!(room.join(5, "late").unwrap_err().0, ErrorCode::AlreadyStarted);
}

#[test]
fn creator_handoff_goes_to_oldest() {
    let mut room = lobby(&["a", "b", "c"]);
    let out = room.disconnect(1);
    assert_eq!(room.creator(), Some("b"));
    let Message::RoomState { members, .. } = &out[0].msg else { panic!() };
    assert_eq!(members.iter().map(|m| (m.player_name.as_str(), m.is_creator)).collect::<Vec<_>>(), vec![("b", true), ("c", false)]);
    assert_eq!(out.len(), 2);
    room.handle(2, Message::LeaveRoom);
    room.disconnect(3);
    assert!(room.is_dead());
}

#[test]
fn client_cannot_send_server_messages() {
    let mut room = lobby(&["a"]);
    let out = room.handle(1, Message::GameOver { won: true, tick: 0, stage_reached: 4, final_scores: vec![] });
    assert_eq!(error_code(&out), Some(ErrorCode::UnexpectedMessage));
    let out = room.handle(1, Message::JoinRoom { room_name: "x".into(), player_name: "y".into() });
    assert_eq!(error_code(&out), Some(ErrorCode::AlreadyInRoom));
    assert_eq!(error_code(&room.handle(1, Message::Input { command: PlayerCommand::Act })), Some(ErrorCode::NotRunning));
}

#[test]
fn chat_is_relayed_to_everyone() {
    let mut room = lobby(&["a", "b"]);
    let out = room.handle(2, Message::Chat { text: "hi".into() });
    assert_eq!(out.len(), 2);
    assert!(out.iter().all(|d| d.msg == Message::ChatRelay { player_name: "b".into(), text: "hi".into() }));
}

fn positions(room: &Room) -> Vec<(f64, f64)> {
    room.game().unwrap().players().iter().map(|p| (p.position.x, p.position.y)).collect()
}

#[test]
fn inputs_in_one_window_apply_on_the_same_tick() {
    let mut room = started(2);
    let before = positions(&room);
    room.handle(1, Message::Input { command: PlayerCommand::Move { dx: 1, dy: 0 } });
    room.handle(2, Message::Input { command: PlayerCommand::Move { dx: -1, dy: 0 } });
    room.tick();
    let after = positions(&room);
    assert!(after[0].0 > before[0].0);
    assert!(after[1].0 < before[1].0);
    room.tick();
    assert_eq!(positions(&room), after, "commands last one tick");
}

#[test]
fn snapshots_follow_the_snapshot_rate() {
    let mut room = started(1);
    let mut snaps = Vec::new();
    for _ in 0..6 {
        for d in room.tick() {
            if let Message::Snapshot { tick, .. } = d.msg {
                snaps.push(tick);
            }
        }
    }
    assert_eq!(snaps, vec![2, 4, 6]);
}

#[test]
fn snapshots_differ_only_in_hint() {
    let mut room = started(4);
    room.tick();
    let out = room.tick();
    let views: Vec<_> = out
        .iter()
        .filter_map(|d| match &d.msg {
            Message::Snapshot { view, .. } => Some(coopvax_protocol::ClientView { hint: None, ..(**view).clone() }),
            _ => None,
        })
        .collect();
    assert_eq!(views.len(), 4);
    assert!(views.iter().all(|v| *v == views[0]));
}

#[test]
fn reconnect_within_grace_resumes() {
    let mut room = started(2);
    for _ in 0..5 {
        room.tick();
    }
    let out = room.disconnect(2);
    assert!(to(&out, 1).iter().any(|m| matches!(m, Message::Event { game_event: GameEvent::PlayerDisconnected { .. }, .. })));
    for _ in 0..20 {
        room.tick();
    }
    let tick_before = room.game().unwrap().tick_count();
    let out = room.join(22, "b").unwrap();
    let mine = to(&out, 22);
    assert!(matches!(mine[0], Message::RoomState { started: true, .. }));
    assert!(matches!(mine.last().unwrap(), Message::Snapshot { tick, .. } if *tick == tick_before));
    assert!(to(&out, 1).iter().any(|m| matches!(m, Message::Event { game_event: GameEvent::PlayerReconnected { .. }, .. })));
    for _ in 0..100 {
        room.tick();
    }
    assert!(room.running());
    room.handle(22, Message::Input { command: PlayerCommand::Move { dx: 0, dy: 1 } });
    assert!(room.tick().iter().all(|d| error_code(std::slice::from_ref(d)).is_none()));
}

#[test]
fn grace_expiry_loses_for_all() {
    let mut room = started(3);
    room.disconnect(3);
    let mut over = Vec::new();
    for _ in 0..41 {
        for d in room.tick() {
            if let Message::GameOver { won, .. } = d.msg {
                over.push((d.to, won));
            }
        }
    }
    assert_eq!(over, vec![(1, false), (2, false)]);
    let result = room.take_result().unwrap();
    assert_eq!(result.outcome, "lost");
    assert_eq!(result.seed, 42);
    assert_eq!(result.duration_ticks, 40);
    assert_eq!(error_code(&room.handle(1, Message::Input { command: PlayerCommand::Act })), Some(ErrorCode::NotRunning));
}

#[test]
fn lockstep_waits_for_every_connected_player() {
    let (mut room, _) = Room::new("l", settings(40, true), Arc::new(bundled_campaign()), 1, "a", 1);
    room.join(2, "b").unwrap();
    room.handle(1, Message::SelectAvatar { role: Role::Citizen });
    room.handle(2, Message::SelectAvatar { role: Role::Doctor });
    room.handle(1, Message::StartGame);
    assert!(!room.wants_timer_tick());
    assert!(!room.lockstep_ready());
    room.handle(1, Message::Input { command: PlayerCommand::Idle });
    assert!(!room.lockstep_ready());
    room.handle(2, Message::Input { command: PlayerCommand::Idle });
    assert!(room.lockstep_ready());
    let out = room.tick();
    assert_eq!(out.iter().filter(|d| matches!(d.msg, Message::Snapshot { tick: 1, .. })).count(), 2);
    assert!(!room.lockstep_ready());
    // A dropped player no longer holds up the tick.
    room.disconnect(2);
    room.handle(1, Message::Input { command: PlayerCommand::Idle });
    assert!(room.lockstep_ready());
    room.disconnect(1);
    assert!(room.wants_timer_tick(), "grace runs on the timer when nobody is left");
}
