use gsfl::algebra::GroupElement;
use gsfl::costmodel::{self, Algorithm};
use gsfl::group_signature::{GroupSigError, MemberId};
use gsfl::protocol::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn ready(m: usize, n: usize, seed: u64) -> Simulation {
    let mut sim = Simulation::new(SessionConfig::new(m, n, 1, seed)).unwrap();
    sim.join_all().unwrap();
    sim.request_training_all().unwrap();
    sim
}

#[test]
fn honest_session_accepts_everything() {
    let out = run_session(6, 3, 3, 1).unwrap();
    assert_eq!(out.metrics.accepted_requests, 6);
    assert_eq!(out.metrics.accepted_updates, 9);
    assert_eq!(out.metrics.rejected_total(), 0);
    assert!(out.client_errors.is_empty());
    assert_eq!(out.models.len(), 3);
    assert_eq!(out.losses.len(), 4);
}

#[test]
fn signaling_matches_analytic_formula() {
    for (m, n, t) in [(3usize, 1usize, 1u32), (5, 3, 2), (6, 6, 3), (8, 2, 4)] {
        let out = run_session(m, n, t, 9).unwrap();
        let expected = costmodel::signaling(Algorithm::Gsfl, t as u64, m as u64, n as u64).unwrap();
        assert_eq!(
            out.transcript.signaling_count(),
            expected,
            "m={m} n={n} t={t}"
        );
        assert_eq!(out.transcript.count(MessageKind::GsReq), m);
        assert_eq!(out.transcript.count(MessageKind::GsRep), m);
        assert_eq!(out.transcript.count(MessageKind::TrainingRequest), m);
        assert_eq!(
            out.transcript.count(MessageKind::SelectionNotice),
            n * t as usize
        );
        assert_eq!(out.transcript.count(MessageKind::UpdateMsg), n * t as usize);
        assert_eq!(
            out.transcript.count(MessageKind::GlobalModel),
            t as usize + m
        );
    }
}

#[test]
fn table_scale_single_iteration_signal_count() {
    let out = run_session(200, 100, 1, 3).unwrap();
    assert_eq!(out.transcript.signaling_count(), 1001);
    assert_eq!(out.metrics.accepted_updates, 100);
}

/// Runs the full t = 1000 session with real cryptography (about 100k
/// signed updates). Slow; run with `--ignored`.
#[test]
#[ignore]
fn table_scale_thousand_iterations_signal_count() {
    let out = run_session(200, 100, 1000, 3).unwrap();
    assert_eq!(out.transcript.signaling_count(), 201_800);
}

#[test]
fn one_admin_fetch_per_session() {
    let out = run_session(20, 10, 5, 7).unwrap();
    let entries = out.transcript.entries();
    assert_eq!(out.transcript.count(MessageKind::LatestGsVerReq), 1);
    assert_eq!(out.transcript.count(MessageKind::LatestGsVerRep), 1);
    assert_eq!(out.metrics.admin_fetches, 1);
    let fetch = entries
        .iter()
        .position(|e| e.kind == MessageKind::LatestGsVerReq)
        .unwrap();
    let first_notice = entries
        .iter()
        .position(|e| e.kind == MessageKind::SelectionNotice)
        .unwrap();
    assert!(fetch < first_notice, "fetch must happen before iteration 2");
}

#[test]
fn transcripts_are_deterministic() {
    let a = run_session(5, 2, 2, 42).unwrap();
    let b = run_session(5, 2, 2, 42).unwrap();
    assert_eq!(a.transcript.to_jsonl(), b.transcript.to_jsonl());
    assert_eq!(a.models, b.models);
    let c = run_session(5, 2, 2, 43).unwrap();
    assert_ne!(a.models, c.models);
    let line = a.transcript.to_jsonl().lines().next().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    for key in [
        "step",
        "sender",
        "receiver",
        "kind",
        "byte_size",
        "session_id",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn invalid_configs_rejected() {
    assert_eq!(
        run_session(5, 0, 1, 1).unwrap_err(),
        ProtocolError::InvalidCounts { m: 5, n: 0 }
    );
    assert_eq!(
        run_session(3, 4, 1, 1).unwrap_err(),
        ProtocolError::InvalidCounts { m: 3, n: 4 }
    );
    assert_eq!(
        run_session(3, 2, 0, 1).unwrap_err(),
        ProtocolError::InvalidIterations
    );
}

#[test]
fn selection_edge_cases() {
    let pool: Vec<ClientHandle> = (0..200).map(ClientHandle).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    assert_eq!(select_subset(&pool, 200, &mut rng).unwrap(), pool);
    assert!(select_subset(&pool, 0, &mut rng).unwrap().is_empty());
    let a = select_subset(&pool, 100, &mut ChaCha20Rng::seed_from_u64(11)).unwrap();
    let b = select_subset(&pool, 100, &mut ChaCha20Rng::seed_from_u64(11)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 100);
    assert!(a.windows(2).all(|w| w[0] < w[1]));
    assert!(matches!(
        select_subset(&pool, 201, &mut rng),
        Err(ProtocolError::InvalidCounts { .. })
    ));
}

#[test]
fn join_twice_and_revoked_join() {
    let mut sim = Simulation::new(SessionConfig::new(3, 1, 1, 2)).unwrap();
    sim.join(ClientHandle(0)).unwrap();
    assert_eq!(
        sim.join(ClientHandle(0)),
        Err(ProtocolError::GroupSig(GroupSigError::DuplicateMember(
            MemberId(0)
        )))
    );
    sim.join(ClientHandle(1)).unwrap();
    sim.revoke(ClientHandle(1), "test").unwrap();
    assert_eq!(sim.join(ClientHandle(1)), Err(ProtocolError::RevokedClient));
}

#[test]
fn submitted_update_is_recovered_exactly() {
    let mut sim = ready(4, 4, 8);
    sim.run_iteration().unwrap();
    // Every client trained on the zero model; the server's aggregate must
    // equal the local FedAvg of those exact updates.
    let updates: Vec<_> = sim
        .clients()
        .iter()
        .map(|c| {
            gsfl::fedlearn::local_step(
                &gsfl::fedlearn::ModelParams::zeros(5),
                &sim.task().datasets[c.handle_id().0 as usize],
                0.1,
            )
            .unwrap()
        })
        .collect();
    let expected = gsfl::fedlearn::aggregate(&updates).unwrap();
    assert_eq!(sim.server().model(), &expected);
}

#[test]
fn submit_without_notice_is_not_selected() {
    let mut sim = ready(3, 1, 4);
    let now = sim.now();
    assert_eq!(
        sim.client_mut(ClientHandle(0))
            .submit(b"x", now)
            .unwrap_err(),
        ProtocolError::NotSelected
    );
}

#[test]
fn tampered_signature_field_rejected() {
    let mut sim = ready(3, 1, 6);
    let now = sim.now();
    let mut env = sim
        .client_mut(ClientHandle(2))
        .build_signed(MessageKind::UpdateMsg, &[1, 2, 3], now)
        .unwrap();
    env.event.wire_mut().unwrap().gs[50] ^= 0x10;
    sim.send(env);
    sim.run();
    let m = sim.server().metrics();
    assert_eq!(
        m.rejected(RejectReason::SignatureReject) + m.rejected(RejectReason::MalformedMessage),
        1
    );
}

#[test]
fn revocation_rotates_session_and_shuts_out_member() {
    let mut sim = ready(4, 2, 10);
    sim.run_iteration().unwrap();
    let old = sim.server().session_id();
    sim.revoke(ClientHandle(3), "misbehaving").unwrap();
    let new = sim.admin().session_id();
    assert!(new > old);
    assert_eq!(sim.server().session_id(), new);
    assert!(sim.server().cache().is_none());
    for h in 0..3 {
        assert_eq!(sim.client(ClientHandle(h)).session_id(), Some(new));
    }
    assert_eq!(sim.client(ClientHandle(3)).session_id(), Some(old));

    // The revoked client still holds old keys; the server drops its request.
    let r = sim.request_training(ClientHandle(3));
    assert!(r.is_ok());
    assert_eq!(
        sim.server().metrics().rejected(RejectReason::StaleSession),
        1
    );

    // Once it sees newer traffic it refuses to sign for the old session.
    for h in 0..3 {
        sim.request_training(ClientHandle(h)).unwrap();
    }
    sim.run_iteration().unwrap();
    let now = sim.now();
    assert!(matches!(
        sim.client_mut(ClientHandle(3)).training_request(now),
        Err(ProtocolError::StaleSession { .. })
    ));
    assert_eq!(
        sim.server().requesters(),
        vec![ClientHandle(0), ClientHandle(1), ClientHandle(2)]
    );
    assert_eq!(sim.server().metrics().admin_fetches, 2);
    assert!(sim
        .admin()
        .keys()
        .revocation_table()
        .iter()
        .any(|(id, r)| *id == MemberId(3) && r == "misbehaving"));
}

#[test]
fn ttl_expiry_drops_message() {
    let mut sim = ready(3, 1, 12);
    let now = sim.now();
    let mut env = sim
        .client_mut(ClientHandle(0))
        .build_signed(MessageKind::UpdateMsg, b"p", now)
        .unwrap();
    env.event.wire_mut().unwrap().ttl = 0;
    sim.send(env);
    sim.run();
    assert_eq!(sim.expired(), 1);
}

#[test]
fn server_state_holds_no_member_secrets() {
    let mut sim = ready(6, 3, 13);
    sim.run_iteration().unwrap();
    sim.run_iteration().unwrap();
    let state = sim.server().state_bytes();
    let haystack: Vec<u8> = state.concat();
    let contains = |needle: &[u8]| haystack.windows(needle.len()).any(|w| w == needle);
    for c in sim.clients() {
        let cred = c.credential().unwrap();
        let sess = c.session_keys().unwrap();
        assert!(!contains(&cred.a.to_bytes()), "A_i leaked");
        assert!(!contains(&cred.x.to_bytes()), "x_i leaked");
        assert!(!contains(&sess.a.to_bytes()), "a leaked");
        assert!(!contains(&sess.b.to_bytes()), "b leaked");
    }
    assert!(!sim.server().received().is_empty());
}

#[test]
fn notices_are_readable_only_by_recipient() {
    let mut sim = ready(5, 2, 14);
    sim.start_capture();
    sim.run_iteration().unwrap();
    let notices: Vec<&Envelope> = sim
        .captured()
        .iter()
        .filter(|e| e.event.kind() == MessageKind::SelectionNotice)
        .collect();
    assert_eq!(notices.len(), 2);
    let first_len = notices[0].event.byte_size();
    for env in &notices {
        // Fixed-size ciphertexts: nothing roster-dependent is visible.
        assert_eq!(env.event.byte_size(), first_len);
        let Party::Client(target) = env.receiver else {
            panic!("notice not unicast")
        };
        let Event::SelectionNotice { sealed } = &env.event else {
            unreachable!()
        };
        for c in sim.clients() {
            let opened = c.open_notice(sealed);
            assert_eq!(opened.is_ok(), c.handle_id() == target);
        }
    }
}
