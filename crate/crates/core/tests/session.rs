use vqss_core::adversary::{AttackConfig, AttackKind};
use vqss_core::protocol::{run_session, run_session_with, Behavior, BehaviorConfig, NoTap};
use vqss_core::rng::seeded;
use vqss_core::SchemeParams;

#[test]
fn single_precision_session_recovers() {
    let params = SchemeParams::new(11, 4, 6, Some(&[2, 3, 5, 7, 8, 10])).unwrap();
    let set = [6, 1, 4, 3];
    let mut rng = seeded(17);
    for _ in 0..50 {
        let secret = params.field().random(&mut rng);
        let tr = run_session_with::<f32>(&params, secret, &set, &BehaviorConfig::honest(), &mut NoTap, &mut rng).unwrap();
        assert!(tr.succeeded());
    }
}

#[test]
fn forged_broadcast_is_caught_by_the_dealer() {
    let params = SchemeParams::new(7, 3, 4, None).unwrap();
    let config = BehaviorConfig::honest().with(4, Behavior::ForgeRandomR);
    let mut rng = seeded(2);
    for _ in 0..50 {
        let tr = run_session(&params, params.field().elem(5), &[1, 2, 4], &config, &mut rng).unwrap();
        let v = tr.verdicts.as_ref().unwrap();
        assert!(!v.r_check);
        assert!(tr.recovered.is_empty());
    }
}

#[test]
fn every_attack_runs_through_its_config() {
    let params = SchemeParams::new(5, 2, 3, None).unwrap();
    let set = [3, 1];
    for kind in AttackKind::ALL {
        let position = if kind.targets_channel() { 1 } else { 3 };
        let stats = AttackConfig::new(kind, position, 200, 4)
            .run(&params, params.field().elem(2), &set)
            .unwrap();
        assert_eq!(stats.kind, kind);
        assert!(stats.metrics().iter().all(|&(_, v)| (0.0..=1.0).contains(&v)));
    }
}
