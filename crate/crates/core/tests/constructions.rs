//! Regression fixtures for the constructions: crossing pair, backward
//! cascade, bullets against the black tail, and collapsing clouds.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stickysim_core::constructions::*;
use stickysim_core::engine::*;
use stickysim_core::{energy, momentum, Rational, Scalar, Scenario, VecN};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn zero() -> Rational {
    q(0, 1)
}

#[test]
fn crossing_pair_sticks_at_one_one() {
    let sc = example2_scenario(q(3, 1)).unwrap();
    assert_eq!(sc.masses(), vec![q(1, 1), q(1, 1)]);
    let state = sc.initial_state();
    assert_eq!(momentum(&state), VecN::from_ints(&[1, 1]));
    assert_eq!(energy(&state), q(1, 1));

    let (traj, log) = evolve(&sc).unwrap();
    assert_eq!(log.times(), vec![q(1, 1)]);
    let cluster = &log.events[0].clusters[0];
    assert_eq!(cluster.members, vec![0, 1]);
    assert_eq!(cluster.post_velocity, VecN::new(vec![q(1, 2), q(1, 2)]));
    assert_eq!(cluster.energy_drop, q(1, 2));
    // ((t + 1)/2)(1, 1) after the merge.
    for t in [q(1, 1), q(3, 2), q(3, 1)] {
        let expected = VecN::new(vec![(t.clone() + q(1, 1)) / q(2, 1); 2]);
        assert_eq!(traj.position(0, &t), expected);
        assert_eq!(traj.position(1, &t), expected);
    }
    let profile = energy_profile(&traj);
    assert_eq!(profile.breakpoints, vec![zero(), q(1, 1)]);
    assert_eq!(profile.values, vec![q(1, 1), q(1, 2)]);
    assert!(is_energy_admissible(&profile));
    assert!(check_sticky(&traj, &zero()).is_empty());
    assert_eq!(nonstickiness_phi(&traj, &zero()), zero());
    assert!(check_weak(&traj, &zero()).pass);
}

#[test]
fn crossing_pair_with_pass_flies_freely() {
    let sc = example2_scenario(q(3, 1)).unwrap();
    let (traj, log, profile) = evolve_with_policy(&sc, &Policy(vec![Decision::Pass])).unwrap();
    assert_eq!(log.len(), 1);
    assert_eq!(log.events[0].clusters[0].energy_drop, zero());
    assert_eq!(traj.position(0, &q(3, 1)), VecN::from_ints(&[1, 3]));
    assert_eq!(profile, EnergyProfile::constant(q(1, 1)));
    let v = check_sticky(&traj, &zero());
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].pair, (0, 1));
    assert!(check_weak(&traj, &zero()).pass);
    assert!(matches!(
        evolve_with_policy(&sc, &Policy(vec![])),
        Err(stickysim_core::Error::PolicyExhausted { .. })
    ));
}

#[test]
fn crossing_pair_policy_search_sticks() {
    let sc = example2_scenario(3.0f64).unwrap();
    for eps in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let (policy, value) = policy_search(&sc, eps).unwrap();
        assert_eq!(policy, Policy(vec![Decision::Stick]), "eps = {eps}");
        let free = j_epsilon(&EnergyProfile::constant(1.0), eps).unwrap();
        assert!(value < free);
    }
    let sticky = evolve_with_policy(&sc, &Policy(vec![Decision::Stick])).unwrap().2;
    let expected = 1.0 - 1.0 / (2.0 * std::f64::consts::E);
    assert!((j_epsilon(&sticky, 1.0).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn single_particle_policy_is_empty() {
    let sc = Scenario::new(vec![(1.0, VecN::new(vec![0.0]), VecN::new(vec![1.0]))], 1.0).unwrap();
    let (policy, value) = policy_search(&sc, 1.0).unwrap();
    assert!(policy.is_empty());
    assert!((value - 0.5).abs() < 1e-15);
}

#[test]
fn perturbed_pair_never_meets() {
    for eps in [q(1, 10), q(-1, 1000), q(1, 1 << 40)] {
        let sc = example2_perturbed(eps, q(10, 1)).unwrap();
        let (a, b) = (&sc.particles[0], &sc.particles[1]);
        assert_eq!(pair_collision_time(a, b, &zero()), None);
        let (traj, log) = evolve(&sc).unwrap();
        assert!(log.is_empty());
        assert_eq!(traj, Trajectory::free_flight(&sc));
    }
}

#[test]
fn resplit_family() {
    let early = resplit_candidate(q(1, 1), q(3, 1)).unwrap();
    let v = check_sticky(&early, &zero());
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].pair, (0, 1));
    assert_eq!(v[0].first_contact, q(1, 1));
    assert_eq!(v[0].separation, q(1, 1));
    assert_eq!(nonstickiness_phi(&early, &zero()), q(1, 1));
    assert!(check_weak(&early, &zero()).pass);

    let late = resplit_candidate(q(2, 1), q(4, 1)).unwrap();
    assert!(check_weak(&late, &zero()).pass);
    let profile = energy_profile(&late);
    assert_eq!(profile.values, vec![q(1, 1), q(1, 2), q(1, 1)]);
    assert!(!is_energy_admissible(&profile));
    assert_eq!(check_sticky(&late, &zero())[0].separation, q(2, 1));
}

#[test]
fn cascade_shadow_for_several_depths() {
    for depth in 3..=6u32 {
        let (sc, spec) = example3_scenario::<Rational>(depth, 7, q(1, 1)).unwrap();
        assert_eq!(sc.len(), depth as usize + 1);
        assert!(spec.momentum_balanced());
        assert!(nip_check(&spec, &q(1, 1)));
        assert!(momentum(&sc.initial_state()).is_zero());

        let (traj, log) = evolve(&sc).unwrap();
        let expected: Vec<Rational> = (1..=depth).rev().map(|i| q(1, 1 << i)).collect();
        assert_eq!(log.times(), expected);
        // Exactly i compounds live on [t_i, t_{i−1}).
        for i in 1..=depth {
            let mid = q(3, 1 << (i + 1));
            let distinct: BTreeSet<Vec<String>> = (0..sc.len())
                .map(|j| {
                    traj.position(j, &mid)
                        .components()
                        .iter()
                        .map(|c| c.to_string())
                        .collect()
                })
                .collect();
            assert_eq!(distinct.len(), i as usize, "depth {depth}, level {i}");
        }

        let free = Trajectory::free_flight(&sc);
        let weak = check_weak(&free, &zero());
        assert!(weak.pass && weak.max_residual_sq.is_zero());
        assert!(is_energy_admissible(&energy_profile(&free)));
        let violations = check_sticky(&free, &zero());
        assert_eq!(violations.len(), 1);
        let d = depth as usize;
        assert_eq!(violations[0].pair, (d - 1, d));
        assert_eq!(violations[0].first_contact, q(1, 1 << depth));
        let phi = phi_of(&free.masses, &violations);
        assert_eq!(phi, q(1, 1i64 << (2 * depth)));
    }
}

#[test]
fn cascade_in_floating_point() {
    let (sc, _) = example3_scenario::<f64>(4, 7, 1.0).unwrap();
    let (_, log) = evolve(&sc).unwrap();
    let times = log.times();
    assert_eq!(times.len(), 4);
    for (t, i) in times.iter().zip((1..=4).rev()) {
        assert!((t - 0.5f64.powi(i)).abs() < 1e-12);
    }
}

fn reference() -> TailParams<Rational> {
    TailParams::reference()
}

#[test]
fn truncated_bullets_hit_only_the_deepest_black() {
    for n in 3..=8u32 {
        for variant in [Variant::Vertical, Variant::Slanted] {
            let (sc, spec) = example4_scenario(&reference(), n, Targeting::Truncated, variant, q(3, 1)).unwrap();
            let (traj, log) = evolve(&sc).unwrap();
            assert_eq!(spec.hit_set(&log), BTreeSet::from([n]), "n = {n}, {variant:?}");
            // The hit happens at τ_N on the axis.
            let white = spec.white_index(n);
            let black = spec.black_index(n);
            let tau = &spec.tau[n as usize - 1];
            assert_eq!(traj.position(white, tau), traj.position(black, tau));
            assert!(check_sticky(&traj, &zero()).is_empty());
        }
    }
}

#[test]
fn infinite_tail_bullets_always_miss() {
    for n in 3..=8u32 {
        for variant in [Variant::Vertical, Variant::Slanted] {
            let (sc, spec) = example4_scenario(&reference(), n, Targeting::Infinite, variant, q(3, 1)).unwrap();
            let (_, log) = evolve(&sc).unwrap();
            assert!(spec.hit_set(&log).is_empty(), "n = {n}, {variant:?}");
            for (_, c) in log.clusters() {
                assert!(spec.classify(&c.members).is_black_only());
            }
        }
    }
}

#[test]
fn slanted_bullets_approach_the_origin() {
    let (_, spec) = example4_scenario(&reference(), 12, Targeting::Infinite, Variant::Slanted, q(3, 1)).unwrap();
    let norms: Vec<f64> = spec
        .whites
        .iter()
        .map(|(_, x, _)| x.norm_sq().to_f64().sqrt())
        .collect();
    assert!(norms[11] < norms[0] / 50.0);
    let last = &spec.whites[11].2;
    assert_eq!(last[0], q(1, 1));
    assert_eq!(last[1], q(-1, 12));
}

#[test]
fn discounted_energy_policy_structure() {
    let (sc, spec) = example4_scenario(
        &TailParams::<f64>::reference(),
        3,
        Targeting::Truncated,
        Variant::Vertical,
        3.0,
    )
    .unwrap();
    let mut sticking_white = Vec::new();
    for eps in [10.0, 1.0, 0.1, 0.01] {
        let (policy, value) = policy_search(&sc, eps).unwrap();
        let (_, log, profile) = evolve_with_policy(&sc, &policy).unwrap();
        assert!((j_epsilon(&profile, eps).unwrap() - value).abs() <= 1e-12 * value);
        let mut whites = Vec::new();
        for (_, c) in log.clusters() {
            let kind = spec.classify(&c.members);
            if kind.is_black_only() {
                assert_eq!(c.decision, Decision::Stick, "eps = {eps}");
            } else if kind.is_white_black() && c.decision == Decision::Stick {
                whites.extend(kind.whites);
            }
        }
        assert_eq!(whites.len(), 1, "eps = {eps}");
        sticking_white.push(whites[0]);
    }
    assert!(sticking_white.windows(2).all(|w| w[0] <= w[1]), "{sticking_white:?}");
}

#[test]
fn random_clouds_collapse_once() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..50u64 {
        let dim = rng.random_range(1..=3usize);
        let center = VecN::new((0..dim).map(|_| q(rng.random_range(-64..=64), 16)).collect());
        let base = VecN::new((0..dim).map(|_| q(rng.random_range(-32..=32), 16)).collect());
        let s = q(1, rng.random_range(2..=16));
        let mass = q(rng.random_range(1..=32), 8);
        let cloud = BallCloud::new(center, s.clone(), base, mass.clone()).unwrap();
        let samples = rng.random_range(1..=9usize);
        let pts = discretize_ball(&cloud, samples, case).unwrap();
        let total = pts.iter().fold(zero(), |a, p| a + p.0.clone());
        assert_eq!(total, mass);
        let sc = Scenario::new(pts, q(1, 1)).unwrap();
        let expected_momentum = cloud.base_velocity.scale(&mass);
        assert_eq!(momentum(&sc.initial_state()), expected_momentum);
        let (traj, log) = evolve(&sc).unwrap();
        if samples == 1 {
            assert!(log.is_empty());
            continue;
        }
        assert_eq!(log.times(), vec![s.clone()], "case {case}");
        let c = &log.events[0].clusters[0];
        assert_eq!(c.members.len(), samples);
        assert_eq!(c.post_velocity, cloud.base_velocity);
        assert_eq!(traj.position(0, &s), cloud.collapse_point());
    }
}

#[test]
fn smoothed_bullets_reproduce_point_mass_hits() {
    for variant in [Variant::Vertical, Variant::Slanted] {
        let (sc, spec) = example4_scenario(&reference(), 3, Targeting::Truncated, variant, q(3, 1)).unwrap();
        let (_, point_log) = evolve(&sc).unwrap();
        let sm = smooth_scenario(&sc, &vec![q(1, 8); sc.len()], &q(1, 1 << 20), 5, 11).unwrap();
        let (_, log) = evolve(&sm.scenario).unwrap();
        let latest = sm.clouds.iter().map(|c| c.s.clone()).fold(zero(), Rational::max_of);
        let after: Vec<_> = log.events.iter().filter(|e| e.time > latest).collect();
        assert_eq!(after.len(), point_log.len());
        for (a, b) in after.iter().zip(&point_log.events) {
            assert_eq!(a.time, b.time);
        }
        assert_eq!(spec.hit_set_mapped(&log, |i| sm.origin[i]), spec.hit_set(&point_log));
    }
}

#[test]
fn smoothed_crossing_pair_meets_near_one_one() {
    let sc = example2_scenario(2.0f64).unwrap();
    let sm = smooth_scenario(&sc, &[0.125, 0.125], &1e-6, 7, 5).unwrap();
    let (traj, log) = evolve(&sm.scenario).unwrap();
    let last = log.events.last().unwrap();
    assert!((last.time - 1.0).abs() < 1e-6);
    let p = traj.position(0, &1.0);
    assert!((p[0] - 1.0).abs() < 1e-6 && (p[1] - 1.0).abs() < 1e-6);
    for i in 0..sm.scenario.len() {
        assert!(traj
            .position(i, &1.5)
            .components()
            .iter()
            .all(|c| (c - 1.25).abs() < 1e-6));
    }
}
