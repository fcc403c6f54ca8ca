//! Engine invariants over seeded random scenarios in both backends.

use rayon::prelude::*;
use serde_json::json;
use stickysim_core::constructions::planted_scenario;
use stickysim_core::engine::{
    check_sticky, check_weak, energy_at, energy_profile, evolve, evolve_with_policy, Decision, EventLog, Policy,
    Trajectory,
};
use stickysim_core::{momentum, Error as CoreError, Particle, Rational, Scalar, Scenario, VecN};

use super::{scenario_witness, Case, Report};
use crate::error::Result;

const HORIZON: i64 = 4;
const MAX_PARTICLES: usize = 20;
const FLOAT_DRIFT: f64 = 1e-10;
const BACKEND_AGREEMENT: f64 = 1e-9;

const NOTE: &str = "Rational checks are exact. Float checks use the scenario tolerances; momentum drift \
     is bounded by 1e-10 and float event times must match the exact ones within 1e-9. The negative \
     control forces PASS on the first contact and expects the stickiness checker to flag it.";

/// `(dimension, particle count, scenario seed)` of case `i`.
pub fn case_shape(seed: u64, i: usize) -> (usize, usize, u64) {
    let dim = 1 + i % 3;
    let count = 1 + (i / 3 + seed as usize % MAX_PARTICLES) % MAX_PARTICLES;
    (dim, count, seed.wrapping_mul(1_000_003).wrapping_add(i as u64))
}

fn rebuild<S: Scalar>(sc: &Scenario<S>, particles: Vec<Particle<S>>) -> Scenario<S> {
    let particles = particles
        .into_iter()
        .enumerate()
        .map(|(i, p)| Particle::new(i, p.mass, p.position, p.velocity))
        .collect();
    Scenario {
        particles,
        ..sc.clone()
    }
}

/// Σ m v over the original particles at `t`.
fn momentum_at<S: Scalar>(traj: &Trajectory<S>, t: &S) -> VecN<S> {
    (0..traj.len()).fold(VecN::zeros(traj.dimension()), |acc, i| {
        &acc + &traj.velocity(i, t).scale(&traj.masses[i])
    })
}

/// Positions of all particles at every event time and at the horizon.
fn snapshots<S: Scalar>(traj: &Trajectory<S>, log: &EventLog<S>) -> Vec<Vec<VecN<S>>> {
    log.times()
        .iter()
        .chain(std::iter::once(&traj.horizon))
        .map(|t| (0..traj.len()).map(|i| traj.position(i, t)).collect())
        .collect()
}

fn energy_nonincreasing<S: Scalar>(traj: &Trajectory<S>, slack: &S) -> bool {
    energy_profile(traj)
        .values
        .windows(2)
        .all(|w| w[1] <= w[0].clone() + slack.clone())
}

/// Forces PASS at the first cluster and STICK afterwards; `None` when the
/// scenario has no collision before the horizon (a pass at the horizon
/// leaves no time to separate, so nothing is observable).
fn injected_pass<S: Scalar>(sc: &Scenario<S>, log: &EventLog<S>) -> stickysim_core::Result<Option<bool>> {
    if log.events.first().is_none_or(|e| e.time >= sc.horizon) {
        return Ok(None);
    }
    let mut decisions = vec![Decision::Pass];
    loop {
        match evolve_with_policy(sc, &Policy(decisions.clone())) {
            Ok((traj, _, _)) => return Ok(Some(!check_sticky(&traj, &sc.tolerance).is_empty())),
            Err(CoreError::PolicyExhausted { .. }) if decisions.len() <= sc.event_cap => {
                decisions.push(Decision::Stick)
            }
            Err(CoreError::InvalidParameters(_)) if decisions.len() == 1 => return Ok(None),
            Err(e) => return Err(e),
        }
    }
}

struct Checks(Vec<(&'static str, bool)>);

impl Checks {
    fn push(&mut self, name: &'static str, ok: bool) {
        self.0.push((name, ok));
    }

    fn failed(&self) -> Vec<&'static str> {
        self.0.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }
}

fn exact_checks(
    sc: &Scenario<Rational>,
    checks: &mut Checks,
) -> stickysim_core::Result<(Trajectory<Rational>, EventLog<Rational>)> {
    let zero = Rational::zero();
    let (traj, log) = evolve(sc)?;
    let h = traj.horizon.clone();
    checks.push(
        "momentum_conserved",
        momentum_at(&traj, &h) == momentum(&sc.initial_state()),
    );
    let drops = log
        .clusters()
        .fold(Rational::zero(), |a, (_, c)| a + c.energy_drop.clone());
    checks.push(
        "energy_drops_match_log",
        energy_at(&traj, &zero) - energy_at(&traj, &h) == drops,
    );
    checks.push("energy_nonincreasing", energy_nonincreasing(&traj, &zero));
    checks.push("sticky", check_sticky(&traj, &zero).is_empty());
    let weak = check_weak(&traj, &zero);
    checks.push("weak", weak.pass && weak.max_residual_sq.is_zero());
    checks.push("deterministic", evolve(sc)? == (traj.clone(), log.clone()));

    let snaps = snapshots(&traj, &log);
    let n = sc.len();

    let reversed = rebuild(sc, sc.particles.iter().rev().cloned().collect());
    let (rt, rl) = evolve(&reversed)?;
    let reorder_ok = rl.times() == log.times()
        && snapshots(&rt, &rl)
            .iter()
            .zip(&snaps)
            .all(|(a, b)| (0..n).all(|i| a[n - 1 - i] == b[i]));
    checks.push("reorder_invariant", reorder_ok);

    let shift = VecN::new(
        (0..sc.dimension)
            .map(|d| Rational::from_ratio(3 + d as i64, 7))
            .collect(),
    );
    let moved = rebuild(
        sc,
        sc.particles
            .iter()
            .map(|p| Particle {
                position: &p.position + &shift,
                ..p.clone()
            })
            .collect(),
    );
    let (mt, ml) = evolve(&moved)?;
    let translate_ok = ml.times() == log.times()
        && snapshots(&mt, &ml)
            .iter()
            .zip(&snaps)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| *x == y + &shift));
    checks.push("translation_invariant", translate_ok);

    let factor = Rational::from_ratio(5, 3);
    let heavy = rebuild(
        sc,
        sc.particles
            .iter()
            .map(|p| Particle {
                mass: p.mass.clone() * factor.clone(),
                ..p.clone()
            })
            .collect(),
    );
    let (ht, hl) = evolve(&heavy)?;
    checks.push(
        "mass_scaling_invariant",
        hl.times() == log.times() && snapshots(&ht, &hl) == snaps,
    );

    if let Some(detected) = injected_pass(sc, &log)? {
        checks.push("injected_pass_detected", detected);
    }
    Ok((traj, log))
}

fn float_checks(sc: &Scenario<f64>, exact: &EventLog<Rational>, checks: &mut Checks) -> stickysim_core::Result<()> {
    let (traj, log) = evolve(sc)?;
    let p0 = momentum(&sc.initial_state());
    let drift = (&momentum_at(&traj, &traj.horizon) - &p0).norm_sq().sqrt();
    checks.push("float_momentum_drift", drift <= FLOAT_DRIFT);
    checks.push("float_energy_nonincreasing", energy_nonincreasing(&traj, &1e-12));
    checks.push("float_sticky", check_sticky(&traj, &sc.tolerance).is_empty());
    checks.push("float_weak", check_weak(&traj, &sc.tolerance).pass);
    let agree = log.len() == exact.len()
        && log.events.iter().zip(&exact.events).all(|(f, e)| {
            (f.time - e.time.to_f64()).abs() <= BACKEND_AGREEMENT
                && f.clusters
                    .iter()
                    .map(|c| &c.members)
                    .eq(e.clusters.iter().map(|c| &c.members))
                && f.clusters
                    .iter()
                    .map(|c| c.decision)
                    .eq(e.clusters.iter().map(|c| c.decision))
        });
    checks.push("backends_agree", agree);
    Ok(())
}

fn case(seed: u64, i: usize) -> Case {
    let (dim, count, case_seed) = case_shape(seed, i);
    let id = format!("case-{i}");
    let sc = match planted_scenario(dim, count, case_seed, Rational::from_int(HORIZON)) {
        Ok(sc) => sc,
        Err(e) => {
            return Case::errored(
                id,
                &e.into(),
                json!({ "dimension": dim, "count": count, "seed": case_seed }),
            )
        }
    };
    let mut checks = Checks(Vec::new());
    let result = exact_checks(&sc, &mut checks).and_then(|(_, log)| {
        let fsc = sc.convert::<f64>()?;
        float_checks(&fsc, &log, &mut checks)?;
        Ok(log)
    });
    let log = match result {
        Ok(log) => log,
        Err(e) => return Case::errored(id, &e.into(), scenario_witness(&sc, None, json!({}))),
    };
    let failed = checks.failed();
    let details = json!({
        "dimension": dim,
        "particles": count,
        "seed": case_seed,
        "events": log.len(),
        "checks": checks.0.len(),
        "failed": failed,
    });
    Case::new(id, failed.is_empty(), details)
        .with_witness(|| scenario_witness(&sc, Some(&log), json!({ "failed": failed })))
}

/// `count` random scenarios; each case runs the exact invariants, the float
/// replay and the cross-backend comparison.
pub fn run_property_suite(seed: u64, count: usize) -> Result<Report> {
    let cases: Vec<Case> = (0..count).into_par_iter().map(|i| case(seed, i)).collect();
    let parameters = json!({
        "count": count,
        "dimensions": [1, 2, 3],
        "max_particles": MAX_PARTICLES,
        "horizon": HORIZON,
    });
    Ok(Report::new("properties", parameters, "rational+float", vec![seed], cases).with_notes(&[NOTE]))
}
