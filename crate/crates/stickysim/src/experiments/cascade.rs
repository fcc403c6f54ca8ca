//! Non-uniqueness at finite depth: the backward cascade sticks, free flight
//! is another weak, energy-admissible solution that violates stickiness
//! only at the deepest split.

use rayon::prelude::*;
use serde_json::json;
use stickysim_core::constructions::example3_scenario;
use stickysim_core::engine::{
    check_sticky, check_weak, energy_profile, evolve, is_energy_admissible, phi_of, Trajectory,
};
use stickysim_core::{Backend, Rational};

use super::{scenario_witness, values, Case, Report};
use crate::error::{Error, Result};
use crate::schema::FileScalar;

const NOTE: &str = "The free-flight violation of stickiness persists at every depth while its weight \
     Phi = 4^-N tends to zero: in the limit both the cascade and free flight are sticky weak \
     solutions from the same data. Only the finite truncations are computed.";

fn case<S: FileScalar>(levels: u32, seed: u64) -> Case {
    let id = format!("N={levels}");
    let (sc, spec) = match example3_scenario::<S>(levels, seed, S::one()) {
        Ok(x) => x,
        Err(e) => return Case::errored(id, &e.into(), json!({ "levels": levels, "seed": seed })),
    };
    let (_, log) = match evolve(&sc) {
        Ok(x) => x,
        Err(e) => return Case::errored(id, &e.into(), scenario_witness(&sc, None, json!({}))),
    };
    let tol = sc.tolerance.clone();
    let ttol = sc.time_tolerance.clone();
    let expected: Vec<S> = (1..=levels).rev().map(|i| S::from_ratio(1, 1i64 << i)).collect();
    let times = log.times();
    let cascade_ok = times.len() == expected.len() && times.iter().zip(&expected).all(|(a, b)| a.within(b, &ttol));

    let free = Trajectory::free_flight(&sc);
    let weak = check_weak(&free, &tol);
    let admissible = is_energy_admissible(&energy_profile(&free));
    let violations = check_sticky(&free, &tol);
    let phi = phi_of(&free.masses, &violations);
    let deepest = S::from_ratio(1, 1i64 << levels);
    let phi_expected = S::from_ratio(1, 4).powi(levels);
    let d = levels as usize;
    let single_violation = violations.len() == 1
        && violations[0].pair == (d - 1, d)
        && violations[0].first_contact.within(&deepest, &ttol);
    let phi_ok = phi.within(&phi_expected, &tol);
    let weak_ok = weak.pass && (!S::is_exact() || weak.max_residual_sq.is_zero());

    let pass = cascade_ok && weak_ok && admissible && single_violation && phi_ok && spec.momentum_balanced();
    let details = json!({
        "levels": levels,
        "particles": sc.len(),
        "event_times": values(&times),
        "expected_event_times": values(&expected),
        "cascade": cascade_ok,
        "free_flight": {
            "weak_residual": weak.max_residual,
            "weak_pass": weak_ok,
            "energy_admissible": admissible,
            "violations": violations.iter().map(|v| json!({
                "pair": [v.pair.0, v.pair.1],
                "first_contact": v.first_contact.to_json(),
                "separation": v.separation.to_json(),
            })).collect::<Vec<_>>(),
            "phi": phi.to_json(),
            "phi_expected": phi_expected.to_json(),
        },
    });
    Case::new(id, pass, details).with_witness(|| scenario_witness(&sc, Some(&log), json!({ "seed": seed })))
}

/// One case per depth in `levels` (each at least 2).
pub fn run_example3_nonuniqueness(levels: &[u32], seed: u64, backend: Backend) -> Result<Report> {
    if let Some(&bad) = levels.iter().find(|&&n| n < 2) {
        return Err(Error::Usage(format!("depth must be at least 2, got {bad}")));
    }
    let cases: Vec<Case> = levels
        .par_iter()
        .map(|&n| match backend {
            Backend::Rational => case::<Rational>(n, seed),
            Backend::Float => case::<f64>(n, seed),
        })
        .collect();
    let params = json!({ "levels": levels, "horizon": 1 });
    Ok(Report::new("nonuniqueness", params, backend.name(), vec![seed], cases).with_notes(&[NOTE]))
}
