//! Stick/pass policies and exhaustive minimization of the discounted energy.

use alloc::vec;
use alloc::vec::Vec;

use super::collision::{next_event, Decision};
use super::energy::{energy_profile, EnergyProfile};
use super::evolve::{apply_event, canonical_order, run};
use super::trajectory::{EventLog, Trajectory};
use crate::error::{Error, Result};
use crate::particle::{energy, SystemState};
use crate::scalar::Scalar;
use crate::scenario::Scenario;

/// One decision per encountered cluster, in event order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Policy(pub Vec<Decision>);

impl Policy {
    pub fn all_stick(n: usize) -> Self {
        Policy(vec![Decision::Stick; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Replays `policy`: `Stick` lumps a cluster, `Pass` leaves its members
/// untouched. A passed contact is not offered again at the same instant.
pub fn evolve_with_policy<S: Scalar>(
    scenario: &Scenario<S>,
    policy: &Policy,
) -> Result<(Trajectory<S>, EventLog<S>, EnergyProfile<S>)> {
    let mut used = 0usize;
    let (traj, log) = run(scenario, |k| {
        used = k + 1;
        policy
            .0
            .get(k)
            .copied()
            .ok_or(Error::PolicyExhausted { len: policy.len() })
    })?;
    if used != policy.len() {
        return Err(Error::InvalidParameters(alloc::format!(
            "policy has {} decisions but only {used} clusters occurred",
            policy.len()
        )));
    }
    let profile = energy_profile(&traj);
    Ok((traj, log, profile))
}

/// Exhaustive depth-first search over decision sequences. The event sequence
/// is re-derived after every decision. Returns a minimizer of the discounted
/// energy and its value; ties go to the lexicographically first policy with
/// `Stick < Pass`.
pub fn policy_search<S: Scalar>(scenario: &Scenario<S>, eps: f64) -> Result<(Policy, f64)> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidEpsilon);
    }
    scenario.validate()?;
    let mut search = Search {
        scenario,
        eps,
        prefix: Vec::new(),
        best: None,
    };
    search.visit(scenario.initial_state(), 0.0, 0)?;
    let (policy, value) = search.best.expect("at least one leaf");
    Ok((Policy(policy), value))
}

struct Search<'a, S> {
    scenario: &'a Scenario<S>,
    eps: f64,
    prefix: Vec<Decision>,
    best: Option<(Vec<Decision>, f64)>,
}

impl<S: Scalar> Search<'_, S> {
    fn discount(&self, t: f64) -> f64 {
        libm::exp(-t / self.eps)
    }

    fn visit(&mut self, state: SystemState<S>, accumulated: f64, events: usize) -> Result<()> {
        let sc = self.scenario;
        let e_now = energy(&state).to_f64();
        let t_now = state.time.to_f64();
        let Some((time, mut clusters)) = next_event(&state, &sc.horizon, &sc.tolerance, &sc.time_tolerance) else {
            let total = accumulated + e_now * self.eps * self.discount(t_now);
            self.offer(total);
            return Ok(());
        };
        if events >= sc.event_cap {
            return Err(Error::EventCapExceeded { cap: sc.event_cap });
        }
        canonical_order(&state, &mut clusters);
        let acc = accumulated + e_now * self.eps * (self.discount(t_now) - self.discount(time.to_f64()));
        let c = clusters.len();
        // Decision vectors in lexicographic order, Stick before Pass.
        for code in 0..(1usize << c) {
            let decisions: Vec<Decision> = (0..c)
                .map(|bit| {
                    if code >> (c - 1 - bit) & 1 == 0 {
                        Decision::Stick
                    } else {
                        Decision::Pass
                    }
                })
                .collect();
            let applied = apply_event(&state, &time, &clusters, &decisions, &sc.tolerance)?;
            let depth = self.prefix.len();
            self.prefix.extend_from_slice(&decisions);
            self.visit(applied.state, acc, events + 1)?;
            self.prefix.truncate(depth);
        }
        Ok(())
    }

    fn offer(&mut self, value: f64) {
        let better = match &self.best {
            None => true,
            Some((_, best)) => value < best - 1e-12 * libm::fabs(*best),
        };
        if better {
            self.best = Some((self.prefix.clone(), value));
        }
    }
}
