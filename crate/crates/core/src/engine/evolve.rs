//! Event-driven sticky evolution.
//!
//! Starting from free flight, the state is advanced to the first contact
//! time; every cluster of coincident particles is then either lumped into one
//! compound (mass and momentum conserved) or passed through unchanged, and the
//! procedure repeats on the smaller system until no contact remains before the
//! horizon.

use alloc::vec::Vec;

use super::collision::{merge_cluster, next_event, Decision};
use super::trajectory::{ClusterEvent, CollisionEvent, EventLog, Trajectory, TrajectoryBuilder};
use crate::error::{Error, Result};
use crate::particle::{Particle, SystemState};
use crate::scalar::Scalar;
use crate::scenario::Scenario;

/// The unique sticky solution on `[0, horizon]`.
pub fn evolve<S: Scalar>(scenario: &Scenario<S>) -> Result<(Trajectory<S>, EventLog<S>)> {
    run(scenario, |_| Ok(Decision::Stick))
}

/// Orders clusters by their smallest original index so that decisions and
/// logs do not depend on the internal particle order.
pub(crate) fn canonical_order<S>(state: &SystemState<S>, clusters: &mut [Vec<usize>]) {
    clusters.sort_by_key(|c| {
        c.iter()
            .map(|&k| state.particles[k].members[0])
            .min()
            .unwrap_or(usize::MAX)
    });
}

pub(crate) struct Applied<S> {
    pub state: SystemState<S>,
    pub event: CollisionEvent<S>,
    /// Compound created for each cluster that sticks.
    pub merged: Vec<Option<Particle<S>>>,
}

/// Advances `state` to `time` and resolves each cluster per `decisions`.
pub(crate) fn apply_event<S: Scalar>(
    state: &SystemState<S>,
    time: &S,
    clusters: &[Vec<usize>],
    decisions: &[Decision],
    tol: &S,
) -> Result<Applied<S>> {
    debug_assert_eq!(clusters.len(), decisions.len());
    let at = state.advanced_to(time);
    let mut slots: Vec<Option<Particle<S>>> = at.particles.iter().cloned().map(Some).collect();
    let mut records = Vec::with_capacity(clusters.len());
    let mut merged_out = Vec::with_capacity(clusters.len());
    for (cluster, &decision) in clusters.iter().zip(decisions) {
        let parts: Vec<&Particle<S>> = cluster.iter().map(|&k| &at.particles[k]).collect();
        let merge = merge_cluster(&parts, tol)?;
        let mut sorted_parts: Vec<&Particle<S>> = parts.clone();
        sorted_parts.sort_by_key(|p| p.members[0]);
        let record = ClusterEvent {
            members: merge.particle.members.clone(),
            parts: sorted_parts.iter().map(|p| p.members.clone()).collect(),
            pre_velocities: sorted_parts.iter().map(|p| p.velocity.clone()).collect(),
            post_velocity: merge.particle.velocity.clone(),
            energy_drop: match decision {
                Decision::Stick => merge.energy_drop.clone(),
                Decision::Pass => S::zero(),
            },
            decision,
        };
        records.push(record);
        match decision {
            Decision::Stick => {
                let keep = *cluster.iter().min().expect("nonempty cluster");
                for &k in cluster {
                    slots[k] = None;
                }
                slots[keep] = Some(merge.particle.clone());
                merged_out.push(Some(merge.particle));
            }
            Decision::Pass => merged_out.push(None),
        }
    }
    Ok(Applied {
        state: SystemState {
            time: time.clone(),
            dimension: at.dimension,
            particles: slots.into_iter().flatten().collect(),
        },
        event: CollisionEvent {
            time: time.clone(),
            clusters: records,
        },
        merged: merged_out,
    })
}

/// Shared event loop; `decide` is called once per cluster, in canonical order,
/// with the running cluster count.
pub(crate) fn run<S: Scalar>(
    scenario: &Scenario<S>,
    mut decide: impl FnMut(usize) -> Result<Decision>,
) -> Result<(Trajectory<S>, EventLog<S>)> {
    scenario.validate()?;
    let mut state = scenario.initial_state();
    let mut builder = TrajectoryBuilder::new(scenario);
    let mut log = EventLog { events: Vec::new() };
    let mut seen_clusters = 0usize;
    while let Some((time, mut clusters)) =
        next_event(&state, &scenario.horizon, &scenario.tolerance, &scenario.time_tolerance)
    {
        if log.events.len() >= scenario.event_cap {
            return Err(Error::EventCapExceeded {
                cap: scenario.event_cap,
            });
        }
        canonical_order(&state, &mut clusters);
        let decisions = clusters
            .iter()
            .map(|_| {
                let d = decide(seen_clusters);
                seen_clusters += 1;
                d
            })
            .collect::<Result<Vec<_>>>()?;
        let applied = apply_event(&state, &time, &clusters, &decisions, &scenario.tolerance)?;
        for merged in applied.merged.iter().flatten() {
            builder.restart(&merged.members, &time, &merged.position, &merged.velocity);
        }
        log.events.push(applied.event);
        state = applied.state;
    }
    Ok((builder.finish(scenario), log))
}
