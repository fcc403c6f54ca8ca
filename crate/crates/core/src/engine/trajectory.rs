//! Piecewise-linear paths and event records.

use alloc::format;
use alloc::vec::Vec;

use super::collision::Decision;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::Scenario;
use crate::vector::{coincide_unchecked, VecN};

/// Constant-velocity piece of a path on `[t_start, t_end]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<S> {
    pub t_start: S,
    pub t_end: S,
    pub position_start: VecN<S>,
    pub velocity: VecN<S>,
}

impl<S: Scalar> Segment<S> {
    pub fn position_at(&self, t: &S) -> VecN<S> {
        self.position_start
            .advance(&self.velocity, &(t.clone() - self.t_start.clone()))
    }

    pub fn position_end(&self) -> VecN<S> {
        self.position_at(&self.t_end)
    }
}

/// One path per original particle index on `[0, horizon]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S> {
    pub horizon: S,
    pub masses: Vec<S>,
    pub paths: Vec<Vec<Segment<S>>>,
    /// Breakpoints closer than this are treated as one (zero when exact).
    pub time_tolerance: S,
}

impl<S: Scalar> Trajectory<S> {
    /// Checks coverage of `[0, horizon]`, ordering and continuity within `tol`.
    pub fn validate(&self, tol: &S) -> Result<()> {
        if self.paths.len() != self.masses.len() {
            return Err(Error::MalformedTrajectory(format!(
                "{} paths for {} masses",
                self.paths.len(),
                self.masses.len()
            )));
        }
        if self.paths.is_empty() {
            return Err(Error::EmptyParticleSet);
        }
        let dim = self.paths[0]
            .first()
            .ok_or_else(|| Error::MalformedTrajectory("path 0 is empty".into()))?
            .position_start
            .dim();
        for (i, path) in self.paths.iter().enumerate() {
            if !self.masses[i].is_positive() {
                return Err(Error::NonPositiveMass { index: i });
            }
            let first = path
                .first()
                .ok_or_else(|| Error::MalformedTrajectory(format!("path {i} is empty")))?;
            if !first.t_start.is_zero() {
                return Err(Error::MalformedTrajectory(format!("path {i} does not start at t = 0")));
            }
            let last = path.last().expect("nonempty");
            if !last.t_end.within(&self.horizon, &self.time_tolerance) {
                return Err(Error::MalformedTrajectory(format!(
                    "path {i} does not end at the horizon"
                )));
            }
            for seg in path {
                if seg.position_start.dim() != dim || seg.velocity.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: seg.position_start.dim(),
                    });
                }
                if seg.t_end < seg.t_start {
                    return Err(Error::MalformedTrajectory(format!(
                        "path {i} has a segment ending before it starts"
                    )));
                }
            }
            for w in path.windows(2) {
                if !w[0].t_end.within(&w[1].t_start, &self.time_tolerance) {
                    return Err(Error::MalformedTrajectory(format!("path {i} has a gap")));
                }
                if !coincide_unchecked(&w[0].position_end(), &w[1].position_start, tol) {
                    return Err(Error::MalformedTrajectory(format!(
                        "path {i} is discontinuous at {}",
                        w[1].t_start
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.paths[0][0].position_start.dim()
    }

    pub fn initial_position(&self, i: usize) -> &VecN<S> {
        &self.paths[i][0].position_start
    }

    pub fn initial_velocity(&self, i: usize) -> &VecN<S> {
        &self.paths[i][0].velocity
    }

    /// Segment in force just after `t` (the last one at the horizon).
    pub fn segment_at(&self, i: usize, t: &S) -> &Segment<S> {
        let path = &self.paths[i];
        path.iter()
            .find(|s| s.t_start <= *t && *t < s.t_end)
            .unwrap_or_else(|| {
                if *t < path[0].t_start {
                    &path[0]
                } else {
                    path.last().expect("nonempty path")
                }
            })
    }

    pub fn position(&self, i: usize, t: &S) -> VecN<S> {
        self.segment_at(i, t).position_at(t)
    }

    /// Right-continuous velocity.
    pub fn velocity(&self, i: usize, t: &S) -> &VecN<S> {
        &self.segment_at(i, t).velocity
    }

    /// Sorted, de-duplicated breakpoints of the selected paths, including 0
    /// and the horizon.
    pub fn breakpoints_of(&self, indices: &[usize]) -> Vec<S> {
        let mut ts: Vec<S> = Vec::new();
        ts.push(S::zero());
        ts.push(self.horizon.clone());
        for &i in indices {
            for seg in &self.paths[i] {
                ts.push(seg.t_start.clone());
                ts.push(seg.t_end.clone());
            }
        }
        ts.sort_by(|a, b| a.partial_cmp(b).expect("comparable times"));
        let mut out: Vec<S> = Vec::with_capacity(ts.len());
        for t in ts {
            if t.is_negative() || t > self.horizon {
                continue;
            }
            match out.last() {
                Some(prev) if t.within(prev, &self.time_tolerance) => {}
                _ => out.push(t),
            }
        }
        if let Some(last) = out.last_mut() {
            if last.within(&self.horizon, &self.time_tolerance) {
                *last = self.horizon.clone();
            }
        }
        out
    }

    pub fn breakpoints(&self) -> Vec<S> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.breakpoints_of(&all)
    }

    /// Straight lines `x̄_i + t v̄_i` for every particle of the scenario.
    pub fn free_flight(scenario: &Scenario<S>) -> Self {
        Trajectory {
            horizon: scenario.horizon.clone(),
            masses: scenario.masses(),
            time_tolerance: scenario.time_tolerance.clone(),
            paths: scenario
                .particles
                .iter()
                .map(|p| {
                    alloc::vec![Segment {
                        t_start: S::zero(),
                        t_end: scenario.horizon.clone(),
                        position_start: p.position.clone(),
                        velocity: p.velocity.clone(),
                    }]
                })
                .collect(),
        }
    }
}

/// Particles lumped (or passed through each other) at one event.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterEvent<S> {
    /// All original indices involved, sorted.
    pub members: Vec<usize>,
    /// Member sets of the particles that met.
    pub parts: Vec<Vec<usize>>,
    pub pre_velocities: Vec<VecN<S>>,
    /// Mass-weighted mean of the pre-velocities.
    pub post_velocity: VecN<S>,
    /// Energy actually released: the merge loss for `Stick`, zero for `Pass`.
    pub energy_drop: S,
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollisionEvent<S> {
    pub time: S,
    pub clusters: Vec<ClusterEvent<S>>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct EventLog<S> {
    pub events: Vec<CollisionEvent<S>>,
}

impl<S: Scalar> EventLog<S> {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn times(&self) -> Vec<S> {
        self.events.iter().map(|e| e.time.clone()).collect()
    }

    pub fn clusters(&self) -> impl Iterator<Item = (&S, &ClusterEvent<S>)> {
        self.events
            .iter()
            .flat_map(|e| e.clusters.iter().map(move |c| (&e.time, c)))
    }
}

/// Incrementally assembled trajectory; one open segment per original index.
pub(crate) struct TrajectoryBuilder<S> {
    closed: Vec<Vec<Segment<S>>>,
    open: Vec<(S, VecN<S>, VecN<S>)>,
}

impl<S: Scalar> TrajectoryBuilder<S> {
    pub(crate) fn new(scenario: &Scenario<S>) -> Self {
        TrajectoryBuilder {
            closed: scenario.particles.iter().map(|_| Vec::new()).collect(),
            open: scenario
                .particles
                .iter()
                .map(|p| (S::zero(), p.position.clone(), p.velocity.clone()))
                .collect(),
        }
    }

    /// Closes the open segments of `members` at `t` and starts new ones.
    pub(crate) fn restart(&mut self, members: &[usize], t: &S, position: &VecN<S>, velocity: &VecN<S>) {
        for &i in members {
            let (t0, x0, v0) = core::mem::replace(&mut self.open[i], (t.clone(), position.clone(), velocity.clone()));
            self.closed[i].push(Segment {
                t_start: t0,
                t_end: t.clone(),
                position_start: x0,
                velocity: v0,
            });
        }
    }

    pub(crate) fn finish(self, scenario: &Scenario<S>) -> Trajectory<S> {
        let horizon = scenario.horizon.clone();
        let paths = self
            .closed
            .into_iter()
            .zip(self.open)
            .map(|(mut segs, (t0, x0, v0))| {
                segs.push(Segment {
                    t_start: t0,
                    t_end: horizon.clone(),
                    position_start: x0,
                    velocity: v0,
                });
                segs
            })
            .collect();
        Trajectory {
            horizon,
            masses: scenario.masses(),
            paths,
            time_tolerance: scenario.time_tolerance.clone(),
        }
    }
}
