//! Initial data plus run parameters.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::particle::{Particle, SystemState};
use crate::scalar::Scalar;
use crate::vector::{coincide_unchecked, VecN};

pub const DEFAULT_EVENT_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<S> {
    pub dimension: usize,
    /// Absolute position-coincidence tolerance (zero for the exact backend).
    pub tolerance: S,
    /// Event-time merge tolerance (zero for the exact backend).
    pub time_tolerance: S,
    pub horizon: S,
    pub event_cap: usize,
    /// Initial particles; particle `i` has `members == [i]`.
    pub particles: Vec<Particle<S>>,
}

impl<S: Scalar> Scenario<S> {
    /// Scenario with default tolerances and event cap, validated.
    pub fn new(particles: Vec<(S, VecN<S>, VecN<S>)>, horizon: S) -> Result<Self> {
        let dimension = particles.first().ok_or(Error::EmptyParticleSet)?.1.dim();
        let scenario = Scenario {
            dimension,
            tolerance: S::default_tolerance(),
            time_tolerance: S::default_time_tolerance(),
            horizon,
            event_cap: DEFAULT_EVENT_CAP,
            particles: particles
                .into_iter()
                .enumerate()
                .map(|(i, (m, x, v))| Particle::new(i, m, x, v))
                .collect(),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn with_tolerance(mut self, tolerance: S) -> Result<Self> {
        self.tolerance = tolerance;
        self.validate()?;
        Ok(self)
    }

    pub fn with_event_cap(mut self, cap: usize) -> Self {
        self.event_cap = cap;
        self
    }

    pub fn with_horizon(mut self, horizon: S) -> Result<Self> {
        self.horizon = horizon;
        self.validate()?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn masses(&self) -> Vec<S> {
        self.particles.iter().map(|p| p.mass.clone()).collect()
    }

    pub fn initial_state(&self) -> SystemState<S> {
        SystemState {
            time: S::zero(),
            dimension: self.dimension,
            particles: self.particles.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.particles.is_empty() {
            return Err(Error::EmptyParticleSet);
        }
        if self.tolerance.is_negative() || self.time_tolerance.is_negative() {
            return Err(Error::InvalidTolerance(format!(
                "{} / {}",
                self.tolerance, self.time_tolerance
            )));
        }
        if S::is_exact() && !(self.tolerance.is_zero() && self.time_tolerance.is_zero()) {
            return Err(Error::NonzeroExactTolerance);
        }
        if !self.horizon.is_positive() {
            return Err(Error::InvalidHorizon);
        }
        for (index, p) in self.particles.iter().enumerate() {
            if p.dim() != self.dimension || p.velocity.dim() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    found: p.dim(),
                });
            }
            if !p.mass.is_positive() {
                return Err(Error::NonPositiveMass { index });
            }
            if p.members.len() != 1 || p.members[0] != index {
                return Err(Error::InvalidParameters(format!(
                    "particle {index} must carry only its own index"
                )));
            }
        }
        for i in 0..self.particles.len() {
            for j in i + 1..self.particles.len() {
                if coincide_unchecked(
                    &self.particles[i].position,
                    &self.particles[j].position,
                    &self.tolerance,
                ) {
                    return Err(Error::CoincidentInitialPositions { first: i, second: j });
                }
            }
        }
        Ok(())
    }

    /// Same data in another backend, routed through exact rationals.
    /// Tolerances reset to the target backend's defaults.
    pub fn convert<T: Scalar>(&self) -> Result<Scenario<T>> {
        let cv = |x: &S| -> Result<T> {
            x.to_rational()
                .map(|q| T::from_rational(&q))
                .ok_or_else(|| Error::InvalidParameters(format!("non-finite value {x}")))
        };
        let cvv = |v: &VecN<S>| -> Result<VecN<T>> {
            Ok(VecN::new(v.components().iter().map(cv).collect::<Result<Vec<_>>>()?))
        };
        let particles = self
            .particles
            .iter()
            .map(|p| {
                Ok(Particle {
                    mass: cv(&p.mass)?,
                    position: cvv(&p.position)?,
                    velocity: cvv(&p.velocity)?,
                    members: p.members.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let out = Scenario {
            dimension: self.dimension,
            tolerance: T::default_tolerance(),
            time_tolerance: T::default_time_tolerance(),
            horizon: cv(&self.horizon)?,
            event_cap: self.event_cap,
            particles,
        };
        out.validate()?;
        Ok(out)
    }
}
