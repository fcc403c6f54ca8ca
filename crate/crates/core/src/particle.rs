//! Particle and system-state data model.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::VecN;

/// A point mass; a compound particle carries the original indices it absorbed.
#[derive(Clone, Debug, PartialEq)]
pub struct Particle<S> {
    pub mass: S,
    pub position: VecN<S>,
    pub velocity: VecN<S>,
    /// Sorted original indices.
    pub members: Vec<usize>,
}

impl<S: Scalar> Particle<S> {
    pub fn new(index: usize, mass: S, position: VecN<S>, velocity: VecN<S>) -> Self {
        assert_eq!(position.dim(), velocity.dim(), "position/velocity dimension");
        Particle {
            mass,
            position,
            velocity,
            members: vec![index],
        }
    }

    pub fn dim(&self) -> usize {
        self.position.dim()
    }

    pub fn position_at(&self, dt: &S) -> VecN<S> {
        self.position.advance(&self.velocity, dt)
    }

    pub fn momentum(&self) -> VecN<S> {
        self.velocity.scale(&self.mass)
    }

    /// `m |v|^2`, twice the kinetic energy.
    pub fn twice_energy(&self) -> S {
        self.mass.clone() * self.velocity.norm_sq()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemState<S> {
    pub time: S,
    pub dimension: usize,
    pub particles: Vec<Particle<S>>,
}

impl<S: Scalar> SystemState<S> {
    pub fn new(time: S, particles: Vec<Particle<S>>) -> Result<Self> {
        let dimension = particles.first().ok_or(Error::EmptyParticleSet)?.dim();
        for p in &particles {
            if p.dim() != dimension || p.velocity.dim() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.dim(),
                });
            }
        }
        Ok(SystemState {
            time,
            dimension,
            particles,
        })
    }

    pub fn total_mass(&self) -> S {
        self.particles.iter().fold(S::zero(), |acc, p| acc + p.mass.clone())
    }

    /// Every particle moved ballistically to `time`.
    pub fn advanced_to(&self, time: &S) -> Self {
        let dt = time.clone() - self.time.clone();
        SystemState {
            time: time.clone(),
            dimension: self.dimension,
            particles: self
                .particles
                .iter()
                .map(|p| Particle {
                    position: p.position_at(&dt),
                    ..p.clone()
                })
                .collect(),
        }
    }
}

/// `Σ m_i x_i / Σ m_i`.
pub fn barycenter<S: Scalar>(particles: &[Particle<S>]) -> Result<VecN<S>> {
    if particles.is_empty() {
        return Err(Error::EmptyParticleSet);
    }
    let dim = particles[0].dim();
    for (index, p) in particles.iter().enumerate() {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if !p.mass.is_positive() {
            return Err(Error::NonPositiveMass { index });
        }
    }
    VecN::weighted_mean(particles.iter().map(|p| (&p.mass, &p.position))).ok_or(Error::EmptyParticleSet)
}

pub fn momentum<S: Scalar>(state: &SystemState<S>) -> VecN<S> {
    state
        .particles
        .iter()
        .fold(VecN::zeros(state.dimension), |acc, p| &acc + &p.momentum())
}

/// Kinetic energy `½ Σ m_i |v_i|²`.
pub fn energy<S: Scalar>(state: &SystemState<S>) -> S {
    let twice = state.particles.iter().fold(S::zero(), |acc, p| acc + p.twice_energy());
    twice * S::half()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn part(i: usize, m: Rational, x: &[i64], v: &[i64]) -> Particle<Rational> {
        Particle::new(i, m, VecN::from_ints(x), VecN::from_ints(v))
    }

    #[test]
    fn barycenter_examples() {
        let ps = vec![part(0, q(1, 1), &[1, 0], &[0, 0]), part(1, q(1, 1), &[0, 1], &[0, 0])];
        assert_eq!(barycenter(&ps).unwrap(), VecN::new(vec![q(1, 2), q(1, 2)]));
        let ps = vec![part(0, q(2, 1), &[0, 0], &[0, 0]), part(1, q(1, 1), &[3, 0], &[0, 0])];
        assert_eq!(barycenter(&ps).unwrap(), VecN::from_ints(&[1, 0]));
        assert_eq!(barycenter::<Rational>(&[]), Err(Error::EmptyParticleSet));
    }

    #[test]
    fn geometric_barycenter_approaches_three_sevenths() {
        // masses (1/4)^j at (1/2)^j e_1; the tail beyond j = 30 shifts the
        // mean by at most (1/4)^30 * (1/2)^31 / (1/4) relative to the head.
        let ps: Vec<Particle<f64>> = (1..=30)
            .map(|j| {
                Particle::new(
                    j,
                    0.25f64.powi(j as i32),
                    VecN::new(vec![0.5f64.powi(j as i32), 0.0]),
                    VecN::zeros(2),
                )
            })
            .collect();
        let b = barycenter(&ps).unwrap();
        assert!((b[0] - 3.0 / 7.0).abs() < 1e-15);
        assert_eq!(b[1], 0.0);
    }

    #[test]
    fn example_two_momentum_and_energy() {
        let s = SystemState::new(
            q(0, 1),
            vec![part(0, q(1, 1), &[1, 0], &[0, 1]), part(1, q(1, 1), &[0, 1], &[1, 0])],
        )
        .unwrap();
        assert_eq!(momentum(&s), VecN::from_ints(&[1, 1]));
        assert_eq!(energy(&s), q(1, 1));

        let merged = SystemState::new(
            q(2, 1),
            vec![Particle {
                mass: q(2, 1),
                position: VecN::new(vec![q(3, 2), q(3, 2)]),
                velocity: VecN::new(vec![q(1, 2), q(1, 2)]),
                members: vec![0, 1],
            }],
        )
        .unwrap();
        assert_eq!(momentum(&merged), VecN::from_ints(&[1, 1]));
        assert_eq!(energy(&merged), q(1, 2));
    }

    #[test]
    fn resting_particle_has_no_energy() {
        let s = SystemState::new(q(0, 1), vec![part(0, q(1, 1), &[5], &[0])]).unwrap();
        assert!(momentum(&s).is_zero());
        assert_eq!(energy(&s), q(0, 1));
    }
}
