//! Two unit masses crossing in the plane.
//!
//! `x̄_1 = (1, 0)`, `v̄_1 = (0, 1)`, `x̄_2 = (0, 1)`, `v̄_2 = (1, 0)`: the free
//! lines meet at `(1, 1)` at `t = 1`. The sticky solution continues along
//! `((t + 1)/2)(1, 1)`; free flight is weak but not sticky.

use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{Segment, Trajectory};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::Scenario;
use crate::vector::VecN;

fn data<S: Scalar>(offset: S) -> Vec<(S, VecN<S>, VecN<S>)> {
    vec![
        (S::one(), VecN::new(vec![S::one(), offset]), VecN::from_ints(&[0, 1])),
        (S::one(), VecN::from_ints(&[0, 1]), VecN::from_ints(&[1, 0])),
    ]
}

pub fn example2_scenario<S: Scalar>(horizon: S) -> Result<Scenario<S>> {
    Scenario::new(data(S::zero()), horizon)
}

/// First particle displaced to `(1, ε)`; for `ε ≠ 0` the particles never meet.
pub fn example2_perturbed<S: Scalar>(eps: S, horizon: S) -> Result<Scenario<S>> {
    Scenario::new(data(eps), horizon)
}

/// Candidate that sticks on `[1, T]` and re-splits at `T`, each particle
/// resuming its initial velocity. A weak solution for every `T >= 1`; not
/// sticky, and not energy admissible when `T > 1`.
pub fn resplit_candidate<S: Scalar>(split: S, horizon: S) -> Result<Trajectory<S>> {
    let one = S::one();
    if split < one || horizon < split {
        return Err(Error::InvalidParameters(alloc::format!(
            "need 1 <= T <= horizon, got T = {split}, horizon = {horizon}"
        )));
    }
    let half = S::half();
    let merged_velocity = VecN::new(vec![half.clone(), half.clone()]);
    let meet = VecN::from_ints(&[1, 1]);
    let split_point = meet.advance(&merged_velocity, &(split.clone() - one.clone()));
    let starts = [VecN::from_ints(&[1, 0]), VecN::from_ints(&[0, 1])];
    let velocities = [VecN::from_ints(&[0, 1]), VecN::from_ints(&[1, 0])];
    let mut paths = Vec::new();
    for i in 0..2 {
        let mut path = vec![Segment {
            t_start: S::zero(),
            t_end: one.clone(),
            position_start: starts[i].clone(),
            velocity: velocities[i].clone(),
        }];
        if split > one {
            path.push(Segment {
                t_start: one.clone(),
                t_end: split.clone(),
                position_start: meet.clone(),
                velocity: merged_velocity.clone(),
            });
        }
        if horizon > split {
            path.push(Segment {
                t_start: split.clone(),
                t_end: horizon.clone(),
                position_start: split_point.clone(),
                velocity: velocities[i].clone(),
            });
        }
        paths.push(path);
    }
    let traj = Trajectory {
        horizon,
        masses: vec![S::one(), S::one()],
        paths,
        time_tolerance: S::default_time_tolerance(),
    };
    traj.validate(&S::default_tolerance())?;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{check_sticky, check_weak, energy_profile, evolve, is_energy_admissible};
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn sticky_solution_meets_at_one_one() {
        let sc = example2_scenario(q(3)).unwrap();
        let (traj, log) = evolve(&sc).unwrap();
        assert_eq!(log.times(), vec![q(1)]);
        assert_eq!(traj.position(0, &q(1)), VecN::from_ints(&[1, 1]));
        assert_eq!(traj.position(1, &q(3)), VecN::from_ints(&[2, 2]));
    }

    #[test]
    fn perturbation_removes_the_collision() {
        let sc = example2_perturbed(Rational::from_ratio(1, 1000), q(5)).unwrap();
        assert!(evolve(&sc).unwrap().1.is_empty());
    }

    #[test]
    fn resplit_is_weak_but_not_sticky() {
        let t1 = resplit_candidate(q(1), q(3)).unwrap();
        let v = check_sticky(&t1, &Rational::from_int(0));
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].first_contact.clone(), v[0].separation.clone()), (q(1), q(1)));
        let t2 = resplit_candidate(q(2), q(3)).unwrap();
        assert!(check_weak(&t2, &q(0)).pass);
        assert!(!is_energy_admissible(&energy_profile(&t2)));
        assert_eq!(check_sticky(&t2, &q(0))[0].separation, q(2));
        assert!(resplit_candidate(Rational::from_ratio(1, 2), q(3)).is_err());
    }
}
