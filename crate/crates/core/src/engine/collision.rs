//! Ballistic contact detection, simultaneous-contact clustering and merging.

use alloc::vec::Vec;

use super::union_find::DisjointSet;
use crate::error::{Error, Result};
use crate::particle::{Particle, SystemState};
use crate::scalar::Scalar;
use crate::vector::{coincide_unchecked, VecN};

/// Stick together or fly through unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decision {
    Stick,
    Pass,
}

/// Least `t > 0` (relative to the particles' common reference time) at which
/// `a` and `b` coincide within `tol`.
pub fn pair_collision_time<S: Scalar>(a: &Particle<S>, b: &Particle<S>, tol: &S) -> Option<S> {
    let dx = &b.position - &a.position;
    let dv = &b.velocity - &a.velocity;
    let dv2 = dv.norm_sq();
    if dv2.is_zero() {
        return None;
    }
    let t = -dx.dot(&dv) / dv2;
    if !t.is_positive() {
        return None;
    }
    let residual = dx.advance(&dv, &t);
    let hit = if tol.is_zero() {
        residual.is_zero()
    } else {
        residual.norm_sq() <= tol.clone() * tol.clone()
    };
    hit.then_some(t)
}

/// Earliest contact time `<= horizon` (times within `time_tol` past the
/// horizon count as the horizon) and the particles (indices into
/// `state.particles`) that coincide at that instant, grouped by transitive
/// closure. Pairs already coinciding at `state.time` are not offered again.
pub fn next_event<S: Scalar>(
    state: &SystemState<S>,
    horizon: &S,
    tol: &S,
    time_tol: &S,
) -> Option<(S, Vec<Vec<usize>>)> {
    let ps = &state.particles;
    let n = ps.len();
    let mut touching_now = alloc::vec![false; n * n];
    let mut candidates: Vec<(usize, usize, S)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if coincide_unchecked(&ps[i].position, &ps[j].position, tol) {
                touching_now[i * n + j] = true;
                continue;
            }
            if let Some(dt) = pair_collision_time(&ps[i], &ps[j], tol) {
                let t = state.time.clone() + dt;
                if t <= *horizon {
                    candidates.push((i, j, t));
                } else if t.within(horizon, time_tol) {
                    // Rounding can push a contact at the horizon just past it.
                    candidates.push((i, j, horizon.clone()));
                }
            }
        }
    }
    let first = candidates
        .iter()
        .map(|c| &c.2)
        .fold(None::<&S>, |best, t| match best {
            Some(b) if b <= t => Some(b),
            _ => Some(t),
        })?
        .clone();

    let dt = first.clone() - state.time.clone();
    let positions: Vec<VecN<S>> = ps.iter().map(|p| p.position_at(&dt)).collect();
    let mut sets = DisjointSet::new(n);
    for (i, j, t) in &candidates {
        if t.within(&first, time_tol) {
            sets.union(*i, *j);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !touching_now[i * n + j] && coincide_unchecked(&positions[i], &positions[j], tol) {
                sets.union(i, j);
            }
        }
    }
    Some((first, sets.nontrivial_components()))
}

/// Result of lumping a set of coincident particles.
#[derive(Clone, Debug, PartialEq)]
pub struct Merge<S> {
    pub particle: Particle<S>,
    /// `Σ m_i |v_i|² / 2 − |Σ m_i v_i|² / (2 Σ m_i)`.
    pub energy_drop: S,
}

/// Mass is summed, velocity is the mass-weighted mean, members are united.
pub fn merge_cluster<S: Scalar>(ps: &[&Particle<S>], tol: &S) -> Result<Merge<S>> {
    let first = ps.first().ok_or(Error::EmptyParticleSet)?;
    for p in &ps[1..] {
        first.position.check_dim(&p.position)?;
        if !coincide_unchecked(&first.position, &p.position, tol) {
            return Err(Error::NonCoincidentCluster);
        }
    }
    let mass = ps.iter().fold(S::zero(), |acc, p| acc + p.mass.clone());
    let momentum = ps.iter().skip(1).fold(first.momentum(), |acc, p| &acc + &p.momentum());
    let velocity = momentum.scale(&(S::one() / mass.clone()));
    let position = if tol.is_zero() {
        first.position.clone()
    } else {
        VecN::weighted_mean(ps.iter().map(|p| (&p.mass, &p.position))).ok_or(Error::EmptyParticleSet)?
    };
    let twice_before = ps.iter().fold(S::zero(), |acc, p| acc + p.twice_energy());
    let twice_after = momentum.norm_sq() / mass.clone();
    let mut energy_drop = (twice_before - twice_after) * S::half();
    if energy_drop.is_negative() {
        // rounding in the float backend only
        energy_drop = S::zero();
    }
    let mut members: Vec<usize> = ps.iter().flat_map(|p| p.members.iter().copied()).collect();
    members.sort_unstable();
    Ok(Merge {
        particle: Particle {
            mass,
            position,
            velocity,
            members,
        },
        energy_drop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn part(i: usize, m: i64, x: &[i64], v: &[i64]) -> Particle<Rational> {
        Particle::new(i, q(m, 1), VecN::from_ints(x), VecN::from_ints(v))
    }

    fn zero() -> Rational {
        Rational::zero()
    }

    #[test]
    fn head_on_collision() {
        let a = part(0, 1, &[0, 0], &[1, 0]);
        let b = part(1, 1, &[4, 0], &[-1, 0]);
        assert_eq!(pair_collision_time(&a, &b, &zero()), Some(q(2, 1)));
    }

    #[test]
    fn crossing_paths_in_the_plane() {
        let a = part(0, 1, &[1, 0], &[0, 1]);
        let b = part(1, 1, &[0, 1], &[1, 0]);
        assert_eq!(pair_collision_time(&a, &b, &zero()), Some(q(1, 1)));

        // x̄_1 = (1, ε) misses
        let eps = q(1, 1000);
        let a = Particle::new(0, q(1, 1), VecN::new(vec![q(1, 1), eps]), VecN::from_ints(&[0, 1]));
        assert_eq!(pair_collision_time(&a, &b, &zero()), None);
    }

    #[test]
    fn receding_or_parallel_pairs_never_meet() {
        let a = part(0, 1, &[0], &[-1]);
        let b = part(1, 1, &[1], &[1]);
        assert_eq!(pair_collision_time(&a, &b, &zero()), None);
        let c = part(2, 1, &[3], &[-1]);
        assert_eq!(pair_collision_time(&a, &c, &zero()), None);
    }

    #[test]
    fn float_tolerance_accepts_near_miss() {
        let a = Particle::new(0, 1.0, VecN::new(vec![0.0, 5e-10]), VecN::new(vec![1.0, 0.0]));
        let b = Particle::new(1, 1.0, VecN::new(vec![2.0, 0.0]), VecN::new(vec![-1.0, 0.0]));
        assert_eq!(pair_collision_time(&a, &b, &1e-9), Some(1.0));
        assert_eq!(pair_collision_time(&a, &b, &1e-12), None);
    }

    #[test]
    fn three_way_simultaneous_cluster() {
        // all meet at x = 0, t = 1; brute force: every pairwise time is 1
        let ps = vec![
            part(0, 1, &[-2], &[2]),
            part(1, 1, &[3], &[-3]),
            part(2, 2, &[1], &[-1]),
            part(3, 1, &[10], &[0]),
        ];
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(pair_collision_time(&ps[i], &ps[j], &zero()), Some(q(1, 1)));
            }
        }
        let state = SystemState::new(zero(), ps).unwrap();
        let (t, clusters) = next_event(&state, &q(100, 1), &zero(), &zero()).unwrap();
        assert_eq!(t, q(1, 1));
        assert_eq!(clusters, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn no_event_past_horizon() {
        let state = SystemState::new(zero(), vec![part(0, 1, &[0], &[1]), part(1, 1, &[4], &[-1])]).unwrap();
        assert!(next_event(&state, &q(1, 1), &zero(), &zero()).is_none());
        assert!(next_event(&state, &q(2, 1), &zero(), &zero()).is_some());
    }

    #[test]
    fn float_contact_just_past_horizon_snaps_to_it() {
        let ps = vec![
            Particle::new(0, 1.0, VecN::new(vec![0.0]), VecN::new(vec![1.0])),
            Particle::new(1, 1.0, VecN::new(vec![2.0 + 2e-14]), VecN::new(vec![-1.0])),
        ];
        let state = SystemState::new(0.0, ps).unwrap();
        let (t, clusters) = next_event(&state, &1.0, &1e-9, &1e-12).unwrap();
        assert_eq!(t, 1.0);
        assert_eq!(clusters, vec![vec![0, 1]]);
        assert!(next_event(&state, &1.0, &1e-9, &1e-16).is_none());
    }

    #[test]
    fn merge_examples() {
        let a = part(0, 1, &[0, 0], &[0, 1]);
        let b = part(1, 1, &[0, 0], &[1, 0]);
        let m = merge_cluster(&[&a, &b], &zero()).unwrap();
        assert_eq!(m.particle.mass, q(2, 1));
        assert_eq!(m.particle.velocity, VecN::new(vec![q(1, 2), q(1, 2)]));
        assert_eq!(m.particle.members, vec![0, 1]);
        assert_eq!(m.energy_drop, q(1, 2));

        let a = part(0, 1, &[3], &[5]);
        let b = part(1, 1, &[3], &[-5]);
        assert!(merge_cluster(&[&a, &b], &zero()).unwrap().particle.velocity.is_zero());

        let a = part(0, 3, &[0], &[2]);
        let b = part(1, 1, &[0], &[-2]);
        let m = merge_cluster(&[&a, &b], &zero()).unwrap();
        assert_eq!(m.particle.mass, q(4, 1));
        assert_eq!(m.particle.velocity, VecN::from_ints(&[1]));
        assert_eq!(m.particle.position, VecN::from_ints(&[0]));
    }

    #[test]
    fn merge_requires_coincidence() {
        let a = part(0, 1, &[0], &[1]);
        let b = part(1, 1, &[1], &[1]);
        assert_eq!(merge_cluster(&[&a, &b], &zero()), Err(Error::NonCoincidentCluster));
    }

    #[test]
    fn equal_velocities_release_no_energy() {
        let a = part(0, 2, &[1, 1], &[3, -1]);
        let b = part(1, 5, &[1, 1], &[3, -1]);
        assert!(merge_cluster(&[&a, &b], &zero()).unwrap().energy_drop.is_zero());
    }
}
