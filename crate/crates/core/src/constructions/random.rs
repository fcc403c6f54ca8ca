//! Seeded random scenarios with planted collisions.
//!
//! Generic random data almost never collide, so a share of the particles is
//! aimed at common meeting points. All values are dyadic rationals with
//! small denominators, so the data convert to `f64` without rounding and
//! both backends start from the same scenario.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::scenario::Scenario;
use crate::vector::VecN;

fn dyadic(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    Rational::from_ratio(rng.random_range(lo * den..=hi * den), den)
}

fn dyadic_vec(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64, den: i64) -> VecN<Rational> {
    VecN::new((0..dim).map(|_| dyadic(rng, lo, hi, den)).collect())
}

/// `count` particles in dimension `dim` over `[0, horizon]`. Roughly half of
/// them are assigned, in groups of two or three, to planted meeting points
/// inside the horizon; the rest fly with random data. Initial positions are
/// pairwise distinct.
pub fn planted_scenario(dim: usize, count: usize, seed: u64, horizon: Rational) -> Result<Scenario<Rational>> {
    if dim == 0 || count == 0 {
        return Err(Error::InvalidParameters(
            "need positive dimension and particle count".into(),
        ));
    }
    if !horizon.is_positive() {
        return Err(Error::InvalidHorizon);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data: Vec<(Rational, VecN<Rational>, VecN<Rational>)> = Vec::with_capacity(count);
    let horizon_eighths = libm::floor(horizon.to_f64() * 8.0).max(1.0) as i64;
    'fill: while data.len() < count {
        let remaining = count - data.len();
        let group = if remaining >= 2 && rng.random_bool(0.5) {
            rng.random_range(2..=remaining.min(3))
        } else {
            1
        };
        let meet = dyadic_vec(&mut rng, dim, -4, 4, 4);
        let time = Rational::from_ratio(rng.random_range(1..=horizon_eighths), 8);
        for _ in 0..100 {
            let members: Vec<_> = (0..group)
                .map(|_| {
                    let mass = Rational::from_ratio(rng.random_range(1..=16), 8);
                    let velocity = dyadic_vec(&mut rng, dim, -2, 2, 4);
                    let position = if group == 1 {
                        dyadic_vec(&mut rng, dim, -6, 6, 4)
                    } else {
                        meet.advance(&velocity, &-time.clone())
                    };
                    (mass, position, velocity)
                })
                .collect();
            let distinct = members
                .iter()
                .enumerate()
                .all(|(a, m)| data.iter().all(|d| d.1 != m.1) && members[..a].iter().all(|o| o.1 != m.1));
            if distinct {
                data.extend(members);
                continue 'fill;
            }
        }
        return Err(Error::InvalidParameters("could not place distinct particles".into()));
    }
    Scenario::new(data, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::evolve;

    #[test]
    fn planted_data_collide_and_convert_exactly() {
        let mut with_events = 0;
        for seed in 0..20 {
            let sc = planted_scenario(2, 8, seed, Rational::from_int(4)).unwrap();
            assert_eq!(sc.len(), 8);
            let back = sc.convert::<f64>().unwrap().convert::<Rational>().unwrap();
            assert_eq!(back.particles, sc.particles);
            if !evolve(&sc).unwrap().1.is_empty() {
                with_events += 1;
            }
        }
        assert!(with_events >= 15);
        assert_eq!(
            planted_scenario(3, 5, 9, Rational::from_int(2)).unwrap(),
            planted_scenario(3, 5, 9, Rational::from_int(2)).unwrap()
        );
    }
}
