//! Replacing point masses by small collapsing clouds.
//!
//! A cloud around `x̄` with `s > 0` occupies the ball of radius `r = s²`.
//! Its samples carry masses proportional to the bump
//! `ψ(x) = a·exp(−1/(r² − |x − x̄|²))` and velocities
//! `v̄ + (x̄ − x)/s`, so every sample sits at `x̄ + t v̄ + (1 − t/s)(x − x̄)`
//! and the whole cloud lands on `x̄ + s v̄` at `t = s`, simultaneously and
//! nowhere earlier. Samples come in antipodal pairs (plus the center for odd
//! counts), which makes the cloud's barycenter `x̄` and its momentum `M v̄`
//! exact.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::example4::ParticleData;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::Scenario;
use crate::vector::VecN;

/// Samples are drawn where `ψ(x)/ψ(x̄)` is at least this ratio; beyond it the
/// bump carries no representable mass relative to the center.
pub const RELATIVE_WEIGHT_FLOOR: f64 = 1e-12;
/// Grid resolution of sample coordinates inside the sampling ball.
const GRID: i64 = 1 << 12;
const SAMPLE_ATTEMPTS: usize = 100_000;
const HALVING_ROUNDS: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct BallCloud<S> {
    pub center: VecN<S>,
    /// Collapse time; the radius is `s²`.
    pub s: S,
    pub amplitude: S,
    pub base_velocity: VecN<S>,
    pub target_mass: S,
}

impl<S: Scalar> BallCloud<S> {
    pub fn new(center: VecN<S>, s: S, base_velocity: VecN<S>, target_mass: S) -> Result<Self> {
        if !s.is_positive() {
            return Err(Error::InvalidParameters("cloud scale must be positive".into()));
        }
        if !target_mass.is_positive() {
            return Err(Error::InvalidParameters("cloud mass must be positive".into()));
        }
        center.check_dim(&base_velocity)?;
        Ok(BallCloud {
            center,
            s,
            amplitude: S::one(),
            base_velocity,
            target_mass,
        })
    }

    pub fn radius(&self) -> S {
        self.s.clone() * self.s.clone()
    }

    /// Where the cloud concentrates: `x̄ + s v̄`.
    pub fn collapse_point(&self) -> VecN<S> {
        self.center.advance(&self.base_velocity, &self.s)
    }
}

/// `ψ(x)`; zero outside the open ball.
pub fn smooth_bump<S: Scalar>(cloud: &BallCloud<S>, x: &VecN<S>) -> f64 {
    let r = cloud.radius().to_f64();
    let d2 = (x - &cloud.center).norm_sq().to_f64();
    let gap = r * r - d2;
    if gap <= 0.0 {
        return 0.0;
    }
    cloud.amplitude.to_f64() * libm::exp(-1.0 / gap)
}

/// `ln(ψ(x)/ψ(x̄))`, finite inside the ball even when `ψ` underflows.
fn log_relative_weight(r: f64, d2: f64) -> f64 {
    1.0 / (r * r) - 1.0 / (r * r - d2)
}

/// `v̄ + (x̄ − x)/s`.
pub fn collapse_velocity<S: Scalar>(center: &VecN<S>, s: &S, base_velocity: &VecN<S>, x: &VecN<S>) -> VecN<S> {
    base_velocity + &(center - x).scale(&(S::one() / s.clone()))
}

/// Radius of the sub-ball on which `ψ/ψ(x̄) >= RELATIVE_WEIGHT_FLOOR`.
fn sampling_radius(r: f64) -> f64 {
    let c = -libm::log(RELATIVE_WEIGHT_FLOOR);
    let r2 = r * r;
    let d2 = c * r2 * r2 / (1.0 + c * r2);
    libm::fmin(libm::sqrt(d2), r) * (1.0 - 1e-9)
}

/// `samples` particles inside the cloud's ball: seeded grid points (exact
/// in both backends) in antipodal pairs, plus the center for odd counts.
/// Masses are proportional to `ψ` and sum to the target mass.
pub fn discretize_ball<S: Scalar>(cloud: &BallCloud<S>, samples: usize, seed: u64) -> Result<Vec<ParticleData<S>>> {
    if samples == 0 {
        return Err(Error::InvalidParameters("need at least one sample".into()));
    }
    let dim = cloud.center.dim();
    let r = cloud.radius();
    let r_f = r.to_f64();
    let rho = S::from_f64(sampling_radius(r_f))
        .filter(|x| x.is_positive())
        .ok_or_else(|| Error::InvalidParameters(format!("cloud radius {r_f:e} is too small")))?;
    let rho2 = rho.clone() * rho.clone();
    let r2 = r.clone() * r.clone();
    let step = rho.clone() / S::from_int(GRID);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut offsets: Vec<VecN<S>> = Vec::new();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    if samples % 2 == 1 {
        offsets.push(VecN::zeros(dim));
        seen.insert(alloc::vec![0; dim]);
    }
    let mut attempts = 0;
    while offsets.len() < samples {
        attempts += 1;
        if attempts > SAMPLE_ATTEMPTS {
            return Err(Error::InvalidParameters(format!(
                "could not place {samples} distinct samples"
            )));
        }
        let ks: Vec<i64> = (0..dim).map(|_| rng.random_range(-GRID..=GRID)).collect();
        let neg: Vec<i64> = ks.iter().map(|k| -k).collect();
        if ks.iter().all(|&k| k == 0) || seen.contains(&ks) || seen.contains(&neg) {
            continue;
        }
        let d = VecN::new(ks.iter().map(|&k| step.clone() * S::from_int(k)).collect());
        let d2 = d.norm_sq();
        if d2 >= rho2 || d2 >= r2 {
            continue;
        }
        seen.insert(ks);
        seen.insert(neg);
        offsets.push(-&d);
        offsets.push(d);
    }
    let weights: Vec<S> = offsets
        .iter()
        .map(|d| {
            let w = libm::exp(log_relative_weight(r_f, d.norm_sq().to_f64()));
            S::from_f64(w).expect("finite weight")
        })
        .collect();
    let total = weights.iter().fold(S::zero(), |a, w| a + w.clone());
    Ok(offsets
        .iter()
        .zip(weights)
        .map(|(d, w)| {
            let x = &cloud.center + d;
            let v = collapse_velocity(&cloud.center, &cloud.s, &cloud.base_velocity, &x);
            (cloud.target_mass.clone() * w / total.clone(), x, v)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothedScenario<S> {
    pub scenario: Scenario<S>,
    pub clouds: Vec<BallCloud<S>>,
    /// Source point mass of every particle of `scenario`.
    pub origin: Vec<usize>,
}

/// Pair `(i, j)` is separated: balls disjoint at `t = 0` and the center
/// paths stay farther apart than `r_i + r_j` until both clouds collapsed.
fn separated<S: Scalar>(a: &BallCloud<S>, b: &BallCloud<S>) -> bool {
    let reach = a.radius() + b.radius();
    let reach2 = reach.clone() * reach;
    let d0 = &a.center - &b.center;
    let dv = &a.base_velocity - &b.base_velocity;
    let until = S::max_of(a.s.clone(), b.s.clone());
    let dv2 = dv.norm_sq();
    let t = if dv2.is_zero() {
        S::zero()
    } else {
        let t = -d0.dot(&dv) / dv2;
        S::min_of(S::max_of(t, S::zero()), until)
    };
    d0.norm_sq() > reach2 && d0.advance(&dv, &t).norm_sq() > reach2
}

/// Replaces every particle of `base` by a cloud with the same mass, center
/// and base velocity. Cloud scales start at `scales[k]` and the scales of
/// both clouds of an offending pair are halved until every pair is
/// separated; a scale below `floor` is an error.
pub fn smooth_scenario<S: Scalar>(
    base: &Scenario<S>,
    scales: &[S],
    floor: &S,
    samples: usize,
    seed: u64,
) -> Result<SmoothedScenario<S>> {
    if scales.len() != base.len() {
        return Err(Error::InvalidParameters(format!(
            "{} scales for {} particles",
            scales.len(),
            base.len()
        )));
    }
    let mut clouds = base
        .particles
        .iter()
        .zip(scales)
        .map(|(p, s)| BallCloud::new(p.position.clone(), s.clone(), p.velocity.clone(), p.mass.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut round = 0;
    loop {
        let mut offending: BTreeSet<usize> = BTreeSet::new();
        for i in 0..clouds.len() {
            for j in i + 1..clouds.len() {
                if !separated(&clouds[i], &clouds[j]) {
                    offending.insert(i);
                    offending.insert(j);
                }
            }
        }
        if offending.is_empty() {
            break;
        }
        round += 1;
        if round > HALVING_ROUNDS {
            return Err(Error::ScheduleInfeasible);
        }
        for &k in &offending {
            clouds[k].s = clouds[k].s.clone() * S::half();
            if clouds[k].s < *floor {
                return Err(Error::ScheduleInfeasible);
            }
        }
    }
    let mut data = Vec::new();
    let mut origin = Vec::new();
    for (k, cloud) in clouds.iter().enumerate() {
        let pts = discretize_ball(cloud, samples, seed.wrapping_add(k as u64))?;
        origin.extend(core::iter::repeat_n(k, pts.len()));
        data.extend(pts);
    }
    let scenario = Scenario {
        dimension: base.dimension,
        tolerance: base.tolerance.clone(),
        time_tolerance: base.time_tolerance.clone(),
        horizon: base.horizon.clone(),
        event_cap: base.event_cap,
        particles: data
            .into_iter()
            .enumerate()
            .map(|(i, (m, x, v))| crate::particle::Particle::new(i, m, x, v))
            .collect(),
    };
    scenario.validate()?;
    Ok(SmoothedScenario {
        scenario,
        clouds,
        origin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::example2_scenario;
    use crate::engine::evolve;
    use crate::particle::{barycenter, momentum, Particle};
    use crate::scalar::Rational;
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn cloud() -> BallCloud<Rational> {
        BallCloud::new(
            VecN::new(vec![q(1, 3), q(-2, 5)]),
            q(1, 4),
            VecN::new(vec![q(1, 2), q(1, 1)]),
            q(3, 8),
        )
        .unwrap()
    }

    #[test]
    fn bump_support_and_center_velocity() {
        let c = cloud();
        let edge = &c.center + &VecN::new(vec![c.radius(), q(0, 1)]);
        assert_eq!(smooth_bump(&c, &edge), 0.0);
        assert!(smooth_bump(&c, &c.center) > 0.0);
        assert_eq!(
            collapse_velocity(&c.center, &c.s, &c.base_velocity, &c.center),
            c.base_velocity
        );
        let v = collapse_velocity(&c.center, &c.s, &c.base_velocity, &edge);
        let expected = &c.base_velocity - &(&edge - &c.center).scale(&(q(1, 1) / c.s.clone()));
        assert_eq!(v, expected);
    }

    #[test]
    fn samples_inside_with_exact_mass_and_momentum() {
        let c = cloud();
        let pts = discretize_ball(&c, 7, 42).unwrap();
        assert_eq!(pts.len(), 7);
        let r2 = c.radius() * c.radius();
        let particles: Vec<Particle<Rational>> = pts
            .iter()
            .enumerate()
            .map(|(i, (m, x, v))| {
                assert!((x - &c.center).norm_sq() < r2);
                Particle::new(i, m.clone(), x.clone(), v.clone())
            })
            .collect();
        let total = particles.iter().fold(q(0, 1), |a, p| a + p.mass.clone());
        assert_eq!(total, c.target_mass);
        assert_eq!(barycenter(&particles).unwrap(), c.center);
        let state = crate::particle::SystemState::new(q(0, 1), particles).unwrap();
        assert_eq!(momentum(&state), c.base_velocity.scale(&c.target_mass));
    }

    #[test]
    fn single_cloud_collapses_once_at_s() {
        let c = cloud();
        let pts = discretize_ball(&c, 6, 3).unwrap();
        let sc = Scenario::new(pts, q(1, 1)).unwrap();
        let (traj, log) = evolve(&sc).unwrap();
        assert_eq!(log.times(), vec![c.s.clone()]);
        assert_eq!(log.events[0].clusters.len(), 1);
        assert_eq!(log.events[0].clusters[0].members.len(), 6);
        assert_eq!(traj.position(0, &c.s), c.collapse_point());
    }

    #[test]
    fn smoothed_example2_meets_near_one_one() {
        let base = example2_scenario(2.0f64).unwrap();
        let sm = smooth_scenario(&base, &[0.1, 0.1], &1e-6, 5, 9).unwrap();
        let (traj, log) = evolve(&sm.scenario).unwrap();
        assert_eq!(log.len(), 2, "{:?}", log.times());
        assert!((log.events[0].time - 0.1).abs() < 1e-12);
        assert_eq!(log.events[0].clusters.len(), 2);
        assert!((log.events[1].time - 1.0).abs() < 1e-6);
        let at = traj.position(0, &1.0);
        assert!((at[0] - 1.0).abs() < 1e-6 && (at[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn overlapping_schedule_is_halved() {
        let base = example2_scenario(q(2, 1)).unwrap();
        let sm = smooth_scenario(&base, &[q(1, 1), q(1, 1)], &q(1, 1000), 1, 0).unwrap();
        assert!(sm.clouds.iter().all(|c| c.s < q(1, 1)));
        assert!(matches!(
            smooth_scenario(&base, &[q(1, 1), q(1, 1)], &q(9, 10), 1, 0),
            Err(Error::ScheduleInfeasible)
        ));
    }
}
