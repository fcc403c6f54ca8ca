//! Kinetic energy along a trajectory, the discounted energy functional, and
//! moments of the empirical measure.

use alloc::format;
use alloc::vec::Vec;

use super::trajectory::Trajectory;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::VecN;

/// Right-continuous piecewise-constant `E(t)`: `values[i]` holds on
/// `[breakpoints[i], breakpoints[i + 1])`, the last value up to infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyProfile<S> {
    pub breakpoints: Vec<S>,
    pub values: Vec<S>,
}

impl<S: Scalar> EnergyProfile<S> {
    pub fn constant(value: S) -> Self {
        EnergyProfile {
            breakpoints: alloc::vec![S::zero()],
            values: alloc::vec![value],
        }
    }

    pub fn value_at(&self, t: &S) -> &S {
        let idx = self.breakpoints.iter().rposition(|b| b <= t).unwrap_or(0);
        &self.values[idx]
    }
}

/// Kinetic energy `½ Σ m_i |v_i(t+)|²` at `t` over the original particles.
pub fn energy_at<S: Scalar>(traj: &Trajectory<S>, t: &S) -> S {
    let twice = (0..traj.len()).fold(S::zero(), |acc, i| {
        acc + traj.masses[i].clone() * traj.velocity(i, t).norm_sq()
    });
    twice * S::half()
}

pub fn energy_profile<S: Scalar>(traj: &Trajectory<S>) -> EnergyProfile<S> {
    let grid = traj.breakpoints();
    let mut breakpoints: Vec<S> = Vec::new();
    let mut values: Vec<S> = Vec::new();
    // The horizon itself is included: merges happening exactly there set
    // the energy carried beyond it.
    for t in &grid {
        let e = energy_at(traj, t);
        if values.last() == Some(&e) {
            continue;
        }
        breakpoints.push(t.clone());
        values.push(e);
    }
    EnergyProfile { breakpoints, values }
}

/// Non-increasing check; the float backend allows a relative slack of 1e-12.
pub fn is_energy_admissible<S: Scalar>(profile: &EnergyProfile<S>) -> bool {
    profile.values.windows(2).all(|w| {
        if S::is_exact() {
            w[1] <= w[0]
        } else {
            let (a, b) = (w[0].to_f64(), w[1].to_f64());
            b <= a + 1e-12 * libm::fmax(1.0, libm::fabs(a))
        }
    })
}

/// `∫_0^∞ e^{-t/ε} E(t) dt` in closed form.
pub fn j_epsilon<S: Scalar>(profile: &EnergyProfile<S>, eps: f64) -> Result<f64> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::InvalidEpsilon);
    }
    let n = profile.values.len();
    let mut total = 0.0;
    for i in 0..n {
        let e = profile.values[i].to_f64();
        let a = libm::exp(-profile.breakpoints[i].to_f64() / eps);
        let b = if i + 1 < n {
            libm::exp(-profile.breakpoints[i + 1].to_f64() / eps)
        } else {
            0.0
        };
        total += e * eps * (a - b);
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Moments<S> {
    pub mass: S,
    pub momentum: VecN<S>,
    pub energy: S,
}

/// Mass, momentum and energy of `ρ(t) = Σ m_i δ_{x_i(t)}` with velocity
/// field `v(t+)`.
pub fn eulerian_moments<S: Scalar>(traj: &Trajectory<S>, t: &S) -> Result<Moments<S>> {
    if t.is_negative() || *t > traj.horizon {
        return Err(Error::TimeOutOfRange(format!("{t}")));
    }
    let dim = traj.dimension();
    let mut mass = S::zero();
    let mut momentum = VecN::zeros(dim);
    for i in 0..traj.len() {
        let m = &traj.masses[i];
        mass = mass + m.clone();
        momentum = &momentum + &traj.velocity(i, t).scale(m);
    }
    Ok(Moments {
        mass,
        momentum,
        energy: energy_at(traj, t),
    })
}
