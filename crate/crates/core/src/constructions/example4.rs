//! Black particles on the horizontal axis and white bullets aimed at the
//! barycenters of the black tails.
//!
//! Black `k`: mass `α^k`, position `β^k e_1`, velocity `(1 − γ^k) e_1`.
//! White `k`: mass `α^k`, crossing the axis at time `τ_k` at an aimed point
//! `c_k e_1`. With truncated targeting `c_k` is the barycenter of the free
//! blacks `k..=N` at `τ_k`, so a bullet whose target compound is intact hits
//! it exactly; with infinite targeting `c_k = b_k(τ_k)`, the closed form for
//! the infinite tail, which no finite truncation realizes.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::tail::{barycenter_range, barycenter_tail, hit_time, select_tau, TailParams};
use crate::engine::{Decision, EventLog};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::scenario::Scenario;
use crate::vector::VecN;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Targeting {
    /// Barycenter of the finitely many blacks `k..=N`.
    Truncated,
    /// Closed-form barycenter of the infinite tail.
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `V_k = −e_2`, starting at `c_k e_1 + τ_k e_2`.
    Vertical,
    /// `V_k = e_1 − e_2/k`, starting at `c_k e_1 − τ_k V_k`.
    Slanted,
}

impl Targeting {
    pub fn name(self) -> &'static str {
        match self {
            Targeting::Truncated => "truncated",
            Targeting::Infinite => "infinite",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "truncated" => Some(Targeting::Truncated),
            "infinite" => Some(Targeting::Infinite),
            _ => None,
        }
    }
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Vertical => "vertical",
            Variant::Slanted => "slanted",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vertical" => Some(Variant::Vertical),
            "slanted" => Some(Variant::Slanted),
            _ => None,
        }
    }
}

/// Particle data `(mass, position, velocity)`.
pub type ParticleData<S> = (S, VecN<S>, VecN<S>);

#[derive(Clone, Debug, PartialEq)]
pub struct Example4Spec<S> {
    pub params: TailParams<S>,
    pub levels: u32,
    pub targeting: Targeting,
    pub variant: Variant,
    /// `t_0, …, t_N`.
    pub hit_times: Vec<S>,
    /// `τ_1, …, τ_N`.
    pub tau: Vec<S>,
    /// Aimed crossing abscissae `c_1, …, c_N`.
    pub targets: Vec<S>,
    pub blacks: Vec<ParticleData<S>>,
    pub whites: Vec<ParticleData<S>>,
}

/// Who met at one cluster of an event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterKind {
    /// Black levels involved (1-based).
    pub blacks: Vec<u32>,
    /// White levels involved (1-based).
    pub whites: Vec<u32>,
}

impl ClusterKind {
    pub fn is_black_only(&self) -> bool {
        self.whites.is_empty()
    }

    pub fn is_white_black(&self) -> bool {
        !self.whites.is_empty() && !self.blacks.is_empty()
    }
}

impl<S: Scalar> Example4Spec<S> {
    /// Scenario index of black level `k` (blacks first, then whites).
    pub fn black_index(&self, k: u32) -> usize {
        k as usize - 1
    }

    pub fn white_index(&self, k: u32) -> usize {
        self.levels as usize + k as usize - 1
    }

    /// Level and colour of a scenario index: `(k, is_white)`.
    pub fn level_of(&self, index: usize) -> (u32, bool) {
        let n = self.levels as usize;
        if index < n {
            (index as u32 + 1, false)
        } else {
            ((index - n) as u32 + 1, true)
        }
    }

    pub fn classify(&self, members: &[usize]) -> ClusterKind {
        let mut blacks = Vec::new();
        let mut whites = Vec::new();
        for &m in members {
            match self.level_of(m) {
                (k, false) => blacks.push(k),
                (k, true) => whites.push(k),
            }
        }
        ClusterKind { blacks, whites }
    }

    /// White levels that stuck to a cluster containing black mass.
    pub fn hit_set(&self, log: &EventLog<S>) -> BTreeSet<u32> {
        self.hit_set_mapped(log, |i| i)
    }

    /// As [`Self::hit_set`] for a scenario whose particle `i` descends from
    /// point mass `origin(i)` of this construction.
    pub fn hit_set_mapped(&self, log: &EventLog<S>, origin: impl Fn(usize) -> usize) -> BTreeSet<u32> {
        let mut hits = BTreeSet::new();
        for (_, c) in log.clusters() {
            if c.decision != Decision::Stick {
                continue;
            }
            let mapped: Vec<usize> = c.members.iter().map(|&i| origin(i)).collect();
            let kind = self.classify(&mapped);
            if kind.is_white_black() {
                hits.extend(kind.whites);
            }
        }
        hits
    }

    pub fn particles(&self) -> Vec<ParticleData<S>> {
        self.blacks.iter().chain(self.whites.iter()).cloned().collect()
    }
}

pub fn example4_scenario<S: Scalar>(
    params: &TailParams<S>,
    levels: u32,
    targeting: Targeting,
    variant: Variant,
    horizon: S,
) -> Result<(Scenario<S>, Example4Spec<S>)> {
    params.validate()?;
    if levels < 2 {
        return Err(Error::InvalidParameters(format!(
            "need at least 2 levels, got {levels}"
        )));
    }
    let hit_times = (0..=levels).map(|j| hit_time(params, j)).collect::<Result<Vec<_>>>()?;
    let tau = (1..=levels)
        .map(|k| select_tau(params, k))
        .collect::<Result<Vec<_>>>()?;
    let targets = (1..=levels)
        .map(|k| {
            let t = &tau[k as usize - 1];
            match targeting {
                Targeting::Truncated => Ok(barycenter_range(params, k, levels, t)),
                Targeting::Infinite => barycenter_tail(params, k, t),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let blacks: Vec<ParticleData<S>> = (1..=levels)
        .map(|k| {
            (
                params.mass(k),
                VecN::new(vec![params.beta.powi(k), S::zero()]),
                VecN::new(vec![params.velocity(k), S::zero()]),
            )
        })
        .collect();
    let whites: Vec<ParticleData<S>> = (1..=levels)
        .map(|k| {
            let t = tau[k as usize - 1].clone();
            let aim = VecN::new(vec![targets[k as usize - 1].clone(), S::zero()]);
            let velocity = match variant {
                Variant::Vertical => VecN::new(vec![S::zero(), -S::one()]),
                Variant::Slanted => VecN::new(vec![S::one(), -(S::one() / S::from_int(k as i64))]),
            };
            let start = aim.advance(&velocity, &-t);
            (params.mass(k), start, velocity)
        })
        .collect();
    let spec = Example4Spec {
        params: params.clone(),
        levels,
        targeting,
        variant,
        hit_times,
        tau,
        targets,
        blacks,
        whites,
    };
    let scenario = Scenario::new(spec.particles(), horizon)?;
    Ok((scenario, spec))
}
