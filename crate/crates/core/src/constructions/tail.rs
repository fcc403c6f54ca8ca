//! The one-dimensional geometric tail: masses `α^k`, positions `β^k`,
//! velocities `1 − γ^k`.
//!
//! The compound of all particles `j >= k` moves with the barycenter `b_k(t)`
//! and absorbs particle `k − 1` at time `t_{k−1}`. Both quantities have closed
//! forms; the predicates below certify the orderings needed to aim the
//! vertical bullets of the non-existence construction.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TailParams<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
}

impl<S: Scalar> TailParams<S> {
    pub fn new(alpha: S, beta: S, gamma: S) -> Self {
        TailParams { alpha, beta, gamma }
    }

    /// `(1/4, 1/2, 3/4)`, the reference triple used throughout the tests.
    pub fn reference() -> Self {
        TailParams::new(S::from_ratio(1, 4), S::from_ratio(1, 2), S::from_ratio(3, 4))
    }

    /// All three parameters lie in `(0, 1)`.
    pub fn check_unit_interval(&self) -> Result<()> {
        for (name, v) in [("alpha", &self.alpha), ("beta", &self.beta), ("gamma", &self.gamma)] {
            if !(v.is_positive() && *v < S::one()) {
                return Err(Error::InvalidParameters(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }

    /// `1 / (1 + β + γ)`.
    pub fn alpha_bound(&self) -> S {
        S::one() / (S::one() + self.beta.clone() + self.gamma.clone())
    }

    /// `0 < β < γ < 1` and `0 < α < 1/(1 + β + γ)`; required by every
    /// scenario generator.
    pub fn validate(&self) -> Result<()> {
        self.check_unit_interval()?;
        if self.beta >= self.gamma {
            return Err(Error::InvalidParameters(format!(
                "beta = {} must be smaller than gamma = {}",
                self.beta, self.gamma
            )));
        }
        let bound = self.alpha_bound();
        if self.alpha >= bound {
            return Err(Error::InvalidParameters(format!(
                "alpha = {} violates the overtaking bound alpha < 1/(1 + beta + gamma) = {}",
                self.alpha, bound
            )));
        }
        Ok(())
    }

    pub fn mass(&self, k: u32) -> S {
        self.alpha.powi(k)
    }

    /// Free position `x_k(t) = β^k + t(1 − γ^k)`; `k = 0` is the resting
    /// point `1`.
    pub fn position(&self, k: u32, t: &S) -> S {
        self.beta.powi(k) + t.clone() * self.velocity(k)
    }

    pub fn velocity(&self, k: u32) -> S {
        S::one() - self.gamma.powi(k)
    }
}

/// Closed-form barycenter `b_k(t)` of the infinite tail `{x_j : j >= k}`.
pub fn barycenter_tail<S: Scalar>(p: &TailParams<S>, k: u32, t: &S) -> Result<S> {
    p.check_unit_interval()?;
    if k < 1 {
        return Err(Error::InvalidParameters("tail index must be >= 1".into()));
    }
    let one = S::one();
    let (a, b, g) = (&p.alpha, &p.beta, &p.gamma);
    let term_pos = b.powi(k) / (one.clone() - a.clone() * b.clone());
    let term_drift = t.clone() / (one.clone() - a.clone());
    let term_slow = t.clone() * g.powi(k) / (one.clone() - a.clone() * g.clone());
    Ok((one - a.clone()) * (term_pos + term_drift - term_slow))
}

/// Barycenter of the finite set `{x_j(t) : from <= j <= to}`.
pub fn barycenter_range<S: Scalar>(p: &TailParams<S>, from: u32, to: u32, t: &S) -> S {
    barycenter_subset(p, (from..=to).collect::<Vec<_>>().as_slice(), t)
}

pub fn barycenter_subset<S: Scalar>(p: &TailParams<S>, indices: &[u32], t: &S) -> S {
    let mut mass = S::zero();
    let mut moment = S::zero();
    for &j in indices {
        let m = p.mass(j);
        moment = moment + m.clone() * p.position(j, t);
        mass = mass + m;
    }
    moment / mass
}

/// `t_j`, the time at which the tail compound `b_{j+1}` reaches `x_j`
/// (`j >= 0`):
/// `[(1−β)/(1−αβ)]·[(1−αγ)/(1−γ)]·(β/γ)^j`.
pub fn hit_time<S: Scalar>(p: &TailParams<S>, j: u32) -> Result<S> {
    p.check_unit_interval()?;
    let one = S::one();
    let (a, b, g) = (&p.alpha, &p.beta, &p.gamma);
    Ok((one.clone() - b.clone()) / (one.clone() - a.clone() * b.clone())
        * ((one.clone() - a.clone() * g.clone()) / (one - g.clone()))
        * (b.clone() / g.clone()).powi(j))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OvertakingCheck<S> {
    pub k: u32,
    /// `t_{k−1}`.
    pub time: S,
    /// `x_{k+1}(t_{k−1})`.
    pub ahead: S,
    /// `x_{k−1}(t_{k−1})`.
    pub behind: S,
    /// `b_k(t_{k−1})`, equal to `behind`.
    pub barycenter: S,
    pub holds: bool,
}

/// At the instant the tail compound reaches `x_{k−1}`, particle `x_{k+1}`
/// is strictly ahead: `x_{k+1}(t_{k−1}) > x_{k−1}(t_{k−1}) = b_k(t_{k−1})`.
pub fn check_overtaking<S: Scalar>(p: &TailParams<S>, k: u32) -> Result<OvertakingCheck<S>> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!("k = {k} must exceed 1")));
    }
    let time = hit_time(p, k - 1)?;
    let ahead = p.position(k + 1, &time);
    let behind = p.position(k - 1, &time);
    let barycenter = barycenter_tail(p, k, &time)?;
    let agree = if S::is_exact() {
        barycenter == behind
    } else {
        let scale = libm::fmax(1.0, libm::fabs(behind.to_f64()));
        libm::fabs(barycenter.to_f64() - behind.to_f64()) <= 1e-12 * scale
    };
    if !agree {
        return Err(Error::InvalidParameters(format!(
            "tail barycenter {barycenter} misses x_(k-1) = {behind} at its hit time"
        )));
    }
    Ok(OvertakingCheck {
        k,
        holds: ahead > behind,
        time,
        ahead,
        behind,
        barycenter,
    })
}

/// A time `τ_k` strictly inside `(t_k, t_{k−1})` with `x_{k+1}(τ_k) > b_k(τ_k)`,
/// found by halving the distance to the upper end of the interval and
/// re-verified in the scalar's own arithmetic.
pub fn select_tau<S: Scalar>(p: &TailParams<S>, k: u32) -> Result<S> {
    if k < 1 {
        return Err(Error::InvalidParameters(format!("k = {k} must be at least 1")));
    }
    let lo = hit_time(p, k)?;
    let hi = hit_time(p, k - 1)?;
    let gap_at = |t: &S| -> Result<S> { Ok(p.position(k + 1, t) - barycenter_tail(p, k, t)?) };
    let mut width = hi.clone() - lo.clone();
    for _ in 0..200 {
        width = width * S::half();
        let tau = hi.clone() - width.clone();
        if tau > lo && tau < hi && gap_at(&tau)?.is_positive() {
            return Ok(tau);
        }
    }
    Err(Error::NoCertificate { k })
}

/// `b'_k(τ) < b_k(τ)` where `b'_k` is the barycenter of the subset of
/// `{k, …, k + cutoff}` selected by `mask` (bit `i` selects `k + i`) and
/// `b_k` the barycenter of the full truncated set. The subset must contain
/// `k` and be proper.
pub fn check_subset_barycenter<S: Scalar>(p: &TailParams<S>, k: u32, tau: &S, mask: u64, cutoff: u32) -> Result<bool> {
    let (sub, full) = subset_barycenters(p, k, tau, mask, cutoff)?;
    Ok(sub < full)
}

/// `(b'_k(τ), b_k(τ))` for a subset mask over `{k, …, k + cutoff}`.
pub fn subset_barycenters<S: Scalar>(p: &TailParams<S>, k: u32, tau: &S, mask: u64, cutoff: u32) -> Result<(S, S)> {
    if cutoff == 0 || cutoff > 62 {
        return Err(Error::MalformedSubset(format!("cutoff {cutoff} outside 1..=62")));
    }
    let full_mask = (1u64 << (cutoff + 1)) - 1;
    if mask & 1 == 0 {
        return Err(Error::MalformedSubset(format!("subset must contain k = {k}")));
    }
    if mask & !full_mask != 0 {
        return Err(Error::MalformedSubset(format!(
            "mask {mask:#b} selects indices beyond k + {cutoff}"
        )));
    }
    if mask == full_mask {
        return Err(Error::MalformedSubset("subset must be proper".into()));
    }
    let picked: Vec<u32> = (0..=cutoff).filter(|i| mask >> i & 1 == 1).map(|i| k + i).collect();
    Ok((
        barycenter_subset(p, &picked, tau),
        barycenter_range(p, k, k + cutoff, tau),
    ))
}

/// Enumerates every proper subset of `{k, …, k + cutoff}` containing `k`;
/// returns `(passing, total)`.
pub fn check_all_subsets<S: Scalar>(p: &TailParams<S>, k: u32, tau: &S, cutoff: u32) -> Result<(u64, u64)> {
    if cutoff == 0 || cutoff > 24 {
        return Err(Error::MalformedSubset(format!(
            "cutoff {cutoff} outside 1..=24 for enumeration"
        )));
    }
    // Prefix data so each subset costs O(cutoff) without re-deriving powers.
    let masses: Vec<S> = (0..=cutoff).map(|i| p.mass(k + i)).collect();
    let moments: Vec<S> = (0..=cutoff)
        .map(|i| masses[i as usize].clone() * p.position(k + i, tau))
        .collect();
    let total_mass = masses.iter().fold(S::zero(), |a, m| a + m.clone());
    let total_moment = moments.iter().fold(S::zero(), |a, m| a + m.clone());
    let full = total_moment / total_mass;
    let full_mask = (1u64 << (cutoff + 1)) - 1;
    let mut pass = 0u64;
    let mut total = 0u64;
    for upper in 0..(1u64 << cutoff) {
        let mask = upper << 1 | 1;
        if mask == full_mask {
            continue;
        }
        total += 1;
        let mut m = S::zero();
        let mut mo = S::zero();
        for i in 0..=cutoff as usize {
            if mask >> i & 1 == 1 {
                m = m + masses[i].clone();
                mo = mo + moments[i].clone();
            }
        }
        if mo / m < full {
            pass += 1;
        }
    }
    Ok((pass, total))
}
