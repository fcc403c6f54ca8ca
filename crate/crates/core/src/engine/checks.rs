//! Solution checkers for arbitrary piecewise-linear candidate trajectories.
//!
//! The coincidence structure of a pair is computed on the common refinement of
//! both breakpoint grids. On each refined interval both paths are affine, so
//! the pair either coincides throughout, touches at a single instant, or stays
//! apart.

use alloc::vec::Vec;

use super::trajectory::{Segment, Trajectory};
use crate::scalar::Scalar;
use crate::vector::{coincide_unchecked, VecN};

#[derive(Clone, Debug, PartialEq)]
pub enum Contact<S> {
    Apart,
    Whole,
    Instant(S),
}

/// Contact state of paths `i` and `j` on each interval of `grid`.
pub fn pair_contacts<S: Scalar>(traj: &Trajectory<S>, i: usize, j: usize, grid: &[S], tol: &S) -> Vec<Contact<S>> {
    grid.windows(2)
        .map(|w| {
            let (a, b) = (&w[0], &w[1]);
            let si = segment_on(traj, i, a, b);
            let sj = segment_on(traj, j, a, b);
            contact_on(si, sj, a, b, tol)
        })
        .collect()
}

/// The segment of path `i` covering the open interval `(a, b)`.
fn segment_on<'t, S: Scalar>(traj: &'t Trajectory<S>, i: usize, a: &S, b: &S) -> &'t Segment<S> {
    let mid = (a.clone() + b.clone()) * S::half();
    traj.segment_at(i, &mid)
}

fn contact_on<S: Scalar>(si: &Segment<S>, sj: &Segment<S>, a: &S, b: &S, tol: &S) -> Contact<S> {
    let zero = VecN::zeros(si.velocity.dim());
    let da = &si.position_at(a) - &sj.position_at(a);
    let dv = &si.velocity - &sj.velocity;
    let db = da.advance(&dv, &(b.clone() - a.clone()));
    let near_a = coincide_unchecked(&da, &zero, tol);
    let near_b = coincide_unchecked(&db, &zero, tol);
    if near_a && near_b {
        return Contact::Whole;
    }
    if near_a {
        return Contact::Instant(a.clone());
    }
    if near_b {
        return Contact::Instant(b.clone());
    }
    let dv2 = dv.norm_sq();
    if dv2.is_zero() {
        return Contact::Apart;
    }
    let s = -da.dot(&dv) / dv2;
    if !s.is_positive() || s.clone() + a.clone() >= *b {
        return Contact::Apart;
    }
    if coincide_unchecked(&da.advance(&dv, &s), &zero, tol) {
        Contact::Instant(a.clone() + s)
    } else {
        Contact::Apart
    }
}

/// A pair that touches at `first_contact` but is apart right after
/// `separation`.
#[derive(Clone, Debug, PartialEq)]
pub struct StickyViolation<S> {
    pub pair: (usize, usize),
    pub first_contact: S,
    pub separation: S,
}

fn pair_violation<S: Scalar>(traj: &Trajectory<S>, i: usize, j: usize, tol: &S) -> Option<StickyViolation<S>> {
    let grid = traj.breakpoints_of(&[i, j]);
    let contacts = pair_contacts(traj, i, j, &grid, tol);
    let start = contacts.iter().position(|c| !matches!(c, Contact::Apart))?;
    let first_contact = match &contacts[start] {
        Contact::Whole => grid[start].clone(),
        Contact::Instant(t) => t.clone(),
        Contact::Apart => unreachable!(),
    };
    for (k, c) in contacts.iter().enumerate().skip(start) {
        let (a, b) = (&grid[k], &grid[k + 1]);
        match c {
            Contact::Whole => {}
            Contact::Instant(t) if k == start && t.within(b, &traj.time_tolerance) => {
                // touching at the right end; the next interval decides
            }
            Contact::Instant(t) if k == start => {
                return Some(StickyViolation {
                    pair: (i, j),
                    first_contact,
                    separation: t.clone(),
                });
            }
            _ => {
                return Some(StickyViolation {
                    pair: (i, j),
                    first_contact: first_contact.clone(),
                    separation: S::max_of(a.clone(), first_contact),
                });
            }
        }
    }
    None
}

/// Every pair that violates stickiness, in lexicographic pair order.
pub fn check_sticky<S: Scalar>(traj: &Trajectory<S>, tol: &S) -> Vec<StickyViolation<S>> {
    let n = traj.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if let Some(v) = pair_violation(traj, i, j, tol) {
                out.push(v);
            }
        }
    }
    out
}

/// `Σ m_i m_j` over unordered pairs that touch and later separate.
pub fn nonstickiness_phi<S: Scalar>(traj: &Trajectory<S>, tol: &S) -> S {
    phi_of(&traj.masses, &check_sticky(traj, tol))
}

pub fn phi_of<S: Scalar>(masses: &[S], violations: &[StickyViolation<S>]) -> S {
    violations.iter().fold(S::zero(), |acc, v| {
        acc + masses[v.pair.0].clone() * masses[v.pair.1].clone()
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakReport<S> {
    /// `max_{i,t} |x_i(t) − x̄_i − ∫_0^t V_i|²`.
    pub max_residual_sq: S,
    /// Square root of the above, in floating point.
    pub max_residual: f64,
    /// Index and time where the maximum is attained.
    pub worst: Option<(usize, S)>,
    pub pass: bool,
}

/// Residual of the integral identity `x_i(t) = x̄_i + ∫_0^t V_i(s) ds`, where
/// `V_i` averages the initial velocities over the particles coinciding with
/// `i` on a set of positive measure. Isolated contacts are ignored.
pub fn check_weak<S: Scalar>(traj: &Trajectory<S>, tol: &S) -> WeakReport<S> {
    let n = traj.len();
    let grid = traj.breakpoints();
    let mut integrated: Vec<VecN<S>> = (0..n).map(|i| traj.initial_position(i).clone()).collect();
    let mut max_sq = S::zero();
    let mut worst = None;
    let zero = VecN::zeros(traj.dimension());
    for w in grid.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let segs: Vec<&Segment<S>> = (0..n).map(|i| segment_on(traj, i, a, b)).collect();
        let at_a: Vec<VecN<S>> = segs.iter().map(|s| s.position_at(a)).collect();
        let at_b: Vec<VecN<S>> = segs.iter().map(|s| s.position_at(b)).collect();
        let dt = b.clone() - a.clone();
        for i in 0..n {
            let mut mass = S::zero();
            let mut momentum = zero.clone();
            for j in 0..n {
                let together = j == i
                    || (coincide_unchecked(&at_a[i], &at_a[j], tol) && coincide_unchecked(&at_b[i], &at_b[j], tol));
                if together {
                    mass = mass + traj.masses[j].clone();
                    momentum = &momentum + &traj.initial_velocity(j).scale(&traj.masses[j]);
                }
            }
            let v = momentum.scale(&(S::one() / mass));
            integrated[i] = integrated[i].advance(&v, &dt);
            let r = (&at_b[i] - &integrated[i]).norm_sq();
            if r > max_sq {
                max_sq = r;
                worst = Some((i, b.clone()));
            }
        }
    }
    let pass = if tol.is_zero() {
        max_sq.is_zero()
    } else {
        max_sq <= tol.clone() * tol.clone()
    };
    WeakReport {
        max_residual: libm::sqrt(max_sq.to_f64()),
        max_residual_sq: max_sq,
        worst,
        pass,
    }
}
