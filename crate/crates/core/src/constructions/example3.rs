//! Backward binary-collision cascade in the plane.
//!
//! The construction starts from a unit mass resting at the origin for
//! `t >= 1/2` and, going backward in time, splits the compound present on
//! `[t_{i+1}, t_i)` into two halves `m_i = m_i^* = 2^{-i}` that collide at
//! `t_i = 2^{-i}` at the point `x_i^*`. Momentum conservation fixes
//! `v_i^* = 2 v_{i−1}^* − v_i`; the free velocity `v_i` is sampled (seeded,
//! rational) and resampled until no two of the resulting lines meet except
//! at their designed collisions. At depth `N` the remaining tail is a single
//! particle of mass `2^{-N}` moving with `v_N^*`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::scenario::Scenario;
use crate::vector::{coincide_unchecked, VecN};

/// Largest velocity-component denominator used when sampling `v_i`.
pub const VELOCITY_DENOMINATOR: i64 = 16;
/// Samples tried per level before giving up.
pub const REJECTION_BUDGET: usize = 1_000;

/// Data of one split level `i >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Example3Level<S> {
    pub index: u32,
    /// `t_i = 2^{-i}`.
    pub time: S,
    /// Collision point `x_i^*`.
    pub point: VecN<S>,
    /// `v_i`, velocity of `m_i` on `[0, t_i]`.
    pub velocity: VecN<S>,
    /// `v_i^*`, velocity of the compound `m_i^*` on `[t_{i+1}, t_i]`.
    pub compound_velocity: VecN<S>,
    /// `2^{-i}`.
    pub mass: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Example3Spec<S> {
    pub seed: u64,
    pub denominator: i64,
    /// Levels `1..=N` in order.
    pub levels: Vec<Example3Level<S>>,
}

impl<S: Scalar> Example3Spec<S> {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// `v_{i−1}^*` for `i >= 1`; `v_0^* = 0`.
    fn parent_velocity(&self, i: usize) -> VecN<S> {
        if i == 1 {
            VecN::zeros(2)
        } else {
            self.levels[i - 2].compound_velocity.clone()
        }
    }

    /// `v_{i−1}^* = (v_i + v_i^*)/2` at every level.
    pub fn momentum_balanced(&self) -> bool {
        (1..=self.depth()).all(|i| {
            let l = &self.levels[i - 1];
            let mean = (&l.velocity + &l.compound_velocity).scale(&S::half());
            coincide_unchecked(&mean, &self.parent_velocity(i), &S::default_tolerance())
        })
    }

    /// Initial data: `m_1, …, m_N`, then the tail particle.
    pub fn particles(&self) -> Vec<(S, VecN<S>, VecN<S>)> {
        let mut out: Vec<_> = self
            .levels
            .iter()
            .map(|l| {
                (
                    l.mass.clone(),
                    l.point.advance(&l.velocity, &-l.time.clone()),
                    l.velocity.clone(),
                )
            })
            .collect();
        let last = self.levels.last().expect("at least one level");
        out.push((
            last.mass.clone(),
            last.point.advance(&last.compound_velocity, &-last.time.clone()),
            last.compound_velocity.clone(),
        ));
        out
    }

    /// Converts every value through the exact representation.
    pub fn convert<T: Scalar>(&self) -> Example3Spec<T> {
        let c = |s: &S| T::from_rational(&s.to_rational().expect("finite"));
        let cv = |v: &VecN<S>| v.map_scalar(|s| c(s));
        Example3Spec {
            seed: self.seed,
            denominator: self.denominator,
            levels: self
                .levels
                .iter()
                .map(|l| Example3Level {
                    index: l.index,
                    time: c(&l.time),
                    point: cv(&l.point),
                    velocity: cv(&l.velocity),
                    compound_velocity: cv(&l.compound_velocity),
                    mass: c(&l.mass),
                })
                .collect(),
        }
    }
}

/// A ballistic line `point + (t − time)·velocity`.
#[derive(Clone, Debug)]
struct Line<S> {
    time: S,
    point: VecN<S>,
    velocity: VecN<S>,
}

enum Meeting<S> {
    Never,
    At(S),
    Always,
}

fn meeting<S: Scalar>(a: &Line<S>, b: &Line<S>, horizon: &S, tol: &S) -> Meeting<S> {
    // Offsets at t = 0.
    let pa = a.point.advance(&a.velocity, &-a.time.clone());
    let pb = b.point.advance(&b.velocity, &-b.time.clone());
    let d0 = &pa - &pb;
    let dv = &a.velocity - &b.velocity;
    let zero = VecN::zeros(d0.dim());
    let dv2 = dv.norm_sq();
    if dv2.is_zero() {
        return if coincide_unchecked(&d0, &zero, tol) {
            Meeting::Always
        } else {
            Meeting::Never
        };
    }
    let t = -d0.dot(&dv) / dv2;
    if t.is_negative() || t > *horizon {
        return Meeting::Never;
    }
    if coincide_unchecked(&d0.advance(&dv, &t), &zero, tol) {
        Meeting::At(t)
    } else {
        Meeting::Never
    }
}

/// Lines of level `i` as `(free line, compound line)`.
fn level_lines<S: Scalar>(l: &Example3Level<S>) -> [Line<S>; 2] {
    [
        Line {
            time: l.time.clone(),
            point: l.point.clone(),
            velocity: l.velocity.clone(),
        },
        Line {
            time: l.time.clone(),
            point: l.point.clone(),
            velocity: l.compound_velocity.clone(),
        },
    ]
}

/// Checks the lines of level `i` against each other and against every
/// earlier level. The only admissible meetings are the designed ones at
/// `t_i`: the two lines of level `i` with each other and with the compound
/// line of level `i − 1`.
fn level_is_clear<S: Scalar>(levels: &[Example3Level<S>], i: usize, horizon: &S) -> bool {
    let tol = S::default_tolerance();
    let time_tol = S::default_time_tolerance();
    let here = &levels[i];
    let mine = level_lines(here);
    let designed = |m: Meeting<S>| match m {
        Meeting::Never => true,
        Meeting::At(t) => t.within(&here.time, &time_tol),
        Meeting::Always => false,
    };
    if !designed(meeting(&mine[0], &mine[1], horizon, &tol)) {
        return false;
    }
    for (j, earlier) in levels[..i].iter().enumerate() {
        let theirs = level_lines(earlier);
        for line in &mine {
            for (b, other) in theirs.iter().enumerate() {
                let m = meeting(line, other, horizon, &tol);
                let ok = if j + 1 == i && b == 1 {
                    designed(m)
                } else {
                    matches!(m, Meeting::Never)
                };
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff no two lines `x_i(t) = x_i^* + (t − t_i) v_i`,
/// `x_i^*(t) = x_i^* + (t − t_i) v_i^*` coincide at a common
/// `t ∈ [0, horizon]`, apart from the designed collisions at each `t_i`.
pub fn nip_check<S: Scalar>(spec: &Example3Spec<S>, horizon: &S) -> bool {
    (0..spec.levels.len()).all(|i| level_is_clear(&spec.levels, i, horizon))
}

fn sample_velocity(rng: &mut ChaCha8Rng, den: i64) -> VecN<Rational> {
    VecN::new(
        (0..2)
            .map(|_| Rational::from_ratio(rng.random_range(-den..=den), den))
            .collect(),
    )
}

/// Generates the truncated cascade with `levels` splits (`levels + 1`
/// particles). All data are built exactly and then converted to `S`; the
/// dyadic times and the sampled velocities are exact in binary as well.
pub fn example3_scenario<S: Scalar>(levels: u32, seed: u64, horizon: S) -> Result<(Scenario<S>, Example3Spec<S>)> {
    if levels < 2 {
        return Err(Error::InvalidParameters(alloc::format!(
            "need at least 2 levels, got {levels}"
        )));
    }
    if levels > 60 {
        return Err(Error::InvalidParameters(alloc::format!(
            "at most 60 levels are supported, got {levels}"
        )));
    }
    let horizon_q = horizon.to_rational().ok_or(Error::InvalidHorizon)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = VELOCITY_DENOMINATOR;
    let mut spec = Example3Spec::<Rational> {
        seed,
        denominator: den,
        levels: Vec::new(),
    };
    let mut parent_velocity = VecN::<Rational>::zeros(2);
    let mut parent_point = VecN::<Rational>::zeros(2);
    let mut parent_time = <Rational as Scalar>::one();
    for i in 1..=levels {
        let time = Rational::from_ratio(1, 1i64 << i);
        // Position of the parent compound at t_i.
        let point = parent_point.advance(&parent_velocity, &(time.clone() - parent_time.clone()));
        let mut accepted = false;
        for _ in 0..REJECTION_BUDGET {
            let velocity = sample_velocity(&mut rng, den);
            if velocity == parent_velocity {
                continue;
            }
            let compound_velocity = &parent_velocity.scale(&Rational::from_int(2)) - &velocity;
            spec.levels.push(Example3Level {
                index: i,
                time: time.clone(),
                point: point.clone(),
                velocity,
                compound_velocity,
                mass: time.clone(),
            });
            if level_is_clear(&spec.levels, i as usize - 1, &horizon_q) {
                accepted = true;
                break;
            }
            spec.levels.pop();
        }
        if !accepted {
            return Err(Error::RejectionBudgetExhausted { level: i as usize });
        }
        let last = spec.levels.last().expect("pushed");
        parent_velocity = last.compound_velocity.clone();
        parent_point = point;
        parent_time = time;
    }
    let spec = spec.convert::<S>();
    let scenario = Scenario::new(spec.particles(), horizon)?;
    Ok((scenario, spec))
}
