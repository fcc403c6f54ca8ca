//! Initial data of the classical constructions and the closed-form tail
//! formulas with their certifying predicates.

mod example2;
mod example3;
mod example4;
mod random;
mod smoothing;
mod tail;

pub use example2::{example2_perturbed, example2_scenario, resplit_candidate};
pub use example3::{example3_scenario, nip_check, Example3Level, Example3Spec, REJECTION_BUDGET, VELOCITY_DENOMINATOR};
pub use example4::{example4_scenario, ClusterKind, Example4Spec, ParticleData, Targeting, Variant};
pub use random::planted_scenario;
pub use smoothing::{
    collapse_velocity, discretize_ball, smooth_bump, smooth_scenario, BallCloud, SmoothedScenario,
    RELATIVE_WEIGHT_FLOOR,
};
pub use tail::{
    barycenter_range, barycenter_subset, barycenter_tail, check_all_subsets, check_overtaking, check_subset_barycenter,
    hit_time, select_tau, subset_barycenters, OvertakingCheck, TailParams,
};
