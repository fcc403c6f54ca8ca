//! Sticky-particle engine and solution checkers.

mod checks;
mod collision;
mod energy;
mod evolve;
mod policy;
mod trajectory;
mod union_find;

pub use checks::{
    check_sticky, check_weak, nonstickiness_phi, pair_contacts, phi_of, Contact, StickyViolation, WeakReport,
};
pub use collision::{merge_cluster, next_event, pair_collision_time, Decision, Merge};
pub use energy::{
    energy_at, energy_profile, eulerian_moments, is_energy_admissible, j_epsilon, EnergyProfile, Moments,
};
pub use evolve::evolve;
pub use policy::{evolve_with_policy, policy_search, Policy};
pub use trajectory::{ClusterEvent, CollisionEvent, EventLog, Segment, Trajectory};
