//! Sticky particle dynamics in `R^n`.
//!
//! Finitely many point masses fly freely and lump together on contact,
//! conserving mass and momentum. The crate provides the event-driven evolution,
//! checkers for weak solutions, stickiness and energy admissibility, the
//! discounted-energy policy search, and generators for the initial data of the
//! classical non-uniqueness and non-existence constructions (at finite
//! truncation).
//!
//! All algorithms are generic over [`Scalar`]: exact [`Rational`] arithmetic or
//! `f64` with explicit tolerances. The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constructions;
pub mod engine;
mod error;
mod particle;
mod scalar;
mod scenario;
mod vector;

pub use error::{Error, Result};
pub use particle::{barycenter, energy, momentum, Particle, SystemState};
pub use scalar::{format_rational, parse_rational, rational_from_f64, rational_to_f64, Backend, Rational, Scalar};
pub use scenario::{Scenario, DEFAULT_EVENT_CAP};
pub use vector::{coincide, VecN};
