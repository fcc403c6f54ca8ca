//! JSON file formats.
//!
//! Rational values are strings `"p/q"` (reduced, `q > 0`); float values are
//! JSON numbers. Either form is accepted on input for either backend: a
//! decimal literal read into the rational backend is taken exactly, a `"p/q"`
//! string read into the float backend is rounded once.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use stickysim_core::constructions::{Example3Level, Example3Spec, Example4Spec, SmoothedScenario};
use stickysim_core::engine::{ClusterEvent, CollisionEvent, Decision, EventLog, Segment, Trajectory};
use stickysim_core::{format_rational, parse_rational, Backend, Particle, Rational, Scalar, Scenario, VecN};

use crate::error::{Error, Result};

/// Scalars that can be written to and read from the file formats.
pub trait FileScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl FileScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        let text = match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            other => return Err(Error::schema(format!("expected a number, found {other}"))),
        };
        parse_rational(&text).ok_or_else(|| Error::schema(format!("not a rational number: {text:?}")))
    }
}

impl FileScalar for f64 {
    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::schema(format!("number out of range: {n}"))),
            Value::String(s) => parse_rational(s)
                .map(|q| q.to_f64())
                .ok_or_else(|| Error::schema(format!("not a number: {s:?}"))),
            other => Err(Error::schema(format!("expected a number, found {other}"))),
        }
    }
}

pub fn vec_to_json<S: FileScalar>(v: &VecN<S>) -> Vec<Value> {
    v.components().iter().map(S::to_json).collect()
}

pub fn vec_from_json<S: FileScalar>(v: &[Value]) -> Result<VecN<S>> {
    if v.is_empty() {
        return Err(Error::schema("vectors need at least one component"));
    }
    Ok(VecN::new(v.iter().map(S::from_json).collect::<Result<Vec<_>>>()?))
}

pub fn parse_backend(s: &str) -> Result<Backend> {
    Backend::parse(s).ok_or_else(|| Error::schema(format!("unknown backend {s:?} (rational|float)")))
}

fn check_backend<S: Scalar>(declared: &str) -> Result<()> {
    let b = parse_backend(declared)?;
    if b != S::BACKEND {
        return Err(Error::schema(format!(
            "file declares backend {b}, expected {}",
            S::BACKEND
        )));
    }
    Ok(())
}

fn default_event_cap() -> usize {
    stickysim_core::DEFAULT_EVENT_CAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParticleEntry {
    pub mass: Value,
    pub position: Vec<Value>,
    pub velocity: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub dimension: usize,
    pub backend: String,
    pub tolerance: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_tolerance: Option<Value>,
    pub horizon: Value,
    #[serde(default = "default_event_cap")]
    pub event_cap: usize,
    pub particles: Vec<ParticleEntry>,
    /// Generator name, parameters and seed, when produced by `gen`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
}

impl ScenarioFile {
    pub fn from_scenario<S: FileScalar>(sc: &Scenario<S>, provenance: Option<Value>) -> Self {
        ScenarioFile {
            dimension: sc.dimension,
            backend: S::BACKEND.name().to_string(),
            tolerance: sc.tolerance.to_json(),
            time_tolerance: Some(sc.time_tolerance.to_json()),
            horizon: sc.horizon.to_json(),
            event_cap: sc.event_cap,
            particles: sc
                .particles
                .iter()
                .map(|p| ParticleEntry {
                    mass: p.mass.to_json(),
                    position: vec_to_json(&p.position),
                    velocity: vec_to_json(&p.velocity),
                })
                .collect(),
            provenance,
        }
    }

    pub fn backend(&self) -> Result<Backend> {
        parse_backend(&self.backend)
    }

    /// Builds and validates the scenario in backend `S`, regardless of the
    /// declared backend; tolerances reset to `S`'s defaults when the declared
    /// backend differs.
    pub fn to_scenario<S: FileScalar>(&self) -> Result<Scenario<S>> {
        let same = self.backend()? == S::BACKEND;
        let particles = self
            .particles
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let x = vec_from_json::<S>(&p.position)?;
                let v = vec_from_json::<S>(&p.velocity)?;
                if x.dim() != self.dimension || v.dim() != self.dimension {
                    return Err(Error::schema(format!(
                        "particle {i} does not have dimension {}",
                        self.dimension
                    )));
                }
                Ok(Particle::new(i, S::from_json(&p.mass)?, x, v))
            })
            .collect::<Result<Vec<_>>>()?;
        let (tolerance, time_tolerance) = if same {
            let tol = S::from_json(&self.tolerance)?;
            let ttol = match &self.time_tolerance {
                Some(v) => S::from_json(v)?,
                None => S::default_time_tolerance(),
            };
            (tol, ttol)
        } else {
            (S::default_tolerance(), S::default_time_tolerance())
        };
        let sc = Scenario {
            dimension: self.dimension,
            tolerance,
            time_tolerance,
            horizon: S::from_json(&self.horizon)?,
            event_cap: self.event_cap,
            particles,
        };
        sc.validate()?;
        Ok(sc)
    }
}

/// A scenario in whichever backend its file declared.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyScenario {
    Rational(Scenario<Rational>),
    Float(Scenario<f64>),
}

impl AnyScenario {
    pub fn from_file(file: &ScenarioFile, backend: Option<Backend>) -> Result<Self> {
        match backend.map_or_else(|| file.backend(), Ok)? {
            Backend::Rational => Ok(AnyScenario::Rational(file.to_scenario()?)),
            Backend::Float => Ok(AnyScenario::Float(file.to_scenario()?)),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            AnyScenario::Rational(_) => Backend::Rational,
            AnyScenario::Float(_) => Backend::Float,
        }
    }

    pub fn to_file(&self, provenance: Option<Value>) -> ScenarioFile {
        match self {
            AnyScenario::Rational(s) => ScenarioFile::from_scenario(s, provenance),
            AnyScenario::Float(s) => ScenarioFile::from_scenario(s, provenance),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterEntry {
    pub members: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
    pub pre_velocities: Vec<Vec<Value>>,
    pub post_velocity: Vec<Value>,
    pub energy_drop: Value,
    pub decision: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventEntry {
    pub time: Value,
    pub clusters: Vec<ClusterEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventLogFile {
    pub backend: String,
    pub events: Vec<EventEntry>,
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::Stick => "stick",
        Decision::Pass => "pass",
    }
}

pub fn parse_decision(s: &str) -> Result<Decision> {
    match s {
        "stick" => Ok(Decision::Stick),
        "pass" => Ok(Decision::Pass),
        other => Err(Error::schema(format!("unknown decision {other:?} (stick|pass)"))),
    }
}

impl EventLogFile {
    pub fn from_log<S: FileScalar>(log: &EventLog<S>) -> Self {
        EventLogFile {
            backend: S::BACKEND.name().to_string(),
            events: log
                .events
                .iter()
                .map(|e| EventEntry {
                    time: e.time.to_json(),
                    clusters: e
                        .clusters
                        .iter()
                        .map(|c| ClusterEntry {
                            members: c.members.clone(),
                            parts: c.parts.clone(),
                            pre_velocities: c.pre_velocities.iter().map(vec_to_json).collect(),
                            post_velocity: vec_to_json(&c.post_velocity),
                            energy_drop: c.energy_drop.to_json(),
                            decision: decision_name(c.decision).to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_log<S: FileScalar>(&self) -> Result<EventLog<S>> {
        check_backend::<S>(&self.backend)?;
        let events = self
            .events
            .iter()
            .map(|e| {
                Ok(CollisionEvent {
                    time: S::from_json(&e.time)?,
                    clusters: e
                        .clusters
                        .iter()
                        .map(|c| {
                            Ok(ClusterEvent {
                                members: c.members.clone(),
                                parts: c.parts.clone(),
                                pre_velocities: c
                                    .pre_velocities
                                    .iter()
                                    .map(|v| vec_from_json(v))
                                    .collect::<Result<Vec<_>>>()?,
                                post_velocity: vec_from_json(&c.post_velocity)?,
                                energy_drop: S::from_json(&c.energy_drop)?,
                                decision: parse_decision(&c.decision)?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EventLog { events })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentEntry {
    pub t_start: Value,
    pub t_end: Value,
    pub position_start: Vec<Value>,
    pub velocity: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFile {
    pub backend: String,
    pub horizon: Value,
    pub masses: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_tolerance: Option<Value>,
    pub paths: Vec<Vec<SegmentEntry>>,
}

impl TrajectoryFile {
    pub fn from_trajectory<S: FileScalar>(traj: &Trajectory<S>) -> Self {
        TrajectoryFile {
            backend: S::BACKEND.name().to_string(),
            horizon: traj.horizon.to_json(),
            masses: traj.masses.iter().map(S::to_json).collect(),
            time_tolerance: Some(traj.time_tolerance.to_json()),
            paths: traj
                .paths
                .iter()
                .map(|path| {
                    path.iter()
                        .map(|s| SegmentEntry {
                            t_start: s.t_start.to_json(),
                            t_end: s.t_end.to_json(),
                            position_start: vec_to_json(&s.position_start),
                            velocity: vec_to_json(&s.velocity),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn backend(&self) -> Result<Backend> {
        parse_backend(&self.backend)
    }

    /// Reads the candidate in backend `S` and checks its shape.
    pub fn to_trajectory<S: FileScalar>(&self, tol: &S) -> Result<Trajectory<S>> {
        let traj = Trajectory {
            horizon: S::from_json(&self.horizon)?,
            masses: self.masses.iter().map(S::from_json).collect::<Result<Vec<_>>>()?,
            time_tolerance: match (&self.time_tolerance, self.backend()? == S::BACKEND) {
                (Some(v), true) => S::from_json(v)?,
                _ => S::default_time_tolerance(),
            },
            paths: self
                .paths
                .iter()
                .map(|path| {
                    path.iter()
                        .map(|s| {
                            Ok(Segment {
                                t_start: S::from_json(&s.t_start)?,
                                t_end: S::from_json(&s.t_end)?,
                                position_start: vec_from_json(&s.position_start)?,
                                velocity: vec_from_json(&s.velocity)?,
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        };
        traj.validate(tol)?;
        Ok(traj)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example3LevelEntry {
    pub index: u32,
    pub time: Value,
    pub point: Vec<Value>,
    pub velocity: Vec<Value>,
    pub compound_velocity: Vec<Value>,
    pub mass: Value,
}

/// Sidecar of the backward cascade: everything needed to re-check the
/// line family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example3SpecFile {
    pub kind: String,
    pub backend: String,
    pub seed: u64,
    pub velocity_denominator: i64,
    pub sampling: String,
    pub levels: Vec<Example3LevelEntry>,
}

impl Example3SpecFile {
    pub const KIND: &'static str = "example3";

    pub fn from_spec<S: FileScalar>(spec: &Example3Spec<S>) -> Self {
        Example3SpecFile {
            kind: Self::KIND.to_string(),
            backend: S::BACKEND.name().to_string(),
            seed: spec.seed,
            velocity_denominator: spec.denominator,
            sampling: format!(
                "ChaCha8 seeded with `seed`; each component of v_i uniform on {{k/{0} : -{0} <= k <= {0}}}; \
                 resampled until the new lines meet earlier ones only at designed collisions",
                spec.denominator
            ),
            levels: spec
                .levels
                .iter()
                .map(|l| Example3LevelEntry {
                    index: l.index,
                    time: l.time.to_json(),
                    point: vec_to_json(&l.point),
                    velocity: vec_to_json(&l.velocity),
                    compound_velocity: vec_to_json(&l.compound_velocity),
                    mass: l.mass.to_json(),
                })
                .collect(),
        }
    }

    pub fn to_spec<S: FileScalar>(&self) -> Result<Example3Spec<S>> {
        if self.kind != Self::KIND {
            return Err(Error::schema(format!(
                "expected an {} spec, found {:?}",
                Self::KIND,
                self.kind
            )));
        }
        Ok(Example3Spec {
            seed: self.seed,
            denominator: self.velocity_denominator,
            levels: self
                .levels
                .iter()
                .map(|l| {
                    Ok(Example3Level {
                        index: l.index,
                        time: S::from_json(&l.time)?,
                        point: vec_from_json(&l.point)?,
                        velocity: vec_from_json(&l.velocity)?,
                        compound_velocity: vec_from_json(&l.compound_velocity)?,
                        mass: S::from_json(&l.mass)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        })
    }
}

/// Parses `"p/q"` or a decimal literal into backend `S`.
pub fn parse_scalar<S: FileScalar>(text: &str) -> Result<S> {
    parse_rational(text)
        .map(|q| S::from_rational(&q))
        .ok_or_else(|| Error::Usage(format!("not a number: {text:?}")))
}

/// Sidecar of the bullet construction: parameters, hit times, crossing
/// times and aimed points (the construction has no randomness).
pub fn example4_sidecar<S: FileScalar>(spec: &Example4Spec<S>) -> Value {
    json!({
        "kind": "example4",
        "backend": S::BACKEND.name(),
        "alpha": spec.params.alpha.to_json(),
        "beta": spec.params.beta.to_json(),
        "gamma": spec.params.gamma.to_json(),
        "levels": spec.levels,
        "targeting": spec.targeting.name(),
        "variant": spec.variant.name(),
        "particle_order": "blacks 1..N, then whites 1..N",
        "hit_times": spec.hit_times.iter().map(S::to_json).collect::<Vec<_>>(),
        "tau": spec.tau.iter().map(S::to_json).collect::<Vec<_>>(),
        "targets": spec.targets.iter().map(S::to_json).collect::<Vec<_>>(),
        "seeds": [],
    })
}

/// Sidecar of a smoothed scenario: final cloud scales and the source point
/// mass of every particle.
pub fn smoothing_sidecar<S: FileScalar>(sm: &SmoothedScenario<S>, samples: usize, seed: u64) -> Value {
    json!({
        "kind": "smooth",
        "backend": S::BACKEND.name(),
        "samples": samples,
        "seed": seed,
        "cloud_seeds": "seed + cloud index",
        "clouds": sm.clouds.iter().map(|c| json!({
            "center": vec_to_json(&c.center),
            "s": c.s.to_json(),
            "radius": c.radius().to_json(),
            "base_velocity": vec_to_json(&c.base_velocity),
            "target_mass": c.target_mass.to_json(),
            "collapse_point": vec_to_json(&c.collapse_point()),
        })).collect::<Vec<_>>(),
        "origin": sm.origin,
    })
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::schema(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline; creates parent directories.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
