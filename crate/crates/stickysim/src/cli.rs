//! Command-line front end: `gen`, `run`, `verify`, `experiment`.
//!
//! Exit codes: 0 pass, 1 a check or experiment assertion failed, 2 input
//! error, 3 event cap exceeded.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use stickysim_core::constructions::{
    check_all_subsets, check_overtaking, example2_perturbed, example2_scenario, example3_scenario, example4_scenario,
    nip_check, resplit_candidate, select_tau, smooth_scenario, subset_barycenters, TailParams, Targeting, Variant,
};
use stickysim_core::engine::{
    check_sticky, check_weak, energy_profile, evolve, is_energy_admissible, nonstickiness_phi, Trajectory,
};
use stickysim_core::{Backend, Rational, Scenario};

use crate::error::{Error, Result};
use crate::experiments::{
    results_dir, run_example3_nonuniqueness, run_example4_nonexistence, run_jeps_sweep, run_property_suite, Report,
};
use crate::output::{render_svg, sample_times, write_samples_csv};
use crate::schema::{
    example4_sidecar, parse_backend, parse_scalar, read_json, smoothing_sidecar, write_json, EventLogFile,
    Example3SpecFile, FileScalar, ScenarioFile, TrajectoryFile,
};

/// `println!` that ignores a closed stdout (e.g. piped into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

#[derive(Debug, Parser)]
#[command(
    name = "stickysim",
    version,
    about = "Sticky particle dynamics: generate, simulate, verify, reproduce"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Rational,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Numeric backend; defaults to the file's backend, else rational.
    #[arg(long, global = true, value_enum)]
    pub backend: Option<BackendArg>,
    /// Position-coincidence tolerance ("p/q" or decimal); must be 0 for rational.
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    /// Simulation horizon ("p/q" or decimal).
    #[arg(long, global = true)]
    pub horizon: Option<String>,
    /// Maximum number of collision events.
    #[arg(long, global = true)]
    pub event_cap: Option<usize>,
    /// Output file (gen) or directory (run, experiment).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for randomized generators and suites.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a scenario file and its spec sidecar.
    #[command(subcommand)]
    Gen(GenKind),
    /// Simulate a scenario: event log, trajectory, sampled CSV, optional SVG.
    Run(RunArgs),
    /// Check a candidate trajectory or a construction predicate.
    #[command(subcommand)]
    Verify(VerifyKind),
    /// Run a reproduction experiment and persist its report.
    #[command(subcommand)]
    Experiment(ExperimentKind),
}

#[derive(Debug, Clone, Args)]
pub struct TailArgs {
    #[arg(long, default_value = "1/4")]
    pub alpha: String,
    #[arg(long, default_value = "1/2")]
    pub beta: String,
    #[arg(long, default_value = "3/4")]
    pub gamma: String,
}

impl TailArgs {
    fn params(&self) -> Result<TailParams<Rational>> {
        let p = TailParams::new(
            parse_scalar(&self.alpha)?,
            parse_scalar(&self.beta)?,
            parse_scalar(&self.gamma)?,
        );
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TargetingArg {
    Truncated,
    Infinite,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Vertical,
    Slanted,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Two unit masses crossing at (1, 1) at t = 1.
    Example2 {
        /// Shift the second particle by this amount along x_1 (no collision).
        #[arg(long)]
        perturb: Option<String>,
    },
    /// Backward splitting cascade with `levels` splits.
    Example3 {
        #[arg(long)]
        levels: u32,
    },
    /// Black particles on the axis and white bullets aimed at tail barycenters.
    Example4 {
        #[command(flatten)]
        tail: TailArgs,
        #[arg(long)]
        levels: u32,
        #[arg(long, value_enum, default_value = "truncated")]
        targeting: TargetingArg,
        #[arg(long, value_enum, default_value = "vertical")]
        variant: VariantArg,
    },
    /// Replace every particle of a scenario by a collapsing cloud.
    Smooth {
        /// Scenario to smooth.
        #[arg(long)]
        input: PathBuf,
        /// Initial cloud scale s (collapse time), shared by all clouds.
        #[arg(long, default_value = "1/8")]
        scale: String,
        /// Smallest admissible scale after halving.
        #[arg(long, default_value = "1/1048576")]
        floor: String,
        /// Particles per cloud.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Candidate for the crossing pair that sticks on [1, T] and splits at T;
    /// writes a trajectory file.
    Resplit {
        #[arg(long, default_value = "2")]
        split: String,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario file.
    pub scenario: PathBuf,
    /// Time step of the CSV samples; defaults to horizon / 100.
    #[arg(long)]
    pub sample_step: Option<String>,
    /// Also write trajectory.svg.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct CandidateArgs {
    /// Trajectory file, or a scenario file (see --candidate).
    pub input: PathBuf,
    /// For scenario input: check the engine output or free flight.
    #[arg(long, value_enum, default_value = "evolve")]
    pub candidate: CandidateArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CandidateArg {
    Evolve,
    Free,
}

#[derive(Debug, Subcommand)]
pub enum VerifyKind {
    /// Pairs that touch and later separate.
    Sticky(CandidateArgs),
    /// Residual of the integral identity for positions.
    Weak(CandidateArgs),
    /// Kinetic energy non-increasing.
    Energy(CandidateArgs),
    /// Non-intersection of the cascade lines, from an example3 spec sidecar.
    Nip { spec: PathBuf },
    /// Overtaking inequality for k = 2..=k_max.
    Lemma1 {
        #[command(flatten)]
        tail: TailArgs,
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// Every proper subset of {k, .., k + tail} containing k has a lower
    /// barycenter at the certified time.
    Lemma2 {
        #[command(flatten)]
        tail: TailArgs,
        #[arg(long)]
        k: u32,
        #[arg(long = "tail", default_value_t = 10)]
        cutoff: u32,
    },
    /// Replay a scenario and compare with a stored event log.
    Replay { scenario: PathBuf, events: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum ExperimentKind {
    /// Cascade versus free flight.
    Nonuniqueness {
        #[arg(long, default_value = "3..6")]
        levels: String,
    },
    /// Bullet hits under truncated and infinite targeting.
    Nonexistence {
        #[command(flatten)]
        tail: TailArgs,
        #[arg(long, default_value = "3..8")]
        levels: String,
    },
    /// Discounted-energy minimizers across an eps grid.
    Jeps {
        #[command(flatten)]
        tail: TailArgs,
        #[arg(long, default_value_t = 3)]
        levels: u32,
        #[arg(long, default_value = "10,1,0.1,0.01", value_delimiter = ',')]
        eps: Vec<f64>,
    },
    /// Engine invariants on random scenarios.
    Properties {
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
}

/// Result of a command that completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// `"3..8"` and `"3..=8"` (inclusive), `"3,5,7"`, or `"4"`.
pub fn parse_levels(text: &str) -> Result<Vec<u32>> {
    let bad = || Error::Usage(format!("invalid level range {text:?}"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    let levels: Vec<u32> = if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?);
        (a..=b).collect()
    } else {
        text.split(',').map(num).collect::<Result<_>>()?
    };
    if levels.is_empty() {
        return Err(bad());
    }
    Ok(levels)
}

/// Applies the global overrides and re-validates.
fn apply_overrides<S: FileScalar>(mut sc: Scenario<S>, g: &Global) -> Result<Scenario<S>> {
    if let Some(t) = &g.tolerance {
        sc.tolerance = parse_scalar(t)?;
    }
    if let Some(h) = &g.horizon {
        sc.horizon = parse_scalar(h)?;
    }
    if let Some(cap) = g.event_cap {
        sc.event_cap = cap;
    }
    sc.validate()?;
    Ok(sc)
}

fn horizon_or<S: FileScalar>(g: &Global, default: i64) -> Result<S> {
    g.horizon
        .as_deref()
        .map_or_else(|| Ok(S::from_int(default)), parse_scalar)
}

fn backend_or(g: &Global, default: Backend) -> Backend {
    g.backend.map_or(default, Backend::from)
}

fn sidecar_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    out.with_file_name(format!("{stem}.spec.json"))
}

fn write_scenario<S: FileScalar>(
    g: &Global,
    default_name: &str,
    sc: Scenario<S>,
    provenance: Value,
    sidecar: Option<Value>,
) -> Result<()> {
    let sc = apply_overrides(sc, g)?;
    let out = g.out.clone().unwrap_or_else(|| PathBuf::from(default_name));
    write_json(&out, &ScenarioFile::from_scenario(&sc, Some(provenance)))?;
    say!(
        "wrote {} ({} particles, {} backend)",
        out.display(),
        sc.len(),
        S::BACKEND
    );
    if let Some(side) = sidecar {
        let path = sidecar_path(&out);
        write_json(&path, &side)?;
        say!("wrote {}", path.display());
    }
    Ok(())
}

fn gen_typed<S: FileScalar>(g: &Global, kind: &GenKind) -> Result<()> {
    match kind {
        GenKind::Example2 { perturb } => {
            let horizon = horizon_or::<S>(g, 2)?;
            let (sc, prov) = match perturb {
                Some(eps) => (
                    example2_perturbed(parse_scalar::<S>(eps)?, horizon)?,
                    json!({ "generator": "example2", "perturb": eps }),
                ),
                None => (example2_scenario(horizon)?, json!({ "generator": "example2" })),
            };
            write_scenario(g, "example2.json", sc, prov, None)
        }
        GenKind::Example3 { levels } => {
            let (sc, spec) = example3_scenario::<S>(*levels, g.seed, horizon_or(g, 1)?)?;
            let prov = json!({ "generator": "example3", "levels": levels, "seed": g.seed });
            let side = serde_json::to_value(Example3SpecFile::from_spec(&spec))?;
            write_scenario(g, "example3.json", sc, prov, Some(side))
        }
        GenKind::Example4 {
            tail,
            levels,
            targeting,
            variant,
        } => {
            let p = tail.params()?;
            let p = TailParams::new(
                S::from_rational(&p.alpha),
                S::from_rational(&p.beta),
                S::from_rational(&p.gamma),
            );
            let targeting = match targeting {
                TargetingArg::Truncated => Targeting::Truncated,
                TargetingArg::Infinite => Targeting::Infinite,
            };
            let variant = match variant {
                VariantArg::Vertical => Variant::Vertical,
                VariantArg::Slanted => Variant::Slanted,
            };
            let (sc, spec) = example4_scenario(&p, *levels, targeting, variant, horizon_or(g, 3)?)?;
            let prov = json!({
                "generator": "example4",
                "alpha": tail.alpha, "beta": tail.beta, "gamma": tail.gamma,
                "levels": levels,
                "targeting": targeting.name(),
                "variant": variant.name(),
            });
            write_scenario(g, "example4.json", sc, prov, Some(example4_sidecar(&spec)))
        }
        GenKind::Smooth {
            input,
            scale,
            floor,
            samples,
        } => {
            let file: ScenarioFile = read_json(input)?;
            let base = file.to_scenario::<S>()?;
            let scales = vec![parse_scalar::<S>(scale)?; base.len()];
            let sm = smooth_scenario(&base, &scales, &parse_scalar(floor)?, *samples, g.seed)?;
            let prov = json!({
                "generator": "smooth",
                "input": input.display().to_string(),
                "scale": scale,
                "samples": samples,
                "seed": g.seed,
            });
            let side = smoothing_sidecar(&sm, *samples, g.seed);
            write_scenario(g, "smooth.json", sm.scenario, prov, Some(side))
        }
        GenKind::Resplit { split } => {
            let split: S = parse_scalar(split)?;
            let horizon = match &g.horizon {
                Some(h) => parse_scalar(h)?,
                None => split.clone() + S::one(),
            };
            let traj = resplit_candidate(split, horizon)?;
            let out = g.out.clone().unwrap_or_else(|| PathBuf::from("resplit.json"));
            write_json(&out, &TrajectoryFile::from_trajectory(&traj))?;
            say!("wrote {} (candidate trajectory)", out.display());
            Ok(())
        }
    }
}

fn cmd_gen(g: &Global, kind: &GenKind) -> Result<Verdict> {
    match backend_or(g, Backend::Rational) {
        Backend::Rational => gen_typed::<Rational>(g, kind)?,
        Backend::Float => gen_typed::<f64>(g, kind)?,
    }
    Ok(Verdict::Pass)
}

fn load_scenario<S: FileScalar>(file: &ScenarioFile, g: &Global) -> Result<Scenario<S>> {
    let sc = file.to_scenario::<S>()?;
    apply_overrides(sc, g)
}

fn run_typed<S: FileScalar>(file: &ScenarioFile, g: &Global, args: &RunArgs) -> Result<Verdict> {
    let sc = load_scenario::<S>(file, g)?;
    let step = match &args.sample_step {
        Some(s) => parse_scalar::<S>(s)?,
        None => sc.horizon.clone() / S::from_int(100),
    };
    let times = sample_times(&sc.horizon, &step)?;
    let started = Instant::now();
    let (traj, log) = evolve(&sc)?;
    let elapsed = started.elapsed();

    let dir = match &g.out {
        Some(d) => d.clone(),
        None => results_dir(None).join(args.scenario.file_stem().unwrap_or_default()),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_json(&dir.join("events.json"), &EventLogFile::from_log(&log))?;
    write_json(&dir.join("trajectory.json"), &TrajectoryFile::from_trajectory(&traj))?;
    let csv_path = dir.join("trajectory.csv");
    let csv_file = fs::File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    write_samples_csv(&traj, &times, BufWriter::new(csv_file))?;
    if args.svg {
        let svg_path = dir.join("trajectory.svg");
        fs::write(&svg_path, render_svg(&traj, &log)).map_err(|e| Error::io(&svg_path, e))?;
    }
    say!(
        "{} particles, {} events in {:.3} s ({} backend); output in {}",
        sc.len(),
        log.len(),
        elapsed.as_secs_f64(),
        S::BACKEND,
        dir.display()
    );
    for e in &log.events {
        let members: Vec<String> = e.clusters.iter().map(|c| format!("{:?}", c.members)).collect();
        say!("  t = {}: {}", e.time.to_json(), members.join(" "));
    }
    Ok(Verdict::Pass)
}

fn cmd_run(g: &Global, args: &RunArgs) -> Result<Verdict> {
    let file: ScenarioFile = read_json(&args.scenario)?;
    match backend_or(g, file.backend()?) {
        Backend::Rational => run_typed::<Rational>(&file, g, args),
        Backend::Float => run_typed::<f64>(&file, g, args),
    }
}

fn report(ok: bool, headline: String, witness: Value) -> Result<Verdict> {
    say!("{}: {headline}", if ok { "PASS" } else { "FAIL" });
    say!("{}", serde_json::to_string_pretty(&witness)?);
    Ok(Verdict::from_bool(ok))
}

/// Candidate trajectory and the tolerance to check it with.
fn load_candidate<S: FileScalar>(args: &CandidateArgs, g: &Global) -> Result<(Trajectory<S>, S)> {
    let value: Value = read_json(&args.input)?;
    if value.get("paths").is_some() {
        let file: TrajectoryFile = serde_json::from_value(value)?;
        let tol = match &g.tolerance {
            Some(t) => parse_scalar(t)?,
            None => S::default_tolerance(),
        };
        if S::is_exact() && !tol.is_zero() {
            return Err(stickysim_core::Error::NonzeroExactTolerance.into());
        }
        let traj = file.to_trajectory(&tol)?;
        return Ok((traj, tol));
    }
    let file: ScenarioFile = serde_json::from_value(value)?;
    let sc = load_scenario::<S>(&file, g)?;
    let traj = match args.candidate {
        CandidateArg::Evolve => evolve(&sc)?.0,
        CandidateArg::Free => Trajectory::free_flight(&sc),
    };
    Ok((traj, sc.tolerance))
}

fn input_backend(path: &Path) -> Result<Backend> {
    let value: Value = read_json(path)?;
    let name = value
        .get("backend")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::schema(format!("{}: missing backend", path.display())))?;
    parse_backend(name)
}

fn verify_candidate<S: FileScalar>(kind: &VerifyKind, args: &CandidateArgs, g: &Global) -> Result<Verdict> {
    let (traj, tol) = load_candidate::<S>(args, g)?;
    match kind {
        VerifyKind::Sticky(_) => {
            let v = check_sticky(&traj, &tol);
            let phi = nonstickiness_phi(&traj, &tol);
            let witness = json!({
                "violations": v.iter().map(|v| json!({
                    "pair": [v.pair.0, v.pair.1],
                    "first_contact": v.first_contact.to_json(),
                    "separation": v.separation.to_json(),
                })).collect::<Vec<_>>(),
                "phi": phi.to_json(),
            });
            report(v.is_empty(), format!("{} violating pair(s)", v.len()), witness)
        }
        VerifyKind::Weak(_) => {
            let w = check_weak(&traj, &tol);
            let witness = json!({
                "max_residual": w.max_residual,
                "max_residual_sq": w.max_residual_sq.to_json(),
                "worst": w.worst.as_ref().map(|(i, t)| json!({ "index": i, "time": t.to_json() })),
            });
            report(w.pass, format!("max residual {:e}", w.max_residual), witness)
        }
        VerifyKind::Energy(_) => {
            let profile = energy_profile(&traj);
            let ok = is_energy_admissible(&profile);
            let witness = json!({
                "breakpoints": profile.breakpoints.iter().map(S::to_json).collect::<Vec<_>>(),
                "values": profile.values.iter().map(S::to_json).collect::<Vec<_>>(),
            });
            let headline = if ok {
                "energy non-increasing"
            } else {
                "energy increases"
            };
            report(ok, headline.to_string(), witness)
        }
        _ => unreachable!("not a candidate check"),
    }
}

fn cmd_verify(g: &Global, kind: &VerifyKind) -> Result<Verdict> {
    match kind {
        VerifyKind::Sticky(a) | VerifyKind::Weak(a) | VerifyKind::Energy(a) => {
            match backend_or(g, input_backend(&a.input)?) {
                Backend::Rational => verify_candidate::<Rational>(kind, a, g),
                Backend::Float => verify_candidate::<f64>(kind, a, g),
            }
        }
        VerifyKind::Nip { spec } => {
            let file: Example3SpecFile = read_json(spec)?;
            let spec = file.to_spec::<Rational>()?;
            let horizon = horizon_or::<Rational>(g, 1)?;
            let ok = nip_check(&spec, &horizon) && spec.momentum_balanced();
            report(
                ok,
                format!("{} levels, lines meet only at the designed collisions", spec.depth()),
                json!({ "levels": spec.depth(), "seed": spec.seed, "momentum_balanced": spec.momentum_balanced() }),
            )
        }
        VerifyKind::Lemma1 { tail, k_max } => {
            let p = TailParams::new(
                parse_scalar::<Rational>(&tail.alpha)?,
                parse_scalar(&tail.beta)?,
                parse_scalar(&tail.gamma)?,
            );
            p.check_unit_interval()?;
            let checks = (2..=*k_max)
                .map(|k| check_overtaking(&p, k))
                .collect::<stickysim_core::Result<Vec<_>>>()?;
            let ok = checks.iter().all(|c| c.holds);
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "k": c.k,
                        "time": c.time.to_json(),
                        "ahead": c.ahead.to_json(),
                        "behind": c.behind.to_json(),
                        "holds": c.holds,
                    })
                })
                .collect();
            let bound = p.alpha_bound();
            report(
                ok,
                format!(
                    "overtaking for k = 2..={k_max}; alpha = {} vs sufficient bound 1/(1+beta+gamma) = {}",
                    p.alpha.to_json(),
                    bound.to_json()
                ),
                json!({ "checks": rows, "alpha_bound": bound.to_json() }),
            )
        }
        VerifyKind::Lemma2 { tail, k, cutoff } => {
            let p = tail.params()?;
            let tau = select_tau(&p, *k)?;
            let (pass, total) = check_all_subsets(&p, *k, &tau, *cutoff)?;
            let (single, full) = subset_barycenters(&p, *k, &tau, 1, *cutoff)?;
            report(
                pass == total,
                format!("{pass}/{total} subsets have a lower barycenter"),
                json!({
                    "k": k,
                    "tail": cutoff,
                    "tau": tau.to_json(),
                    "barycenter": full.to_json(),
                    "single_member_barycenter": single.to_json(),
                    "passing": pass,
                    "total": total,
                }),
            )
        }
        VerifyKind::Replay { scenario, events } => {
            let file: ScenarioFile = read_json(scenario)?;
            let stored: EventLogFile = read_json(events)?;
            let backend = backend_or(g, parse_backend(&stored.backend)?);
            let same = match backend {
                Backend::Rational => {
                    let sc = load_scenario::<Rational>(&file, g)?;
                    evolve(&sc)?.1 == stored.to_log::<Rational>()?
                }
                Backend::Float => {
                    let sc = load_scenario::<f64>(&file, g)?;
                    evolve(&sc)?.1 == stored.to_log::<f64>()?
                }
            };
            report(
                same,
                "replayed event log matches".to_string(),
                json!({ "events": stored.events.len() }),
            )
        }
    }
}

fn cmd_experiment(g: &Global, kind: &ExperimentKind) -> Result<Verdict> {
    let started = Instant::now();
    let backend = backend_or(g, Backend::Rational);
    let mut report = match kind {
        ExperimentKind::Nonuniqueness { levels } => {
            run_example3_nonuniqueness(&parse_levels(levels)?, g.seed, backend)?
        }
        ExperimentKind::Nonexistence { tail, levels } => {
            run_example4_nonexistence(&tail.params()?, &parse_levels(levels)?, backend)?
        }
        ExperimentKind::Jeps { tail, levels, eps } => run_jeps_sweep(&tail.params()?, *levels, eps, backend)?,
        ExperimentKind::Properties { count } => run_property_suite(g.seed, *count)?,
    };
    report.wall_time = started.elapsed();
    let path = report.persist(&results_dir(g.out.as_deref()))?;
    print_report(&report);
    say!("report: {}", path.display());
    Ok(Verdict::from_bool(report.pass))
}

fn print_report(report: &Report) {
    let failed = report.failures().count();
    say!(
        "{} {}: {}/{} cases pass ({:.2} s)",
        if report.pass { "PASS" } else { "FAIL" },
        report.experiment,
        report.cases.len() - failed,
        report.cases.len(),
        report.wall_time.as_secs_f64()
    );
    for case in report.failures().take(20) {
        say!("  failed {}: {}", case.id, case.details);
    }
    for table in report.cases.iter().filter_map(|c| c.details.get("table")) {
        say!("  {table}");
    }
}

pub fn execute(cli: &Cli) -> Result<Verdict> {
    match &cli.command {
        Command::Gen(kind) => cmd_gen(&cli.global, kind),
        Command::Run(args) => cmd_run(&cli.global, args),
        Command::Verify(kind) => cmd_verify(&cli.global, kind),
        Command::Experiment(kind) => cmd_experiment(&cli.global, kind),
    }
}

/// Exit code for an outcome.
pub fn exit_code(outcome: &Result<Verdict>) -> u8 {
    match outcome {
        Ok(Verdict::Pass) => 0,
        Ok(Verdict::Fail) => 1,
        Err(e) if e.is_cap() => 3,
        Err(_) => 2,
    }
}

/// Parses the process arguments, runs the command and maps the outcome to
/// an exit code. Argument errors exit with 2 (clap's convention).
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    if let Err(e) = &outcome {
        let _ = writeln!(std::io::stderr(), "error: {e}");
    }
    ExitCode::from(exit_code(&outcome))
}
