//! Minimizers of the discounted energy on truncated bullet data: the
//! sticking white index as a function of the discount scale.

use rayon::prelude::*;
use serde_json::{json, Value};
use stickysim_core::constructions::{example4_scenario, TailParams, Targeting, Variant};
use stickysim_core::engine::{evolve_with_policy, policy_search, Decision};
use stickysim_core::{Backend, Rational};

use super::{scenario_witness, Case, Report};
use crate::error::{Error, Result};
use crate::schema::FileScalar;

const HORIZON: i64 = 3;

const NOTE: &str = "Each minimizer is found by exhaustive search over stick/pass decisions. The sticking \
     white index N(eps) must not decrease as eps decreases; on a finite truncation it is bounded by \
     the depth, so its divergence is only visible as growth along the grid.";

struct Outcome {
    case: Case,
    white: Option<u32>,
}

fn solve<S: FileScalar>(p: &TailParams<S>, levels: u32, eps: f64) -> Result<Outcome> {
    let (sc, spec) = example4_scenario(p, levels, Targeting::Truncated, Variant::Vertical, S::from_int(HORIZON))?;
    let (policy, value) = policy_search(&sc, eps)?;
    let (_, log, _) = evolve_with_policy(&sc, &policy)?;
    let mut black_black_stick = true;
    let mut whites = Vec::new();
    let mut decisions = Vec::new();
    for (t, c) in log.clusters() {
        let kind = spec.classify(&c.members);
        if kind.is_black_only() && c.decision != Decision::Stick {
            black_black_stick = false;
        }
        if kind.is_white_black() && c.decision == Decision::Stick {
            whites.extend(kind.whites.iter().copied());
        }
        decisions.push(json!({
            "time": t.to_json(),
            "members": c.members,
            "decision": if c.decision == Decision::Stick { "stick" } else { "pass" },
        }));
    }
    let pass = black_black_stick && whites.len() == 1;
    let white = (whites.len() == 1).then(|| whites[0]);
    let details = json!({
        "eps": eps,
        "value": value,
        "black_black_all_stick": black_black_stick,
        "sticking_whites": whites,
        "n_eps": white,
        "decisions": decisions,
    });
    let case = Case::new(format!("eps={eps}"), pass, details)
        .with_witness(|| scenario_witness(&sc, Some(&log), json!({ "eps": eps })));
    Ok(Outcome { case, white })
}

fn dispatch<S: FileScalar>(params: &TailParams<Rational>, levels: u32, eps_grid: &[f64]) -> Vec<Result<Outcome>> {
    let p = TailParams::new(
        S::from_rational(&params.alpha),
        S::from_rational(&params.beta),
        S::from_rational(&params.gamma),
    );
    eps_grid.par_iter().map(|&eps| solve(&p, levels, eps)).collect()
}

/// One case per discount scale plus a monotonicity case over the grid.
pub fn run_jeps_sweep(
    params: &TailParams<Rational>,
    levels: u32,
    eps_grid: &[f64],
    backend: Backend,
) -> Result<Report> {
    params.validate()?;
    if !(2..=6).contains(&levels) {
        return Err(Error::Usage(format!(
            "exhaustive search supports depths 2..=6, got {levels}"
        )));
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::Usage("eps grid must be non-empty with positive entries".into()));
    }
    let outcomes = match backend {
        Backend::Rational => dispatch::<Rational>(params, levels, eps_grid),
        Backend::Float => dispatch::<f64>(params, levels, eps_grid),
    };
    let mut outcomes_ok = Vec::with_capacity(outcomes.len());
    for (res, &eps) in outcomes.into_iter().zip(eps_grid) {
        outcomes_ok.push(match res {
            Ok(o) => o,
            Err(e) if e.is_cap() => return Err(e),
            Err(e) => Outcome {
                case: Case::errored(format!("eps={eps}"), &e, json!({ "eps": eps, "levels": levels })),
                white: None,
            },
        });
    }
    let outcomes = outcomes_ok;
    let mut table: Vec<(f64, Option<u32>)> = eps_grid.iter().copied().zip(outcomes.iter().map(|o| o.white)).collect();
    table.sort_by(|a, b| b.0.total_cmp(&a.0));
    let monotone = table.iter().all(|(_, w)| w.is_some()) && table.windows(2).all(|w| w[0].1 <= w[1].1);
    let rows: Vec<Value> = table.iter().map(|(e, w)| json!({ "eps": e, "n_eps": w })).collect();
    let mut cases: Vec<Case> = outcomes.into_iter().map(|o| o.case).collect();
    cases.push(
        Case::new("monotone", monotone, json!({ "table": rows }))
            .with_witness(|| json!({ "levels": levels, "eps_grid": eps_grid })),
    );
    let parameters = json!({
        "alpha": params.alpha.to_json(),
        "beta": params.beta.to_json(),
        "gamma": params.gamma.to_json(),
        "levels": levels,
        "eps": eps_grid,
        "horizon": HORIZON,
    });
    Ok(Report::new("jeps", parameters, backend.name(), Vec::new(), cases).with_notes(&[NOTE]))
}
