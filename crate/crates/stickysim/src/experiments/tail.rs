//! Non-existence at finite truncation: bullets aimed at the tail barycenters
//! miss every black particle except the deepest one, so the hitting index is
//! the truncation depth and escapes to infinity with it.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Value};
use stickysim_core::constructions::{
    check_overtaking, example4_scenario, subset_barycenters, Example4Spec, TailParams, Targeting, Variant,
};
use stickysim_core::engine::{evolve, EventLog};
use stickysim_core::{Backend, Rational, Scalar, Scenario};

use super::{scenario_witness, values, Case, Report};
use crate::error::{Error, Result};
use crate::schema::FileScalar;

/// Horizon long enough for every bullet to cross the axis.
const HORIZON: i64 = 3;

const NOTES: [&str; 3] = [
    "With truncated targeting the only white-black merge is the deepest level N, at tau_N: \
     every shallower bullet arrives after its target compound has been broken up. The hitting \
     index therefore equals the truncation depth and escapes to infinity with it.",
    "Aimed-set witness: removing black members from the set {k..N} a bullet is aimed at strictly \
     lowers the barycenter at tau_k (checked for every proper subset containing k), and before \
     tau_N no white particle has stuck, so the next bullet is the one that hits.",
    "With targeting at the closed-form infinite tail no finite truncation is ever hit. The \
     non-existence of a sticky solution for the infinite system is the statement being illustrated; \
     it is not a computation performed here.",
];

fn hits_json(h: &BTreeSet<u32>) -> Value {
    json!(h.iter().collect::<Vec<_>>())
}

struct Run<S> {
    scenario: Scenario<S>,
    spec: Example4Spec<S>,
    log: EventLog<S>,
}

fn simulate<S: FileScalar>(p: &TailParams<S>, n: u32, targeting: Targeting, variant: Variant) -> Result<Run<S>> {
    let (scenario, spec) = example4_scenario(p, n, targeting, variant, S::from_int(HORIZON))?;
    let (_, log) = evolve(&scenario)?;
    Ok(Run { scenario, spec, log })
}

/// White levels that stuck strictly before `t`.
fn hits_before<S: Scalar>(run: &Run<S>, t: &S) -> usize {
    run.log
        .clusters()
        .filter(|(time, c)| *time < t && run.spec.classify(&c.members).is_white_black())
        .count()
}

fn lemma2<S: FileScalar>(p: &TailParams<S>, spec: &Example4Spec<S>) -> Result<(bool, Vec<Value>)> {
    let n = spec.levels;
    let mut all = true;
    let mut rows = Vec::new();
    for k in 2..n {
        let tau = &spec.tau[k as usize - 1];
        let cutoff = n - k;
        let full_mask = (1u64 << (cutoff + 1)) - 1;
        let mut passing = 0u64;
        let mut total = 0u64;
        let mut worst: Option<S> = None;
        let mut full = S::zero();
        for upper in 0..(1u64 << cutoff) {
            let mask = upper << 1 | 1;
            if mask == full_mask {
                continue;
            }
            let (sub, whole) = subset_barycenters(p, k, tau, mask, cutoff)?;
            total += 1;
            if sub < whole {
                passing += 1;
            }
            if worst.as_ref().is_none_or(|w| sub > *w) {
                worst = Some(sub);
            }
            full = whole;
        }
        all &= passing == total;
        rows.push(json!({
            "k": k,
            "tau": tau.to_json(),
            "subsets": total,
            "passing": passing,
            "barycenter": full.to_json(),
            "largest_subset_barycenter": worst.map(|w| w.to_json()),
            "single_member_barycenter": p.position(k, tau).to_json(),
        }));
    }
    Ok((all, rows))
}

fn case<S: FileScalar>(p: &TailParams<S>, n: u32) -> Result<Case> {
    let id = format!("N={n}");
    let mut details = json!({ "levels": n });
    let mut pass = true;
    let mut witness: Option<Value> = None;
    let expected = BTreeSet::from([n]);

    for variant in [Variant::Vertical, Variant::Slanted] {
        let run = simulate(p, n, Targeting::Truncated, variant)?;
        let hits = run.spec.hit_set(&run.log);
        let tau_n = run.spec.tau[n as usize - 1].clone();
        let hit_time = run
            .log
            .clusters()
            .find(|(_, c)| {
                run.spec.classify(&c.members).is_white_black() && c.decision == stickysim_core::engine::Decision::Stick
            })
            .map(|(t, _)| t.clone());
        let on_time = hit_time
            .as_ref()
            .is_some_and(|t| t.within(&tau_n, &run.scenario.time_tolerance));
        let prior = hits_before(&run, &tau_n);
        let ok = hits == expected && on_time && prior == 0;
        pass &= ok;
        details[format!("truncated_{}", variant.name())] = json!({
            "hit_set": hits_json(&hits),
            "hit_time": hit_time.map(|t| t.to_json()),
            "tau_N": tau_n.to_json(),
            "hits_before_tau_N": prior,
            "event_times": values(&run.log.times()),
            "pass": ok,
        });
        if !ok && witness.is_none() {
            witness = Some(scenario_witness(
                &run.scenario,
                Some(&run.log),
                json!({ "variant": variant.name() }),
            ));
        }
    }

    let inf = simulate(p, n, Targeting::Infinite, Variant::Vertical)?;
    let inf_hits = inf.spec.hit_set(&inf.log);
    pass &= inf_hits.is_empty();
    details["infinite_vertical"] = json!({ "hit_set": hits_json(&inf_hits), "pass": inf_hits.is_empty() });
    if !inf_hits.is_empty() && witness.is_none() {
        witness = Some(scenario_witness(
            &inf.scenario,
            Some(&inf.log),
            json!({ "targeting": "infinite" }),
        ));
    }

    let mut overtaking = Vec::new();
    for k in 2..=n {
        let c = check_overtaking(p, k)?;
        pass &= c.holds;
        overtaking.push(json!({
            "k": k,
            "time": c.time.to_json(),
            "ahead": c.ahead.to_json(),
            "barycenter": c.barycenter.to_json(),
            "holds": c.holds,
        }));
    }
    details["overtaking"] = Value::Array(overtaking);

    let spec = simulate(p, n, Targeting::Truncated, Variant::Vertical)?.spec;
    let (lemma_ok, rows) = lemma2(p, &spec)?;
    pass &= lemma_ok;
    details["aimed_set_barycenters"] = Value::Array(rows);
    details["hit_times"] = values(&spec.hit_times);

    let mut case = Case::new(id, pass, details);
    case.witness = if pass {
        None
    } else {
        witness.or(Some(json!({ "levels": n })))
    };
    Ok(case)
}

fn dispatch<S: FileScalar>(params: &TailParams<Rational>, levels: &[u32]) -> Vec<Case> {
    let p = TailParams::new(
        S::from_rational(&params.alpha),
        S::from_rational(&params.beta),
        S::from_rational(&params.gamma),
    );
    let mut cases: Vec<Case> = levels
        .par_iter()
        .map(|&n| case(&p, n).unwrap_or_else(|e| Case::errored(format!("N={n}"), &e, json!({ "levels": n }))))
        .collect();
    let table: Vec<Value> = cases
        .iter()
        .zip(levels)
        .map(|(c, n)| json!({ "N": n, "hit_set": c.details.get("truncated_vertical").map(|d| d["hit_set"].clone()) }))
        .collect();
    let all_equal = cases.iter().all(|c| c.pass);
    cases.push(
        Case::new("hitting-index-equals-depth", all_equal, json!({ "table": table }))
            .with_witness(|| json!({ "levels": levels })),
    );
    cases
}

/// One case per truncation depth in `levels` (each at least 3), plus a
/// summary case with the hitting-index table.
pub fn run_example4_nonexistence(params: &TailParams<Rational>, levels: &[u32], backend: Backend) -> Result<Report> {
    params.validate()?;
    if let Some(&bad) = levels.iter().find(|&&n| !(3..=40).contains(&n)) {
        return Err(Error::Usage(format!("depth must lie in 3..=40, got {bad}")));
    }
    let cases = match backend {
        Backend::Rational => dispatch::<Rational>(params, levels),
        Backend::Float => dispatch::<f64>(params, levels),
    };
    let parameters = json!({
        "alpha": params.alpha.to_json(),
        "beta": params.beta.to_json(),
        "gamma": params.gamma.to_json(),
        "levels": levels,
        "horizon": HORIZON,
    });
    Ok(Report::new("nonexistence", parameters, backend.name(), Vec::new(), cases).with_notes(&NOTES))
}
