//! Batch Monte Carlo runs over per-trial seeds.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use tempex_core::rng::trial_seed;
use tempex_core::schedulers::{
    build_backbone_plan, build_meta_graph, greedy_schedule, linear_schedule, meta_graph_schedule, policy_by_name,
    run_online, star_two_phase, BackbonePlan, LegKind, MetaGraph, POLICY_NAMES,
};
use tempex_core::search::estimate_closeness;
use tempex_core::Model;

use crate::error::{CliError, Result};
use crate::spec::load_model;
use crate::stats::{summarize, Summary};

pub const EXPERIMENT_FORMAT: &str = "tempex-experiment-v1";
pub const REPORT_FORMAT: &str = "tempex-report-v1";
pub const DEFAULT_MAX_TIME: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub format: Option<String>,
    pub model: String,
    pub strategy: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub trials: u64,
    pub seed: u64,
    #[serde(default)]
    pub max_time: Option<u64>,
    #[serde(default)]
    pub measure: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strategy<'a> {
    Greedy,
    Linear,
    Meta,
    StarTwoPhase,
    Online(&'a str),
}

impl<'a> Strategy<'a> {
    fn parse(name: &'a str) -> Result<Self> {
        Ok(match name {
            "greedy" => Self::Greedy,
            "linear" => Self::Linear,
            "meta" => Self::Meta,
            "star-two-phase" | "star-decomposition" => Self::StarTwoPhase,
            _ => match name.strip_prefix("online:") {
                Some(p) if POLICY_NAMES.contains(&p) => Self::Online(p),
                _ => return Err(CliError::Experiment(format!("unknown strategy {name:?}"))),
            },
        })
    }

    fn measures(self) -> &'static [&'static str] {
        match self {
            Self::Greedy | Self::Meta => &["arrival", "legs"],
            Self::Linear => &["arrival", "legs", "extensions"],
            Self::StarTwoPhase => &["arrival", "coupon_time", "leaf_phase"],
            Self::Online(_) => &["dexp", "explored", "steps", "catches", "catch_wait"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub trial: u64,
    pub seed: u64,
    pub values: Vec<Option<f64>>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    pub measures: Vec<String>,
    pub rows: Vec<Row>,
    pub summaries: Vec<(String, Option<Summary>)>,
    pub failures: usize,
    pub wall_time_ms: u128,
}

/// Rounds to the six decimals written to the CSV, so summaries recomputed
/// from the file agree exactly.
fn six(x: f64) -> f64 {
    format!("{x:.6}").parse().expect("formatted float parses")
}

fn param_u64(spec: &ExperimentSpec, key: &str, default: u64) -> Result<u64> {
    match spec.params.get(key) {
        None => Ok(default),
        Some(v) => v.as_u64().ok_or_else(|| CliError::Experiment(format!("params.{key} must be a nonnegative integer"))),
    }
}

fn param_f64(spec: &ExperimentSpec, key: &str, default: f64) -> Result<f64> {
    match spec.params.get(key) {
        None => Ok(default),
        Some(v) => v.as_f64().ok_or_else(|| CliError::Experiment(format!("params.{key} must be a number"))),
    }
}

/// Closeness parameters `(t, p, trials)` for the meta-graph strategy.
pub fn closeness_params(n: usize) -> (u64, f64, u64) {
    ((700.0 * (n as f64).sqrt()).ceil() as u64, 1.0 / 9.0, 100)
}

enum Prepared {
    None,
    Plan(BackbonePlan),
    Meta(MetaGraph),
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let clock = Instant::now();
    if let Some(f) = &spec.format {
        if f != EXPERIMENT_FORMAT {
            return Err(CliError::Experiment(format!("unsupported format {f:?}, expected {EXPERIMENT_FORMAT:?}")));
        }
    }
    if spec.trials == 0 {
        return Err(CliError::Experiment("trials must be at least 1".into()));
    }
    let strategy = Strategy::parse(&spec.strategy)?;
    let available = strategy.measures();
    let measures: Vec<String> = if spec.measure.is_empty() {
        available.iter().map(|s| s.to_string()).collect()
    } else {
        spec.measure.clone()
    };
    if let Some(m) = measures.iter().find(|m| !available.contains(&m.as_str())) {
        return Err(CliError::Experiment(format!("{} does not measure {m:?}; available: {available:?}", spec.strategy)));
    }
    let model = load_model(&spec.model)?;
    let n = model.n();
    let start = param_u64(spec, "start", 1)? as usize;
    if start == 0 || start > n {
        return Err(CliError::Experiment(format!("params.start = {start} outside 1..={n}")));
    }
    let max_time = spec.max_time.unwrap_or(DEFAULT_MAX_TIME);
    let horizon = param_u64(spec, "horizon", max_time)?;
    let prepared = match strategy {
        Strategy::Linear => Prepared::Plan(build_backbone_plan(&model)?),
        Strategy::Meta => {
            let (t, p, trials) = closeness_params(n);
            let t = param_u64(spec, "closeness_t", t)?;
            let p = param_f64(spec, "closeness_p", p)?;
            let trials = param_u64(spec, "closeness_trials", trials)?;
            let sources: Vec<usize> = (1..=n).collect();
            Prepared::Meta(build_meta_graph(&estimate_closeness(&model, t, p, trials, spec.seed, &sources)?))
        }
        _ => Prepared::None,
    };
    let rows: Vec<Row> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(spec.seed, trial);
            match run_trial(&model, strategy, &prepared, seed, start, max_time, horizon) {
                Ok(found) => Row {
                    trial,
                    seed,
                    values: measures
                        .iter()
                        .map(|m| found.iter().find(|(k, _)| k == m).and_then(|(_, v)| *v).map(six))
                        .collect(),
                    error: None,
                },
                Err(e) => Row { trial, seed, values: vec![None; measures.len()], error: Some(e.to_string()) },
            }
        })
        .collect();
    let summaries = measures
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let values: Vec<f64> = rows.iter().filter(|r| r.error.is_none()).filter_map(|r| r.values[i]).collect();
            (m.clone(), summarize(&values))
        })
        .collect();
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    Ok(ExperimentReport {
        spec: spec.clone(),
        measures,
        rows,
        summaries,
        failures,
        wall_time_ms: clock.elapsed().as_millis(),
    })
}

type Measured = Vec<(&'static str, Option<f64>)>;

fn run_trial(
    model: &Model,
    strategy: Strategy<'_>,
    prepared: &Prepared,
    seed: u64,
    start: usize,
    max_time: u64,
    horizon: u64,
) -> tempex_core::Result<Measured> {
    let schedule = match (strategy, prepared) {
        (Strategy::Greedy, _) => greedy_schedule(model, seed, start, max_time)?,
        (Strategy::Linear, Prepared::Plan(plan)) => linear_schedule(model, seed, plan, start, max_time)?,
        (Strategy::Meta, Prepared::Meta(meta)) => meta_graph_schedule(model, seed, meta, start, max_time)?,
        (Strategy::StarTwoPhase, _) => star_two_phase(model, seed, start, max_time)?,
        (Strategy::Online(name), _) => {
            let mut policy = policy_by_name(name, model)?;
            let run = run_online(model, seed, policy.as_mut(), start, horizon)?;
            let wait = run.events.iter().find(|e| e.kind == "catch").and_then(|e| e.wait);
            return Ok(vec![
                ("dexp", run.dexp.map(|d| d as f64)),
                ("explored", Some(if run.dexp.is_some() { 1.0 } else { 0.0 })),
                ("steps", Some(run.walk.current_time() as f64)),
                ("catches", Some(run.catches.len() as f64)),
                ("catch_wait", wait.map(|w| w as f64)),
            ]);
        }
        _ => unreachable!("strategy prepared before trials"),
    };
    let coupon = schedule.legs.iter().find(|l| l.kind == LegKind::Coupon).map_or(0, |l| l.end_time);
    Ok(vec![
        ("arrival", Some(schedule.arrival as f64)),
        ("legs", Some(schedule.legs.len() as f64)),
        ("extensions", Some(f64::from(schedule.extensions()))),
        ("coupon_time", Some(coupon as f64)),
        ("leaf_phase", Some((schedule.arrival - coupon) as f64)),
    ])
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed");
        for m in &self.measures {
            out.push(',');
            out.push_str(m);
        }
        out.push_str(",error\n");
        for row in &self.rows {
            out.push_str(&format!("{},{}", row.trial, row.seed));
            for v in &row.values {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&format!("{v:.6}"));
                }
            }
            out.push(',');
            if let Some(e) = &row.error {
                out.push_str(&e.replace([',', '\n', '\r'], " "));
            }
            out.push('\n');
        }
        out
    }

    /// The summary document. `with_timing` adds the wall-clock time, which
    /// naturally differs between otherwise identical runs.
    pub fn summary_json(&self, with_timing: bool) -> Value {
        let summary: Map<String, Value> = self
            .summaries
            .iter()
            .map(|(m, s)| (m.clone(), serde_json::to_value(s).expect("summary serializes")))
            .collect();
        let mut doc = serde_json::json!({
            "format": REPORT_FORMAT,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "spec": self.spec,
            "trials": self.rows.len(),
            "failures": self.failures,
            "summary": summary,
        });
        if with_timing {
            doc["wall_time_ms"] = serde_json::json!(self.wall_time_ms);
        }
        doc
    }

    pub fn summary(&self, measure: &str) -> Option<&Summary> {
        self.summaries.iter().find(|(m, _)| m == measure).and_then(|(_, s)| s.as_ref())
    }

    pub fn values(&self, measure: &str) -> Vec<f64> {
        let Some(i) = self.measures.iter().position(|m| m == measure) else {
            return Vec::new();
        };
        self.rows.iter().filter(|r| r.error.is_none()).filter_map(|r| r.values[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(strategy: &str, trials: u64) -> ExperimentSpec {
        ExperimentSpec {
            format: None,
            model: "stars:n=12,k=3".into(),
            strategy: strategy.into(),
            params: Map::new(),
            trials,
            seed: 9,
            max_time: None,
            measure: Vec::new(),
        }
    }

    #[test]
    fn single_trial_summary_is_the_row() {
        let r = run_experiment(&spec("greedy", 1)).unwrap();
        let arrival = r.rows[0].values[0].unwrap();
        let s = r.summary("arrival").unwrap();
        assert_eq!((s.mean, s.min, s.max, s.q50), (arrival, arrival, arrival, arrival));
    }

    #[test]
    fn reruns_are_identical() {
        for strategy in ["greedy", "linear", "star-two-phase", "online:centre_grab"] {
            let a = run_experiment(&spec(strategy, 20)).unwrap();
            let b = run_experiment(&spec(strategy, 20)).unwrap();
            assert_eq!(a.to_csv(), b.to_csv());
            assert_eq!(a.summary_json(false), b.summary_json(false));
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(run_experiment(&spec("teleport", 3)).is_err());
        assert!(run_experiment(&spec("greedy", 0)).is_err());
        let mut s = spec("greedy", 2);
        s.measure = vec!["dexp".into()];
        assert!(run_experiment(&s).is_err());
    }

    #[test]
    fn failures_are_rows() {
        let mut s = spec("greedy", 4);
        s.max_time = Some(2);
        let r = run_experiment(&s).unwrap();
        assert_eq!(r.failures, 4);
        assert!(r.to_csv().lines().nth(1).unwrap().contains("no schedule completed"));
        assert!(r.summary("arrival").is_none());
    }
}
