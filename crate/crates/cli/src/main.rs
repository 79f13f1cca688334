use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tempex_core::io::model_to_json;
use tempex_core::oracle::{exact_visit_time, StartMode};
use tempex_core::predict::{
    birthday_survival, coupon_mean, degree_lower, online_star_lower, star_exploration, tau1_bounds, tau1_mean,
};
use tempex_core::schedulers::{
    build_backbone_plan, build_meta_graph, greedy_schedule, linear_schedule, meta_graph_schedule, policy_by_name,
    run_online, star_two_phase,
};
use tempex_core::search::estimate_closeness;
use tempex_core::{Model, TemporalWindow, VertexSet};

use tempex::error::{read_file, CliError, Result};
use tempex::experiment::{closeness_params, run_experiment, ExperimentSpec, DEFAULT_MAX_TIME};
use tempex::spec::load_model;
use tempex::verify::{report_json, run_suite};

#[derive(Parser)]
#[command(name = "tempex", version, about = "Explore random spanning-tree temporal graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check or describe a model given as a file or a named spec.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Print the snapshot indices of a seeded window as CSV.
    Sample {
        spec: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        t0: u64,
        #[arg(long)]
        t1: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run one exploration strategy and print the schedule as JSON.
    Explore {
        spec: String,
        /// meta, linear, greedy, star-two-phase or online:<policy>
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        start: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_TIME)]
        max_time: u64,
        /// Closeness horizon for the meta strategy (default 700 sqrt(n)).
        #[arg(long)]
        closeness_t: Option<u64>,
        #[arg(long)]
        closeness_p: Option<f64>,
        #[arg(long)]
        closeness_trials: Option<u64>,
    },
    /// Exact exploration time of a seeded window by dynamic programming.
    Oracle {
        spec: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        t0: u64,
        #[arg(long)]
        t1: u64,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Comma-separated target vertices (default: all).
        #[arg(long, value_delimiter = ',')]
        targets: Option<Vec<usize>>,
    },
    /// Evaluate a closed-form prediction.
    Predict {
        #[arg(value_enum)]
        quantity: Quantity,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        theta: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long, default_value_t = 2.0)]
        c: f64,
    },
    /// Run a Monte Carlo experiment described by a JSON spec file.
    Experiment {
        file: String,
        /// Output prefix for `<prefix>.csv` and `<prefix>.summary.json` (default: the spec path without extension).
        #[arg(long)]
        out: Option<String>,
    },
    /// Run acceptance criteria at pinned seeds.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Ten times fewer trials; verdicts are advisory.
        #[arg(long)]
        quick: bool,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<String>,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    Validate { spec: String },
    Info { spec: String },
    /// Write the model in the versioned JSON file format.
    Export { spec: String },
    /// Print the backbone plan used by the linear strategy.
    Plan { spec: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Best,
    Worst,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Tau1Bounds,
    Tau1Mean,
    BirthdaySurvival,
    CouponMean,
    StarExploration,
    DegreeLower,
    OnlineStarLower,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, CliError::Usage(_)) { 2 } else { 1 })
        }
    }
}

fn write(path: &str, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_string(), source })
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn need(name: &str, value: Option<u64>) -> Result<u64> {
    value.ok_or_else(|| CliError::Usage(format!("this quantity needs --{name}")))
}

fn check_vertex(model: &Model, v: usize) -> Result<()> {
    if v == 0 || v > model.n() {
        return Err(tempex_core::Error::VertexOutOfRange { vertex: v, n: model.n() }.into());
    }
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Model { action } => match action {
            ModelAction::Validate { spec } => {
                let model = load_model(&spec)?;
                println!("ok: n = {}, {} trees", model.n(), model.len());
            }
            ModelAction::Info { spec } => {
                let model = load_model(&spec)?;
                let p = model.edge_probabilities();
                let max_degree = model.trees().iter().map(|t| t.max_degree()).max().unwrap_or(0);
                println!(
                    "{}",
                    pretty(&json!({
                        "n": model.n(),
                        "trees": model.len(),
                        "union_edges": p.len(),
                        "stars": model.is_star_model(),
                        "max_degree": max_degree,
                        "min_edge_probability": p.values().min().map(|&w| w as f64 / tempex_core::model::ONE as f64),
                    }))
                );
            }
            ModelAction::Export { spec } => println!("{}", model_to_json(&load_model(&spec)?)),
            ModelAction::Plan { spec } => {
                let plan = build_backbone_plan(&load_model(&spec)?)?;
                let mut doc = plan.to_json();
                doc["violations"] = json!(plan.violations());
                println!("{}", pretty(&doc));
            }
        },
        Command::Sample { spec, seed, t0, t1, out } => {
            let model = load_model(&spec)?;
            let window = TemporalWindow::materialize(&model, seed, t0, t1)?;
            let mut buf = Vec::new();
            window.write_csv(&mut buf).expect("writing to memory");
            let text = String::from_utf8(buf).expect("ascii csv");
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
        }
        Command::Explore { spec, strategy, seed, start, max_time, closeness_t, closeness_p, closeness_trials } => {
            let model = load_model(&spec)?;
            check_vertex(&model, start)?;
            let doc = if let Some(policy) = strategy.strip_prefix("online:") {
                let mut policy = policy_by_name(policy, &model).map_err(|e| CliError::Usage(e.to_string()))?;
                run_online(&model, seed, policy.as_mut(), start, max_time)?.to_json()
            } else {
                let schedule = match strategy.as_str() {
                    "greedy" => greedy_schedule(&model, seed, start, max_time)?,
                    "linear" => linear_schedule(&model, seed, &build_backbone_plan(&model)?, start, max_time)?,
                    "star-two-phase" => star_two_phase(&model, seed, start, max_time)?,
                    "meta" => {
                        let (t, p, trials) = closeness_params(model.n());
                        let sources: Vec<usize> = (1..=model.n()).collect();
                        let closeness = estimate_closeness(
                            &model,
                            closeness_t.unwrap_or(t),
                            closeness_p.unwrap_or(p),
                            closeness_trials.unwrap_or(trials),
                            seed,
                            &sources,
                        )?;
                        meta_graph_schedule(&model, seed, &build_meta_graph(&closeness), start, max_time)?
                    }
                    other => return Err(CliError::Usage(format!("unknown strategy {other:?}"))),
                };
                schedule.to_json()
            };
            println!("{}", pretty(&doc));
        }
        Command::Oracle { spec, seed, t0, t1, mode, targets } => {
            let model = load_model(&spec)?;
            let window = TemporalWindow::materialize(&model, seed, t0, t1)?;
            let n = model.n();
            let targets = match targets {
                Some(list) => {
                    for &v in &list {
                        check_vertex(&model, v)?;
                    }
                    VertexSet::from_vertices(n, list)
                }
                None => VertexSet::full(n),
            };
            let mode = match mode {
                Mode::Best => StartMode::Best,
                Mode::Worst => StartMode::Worst,
            };
            let result = exact_visit_time(&window, &targets, mode)?;
            let mut doc = json!({ "mode": result.mode, "targets": result.targets, "value": result.value });
            let key = if mode == StartMode::Best { "argmin_start" } else { "argmax_start" };
            doc[key] = json!(result.start);
            println!("{}", pretty(&doc));
        }
        Command::Predict { quantity, k, t, theta, n, d, c } => {
            let text = match quantity {
                Quantity::Tau1Bounds => {
                    let (lo, hi) = tau1_bounds(need("k", k)?);
                    format!("[{lo:.3}, {hi:.3}]")
                }
                Quantity::Tau1Mean => format!("{:.6}", tau1_mean(need("k", k)?)),
                Quantity::BirthdaySurvival => format!("{:.6}", birthday_survival(need("k", k)?, need("t", t)?)),
                Quantity::CouponMean => format!("{:.6}", coupon_mean(need("k", k)?, need("theta", theta)?)),
                Quantity::StarExploration => {
                    pretty(&serde_json::to_value(star_exploration(need("n", n)?, need("k", k)?, c)?).expect("serializes"))
                }
                Quantity::DegreeLower => format!("{:.6}", degree_lower(need("d", d)?, need("n", n)?)?),
                Quantity::OnlineStarLower => format!("{:.6}", online_star_lower(need("n", n)?)?),
            };
            println!("{text}");
        }
        Command::Experiment { file, out } => {
            let spec: ExperimentSpec =
                serde_json::from_str(&read_file(&file)?).map_err(|e| CliError::Experiment(e.to_string()))?;
            let report = run_experiment(&spec)?;
            let prefix = out.unwrap_or_else(|| {
                let p = Path::new(&file);
                p.with_extension("").to_string_lossy().into_owned()
            });
            write(&format!("{prefix}.csv"), &report.to_csv())?;
            let summary = pretty(&report.summary_json(true));
            write(&format!("{prefix}.summary.json"), &summary)?;
            println!("{summary}");
        }
        Command::Verify { suite, quick, json } => {
            let verdicts = run_suite(&suite, quick)?;
            for v in &verdicts {
                println!("{}", v.line());
            }
            if let Some(path) = json {
                write(&path, &pretty(&report_json(&verdicts, quick)))?;
            }
            if verdicts.iter().any(|v| !v.pass) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
