use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use driftlab::evolution::{run_dual, run_forward, DualOptions, EquationKind, ForwardOptions, VelocityHistory, VelocitySpec};
use driftlab::io::{self, Artifacts, RunConfig};
use driftlab::spaces::ClassParams;
use driftlab::verify::{registry, run_suite, suite_names, Outcome, VerificationReport};
use driftlab::{Error, Result, ScalarField};

#[derive(Parser)]
#[command(name = "driftlab", version, about = "Drift-diffusion and SQG laboratory on the periodic torus")]
#[command(after_help = AFTER_HELP)]
struct Cli {
    /// Run configuration (TOML with dotted keys)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; nothing is written unless the command succeeds
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for random initial data, overriding the config
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

const AFTER_HELP: &str = "Exit codes: 0 success, 1 verdict failure, 2 usage or configuration error, 3 numerical abort.\nRun `driftlab keys` for the configuration reference.";

#[derive(Subcommand)]
enum Command {
    /// Forward evolution: series.csv, snapshots and optionally the velocity history
    Simulate,
    /// Dual evolution of the initial field with class membership tracking
    Dual,
    /// Norms and regularity estimates of a snapshot file
    Diagnose {
        /// torusfield snapshot
        field: PathBuf,
        /// Comma-separated names: linf, l1, l2, mean, bmo, lp, classes, holder
        #[arg(long, value_delimiter = ',', default_value = "linf,l1,l2,mean")]
        norms: Vec<String>,
        /// Exponent of the `holder` seminorm
        #[arg(long, default_value_t = 0.25)]
        beta: f64,
    },
    /// Run a bundled verification suite, or `all`; lists the suites when omitted
    Verify { suite: Option<String> },
    /// Print the configuration key reference
    Keys,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("driftlab: cannot size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("driftlab: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Simulate => simulate(&load(cli)?, out_dir(cli)?),
        Command::Dual => dual(&load(cli)?, out_dir(cli)?),
        Command::Diagnose { field, norms, beta } => diagnose(field, norms, *beta, cli.out.as_deref()),
        Command::Verify { suite: None } => {
            for s in registry() {
                println!("{:<18} {}", s.name, s.description);
            }
            Ok(0)
        }
        Command::Verify { suite: Some(suite) } => verify(suite, cli.seed.unwrap_or(0), cli.out.as_deref()),
        Command::Keys => {
            print!("{}", io::key_reference());
            Ok(0)
        }
    }
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::config("--config", "this command needs a configuration file"))?;
    let mut cfg = io::parse_config(path)?;
    if let Some(seed) = cli.seed {
        cfg.set_seed(seed);
    }
    let mut inputs = vec![path.to_path_buf()];
    inputs.append(&mut cfg.inputs);
    cfg.inputs = inputs;
    Ok(cfg)
}

fn out_dir(cli: &Cli) -> Result<&Path> {
    cli.out
        .as_deref()
        .ok_or_else(|| Error::config("--out", "this command needs an output directory"))
}

fn snapshot_name(step: usize) -> String {
    format!("snap_{step:06}.tf")
}

fn simulate(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let theta0 = cfg.initial_field()?;
    let run = run_forward(
        &cfg.sim,
        &theta0,
        &ForwardOptions {
            snapshot_every: cfg.snapshot_every,
            bmo_u: cfg.bmo_u,
            beta_hat: cfg.beta_hat,
            record_history: cfg.write_history,
            memory_cap: cfg.memory_cap,
        },
    )?;
    let mut art = Artifacts::new();
    art.add("series.csv", io::forward_csv(&run.rows)?);
    if run.snapshots.is_empty() {
        art.add(snapshot_name(0), theta0.to_snapshot_string());
    }
    for s in &run.snapshots {
        art.add(snapshot_name(s.step), s.theta.to_snapshot_string());
    }
    if run.snapshots.last().map(|s| s.step) != Some(run.final_state.step) {
        let f = &run.final_state;
        art.add(snapshot_name(f.step), f.theta.to_snapshot_string());
    }
    if let Some(h) = &run.history {
        art.add("velocity.hist", io::history_to_string(&h.to_frames(run.dt)?));
    }
    art.commit(out, "simulate", &cfg.echo, &cfg.inputs)?;
    println!("simulate: {} steps of dt={:e}, {} files in {}", run.steps, run.dt, art.names().count() + 1, out.display());
    Ok(0)
}

fn dual(cfg: &RunConfig, out: &Path) -> Result<u8> {
    let psi0 = cfg.initial_field()?;
    let grid = cfg.sim.grid;
    let history = match (&cfg.dual.history, cfg.sim.kind, &cfg.sim.velocity) {
        (Some(path), ..) => {
            let frames = io::read_history(path).map_err(|e| Error::config("dual.history", e.to_string()))?;
            VelocityHistory::Stored(Arc::new(frames))
        }
        (None, EquationKind::Sqg, _) => {
            return Err(Error::config("dual.history", "required for SQG: run `simulate` with output.history = true"))
        }
        (None, _, VelocitySpec::Recorded(frames)) => {
            VelocityHistory::prescribed(grid, cfg.sim.velocity.clone(), frames.covered())
        }
        (None, _, spec) => VelocityHistory::prescribed(grid, spec.clone(), cfg.dual.horizon),
    };
    let run = run_dual(
        &cfg.sim,
        &psi0,
        cfg.dual.horizon,
        &history,
        &DualOptions {
            substeps: cfg.dual.substeps,
            cadence: cfg.dual.cadence,
            membership: Some(ClassParams::new(cfg.dual_radius(), cfg.dual.a)?),
            ..DualOptions::default()
        },
    )?;
    let mut art = Artifacts::new();
    art.add("dual.csv", io::dual_csv(&run.rows)?);
    art.add("dual_initial.tf", psi0.to_snapshot_string());
    art.add("dual_final.tf", run.final_field.to_snapshot_string());
    art.commit(out, "dual", &cfg.echo, &cfg.inputs)?;
    println!("dual: {} steps of ds={:e} to s={:e}, files in {}", run.steps, run.ds, run.horizon, out.display());
    Ok(0)
}

fn diagnose(path: &Path, names: &[String], beta: f64, out: Option<&Path>) -> Result<u8> {
    let bytes = std::fs::read(path)?;
    let field = ScalarField::from_snapshot_str(&String::from_utf8_lossy(&bytes))?;
    let results = io::diagnose(&field, names, beta)?;
    let mut norms = Map::new();
    for (name, value) in results {
        let v = match value {
            Ok(x) if x.is_finite() => json!(x),
            Ok(x) => json!(x.to_string()),
            Err(e) => json!({ "error": e.to_string() }),
        };
        norms.insert(name, v);
    }
    let g = field.grid();
    let record = json!({
        "file": path.display().to_string(),
        "sha256": io::sha256_hex(&bytes),
        "d": g.dim(),
        "N": g.n(),
        "beta": beta,
        "norms": Value::Object(norms),
    });
    let text = serde_json::to_string_pretty(&record).expect("record serializes");
    println!("{text}");
    if let Some(dir) = out {
        let mut art = Artifacts::new();
        art.add("diagnose.json", text);
        let echo = [("norms".to_string(), names.join(",")), ("beta".to_string(), beta.to_string())].into();
        art.commit(dir, "diagnose", &echo, &[path.to_path_buf()])?;
    }
    Ok(0)
}

fn verify(suite: &str, seed: u64, out: Option<&Path>) -> Result<u8> {
    let names: Vec<&str> = if suite == "all" { suite_names() } else { vec![suite] };
    if suite != "all" && !suite_names().contains(&suite) {
        // Fails immediately with the registry listing.
        run_suite(suite, seed)?;
    }
    let results: Vec<Result<Vec<VerificationReport>>> = names.par_iter().map(|n| run_suite(n, seed)).collect();
    let mut art = Artifacts::new();
    let mut failed = false;
    for (name, result) in names.iter().zip(results) {
        let reports = result?;
        for r in &reports {
            for v in &r.verdicts {
                let tag = match v.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => "FAIL",
                    Outcome::NotApplicable => "N/A ",
                };
                let value = v.value.map_or(String::new(), |x| format!(" value={x:.4e}"));
                println!("{tag} {name} :: {} :: {}{value}", r.scenario, v.name);
            }
            failed |= !r.passed();
        }
        let doc = serde_json::to_string_pretty(&reports).expect("reports serialize");
        art.add(format!("report_{name}.json"), doc);
    }
    if let Some(dir) = out {
        let echo = [("suite".to_string(), suite.to_string()), ("seed".to_string(), seed.to_string())].into();
        art.commit(dir, "verify", &echo, &[])?;
    }
    println!("verify {suite}: {}", if failed { "FAIL" } else { "PASS" });
    Ok(if failed { 1 } else { 0 })
}
