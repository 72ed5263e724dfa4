use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use kidgym::harness::{run_suite, ClientSpec, Reasoning, SuiteConfig};
use kidgym::procgen::{sample_instance, seeds, Catalog, TaskInstance};
use kidgym::render::{render_frame_with, RenderConfig, Tileset};
use kidgym::scoring::{
    analytic_random_baseline, capability_profile, estimate_random_baseline_with, exact_random_success,
    CapabilityMap, SuccessTable, BASELINE_SEED,
};
use kidgym::tasks::BudgetMode;
use kidgym::world::apply_action;
use kidgym::{Level, TaskKind};

#[derive(Parser)]
#[command(name = "kidgym", version, about = "Procedural grid-world tasks for multimodal agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate task instances as JSON files.
    Gen {
        /// Task code (CL, SE, ...) or `all`.
        #[arg(long)]
        task: String,
        /// 1, 2, 3 or `all`.
        #[arg(long, default_value = "1")]
        level: String,
        /// Suite seed; instance i gets the seed of suite round i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long)]
        out: PathBuf,
        /// Alternative item catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Render one state of an instance to PNG.
    Render {
        #[arg(long)]
        instance: PathBuf,
        /// State after the first k witness actions.
        #[arg(long, default_value_t = 0)]
        step: usize,
        #[arg(long, default_value_t = 64)]
        px: u32,
        #[arg(long)]
        out: PathBuf,
        /// Draw hidden content too (debug view).
        #[arg(long)]
        show_hidden: bool,
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Run an evaluation suite and write the table and transcripts.
    Eval {
        /// Suite JSON; the full 12x3 suite with 100 rounds when omitted.
        #[arg(long)]
        suite: Option<PathBuf>,
        /// oracle, random or api:<model>
        #[arg(long, default_value = "oracle")]
        client: String,
        /// zero-shot, cot or icl
        #[arg(long)]
        mode: Option<Reasoning>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        rounds: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn a success table into capability scores.
    Score {
        /// CSV (task,L1,L2,L3) or table JSON.
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Capability map JSON replacing the shipped one.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value = "model")]
        label: String,
    },
    /// Estimate the uniform-random success rate of one cell.
    Baseline {
        #[arg(long)]
        task: TaskKind,
        #[arg(long)]
        level: Level,
        #[arg(long, default_value_t = 500)]
        rounds: u32,
        #[arg(long, default_value_t = BASELINE_SEED)]
        seed: u64,
        #[arg(long)]
        relaxed: bool,
    },
    /// Serve the human play API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Session and result store; in memory when omitted.
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

fn load_catalog(path: Option<&Path>) -> Result<Option<Catalog>> {
    path.map(|p| Catalog::load(p).with_context(|| format!("loading {}", p.display()))).transpose()
}

fn kinds(arg: &str) -> Result<Vec<TaskKind>> {
    if arg.eq_ignore_ascii_case("all") {
        return Ok(TaskKind::ALL.to_vec());
    }
    arg.split(',').map(|s| s.parse().map_err(anyhow::Error::from)).collect()
}

fn levels(arg: &str) -> Result<Vec<Level>> {
    if arg.eq_ignore_ascii_case("all") {
        return Ok(Level::ALL.to_vec());
    }
    arg.split(',').map(|s| s.parse().map_err(anyhow::Error::from)).collect()
}

fn gen(task: &str, level: &str, seed: u64, count: u32, out: &Path, catalog: Option<&Path>) -> Result<()> {
    let catalog = load_catalog(catalog)?;
    let cat = catalog.as_ref().unwrap_or(Catalog::shipped());
    fs::create_dir_all(out)?;
    for kind in kinds(task)? {
        for level in levels(level)? {
            for i in 0..count {
                let s = seeds::round_seed(seed, kind, level, i as u64);
                let inst = kidgym::procgen::sample_instance_with(cat, kind, level, s)?;
                let path = out.join(format!("{}-{}-{i:04}.json", kind.code(), level));
                fs::write(&path, inst.to_json())?;
            }
            println!("{} {}: {count} instances", kind.code(), level);
        }
    }
    Ok(())
}

fn render(instance: &Path, step: usize, px: u32, out: &Path, show_hidden: bool, catalog: Option<&Path>) -> Result<()> {
    let text = fs::read_to_string(instance).with_context(|| format!("reading {}", instance.display()))?;
    let inst = TaskInstance::from_json(&text)?;
    if step > inst.witness.len() {
        bail!("step {step} is past the witness ({} actions)", inst.witness.len());
    }
    let state = inst.witness[..step].iter().try_fold(inst.initial.clone(), |s, a| apply_action(&s, a))?;
    let tiles = match load_catalog(catalog)? {
        Some(c) => Tileset::procedural(&c)?,
        None => Tileset::shipped().clone(),
    };
    let config = RenderConfig { show_hidden, ..RenderConfig::with_cell_px(px) };
    let frame = render_frame_with(&state, &config, &tiles)?;
    fs::write(out, frame.png()?)?;
    println!("{}x{} {}", frame.width, frame.height, frame.hash());
    Ok(())
}

fn eval(
    suite: Option<&Path>,
    client: &str,
    mode: Option<Reasoning>,
    seed: Option<u64>,
    rounds: Option<u32>,
    out: &Path,
) -> Result<()> {
    let mut config = match suite {
        Some(p) => SuiteConfig::load(p).map_err(anyhow::Error::msg)?,
        None => SuiteConfig::default(),
    };
    if let Some(m) = mode {
        config.episode.reasoning = m;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(r) = rounds {
        config.rounds = r;
    }
    config.keep_transcripts = true;
    let spec = ClientSpec::parse(client, config.seed).map_err(anyhow::Error::msg)?;
    let report = run_suite(&config, &spec);
    let dir = out.join("transcripts");
    fs::create_dir_all(&dir)?;
    let mut errors = 0;
    for cell in &report.cells {
        for r in &cell.results {
            let h = &r.transcript.header;
            let name = format!("{}-{}-{:016x}.jsonl", h.kind.code(), h.level, h.seed);
            fs::write(dir.join(name), r.transcript.to_jsonl())?;
        }
        for e in &cell.errors {
            eprintln!("{} {} round {}: {}", cell.kind.code(), cell.level, e.round, e.error);
            errors += 1;
        }
    }
    fs::write(out.join("table.json"), report.table.to_json())?;
    fs::write(out.join("table.csv"), report.table.to_csv())?;
    fs::write(out.join("suite.json"), serde_json::to_string_pretty(&config)?)?;
    print!("{}", report.table.to_csv());
    if errors > 0 {
        eprintln!("{errors} rounds ended in infrastructure errors and are not counted");
    }
    Ok(())
}

fn score(table: &Path, out: Option<&Path>, map: Option<&Path>, label: &str) -> Result<()> {
    let text = fs::read_to_string(table).with_context(|| format!("reading {}", table.display()))?;
    let t = if table.extension().is_some_and(|e| e == "json") {
        SuccessTable::from_json(&text)?
    } else {
        SuccessTable::from_csv(&text)?
    };
    let owned;
    let map = match map {
        Some(p) => {
            owned = CapabilityMap::from_json(&fs::read_to_string(p)?)?;
            &owned
        }
        None => CapabilityMap::shipped(),
    };
    let profile = capability_profile(&t, map)?;
    let radar = profile.radar_json(label);
    for axis in radar["axes"].as_array().into_iter().flatten() {
        println!("{} {}", axis["code"].as_str().unwrap_or(""), axis["score"]);
    }
    if let Some(p) = out {
        fs::write(p, serde_json::to_string_pretty(&radar)?)?;
    }
    Ok(())
}

fn baseline(kind: TaskKind, level: Level, rounds: u32, seed: u64, relaxed: bool) -> Result<()> {
    let budget = if relaxed { BudgetMode::Relaxed } else { BudgetMode::Strict };
    let est = estimate_random_baseline_with(kind, level, rounds, seed, budget);
    // exact success of each sampled instance, averaged
    let exact: f64 = (0..rounds.min(200))
        .map(|r| {
            let inst = sample_instance(kind, level, seeds::round_seed(seed, kind, level, r as u64))?;
            Ok(exact_random_success(&inst, budget))
        })
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum::<f64>()
        / rounds.min(200).max(1) as f64;
    let analytic = analytic_random_baseline(kind, level).ok();
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "task": kind.code(),
            "level": level.number(),
            "rounds": est.rounds,
            "rate": est.rate,
            "half_width_95": est.half_width,
            "exact_mean": exact,
            "analytic": analytic,
        }))?
    );
    Ok(())
}

fn serve(port: u16, host: &str, catalog: Option<&Path>, store: Option<PathBuf>, seed: u64) -> Result<()> {
    let config = kidgym::play::ServiceConfig { seed, store, catalog: load_catalog(catalog)? };
    let service = Arc::new(kidgym::play::PlayService::open(config)?);
    let addr = format!("{host}:{port}").parse().context("listen address")?;
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{addr}");
    rt.block_on(kidgym::play::serve(addr, service))?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen { task, level, seed, count, out, catalog } => {
            gen(&task, &level, seed, count, &out, catalog.as_deref())
        }
        Command::Render { instance, step, px, out, show_hidden, catalog } => {
            render(&instance, step, px, &out, show_hidden, catalog.as_deref())
        }
        Command::Eval { suite, client, mode, seed, rounds, out } => {
            eval(suite.as_deref(), &client, mode, seed, rounds, &out)
        }
        Command::Score { table, out, map, label } => score(&table, out.as_deref(), map.as_deref(), &label),
        Command::Baseline { task, level, rounds, seed, relaxed } => baseline(task, level, rounds, seed, relaxed),
        Command::Serve { port, catalog, store, seed, host } => serve(port, &host, catalog.as_deref(), store, seed),
    }
}
