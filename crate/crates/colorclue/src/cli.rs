//! The `colorclue` command line.
//!
//! Exit codes: 0 for any completed run (every verdict included), 2 for usage
//! errors, 3 for I/O and parse errors.

use std::collections::hash_map::RandomState;
use std::fs;
use std::hash::BuildHasher;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use colorclue_core::cdsatur::{chromatic_bounds, count_colorings};
use colorclue_core::clue::{evaluate_clue, run_seed, DEFAULT_ALPHA};
use colorclue_core::families;
use colorclue_core::graph::generate_random;
use colorclue_core::head::SolverConfig;
use colorclue_core::iscount::{alpha, bollobas_estimate, count_independent_sets, pedersen_lower_bound, DEFAULT_IS_CAP};
use colorclue_core::{Clock, Graph, RandomGraphSpec, SearchLimits};
use serde::Serialize;
use thiserror::Error;

use crate::dimacs;
use crate::manifest::{sidecar_path, unix_now, RunManifest};
use crate::report::{strip_timings, ClueDoc, CountDoc, InstanceInfo, IsCountDoc};
use crate::sampling::{build_sample, SampleRequest, WallClock};
use crate::survey::{survey_graph, write_csv, SurveyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "colorclue", version, about = "Count k-colorings and look for optimality clues")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random G(n, d) graph, a batch of them, or a named family graph.
    Gen(GenArgs),
    /// Count k-colorings exactly, up to a time budget.
    Count(CountArgs),
    /// Count non-empty independent sets, up to a cap.
    Iscount(IsCountArgs),
    /// Sample k-colorings with the memetic solver and report the clue verdict.
    Clue(ClueArgs),
    /// One CSV row per instance from a directory or a generated batch.
    Survey(SurveyArgs),
    /// Rerun the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<f64>,
    /// Named graph such as queen6_6 or myciel4, instead of a random one.
    #[arg(long, conflicts_with_all = ["n", "d", "count"])]
    pub family: Option<String>,
    /// Batch size; graph i uses seed run_seed(seed, i) and `--out` is a directory.
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// A DIMACS .col file or a family name.
    pub instance: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    #[arg(long, default_value_t = 2400.0)]
    pub time_budget: f64,
    #[arg(long)]
    pub value_cap: Option<u64>,
    #[arg(long)]
    pub node_cap: Option<u64>,
    /// Also compute chromatic-number bounds within the same time budget.
    #[arg(long)]
    pub bounds: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IsCountArgs {
    pub instance: String,
    #[arg(long, default_value_t = DEFAULT_IS_CAP)]
    pub is_cap: u64,
    /// Budget for the independence-number search.
    #[arg(long, default_value_t = 60.0)]
    pub time_budget: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct SolverArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, default_value_t = 20_000)]
    pub tabu_iters: u64,
    /// Seconds per solver run.
    #[arg(long, default_value_t = 60.0)]
    pub time_budget: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_generations: u64,
    /// Maximum solver runs; defaults to twice the sample size.
    #[arg(long)]
    pub run_budget: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_IS_CAP)]
    pub is_cap: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha_const: f64,
}

#[derive(Debug, Args)]
pub struct ClueArgs {
    pub instance: String,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: u32,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub t: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Print one line per solver run on stderr.
    #[arg(long, short)]
    pub verbose: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    /// Directory of .col files.
    #[arg(long, conflicts_with_all = ["batch_n", "batch_d", "batch_count"])]
    pub dir: Option<PathBuf>,
    #[arg(long, requires_all = ["batch_d", "batch_count"])]
    pub batch_n: Option<usize>,
    #[arg(long)]
    pub batch_d: Option<f64>,
    #[arg(long)]
    pub batch_count: Option<u64>,
    /// Fixed color budget; by default the best upper bound on chi.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    /// Sample size per instance; 0 skips sampling.
    #[arg(long, default_value_t = 1000)]
    pub t: u64,
    /// Seconds for each of the chi and N(G,k) searches.
    #[arg(long, default_value_t = 2400.0)]
    pub count_budget: f64,
    #[arg(long)]
    pub value_cap: Option<u64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Rerun into a scratch file and compare with the recorded output,
    /// ignoring timing fields. Exits 1 on a mismatch.
    #[arg(long)]
    pub check: bool,
}

/// Parses `argv` (program name first) and runs it, returning the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let args: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    match execute(cli, args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, args: Vec<String>) -> Result<i32, CliError> {
    let started = unix_now();
    let (name, seed, outcome) = match cli.command {
        Command::Replay(r) => return replay(&r),
        Command::Gen(a) => {
            let seed = resolve_seed(a.seed);
            ("gen", Some(seed), cmd_gen(&a, seed)?)
        }
        Command::Count(a) => ("count", None, cmd_count(&a)?),
        Command::Iscount(a) => ("iscount", None, cmd_iscount(&a)?),
        Command::Clue(a) => {
            let seed = resolve_seed(a.solver.seed);
            ("clue", Some(seed), cmd_clue(&a, seed)?)
        }
        Command::Survey(a) => {
            let seed = resolve_seed(a.solver.seed);
            ("survey", Some(seed), cmd_survey(&a, seed)?)
        }
    };
    if let Some(out) = &outcome.out {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: name.to_string(),
            argv: with_seed(args, seed),
            params: outcome.params,
            seed,
            seeds: outcome.seeds,
            output: Some(out.clone()),
            started_unix_s: started,
            finished_unix_s: unix_now(),
        };
        manifest.write(&sidecar_path(out)).with_context(|| format!("writing manifest for {}", out.display()))?;
    }
    Ok(EXIT_OK)
}

struct Outcome {
    out: Option<PathBuf>,
    params: serde_json::Value,
    seeds: Vec<u64>,
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| RandomState::new().hash_one(unix_now().to_bits()))
}

fn with_seed(mut args: Vec<String>, seed: Option<u64>) -> Vec<String> {
    if let Some(seed) = seed {
        if !args.iter().any(|a| a == "--seed" || a.starts_with("--seed=")) {
            args.push("--seed".into());
            args.push(seed.to_string());
        }
    }
    args
}

/// A path to a `.col` file, or failing that a family name.
pub fn load_instance(spec: &str) -> Result<(Graph, String), CliError> {
    let path = Path::new(spec);
    if path.exists() {
        let g = dimacs::read(path).map_err(anyhow::Error::from)?;
        let label = g.name().unwrap_or(spec).to_string();
        return Ok((g, label));
    }
    match families::by_name(spec) {
        Some(g) => Ok((g, spec.to_string())),
        None => Err(CliError::Io(anyhow::anyhow!("{spec}: no such file or known graph family"))),
    }
}

fn emit<T: Serialize>(doc: &T, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(doc).map_err(anyhow::Error::from)? + "\n";
    write_text(&text, out)
}

fn write_text(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes()).context("writing stdout")?,
    }
    Ok(())
}

fn cmd_gen(a: &GenArgs, seed: u64) -> Result<Outcome, CliError> {
    if let Some(name) = &a.family {
        let g = families::by_name(name).ok_or_else(|| usage(format!("unknown family `{name}`")))?;
        write_text(&dimacs::to_string(&g), a.out.as_deref())?;
        return Ok(Outcome { out: a.out.clone(), params: serde_json::json!({ "family": name }), seeds: vec![] });
    }
    let (n, d) = match (a.n, a.d) {
        (Some(n), Some(d)) => (n, d),
        _ => return Err(usage("gen needs --n and --d, or --family")),
    };
    RandomGraphSpec::new(n, d, seed).validate().map_err(|e| usage(e.to_string()))?;
    let params = serde_json::json!({ "n": n, "d": d, "count": a.count });
    match a.count {
        None => {
            let g = generate_random(&RandomGraphSpec::new(n, d, seed)).map_err(|e| usage(e.to_string()))?;
            write_text(&dimacs::to_string(&g), a.out.as_deref())?;
            Ok(Outcome { out: a.out.clone(), params, seeds: vec![seed] })
        }
        Some(count) => {
            let dir = a.out.as_ref().ok_or_else(|| usage("batch generation needs --out DIR"))?;
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut seeds = Vec::new();
            for i in 0..count {
                let s = run_seed(seed, i);
                let g = generate_random(&RandomGraphSpec::new(n, d, s)).map_err(|e| usage(e.to_string()))?;
                let path = dir.join(format!("g{n}_{d}_{i:04}.col"));
                dimacs::write(&g, &path).with_context(|| format!("writing {}", path.display()))?;
                seeds.push(s);
            }
            Ok(Outcome { out: Some(dir.join("batch")), params, seeds })
        }
    }
}

fn cmd_count(a: &CountArgs) -> Result<Outcome, CliError> {
    let (g, label) = load_instance(&a.instance)?;
    let mut limits = SearchLimits::new(a.time_budget);
    limits.value_cap = a.value_cap;
    limits.node_cap = a.node_cap;
    limits.validate().map_err(|e| usage(e.to_string()))?;
    let bounds = a.bounds.then(|| chromatic_bounds(&g, &limits, &WallClock::start()));
    let r = count_colorings(&g, a.k, &limits, &WallClock::start()).map_err(|e| usage(e.to_string()))?;
    emit(&CountDoc::new(InstanceInfo::of(&g, &label), a.k, &r, bounds.as_ref()), a.out.as_deref())?;
    let params = serde_json::json!({ "instance": a.instance, "k": a.k, "limits": limits, "bounds": a.bounds });
    Ok(Outcome { out: a.out.clone(), params, seeds: vec![] })
}

fn cmd_iscount(a: &IsCountArgs) -> Result<Outcome, CliError> {
    let (g, label) = load_instance(&a.instance)?;
    let limits = SearchLimits::new(a.time_budget);
    limits.validate().map_err(|e| usage(e.to_string()))?;
    let is = count_independent_sets(&g, a.is_cap, &WallClock::start()).map_err(|e| usage(e.to_string()))?;
    let al = alpha(&g, &limits, &WallClock::start());
    let ped = pedersen_lower_bound(g.n() as u64, al.lb as u64).map_err(|e| usage(e.to_string()))?;
    let bol = g.density().ok().and_then(|d| bollobas_estimate(g.n() as u64, d).ok());
    emit(&IsCountDoc::new(InstanceInfo::of(&g, &label), &is, &al, &ped, bol), a.out.as_deref())?;
    let params = serde_json::json!({ "instance": a.instance, "is_cap": a.is_cap, "time_budget": a.time_budget });
    Ok(Outcome { out: a.out.clone(), params, seeds: vec![] })
}

fn solver_config(s: &SolverArgs, k: u32, seed: u64) -> Result<SolverConfig, CliError> {
    let mut config = SolverConfig::new(k).with_seed(seed);
    config.tabu_iterations = s.tabu_iters;
    config.time_budget = s.time_budget;
    config.max_generations = s.max_generations;
    config.validate().map_err(|e| usage(e.to_string()))?;
    if s.workers == 0 {
        return Err(usage("--workers must be >= 1"));
    }
    if !(s.alpha_const.is_finite() && s.alpha_const > 0.0) {
        return Err(usage("--alpha-const must be positive"));
    }
    Ok(config)
}

fn cmd_clue(a: &ClueArgs, seed: u64) -> Result<Outcome, CliError> {
    let (g, label) = load_instance(&a.instance)?;
    let config = solver_config(&a.solver, a.k, seed)?;
    let total = WallClock::start();
    let req = SampleRequest {
        graph: &g,
        t_target: a.t as usize,
        config,
        run_budget: a.solver.run_budget.unwrap_or(2 * a.t),
        workers: a.solver.workers,
        abandon_after: Some(10),
    };
    let verbose = a.verbose;
    let sample = build_sample(&req, &mut |i, seed, o| {
        if verbose {
            eprintln!(
                "run {i} seed {seed}: {:?} conflicts={} generations={} {:.3}s",
                o.status, o.best_conflicts, o.generations, o.elapsed
            );
        }
    })?;
    let is = count_independent_sets(&g, a.solver.is_cap, &WallClock::start()).map_err(|e| usage(e.to_string()))?;
    let report = evaluate_clue(&g, a.k, &sample, &is, a.solver.alpha_const).map_err(|e| usage(e.to_string()))?;
    let doc = ClueDoc::new(InstanceInfo::of(&g, &label), &report, &sample, seed, total.elapsed_secs());
    emit(&doc, a.out.as_deref())?;
    let params = serde_json::json!({
        "instance": a.instance, "k": a.k, "t": a.t, "solver": config, "run_budget": req.run_budget,
        "workers": a.solver.workers, "is_cap": a.solver.is_cap, "alpha_const": a.solver.alpha_const,
    });
    Ok(Outcome { out: a.out.clone(), params, seeds: sample.seeds })
}

fn cmd_survey(a: &SurveyArgs, seed: u64) -> Result<Outcome, CliError> {
    let config = solver_config(&a.solver, 1, seed)?;
    let mut count_limits = SearchLimits::new(a.count_budget);
    count_limits.value_cap = a.value_cap;
    count_limits.validate().map_err(|e| usage(e.to_string()))?;
    let opts = SurveyOptions {
        k: a.k,
        count_limits,
        is_cap: a.solver.is_cap,
        t: a.t as usize,
        solver: config,
        run_budget: a.solver.run_budget.unwrap_or(2 * a.t),
        workers: a.solver.workers,
        alpha: a.solver.alpha_const,
    };
    let mut rows = Vec::new();
    let mut seeds = Vec::new();
    if let Some(dir) = &a.dir {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("reading {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "col"))
            .collect();
        paths.sort();
        for path in paths {
            let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            match dimacs::read(&path) {
                Ok(g) => rows.push(survey_graph(&label, &g, &opts)),
                Err(e) => rows.push(crate::survey::SurveyRow {
                    instance: label,
                    error: Some(e.to_string()),
                    ..Default::default()
                }),
            }
        }
    } else if let (Some(n), Some(d), Some(count)) = (a.batch_n, a.batch_d, a.batch_count) {
        RandomGraphSpec::new(n, d, 0).validate().map_err(|e| usage(e.to_string()))?;
        for i in 0..count {
            let s = run_seed(seed, i);
            let g = generate_random(&RandomGraphSpec::new(n, d, s)).map_err(|e| usage(e.to_string()))?;
            rows.push(survey_graph(&format!("g{n}_{d}_{i:04}"), &g, &opts));
            seeds.push(s);
        }
    } else {
        return Err(usage("survey needs --dir or --batch-n/--batch-d/--batch-count"));
    }
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    write_text(&String::from_utf8(buf).map_err(anyhow::Error::from)?, a.out.as_deref())?;
    let params = serde_json::json!({
        "dir": a.dir, "batch": [a.batch_n, a.batch_count.map(|c| c as usize)], "batch_d": a.batch_d,
        "k": a.k, "t": a.t, "count_limits": count_limits, "solver": config, "is_cap": a.solver.is_cap,
        "alpha_const": a.solver.alpha_const,
    });
    Ok(Outcome { out: a.out.clone(), params, seeds })
}

fn replay(r: &ReplayArgs) -> Result<i32, CliError> {
    let manifest = RunManifest::read(&r.manifest).with_context(|| format!("reading {}", r.manifest.display()))?;
    let mut args = manifest.argv.clone();
    if !r.check {
        args.insert(0, manifest.tool.clone());
        return Ok(run(args));
    }
    let original = manifest.output.as_ref().ok_or_else(|| usage("manifest records no output file"))?;
    let scratch = tempdir_path(original);
    replace_out(&mut args, &scratch);
    args.insert(0, manifest.tool.clone());
    let code = run(args);
    if code != EXIT_OK {
        return Ok(code);
    }
    let same = same_results(original, &scratch)?;
    let _ = fs::remove_file(&scratch);
    let _ = fs::remove_file(sidecar_path(&scratch));
    println!("{}", if same { "identical" } else { "differs" });
    Ok(if same { EXIT_OK } else { 1 })
}

fn tempdir_path(original: &Path) -> PathBuf {
    let mut name = original.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(format!(".replay-{}", std::process::id()));
    original.with_file_name(name)
}

fn replace_out(args: &mut Vec<String>, path: &Path) {
    let path = path.display().to_string();
    if let Some(i) = args.iter().position(|a| a == "--out") {
        if i + 1 < args.len() {
            args[i + 1] = path;
            return;
        }
    }
    if let Some(i) = args.iter().position(|a| a.starts_with("--out=")) {
        args[i] = format!("--out={path}");
        return;
    }
    args.push("--out".into());
    args.push(path);
}

/// JSON outputs are compared without timing fields; anything else byte for byte.
fn same_results(a: &Path, b: &Path) -> Result<bool, CliError> {
    let read = |p: &Path| fs::read(p).with_context(|| format!("reading {}", p.display()));
    let (x, y) = (read(a)?, read(b)?);
    match (serde_json::from_slice::<serde_json::Value>(&x), serde_json::from_slice::<serde_json::Value>(&y)) {
        (Ok(mut x), Ok(mut y)) => {
            strip_timings(&mut x);
            strip_timings(&mut y);
            Ok(x == y)
        }
        _ => Ok(x == y),
    }
}
