//! Command-line frontend: `select`, `score`, `bench` and `verify`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bench::{run_bench, BenchConfig, DEFAULT_MAX_WORK};
use crate::classic::{build_similarity, FacilityLocation, Kernel, DEFAULT_TOP_K};
use crate::error::{Error, Result};
use crate::io::{load_design, load_labels, parse_indices};
use crate::linalg::DesignMatrix;
use crate::objectives::{
    density_normalize, unit_trace, vendi_score, Normalization, PhiSpec, SpectralObjective,
};
use crate::optimizer::{
    evaluate_sequence, greedy_max, heuristic_greedy_min, random_selection, stochastic_greedy,
    stratified_random, Constraint, GreedyOptions, SelectionResult,
};
use crate::set_function::SetObjective;
use crate::verify::run_verify;

/// Environment variable capping the worker threads used for gain queries.
pub const THREADS_ENV: &str = "SPECTRAL_APPRAISE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "spectral-appraise",
    version,
    about = "Appraise and select data subsets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select a subset and write the selection as JSON.
    Select(SelectArgs),
    /// Evaluate the objective on a given subset.
    Score(ScoreArgs),
    /// Time oracle against secular gains inside lazy greedy.
    Bench(BenchArgs),
    /// Run the built-in verification battery.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    Vendi,
    Dpp,
    Power,
    Plaw,
    Satexp,
    Ratio,
    Fl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Rbf,
    Cosine,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Max,
    Min,
    Stochastic,
    Random,
    Stratified,
}

#[derive(Debug, Clone, Args)]
pub struct ObjectiveArgs {
    /// Design matrix (DMX1 or CSV).
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "vendi")]
    pub objective: ObjectiveKind,
    /// Shift t for vendi (default 0) and dpp (default 1e-3).
    #[arg(long)]
    pub t: Option<f64>,
    /// Exponent of the power objective.
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// α of plaw and ratio.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// β of plaw.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// none, trace1 or emax; defaults to trace1 for vendi and none otherwise.
    #[arg(long)]
    pub normalize: Option<Normalization>,
    /// Similarity kernel for fl.
    #[arg(long, value_enum, default_value = "rbf")]
    pub kernel: KernelKind,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Neighbors kept per column for fl.
    #[arg(long, default_value_t = DEFAULT_TOP_K)]
    pub top_k: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    #[arg(long, value_enum, default_value = "max")]
    pub mode: Mode,
    #[arg(long, conflicts_with = "quotas_per_class")]
    pub k: Option<usize>,
    /// Comma-separated quota per class; needs --labels.
    #[arg(long, value_delimiter = ',')]
    pub quotas_per_class: Option<Vec<usize>>,
    /// Newline-delimited class id per sample.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Comma-separated starting indices for --mode min.
    #[arg(long, value_delimiter = ',')]
    pub prefix: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refresh every gain each step instead of using the lazy queue.
    #[arg(long)]
    pub eager: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    /// File of indices separated by whitespace or commas.
    #[arg(long)]
    pub subset: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "200")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 128)]
    pub m: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.05,0.1,0.25")]
    pub k_frac: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// Only vendi is benchmarked.
    #[arg(long, value_enum, default_value = "vendi")]
    pub objective: ObjectiveKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Refuse cells whose n·m³ work estimate exceeds this.
    #[arg(long, default_value_t = DEFAULT_MAX_WORK)]
    pub max_work: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ObjectiveArgs {
    pub fn phi(&self) -> Option<PhiSpec> {
        match self.objective {
            ObjectiveKind::Vendi => Some(PhiSpec::NegXlogx {
                t: self.t.unwrap_or(0.0),
            }),
            ObjectiveKind::Dpp => Some(PhiSpec::LogShift {
                t: self.t.unwrap_or(crate::objectives::DEFAULT_DPP_SHIFT),
            }),
            ObjectiveKind::Power => Some(PhiSpec::Power { eta: self.eta }),
            ObjectiveKind::Plaw => Some(PhiSpec::Powerlaw {
                alpha: self.alpha,
                beta: self.beta,
            }),
            ObjectiveKind::Satexp => Some(PhiSpec::Satexp),
            ObjectiveKind::Ratio => Some(PhiSpec::Ratio { alpha: self.alpha }),
            ObjectiveKind::Fl => None,
        }
    }

    pub fn normalization(&self) -> Normalization {
        self.normalize.unwrap_or(match self.objective {
            ObjectiveKind::Vendi => Normalization::Trace1,
            _ => Normalization::None,
        })
    }

    fn kernel(&self) -> Kernel {
        match self.kernel {
            KernelKind::Rbf => Kernel::Rbf { sigma: self.sigma },
            KernelKind::Cosine => Kernel::Cosine,
            KernelKind::Dot => Kernel::Dot,
        }
    }

    fn config(&self) -> Value {
        json!({
            "data": self.data.display().to_string(),
            "objective": self.objective,
            "phi": self.phi(),
            "normalize": self.normalization(),
            "kernel": if self.objective == ObjectiveKind::Fl { json!(self.kernel()) } else { Value::Null },
            "top_k": if self.objective == ObjectiveKind::Fl { json!(self.top_k) } else { Value::Null },
        })
    }

    pub fn build(&self, design: &DesignMatrix) -> Result<AnyObjective> {
        let design = density_normalize(design, self.normalization())?;
        Ok(match self.phi() {
            Some(phi) => AnyObjective::Spectral(SpectralObjective::from_shared(
                Arc::new(design),
                phi,
                self.normalization(),
            )?),
            None => AnyObjective::Facility(FacilityLocation::new(build_similarity(
                &design,
                self.kernel(),
                self.top_k,
            )?)),
        })
    }
}

/// The objectives reachable from the command line.
#[derive(Debug, Clone)]
pub enum AnyObjective {
    Spectral(SpectralObjective),
    Facility(FacilityLocation),
}

impl SetObjective for AnyObjective {
    fn ground_size(&self) -> usize {
        match self {
            AnyObjective::Spectral(o) => o.ground_size(),
            AnyObjective::Facility(o) => o.ground_size(),
        }
    }

    fn value(&self) -> f64 {
        match self {
            AnyObjective::Spectral(o) => o.value(),
            AnyObjective::Facility(o) => o.value(),
        }
    }

    fn gain(&self, element: usize) -> Result<f64> {
        match self {
            AnyObjective::Spectral(o) => o.gain(element),
            AnyObjective::Facility(o) => o.gain(element),
        }
    }

    fn commit(&mut self, element: usize) -> Result<()> {
        match self {
            AnyObjective::Spectral(o) => o.commit(element),
            AnyObjective::Facility(o) => o.commit(element),
        }
    }

    fn selected(&self) -> &[usize] {
        match self {
            AnyObjective::Spectral(o) => o.selected(),
            AnyObjective::Facility(o) => o.selected(),
        }
    }

    fn name(&self) -> String {
        match self {
            AnyObjective::Spectral(o) => o.name(),
            AnyObjective::Facility(o) => o.name(),
        }
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    match out {
        Some(p) => fs::write(p, text + "\n")?,
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

/// Run `select` and return the JSON document it writes.
pub fn select(args: &SelectArgs) -> Result<Value> {
    let design = load_design(&args.objective.data)?;
    let n = design.rows();
    let mut obj = args.objective.build(&design)?;
    let start = Instant::now();
    let constraint = match (&args.quotas_per_class, args.k) {
        (Some(quotas), _) => {
            let path = args.labels.as_ref().ok_or_else(|| {
                Error::InvalidArgument("--quotas-per-class needs --labels".into())
            })?;
            Some((load_labels(path, Some(n))?, quotas.clone()))
        }
        (None, Some(_)) => None,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "give --k or --quotas-per-class".into(),
            ))
        }
    };
    let as_constraint = || match &constraint {
        Some((labels, quotas)) => Constraint::partition(labels.clone(), quotas.clone()),
        None => Constraint::cardinality(args.k.unwrap_or(0)),
    };
    let greedy = GreedyOptions {
        lazy: !args.eager,
        parallel: true,
    };
    let result: SelectionResult = match args.mode {
        Mode::Max => greedy_max(&mut obj, &as_constraint(), greedy)?,
        Mode::Min => heuristic_greedy_min(
            &mut obj,
            &as_constraint(),
            args.prefix.as_deref().unwrap_or(&[]),
        )?,
        Mode::Stochastic => stochastic_greedy(&mut obj, &as_constraint(), args.epsilon, args.seed)?,
        Mode::Random => match &constraint {
            None => random_selection(&mut obj, args.k.unwrap_or(0), args.seed)?,
            Some(_) => {
                return Err(Error::InvalidArgument(
                    "--mode random takes --k; use stratified".into(),
                ))
            }
        },
        Mode::Stratified => match &constraint {
            Some((labels, quotas)) => {
                let order = stratified_random(labels, quotas, args.seed)?;
                evaluate_sequence(&mut obj, &order, "stratified_random", Some(args.seed))?
            }
            None => {
                return Err(Error::InvalidArgument(
                    "--mode stratified needs --quotas-per-class".into(),
                ))
            }
        },
    };
    let wall = start.elapsed().as_secs_f64();
    let mut config = args.objective.config();
    let extra = json!({
        "mode": args.mode,
        "k": args.k,
        "quotas_per_class": args.quotas_per_class,
        "labels": args.labels.as_ref().map(|p| p.display().to_string()),
        "epsilon": args.epsilon,
        "prefix": args.prefix,
        "seed": args.seed,
        "lazy": !args.eager,
    });
    if let (Value::Object(c), Value::Object(e)) = (&mut config, extra) {
        c.extend(e);
    }
    Ok(json!({
        "order": result.order,
        "gains": result.gains,
        "final_value": result.final_value,
        "objective": obj.name(),
        "config": config,
        "wall_seconds": wall,
        "evaluations": result.evaluations,
        "strategy": result.strategy,
    }))
}

fn commit_all(base: &AnyObjective, order: impl Iterator<Item = usize>) -> Result<AnyObjective> {
    let mut o = base.clone();
    for e in order {
        o.commit(e)?;
    }
    Ok(o)
}

/// Run `score` and return its JSON document.
pub fn score(args: &ScoreArgs) -> Result<Value> {
    let design = load_design(&args.objective.data)?;
    let subset = parse_indices(&fs::read_to_string(&args.subset)?)?;
    let n = design.rows();
    let mut seen = vec![false; n];
    for &i in &subset {
        if i >= n {
            return Err(Error::InvalidArgument(format!(
                "index {i} out of range for {n} samples"
            )));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidArgument(format!("index {i} appears twice")));
        }
    }
    let mut sorted = subset.clone();
    sorted.sort_unstable();
    let base = args.objective.build(&design)?;
    let forward = commit_all(&base, sorted.iter().copied())?;
    let backward = commit_all(&base, sorted.iter().rev().copied())?;
    let (v, w) = (forward.value(), backward.value());
    if (v - w).abs() > 1e-8 * v.abs().max(1.0) {
        return Err(Error::NumericalFailure {
            stage: "score".into(),
            message: format!("value depends on commit order: {v} vs {w}"),
        });
    }
    let summary = match &forward {
        AnyObjective::Spectral(o) => {
            let eig = o.state().eigvals();
            json!({
                "rank": eig.len(),
                "lambda_min": eig.first(),
                "lambda_max": eig.last(),
                "trace": eig.iter().sum::<f64>(),
                "vendi_q1": if eig.is_empty() { json!(null) } else { json!(vendi_score(&unit_trace(eig), 1.0)?) },
            })
        }
        AnyObjective::Facility(_) => Value::Null,
    };
    Ok(json!({
        "value": v,
        "size": subset.len(),
        "objective": forward.name(),
        "config": args.objective.config(),
        "per_eigenvalue_summary": summary,
    }))
}

/// Status code of one CLI invocation.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Select(a) => {
            emit(&select(&a)?, a.out.as_deref())?;
            Ok(0)
        }
        Command::Score(a) => {
            emit(&score(&a)?, a.out.as_deref())?;
            Ok(0)
        }
        Command::Bench(a) => {
            if a.objective != ObjectiveKind::Vendi {
                return Err(Error::InvalidArgument(
                    "bench supports --objective vendi only".into(),
                ));
            }
            let report = run_bench(&BenchConfig {
                ns: a.n.clone(),
                m: a.m,
                k_fracs: a.k_frac.clone(),
                repeats: a.repeats,
                seed: a.seed,
                phi: PhiSpec::vendi(),
                max_work: a.max_work,
            })?;
            print!("{}", report.table());
            let doc = serde_json::to_value(&report).map_err(|e| Error::Format(e.to_string()))?;
            emit(&doc, a.out.as_deref())?;
            if !report.all_identical() {
                eprintln!("error: oracle and secular selections differ");
                return Ok(5);
            }
            Ok(0)
        }
        Command::Verify(a) => {
            let report = run_verify(a.seed)?;
            for it in &report.items {
                println!(
                    "{} {:<34} {}",
                    if it.passed { "PASS" } else { "FAIL" },
                    it.name,
                    it.detail
                );
            }
            if let Some(p) = &a.out {
                let doc =
                    serde_json::to_value(&report).map_err(|e| Error::Format(e.to_string()))?;
                emit(&doc, Some(p))?;
            }
            if report.all_passed() {
                Ok(0)
            } else {
                eprintln!("failed: {}", report.failed().join(", "));
                Ok(1)
            }
        }
    }
}

/// Caps the global rayon pool from the environment, if set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer"))
        })?;
        if n == 0 {
            return Err(Error::InvalidArgument(format!(
                "{THREADS_ENV} must be a positive integer"
            )));
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}
