//! `fbeta`: evaluate mixture CDFs, verify them against Monte-Carlo
//! sampling, emit knee-point surfaces, simulate scenario datasets, train
//! the dense classifier, and run the benchmark sweep.
//!
//! Output is CSV on stdout unless `--out` is given. Exit codes:
//! 0 success, 1 domain or I/O error, 2 usage error.

mod data;
mod models;

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use fbeta_core::dist::{cdf_gaie, cdf_uiu, CdfQuery, GaussInvExpMixture, UniformMixture};
use fbeta_core::fbeta::PrecisionRecall;
use fbeta_core::knee::{beta_opt_surface, KneeConfig, PenaltyModel};
use fbeta_core::net::init_net;
use fbeta_core::oracle::{sample_gaie, sample_uiu};
use fbeta_core::sim::{simulate_pv, simulate_ust, LabeledDataset, SimConfig};
use fbeta_core::train::{best_f1, train, EpochMetrics};

use crate::models::{ModelId, ScenarioId};

const DEFAULT_EPOCHS: usize = 30;
const DEFAULT_BATCH: usize = 128;
const DEFAULT_LR: f64 = 0.5;
const DEFAULT_SIZE: usize = 1200;
const DEFAULT_IMBALANCE: f64 = 0.25;

#[derive(Parser)]
#[command(name = "fbeta", version, about = "F-beta decomposition toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mixture CDF at a point or over a (p, r) grid
    Cdf(CdfArgs),
    /// Compare closed-form CDFs with seeded Monte-Carlo estimates
    Verify(VerifyArgs),
    /// Emit a beta_opt surface over the (p, r) unit square
    Surface(SurfaceArgs),
    /// Generate a labeled scenario dataset
    Simulate(SimulateArgs),
    /// Train the dense classifier and emit per-epoch metrics
    Train(TrainArgs),
    /// Run the scenario x model x seed benchmark sweep
    Bench(BenchArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum MixtureArg {
    /// Uniform numerator over inverse-uniform denominator
    Uiu,
    /// Gaussian numerator over inverse-exponential denominator
    Gaie,
}

#[derive(Args)]
struct CdfArgs {
    /// Mixture family
    #[arg(long, value_enum)]
    model: MixtureArg,
    /// beta* of the uniform mixture (uiu)
    #[arg(long, required_if_eq("model", "uiu"))]
    beta_star: Option<f64>,
    /// Rate of the inverse-exponential denominator (gaie)
    #[arg(long, required_if_eq("model", "gaie"))]
    lambda: Option<f64>,
    /// Variance of the Gaussian numerator (gaie)
    #[arg(long, required_if_eq("model", "gaie"))]
    sigma2: Option<f64>,
    /// Precision of a single evaluation point (with --r)
    #[arg(long, requires = "r", conflicts_with = "grid")]
    p: Option<f64>,
    /// Recall of a single evaluation point (with --p)
    #[arg(long, requires = "p", conflicts_with = "grid")]
    r: Option<f64>,
    /// Evaluate on an n x n grid instead: p, r = k/n for k = 1..=n
    #[arg(long)]
    grid: Option<usize>,
    /// Threshold values, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    z: Vec<f64>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Monte-Carlo draws per grid point (minimum 10000)
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Sampling seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Shift closed-form values by +0.02 to confirm the detector fires
    #[arg(long, hide = true)]
    corrupt: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum PenaltyArg {
    /// Uniform mixture penalty; its beta* is tied to --beta-max
    M1,
    /// Gaussian over inverse-exponential penalty
    M2,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Penalty model family
    #[arg(long, value_enum)]
    model: PenaltyArg,
    /// Upper end of the beta sweep; for m1 also the mixture beta*
    #[arg(long, required_if_eq("model", "m1"))]
    beta_max: Option<f64>,
    /// Rate of the inverse-exponential denominator (m2)
    #[arg(long, required_if_eq("model", "m2"))]
    lambda: Option<f64>,
    /// Variance of the Gaussian numerator (m2)
    #[arg(long, required_if_eq("model", "m2"))]
    sigma2: Option<f64>,
    /// Grid resolution per axis
    #[arg(long, default_value_t = 50)]
    resolution: usize,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum GeneratorArg {
    /// Cylindrical tanks (label 0) vs elliptical tanks (label 1)
    Cve,
    /// The same tanks with hemispherical and half-ellipsoidal end caps
    Chveh,
    /// Pressure-vessel cost with thickness variations
    Pv,
}

#[derive(Args)]
struct SimulateArgs {
    /// Generator family
    #[arg(long, value_enum)]
    scenario: GeneratorArg,
    /// Ellipse semi-axis along the fill direction (cve, chveh)
    #[arg(long, required_if_eq_any([("scenario", "cve"), ("scenario", "chveh")]))]
    a: Option<f64>,
    /// Ellipse semi-axis across the fill direction (cve, chveh)
    #[arg(long, required_if_eq_any([("scenario", "cve"), ("scenario", "chveh")]))]
    b: Option<f64>,
    /// Shell-thickness variation scale (pv)
    #[arg(long, required_if_eq("scenario", "pv"))]
    ts: Option<f64>,
    /// Head-thickness variation scale (pv)
    #[arg(long, required_if_eq("scenario", "pv"))]
    th: Option<f64>,
    /// Total rows
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    size: usize,
    /// Fraction of label-1 rows
    #[arg(long, default_value_t = DEFAULT_IMBALANCE)]
    imbalance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Named scenario preset
    #[arg(long, value_enum, conflicts_with = "data")]
    scenario: Option<ScenarioId>,
    /// Train from a dataset CSV produced by `simulate`
    #[arg(long)]
    data: Option<PathBuf>,
    /// baseline (alias mb), m1_<beta*>, or m2_<lambda>_<sigma2>
    #[arg(long, default_value = "baseline")]
    loss: ModelId,
    #[arg(long, default_value_t = DEFAULT_EPOCHS)]
    epochs: usize,
    #[arg(long, default_value_t = DEFAULT_BATCH)]
    batch_size: usize,
    /// Gradient-descent learning rate
    #[arg(long, default_value_t = DEFAULT_LR)]
    lr: f64,
    /// Seeds the dataset, the weight init, and the batch shuffle
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Rows to simulate when --scenario is used
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    size: usize,
    /// Label-1 fraction when --scenario is used
    #[arg(long, default_value_t = DEFAULT_IMBALANCE)]
    imbalance: f64,
    /// Write the metrics CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Scenarios to run, comma separated (default: all six)
    #[arg(long, value_enum, value_delimiter = ',')]
    scenarios: Vec<ScenarioId>,
    /// Model ids, comma separated (default: the ten-model reference set)
    #[arg(long, value_delimiter = ',')]
    models: Vec<ModelId>,
    /// Runs per cell, using seeds 1..=seeds
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, default_value_t = DEFAULT_EPOCHS)]
    epochs: usize,
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    size: usize,
    #[arg(long, default_value_t = DEFAULT_IMBALANCE)]
    imbalance: f64,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

pub(crate) enum Failure {
    Usage(String),
    Domain(String),
}

impl From<fbeta_core::Error> for Failure {
    fn from(e: fbeta_core::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Domain(format!("csv: {e}"))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Cdf(args) => cmd_cdf(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Surface(args) => cmd_surface(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Train(args) => cmd_train(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn output(out: &Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

enum Mixture {
    Uiu(UniformMixture),
    Gaie(GaussInvExpMixture),
}

impl Mixture {
    fn label(&self) -> String {
        match self {
            Mixture::Uiu(m) => format!("uiu_{}", m.beta_star()),
            Mixture::Gaie(m) => format!("gaie_{}_{}", m.lambda(), m.sigma2()),
        }
    }

    fn cdf(&self, query: &CdfQuery) -> fbeta_core::Result<f64> {
        match self {
            Mixture::Uiu(m) => cdf_uiu(query, m),
            Mixture::Gaie(m) => cdf_gaie(query, m),
        }
    }
}

fn mixture_from(args: &CdfArgs) -> Result<Mixture, Failure> {
    match args.model {
        MixtureArg::Uiu => {
            let beta_star = args
                .beta_star
                .ok_or_else(|| Failure::Usage("--model uiu needs --beta-star".into()))?;
            Ok(Mixture::Uiu(UniformMixture::new(beta_star)?))
        }
        MixtureArg::Gaie => {
            let (lambda, sigma2) = match (args.lambda, args.sigma2) {
                (Some(l), Some(s)) => (l, s),
                _ => {
                    return Err(Failure::Usage("--model gaie needs --lambda and --sigma2".into()))
                }
            };
            Ok(Mixture::Gaie(GaussInvExpMixture::new(lambda, sigma2)?))
        }
    }
}

fn unit_grid(n: usize) -> Vec<(f64, f64)> {
    let mut points = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            points.push((i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    points
}

fn cmd_cdf(args: CdfArgs) -> Result<(), Failure> {
    let mixture = mixture_from(&args)?;
    let points = match (args.grid, args.p, args.r) {
        (Some(n), _, _) => {
            if n < 2 {
                return Err(Failure::Usage("--grid must be at least 2".into()));
            }
            unit_grid(n)
        }
        (None, Some(p), Some(r)) => vec![(p, r)],
        _ => return Err(Failure::Usage("provide --p with --r, or --grid".into())),
    };
    // Evaluate everything before emitting, so a bad point cannot leave a
    // truncated file behind.
    let mut rows = Vec::with_capacity(args.z.len() * points.len());
    for &z in &args.z {
        for &(p, r) in &points {
            let pr = PrecisionRecall::new(p, r)?;
            rows.push((p, r, z, mixture.cdf(&CdfQuery::new(z, pr))?));
        }
    }
    let label = mixture.label();
    let mut writer = output(&args.out)?;
    writer.write_record(["model", "p", "r", "z", "prob"])?;
    for (p, r, z, prob) in rows {
        writer.write_record(&[
            label.clone(),
            p.to_string(),
            r.to_string(),
            z.to_string(),
            prob.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[derive(Copy, Clone)]
enum VerifyFamily {
    Uiu { beta_star: f64 },
    Gaie { lambda: f64, sigma2: f64 },
}

/// Both mixture families over the built-in reference grid: a 9x9 tenths
/// grid in (p, r) crossed with z in {0.4, 0.8}, at beta* in {8, 16} and
/// (lambda, sigma2) in {0.5, 2}^2. 972 points.
fn verify_grid() -> Vec<(VerifyFamily, f64, f64, f64)> {
    let tenths: Vec<f64> = (1..=9).map(|k| k as f64 * 0.1).collect();
    let mut cells = Vec::new();
    for beta_star in [8.0, 16.0] {
        for z in [0.4, 0.8] {
            for &p in &tenths {
                for &r in &tenths {
                    cells.push((VerifyFamily::Uiu { beta_star }, z, p, r));
                }
            }
        }
    }
    for lambda in [0.5, 2.0] {
        for sigma2 in [0.5, 2.0] {
            for z in [0.4, 0.8] {
                for &p in &tenths {
                    for &r in &tenths {
                        cells.push((VerifyFamily::Gaie { lambda, sigma2 }, z, p, r));
                    }
                }
            }
        }
    }
    cells
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.samples < 10_000 {
        return Err(Failure::Usage(format!(
            "--samples {} is below the 10000 floor for a trustworthy comparison",
            args.samples
        )));
    }
    let shift = if args.corrupt { 0.02 } else { 0.0 };
    let rows: fbeta_core::Result<Vec<_>> = verify_grid()
        .par_iter()
        .map(|&(family, z, p, r)| {
            let pr = PrecisionRecall::new(p, r)?;
            let query = CdfQuery::new(z, pr);
            let (name, closed, est) = match family {
                VerifyFamily::Uiu { beta_star } => {
                    let m = UniformMixture::new(beta_star)?;
                    (
                        format!("uiu_{beta_star}"),
                        cdf_uiu(&query, &m)?,
                        sample_uiu(&pr, &m, z, args.samples, args.seed)?,
                    )
                }
                VerifyFamily::Gaie { lambda, sigma2 } => {
                    let m = GaussInvExpMixture::new(lambda, sigma2)?;
                    (
                        format!("gaie_{lambda}_{sigma2}"),
                        cdf_gaie(&query, &m)?,
                        sample_gaie(&pr, &m, z, args.samples, args.seed)?,
                    )
                }
            };
            Ok((name, z, p, r, closed + shift, est))
        })
        .collect();
    let rows = rows?;
    let mut stdout = io::BufWriter::new(io::stdout().lock());
    let mut max_delta = 0.0f64;
    let mut failures = 0usize;
    for (name, z, p, r, closed, est) in &rows {
        let delta = (closed - est.probability).abs();
        // The 0.005 floor keeps tiny standard errors from flagging noise;
        // at low sample counts 3 standard errors take over.
        let tolerance = (3.0 * est.standard_error).max(0.005);
        let ok = delta <= tolerance;
        if !ok {
            failures += 1;
        }
        max_delta = max_delta.max(delta);
        writeln!(
            stdout,
            "{name} p={p:.1} r={r:.1} z={z:.1} closed={closed:.6} mc={:.6} delta={delta:.6} {}",
            est.probability,
            if ok { "PASS" } else { "FAIL" }
        )?;
    }
    writeln!(stdout, "max |delta| = {max_delta:.6} over {} points", rows.len())?;
    stdout.flush()?;
    if failures > 0 {
        return Err(Failure::Domain(format!(
            "{failures} of {} points outside tolerance",
            rows.len()
        )));
    }
    Ok(())
}

fn cmd_surface(args: SurfaceArgs) -> Result<(), Failure> {
    if args.resolution < 2 {
        return Err(Failure::Usage("--resolution must be at least 2".into()));
    }
    let (model, beta_max) = match args.model {
        PenaltyArg::M1 => {
            let k = args
                .beta_max
                .ok_or_else(|| Failure::Usage("--model m1 needs --beta-max".into()))?;
            (PenaltyModel::Uniform(UniformMixture::new(k)?), k)
        }
        PenaltyArg::M2 => {
            let (lambda, sigma2) = match (args.lambda, args.sigma2) {
                (Some(l), Some(s)) => (l, s),
                _ => return Err(Failure::Usage("--model m2 needs --lambda and --sigma2".into())),
            };
            (
                PenaltyModel::GaussInvExp(GaussInvExpMixture::new(lambda, sigma2)?),
                args.beta_max.unwrap_or(16.0),
            )
        }
    };
    let config = KneeConfig { grid_size: 300, beta_max, default_beta: 1.0 };
    let surface = beta_opt_surface(&model, &config, args.resolution);
    let mut writer = output(&args.out)?;
    writer.write_record(["p", "r", "beta_opt"])?;
    for (i, row) in surface.iter().enumerate() {
        let p = (i + 1) as f64 / args.resolution as f64;
        for (j, &beta_opt) in row.iter().enumerate() {
            let r = (j + 1) as f64 / args.resolution as f64;
            writer.write_record(&[p.to_string(), r.to_string(), beta_opt.to_string()])?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config = SimConfig::new(args.size, args.imbalance, args.seed)?;
    let dataset = match args.scenario {
        GeneratorArg::Cve | GeneratorArg::Chveh => {
            let (a, b) = match (args.a, args.b) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Failure::Usage("tank scenarios need --a and --b".into())),
            };
            simulate_ust(config, a, b, matches!(args.scenario, GeneratorArg::Chveh))?
        }
        GeneratorArg::Pv => {
            let (ts, th) = match (args.ts, args.th) {
                (Some(ts), Some(th)) => (ts, th),
                _ => return Err(Failure::Usage("--scenario pv needs --ts and --th".into())),
            };
            simulate_pv(config, ts, th)?
        }
    };
    let mut writer = output(&args.out)?;
    data::write_dataset(&mut writer, &dataset)?;
    Ok(())
}

/// Split, standardize, and fit: the shared training path of `train` and
/// `bench`. One seed drives the dataset, the weight init, and the
/// shuffle, so a cell is reproducible from its CSV row alone.
fn fit(
    dataset: &LabeledDataset,
    model: &ModelId,
    epochs: usize,
    batch_size: usize,
    lr: f64,
    seed: u64,
) -> fbeta_core::Result<Vec<EpochMetrics>> {
    if dataset.features.is_empty() {
        return Err(fbeta_core::Error::EmptyDataset);
    }
    let mut config = model.train_config(seed)?;
    config.epochs = epochs;
    config.batch_size = batch_size;
    config.learning_rate = lr;
    let (train_half, val_half) = dataset.split_alternating();
    let mut net = init_net(dataset.features[0].len(), seed);
    train(&mut net, &train_half, &val_half, &config)
}

fn cmd_train(args: TrainArgs) -> Result<(), Failure> {
    let dataset = match (&args.scenario, &args.data) {
        (Some(scenario), None) => scenario.dataset(args.size, args.imbalance, args.seed)?,
        (None, Some(path)) => data::read_dataset(path)?,
        _ => return Err(Failure::Usage("provide exactly one of --scenario or --data".into())),
    };
    let metrics = fit(&dataset, &args.loss, args.epochs, args.batch_size, args.lr, args.seed)?;
    let mut writer = output(&args.out)?;
    data::write_metrics(&mut writer, &metrics)?;
    eprintln!("best F1: {}", best_f1(&metrics));
    Ok(())
}

fn median_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let scenarios =
        if args.scenarios.is_empty() { ScenarioId::ALL.to_vec() } else { args.scenarios.clone() };
    let models =
        if args.models.is_empty() { ModelId::reference_set() } else { args.models.clone() };
    if args.seeds == 0 {
        return Err(Failure::Usage("--seeds must be at least 1".into()));
    }
    let mut cells = Vec::new();
    for (si, scenario) in scenarios.iter().enumerate() {
        for (mi, model) in models.iter().enumerate() {
            for seed in 1..=args.seeds {
                cells.push((si, mi, *scenario, model.clone(), seed));
            }
        }
    }
    let outcomes: fbeta_core::Result<Vec<_>> = cells
        .par_iter()
        .map(|(si, mi, scenario, model, seed)| {
            let dataset = scenario.dataset(args.size, args.imbalance, *seed)?;
            let metrics = fit(&dataset, model, args.epochs, DEFAULT_BATCH, DEFAULT_LR, *seed)?;
            Ok((*si, *mi, *seed, best_f1(&metrics)))
        })
        .collect();
    let mut outcomes = outcomes?;
    // Plan order regardless of which worker finished first.
    outcomes.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
    let mut writer = output(&args.out)?;
    writer.write_record(["scenario", "model", "seed", "best_f1"])?;
    for &(si, mi, seed, best) in &outcomes {
        writer.write_record(&[
            scenarios[si].name().to_string(),
            models[mi].to_string(),
            seed.to_string(),
            best.to_string(),
        ])?;
    }
    writer.flush()?;
    for (si, scenario) in scenarios.iter().enumerate() {
        let mut winner: Option<(&ModelId, f64)> = None;
        for (mi, model) in models.iter().enumerate() {
            let mut scores: Vec<f64> = outcomes
                .iter()
                .filter(|&&(s, m, _, _)| s == si && m == mi)
                .map(|&(_, _, _, best)| best)
                .collect();
            scores.sort_by(f64::total_cmp);
            let median = median_sorted(&scores);
            if winner.map_or(true, |(_, best)| median > best) {
                winner = Some((model, median));
            }
        }
        if let Some((model, median)) = winner {
            eprintln!("{}: winner {model} (median best F1 {median})", scenario.name());
        }
    }
    Ok(())
}
