//! Command-line front end.
//!
//! Settings resolve as: command-line flag, then `SUBSETHARMONY_SEED` (seed
//! only), then `--config` file, then built-in default. A config file holds
//! `key = value` lines using the long flag names without dashes; `#` starts
//! a comment.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::baselines::{ga_run, pso_run, GaConfig, PsoConfig};
use crate::classifiers::{Classifier, KnnConfig, MlpConfig};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::harmony::{hs_run, HsConfig, NeighborMode};
use crate::harness::{
    compare_optimizers, emit_report, subset_size_for, sweep_fractions, sweep_grid, sweep_pca,
    ConvergenceReport, OptimizerSpec, Report, ReportFormat, SelectionReport,
};
use crate::seed::derive_seed;
use crate::wrapper::{Averaging, ObjectiveConfig, Validation, WrapperObjective};
use crate::FeatureSubset;

pub const SEED_ENV: &str = "SUBSETHARMONY_SEED";

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "subsetharmony",
    version,
    about = "Wrapper feature selection with harmony search, GA, PSO and PCA baselines",
    args_override_self = true,
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct RunSpec {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Search for the best feature subset of a fixed size.
    Select(SelectArgs),
    /// Harmony search accuracy over a grid of memory sizes and iteration counts.
    Grid(GridArgs),
    /// Harmony search accuracy at several subset-size fractions.
    Fractions(FractionsArgs),
    /// Best subset size, accuracy and run time of several optimizers.
    Compare(CompareArgs),
    /// Accuracy of the classifier on leading principal components.
    Pca(PcaArgs),
    /// Cross-validated accuracy of one given feature subset.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifierKind {
    Mlp,
    Knn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ValidationKind {
    Kfold,
    Loo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AveragingKind {
    Pooled,
    FoldMean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatKind {
    Csv,
    Markdown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NeighborKind {
    IndexLine,
    MemoryColumn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OptimizerKind {
    Hs,
    Ga,
    Pso,
    Pca,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimingKind {
    /// Wall-clock seconds per optimizer.
    Wall,
    /// Write `NA` so the report is reproducible byte for byte.
    Off,
}

fn unit_interval(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn percent(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v <= 100.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 100]"))
    }
}

/// Input, output and seeding.
#[derive(Debug, Clone, Args)]
pub struct IoArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub data: PathBuf,
    /// Name of the class label column.
    #[arg(long, default_value = "class")]
    pub label: String,
    /// Flat `key = value` file of default flag values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Global seed; every component derives its own stream from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report destination. Printed to standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatKind::Csv)]
    pub format: FormatKind,
}

/// Classifier and validation scheme scoring each subset.
#[derive(Debug, Clone, Args)]
pub struct ObjectiveArgs {
    #[arg(long, value_enum, default_value_t = ClassifierKind::Mlp)]
    pub classifier: ClassifierKind,
    #[arg(long, value_enum, default_value_t = ValidationKind::Kfold)]
    pub validation: ValidationKind,
    /// Number of stratified folds.
    #[arg(long, default_value_t = 3)]
    pub folds: usize,
    /// Neighbours consulted by the kNN classifier.
    #[arg(long, default_value_t = 1)]
    pub knn_k: usize,
    /// Hidden neurons; defaults to ceil((features + classes) / 2).
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long, default_value_t = 0.3)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 0.4)]
    pub momentum: f64,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    /// Recorded with the run; does not change training.
    #[arg(long, default_value_t = 0.7)]
    pub adjustment_factor: f64,
    /// Z-score features with training-fold statistics.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub standardize: bool,
    #[arg(long, value_enum, default_value_t = AveragingKind::Pooled)]
    pub averaging: AveragingKind,
}

#[derive(Debug, Clone, Args)]
pub struct HsArgs {
    /// Harmony memory size.
    #[arg(long, default_value_t = 20)]
    pub hms: usize,
    /// Harmony memory considering rate.
    #[arg(long, default_value_t = 0.7, value_parser = unit_interval)]
    pub hmcr: f64,
    /// Pitch adjusting rate.
    #[arg(long, default_value_t = 0.3, value_parser = unit_interval)]
    pub par: f64,
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth: f64,
    /// Improvisations after the memory is filled.
    #[arg(long, default_value_t = 10)]
    pub iterations: usize,
    #[arg(long, value_enum, default_value_t = NeighborKind::IndexLine)]
    pub neighbor_mode: NeighborKind,
}

#[derive(Debug, Clone, Args)]
pub struct GaArgs {
    #[arg(long, default_value_t = 20)]
    pub ga_population: usize,
    #[arg(long, default_value_t = 100)]
    pub ga_generations: usize,
    #[arg(long, default_value_t = 1.0, value_parser = unit_interval)]
    pub ga_crossover: f64,
    #[arg(long, default_value_t = 0.1, value_parser = unit_interval)]
    pub ga_mutation: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PsoArgs {
    #[arg(long, default_value_t = 20)]
    pub pso_particles: usize,
    #[arg(long, default_value_t = 100)]
    pub pso_iterations: usize,
    #[arg(long, default_value_t = 2.0)]
    pub pso_c1: f64,
    #[arg(long, default_value_t = 2.0)]
    pub pso_c2: f64,
    #[arg(long, default_value_t = 0.9)]
    pub pso_inertia: f64,
    #[arg(long, default_value_t = 4.0)]
    pub pso_vmax: f64,
}

/// Subset size, given directly or as a percentage of the features.
#[derive(Debug, Clone, Args)]
pub struct SizeArgs {
    /// Number of features to select; takes precedence over `--fraction`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Percentage of features, rounded down (minimum 1).
    #[arg(long, default_value_t = 75.0, value_parser = percent)]
    pub fraction: f64,
}

impl SizeArgs {
    fn resolve(&self, n_features: usize) -> usize {
        self.k
            .unwrap_or_else(|| subset_size_for(self.fraction, n_features))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    #[arg(long, value_enum, default_value_t = OptimizerKind::Hs)]
    pub optimizer: OptimizerKind,
    #[command(flatten)]
    pub size: SizeArgs,
    #[command(flatten)]
    pub hs: HsArgs,
    #[command(flatten)]
    pub ga: GaArgs,
    #[command(flatten)]
    pub pso: PsoArgs,
    /// Also write best/worst fitness per step to this file.
    #[arg(long)]
    pub history: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    #[command(flatten)]
    pub size: SizeArgs,
    #[command(flatten)]
    pub hs: HsArgs,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
    pub hms_values: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
    pub iteration_values: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct FractionsArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    #[command(flatten)]
    pub hs: HsArgs,
    #[arg(long, value_delimiter = ',', default_value = "15,30,45,60,75,90", value_parser = percent)]
    pub fractions: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "hs,ga,pso")]
    pub optimizers: Vec<OptimizerKind>,
    #[command(flatten)]
    pub size: SizeArgs,
    #[command(flatten)]
    pub hs: HsArgs,
    #[command(flatten)]
    pub ga: GaArgs,
    #[command(flatten)]
    pub pso: PsoArgs,
    /// Component counts tried by the PCA baseline; defaults to the subset
    /// size, capped at what the training folds support.
    #[arg(long, value_delimiter = ',')]
    pub components: Vec<usize>,
    #[arg(long, value_enum, default_value_t = TimingKind::Wall)]
    pub timing: TimingKind,
}

#[derive(Debug, Clone, Args)]
pub struct PcaArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    /// Component counts to score; defaults to every feasible count.
    #[arg(long, value_delimiter = ',')]
    pub components: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub io: IoArgs,
    #[command(flatten)]
    pub objective: ObjectiveArgs,
    /// Zero-based feature indices.
    #[arg(long, value_delimiter = ',', required = true)]
    pub features: Vec<usize>,
}

/// Why parsing stopped.
#[derive(Debug)]
pub enum ParseOutcome {
    /// Help or version text was requested.
    Info(String),
    Usage(String),
}

/// Parses `argv` (program name first) after merging the config file and
/// the seed environment variable.
pub fn parse_args<I, S>(argv: I) -> std::result::Result<RunSpec, ParseOutcome>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    parse_args_with_env(argv, std::env::var(SEED_ENV).ok())
}

/// [`parse_args`] with an explicit value for the seed variable.
pub fn parse_args_with_env<I, S>(
    argv: I,
    env_seed: Option<String>,
) -> std::result::Result<RunSpec, ParseOutcome>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let merged = merge_sources(&argv, env_seed).map_err(ParseOutcome::Usage)?;
    let mut cmd = RunSpec::command();
    let matches = cmd
        .clone()
        .try_get_matches_from(merged)
        .map_err(|e| match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                ParseOutcome::Info(e.render().to_string())
            }
            _ => ParseOutcome::Usage(e.render().to_string()),
        })?;
    RunSpec::from_arg_matches(&matches)
        .map_err(|e| ParseOutcome::Usage(e.format(&mut cmd).render().to_string()))
}

fn flag_value(args: &[String], name: &str) -> Option<String> {
    let long = format!("--{name}");
    let eq = format!("{long}=");
    args.iter().enumerate().find_map(|(i, a)| {
        if a == &long {
            args.get(i + 1).cloned()
        } else {
            a.strip_prefix(&eq).map(str::to_owned)
        }
    })
}

fn has_flag(args: &[String], name: &str) -> bool {
    let long = format!("--{name}");
    args.iter()
        .any(|a| a == &long || a.starts_with(&format!("{long}=")))
}

/// Inserts config-file values right after the subcommand and the seed
/// variable after those, so explicit flags (which come later) win.
fn merge_sources(
    argv: &[OsString],
    env_seed: Option<String>,
) -> std::result::Result<Vec<OsString>, String> {
    let args: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let cmd = RunSpec::command();
    let Some(sub_pos) = args
        .iter()
        .skip(1)
        .position(|a| cmd.find_subcommand(a).is_some())
        .map(|p| p + 1)
    else {
        return Ok(argv.to_vec());
    };
    let sub = cmd
        .find_subcommand(&args[sub_pos])
        .expect("subcommand just found");
    let user = &args[sub_pos + 1..];
    let accepted: Vec<String> = sub
        .get_arguments()
        .filter_map(|a| a.get_long().map(str::to_owned))
        .collect();

    let mut injected = Vec::new();
    if let Some(path) = flag_value(user, "config") {
        for (key, value) in read_config(Path::new(&path))? {
            if key == "config" {
                continue;
            }
            if accepted.contains(&key) {
                injected.push(format!("--{key}"));
                injected.push(value);
            } else if !known_anywhere(&cmd, &key) {
                return Err(format!("{path}: unknown key `{key}`"));
            }
        }
    }
    if let Some(seed) = env_seed.filter(|_| !has_flag(user, "seed")) {
        injected.push("--seed".into());
        injected.push(seed);
    }
    let mut out: Vec<OsString> = argv[..=sub_pos].to_vec();
    out.extend(injected.into_iter().map(OsString::from));
    out.extend(argv[sub_pos + 1..].iter().cloned());
    Ok(out)
}

fn known_anywhere(cmd: &clap::Command, key: &str) -> bool {
    cmd.get_subcommands()
        .flat_map(|s| s.get_arguments())
        .any(|a| a.get_long() == Some(key))
}

/// Reads `key = value` pairs, skipping blank lines and `#` comments.
pub fn read_config(path: &Path) -> std::result::Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected `key = value`", path.display(), i + 1))?;
        pairs.push((
            k.trim().trim_start_matches("--").to_owned(),
            v.trim().to_owned(),
        ));
    }
    Ok(pairs)
}

impl ObjectiveArgs {
    fn config(&self, seed: u64) -> ObjectiveConfig {
        let classifier = match self.classifier {
            ClassifierKind::Mlp => Classifier::Mlp(MlpConfig {
                hidden_neurons: self.hidden,
                learning_rate: self.learning_rate,
                momentum: self.momentum,
                epochs: self.epochs,
                adjustment_factor: self.adjustment_factor,
                seed: derive_seed(seed, "mlp", &[]),
            }),
            ClassifierKind::Knn => Classifier::Knn(KnnConfig {
                k_neighbors: self.knn_k,
            }),
        };
        ObjectiveConfig {
            classifier,
            validation: match self.validation {
                ValidationKind::Kfold => Validation::StratifiedKFold { folds: self.folds },
                ValidationKind::Loo => Validation::LeaveOneOut,
            },
            fold_seed: derive_seed(seed, "folds", &[]),
            standardize: self.standardize,
            averaging: match self.averaging {
                AveragingKind::Pooled => Averaging::Pooled,
                AveragingKind::FoldMean => Averaging::FoldMean,
            },
        }
    }
}

impl HsArgs {
    fn config(&self, n_features: usize, k: usize, seed: u64) -> HsConfig {
        HsConfig {
            hms: self.hms,
            hmcr: self.hmcr,
            par: self.par,
            bandwidth: self.bandwidth,
            max_iterations: self.iterations,
            subset_size: k,
            n_features,
            seed: derive_seed(seed, "hs", &[]),
            neighbor_mode: match self.neighbor_mode {
                NeighborKind::IndexLine => NeighborMode::IndexLine,
                NeighborKind::MemoryColumn => NeighborMode::MemoryColumn,
            },
        }
    }
}

impl GaArgs {
    fn config(&self, n_features: usize, k: usize, seed: u64) -> GaConfig {
        GaConfig {
            population: self.ga_population,
            generations: self.ga_generations,
            crossover_rate: self.ga_crossover,
            mutation_rate: self.ga_mutation,
            subset_size: k,
            n_features,
            seed: derive_seed(seed, "ga", &[]),
        }
    }
}

impl PsoArgs {
    fn config(&self, n_features: usize, k: usize, seed: u64) -> PsoConfig {
        PsoConfig {
            particles: self.pso_particles,
            iterations: self.pso_iterations,
            c1: self.pso_c1,
            c2: self.pso_c2,
            inertia: self.pso_inertia,
            velocity_clamp: self.pso_vmax,
            subset_size: k,
            n_features,
            seed: derive_seed(seed, "pso", &[]),
        }
    }
}

fn format_of(f: FormatKind) -> ReportFormat {
    match f {
        FormatKind::Csv => ReportFormat::Csv,
        FormatKind::Markdown => ReportFormat::Markdown,
    }
}

fn write_report(report: &impl Report, io: &IoArgs, stdout: &mut dyn Write) -> Result<()> {
    match &io.out {
        Some(path) => emit_report(report, format_of(io.format), path),
        None => Ok(stdout.write_all(report.render(format_of(io.format)).as_bytes())?),
    }
}

fn describe_subset(data: &Dataset<f64>, subset: &[usize]) -> String {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let names: Vec<&str> = sorted
        .iter()
        .map(|&i| data.feature_names()[i].as_str())
        .collect();
    let indices: Vec<String> = sorted.iter().map(ToString::to_string).collect();
    format!("{{{}}} ({})", indices.join(", "), names.join(", "))
}

fn selection(
    method: &str,
    subset: &FeatureSubset,
    objective: &WrapperObjective<'_, f64>,
    evaluations: usize,
) -> Result<SelectionReport> {
    let eval = objective.evaluate(subset)?;
    let (lo, hi) = eval.confidence_interval(0.95)?;
    Ok(SelectionReport {
        method: method.to_owned(),
        features: subset.key(),
        accuracy_percent: eval.accuracy_percent,
        ci_low_percent: 100.0 * lo,
        ci_high_percent: 100.0 * hi,
        evaluations,
    })
}

fn print_selection(data: &Dataset<f64>, s: &SelectionReport, stdout: &mut dyn Write) -> Result<()> {
    writeln!(
        stdout,
        "best subset: {}",
        describe_subset(data, &s.features)
    )?;
    writeln!(
        stdout,
        "accuracy: {:.2}% (95% CI {:.2}-{:.2})",
        s.accuracy_percent, s.ci_low_percent, s.ci_high_percent
    )?;
    Ok(())
}

/// Runs the parsed command, writing reports and a summary to `stdout`.
pub fn execute(spec: &RunSpec, stdout: &mut dyn Write) -> Result<()> {
    match &spec.command {
        Command::Select(a) => {
            let data = Dataset::<f64>::load_csv(&a.io.data, &a.io.label)?;
            let objective = WrapperObjective::new(&data, a.objective.config(a.io.seed))?;
            let n = data.n_features();
            let k = a.size.resolve(n);
            let seed = a.io.seed;
            let (name, best, evaluations, history) =
                match a.optimizer {
                    OptimizerKind::Hs => {
                        let (best, h) = hs_run(&a.hs.config(n, k, seed), &objective)?;
                        let worst = h.iterations.iter().map(|r| r.worst).collect();
                        let conv = ConvergenceReport {
                            best: h.best_per_iteration(),
                            worst,
                        };
                        ("hs", best.subset, h.evaluations, conv)
                    }
                    OptimizerKind::Ga => {
                        let o = ga_run(&a.ga.config(n, k, seed), &objective)?;
                        let conv = ConvergenceReport {
                            best: o.best_per_step,
                            worst: o.worst_per_step,
                        };
                        ("ga", o.best, o.evaluations, conv)
                    }
                    OptimizerKind::Pso => {
                        let o = pso_run(&a.pso.config(n, k, seed), &objective)?;
                        let conv = ConvergenceReport {
                            best: o.best_per_step,
                            worst: o.worst_per_step,
                        };
                        ("pso", o.best, o.evaluations, conv)
                    }
                    OptimizerKind::Pca => return Err(Error::InvalidConfig(
                        "`select` searches feature subsets; use the `pca` command for projections"
                            .into(),
                    )),
                };
            let report = selection(name, &best, &objective, evaluations)?;
            if let Some(path) = &a.history {
                emit_report(&history, format_of(a.io.format), path)?;
            }
            write_report(&report, &a.io, stdout)?;
            print_selection(&data, &report, stdout)
        }
        Command::Grid(a) => {
            let data = Dataset::<f64>::load_csv(&a.io.data, &a.io.label)?;
            let objective = WrapperObjective::new(&data, a.objective.config(a.io.seed))?;
            let n = data.n_features();
            let base = a.hs.config(n, a.size.resolve(n), a.io.seed);
            let grid = sweep_grid(&a.hms_values, &a.iteration_values, &base, &objective)?;
            write_report(&grid, &a.io, stdout)?;
            let (r, c) = grid.best_cell();
            writeln!(
                stdout,
                "best cell: hms={} iterations={} accuracy: {:.2}%",
                grid.hms()[c],
                grid.iterations()[r],
                grid.best_accuracy()
            )?;
            Ok(())
        }
        Command::Fractions(a) => {
            let data = Dataset::<f64>::load_csv(&a.io.data, &a.io.label)?;
            let objective = WrapperObjective::new(&data, a.objective.config(a.io.seed))?;
            let n = data.n_features();
            let base = a.hs.config(n, 1, a.io.seed);
            let report = sweep_fractions(&a.fractions, &base, &objective)?;
            write_report(&report, &a.io, stdout)?;
            for row in &report.rows {
                writeln!(
                    stdout,
                    "{}% -> k={} accuracy: {:.2}%",
                    row.fraction_percent, row.subset_size, row.accuracy_percent
                )?;
            }
            Ok(())
        }
        Command::Compare(a) => {
            let data = Dataset::<f64>::load_csv(&a.io.data, &a.io.label)?;
            let objective = WrapperObjective::new(&data, a.objective.config(a.io.seed))?;
            let n = data.n_features();
            let k = a.size.resolve(n);
            let seed = a.io.seed;
            let specs: Vec<OptimizerSpec> = a
                .optimizers
                .iter()
                .map(|o| match o {
                    OptimizerKind::Hs => OptimizerSpec::Hs(a.hs.config(n, k, seed)),
                    OptimizerKind::Ga => OptimizerSpec::Ga(a.ga.config(n, k, seed)),
                    OptimizerKind::Pso => OptimizerSpec::Pso(a.pso.config(n, k, seed)),
                    OptimizerKind::Pca => OptimizerSpec::Pca {
                        components: if a.components.is_empty() {
                            vec![k.min(objective.max_pca_components()).max(1)]
                        } else {
                            a.components.clone()
                        },
                    },
                })
                .collect();
            let mut report = compare_optimizers(&specs, &objective)?;
            if a.timing == TimingKind::Off {
                report
                    .rows
                    .iter_mut()
                    .for_each(|r| r.execution_seconds = None);
            }
            write_report(&report, &a.io, stdout)?;
            for row in &report.rows {
                writeln!(
                    stdout,
                    "{}: k={} accuracy: {:.2}%",
                    row.optimizer, row.subset_size, row.accuracy_percent
                )?;
            }
            Ok(())
        }
        Command::Pca(a) => {
            let data = Dataset::<f64>::load_csv(&a.io.data, &a.io.label)?;
            let objective = WrapperObjective::new(&data, a.objective.config(a.io.seed))?;
            let components = if a.components.is_empty() {
                (1..=objective.max_pca_components()).collect()
            } else {
                a.components.clone()
            };
            let report = sweep_pca(&components, &objective)?;
            write_report(&report, &a.io, stdout)?;
            if let Some((r, acc)) = report.best() {
                writeln!(stdout, "best: {r} components accuracy: {acc:.2}%")?;
            }
            Ok(())
        }
        Command::Eval(a) => {
            let data = Dataset::<f64>::load_csv(&a.io.data, &a.io.label)?;
            let objective = WrapperObjective::new(&data, a.objective.config(a.io.seed))?;
            let subset = FeatureSubset::new(a.features.clone(), data.n_features())?;
            let report = selection("fixed", &subset, &objective, 1)?;
            write_report(&report, &a.io, stdout)?;
            print_selection(&data, &report, stdout)
        }
    }
}

/// Parses, runs and maps the outcome to an exit status.
pub fn run<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let spec = match parse_args(argv) {
        Ok(spec) => spec,
        Err(ParseOutcome::Info(text)) => {
            let _ = write!(stdout, "{text}");
            return EXIT_OK;
        }
        Err(ParseOutcome::Usage(text)) => {
            let _ = write!(stderr, "{text}");
            return EXIT_USAGE;
        }
    };
    match execute(&spec, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_data_error() {
                EXIT_DATA
            } else {
                EXIT_RUNTIME
            }
        }
    }
}
