//! Command implementations behind the `mvsc` binary.
//!
//! Every command returns the text it prints on success, so the commands can
//! be driven directly from tests. All output files are produced in full
//! before any of them is written, and each write goes through a temporary
//! file and a rename.

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mvsc_core::graph::{default_knn, gaussian_affinity, knn_sparsify, FeatureView, Sigma};
use mvsc_core::io;
use mvsc_core::metrics::{full_report, MetricsReport};
use mvsc_core::solver::{fuse, solve, solve_snn, SnnConfig, Solution, SolverConfig};
use mvsc_core::spectral::{spectral_cluster, ClusterLabels};
use mvsc_core::synth::{make_multiview, SynthSpec};
use mvsc_core::Tensor3;

pub use config::{RunConfig, Settings};

#[derive(Debug, Parser)]
#[command(name = "mvsc", version, about = "Multi-view spectral clustering with a tensor low-rank similarity model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic multi-view similarity tensor and its labels.
    Synth(SynthArgs),
    /// Build per-view Gaussian affinities from feature CSVs and stack them.
    BuildGraph(BuildGraphArgs),
    /// Recover the low-rank tensor and the fused affinity.
    Recover(RecoverArgs),
    /// Recover, fuse and cluster.
    Cluster(ClusterArgs),
    /// Score predicted labels against ground truth.
    Eval(EvalArgs),
    /// Cluster with the sum-of-nuclear-norms baseline.
    BaselineSnn(ClusterArgs),
    /// Compare the full model with its three ablations.
    Ablate(AblateArgs),
}

/// Options shared by the commands that run the solver.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Hyperparameter preset: coil20, yale, orl, yaleb or uci.
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub clusters: Option<usize>,
}

impl CommonArgs {
    /// Preset, then config file, then flags.
    pub fn settings(&self) -> Result<Settings> {
        let mut layered = match &self.config {
            Some(path) => RunConfig::read(path)?,
            None => RunConfig::default(),
        };
        if self.preset.is_some() {
            layered.preset.clone_from(&self.preset);
        }
        let flags = RunConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            clusters: self.clusters,
            seed: self.seed,
            ..RunConfig::default()
        };
        layered.overlay(flags).resolve()
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub clusters: usize,
    /// Total number of samples, split as evenly as possible.
    #[arg(long)]
    pub samples: usize,
    #[arg(long)]
    pub views: usize,
    #[arg(long, default_value_t = SynthSpec::DEFAULT_INTRA)]
    pub intra: f64,
    #[arg(long, default_value_t = 0.0)]
    pub leak: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.0)]
    pub corruption: f64,
    #[arg(long, default_value_t = 1.0)]
    pub corruption_max: f64,
    /// Comma-separated view indices to corrupt (default: all).
    #[arg(long, value_delimiter = ',')]
    pub corrupted_views: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output MVT file.
    #[arg(long)]
    pub out: PathBuf,
    /// Output ground-truth labels file.
    #[arg(long)]
    pub labels: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BuildGraphArgs {
    /// One CSV per view, one sample per line.
    #[arg(long = "features", required = true, num_args = 1..)]
    pub features: Vec<PathBuf>,
    /// Fixed kernel width; the median pairwise distance is used otherwise.
    #[arg(long, conflicts_with = "auto")]
    pub sigma: Option<f64>,
    /// Use the median pairwise distance as the kernel width (default).
    #[arg(long)]
    pub auto: bool,
    /// Keep only mutual-or k-nearest-neighbor edges; `auto` picks
    /// round(log2 n) + 1.
    #[arg(long)]
    pub knn: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct RecoverArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Recovered low-rank tensor (MVT).
    #[arg(long)]
    pub out_l: Option<PathBuf>,
    /// Recovered error tensor (MVT).
    #[arg(long)]
    pub out_e: Option<PathBuf>,
    /// Fused affinity (matrix CSV).
    #[arg(long)]
    pub out_s: Option<PathBuf>,
    /// Solver report, one key=value per line.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Residual history CSV.
    #[arg(long)]
    pub residuals: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Output labels file.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long)]
    pub residuals: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Metrics CSV (header plus one row).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AblateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Ground-truth labels used to score every variant.
    #[arg(long)]
    pub truth: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Metrics table CSV, one row per variant.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs `cli` on a thread pool of the requested size.
pub fn run(cli: Cli) -> Result<String> {
    let threads = match &cli.command {
        Command::Recover(a) => a.common.threads,
        Command::Cluster(a) | Command::BaselineSnn(a) => a.common.threads,
        Command::Ablate(a) => a.common.threads,
        _ => None,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if t == 0 {
            bail!("--threads must be positive");
        }
        pool = pool.num_threads(t);
    }
    let pool = pool.build().context("building the thread pool")?;
    pool.install(|| match cli.command {
        Command::Synth(a) => cmd_synth(&a),
        Command::BuildGraph(a) => cmd_build_graph(&a),
        Command::Recover(a) => cmd_recover(&a),
        Command::Cluster(a) => cmd_cluster(&a),
        Command::Eval(a) => cmd_eval(&a),
        Command::BaselineSnn(a) => cmd_baseline_snn(&a),
        Command::Ablate(a) => cmd_ablate(&a),
    })
}

fn read_tensor(path: &Path) -> Result<Tensor3> {
    io::read_mvt(path).with_context(|| format!("reading {}", path.display()))
}

fn read_labels(path: &Path) -> Result<ClusterLabels> {
    io::read_labels(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes every `(path, contents)` pair.
fn write_all(files: &[(&Path, String)]) -> Result<()> {
    for (path, text) in files {
        io::write_atomic(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs) -> Result<String> {
    if args.clusters == 0 || args.samples < args.clusters {
        bail!("need 1 <= clusters <= samples, got {} clusters for {} samples", args.clusters, args.samples);
    }
    let spec = SynthSpec {
        intra: args.intra,
        leak: args.leak,
        noise: args.noise,
        corruption: args.corruption,
        corruption_max: args.corruption_max,
        corrupted_views: args.corrupted_views.clone(),
        seed: args.seed,
        ..SynthSpec::balanced(args.clusters, args.samples, args.views)
    };
    let (w, truth) = make_multiview(&spec)?;
    write_all(&[(&args.out, io::format_mvt(&w)?), (&args.labels, io::format_labels(&truth))])?;
    Ok(format!("n={}\nviews={}\nclusters={}\n", spec.samples(), spec.views, args.clusters))
}

pub fn cmd_build_graph(args: &BuildGraphArgs) -> Result<String> {
    let sigma = match args.sigma {
        Some(s) => Sigma::Fixed(s),
        None => Sigma::Auto,
    };
    let mut slices = Vec::with_capacity(args.features.len());
    for (id, path) in args.features.iter().enumerate() {
        // one sample per line; the view stores one sample per column
        let x = io::read_matrix_csv(path).with_context(|| format!("reading {}", path.display()))?;
        let view = FeatureView::new(x.transpose(), id)?;
        let mut w = gaussian_affinity(&view, sigma)?;
        if let Some(k) = &args.knn {
            let k = match k.as_str() {
                "auto" => default_knn(view.samples()).min(view.samples() - 1),
                s => s.parse().with_context(|| format!("--knn expects an integer or `auto`, got {s:?}"))?,
            };
            w = knn_sparsify(&w, k)?;
        }
        slices.push(w);
    }
    let n = slices[0].nrows();
    if let Some(bad) = slices.iter().position(|s| s.nrows() != n) {
        bail!("view {bad} has {} samples, view 0 has {n}", slices[bad].nrows());
    }
    let t = Tensor3::stack_frontal(&slices)?;
    write_all(&[(&args.out, io::format_mvt(&t)?)])?;
    Ok(format!("n={n}\nviews={}\n", slices.len()))
}

/// Solves, fuses and clusters `w`.
pub fn recover_and_cluster(w: &Tensor3, settings: &Settings) -> Result<(ClusterLabels, Solution)> {
    let c = settings.clusters()?;
    let sol = solve(w, &settings.solver)?;
    let labels = spectral_cluster(&fuse(&sol.l)?, c, settings.kmeans_restarts, settings.solver.seed)?;
    Ok((labels, sol))
}

/// The sum-of-nuclear-norms baseline with the same IALM controls and `λ`.
pub fn snn_and_cluster(w: &Tensor3, settings: &Settings) -> Result<(ClusterLabels, Solution)> {
    let c = settings.clusters()?;
    let sol = solve_snn(w, &SnnConfig::from_solver(&settings.solver))?;
    let labels = spectral_cluster(&fuse(&sol.l)?, c, settings.kmeans_restarts, settings.solver.seed)?;
    Ok((labels, sol))
}

/// Spectral clustering of the fused input slices, with no recovery step.
pub fn raw_average_cluster(w: &Tensor3, settings: &Settings) -> Result<ClusterLabels> {
    let c = settings.clusters()?;
    Ok(spectral_cluster(&fuse(w)?, c, settings.kmeans_restarts, settings.solver.seed)?)
}

/// The full model followed by the α = 0, ω1 = 0 and ω2 = 0 variants.
pub fn ablation_configs(base: &SolverConfig) -> [(&'static str, SolverConfig); 4] {
    [
        ("full", *base),
        ("alpha=0", SolverConfig { alpha: 0.0, ..*base }),
        ("omega1=0", SolverConfig { omega1: 0.0, ..*base }),
        ("omega2=0", SolverConfig { omega1: 1.0, ..*base }),
    ]
}

pub fn cmd_recover(args: &RecoverArgs) -> Result<String> {
    let settings = args.common.settings()?;
    let w = read_tensor(&args.input)?;
    let sol = solve(&w, &settings.solver)?;
    let report = sol.report.to_string();
    let mut files = Vec::new();
    if let Some(p) = &args.out_l {
        files.push((p.as_path(), io::format_mvt(&sol.l)?));
    }
    if let Some(p) = &args.out_e {
        files.push((p.as_path(), io::format_mvt(&sol.e)?));
    }
    if let Some(p) = &args.out_s {
        files.push((p.as_path(), io::format_matrix_csv(&fuse(&sol.l)?)));
    }
    if let Some(p) = &args.report {
        files.push((p.as_path(), report.clone()));
    }
    if let Some(p) = &args.residuals {
        files.push((p.as_path(), io::format_residuals(&sol.residual_history)));
    }
    write_all(&files)?;
    Ok(report)
}

fn finish_clustering(args: &ClusterArgs, labels: &ClusterLabels, sol: &Solution) -> Result<String> {
    let report = sol.report.to_string();
    let mut files = vec![(args.out.as_path(), io::format_labels(labels))];
    if let Some(p) = &args.report {
        files.push((p.as_path(), report.clone()));
    }
    if let Some(p) = &args.residuals {
        files.push((p.as_path(), io::format_residuals(&sol.residual_history)));
    }
    write_all(&files)?;
    Ok(report)
}

pub fn cmd_cluster(args: &ClusterArgs) -> Result<String> {
    let settings = args.common.settings()?;
    let w = read_tensor(&args.input)?;
    let (labels, sol) = recover_and_cluster(&w, &settings)?;
    finish_clustering(args, &labels, &sol)
}

pub fn cmd_baseline_snn(args: &ClusterArgs) -> Result<String> {
    let settings = args.common.settings()?;
    let w = read_tensor(&args.input)?;
    let (labels, sol) = snn_and_cluster(&w, &settings)?;
    finish_clustering(args, &labels, &sol)
}

pub fn cmd_eval(args: &EvalArgs) -> Result<String> {
    let pred = read_labels(&args.pred)?;
    let truth = read_labels(&args.truth)?;
    let report = full_report(&pred, &truth)?;
    if let Some(p) = &args.out {
        write_all(&[(p.as_path(), format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.csv_row()))])?;
    }
    Ok(format!("{report}\n"))
}

pub fn cmd_ablate(args: &AblateArgs) -> Result<String> {
    let settings = args.common.settings()?;
    let w = read_tensor(&args.input)?;
    let truth = read_labels(&args.truth)?;
    if truth.len() != w.dims()[0] {
        bail!("{} truth labels for {} samples", truth.len(), w.dims()[0]);
    }
    let settings = Settings { clusters: Some(settings.clusters.unwrap_or(truth.clusters())), ..settings };
    let mut csv = format!("variant,{}\n", MetricsReport::CSV_HEADER);
    let mut table = format!("{:<10} {:>7} {:>7} {:>7} {:>7}\n", "variant", "ACC", "NMI", "ARI", "F1");
    for (name, solver) in ablation_configs(&settings.solver) {
        let (labels, _) = recover_and_cluster(&w, &Settings { solver, ..settings.clone() })?;
        let r = full_report(&labels, &truth)?;
        writeln!(csv, "{name},{}", r.csv_row())?;
        writeln!(table, "{name:<10} {:>7.4} {:>7.4} {:>7.4} {:>7.4}", r.acc, r.nmi, r.ari, r.f1)?;
    }
    if let Some(p) = &args.out {
        write_all(&[(p.as_path(), csv)])?;
    }
    Ok(table)
}
