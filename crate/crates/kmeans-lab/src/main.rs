//! Thin command-line wrapper over the library: dataset sampling,
//! clustering runs, closed-form bound evaluation, and the Monte Carlo
//! experiment drivers. All logic lives in the library; this binary only
//! parses flags, dispatches, and writes files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use kmeans_lab::clustering::{
    hartigan_run, init_kmeanspp, init_random_centers, init_random_partition, kmeans_loss,
    lloyd_run, partition_from_centers, pca_reduce, pca_split, LloydInit, RunConfig,
};
use kmeans_lab::error::{Error, Result};
use kmeans_lab::experiments::{
    run_divergent, run_fixed_point_census, run_grid, run_scale_check, write_report, Algorithm,
    GridSpec, InitStrategy, ReportFormat, ScaleCheckConfig,
};
use kmeans_lab::metrics;
use kmeans_lab::model::{load_dataset_csv, sample_gmm, write_dataset_csv, GmmSpec, Partition};
use kmeans_lab::theory;

/// Fixed default master seed; randomized subcommands never consult the
/// clock.
const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(
    name = "kmeans-lab",
    version,
    about = "Clustering laboratory: k-means solvers, fixed-point bounds, and seeded experiments",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a dataset from the isotropic Gaussian mixture and write it as CSV.
    Sample(SampleArgs),
    /// Cluster a CSV dataset and report loss (and NMI when labels exist).
    Cluster(ClusterArgs),
    /// Evaluate one closed-form bound quantity and print it as JSON.
    Bounds(BoundsArgs),
    /// Run the benchmark grid over dimensions and noise variances.
    Grid(GridArgs),
    /// Run the single-sample divergence experiment.
    Divergent(DivergentArgs),
    /// Run the exhaustive fixed-point census.
    Census(CensusArgs),
    /// Run the distance-scale moment check.
    ScaleCheck(ScaleCheckArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// Read the full mixture spec from a JSON file instead of flags.
    #[arg(long, conflicts_with_all = ["k", "d", "tau_sq", "sigma_sq", "class_sizes", "samples_per_class", "seed"])]
    spec: Option<PathBuf>,
    /// Number of classes.
    #[arg(long, short = 'k')]
    k: Option<usize>,
    /// Ambient dimension.
    #[arg(long, short = 'd')]
    d: Option<usize>,
    /// Center variance per coordinate.
    #[arg(long)]
    tau_sq: Option<f64>,
    /// Noise variance per coordinate.
    #[arg(long)]
    sigma_sq: Option<f64>,
    /// Comma-separated class sizes, e.g. 20,20.
    #[arg(long, conflicts_with = "samples_per_class")]
    class_sizes: Option<String>,
    /// Equal size for every class.
    #[arg(long)]
    samples_per_class: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output CSV path; the last column holds the class label.
    #[arg(long)]
    out: PathBuf,
    /// Omit the label column.
    #[arg(long)]
    no_labels: bool,
    /// Also write the resolved spec as JSON.
    #[arg(long)]
    write_spec: Option<PathBuf>,
}

#[derive(Args)]
struct ClusterArgs {
    /// Input CSV dataset.
    #[arg(long)]
    data: PathBuf,
    /// Treat the last column as ground-truth labels.
    #[arg(long)]
    has_labels: bool,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value = "random-partition")]
    init: InitArg,
    /// Number of clusters (defaults to the number of label classes).
    #[arg(long, short = 'k')]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    #[arg(long, default_value_t = 0.0)]
    tie_epsilon: f64,
    /// Reduced dimension for pca-lloyd (defaults to K).
    #[arg(long)]
    pca_r: Option<usize>,
    /// Output CSV with one cluster index per row.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output JSON run report (iterations, loss trajectory, moves).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Lloyd,
    Hartigan,
    PcaLloyd,
    PcaSplit,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Lloyd => Algorithm::Lloyd,
            AlgoArg::Hartigan => Algorithm::Hartigan,
            AlgoArg::PcaLloyd => Algorithm::PcaLloyd,
            AlgoArg::PcaSplit => Algorithm::PcaSplit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    RandomPartition,
    RandomCenters,
    Kmeanspp,
}

impl From<InitArg> for InitStrategy {
    fn from(i: InitArg) -> InitStrategy {
        match i {
            InitArg::RandomPartition => InitStrategy::RandomPartition,
            InitArg::RandomCenters => InitStrategy::RandomCenters,
            InitArg::Kmeanspp => InitStrategy::Kmeanspp,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    AlphaCurrent,
    AlphaOther,
    ChiTail,
    LloydRho,
    RhoQ,
    SigmaBalanced,
    HartiganRho,
    RhoH,
    UnionLloyd,
    UnionHartigan,
    Eta,
    NoiseThreshold,
    Scales,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum)]
    formula: FormulaArg,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    tau_sq: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    sigma_sq: Option<f64>,
    /// Current cluster size.
    #[arg(long)]
    c: Option<usize>,
    /// Other cluster size.
    #[arg(long)]
    c_bar: Option<usize>,
    /// Purity coefficient.
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    r_j: Option<f64>,
    #[arg(long)]
    r_jbar: Option<f64>,
    #[arg(long)]
    r_star: Option<f64>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    size_j: Option<usize>,
    #[arg(long)]
    size_jbar: Option<usize>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    /// Shift in the tail event P(Y1 - Y2 <= m).
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    b1: Option<f64>,
    #[arg(long)]
    b2: Option<f64>,
    /// Decay base fed to a union bound.
    #[arg(long)]
    rho: Option<f64>,
    /// Scale toward the sample's current cluster (eta).
    #[arg(long)]
    current: bool,
    /// Skip the purity-ordering domain check (hartigan-rho).
    #[arg(long)]
    unchecked: bool,
}

#[derive(Args)]
struct GridArgs {
    /// Comma-separated dimensions, e.g. 10,100,10000.
    #[arg(long)]
    dims: String,
    /// Comma-separated noise variances.
    #[arg(long)]
    noise_vars: String,
    #[arg(long, short = 'k', default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 20)]
    samples_per_class: usize,
    #[arg(long, default_value_t = 1.0)]
    tau_sq: f64,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Comma-separated algorithms: lloyd,hartigan,pca-lloyd,pca-split.
    #[arg(long, default_value = "lloyd,hartigan")]
    algos: String,
    /// Comma-separated inits: random-partition,random-centers,kmeanspp.
    #[arg(long, default_value = "random-partition")]
    inits: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct DivergentArgs {
    /// Total samples; must be a multiple of 8.
    #[arg(long, default_value_t = 40)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    tau_sq: f64,
    /// Comma-separated noise multipliers (each > 1).
    #[arg(long, default_value = "1.25,2,4")]
    betas: String,
    /// Comma-separated dimensions.
    #[arg(long, default_value = "50,500,3000")]
    dims: String,
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct CensusArgs {
    /// Samples per dataset (even, between 4 and 16: all 2^n bipartitions
    /// are enumerated).
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, short = 'd', default_value_t = 4096)]
    d: usize,
    #[arg(long, default_value_t = 1.0)]
    tau_sq: f64,
    /// Noise multiplier over the balanced threshold.
    #[arg(long, default_value_t = 1.5)]
    beta: f64,
    /// Balance tolerance in binomial standard deviations.
    #[arg(long, default_value_t = 3.0)]
    q: f64,
    #[arg(long, default_value_t = 20)]
    datasets: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct ScaleCheckArgs {
    /// Comma-separated class sizes (two classes), e.g. 6,6.
    #[arg(long, default_value = "6,6")]
    class_sizes: String,
    /// Size of cluster 0 (the designated sample's cluster).
    #[arg(long, default_value_t = 6)]
    cluster_size: usize,
    /// Class-0 samples placed in cluster 0 (sets the purity).
    #[arg(long, default_value_t = 3)]
    from_class0: usize,
    #[arg(long, default_value_t = 1.0)]
    tau_sq: f64,
    #[arg(long, default_value_t = 2.0)]
    sigma_sq: f64,
    #[arg(long, short = 'd', default_value_t = 64)]
    d: usize,
    #[arg(long, default_value_t = 2000)]
    replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for ReportFormat {
    fn from(f: FormatArg) -> ReportFormat {
        match f {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Cluster(args) => cmd_cluster(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Grid(args) => cmd_grid(args),
        Command::Divergent(args) => cmd_divergent(args),
        Command::Census(args) => cmd_census(args),
        Command::ScaleCheck(args) => cmd_scale_check(args),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| Error::invalid(format!("cannot parse {what} entry {part:?}")))
        })
        .collect()
}

fn require<T: Copy>(flag: Option<T>, name: &str) -> Result<T> {
    flag.ok_or_else(|| Error::invalid(format!("missing required flag --{name} for this formula")))
}

fn install_pool<F: FnOnce() -> Result<()> + Send>(threads: usize, f: F) -> Result<()> {
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?;
    pool.install(f)
}

fn cmd_sample(args: SampleArgs) -> Result<()> {
    let spec = if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str::<GmmSpec>(&text)
            .map_err(|e| Error::invalid(format!("invalid spec JSON: {e}")))?
    } else {
        let k = require(args.k, "k")?;
        let class_sizes = match (&args.class_sizes, args.samples_per_class) {
            (Some(list), None) => parse_list::<usize>(list, "class size")?,
            (None, Some(per)) => vec![per; k],
            _ => {
                return Err(Error::invalid(
                    "give exactly one of --class-sizes or --samples-per-class",
                ))
            }
        };
        GmmSpec {
            k,
            d: require(args.d, "d")?,
            tau_sq: require(args.tau_sq, "tau-sq")?,
            sigma_sq: require(args.sigma_sq, "sigma-sq")?,
            class_sizes,
            seed: args.seed,
        }
    };

    let ds = sample_gmm(&spec)?;
    write_dataset_csv(&ds, &args.out, !args.no_labels)?;
    if let Some(path) = &args.write_spec {
        let text = serde_json::to_string_pretty(&spec)
            .map_err(|e| Error::invalid(format!("spec serialization failed: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    println!(
        "{}",
        json!({"n": ds.n(), "d": ds.dim(), "path": args.out.display().to_string()})
    );
    Ok(())
}

fn cmd_cluster(args: ClusterArgs) -> Result<()> {
    let ds = load_dataset_csv(&args.data, args.has_labels)?;
    let k = match (args.k, ds.n_classes()) {
        (Some(k), _) => k,
        (None, Some(k)) => k,
        (None, None) => return Err(Error::invalid("give --k or a labeled dataset")),
    };
    let cfg = RunConfig {
        max_iters: args.max_iters,
        tie_epsilon: args.tie_epsilon,
        ..Default::default()
    };

    let (partition, report): (Partition, Option<kmeans_lab::clustering::RunReport>) =
        match Algorithm::from(args.algo) {
            Algorithm::Lloyd => {
                let init = lloyd_init(&ds, args.init.into(), k, args.seed)?;
                let (p, r) = lloyd_run(&ds, init, &cfg)?;
                (p, Some(r))
            }
            Algorithm::Hartigan => {
                let init = partition_init(&ds, args.init.into(), k, args.seed)?;
                let (p, r) = hartigan_run(&ds, init, &cfg)?;
                (p, Some(r))
            }
            Algorithm::PcaLloyd => {
                let r = args.pca_r.unwrap_or(k).min(ds.n().min(ds.dim()));
                let reduced = pca_reduce(&ds, r)?;
                let init = lloyd_init(&reduced, args.init.into(), k, args.seed)?;
                let (p, rep) = lloyd_run(&reduced, init, &cfg)?;
                (p, Some(rep))
            }
            Algorithm::PcaSplit => {
                if k != 2 {
                    return Err(Error::invalid(
                        "pca-split is a two-cluster method; use --k 2",
                    ));
                }
                (pca_split(&ds)?, None)
            }
        };

    // Loss on the original data, also for the PCA variants.
    let loss = kmeans_loss(&ds, &partition).ok();
    let mut summary = serde_json::Map::new();
    if let Some(loss) = loss {
        summary.insert("loss".into(), json!(loss));
    }
    if let Some(labels) = &ds.labels {
        summary.insert(
            "nmi".into(),
            json!(metrics::nmi(partition.assign(), labels)?),
        );
    }
    if let Some(report) = &report {
        summary.insert("iterations".into(), json!(report.iterations));
        summary.insert("converged".into(), json!(report.converged));
    }
    println!("{}", serde_json::Value::Object(summary));

    if let Some(path) = &args.out {
        let mut text = String::new();
        for &a in partition.assign() {
            text.push_str(&a.to_string());
            text.push('\n');
        }
        std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    if let Some(path) = &args.report {
        let report = report.ok_or_else(|| Error::invalid("pca-split produces no run report"))?;
        let text = serde_json::to_string_pretty(&report)
            .map_err(|e| Error::invalid(format!("report serialization failed: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn lloyd_init(
    ds: &kmeans_lab::model::Dataset,
    init: InitStrategy,
    k: usize,
    seed: u64,
) -> Result<LloydInit> {
    Ok(match init {
        InitStrategy::RandomPartition => {
            LloydInit::Partition(init_random_partition(ds.n(), k, seed)?)
        }
        InitStrategy::RandomCenters => LloydInit::Centers(init_random_centers(ds, k, seed)?),
        InitStrategy::Kmeanspp => LloydInit::Centers(init_kmeanspp(ds, k, seed)?),
    })
}

fn partition_init(
    ds: &kmeans_lab::model::Dataset,
    init: InitStrategy,
    k: usize,
    seed: u64,
) -> Result<Partition> {
    match init {
        InitStrategy::RandomPartition => init_random_partition(ds.n(), k, seed),
        InitStrategy::RandomCenters => {
            partition_from_centers(ds, &init_random_centers(ds, k, seed)?)
        }
        InitStrategy::Kmeanspp => partition_from_centers(ds, &init_kmeanspp(ds, k, seed)?),
    }
}

fn cmd_bounds(args: BoundsArgs) -> Result<()> {
    let value = match args.formula {
        FormulaArg::AlphaCurrent => {
            let v = theory::alpha_current(
                require(args.tau_sq, "tau-sq")?,
                require(args.sigma_sq, "sigma-sq")?,
                require(args.c, "c")?,
                require(args.r, "r")?,
            );
            json!({ "alpha_current": v })
        }
        FormulaArg::AlphaOther => {
            let v = theory::alpha_other(
                require(args.tau_sq, "tau-sq")?,
                require(args.sigma_sq, "sigma-sq")?,
                require(args.c_bar, "c-bar")?,
                require(args.r, "r")?,
            );
            json!({ "alpha_other": v })
        }
        FormulaArg::ChiTail => {
            let sp = theory::ScalePair::new(require(args.b1, "b1")?, require(args.b2, "b2")?)?;
            let tb =
                theory::chi_diff_tail_bound(&sp, require(args.m, "m")?, require(args.d, "d")?)?;
            json!({ "bound": tb.bound, "rho": tb.rho })
        }
        FormulaArg::LloydRho => {
            let inputs = theory::LloydBoundInputs::new(
                require(args.tau_sq, "tau-sq")?,
                require(args.sigma_sq, "sigma-sq")?,
                require(args.c, "c")?,
                require(args.c_bar, "c-bar")?,
            )?;
            json!({ "lloyd_rho": theory::lloyd_rho(&inputs)? })
        }
        FormulaArg::RhoQ => {
            let v = theory::lloyd_rho_balanced(
                require(args.sigma, "sigma")?,
                require(args.n, "n")?,
                require(args.q, "q")?,
            )?;
            json!({ "rho_q": v })
        }
        FormulaArg::SigmaBalanced => {
            let v = theory::sigma_balanced(
                require(args.beta, "beta")?,
                require(args.n, "n")?,
                require(args.q, "q")?,
            );
            json!({ "sigma_balanced": v })
        }
        FormulaArg::HartiganRho => {
            let mk = if args.unchecked {
                theory::HartiganBoundInputs::new_unchecked
            } else {
                theory::HartiganBoundInputs::new
            };
            let inputs = mk(
                require(args.tau_sq, "tau-sq")?,
                require(args.sigma_sq, "sigma-sq")?,
                require(args.size_j, "size-j")?,
                require(args.size_jbar, "size-jbar")?,
                require(args.r_j, "r-j")?,
                require(args.r_jbar, "r-jbar")?,
            )?;
            json!({ "hartigan_rho": theory::hartigan_rho(&inputs)? })
        }
        FormulaArg::RhoH => {
            let n = require(args.n, "n")? as usize;
            let v = theory::hartigan_rho_uniform(
                require(args.tau_sq, "tau-sq")?,
                require(args.sigma_sq, "sigma-sq")?,
                n,
                require(args.r_star, "r-star")?,
            )?;
            json!({ "rho_h": v })
        }
        FormulaArg::UnionLloyd => {
            let ub = theory::lloyd_union_bound(
                require(args.n, "n")? as usize,
                require(args.d, "d")?,
                require(args.rho, "rho")?,
            )?;
            json!({ "log_bound": ub.log_bound, "probability": ub.probability })
        }
        FormulaArg::UnionHartigan => {
            let ub = theory::hartigan_union_bound(
                require(args.n, "n")? as usize,
                require(args.d, "d")?,
                require(args.rho, "rho")?,
            )?;
            json!({ "log_bound": ub.log_bound, "probability": ub.probability })
        }
        FormulaArg::Eta => {
            let v = theory::hartigan_eta(
                require(args.tau_sq, "tau-sq")?,
                require(args.sigma_sq, "sigma-sq")?,
                require(args.size, "size")?,
                require(args.r, "r")?,
                args.current,
            )?;
            json!({ "eta": v })
        }
        FormulaArg::NoiseThreshold => {
            let v = theory::lloyd_noise_threshold(
                require(args.tau, "tau")?,
                require(args.c, "c")?,
                require(args.c_bar, "c-bar")?,
            );
            json!({ "noise_threshold": v })
        }
        FormulaArg::Scales => {
            let inputs = theory::LloydBoundInputs::new(
                require(args.tau_sq, "tau-sq")?,
                require(args.sigma_sq, "sigma-sq")?,
                require(args.c, "c")?,
                require(args.c_bar, "c-bar")?,
            )?;
            let sp = theory::most_favorable_scales(&inputs)?;
            json!({ "b1": sp.b1, "b2": sp.b2, "rho": sp.rho() })
        }
    };
    println!("{value}");
    Ok(())
}

fn cmd_grid(args: GridArgs) -> Result<()> {
    let algorithms = parse_list::<String>(&args.algos, "algorithm")?
        .iter()
        .map(|s| Algorithm::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let inits = parse_list::<String>(&args.inits, "init")?
        .iter()
        .map(|s| InitStrategy::parse(s))
        .collect::<Result<Vec<_>>>()?;
    let gs = GridSpec {
        dims: parse_list(&args.dims, "dimension")?,
        noise_vars: parse_list(&args.noise_vars, "noise variance")?,
        k: args.k,
        samples_per_class: args.samples_per_class,
        tau_sq: args.tau_sq,
        trials: args.trials,
        algorithms,
        inits,
        master_seed: args.seed,
    };
    install_pool(args.threads, || {
        let cells = run_grid(&gs)?;
        write_report(&cells, &args.out, args.format.into())?;
        eprintln!("wrote {} cells to {}", cells.len(), args.out.display());
        Ok(())
    })
}

fn cmd_divergent(args: DivergentArgs) -> Result<()> {
    let betas: Vec<f64> = parse_list(&args.betas, "beta")?;
    let dims: Vec<usize> = parse_list(&args.dims, "dimension")?;
    install_pool(args.threads, || {
        let rows = run_divergent(args.n, args.tau_sq, &betas, &dims, args.trials, args.seed)?;
        write_report(&rows, &args.out, args.format.into())?;
        eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
        Ok(())
    })
}

fn cmd_census(args: CensusArgs) -> Result<()> {
    install_pool(args.threads, || {
        let rows = run_fixed_point_census(
            args.n,
            args.d,
            args.tau_sq,
            args.beta,
            args.q,
            args.datasets,
            args.seed,
        )?;
        write_report(&rows, &args.out, args.format.into())?;
        eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
        Ok(())
    })
}

fn cmd_scale_check(args: ScaleCheckArgs) -> Result<()> {
    let sizes: Vec<usize> = parse_list(&args.class_sizes, "class size")?;
    if sizes.len() != 2 {
        return Err(Error::invalid("scale-check uses exactly two classes"));
    }
    let cfg = ScaleCheckConfig {
        class_sizes: (sizes[0], sizes[1]),
        cluster_size: args.cluster_size,
        in_cluster_from_class0: args.from_class0,
        tau_sq: args.tau_sq,
        sigma_sq: args.sigma_sq,
        d: args.d,
        replicates: args.replicates,
        master_seed: args.seed,
    };
    install_pool(args.threads, || {
        let rows = run_scale_check(&cfg)?;
        write_report(&rows, &args.out, args.format.into())?;
        eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
        Ok(())
    })
}
