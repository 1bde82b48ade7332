//! Command-line front end: operator builds, evaluations, weight dumps,
//! grid/covering inspection, and benchmark experiment runs.
//!
//! Exit codes distinguish failure classes for scripting:
//!
//! * `0` — success (including `info` on inadmissible grids, which is diagnostic)
//! * `2` — input or format error (unreadable/malformed files, bad flag values)
//! * `3` — infeasible configuration (inadmissible grid, degree too large,
//!   shared pool cannot supply the requested nodes)
//! * `4` — numerical failure (singular Gram system, residual out of bounds,
//!   quadrature breakdown)
//!
//! The only environment variable consulted is `HISTOSHEP_THREADS`, which caps
//! internal parallelism. All files are written atomically (temp + rename).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use histoshep::bench::{self, Overrides};
use histoshep::covering::{self, CoveringError};
use histoshep::grid::{ContinuityInterval, GridError, SegmentGrid};
use histoshep::histopoly::HistopolyError;
use histoshep::io::{self, IoError};
use histoshep::operator::{BuildError, BuildParams, EvalError, QuasiHistopolant};
use histoshep::quad::QuadError;
use histoshep::shepard::{self, Placement, ShepardError};

#[derive(Parser)]
#[command(
    name = "histoshep",
    version,
    about = "Smooth reconstruction of discontinuous functions from segment integrals",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the quasi-histopolant from integral data and evaluate it
    Approximate(ApproximateArgs),
    /// Inspect a grid: continuity intervals, mesh metrics, covering radius
    Info(InfoArgs),
    /// Emit the multinode Shepard weight functions on an evaluation grid
    Weights(WeightsArgs),
    /// Run a named benchmark experiment (test1..test4, figure1, figure8)
    Bench(BenchArgs),
}

/// Integral data source shared by the file-driven subcommands.
#[derive(Args)]
struct InputArgs {
    /// Integral data: .csv (`left,right,integral` rows) or .json
    /// (`{"nodes": [..], "integrals": [..], "jumps": [..]}`)
    input: PathBuf,
    /// Additional discontinuity abscissae, comma-separated (JSON inputs may
    /// already carry some; the lists are merged)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    jumps: Vec<f64>,
}

#[derive(Args)]
struct ModelArgs {
    /// Guaranteed minimum degree of the local histopolation polynomials
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Number of Shepard nodes per covering interval
    #[arg(long = "K", default_value_t = 10)]
    k: usize,
    /// Inverse-distance weight exponent
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    mu: f64,
    /// Node placement; omit to choose automatically from the overlap widths
    #[arg(long, value_enum)]
    placement: Option<PlacementArg>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum PlacementArg {
    /// Equispaced in the open interior of each covering interval
    Interior,
    /// Drawn from a per-group pool so overlapping intervals share nodes
    Shared,
}

impl From<PlacementArg> for Placement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::Interior => Placement::InteriorEquispaced,
            PlacementArg::Shared => Placement::SharedPool,
        }
    }
}

#[derive(Args)]
struct EvalGridArgs {
    /// Number of equispaced evaluation points over the domain
    #[arg(long, default_value_t = 1001, conflicts_with = "eval_grid")]
    ne: usize,
    /// File with one evaluation abscissa per line (replaces --ne)
    #[arg(long)]
    eval_grid: Option<PathBuf>,
}

#[derive(Args)]
struct ApproximateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    eval: EvalGridArgs,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the build report as a JSON sidecar next to --out
    #[arg(long, requires = "out")]
    report: bool,
}

#[derive(Args)]
struct InfoArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Degree whose covering radius and covering are reported
    #[arg(long, default_value_t = 3)]
    d: usize,
}

#[derive(Args)]
struct WeightsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    eval: EvalGridArgs,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment name: test1, test2, test3, test4, figure1, figure8
    experiment: String,
    /// Override the experiment's evaluation grid size(s)
    #[arg(long)]
    ne: Option<usize>,
    /// Force a Shepard placement mode for the sweeps
    #[arg(long, value_enum)]
    placement: Option<PlacementArg>,
    /// Additionally emit per-figure x,f,Q traces for external plotting
    #[arg(long)]
    plots: bool,
    /// Directory receiving the CSV files
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn main() -> ExitCode {
    if let Err(err) = configure_threads() {
        eprintln!("error: {err:#}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Approximate(args) => cmd_approximate(args),
        Command::Info(args) => cmd_info(args),
        Command::Weights(args) => cmd_weights(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Applies the `HISTOSHEP_THREADS` parallelism cap before any worker pool
/// spins up.
fn configure_threads() -> Result<()> {
    match std::env::var("HISTOSHEP_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => bail!("HISTOSHEP_THREADS is not valid unicode: {e}"),
        Ok(raw) => {
            let n: usize = raw
                .trim()
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .with_context(|| {
                    format!("HISTOSHEP_THREADS must be a positive integer, got `{raw}`")
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the worker pool")?;
            Ok(())
        }
    }
}

/// Maps an error chain onto the documented exit-code taxonomy.
fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<bench::BenchError>() {
            return classify_bench(e);
        }
        if let Some(e) = cause.downcast_ref::<BuildError>() {
            return classify_build(e);
        }
        if let Some(e) = cause.downcast_ref::<EvalError>() {
            return classify_eval(e);
        }
        if let Some(e) = cause.downcast_ref::<CoveringError>() {
            return classify_covering(e);
        }
        if cause.downcast_ref::<HistopolyError>().is_some() {
            return 4;
        }
        if let Some(e) = cause.downcast_ref::<ShepardError>() {
            return classify_shepard(e);
        }
        if cause.downcast_ref::<QuadError>().is_some() {
            return 4;
        }
        if cause.downcast_ref::<GridError>().is_some() || cause.downcast_ref::<IoError>().is_some()
        {
            return 2;
        }
    }
    2
}

fn classify_build(err: &BuildError) -> u8 {
    match err {
        BuildError::Grid(_) | BuildError::BadMu(_) => 2,
        BuildError::Covering(e) => classify_covering(e),
        BuildError::Histopoly(_) => 4,
        BuildError::Shepard(e) => classify_shepard(e),
    }
}

fn classify_covering(err: &CoveringError) -> u8 {
    match err {
        CoveringError::Grid(_) => 2,
        CoveringError::InadmissibleGrid { .. } | CoveringError::DegreeInfeasible { .. } => 3,
        CoveringError::CoverageViolation(_) => 4,
    }
}

fn classify_shepard(err: &ShepardError) -> u8 {
    match err {
        ShepardError::BadK(_) => 2,
        ShepardError::PoolUnderflow { .. } => 3,
        ShepardError::BadIndex { .. } => 4,
    }
}

fn classify_eval(err: &EvalError) -> u8 {
    match err {
        EvalError::OutOfDomain { .. } => 2,
        EvalError::Quadrature(_) => 4,
    }
}

fn classify_bench(err: &bench::BenchError) -> u8 {
    match err {
        bench::BenchError::UnknownExperiment(_) => 2,
        bench::BenchError::QuadratureMismatch { .. } => 4,
        bench::BenchError::Grid(_) => 2,
        bench::BenchError::Build(e) => classify_build(e),
        bench::BenchError::Eval(e) => classify_eval(e),
        bench::BenchError::Covering(e) => classify_covering(e),
        bench::BenchError::Shepard(e) => classify_shepard(e),
    }
}

/// Reads an input file and folds in command-line jump declarations.
fn load_grid_input(args: &InputArgs) -> Result<(SegmentGrid, Vec<f64>)> {
    let data = io::read_input(&args.input)?;
    let mut jumps = data.jumps;
    jumps.extend_from_slice(&args.jumps);
    jumps.sort_by(f64::total_cmp);
    jumps.dedup();
    let grid = SegmentGrid::new(data.nodes, data.integrals)?;
    Ok((grid, jumps))
}

fn build_operator(grid: SegmentGrid, jumps: &[f64], model: &ModelArgs) -> Result<QuasiHistopolant> {
    // Computed up front because `build` consumes the grid; only read when the
    // requested degree turns out to be infeasible.
    let d_max = grid
        .partition_continuity(jumps)
        .ok()
        .and_then(|p| covering::max_degree(&grid, &p).ok());
    let params = BuildParams {
        d: model.d,
        k: model.k,
        mu: model.mu,
        placement: model.placement.map(Placement::from),
    };
    match QuasiHistopolant::build(grid, jumps, &params) {
        Ok(q) => Ok(q),
        Err(
            err @ BuildError::Covering(
                CoveringError::InadmissibleGrid { .. } | CoveringError::DegreeInfeasible { .. },
            ),
        ) => {
            let ctx = match d_max {
                Some(dm) => format!(
                    "degree {} is infeasible for this grid (d_max = {dm})",
                    model.d
                ),
                None => format!("degree {} is infeasible for this grid", model.d),
            };
            Err(anyhow::Error::new(err).context(ctx))
        }
        Err(err) => Err(err.into()),
    }
}

/// The evaluation abscissae requested by `--ne`/`--eval-grid`.
fn eval_points(eval: &EvalGridArgs, domain: (f64, f64)) -> Result<Vec<f64>> {
    match &eval.eval_grid {
        Some(path) => Ok(io::read_points(path)?),
        None => {
            if eval.ne < 2 {
                bail!("--ne must be at least 2, got {}", eval.ne);
            }
            Ok(bench::linspace(domain.0, domain.1, eval.ne))
        }
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => {
            io::atomic_write(path, contents)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn cmd_approximate(args: ApproximateArgs) -> Result<()> {
    let (grid, jumps) = load_grid_input(&args.input)?;
    let q = build_operator(grid, &jumps, &args.model)?;
    let xs = eval_points(&args.eval, q.domain())?;
    let ys = q.evaluate_many(&xs)?;

    let mut csv = String::with_capacity(32 * (xs.len() + 1));
    csv.push_str("x,Q\n");
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(csv, "{x:e},{y:e}");
    }
    emit(args.out.as_deref(), &csv)?;

    if args.report {
        let out = args
            .out
            .as_deref()
            .expect("clap enforces --report needs --out");
        let sidecar = out.with_extension("report.json");
        let mut json = serde_json::to_string_pretty(q.report()).context("serializing report")?;
        json.push('\n');
        io::atomic_write(&sidecar, &json)?;
        eprintln!("wrote {}", sidecar.display());
    }
    Ok(())
}

fn cmd_info(args: InfoArgs) -> Result<()> {
    let (grid, jumps) = load_grid_input(&args.input)?;
    let partition = grid.partition_continuity(&jumps)?;
    let metrics = grid.metrics(&partition)?;

    let intervals: Vec<serde_json::Value> = partition
        .intervals()
        .iter()
        .enumerate()
        .map(|(l, interval)| match interval {
            ContinuityInterval::Empty => serde_json::json!({ "index": l, "empty": true }),
            ContinuityInterval::Span { left, right, .. } => serde_json::json!({
                "index": l,
                "empty": false,
                "a": left,
                "b": right,
                "segments": [interval.segments().start, interval.segments().end],
            }),
        })
        .collect();

    let d_max = covering::max_degree(&grid, &partition).ok();
    let mut r_d = None;
    let mut cover_json = None;
    let mut m = None;
    let mut infeasible_reason = None;
    match covering::build_covering(&grid, &partition, args.d) {
        Ok(cover) => {
            r_d = Some(cover.radius());
            m = Some(cover.len());
            let groups: Vec<Vec<[f64; 2]>> = (0..cover.n_groups())
                .map(|l| {
                    cover.flat()[cover.group(l)]
                        .iter()
                        .map(|u| [u.a, u.b])
                        .collect()
                })
                .collect();
            cover_json = Some(groups);
        }
        Err(err) => infeasible_reason = Some(err.to_string()),
    }

    let doc = serde_json::json!({
        "domain": [grid.domain().0, grid.domain().1],
        "n_segments": grid.n_segments(),
        "jumps": partition.jumps(),
        "host_segments": partition.hosts(),
        "intervals": intervals,
        "metrics": {
            "h_max_segments": metrics.h_max_segments,
            "h_min_segments": metrics.h_min_segments,
            "h_min_continuity": metrics.h_min_continuity,
            "h_min_jump_segments": metrics.h_min_jump_segments,
            "admissible": metrics.admissible,
        },
        "d": args.d,
        "d_max": d_max,
        "r_d": r_d,
        "m": m,
        "covering": cover_json,
        "infeasible_reason": infeasible_reason,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&doc).context("serializing info")?
    );
    Ok(())
}

fn cmd_weights(args: WeightsArgs) -> Result<()> {
    let (grid, jumps) = load_grid_input(&args.input)?;
    let q = build_operator(grid, &jumps, &args.model)?;
    let xs = eval_points(&args.eval, q.domain())?;

    let m = q.nodes().len();
    let mut csv = String::with_capacity(16 * (m + 1) * (xs.len() + 1));
    csv.push('x');
    for iota in 1..=m {
        let _ = write!(csv, ",W_{iota}");
    }
    csv.push('\n');
    for &x in &xs {
        let w = shepard::eval_weights(q.nodes(), q.mu(), x);
        let _ = write!(csv, "{x:e}");
        for v in &w.values {
            let _ = write!(csv, ",{v:e}");
        }
        csv.push('\n');
    }
    emit(args.out.as_deref(), &csv)
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    let overrides = Overrides {
        n_e: args.ne,
        placement: args.placement.map(Placement::from),
        plots: args.plots,
    };
    let output = bench::run_experiment(&args.experiment, &overrides)?;
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;

    let main_path = args.out.join(format!("{}.csv", output.name));
    io::atomic_write(&main_path, &output.csv)?;
    eprintln!("wrote {}", main_path.display());
    for plot in &output.plots {
        let path = args.out.join(format!("{}.csv", plot.stem));
        io::atomic_write(&path, &plot.csv)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
