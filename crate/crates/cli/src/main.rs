//! `pn2sc`: reduce place/transition nets into statecharts from the command
//! line, plus the supporting plumbing around it — net generation, a
//! two-interval benchmark, and output comparison.
//!
//! Exit codes are a stable contract: 0 on success, 2 when a reduction gets
//! stuck or compared documents differ, 1 for usage and input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pn2sc_core::dot::snapshot_to_dot;
use pn2sc_core::engine::{ReductionOutcome, ReductionPolicy, TraceMode, TransformState};
use pn2sc_core::generator::{generate, GeneratorSpec};
use pn2sc_core::io::{models_equivalent, read_net, read_statechart, write_net, write_outcome};
use pn2sc_core::net::PetriNet;

mod report;

use report::{BenchReport, BenchRow, Timing};

/// Exit code for a reduction that wedges or a comparison that differs.
const EXIT_STUCK: u8 = 2;

#[derive(Parser)]
#[command(name = "pn2sc", version, about = "Petri-net to statechart reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a net into a statechart document.
    Transform(TransformArgs),
    /// Generate a well-structured, reducible benchmark net.
    Generate(GenerateArgs),
    /// Measure load and transform intervals over a size ladder.
    Bench(BenchArgs),
    /// Compare two statechart documents for structural equivalence.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    /// Always pick the smallest pending transition id.
    Det,
    /// Pick pending transitions at random, driven by --seed.
    Random,
}

#[derive(Args)]
struct TransformArgs {
    /// Input net (`pn2sc-net/1` JSON).
    input: PathBuf,
    /// Output document (`pn2sc-sc/1` JSON); on a stuck reduction this
    /// receives the failure dump instead of a completed chart.
    output: PathBuf,
    #[arg(long, value_enum, default_value_t = Policy::Det)]
    policy: Policy,
    /// Seed for `--policy random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one Graphviz snapshot per reduction step into this directory.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Output net path.
    output: PathBuf,
    /// Desired element count (places plus transitions), within 2%.
    #[arg(long)]
    target: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Blocks per sequence, lower bound.
    #[arg(long)]
    seq_min: Option<usize>,
    /// Blocks per sequence, upper bound.
    #[arg(long)]
    seq_max: Option<usize>,
    /// Branches per parallel section, lower bound.
    #[arg(long)]
    par_min: Option<usize>,
    /// Branches per parallel section, upper bound.
    #[arg(long)]
    par_max: Option<usize>,
    /// Maximum nesting depth of the base block.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated element-count targets.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "200,1000,5000,10000,40000,200000"
    )]
    sizes: Vec<usize>,
    /// Timed repetitions per size (one extra warm-up run is discarded).
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report as CSV to this path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// First statechart document.
    a: PathBuf,
    /// Second statechart document.
    b: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Transform(args) => cmd_transform(args),
        Command::Generate(args) => cmd_generate(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Compare(args) => cmd_compare(args),
    }
}

fn load_net(path: &Path) -> Result<PetriNet> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_net(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn ms(duration: Duration) -> f64 {
    duration.as_secs_f64() * 1e3
}

fn cmd_transform(args: TransformArgs) -> Result<u8> {
    let load_started = Instant::now();
    let net = load_net(&args.input)?;
    let load_time = load_started.elapsed();
    println!(
        "loaded {}: {} places, {} transitions in {:.3} ms",
        args.input.display(),
        net.place_count(),
        net.transition_count(),
        ms(load_time)
    );

    let policy = match args.policy {
        Policy::Det => ReductionPolicy::Deterministic,
        Policy::Random => ReductionPolicy::Seeded(args.seed),
    };
    let trace_mode = if args.trace_dir.is_some() {
        TraceMode::Full
    } else {
        TraceMode::Off
    };

    let transform_started = Instant::now();
    let outcome = TransformState::initialize_traced(net, trace_mode)?.reduce(policy);
    let transform_time = transform_started.elapsed();
    let applications = outcome.applications();
    println!(
        "transform: {} applications ({} AND, {} OR) in {:.3} ms",
        applications.total(),
        applications.and_rules,
        applications.or_rules,
        ms(transform_time)
    );

    if let Some(dir) = &args.trace_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for snapshot in outcome.trace() {
            let dot = snapshot_to_dot(snapshot).expect("full trace carries models");
            let path = dir.join(format!("step_{:03}.dot", snapshot.step));
            fs::write(&path, dot).with_context(|| format!("writing {}", path.display()))?;
        }
        println!(
            "trace: {} snapshots in {}",
            outcome.trace().len(),
            dir.display()
        );
    }

    let text = write_outcome(&outcome)?;
    fs::write(&args.output, text).with_context(|| format!("writing {}", args.output.display()))?;

    match &outcome {
        ReductionOutcome::Success { .. } => {
            println!(
                "verdict: success; statechart written to {}",
                args.output.display()
            );
            Ok(0)
        }
        ReductionOutcome::Stuck { net, .. } => {
            println!(
                "verdict: stuck with {} places and {} transitions left; \
                 failure dump written to {}",
                net.place_count(),
                net.transition_count(),
                args.output.display()
            );
            Ok(EXIT_STUCK)
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<u8> {
    let mut spec = GeneratorSpec::new(args.target, args.seed);
    if let Some(v) = args.seq_min {
        spec.template.seq_min = v;
    }
    if let Some(v) = args.seq_max {
        spec.template.seq_max = v;
    }
    if let Some(v) = args.par_min {
        spec.template.par_min = v;
    }
    if let Some(v) = args.par_max {
        spec.template.par_max = v;
    }
    if let Some(v) = args.depth {
        spec.template.depth = v;
    }
    let net = generate(&spec)?;
    fs::write(&args.output, write_net(&net))
        .with_context(|| format!("writing {}", args.output.display()))?;
    println!(
        "generated {}: {} places, {} transitions ({} elements, target {})",
        args.output.display(),
        net.place_count(),
        net.transition_count(),
        net.element_count(),
        args.target
    );
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    if args.reps == 0 {
        bail!("--reps must be at least 1");
    }
    let scratch = tempfile::tempdir().context("creating scratch directory")?;
    let mut rows = Vec::new();
    for &size in &args.sizes {
        rows.push(bench_size(scratch.path(), size, args.seed, args.reps));
    }
    let report = BenchReport {
        seed: args.seed,
        reps: args.reps,
        rows,
    };
    print!("{}", report.table());
    if let Some(path) = &args.report {
        fs::write(path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?;
        println!("report written to {}", path.display());
    }
    Ok(0)
}

/// Runs one ladder rung: generate the net once, then time file load and
/// reduction separately per repetition. The two intervals are reported
/// side by side and never summed.
fn bench_size(scratch: &Path, size: usize, seed: u64, reps: usize) -> BenchRow {
    let label = format!("sp{size}");
    let mut row = BenchRow::empty(label, size);
    let net = match generate(&GeneratorSpec::new(size, seed)) {
        Ok(net) => net,
        Err(err) => {
            row.outcome = format!("error: {err}");
            return row;
        }
    };
    row.elements = net.element_count();
    let path = scratch.join(format!("sp{size}.pn.json"));
    if let Err(err) = fs::write(&path, write_net(&net)) {
        row.outcome = format!("error: {err}");
        return row;
    }

    let mut loads = Vec::new();
    let mut transforms = Vec::new();
    for rep in 0..=reps {
        let load_started = Instant::now();
        let loaded = match fs::read(&path)
            .map_err(anyhow::Error::from)
            .and_then(|bytes| read_net(&bytes).map_err(anyhow::Error::from))
        {
            Ok(net) => net,
            Err(err) => {
                row.outcome = format!("error: {err}");
                return row;
            }
        };
        let load_time = load_started.elapsed();

        let transform_started = Instant::now();
        let outcome = match TransformState::initialize(loaded) {
            Ok(state) => state.reduce(ReductionPolicy::Deterministic),
            Err(err) => {
                row.outcome = format!("error: {err}");
                return row;
            }
        };
        let transform_time = transform_started.elapsed();

        // The first pass is the warm-up; only later passes are recorded.
        if rep > 0 {
            loads.push(load_time);
            transforms.push(transform_time);
        }
        row.outcome = if outcome.is_success() {
            "success".to_string()
        } else {
            "stuck".to_string()
        };
        row.applications = outcome.applications().total();
    }
    row.load = Timing::from_samples(&mut loads);
    row.transform = Timing::from_samples(&mut transforms);
    row
}

fn cmd_compare(args: CompareArgs) -> Result<u8> {
    let read = |path: &Path| -> Result<_> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        read_statechart(&bytes).with_context(|| format!("parsing {}", path.display()))
    };
    let a = read(&args.a)?;
    let b = read(&args.b)?;
    if models_equivalent(&a, &b)? {
        println!("equivalent");
        Ok(0)
    } else {
        println!("not equivalent");
        Ok(EXIT_STUCK)
    }
}
