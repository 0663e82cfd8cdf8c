use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use itermorse::generate::{random_complex, RandomConfig};
use itermorse::homology::{betti_numbers_traced, IterationTrace};
use itermorse::io::{betti_json, betti_text, intervals_json, write_boundary_format, Format};
use itermorse::oracle::oracle_intervals;
use itermorse::persistence::{
    persistence_pipeline_traced, simplify_filtered_traced, PersistenceIntervals,
};
use itermorse::ChainComplex;

const INVALID_INPUT: u8 = 1;
const CONTRACT_VIOLATION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "itermorse",
    version,
    about = "Z2 homology and persistence by iterated Morse complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Input format; inferred from the extension (.bnd, .smp) when omitted.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Print a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print the sizes of the iterated complexes to stderr.
    #[arg(long, global = true)]
    trace: bool,
    /// Seed for randomized self-tests (`check` without a file).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the input is a filtered chain complex.
    Validate { file: PathBuf },
    /// Betti numbers over Z2.
    Homology { file: PathBuf },
    /// Filtration-compatible fixpoint, in boundary format.
    Simplify { file: PathBuf },
    /// Persistence intervals via iterated Morse complexes.
    Persist { file: PathBuf },
    /// Persistence intervals via boundary matrix reduction.
    Reduce { file: PathBuf },
    /// Run `persist` and `reduce` and compare. Without a file, compares
    /// them on `--count` random complexes drawn from `--seed`.
    Check {
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        count: u64,
    },
}

/// Failure carrying its exit status.
struct Failure(u8, String);

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure(INVALID_INPUT, msg.into())
    }

    fn internal(msg: impl Into<String>) -> Self {
        Failure(CONTRACT_VIOLATION, msg.into())
    }
}

fn load(path: &Path, format: Option<Format>) -> Result<ChainComplex, Failure> {
    let format = format.or_else(|| Format::from_path(path)).ok_or_else(|| {
        Failure::input(format!(
            "{}: cannot infer the format, pass --format boundary|simplicial",
            path.display()
        ))
    })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let complex = format
        .parse(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let report = complex.validate();
    if !report.is_valid() {
        return Err(Failure::input(format!("{}: {report}", path.display())));
    }
    Ok(complex)
}

fn print_trace(opts: &Opts, trace: &IterationTrace) {
    if opts.trace {
        let sizes: Vec<String> = trace.sizes.iter().map(|s| s.to_string()).collect();
        eprintln!(
            "trace: sizes {} ({} iterations)",
            sizes.join(" "),
            trace.iterations
        );
    }
}

fn render_intervals(opts: &Opts, intervals: &PersistenceIntervals) -> String {
    if opts.json {
        intervals_json(intervals, None) + "\n"
    } else {
        intervals.to_string()
    }
}

/// Persistence by both routes; `Ok(Err(diff))` on disagreement.
fn compare(
    complex: &ChainComplex,
) -> Result<(PersistenceIntervals, IterationTrace, Option<String>), Failure> {
    let report =
        persistence_pipeline_traced(complex).map_err(|e| Failure::internal(e.to_string()))?;
    let oracle = oracle_intervals(complex).map_err(|e| Failure::internal(e.to_string()))?;
    if report.intervals == oracle.intervals {
        return Ok((report.intervals, report.trace, None));
    }
    let mut diff = String::new();
    for i in report
        .intervals
        .iter()
        .filter(|i| !oracle.intervals.as_slice().contains(i))
    {
        let _ = writeln!(diff, "persist only: {i}");
    }
    for i in oracle
        .intervals
        .iter()
        .filter(|i| !report.intervals.as_slice().contains(i))
    {
        let _ = writeln!(diff, "reduce only:  {i}");
    }
    if diff.is_empty() {
        diff.push_str("interval multiplicities differ\n");
    }
    Ok((report.intervals, report.trace, Some(diff)))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Validate { file } => {
            let k = load(file, opts.format)?;
            Ok(format!("valid: {} cells\n", k.len()))
        }
        Command::Homology { file } => {
            let k = load(file, opts.format)?;
            let (betti, trace) =
                betti_numbers_traced(&k).map_err(|e| Failure::internal(e.to_string()))?;
            print_trace(opts, &trace);
            Ok(if opts.json {
                betti_json(&betti, None)
            } else {
                betti_text(&betti)
            } + "\n")
        }
        Command::Simplify { file } => {
            let k = load(file, opts.format)?;
            let (out, trace) =
                simplify_filtered_traced(&k).map_err(|e| Failure::internal(e.to_string()))?;
            print_trace(opts, &trace);
            Ok(write_boundary_format(&out))
        }
        Command::Persist { file } => {
            let k = load(file, opts.format)?;
            let report =
                persistence_pipeline_traced(&k).map_err(|e| Failure::internal(e.to_string()))?;
            print_trace(opts, &report.trace);
            Ok(render_intervals(opts, &report.intervals))
        }
        Command::Reduce { file } => {
            let k = load(file, opts.format)?;
            let out = oracle_intervals(&k).map_err(|e| Failure::internal(e.to_string()))?;
            Ok(render_intervals(opts, &out.intervals))
        }
        Command::Check {
            file: Some(file), ..
        } => {
            let k = load(file, opts.format)?;
            let (intervals, trace, diff) = compare(&k)?;
            print_trace(opts, &trace);
            match diff {
                None => Ok(render_intervals(opts, &intervals)),
                Some(diff) => Err(Failure::internal(format!("pipelines disagree\n{diff}"))),
            }
        }
        Command::Check { file: None, count } => {
            let Some(seed) = opts.seed else {
                return Err(Failure::input("check needs a file or --seed"));
            };
            let config = RandomConfig::default();
            for s in seed..seed.saturating_add(*count) {
                let k = random_complex(s, &config);
                if let (_, _, Some(diff)) = compare(&k)? {
                    return Err(Failure::internal(format!(
                        "pipelines disagree on random complex {s}\n{diff}{}",
                        write_boundary_format(&k)
                    )));
                }
            }
            Ok(format!("ok: {count} random complexes from seed {seed}\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {}", msg.trim_end());
            ExitCode::from(code)
        }
    }
}
