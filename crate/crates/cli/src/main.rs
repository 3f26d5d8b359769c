//! `gmrs`: generate, verify, classify, and oracle-check magic rectangle
//! sets over finite abelian groups.
//!
//! Exit codes are part of the contract. `generate`: 0 constructed, 1
//! infeasible, 2 usage or internal error, 3 feasible but not constructed.
//! `verify`: 0 ok, 1 failed, 2 unreadable input. `feasible`: 0 feasible, 1
//! infeasible, 2 usage. `oracle`: 0 classifier and search agree, 1 they
//! disagree, 2 instance over the exhaustive cap.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gmrs::abelian::Group;
use gmrs::cache::Cache;
use gmrs::engine::{build, feasible, BuildOptions, BuildResult, TraceNode, DEFAULT_SYNTH_CAP};
use gmrs::model::RectSet;
use gmrs::search::{prove_nonexistence, SearchBudget, DEFAULT_EXHAUSTIVE_CAP, DEFAULT_MAX_NODES};
use gmrs::Error;

#[derive(Parser)]
#[command(name = "gmrs", version, about = "Magic rectangle sets over finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a verified set, or report why none exists.
    Generate(GenerateArgs),
    /// Re-check a stored JSON set document.
    Verify(VerifyArgs),
    /// Classify an instance by the existence conditions.
    Feasible(InstanceArgs),
    /// Exhaustively confirm the classifier on a small instance.
    Oracle(InstanceArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Group spec, e.g. Z9+Z2+Z8.
    #[arg(long)]
    group: String,
    /// Rows per array.
    #[arg(long)]
    rows: usize,
    /// Columns per array.
    #[arg(long)]
    cols: usize,
    /// Number of arrays; defaults to |G| / (rows * cols).
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Require zero row and column sums.
    #[arg(long)]
    zero_sum: bool,
    /// Write here instead of stdout (atomically).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also emit the construction trace: to `<out>.trace.json`, or to
    /// stderr when writing to stdout.
    #[arg(long)]
    trace: bool,
    /// Cache directory (default: $MRS_CACHE_DIR, then ./.mrs-cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Search time limit in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Search node limit.
    #[arg(long)]
    max_nodes: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON set document.
    file: PathBuf,
    /// Additionally require zero row and column sums.
    #[arg(long)]
    zero_sum: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Canonical JSON document (same layout `verify` reads).
    Json,
    /// One line per (array, row); cell coordinates semicolon-joined.
    Csv,
    /// Aligned coordinate tuples for human diffing.
    Pretty,
}

fn main() {
    std::process::exit(run(Cli::parse()));
}

fn run(cli: Cli) -> i32 {
    let outcome = match cli.cmd {
        Cmd::Generate(args) => cmd_generate(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Feasible(args) => cmd_feasible(args),
        Cmd::Oracle(args) => cmd_oracle(args),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        2
    })
}

/// Resolves the group and full shape, defaulting `count`.
fn resolve(instance: &InstanceArgs) -> Result<(Group, usize, usize, usize), Error> {
    let group = Group::parse(&instance.group)?;
    let (a, b) = (instance.rows, instance.cols);
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("rows and cols must be positive".into()));
    }
    let order = group.order();
    let cells = (a as u128) * (b as u128);
    if order as u128 % cells != 0 {
        return Err(Error::InvalidArgument(format!(
            "{a}x{b} arrays cannot tile {group} (order {order})"
        )));
    }
    let c = match instance.count {
        Some(c) => c,
        None => (order as u128 / cells) as usize,
    };
    if (c as u128) * cells != order as u128 {
        return Err(Error::InvalidArgument(format!(
            "{c} arrays of {a}x{b} hold {} entries, but {group} has {order} elements",
            cells * c as u128
        )));
    }
    Ok((group, a, b, c))
}

fn cmd_generate(args: GenerateArgs) -> Result<i32, Error> {
    let (group, a, b, c) = resolve(&args.instance)?;
    let cache = Cache::default_dir(args.cache_dir.as_deref());
    let opts = BuildOptions {
        budget: SearchBudget {
            max_nodes: args.max_nodes.unwrap_or(DEFAULT_MAX_NODES),
            time_limit: args.timeout.map(Duration::from_secs),
        },
        synth_cap: DEFAULT_SYNTH_CAP,
        zero_sum: args.zero_sum,
    };
    match build(&group, a, b, c, &cache, &opts)? {
        BuildResult::Constructed { set, trace } => {
            let report = if args.zero_sum { set.verify_star() } else { set.verify() };
            if !report.ok {
                return Err(Error::VerifyGate("refusing to emit an unverified set".to_string()));
            }
            emit(&render(&set, args.format)?, args.out.as_deref())?;
            if args.trace {
                emit_trace(&trace, args.out.as_deref())?;
            }
            Ok(0)
        }
        BuildResult::Infeasible(verdict) => {
            println!("{}", serde_json::to_string(&verdict)?);
            eprintln!("infeasible: {}", verdict.reason);
            Ok(1)
        }
        BuildResult::NotConstructed { verdict, reason } => {
            eprintln!("feasible ({}), but not constructed: {reason}", verdict.reason);
            Ok(3)
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, Error> {
    let text = std::fs::read_to_string(&args.file)?;
    let set = RectSet::from_json(&text)?;
    let report = if args.zero_sum { set.verify_star() } else { set.verify() };
    if report.ok {
        println!(
            "ok: {} arrays of {}x{} over {}, row sum {:?}, column sum {:?}",
            set.c, set.a, set.b, set.group, set.gamma, set.delta
        );
        Ok(0)
    } else {
        for failure in &report.failures {
            println!("{failure}");
        }
        Ok(1)
    }
}

fn cmd_feasible(args: InstanceArgs) -> Result<i32, Error> {
    let (group, a, b, _) = resolve(&args)?;
    let verdict = feasible(&group, a, b)?;
    println!("{}", serde_json::to_string(&verdict)?);
    Ok(if verdict.feasible { 0 } else { 1 })
}

fn cmd_oracle(args: InstanceArgs) -> Result<i32, Error> {
    let (group, a, b, c) = resolve(&args)?;
    let report = prove_nonexistence(&group, a, b, c, DEFAULT_EXHAUSTIVE_CAP)?;
    let verdict = feasible(&group, a, b)?;
    let agree = verdict.feasible != report.nonexistent;
    println!(
        "oracle: {} after {} nodes; classifier: {} ({}); {}",
        if report.nonexistent { "nonexistent" } else { "exists" },
        report.nodes,
        if verdict.feasible { "feasible" } else { "infeasible" },
        verdict.reason,
        if agree { "agreement" } else { "DISAGREEMENT" }
    );
    Ok(if agree { 0 } else { 1 })
}

fn render(set: &RectSet, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => set.to_json(),
        Format::Csv => {
            let mut out = String::new();
            for (k, array) in set.arrays.iter().enumerate() {
                for i in 0..set.a {
                    write!(out, "{k},{i}").expect("string write");
                    for j in 0..set.b {
                        let coords: Vec<String> =
                            array.entry(i, j).coords().iter().map(u64::to_string).collect();
                        write!(out, ",{}", coords.join(";")).expect("string write");
                    }
                    out.push('\n');
                }
            }
            Ok(out)
        }
        Format::Pretty => {
            let mut out = String::new();
            let fmt_tuple = |e: &gmrs::abelian::Element| format!("{e:?}");
            let width = set
                .arrays
                .iter()
                .flat_map(|arr| (0..set.a).flat_map(move |i| arr.row(i)))
                .map(|e| fmt_tuple(e).len())
                .max()
                .unwrap_or(0);
            writeln!(
                out,
                "{} over {}: {} arrays of {}x{}, row sum {:?}, column sum {:?}",
                if set.hole.is_some() { "incomplete set" } else { "set" },
                set.group,
                set.c,
                set.a,
                set.b,
                set.gamma,
                set.delta
            )
            .expect("string write");
            for (k, array) in set.arrays.iter().enumerate() {
                writeln!(out, "array {k}:").expect("string write");
                for i in 0..set.a {
                    let cells: Vec<String> =
                        array.row(i).iter().map(|e| format!("{:>width$}", fmt_tuple(e))).collect();
                    writeln!(out, "  {}", cells.join(" ")).expect("string write");
                }
            }
            Ok(out)
        }
    }
}

fn emit(payload: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => write_atomic(path, payload),
        None => {
            print!("{payload}");
            if !payload.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn emit_trace(trace: &TraceNode, out: Option<&Path>) -> Result<(), Error> {
    let payload = serde_json::to_string_pretty(trace)?;
    match out {
        Some(path) => {
            let mut name = path.as_os_str().to_owned();
            name.push(".trace.json");
            write_atomic(Path::new(&name), &payload)
        }
        None => {
            eprintln!("{payload}");
            Ok(())
        }
    }
}

/// Writes via a sibling temp file and rename, so readers never see a
/// partial document.
fn write_atomic(path: &Path, payload: &str) -> Result<(), Error> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, payload)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
