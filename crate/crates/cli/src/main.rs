//! `swapreach` command-line front end.
//!
//! Exit codes: 0 for yes (or success), 1 for no, 2 for errors.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use swapreach::dynamics::{greedy_swap, verify_trace, GreedyFailure, GreedyOutcome, Swap};
use swapreach::generate::{generate, GenMode};
use swapreach::geometry::CandidateTable;
use swapreach::io::{self, IoError};
use swapreach::oracle::{self, OracleAnswer};
use swapreach::{reduce_ro_to_ra, solve_observed, Instance, Selection};

#[derive(Parser)]
#[command(name = "swapreach", version, about = "Reachable Assignment on cycles")]
struct Cli {
    /// Seed for generators and benchmarks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Read and write agent and object labels starting at 1.
    #[arg(long, global = true)]
    one_indexed: bool,
    /// Directory receiving one DIMACS file per examined guess (`solve` only).
    #[arg(long, global = true, value_name = "DIR")]
    emit_cnf: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleMode {
    Ra,
    Ro,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Random,
    YesGuaranteed,
    Perturbed,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a cycle instance and print a witness trace.
    Solve {
        /// Instance file, or `-` for stdin.
        input: PathBuf,
    },
    /// Exhaustive search over reachable assignments.
    Oracle {
        input: PathBuf,
        /// Largest instance the search accepts.
        #[arg(long, default_value_t = oracle::DEFAULT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = OracleMode::Ra)]
        mode: OracleMode,
    },
    /// Simulate one direction selection.
    Greedy {
        input: PathBuf,
        /// One character per object: 1 clockwise, 0 counterclockwise.
        #[arg(long)]
        selection: String,
    },
    /// Check that a swap trace leads from the initial to the target assignment.
    Verify { input: PathBuf, trace: PathBuf },
    /// Dump the candidate table of a cycle instance.
    Inspect { input: PathBuf },
    /// Generate a random cycle instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = GenKind::Random)]
        mode: GenKind,
    },
    /// Turn a Reachable Object instance on a complete graph into Reachable Assignment.
    Reduce { input: PathBuf },
    /// Time the solver on generated instances and print CSV.
    Bench {
        /// Comma-separated instance sizes, each at least 3.
        #[arg(long, default_value = "100,200,400")]
        sizes: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
}

enum Failure {
    Usage(String),
    Io(IoError),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Io(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(s) => f.write_str(s),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

fn fail(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(msg.to_string())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| fail(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path, one: bool) -> Result<Instance, Failure> {
    let text = read_input(path)?;
    io::parse_instance(&text, one).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, value: &Value, text: impl FnOnce() -> String) {
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("json")),
        Format::Text => print!("{}", text()),
    }
}

fn verdict(yes: bool) -> u8 {
    if yes {
        0
    } else {
        1
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let one = cli.one_indexed;
    let off = usize::from(one);
    match &cli.command {
        Command::Solve { input } => {
            let inst = load(input, one)?;
            if let Some(dir) = &cli.emit_cnf {
                fs::create_dir_all(dir).map_err(|e| fail(format!("{}: {e}", dir.display())))?;
            }
            let mut write_err = None;
            let sol = solve_observed(&inst, |edge, f| {
                if let Some(dir) = &cli.emit_cnf {
                    let path = dir.join(format!("edge_{}.cnf", edge + off));
                    if let Err(e) = fs::write(&path, f.to_dimacs()) {
                        write_err.get_or_insert(format!("{}: {e}", path.display()));
                    }
                }
            })
            .map_err(fail)?;
            if let Some(e) = write_err {
                return Err(fail(e));
            }
            let value = io::solution_to_json(&sol, one);
            emit(cli, &value, || {
                let mut s = format!("answer: {}\n", value["answer"].as_str().unwrap());
                if let Some((a, b)) = sol.first_swap_edge {
                    s += &format!("first swap: {} {}\n", a.0 + off, b.0 + off);
                }
                if let Some(sel) = &sol.selection {
                    s += &format!("selection: {sel}\n");
                }
                if let Some(trace) = &sol.trace {
                    s += &trace_text(trace, off);
                }
                s += &format!("guesses examined: {}\n", sol.guesses_examined);
                s
            });
            Ok(verdict(sol.reachable))
        }
        Command::Oracle { input, cap, mode } => {
            let text = read_input(input)?;
            let answer = match mode {
                OracleMode::Ra => {
                    let inst = io::parse_instance(&text, one)?;
                    oracle::oracle_reachable_assignment(&inst, *cap)
                }
                OracleMode::Ro => {
                    let ro = io::parse_ro_instance(&text, one)?;
                    oracle::oracle_reachable_object(&ro.instance, ro.agent, ro.object, *cap)
                }
            }
            .map_err(fail)?;
            let (yes, trace) = match &answer {
                OracleAnswer::Yes(t) => (true, Some(t)),
                OracleAnswer::No => (false, None),
            };
            let value = json!({
                "answer": if yes { "yes" } else { "no" },
                "trace": trace.map(|t| io::trace_to_json(t, one)),
            });
            emit(cli, &value, || {
                let mut s = format!("answer: {}\n", if yes { "yes" } else { "no" });
                if let Some(t) = trace {
                    s += &trace_text(t, off);
                }
                s
            });
            Ok(verdict(yes))
        }
        Command::Greedy { input, selection } => {
            let inst = load(input, one)?;
            if !inst.is_cycle() {
                return Err(fail("greedy runs on cycle instances only"));
            }
            let inst = inst.apply_rule_1().map_err(fail)?;
            let bits = selection
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(fail(format!("selection must be 0s and 1s, got {c:?}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if bits.len() != inst.n() {
                return Err(fail(format!(
                    "selection has {} entries for {} objects",
                    bits.len(),
                    inst.n()
                )));
            }
            let outcome = greedy_swap(&inst, &Selection::from_bits(&bits));
            let (value, text) = match &outcome {
                GreedyOutcome::Reached(t) => (
                    json!({"reached": true, "trace": io::trace_to_json(&t.swaps, one)}),
                    format!("reached\n{}", trace_text(&t.swaps, off)),
                ),
                GreedyOutcome::Failed(f) => {
                    let why = failure_text(f, off);
                    (json!({"reached": false, "failure": why}), format!("failed: {why}\n"))
                }
            };
            emit(cli, &value, || text);
            Ok(verdict(outcome.is_reached()))
        }
        Command::Verify { input, trace } => {
            let inst = load(input, one)?;
            let swaps = io::parse_trace(&read_input(trace)?, one)?;
            let result = verify_trace(&inst, &swaps);
            let value = match &result {
                Ok(()) => json!({"valid": true}),
                Err(e) => json!({"valid": false, "error": e.to_string()}),
            };
            emit(cli, &value, || match &result {
                Ok(()) => "valid\n".into(),
                Err(e) => format!("invalid: {e}\n"),
            });
            Ok(verdict(result.is_ok()))
        }
        Command::Inspect { input } => {
            let inst = load(input, one)?;
            if !inst.is_cycle() {
                return Err(fail("inspect runs on cycle instances only"));
            }
            let inst = inst.apply_rule_1().map_err(fail)?;
            let table = CandidateTable::build(&inst).map_err(fail)?;
            let value = table.to_json(one);
            emit(cli, &value, || {
                format!(
                    "{} objects, {} candidate entries\n{}\n",
                    inst.n(),
                    table.total_size(),
                    serde_json::to_string(&value).expect("json")
                )
            });
            Ok(0)
        }
        Command::Gen { n, mode } => {
            if *n < 3 {
                return Err(fail("n must be at least 3"));
            }
            let mode = match mode {
                GenKind::Random => GenMode::Random,
                GenKind::YesGuaranteed => GenMode::YesGuaranteed,
                GenKind::Perturbed => GenMode::Perturbed,
            };
            let inst = generate(*n, mode, cli.seed);
            println!("{}", io::instance_to_json(&inst, one));
            Ok(0)
        }
        Command::Reduce { input } => {
            let ro = io::parse_ro_instance(&read_input(input)?, one)?;
            let ra = reduce_ro_to_ra(&ro).map_err(fail)?;
            println!("{}", io::instance_to_json(&ra, one));
            Ok(0)
        }
        Command::Bench { sizes, trials } => {
            let sizes = sizes
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|e| fail(format!("size {s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(&bad) = sizes.iter().find(|&&s| s < 3) {
                return Err(fail(format!("size {bad} is below 3")));
            }
            if *trials == 0 {
                return Err(fail("trials must be positive"));
            }
            println!("size,mode,median_ms,p90_ms");
            for &n in &sizes {
                for (name, mode) in [("yes-guaranteed", GenMode::YesGuaranteed), ("random", GenMode::Random)] {
                    let (median, p90) = bench(n, mode, *trials, cli.seed);
                    println!("{n},{name},{median:.3},{p90:.3}");
                }
            }
            Ok(0)
        }
    }
}

/// Median and 90th percentile (nearest rank) of solve time in milliseconds.
fn bench(n: usize, mode: GenMode, trials: usize, seed: u64) -> (f64, f64) {
    let mut times: Vec<f64> = (0..trials)
        .map(|t| {
            let inst = generate(n, mode, seed.wrapping_mul(1_000_003).wrapping_add(t as u64));
            let start = Instant::now();
            let _ = swapreach::solve(&inst);
            start.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    times.sort_by(f64::total_cmp);
    let median = times[(times.len() - 1) / 2];
    let p90 = times[(times.len() * 9).div_ceil(10) - 1];
    (median, p90)
}

fn trace_text(trace: &[Swap], off: usize) -> String {
    let mut s = format!("trace ({} swaps):\n", trace.len());
    for sw in trace {
        s += &format!(
            "  agents {} {} exchange objects {} {}\n",
            sw.a.0 + off,
            sw.b.0 + off,
            sw.oa.0 + off,
            sw.ob.0 + off
        );
    }
    s
}

fn failure_text(f: &GreedyFailure, off: usize) -> String {
    match f {
        GreedyFailure::AllSameDirection => "every object has the same direction".into(),
        GreedyFailure::IrrationalMeeting { p, q, edge } => format!(
            "objects {} and {} meet on edge {} but the swap is irrational",
            p.0 + off,
            q.0 + off,
            edge + off
        ),
        GreedyFailure::StalledShortOfTarget => "no pair in swap position before the target".into(),
    }
}
