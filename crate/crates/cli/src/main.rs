//! `parks`: command-line front end for verification, solving, reduction and
//! counting of (c, r)-tree Parks puzzles.
//!
//! Exit codes: 0 success, 1 invalid certificate or no solution, 2 usage or
//! input error, 3 timeout or memory budget exhausted.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use parks_core::census::{census_4x4_contiguous, census_4x4_noncontiguous, CensusReport};
use parks_core::enumerate::{count_configs, list_configs, shuriken, EnumerateError, Side};
use parks_core::reduce::{parse_dimacs, reduce};
use parks_core::sequences::{a002464_explicit, a002464_recurrence, stirling2};
use parks_core::solver::{count_solutions, solve, SearchStats, SolveError, SolveOptions};
use parks_core::{verify, BoardDims, Certificate, Puzzle, Quota};

#[derive(Debug, Parser)]
#[command(
    name = "parks",
    version,
    about = "Verify, solve, reduce to and count (c, r)-tree Parks puzzles"
)]
struct Cli {
    /// Emit a JSON envelope {command, params, result, stats} instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a certificate against a puzzle; exit 0 iff it is a solution.
    Verify {
        puzzle: PathBuf,
        certificate: PathBuf,
    },
    /// Find solutions (two by default, enough to decide uniqueness).
    Solve {
        puzzle: PathBuf,
        /// Print the number of solutions instead of the solutions.
        #[arg(long)]
        count: bool,
        /// Stop after this many solutions.
        #[arg(long, default_value_t = 2, conflicts_with = "all")]
        cap: usize,
        /// Find every solution.
        #[arg(long)]
        all: bool,
        #[arg(long, value_name = "SECS")]
        timeout: Option<f64>,
    },
    /// Compile a DIMACS CNF formula into a Parks puzzle.
    Reduce {
        cnf: PathBuf,
        #[arg(long, value_parser = parse_quota)]
        quota: Quota,
        /// Output puzzle file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Where to write the occurrence-to-column map.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Count (or list) tree configurations of a board, ignoring parks.
    CountConfigs {
        #[arg(long, value_parser = parse_quota)]
        quota: Quota,
        #[arg(long, value_parser = parse_dims)]
        dims: BoardDims,
        /// Print the configurations themselves.
        #[arg(long)]
        list: bool,
        /// Refuse to list more than this many configurations.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[arg(long, value_name = "SECS")]
        timeout: Option<f64>,
    },
    /// Print one of the two minimal-board arrangements.
    Shuriken {
        #[arg(long, value_parser = parse_quota)]
        quota: Quota,
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// Terms of an integer sequence.
    Sequence {
        #[arg(value_enum)]
        name: SequenceName,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
    },
    /// Census of 4x4 one-tree puzzles with a unique solution.
    Census {
        #[arg(long, value_enum)]
        mode: CensusMode,
    },
    /// Stirling number of the second kind S(N, K).
    Stirling2 { n: usize, k: usize },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SequenceName {
    A002464,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Recurrence,
    Explicit,
    Enumerate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CensusMode {
    Contiguous,
    Analytic,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

/// What a command produced: text lines, the JSON result, and its exit code.
struct Report {
    command: &'static str,
    params: Value,
    text: String,
    result: Value,
    stats: Value,
    code: u8,
}

impl Report {
    fn new(command: &'static str, params: Value, text: String, result: Value) -> Self {
        Self {
            command,
            params,
            text,
            result,
            stats: Value::Null,
            code: 0,
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two numbers as A,B, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_quota(s: &str) -> Result<Quota, String> {
    let (c, r) = parse_pair(s)?;
    Quota::new(c, r).ok_or_else(|| "quotas must be positive".to_string())
}

fn parse_dims(s: &str) -> Result<BoardDims, String> {
    parse_pair(s).map(|(m, n)| BoardDims::new(m, n))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn input_error(path: &Path, e: impl ToString) -> CliError {
    CliError::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn load_puzzle(path: &Path) -> Result<Puzzle, CliError> {
    Puzzle::parse(&read(path)?).map_err(|e| input_error(path, e))
}

fn deadline(secs: Option<f64>) -> Result<Option<Duration>, CliError> {
    secs.map(|s| {
        Duration::try_from_secs_f64(s).map_err(|e| CliError::Usage(format!("--timeout: {e}")))
    })
    .transpose()
}

fn cells_json(cert: &Certificate) -> Value {
    cert.trees().iter().map(|c| json!([c.row, c.col])).collect()
}

fn stats_json(s: &SearchStats) -> Value {
    json!({
        "nodes_expanded": s.nodes_expanded,
        "propagation_steps": s.propagation_steps,
        "max_depth": s.max_depth,
        "solutions_found": s.solutions_found,
    })
}

fn quota_json(q: Quota) -> Value {
    json!([q.c(), q.r()])
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Verify {
            puzzle,
            certificate,
        } => {
            let p = load_puzzle(puzzle)?;
            let cert =
                Certificate::parse(&read(certificate)?).map_err(|e| input_error(certificate, e))?;
            let verdict = verify(&p, &cert);
            let lines: Vec<String> = verdict.violations.iter().map(ToString::to_string).collect();
            let text = if verdict.valid {
                "valid\n".to_string()
            } else {
                lines.join("\n") + "\n"
            };
            let mut report = Report::new(
                "verify",
                json!({ "puzzle": puzzle, "certificate": certificate }),
                text,
                json!({ "valid": verdict.valid, "violations": lines }),
            );
            report.code = if verdict.valid { 0 } else { 1 };
            Ok(report)
        }
        Command::Solve {
            puzzle,
            count,
            cap,
            all,
            timeout,
        } => {
            let p = load_puzzle(puzzle)?;
            let limit = deadline(*timeout)?;
            let params = json!({ "puzzle": puzzle, "count": count, "cap": (!all && !count).then_some(cap), "timeout": timeout });
            if *count {
                return match count_solutions(&p, limit) {
                    Ok((n, stats)) => {
                        let mut report = Report::new(
                            "solve",
                            params,
                            format!("{n}\n"),
                            json!({ "count": n.to_string() }),
                        );
                        report.stats = stats_json(&stats);
                        report.code = if n == 0u32.into() { 1 } else { 0 };
                        Ok(report)
                    }
                    Err(SolveError::DeadlineExceeded { partial }) => {
                        Err(CliError::Budget(format!(
                            "deadline exceeded after {} solutions and {} nodes",
                            partial.stats.solutions_found, partial.stats.nodes_expanded
                        )))
                    }
                };
            }
            let opts = SolveOptions {
                cap: (!all).then_some(*cap),
                deadline: limit,
            };
            let (outcome, timed_out) = match solve(&p, opts) {
                Ok(o) => (o, false),
                Err(SolveError::DeadlineExceeded { partial }) => (partial, true),
            };
            let text = outcome
                .solutions
                .iter()
                .map(Certificate::serialize)
                .collect::<Vec<_>>()
                .join("\n");
            let mut report = Report::new(
                "solve",
                params,
                text,
                json!({
                    "solutions": outcome.solutions.iter().map(cells_json).collect::<Vec<_>>(),
                    "complete": outcome.complete,
                }),
            );
            report.stats = stats_json(&outcome.stats);
            report.code = if timed_out {
                eprintln!(
                    "deadline exceeded; {} solutions found so far",
                    outcome.solutions.len()
                );
                3
            } else if outcome.solutions.is_empty() {
                1
            } else {
                0
            };
            Ok(report)
        }
        Command::Reduce {
            cnf,
            quota,
            output,
            map,
        } => {
            let phi = parse_dimacs(&read(cnf)?).map_err(|e| input_error(cnf, e))?;
            let (puzzle, rmap) = reduce(&phi, *quota);
            let text = puzzle.serialize();
            if let Some(path) = map {
                write(path, &rmap.serialize())?;
            }
            let dims = puzzle.dims();
            let shown = match output {
                Some(path) => {
                    write(path, &text)?;
                    format!("{} {}\n", dims.m, dims.n)
                }
                None => text,
            };
            Ok(Report::new(
                "reduce",
                json!({ "cnf": cnf, "quota": quota_json(*quota), "output": output, "map": map }),
                shown,
                json!({ "dims": [dims.m, dims.n], "parks": puzzle.num_parks() }),
            ))
        }
        Command::CountConfigs {
            quota,
            dims,
            list,
            cap,
            timeout,
        } => {
            let params =
                json!({ "quota": quota_json(*quota), "dims": [dims.m, dims.n], "list": list });
            let budget = |e: EnumerateError| CliError::Budget(e.to_string());
            if *list {
                let configs = list_configs(*quota, *dims, *cap).map_err(budget)?;
                let text = configs
                    .iter()
                    .map(Certificate::serialize)
                    .collect::<Vec<_>>()
                    .join("\n");
                let result = json!({ "count": configs.len().to_string(), "configs": configs.iter().map(cells_json).collect::<Vec<_>>() });
                Ok(Report::new("count-configs", params, text, result))
            } else {
                let counted = count_configs(*quota, *dims, deadline(*timeout)?).map_err(budget)?;
                Ok(Report::new(
                    "count-configs",
                    params,
                    format!("{}\n", counted.count),
                    json!({ "count": counted.count.to_string() }),
                ))
            }
        }
        Command::Shuriken { quota, side } => {
            let (side, name) = match side {
                SideArg::Left => (Side::Left, "left"),
                SideArg::Right => (Side::Right, "right"),
            };
            let cert = shuriken(*quota, side);
            Ok(Report::new(
                "shuriken",
                json!({ "quota": quota_json(*quota), "side": name }),
                cert.serialize(),
                json!({ "trees": cells_json(&cert) }),
            ))
        }
        Command::Sequence {
            name: SequenceName::A002464,
            n,
            method,
        } => {
            let (value, method_name) = match method {
                Method::Recurrence => (a002464_recurrence(*n).to_string(), "recurrence"),
                Method::Explicit => (a002464_explicit(*n).to_string(), "explicit"),
                Method::Enumerate => {
                    let one = Quota::new(1, 1).expect("positive");
                    let counted = count_configs(one, BoardDims::new(*n, *n), None)
                        .map_err(|e| CliError::Budget(e.to_string()))?;
                    (counted.count.to_string(), "enumerate")
                }
            };
            Ok(Report::new(
                "sequence",
                json!({ "name": "a002464", "n": n, "method": method_name }),
                format!("{value}\n"),
                json!({ "value": value }),
            ))
        }
        Command::Census { mode } => {
            let (report, mode_name) = match mode {
                CensusMode::Contiguous => (census_4x4_contiguous(), "contiguous"),
                CensusMode::Analytic => (census_4x4_noncontiguous(), "analytic"),
            };
            let fields = census_fields(&report);
            let text: String = fields.iter().map(|(k, v)| format!("{k} {v}\n")).collect();
            let result: serde_json::Map<String, Value> = fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), Value::String(v)))
                .collect();
            Ok(Report::new(
                "census",
                json!({ "mode": mode_name }),
                text,
                Value::Object(result),
            ))
        }
        Command::Stirling2 { n, k } => {
            let value = stirling2(*n, *k).to_string();
            Ok(Report::new(
                "stirling2",
                json!({ "n": n, "k": k }),
                format!("{value}\n"),
                json!({ "value": value }),
            ))
        }
    }
}

fn census_fields(r: &CensusReport) -> Vec<(&'static str, String)> {
    [
        ("contiguous_one_sided", &r.contiguous_one_sided),
        ("contiguous_unique_total", &r.contiguous_unique_total),
        ("noncontiguous_one_sided", &r.noncontiguous_one_sided),
        ("noncontiguous_unique_total", &r.noncontiguous_unique_total),
        (
            "at_least_one_solution_total",
            &r.at_least_one_solution_total,
        ),
    ]
    .into_iter()
    .filter_map(|(k, v)| v.as_ref().map(|v| (k, v.to_string())))
    .collect()
}

/// Caps the rayon pool at `PARKS_THREADS` threads; 0 or unset means auto.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PARKS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("PARKS_THREADS must be a number, got {raw:?}")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| run(&cli));
    match outcome {
        Ok(report) => {
            if cli.json {
                let envelope = json!({
                    "command": report.command,
                    "params": report.params,
                    "result": report.result,
                    "stats": report.stats,
                });
                println!("{envelope}");
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("parks: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
