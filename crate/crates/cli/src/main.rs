//! `chorec`: run, project, amend and check minimal choreographies, and
//! compile partial recursive functions to them.
//!
//! Exit codes: 0 success, 1 bad input (parse errors, conditionals given to
//! the termination decider, stuck runs), 2 fuel exhausted, 3 not projectable,
//! 4 a check failed.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use chorec_core::correspondence::CorrespondenceReport;
use chorec_core::gen::{gen_corpus, CorpusKind};
use chorec_core::mc::validate;
use chorec_core::recfun::{encode, encode_parallel, EvalError, ImplementError};
use chorec_core::sem::{decide_termination_condfree, run};
use chorec_core::sp::{net_run, print_network};
use chorec_core::{
    amend, check_correspondence, epp, implement_function, oracle_eval, parse_choreography, parse_network,
    parse_recfun, Choreography, Mode, Outcome, ProcName, ProcState, RecFun, Scheduler, Trace, Value,
};

#[derive(Parser)]
#[command(name = "chorec", version, about = "Minimal choreographies: run, project, amend, compile")]
struct Cli {
    /// Maximum number of reduction steps.
    #[arg(long, global = true, env = "CHOREC_FUEL", default_value_t = 10_000)]
    fuel: usize,

    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    emit: Emit,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
    Sp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchedulerKind {
    Leftmost,
    Random,
    Exhaustive,
}

#[derive(Subcommand)]
enum Command {
    /// Run a `.mc` choreography or a `.sp` network.
    Run {
        file: PathBuf,
        #[arg(long, value_parser = parse_state, default_value = "")]
        state: ProcState,
        #[arg(long, value_enum, default_value_t = SchedulerKind::Leftmost)]
        scheduler: SchedulerKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Step bound for the exhaustive scheduler.
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// Print the endpoint projection of a choreography.
    Project {
        file: PathBuf,
        #[arg(long, value_parser = parse_state, default_value = "")]
        state: ProcState,
        /// Insert selections first.
        #[arg(long)]
        amend: bool,
    },
    /// Print the choreography with the selections needed for projection.
    Amend { file: PathBuf },
    /// Compile a `.rf` function to a choreography.
    CompileFn {
        file: PathBuf,
        /// Input processes, comma separated.
        #[arg(short = 'i', long, value_delimiter = ',', required = true)]
        inputs: Vec<ProcName>,
        #[arg(short = 'o', long)]
        output: ProcName,
        /// Evaluate the arguments of compositions concurrently.
        #[arg(long)]
        parallel: bool,
        /// Initial values used with `--emit sp`.
        #[arg(long, value_parser = parse_state, default_value = "")]
        state: ProcState,
    },
    /// Evaluate a `.rf` function by running its compilation, checked against
    /// a direct interpreter.
    EvalFn {
        file: PathBuf,
        args: Vec<Value>,
        #[arg(long, default_value_t = Mode::Choreography)]
        mode: Mode,
    },
    /// Compare a choreography step by step with its projection.
    CheckCorrespondence {
        file: PathBuf,
        #[arg(long, value_parser = parse_state, default_value = "")]
        state: ProcState,
        #[arg(long)]
        amend: bool,
        #[arg(long, default_value_t = 50)]
        depth: usize,
    },
    /// Decide termination of a conditional-free choreography.
    DecideTermination { file: PathBuf },
    /// Print a seeded corpus of random terms.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value = "closed")]
        kind: CorpusKind,
    },
}

fn parse_state(s: &str) -> Result<ProcState, String> {
    ProcState::parse_bindings(s)
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("fuel exhausted after {0} steps")]
    Fuel(usize),
    #[error("{0}")]
    Unprojectable(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Fuel(_) => 2,
            CliError::Unprojectable(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Run { file, state, scheduler, seed, depth } => {
            let scheduler = match scheduler {
                SchedulerKind::Leftmost => Scheduler::Leftmost,
                SchedulerKind::Random => Scheduler::Random(*seed),
                SchedulerKind::Exhaustive => Scheduler::Exhaustive(*depth),
            };
            cmd_run(cli, file, state, scheduler)
        }
        Command::Project { file, state, amend } => cmd_project(cli, file, state, *amend),
        Command::Amend { file } => {
            let c = amend(&read_choreography(file)?);
            match cli.emit {
                Emit::Json => println!("{}", json!({"kind": "choreography", "choreography": c.to_string()})),
                _ => println!("{c}"),
            }
            Ok(())
        }
        Command::CompileFn { file, inputs, output, parallel, state } => {
            cmd_compile_fn(cli, file, inputs, output, *parallel, state)
        }
        Command::EvalFn { file, args, mode } => cmd_eval_fn(cli, file, args, *mode),
        Command::CheckCorrespondence { file, state, amend: do_amend, depth } => {
            let c = read_choreography(file)?;
            let c = if *do_amend { amend(&c) } else { c };
            let report = check_correspondence(&c, state, *depth, cli.fuel)
                .map_err(|e| CliError::Unprojectable(format!("{e} (try --amend)")))?;
            print_report(cli, &report);
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Check("correspondence check failed".into()))
            }
        }
        Command::DecideTermination { file } => {
            let verdict =
                decide_termination_condfree(&read_choreography(file)?).map_err(|e| CliError::Input(e.to_string()))?;
            match cli.emit {
                Emit::Json => println!("{}", json!({"kind": "termination", "verdict": verdict})),
                _ => println!("{verdict}"),
            }
            Ok(())
        }
        Command::Gen { seed, count, kind } => {
            for (i, item) in gen_corpus(*seed, *count, *kind).iter().enumerate() {
                match cli.emit {
                    Emit::Json => println!("{}", json!({"kind": "item", "index": i, "seed": seed, "text": item.to_string()})),
                    _ => println!("{item}"),
                }
            }
            Ok(())
        }
    }
}

fn read_source(file: &Path) -> Result<String, CliError> {
    if file.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(file).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))
}

fn read_choreography(file: &Path) -> Result<Choreography, CliError> {
    let c = parse_choreography(&read_source(file)?).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    if let Ok(lints) = validate(&c) {
        for lint in lints {
            eprintln!("{}: {lint}", file.display());
        }
    }
    Ok(c)
}

fn read_recfun(file: &Path) -> Result<RecFun, CliError> {
    parse_recfun(&read_source(file)?).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))
}

fn is_network_file(file: &Path) -> bool {
    file.extension().is_some_and(|e| e == "sp")
}

fn reject_sp(cli: &Cli, command: &str) -> CliResult {
    if cli.emit == Emit::Sp {
        return Err(CliError::Input(format!("--emit sp does not apply to `{command}`")));
    }
    Ok(())
}

fn cmd_run(cli: &Cli, file: &Path, state: &ProcState, scheduler: Scheduler) -> CliResult {
    reject_sp(cli, "run")?;
    let outcomes: Vec<(Outcome, usize)> = if is_network_file(file) {
        if state.iter().next().is_some() {
            return Err(CliError::Input("--state does not apply to networks; values are part of the .sp file".into()));
        }
        let n = parse_network(&read_source(file)?).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
        print_traces(cli, &net_run(&n, cli.fuel, scheduler))
    } else {
        let c = read_choreography(file)?;
        print_traces(cli, &run(&c, state, cli.fuel, scheduler))
    };
    if let Some((_, steps)) = outcomes.iter().find(|(o, _)| *o == Outcome::Stuck) {
        return Err(CliError::Input(format!("stuck after {steps} steps")));
    }
    if let Some((_, steps)) = outcomes.iter().find(|(o, _)| *o == Outcome::FuelExhausted) {
        return Err(CliError::Fuel(*steps));
    }
    Ok(())
}

fn print_traces<C: std::fmt::Display>(cli: &Cli, traces: &[Trace<C>]) -> Vec<(Outcome, usize)> {
    let several = traces.len() > 1;
    for (i, t) in traces.iter().enumerate() {
        match cli.emit {
            Emit::Json => {
                if several {
                    println!("{}", json!({"kind": "trace", "index": i}));
                }
                for line in t.to_json_lines() {
                    println!("{line}");
                }
            }
            _ => {
                if several {
                    println!("-- trace {i}");
                }
                print!("{}", t.to_text());
            }
        }
    }
    traces.iter().map(|t| (t.outcome, t.len())).collect()
}

fn cmd_project(cli: &Cli, file: &Path, state: &ProcState, do_amend: bool) -> CliResult {
    let c = read_choreography(file)?;
    let c = if do_amend { amend(&c) } else { c };
    match epp(&c, state) {
        Ok(n) => {
            match cli.emit {
                Emit::Json => println!("{}", json!({"kind": "network", "network": print_network(&n)})),
                _ => println!("{}", print_network(&n)),
            }
            Ok(())
        }
        Err(e) => {
            if cli.emit == Emit::Json {
                for p in &e.points {
                    let mut record = p.to_json();
                    record["kind"] = json!("unmergeable");
                    println!("{record}");
                }
            } else {
                for p in &e.points {
                    eprintln!("{p}");
                }
            }
            Err(CliError::Unprojectable(format!("not projectable ({} unmergeable points; try --amend)", e.points.len())))
        }
    }
}

fn cmd_compile_fn(
    cli: &Cli,
    file: &Path,
    inputs: &[ProcName],
    output: &ProcName,
    parallel: bool,
    state: &ProcState,
) -> CliResult {
    let f = read_recfun(file)?;
    let c = if parallel { encode_parallel(&f, inputs, output, 0) } else { encode(&f, inputs, output, 0) }
        .map_err(|e| CliError::Input(e.to_string()))?;
    match cli.emit {
        Emit::Text => println!("{c}"),
        Emit::Json => println!("{}", json!({"kind": "choreography", "function": f.to_string(), "choreography": c.to_string()})),
        Emit::Sp => {
            let n = epp(&amend(&c), state).map_err(|e| CliError::Unprojectable(e.to_string()))?;
            println!("{}", print_network(&n));
        }
    }
    Ok(())
}

fn cmd_eval_fn(cli: &Cli, file: &Path, args: &[Value], mode: Mode) -> CliResult {
    reject_sp(cli, "eval-fn")?;
    let f = read_recfun(file)?;
    if args.len() != f.arity() {
        return Err(CliError::Input(format!("`{f}` takes {} arguments, got {}", f.arity(), args.len())));
    }
    let expected = oracle_eval(&f, args, cli.fuel);
    let got = implement_function(&f, args, cli.fuel, mode);
    let show = |r: Result<String, String>| r.unwrap_or_else(|e| format!("<{e}>"));
    let expected_text = show(expected.as_ref().map(Value::to_string).map_err(EvalError::to_string));
    let got_text = show(got.as_ref().map(Value::to_string).map_err(ImplementError::to_string));
    match cli.emit {
        Emit::Json => {
            let args: Vec<String> = args.iter().map(Value::to_string).collect();
            println!(
                "{}",
                json!({"kind": "eval", "function": f.to_string(), "mode": mode.to_string(), "args": args,
                       "oracle": expected_text, "compiled": got_text})
            );
        }
        _ => match &got {
            Ok(v) => println!("{v}"),
            Err(_) => println!("{got_text}"),
        },
    }
    match (&expected, &got) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Err(EvalError::FuelExhausted), Err(ImplementError::FuelExhausted)) => Err(CliError::Fuel(cli.fuel)),
        _ => Err(CliError::Check(format!("compiled {mode} run gave {got_text}, interpreter gave {expected_text}"))),
    }
}

fn print_report(cli: &Cli, report: &CorrespondenceReport) {
    if cli.emit == Emit::Json {
        let mut record = serde_json::to_value(report).expect("report serializes");
        record["kind"] = json!("correspondence");
        println!("{record}");
        return;
    }
    println!(
        "{}: {} steps checked over {} configurations{}",
        if report.passed() { "pass" } else { "fail" },
        report.steps_checked,
        report.configurations,
        if report.truncated { " (truncated)" } else { "" }
    );
    for f in report.completeness_failures.iter().chain(&report.soundness_failures) {
        println!("  step {} [{}]: {}", f.step, f.direction, f.diagnostic);
    }
}

