//! Command-line interface.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use lcstrs_core::processors::Verdict;
use lcstrs_core::sdp::Goal;
use lcstrs_core::solver::SolverConfig;
use lcstrs_core::trs::{check_extension, ExtensionVerdict};

use crate::driver::{analyze, write_trace};
use crate::parser::{parse, parse_extension, InputFile};
use crate::printer::print_file;
use crate::render::{render, Format};
use crate::smt::process_solver;

pub const EXIT_YES: u8 = 0;
pub const EXIT_MAYBE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Environment variable naming the solver when `--solver` is absent.
pub const SOLVER_ENV: &str = "LCTRS_SMT";

#[derive(Parser, Debug)]
#[command(name = "lcstrs", version, about = "Termination and public computability of logically constrained STRSs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GoalArg {
    Termination,
    Public,
}

impl From<GoalArg> for Goal {
    fn from(g: GoalArg) -> Goal {
        match g {
            GoalArg::Termination => Goal::Termination,
            GoalArg::Public => Goal::Public,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prove termination or public computability; prints YES or MAYBE.
    Analyze(AnalyzeArgs),
    /// Parse a file and print it in normal form.
    Fmt {
        file: PathBuf,
    },
}

#[derive(clap::Args, Debug)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    /// Overrides the `goal:` directive of the file.
    #[arg(long, value_enum)]
    pub goal: Option<GoalArg>,
    /// Solver command; defaults to $LCTRS_SMT, then `z3`.
    #[arg(long)]
    pub solver: Option<String>,
    /// Wall-clock limit for the whole analysis, in milliseconds.
    #[arg(long, default_value_t = 60_000)]
    pub timeout: u64,
    /// Limit per solver query, in milliseconds.
    #[arg(long, default_value_t = SolverConfig::DEFAULT_TIMEOUT_MS)]
    pub smt_timeout: u64,
    /// Write a per-node trace and solver statistics here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write every solver exchange here.
    #[arg(long)]
    pub log_smt: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// A system to check as a hierarchical extension of the input.
    #[arg(long)]
    pub extend: Option<PathBuf>,
}

/// What a run printed and how it ends.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Output {
    fn input_error(stderr: String) -> Output {
        Output { stdout: String::new(), stderr, code: EXIT_INPUT }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}\n", path.display()))
}

fn load(path: &Path) -> Result<InputFile, String> {
    let text = read(path)?;
    parse(&text).map_err(|e| e.report(&path.display().to_string()))
}

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::Yes => EXIT_YES,
        Verdict::Maybe => EXIT_MAYBE,
    }
}

pub fn run_analyze(args: &AnalyzeArgs) -> Output {
    let file = match load(&args.file) {
        Ok(f) => f,
        Err(e) => return Output::input_error(e),
    };
    let mut stderr = String::new();
    if let Some(ext_path) = &args.extend {
        let ext = match read(ext_path)
            .and_then(|t| parse_extension(&t, &file.system).map_err(|e| e.report(&ext_path.display().to_string())))
        {
            Ok(x) => x,
            Err(e) => return Output::input_error(e),
        };
        match check_extension(&file.system, &ext) {
            ExtensionVerdict::Rejected(why) => {
                return Output::input_error(format!("{}: not a hierarchical extension: {why}\n", ext_path.display()))
            }
            v => stderr.push_str(&format!(
                "{}: {} extension\n",
                ext_path.display(),
                if v == ExtensionVerdict::Public { "public" } else { "hierarchical" }
            )),
        }
    }
    let goal = args.goal.map(Goal::from).or(file.goal).unwrap_or(Goal::Termination);
    let command = args.solver.clone().or_else(|| std::env::var(SOLVER_ENV).ok()).unwrap_or_else(|| "z3".into());
    let config = match SolverConfig::new(&command, args.smt_timeout) {
        Ok(c) => c,
        Err(e) => return Output::input_error(format!("{e}\n")),
    };
    let mut solver = match process_solver(&config, args.log_smt.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            stderr.push_str(&format!("warning: {e}; continuing without a solver\n"));
            lcstrs_core::solver::Solver::offline()
        }
    };
    let analysis = analyze(&file.system, goal, &mut solver, Duration::from_millis(args.timeout));
    if let Some(f) = &analysis.check_failure {
        stderr.push_str(&format!("warning: proof check failed: {f}\n"));
    }
    if let Some(path) = &args.trace {
        if let Err(e) = write_trace(path, &analysis) {
            stderr.push_str(&format!("warning: cannot write trace {}: {e}\n", path.display()));
        }
    }
    Output { stdout: render(&analysis.proof, args.format), stderr, code: exit_code(analysis.proof.verdict) }
}

pub fn run(cli: &Cli) -> Output {
    match &cli.command {
        Command::Analyze(a) => run_analyze(a),
        Command::Fmt { file } => match load(file) {
            Ok(f) => Output { stdout: print_file(&f), stderr: String::new(), code: 0 },
            Err(e) => Output::input_error(e),
        },
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}
