use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use lta_cli::commands::{self, CompletionArgs, Output};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit code for malformed command lines.
const USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "lta", version, about = "Lattice tree automata: completion, membership and automaton operations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CompletionOpts {
    /// Start automaton (default: the first one in the file).
    #[arg(long)]
    automaton: Option<String>,
    /// Rewrite system to use (default: the first one).
    #[arg(long)]
    trs: Option<String>,
    /// Equation set to use (default: the first one).
    #[arg(long)]
    equations: Option<String>,
    #[arg(long, value_name = "N")]
    max_steps: Option<usize>,
    #[arg(long, value_name = "K")]
    widen_after: Option<usize>,
    /// Read strict integer comparisons as closed ones shifted by one.
    #[arg(long)]
    strict_int: bool,
}

impl From<CompletionOpts> for CompletionArgs {
    fn from(o: CompletionOpts) -> Self {
        CompletionArgs {
            automaton: o.automaton,
            trs: o.trs,
            equations: o.equations,
            max_steps: o.max_steps,
            widen_after: o.widen_after,
            strict_int: o.strict_int,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Complete an automaton with respect to a rewrite system.
    Complete {
        spec: PathBuf,
        #[command(flatten)]
        opts: CompletionOpts,
        /// Write the per-step trace to FILE.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Write the completed automaton to FILE instead of standard output.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Check that no term of the automaton NAME is reachable.
    Check {
        spec: PathBuf,
        #[arg(long, value_name = "NAME")]
        bad: String,
        #[command(flatten)]
        opts: CompletionOpts,
    },
    /// Test whether a ground term is accepted.
    Member {
        file: PathBuf,
        term: String,
        #[arg(long)]
        automaton: Option<String>,
    },
    /// Determinize over a partition.
    Det {
        file: PathBuf,
        /// File whose `partition` declaration is used.
        #[arg(long, value_name = "FILE")]
        partition: Option<PathBuf>,
        #[arg(long)]
        automaton: Option<String>,
    },
    /// Determinize if needed, then minimize over a partition.
    Min {
        file: PathBuf,
        #[arg(long, value_name = "FILE")]
        partition: Option<PathBuf>,
        #[arg(long)]
        automaton: Option<String>,
    },
    /// Remove unreachable and unproductive states.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        automaton: Option<String>,
    },
    /// Union of the first automata of two files.
    Union { left: PathBuf, right: PathBuf },
    /// Intersection of the first automata of two files.
    Inter { left: PathBuf, right: PathBuf },
    /// Language inclusion of the first automata of two files.
    Included { left: PathBuf, right: PathBuf },
    /// Render an automaton in Graphviz format.
    Dot {
        file: PathBuf,
        #[arg(long)]
        automaton: Option<String>,
    },
    /// Count rewrite steps adding two numbers in successor notation and with a builtin.
    BenchPeano { x: u64, y: u64 },
}

fn run(cmd: Command) -> Result<Output, commands::CommandError> {
    match cmd {
        Command::Complete { spec, opts, trace, out } => {
            commands::complete_cmd(&spec, &opts.into(), trace.as_ref(), out.as_ref())
        }
        Command::Check { spec, bad, opts } => commands::check_cmd(&spec, &bad, &opts.into()),
        Command::Member { file, term, automaton } => commands::member_cmd(&file, automaton.as_deref(), &term),
        Command::Det { file, partition, automaton } => {
            commands::det_cmd(&file, automaton.as_deref(), partition.as_ref())
        }
        Command::Min { file, partition, automaton } => {
            commands::min_cmd(&file, automaton.as_deref(), partition.as_ref())
        }
        Command::Reduce { file, automaton } => commands::reduce_cmd(&file, automaton.as_deref()),
        Command::Union { left, right } => commands::union_cmd(&left, &right),
        Command::Inter { left, right } => commands::inter_cmd(&left, &right),
        Command::Included { left, right } => commands::included_cmd(&left, &right),
        Command::Dot { file, automaton } => commands::dot_cmd(&file, automaton.as_deref()),
        Command::BenchPeano { x, y } => Ok(commands::bench_peano_cmd(x, y)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            let _ = std::io::stdout().flush();
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
