mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use sigma_forge::solver::DEFAULT_BUDGET;

use report::RunReport;

#[derive(Parser)]
#[command(name = "sigma-forge", version, about = "Exact sigma-coloring / lucky-labeling solver and hardness reductions")]
struct Cli {
    /// Node budget per search.
    #[arg(long, global = true, env = "SIGMA_FORGE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sigma,
    Lucky,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReductionArg {
    Nae3sat,
    Sigmak,
    Cubic1in3,
    Maxcut,
    Remark2,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Nae,
    OneInThree,
    Maxcut,
}

#[derive(Subcommand)]
enum Command {
    /// Smallest number of labels for a sigma coloring or lucky labeling.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
    /// Smallest part over all sigma colorings with two parts.
    Minpart { graph: PathBuf },
    /// Builds a reduced graph; graph text goes to --output, traceback JSON into the report.
    Reduce {
        #[arg(value_enum)]
        reduction: ReductionArg,
        /// Formula (DIMACS) or, for sigmak, the source graph. Unused for remark2.
        input: Option<PathBuf>,
        /// Label count for sigmak and remark2.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Build the cubic 1-in-3 graph even when the formula is not NAE-satisfiable.
        #[arg(long)]
        skip_nae_gate: bool,
    },
    /// Re-certifies a gadget bundle and compares it with the stored certificate.
    Certify { bundle: PathBuf },
    /// Runs a reduction end to end against the formula oracle.
    Roundtrip {
        #[arg(long, value_enum)]
        reduction: ReductionArg,
        formula: PathBuf,
    },
    /// Brute-force SAT or MaxCut oracle.
    Oracle {
        #[arg(value_enum)]
        problem: OracleArg,
        /// DIMACS formula, or a graph for maxcut.
        input: PathBuf,
    },
    /// Writes the shipped gadget bundles into a directory.
    ExportGadgets { dir: PathBuf },
}

fn run(cli: Cli) -> anyhow::Result<RunReport> {
    let budget = cli.budget;
    match cli.command {
        Command::Solve { graph, mode, max_k } => commands::solve(&graph, mode, max_k, budget),
        Command::Minpart { graph } => commands::minpart(&graph, budget),
        Command::Reduce { reduction, input, k, output, skip_nae_gate } => {
            commands::reduce(reduction, input.as_deref(), k, output.as_deref(), skip_nae_gate)
        }
        Command::Certify { bundle } => commands::certify(&bundle),
        Command::Roundtrip { reduction, formula } => commands::roundtrip(reduction, &formula, budget),
        Command::Oracle { problem, input } => commands::oracle(problem, &input),
        Command::ExportGadgets { dir } => commands::export_gadgets(&dir),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli) {
        Ok(mut report) => {
            report.wall_time_ms = start.elapsed().as_millis();
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            for line in &report.notes {
                eprintln!("{line}");
            }
            eprintln!("{}: {:?} ({} ms)", report.command, report.verdict, report.wall_time_ms);
            ExitCode::from(report.verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
