use clap::{Parser, Subcommand};
use schur_cli::commands::{cmd_bench, cmd_gen, cmd_refine, BenchArgs, GenArgs, RefineArgs};

/// Refine complex Schur decompositions from binary64 to double-double.
#[derive(Parser)]
#[command(name = "schur-refine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Refine one matrix and emit a JSON run record.
    /// Exit codes: 0 converged, 2 not converged, 3 invalid input.
    Refine(RefineArgs),
    /// Time refinements of random matrices of several sizes.
    Bench(BenchArgs),
    /// Write a generated matrix as a Matrix Market file.
    Gen(GenArgs),
}

fn main() {
    let cli = Cli::parse();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let code = match &cli.command {
        Command::Refine(args) => cmd_refine(args, &mut out, &mut err),
        Command::Bench(args) => cmd_bench(args, &mut out, &mut err),
        Command::Gen(args) => cmd_gen(args, &mut err),
    };
    std::process::exit(code);
}
