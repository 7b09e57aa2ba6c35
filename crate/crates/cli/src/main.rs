mod bench;
mod build;
mod files;
mod query;
mod synth;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "rst", version, about = "Relative suffix trees over DNA sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index a reference sequence.
    BuildRef(build::RefArgs),
    /// Index a target sequence relative to a reference bundle.
    BuildRel(build::RelArgs),
    /// Find, locate or extract in an indexed sequence.
    Query(query::Args),
    /// Time query operations and print CSV.
    Bench(bench::Args),
    /// Generate a reference or a mutated copy of one.
    Synth(synth::Args),
    /// Check bundles for integrity and against plain structures.
    Verify(verify::Args),
}

/// Options shared by commands that read FASTA.
#[derive(clap::Args, Clone, Debug)]
pub struct FastaArgs {
    /// Insert an N between consecutive records.
    #[arg(long)]
    separate_records: bool,
    /// Collapse runs of N into a single N.
    #[arg(long)]
    truncate_n: bool,
}

impl FastaArgs {
    fn options(&self) -> rst_core::io::FastaOptions {
        rst_core::io::FastaOptions { separate_records: self.separate_records, truncate_n_runs: self.truncate_n }
    }
}

/// Reference bundle and optional target bundle.
#[derive(clap::Args, Clone, Debug)]
pub struct BundleArgs {
    /// Reference bundle.
    #[arg(short, long)]
    reference: PathBuf,
    /// Target bundle; the reference itself is used when absent.
    #[arg(short, long)]
    target: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::BuildRef(args) => build::reference(args),
        Command::BuildRel(args) => build::relative(args),
        Command::Query(args) => query::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Synth(args) => synth::run(args),
        Command::Verify(args) => verify::run(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
