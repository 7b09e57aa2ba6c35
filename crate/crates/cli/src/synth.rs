use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use rst_core::io::FastaOptions;
use rst_core::synth::{genome_like, MutationModel};

use crate::files;

#[derive(clap::Args)]
pub struct Args {
    /// Output FASTA.
    #[arg(short, long)]
    out: PathBuf,
    /// Sequence to mutate; a genome-like sequence is generated when absent.
    #[arg(short, long)]
    input: Option<PathBuf>,
    /// Length of the generated sequence.
    #[arg(short, long, default_value_t = 1_000_000)]
    length: usize,
    /// Mutation rate.
    #[arg(short = 'p', long, default_value_t = 0.0)]
    rate: f64,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
}

pub fn to_fasta(name: &str, body: &[u8]) -> String {
    let mut out = format!(">{name}\n");
    for line in body.chunks(60) {
        out.push_str(std::str::from_utf8(line).expect("ASCII sequence"));
        out.push('\n');
    }
    out
}

pub fn run(args: Args) -> Result<ExitCode> {
    if !(0.0..=1.0).contains(&args.rate) {
        bail!("mutation rate {} outside [0, 1]", args.rate);
    }
    let body = match &args.input {
        Some(path) => files::fasta(path, FastaOptions::default())?.text.body().to_vec(),
        None => genome_like(args.length, args.seed),
    };
    let (body, stats) = MutationModel::new(args.rate, args.seed).mutate(&body);
    let mut name = String::from("synthetic");
    write!(name, " rate={} seed={}", args.rate, args.seed)?;
    files::write(&args.out, to_fasta(&name, &body).as_bytes())?;
    eprintln!(
        "{} symbols; {} substitutions, {} insertions, {} deletions",
        body.len(),
        stats.substitutions,
        stats.insertions,
        stats.deletions
    );
    Ok(ExitCode::SUCCESS)
}
