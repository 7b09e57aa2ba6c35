use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use rst_core::io::{ReferenceConfig, TargetConfig};
use rst_core::rfm::RfmConfig;
use rst_core::textindex::FmConfig;
use rst_core::{ReferenceBundle, TargetBundle};

use crate::{files, FastaArgs};

#[derive(clap::Args)]
pub struct RefArgs {
    /// Reference FASTA.
    fasta: PathBuf,
    /// Output bundle.
    #[arg(short, long)]
    out: PathBuf,
    /// Suffix array sample interval.
    #[arg(long, default_value_t = FmConfig::default().sa_interval)]
    sa_interval: usize,
    /// Inverse suffix array sample interval.
    #[arg(long, default_value_t = FmConfig::default().isa_interval)]
    isa_interval: usize,
    /// Skip the index of the reversed reference.
    #[arg(long)]
    no_reversed: bool,
    #[command(flatten)]
    fasta_args: FastaArgs,
}

#[derive(clap::Args)]
pub struct RelArgs {
    /// Target FASTA.
    fasta: PathBuf,
    /// Reference bundle.
    #[arg(short, long)]
    reference: PathBuf,
    /// Output bundle.
    #[arg(short, long)]
    out: PathBuf,
    /// Build only the basic relative FM-index, without locate and extract.
    #[arg(long)]
    basic: bool,
    /// Add the relative select structure.
    #[arg(long)]
    rselect: bool,
    /// Suffix array sample interval of the full variant.
    #[arg(long, default_value_t = RfmConfig::default().sa_interval)]
    sa_interval: usize,
    /// Inverse suffix array sample interval of the full variant.
    #[arg(long, default_value_t = RfmConfig::default().isa_interval)]
    isa_interval: usize,
    /// Maximum copy length of a relative LCP phrase.
    #[arg(long, default_value_t = rst_core::rlz::RlzConfig::default().max_len)]
    max_phrase: usize,
    /// Context length of the approximate common subsequence.
    #[arg(long, default_value_t = RfmConfig::default().lcs.context_len)]
    context: usize,
    #[command(flatten)]
    fasta_args: FastaArgs,
}

pub fn reference(args: RefArgs) -> Result<ExitCode> {
    let text = files::fasta(&args.fasta, args.fasta_args.options())?.text;
    let start = Instant::now();
    let fm = FmConfig { sa_interval: args.sa_interval, isa_interval: args.isa_interval, ..FmConfig::default() };
    let bundle = ReferenceBundle::build(&text, &ReferenceConfig { fm, reversed: !args.no_reversed });
    let bytes = bundle.to_bytes();
    files::write(&args.out, &bytes)?;
    eprintln!(
        "reference: {} symbols, {} bytes ({:.3} bpc) in {:.1?}",
        bundle.len(),
        bytes.len(),
        files::bpc(bytes.len(), bundle.len()),
        start.elapsed()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn relative(args: RelArgs) -> Result<ExitCode> {
    let reference = files::reference(&args.reference)?;
    let text = files::fasta(&args.fasta, args.fasta_args.options())?.text;
    let start = Instant::now();
    let mut config = TargetConfig::default();
    config.rfm = if args.basic { RfmConfig::basic() } else { RfmConfig::default() };
    config.rfm.rselect = args.rselect;
    config.rfm.sa_interval = args.sa_interval;
    config.rfm.isa_interval = args.isa_interval;
    config.rfm.lcs.context_len = args.context;
    config.rlz.max_len = args.max_phrase;
    let bundle = TargetBundle::build(&reference, &text, &config)?;
    let bytes = bundle.to_bytes();
    files::write(&args.out, &bytes)?;
    eprintln!(
        "target: {} symbols, {} bytes ({:.3} bpc) in {:.1?}",
        bundle.len(),
        bytes.len(),
        files::bpc(bytes.len(), bundle.len()),
        start.elapsed()
    );
    for (name, size) in bundle.components() {
        eprintln!("  {name}: {size} bytes ({:.3} bpc)", files::bpc(size, bundle.len()));
    }
    Ok(ExitCode::SUCCESS)
}
