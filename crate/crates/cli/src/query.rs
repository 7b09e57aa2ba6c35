use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::Subcommand;
use rst_core::Csa;

use crate::{files, BundleArgs};

#[derive(clap::Args)]
pub struct Args {
    #[command(flatten)]
    bundles: BundleArgs,
    #[command(subcommand)]
    query: Query,
}

#[derive(Subcommand)]
enum Query {
    /// Number of occurrences and the suffix array range of a pattern.
    Find { pattern: String },
    /// Text positions of a pattern, in increasing order.
    Locate { pattern: String },
    /// Text in positions `start..end`, 0-based.
    Extract { start: usize, end: usize },
}

fn symbols(pattern: &str) -> Vec<u32> {
    pattern.bytes().map(|b| rst_core::io::normalize(b) as u32).collect()
}

fn answer(csa: &impl Csa, query: &Query) -> Result<()> {
    match query {
        Query::Find { pattern } => {
            let range = csa.find(&symbols(pattern));
            println!("{}\t{}..{}", range.len(), range.start, range.end);
        }
        Query::Locate { pattern } => {
            if !csa.supports_locate() {
                bail!("locate needs a full relative index");
            }
            let mut positions = csa.locate_range(csa.find(&symbols(pattern)));
            positions.sort_unstable();
            for p in positions {
                println!("{p}");
            }
        }
        Query::Extract { start, end } => {
            if !csa.supports_locate() {
                bail!("extract needs a full relative index");
            }
            // The endmarker is not part of the reported text.
            if start > end || *end >= csa.len() {
                bail!("range {start}..{end} outside the text of length {}", csa.len() - 1);
            }
            let text: String = csa.extract(*start..*end).into_iter().map(|c| c as u8 as char).collect();
            println!("{text}");
        }
    }
    Ok(())
}

pub fn run(args: Args) -> Result<ExitCode> {
    let reference = files::reference(&args.bundles.reference)?;
    match &args.bundles.target {
        Some(path) => answer(files::target(path, &reference)?.rfm(), &args.query)?,
        None => answer(reference.fm().as_ref(), &args.query)?,
    }
    Ok(ExitCode::SUCCESS)
}
