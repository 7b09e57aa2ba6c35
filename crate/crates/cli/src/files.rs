use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use anyhow::{Context, Result};
use rst_core::io::{read_fasta, FastaOptions, FastaText};
use rst_core::{ReferenceBundle, TargetBundle};

pub fn fasta(path: &Path, options: FastaOptions) -> Result<FastaText> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let fasta = read_fasta(BufReader::new(file), options).with_context(|| format!("reading {}", path.display()))?;
    eprintln!(
        "{}: {} records, {} symbols, {} mapped to N",
        path.display(),
        fasta.records,
        fasta.text.len() - 1,
        fasta.mapped
    );
    Ok(fasta)
}

pub fn reference(path: &Path) -> Result<ReferenceBundle> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    ReferenceBundle::from_bytes(&bytes).with_context(|| format!("loading reference bundle {}", path.display()))
}

pub fn target(path: &Path, reference: &ReferenceBundle) -> Result<TargetBundle> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    TargetBundle::from_bytes(&bytes, reference).with_context(|| format!("loading target bundle {}", path.display()))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Bits per character of `bytes` over a text of `len` symbols.
pub fn bpc(bytes: usize, len: usize) -> f64 {
    8.0 * bytes as f64 / len as f64
}
