//! Files: FASTA input, the sectioned container and index bundles.

mod bundle;
mod container;
mod fasta;

pub use bundle::{ReferenceBundle, ReferenceConfig, TargetBundle, TargetConfig};
pub use container::{Container, MAGIC, VERSION};
pub use fasta::{normalize, read_fasta, truncate_n_runs, FastaOptions, FastaText};
