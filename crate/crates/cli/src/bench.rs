use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rst_core::io::FastaOptions;
use rst_core::synth::{rmq_range, MutationModel};
use rst_core::{Csa, Lcp, TargetBundle};

use crate::files;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Operation {
    Lf,
    Psi,
    LcpRandom,
    LcpSeq,
    Nsv,
    Psv,
    Rmq,
    Locate,
    Traverse,
    MaxsubFwd,
    MaxsubBwd,
}

impl Operation {
    fn name(self) -> &'static str {
        match self {
            Operation::Lf => "lf",
            Operation::Psi => "psi",
            Operation::LcpRandom => "lcp-random",
            Operation::LcpSeq => "lcp-seq",
            Operation::Nsv => "nsv",
            Operation::Psv => "psv",
            Operation::Rmq => "rmq",
            Operation::Locate => "locate",
            Operation::Traverse => "traverse",
            Operation::MaxsubFwd => "maxsub-fwd",
            Operation::MaxsubBwd => "maxsub-bwd",
        }
    }
}

pub const CSV_HEADER: &str = "operation,queries,mean_us,p95_us,size_bpc";

/// Values read per query of the sequential LCP benchmark.
const SEQ_BLOCK: usize = 1024;
/// Length of the generated maximal-substring queries.
const QUERY_LEN: usize = 1000;

#[derive(clap::Args)]
pub struct Args {
    /// Reference bundle.
    #[arg(short, long)]
    reference: PathBuf,
    /// Target bundle.
    #[arg(short, long)]
    target: PathBuf,
    /// Operations to time; all when absent.
    #[arg(short, long, value_enum, value_delimiter = ',')]
    ops: Vec<Operation>,
    /// Queries per operation.
    #[arg(short = 'n', long, default_value_t = 100_000)]
    queries: usize,
    /// Queries for the maximal-substring benchmarks, one per record. By default
    /// they are mutated substrings of the target.
    #[arg(long)]
    query_fasta: Option<PathBuf>,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
}

/// Latency summary of one operation.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub operation: &'static str,
    pub queries: usize,
    pub mean_us: f64,
    pub p95_us: f64,
    pub size_bpc: f64,
}

impl Row {
    fn new(operation: &'static str, mut times_us: Vec<f64>, size_bpc: f64) -> Self {
        let queries = times_us.len();
        times_us.sort_by(f64::total_cmp);
        if queries == 0 {
            return Row { operation, queries, mean_us: 0.0, p95_us: 0.0, size_bpc };
        }
        let mean_us = times_us.iter().sum::<f64>() / queries as f64;
        let p95_us = times_us[((queries as f64 * 0.95) as usize).min(queries - 1)];
        Row { operation, queries, mean_us, p95_us, size_bpc }
    }

    pub fn csv(&self) -> String {
        format!("{},{},{:.4},{:.4},{:.4}", self.operation, self.queries, self.mean_us, self.p95_us, self.size_bpc)
    }
}

fn time<T>(f: impl FnOnce() -> T) -> f64 {
    let start = Instant::now();
    std::hint::black_box(f());
    start.elapsed().as_secs_f64() * 1e6
}

fn target_queries(bundle: &TargetBundle, rng: &mut ChaCha8Rng, count: usize) -> Vec<Vec<u32>> {
    let rfm = bundle.rfm();
    let n = rfm.len() - 1;
    (0..count)
        .map(|k| {
            let len = QUERY_LEN.min(n);
            let start = rng.gen_range(0..=n - len);
            let window: Vec<u8> = rfm.extract(start..start + len).into_iter().map(|c| c as u8).collect();
            let (query, _) = MutationModel::new(0.01, rng.gen::<u64>() ^ k as u64).mutate(&window);
            query.into_iter().map(u32::from).collect()
        })
        .collect()
}

pub fn measure(bundle: &TargetBundle, op: Operation, queries: usize, rng: &mut ChaCha8Rng, maxsub: &[Vec<u32>]) -> Result<Row> {
    let n = bundle.len();
    let rfm = bundle.rfm();
    let lcp = bundle.rlcp();
    let size = |parts: &[&str]| {
        let bytes: usize = bundle.components().iter().filter(|c| parts.contains(&c.0)).map(|c| c.1).sum();
        files::bpc(bytes, n)
    };
    if matches!(op, Operation::Locate | Operation::MaxsubFwd) && !rfm.is_full() {
        bail!("{} needs a full relative index", op.name());
    }
    let mut times = Vec::with_capacity(queries);
    let row = match op {
        Operation::Lf | Operation::Psi | Operation::Locate => {
            for _ in 0..queries {
                let i = rng.gen_range(0..n);
                times.push(match op {
                    Operation::Lf => time(|| rfm.lf(i)),
                    Operation::Psi => time(|| rfm.psi(i)),
                    _ => time(|| rfm.locate(i)),
                });
            }
            Row::new(op.name(), times, size(&["rfm"]))
        }
        Operation::LcpRandom | Operation::Nsv | Operation::Psv => {
            for _ in 0..queries {
                let i = rng.gen_range(0..n);
                times.push(match op {
                    Operation::LcpRandom => time(|| lcp.get(i)),
                    Operation::Nsv => time(|| lcp.nsv(i)),
                    _ => time(|| lcp.psv(i)),
                });
            }
            Row::new(op.name(), times, size(&["rlcp"]))
        }
        Operation::LcpSeq => {
            // Timed in blocks; each query is one value.
            let block = SEQ_BLOCK.min(n);
            let mut done = 0;
            while done < queries {
                let start = rng.gen_range(0..=n - block);
                let t = time(|| lcp.range(start..start + block)) / block as f64;
                times.extend(std::iter::repeat(t).take(block.min(queries - done)));
                done += block;
            }
            Row::new(op.name(), times, size(&["rlcp"]))
        }
        Operation::Rmq => {
            for _ in 0..queries {
                let (sp, ep) = rmq_range(rng, n);
                times.push(time(|| lcp.rmq(sp, ep)));
            }
            Row::new(op.name(), times, size(&["rlcp"]))
        }
        Operation::Traverse => {
            let tree = bundle.tree();
            let mut nodes = tree.preorder();
            for _ in 0..queries {
                let t = time(|| nodes.next());
                times.push(t);
            }
            Row::new(op.name(), times, size(&["rfm", "rlcp"]))
        }
        Operation::MaxsubFwd | Operation::MaxsubBwd => {
            let tree = bundle.tree();
            for q in maxsub {
                times.push(match op {
                    Operation::MaxsubFwd => time(|| tree.maximal_substrings_forward(q)),
                    _ => time(|| tree.maximal_substrings_backward(q)),
                });
            }
            Row::new(op.name(), times, size(&["rfm", "rlcp"]))
        }
    };
    Ok(row)
}

pub fn run(args: Args) -> Result<ExitCode> {
    let reference = files::reference(&args.reference)?;
    let bundle = files::target(&args.target, &reference)?;
    let ops = if args.ops.is_empty() { Operation::value_variants().to_vec() } else { args.ops.clone() };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let maxsub = match &args.query_fasta {
        Some(path) => {
            let text = files::fasta(path, FastaOptions { separate_records: true, truncate_n_runs: true })?.text;
            text.body().split(|&b| b == b'N').filter(|q| !q.is_empty()).map(|q| q.iter().map(|&b| b as u32).collect()).collect()
        }
        None if bundle.rfm().is_full() => target_queries(&bundle, &mut rng, (args.queries / 1000).clamp(1, 100)),
        None => Vec::new(),
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{CSV_HEADER}")?;
    for op in ops {
        let row = measure(&bundle, op, args.queries, &mut rng, &maxsub)?;
        writeln!(out, "{}", row.csv())?;
    }
    Ok(ExitCode::SUCCESS)
}
