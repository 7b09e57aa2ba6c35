use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rst_core::rlcp::PlainLcp;
use rst_core::synth::rmq_range;
use rst_core::textindex::SuffixStructures;
use rst_core::{Csa, Lcp, ReferenceBundle, TargetBundle};

use crate::{files, FastaArgs};

#[derive(clap::Args)]
pub struct Args {
    /// Reference bundle.
    #[arg(short, long)]
    reference: PathBuf,
    /// Target bundle.
    #[arg(short, long)]
    target: Option<PathBuf>,
    /// FASTA the reference was built from, to compare against plain structures.
    #[arg(long)]
    reference_fasta: Option<PathBuf>,
    /// FASTA the target was built from.
    #[arg(long)]
    target_fasta: Option<PathBuf>,
    /// Random queries per operation.
    #[arg(short = 'n', long, default_value_t = 10_000)]
    queries: usize,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    fasta_args: FastaArgs,
}

/// First mismatch found, with the query that produced it.
struct Mismatch(String);

type Check = std::result::Result<(), Mismatch>;

fn expect<T: PartialEq + std::fmt::Debug>(query: impl FnOnce() -> String, expected: T, found: T) -> Check {
    if expected == found {
        Ok(())
    } else {
        Err(Mismatch(format!("{}: expected {expected:?}, found {found:?}", query())))
    }
}

fn report_sizes(label: &str, file_bytes: usize, components: &[(&str, usize)], len: usize) {
    println!("{label}: {len} symbols, {file_bytes} bytes, {:.4} bpc", files::bpc(file_bytes, len));
    let mut listed = 0;
    for &(name, bytes) in components {
        println!("  {name}: {bytes} bytes, {:.4} bpc", files::bpc(bytes, len));
        listed += bytes;
    }
    let overhead = file_bytes - listed;
    println!("  container: {overhead} bytes, {:.4} bpc", files::bpc(overhead, len));
}

fn check_csa(csa: &impl Csa, ss: &SuffixStructures, rng: &mut ChaCha8Rng, queries: usize) -> Check {
    let n = ss.len();
    expect(|| "length".into(), n, csa.len())?;
    for _ in 0..queries {
        let i = rng.gen_range(0..n);
        expect(|| format!("bwt({i})"), ss.bwt[i], csa.bwt(i))?;
        let lf = ss.isa[if ss.sa[i] == 0 { n - 1 } else { ss.sa[i] - 1 }];
        expect(|| format!("lf({i})"), lf, csa.lf(i))?;
        expect(|| format!("psi({i})"), ss.isa[(ss.sa[i] + 1) % n], csa.psi(i))?;
        if csa.supports_locate() {
            expect(|| format!("locate({i})"), ss.sa[i], csa.locate(i))?;
            let p = rng.gen_range(0..n);
            expect(|| format!("inverse({p})"), ss.isa[p], csa.inverse(p))?;
        }
    }
    Ok(())
}

fn check_lcp(lcp: &impl Lcp, ss: &SuffixStructures, rng: &mut ChaCha8Rng, queries: usize) -> Check {
    let v = &ss.lcp;
    let n = v.len();
    expect(|| "LCP length".into(), n, lcp.len())?;
    for (i, &value) in v.iter().enumerate() {
        expect(|| format!("lcp[{i}]"), value as u64, lcp.get(i))?;
    }
    for _ in 0..queries {
        let i = rng.gen_range(0..n);
        let found = |j: usize| (j, v[j] as u64);
        expect(|| format!("nsv({i})"), (i + 1..n).find(|&j| v[j] < v[i]).map(found), lcp.nsv(i))?;
        expect(|| format!("psv({i})"), (0..i).rev().find(|&j| v[j] < v[i]).map(found), lcp.psv(i))?;
        expect(|| format!("nsev({i})"), (i + 1..n).find(|&j| v[j] <= v[i]).map(found), lcp.nsev(i))?;
        expect(|| format!("psev({i})"), (0..i).rev().find(|&j| v[j] <= v[i]).map(found), lcp.psev(i))?;
        let (sp, ep) = rmq_range(rng, n);
        let min = (sp..=ep).min_by_key(|&j| (v[j], j)).map(found);
        expect(|| format!("rmq({sp}, {ep})"), min, lcp.rmq(sp, ep).ok())?;
    }
    Ok(())
}

/// Internal nodes of the suffix tree: lcp-intervals found with a stack scan.
fn internal_nodes(lcp: &[usize]) -> usize {
    let mut stack = vec![0usize];
    let mut count = 0;
    for &v in lcp.iter().skip(1).chain(std::iter::once(&0)) {
        while stack.last().is_some_and(|&top| top > v) {
            stack.pop();
            count += 1;
        }
        if stack.last().is_some_and(|&top| top < v) {
            stack.push(v);
        }
    }
    // The root remains at the bottom of the stack.
    count + 1
}

fn check_target(bundle: &TargetBundle, ss: &SuffixStructures, rng: &mut ChaCha8Rng, queries: usize) -> Check {
    check_csa(bundle.rfm(), ss, rng, queries)?;
    check_lcp(bundle.rlcp(), ss, rng, queries)?;
    let tree = bundle.tree();
    expect(|| "preorder node count".into(), ss.len() + internal_nodes(&ss.lcp), tree.preorder().count())?;
    let n = ss.len() - 1;
    let text = bundle.rfm().supports_locate().then(|| bundle.rfm().extract(0..n));
    for k in 0..queries.div_ceil(1000).min(20) {
        let query: Vec<u32> = match &text {
            Some(t) if n > 0 => {
                let start = rng.gen_range(0..n);
                let mut q = t[start..(start + 500).min(n)].to_vec();
                let p = rng.gen_range(0..q.len());
                q[p] = b"ACGT"[rng.gen_range(0..4)] as u32;
                q
            }
            _ => (0..200).map(|_| b"ACGT"[rng.gen_range(0..4)] as u32).collect(),
        };
        let backward = tree.maximal_substrings_backward(&query);
        for m in &backward {
            let range = tree.csa().find(&query[m.query.clone()]);
            expect(|| format!("maximal substring {k} at {:?}", m.query), (range.start, range.end - 1), (m.node.sp, m.node.ep))?;
        }
        if bundle.rfm().supports_locate() {
            expect(|| format!("forward maximal substrings of query {k}"), &backward, &tree.maximal_substrings_forward(&query))?;
        }
    }
    Ok(())
}

fn round_trip(label: &str, file: &[u8], saved: &[u8]) -> Check {
    expect(|| format!("{label} re-serialization"), true, file == saved)
}

fn fail(Mismatch(msg): Mismatch) -> Result<ExitCode> {
    println!("FAIL {msg}");
    Ok(ExitCode::FAILURE)
}

pub fn run(args: Args) -> Result<ExitCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let options = args.fasta_args.options();
    let ref_file = fs::read(&args.reference).with_context(|| format!("reading {}", args.reference.display()))?;
    let reference = ReferenceBundle::from_bytes(&ref_file).context("loading reference bundle")?;
    report_sizes("reference", ref_file.len(), &reference.components(), reference.len());
    if let Err(m) = round_trip("reference", &ref_file, &reference.to_bytes()) {
        return fail(m);
    }
    if let Some(path) = &args.reference_fasta {
        let ss = SuffixStructures::new(&files::fasta(path, options)?.text.symbols());
        let plain_lcp = PlainLcp::new(reference.lcp().clone());
        let check = check_csa(reference.fm().as_ref(), &ss, &mut rng, args.queries)
            .and_then(|_| check_lcp(&plain_lcp, &ss, &mut rng, args.queries));
        if let Err(m) = check {
            return fail(m);
        }
    }
    if let Some(path) = &args.target {
        let file = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let bundle = TargetBundle::from_bytes(&file, &reference).context("loading target bundle")?;
        report_sizes("target", file.len(), &bundle.components(), bundle.len());
        if let Err(m) = round_trip("target", &file, &bundle.to_bytes()) {
            return fail(m);
        }
        if let Some(fasta) = &args.target_fasta {
            let ss = SuffixStructures::new(&files::fasta(fasta, options)?.text.symbols());
            if let Err(m) = check_target(&bundle, &ss, &mut rng, args.queries) {
                return fail(m);
            }
        }
    }
    println!("PASS");
    Ok(ExitCode::SUCCESS)
}
