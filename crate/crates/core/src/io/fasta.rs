//! FASTA ingestion into a single DNA text.

use std::io::BufRead;

use crate::textindex::Text;
use crate::{Error, Result};

/// How multi-record files are joined.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FastaOptions {
    /// Insert an `N` between consecutive records.
    pub separate_records: bool,
    /// Collapse every run of `N` into a single `N`.
    pub truncate_n_runs: bool,
}

/// A FASTA file read as one text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastaText {
    pub text: Text,
    pub records: usize,
    /// Symbols outside `ACGTN` that were replaced by `N`.
    pub mapped: usize,
}

/// Uppercases `b` and maps symbols outside `ACGTN` to `N`.
pub fn normalize(b: u8) -> u8 {
    match b.to_ascii_uppercase() {
        c @ (b'A' | b'C' | b'G' | b'T' | b'N') => c,
        _ => b'N',
    }
}

/// Collapses every run of `N` into a single `N`.
pub fn truncate_n_runs(body: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(body.len());
    for &b in body {
        if b == b'N' && out.last() == Some(&b'N') {
            continue;
        }
        out.push(b);
    }
    out
}

pub fn read_fasta<R: BufRead>(reader: R, options: FastaOptions) -> Result<FastaText> {
    let mut body = Vec::new();
    let mut records = 0;
    let mut mapped = 0;
    for (number, line) in reader.split(b'\n').enumerate() {
        let line = line?;
        let line = line.strip_suffix(b"\r").unwrap_or(&line);
        if let Some(header) = line.strip_prefix(b">") {
            if header.iter().all(u8::is_ascii_whitespace) {
                return Err(Error::InvalidInput(format!("line {}: empty FASTA header", number + 1)));
            }
            if records > 0 && options.separate_records {
                body.push(b'N');
            }
            records += 1;
            continue;
        }
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        if records == 0 {
            return Err(Error::InvalidInput(format!("line {}: sequence before the first header", number + 1)));
        }
        for &b in line.iter().filter(|b| !b.is_ascii_whitespace()) {
            let c = normalize(b);
            if c == b'N' && !b.eq_ignore_ascii_case(&b'N') {
                mapped += 1;
            }
            body.push(c);
        }
    }
    if records == 0 {
        return Err(Error::InvalidInput("no FASTA records".into()));
    }
    if options.truncate_n_runs {
        body = truncate_n_runs(&body);
    }
    Ok(FastaText { text: Text::from_body(&body)?, records, mapped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(input: &str, options: FastaOptions) -> Result<FastaText> {
        read_fasta(input.as_bytes(), options)
    }

    #[test]
    fn records_are_concatenated() {
        let fasta = read(">one\nGATT\nACA\n>two\nGATTAGA\n", FastaOptions::default()).unwrap();
        assert_eq!(fasta.text.body(), b"GATTACAGATTAGA");
        assert_eq!(fasta.records, 2);
        assert_eq!(fasta.mapped, 0);
        let options = FastaOptions { separate_records: true, ..Default::default() };
        assert_eq!(read(">one\nGATTACA\n>two\nGA\n", options).unwrap().text.body(), b"GATTACANGA");
    }

    #[test]
    fn lowercase_and_foreign_symbols() {
        let input = ">x\r\ngattaca\r\nACRYT-n\n";
        let fasta = read(input, FastaOptions::default()).unwrap();
        assert_eq!(fasta.text.body(), b"GATTACAACNNTNN");
        let expected = input.lines().filter(|l| !l.starts_with('>')).flat_map(|l| l.trim().bytes()).filter(|b| !b"ACGTNacgtn".contains(b)).count();
        assert_eq!(fasta.mapped, expected);
    }

    #[test]
    fn n_runs() {
        let options = FastaOptions { truncate_n_runs: true, ..Default::default() };
        assert_eq!(read(">x\nNNNACNNNNGTN\n", options).unwrap().text.body(), b"NACNGTN");
        assert_eq!(truncate_n_runs(b""), b"");
    }

    #[test]
    fn rejected_inputs() {
        assert!(read("", FastaOptions::default()).is_err());
        assert!(read("ACGT\n", FastaOptions::default()).is_err());
        assert!(read(">\nACGT\n", FastaOptions::default()).is_err());
    }
}
