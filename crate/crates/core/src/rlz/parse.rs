use super::layout::{PhraseLayout, Source};
use super::matcher::{Phrase, RlzConfig, RlzReference};
use super::{unzigzag, zigzag, Symbols};
use crate::serialize::{self, tag, Serialize};
use crate::succinct::IntVector;

use std::io::{self, Read, Write};

/// Returned in place of the virtual terminator that closes the last phrase.
pub const TERMINATOR: i64 = i64::MIN;

/// A target sequence stored as an RLZ parse against a reference: the phrase
/// layout plus the mismatch literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RlzParse {
    layout: PhraseLayout,
    literals: IntVector,
}

impl RlzParse {
    pub fn new<S: Symbols + ?Sized>(reference: &RlzReference, target: &S, config: &RlzConfig) -> Self {
        let phrases = reference.parse(target, config);
        Self::from_phrases(&phrases, target, config)
    }

    pub fn from_phrases<S: Symbols + ?Sized>(phrases: &[Phrase], target: &S, config: &RlzConfig) -> Self {
        let n = target.symbol_count();
        let layout = PhraseLayout::new(phrases, n, config);
        let mut literals = Vec::with_capacity(layout.literal_count());
        for p in phrases {
            for j in p.start + p.copy_len..p.end() {
                // The terminator is implied by its position and stored as 0.
                literals.push(if j < n { zigzag(target.symbol(j)) } else { 0 });
            }
        }
        RlzParse { layout, literals: IntVector::from_slice(&literals) }
    }

    pub fn layout(&self) -> &PhraseLayout {
        &self.layout
    }

    pub fn phrase_count(&self) -> usize {
        self.layout.phrase_count()
    }

    pub fn len(&self) -> usize {
        self.layout.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layout.is_empty()
    }

    pub fn access<S: Symbols + ?Sized>(&self, reference: &S, j: usize) -> i64 {
        assert!(j < self.len(), "position {} beyond target length {}", j, self.len());
        match self.layout.resolve(j) {
            Source::Copy { reference: r, .. } => reference.symbol(r),
            Source::Literal { index, .. } => unzigzag(self.literals.get(index)),
        }
    }

    /// Full content of phrase `i`, with [`TERMINATOR`] for the virtual terminator.
    pub fn decompress_phrase<S: Symbols + ?Sized>(&self, reference: &S, i: usize) -> Vec<i64> {
        let range = self.layout.phrase_range(i);
        let literals = self.layout.literal_range(i);
        let copy_len = range.len() - literals.len();
        let source = range.start as i64 + self.layout.offset(i);
        let mut out = Vec::with_capacity(range.len());
        for t in 0..copy_len {
            out.push(reference.symbol(source as usize + t));
        }
        for (k, index) in literals.enumerate() {
            let j = range.start + copy_len + k;
            out.push(if j < self.len() { unzigzag(self.literals.get(index)) } else { TERMINATOR });
        }
        out
    }

    pub fn decompress<S: Symbols + ?Sized>(&self, reference: &S) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        for i in 0..self.phrase_count() {
            out.extend(self.decompress_phrase(reference, i));
        }
        out.truncate(self.len());
        out
    }
}

impl Serialize for RlzParse {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::RLZ_PARSE, self.len())?;
        self.layout.serialize(writer)?;
        self.literals.serialize(writer)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::RLZ_PARSE)?;
        let layout = PhraseLayout::load(reader)?;
        let literals = IntVector::load(reader)?;
        if layout.len() != len || literals.len() != layout.literal_count() {
            return Err(serialize::invalid_data("inconsistent RLZ parse"));
        }
        Ok(RlzParse { layout, literals })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + self.layout.size_in_bytes() + self.literals.size_in_bytes()
    }
}
