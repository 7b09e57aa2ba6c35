//! Reference and target bundles stored in containers.
//!
//! A reference bundle holds the FM-index of the reference, optionally the
//! FM-index of the reversed reference, and the reference LCP array. A target
//! bundle holds the relative FM-index, the relative LCP array and optionally
//! relative select, together with the SHA-256 hash of the reference content
//! it was built against.

use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::Container;
use crate::rfm::{RSelect, RelativeFm, RfmConfig, RfmReference};
use crate::rlcp::{Lcp, RlcpArray, RlcpReference};
use crate::rlz::RlzConfig;
use crate::rst::SuffixTree;
use crate::serialize::Serialize;
use crate::succinct::SLArray;
use crate::textindex::{Csa, FmConfig, FmIndex, SuffixStructures, Text};
use crate::{Error, Result};

mod section {
    pub const KIND: u8 = 0x01;
    pub const FM: u8 = 0x10;
    pub const FM_REVERSED: u8 = 0x11;
    pub const LCP: u8 = 0x12;
    pub const REFERENCE_HASH: u8 = 0x20;
    pub const RELATIVE_FM: u8 = 0x21;
    pub const RSELECT: u8 = 0x22;
    pub const RELATIVE_LCP: u8 = 0x23;
}

const REFERENCE_KIND: &[u8] = b"reference";
const TARGET_KIND: &[u8] = b"target";

/// Alphabet size of byte texts.
const SIGMA: usize = 256;

fn check_kind(container: &Container, kind: &[u8]) -> Result<()> {
    let found = container.require(section::KIND)?;
    if found != kind {
        return Err(Error::Format(format!(
            "expected a {} bundle, found {}",
            String::from_utf8_lossy(kind),
            String::from_utf8_lossy(found)
        )));
    }
    Ok(())
}

fn content_hash(fm: &[u8], lcp: &[u8]) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update((fm.len() as u64).to_le_bytes());
    hasher.update(fm);
    hasher.update(lcp);
    hasher.finalize().into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceConfig {
    pub fm: FmConfig,
    /// Also index the reversed reference.
    pub reversed: bool,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig { fm: FmConfig::default(), reversed: true }
    }
}

#[derive(Clone, Debug)]
pub struct ReferenceBundle {
    fm: Arc<FmIndex>,
    fm_reversed: Option<Arc<FmIndex>>,
    lcp: Arc<SLArray>,
    hash: [u8; 32],
}

impl ReferenceBundle {
    pub fn build(text: &Text, config: &ReferenceConfig) -> Self {
        let ss = SuffixStructures::new(&text.symbols());
        let fm = FmIndex::from_structures(&ss, SIGMA, config.fm);
        let lcp = ss.lcp_slarray();
        drop(ss);
        let fm_reversed = config.reversed.then(|| Arc::new(FmIndex::new(&text.reversed().symbols(), SIGMA, config.fm)));
        let hash = content_hash(&fm.to_bytes(), &lcp.to_bytes());
        ReferenceBundle { fm: Arc::new(fm), fm_reversed, lcp: Arc::new(lcp), hash }
    }

    pub fn fm(&self) -> &Arc<FmIndex> {
        &self.fm
    }

    pub fn fm_reversed(&self) -> Option<&Arc<FmIndex>> {
        self.fm_reversed.as_ref()
    }

    pub fn lcp(&self) -> &Arc<SLArray> {
        &self.lcp
    }

    /// SHA-256 of the FM-index and LCP array as serialized.
    pub fn hash(&self) -> [u8; 32] {
        self.hash
    }

    /// Text length including the endmarker.
    pub fn len(&self) -> usize {
        self.fm.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Component sizes in bytes.
    pub fn components(&self) -> Vec<(&'static str, usize)> {
        let mut out = vec![("fm", self.fm.size_in_bytes())];
        if let Some(fm) = &self.fm_reversed {
            out.push(("fm-reversed", fm.size_in_bytes()));
        }
        out.push(("lcp", self.lcp.size_in_bytes()));
        out
    }

    pub fn to_container(&self) -> Container {
        let mut c = Container::new();
        c.push(section::KIND, REFERENCE_KIND.to_vec());
        c.push(section::FM, self.fm.to_bytes());
        if let Some(fm) = &self.fm_reversed {
            c.push(section::FM_REVERSED, fm.to_bytes());
        }
        c.push(section::LCP, self.lcp.to_bytes());
        c
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.to_container().to_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let c = Container::from_bytes(bytes)?;
        check_kind(&c, REFERENCE_KIND)?;
        let fm_bytes = c.require(section::FM)?;
        let lcp_bytes = c.require(section::LCP)?;
        let fm = FmIndex::from_bytes(fm_bytes)?;
        let lcp = SLArray::from_bytes(lcp_bytes)?;
        if lcp.len() != fm.len() {
            return Err(Error::Format("reference LCP and FM-index lengths differ".into()));
        }
        let fm_reversed = match c.get(section::FM_REVERSED) {
            Some(b) => Some(Arc::new(FmIndex::from_bytes(b)?)),
            None => None,
        };
        let hash = content_hash(fm_bytes, lcp_bytes);
        Ok(ReferenceBundle { fm: Arc::new(fm), fm_reversed, lcp: Arc::new(lcp), hash })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TargetConfig {
    pub rfm: RfmConfig,
    pub rlz: RlzConfig,
}

#[derive(Clone, Debug)]
pub struct TargetBundle {
    reference_hash: [u8; 32],
    rfm: RelativeFm,
    rlcp: RlcpArray,
}

impl TargetBundle {
    /// Builds the relative structures of `text` against `reference`. Symbols
    /// absent from the reference are rejected.
    pub fn build(reference: &ReferenceBundle, text: &Text, config: &TargetConfig) -> Result<Self> {
        let fm = reference.fm();
        let mut seen = [false; SIGMA];
        for &b in text.body() {
            seen[b as usize] = true;
        }
        if let Some(c) = (1..SIGMA).find(|&c| seen[c] && fm.occurrences(c as u32) == 0) {
            return Err(Error::InvalidInput(format!("symbol {:?} does not occur in the reference", c as u8 as char)));
        }
        let symbols = text.symbols();
        let rfm = RelativeFm::build(&RfmReference::new(fm.clone()), &symbols, &config.rfm);
        let lcp = SuffixStructures::new(&symbols).lcp_slarray();
        let rlcp = RlcpArray::build_with(&RlcpReference::new(reference.lcp().clone()), &lcp, &config.rlz);
        Ok(TargetBundle { reference_hash: reference.hash(), rfm, rlcp })
    }

    pub fn rfm(&self) -> &RelativeFm {
        &self.rfm
    }

    pub fn rlcp(&self) -> &RlcpArray {
        &self.rlcp
    }

    pub fn reference_hash(&self) -> [u8; 32] {
        self.reference_hash
    }

    /// Target length including the endmarker.
    pub fn len(&self) -> usize {
        self.rfm.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn tree(&self) -> SuffixTree<&RelativeFm, &RlcpArray> {
        SuffixTree::new(&self.rfm, &self.rlcp)
    }

    /// Component sizes in bytes, excluding the reference.
    pub fn components(&self) -> Vec<(&'static str, usize)> {
        let mut out = vec![("rfm", self.rfm.size_in_bytes())];
        if let Some(rs) = self.rfm.rselect() {
            out.push(("rselect", rs.size_in_bytes()));
        }
        out.push(("rlcp", self.rlcp.size_in_bytes()));
        out
    }

    pub fn to_container(&self) -> Container {
        let mut c = Container::new();
        c.push(section::KIND, TARGET_KIND.to_vec());
        c.push(section::REFERENCE_HASH, self.reference_hash.to_vec());
        c.push(section::RELATIVE_FM, self.rfm.to_bytes());
        if let Some(rs) = self.rfm.rselect() {
            c.push(section::RSELECT, rs.to_bytes());
        }
        c.push(section::RELATIVE_LCP, self.rlcp.to_bytes());
        c
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.to_container().to_bytes()
    }

    /// Loads a target bundle; fails unless it was built against `reference`.
    pub fn from_bytes(bytes: &[u8], reference: &ReferenceBundle) -> Result<Self> {
        let c = Container::from_bytes(bytes)?;
        check_kind(&c, TARGET_KIND)?;
        let hash = c.require(section::REFERENCE_HASH)?;
        if hash != reference.hash() {
            return Err(Error::ReferenceMismatch);
        }
        let mut rfm = RelativeFm::from_bytes(c.require(section::RELATIVE_FM)?, reference.fm().clone())?;
        if let Some(b) = c.get(section::RSELECT) {
            rfm = rfm.with_rselect(RSelect::from_bytes(b)?)?;
        }
        let rlcp = RlcpArray::from_bytes(c.require(section::RELATIVE_LCP)?, reference.lcp().clone())?;
        if rlcp.len() != rfm.len() {
            return Err(Error::Format("relative LCP and FM-index lengths differ".into()));
        }
        Ok(TargetBundle { reference_hash: reference.hash(), rfm, rlcp })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(body: &[u8]) -> Text {
        Text::from_body(body).unwrap()
    }

    fn pair() -> (ReferenceBundle, TargetBundle) {
        let reference = ReferenceBundle::build(&text(b"GATTACA"), &ReferenceConfig::default());
        let target = TargetBundle::build(&reference, &text(b"GATTAGA"), &TargetConfig::default()).unwrap();
        (reference, target)
    }

    #[test]
    fn round_trip() {
        let (reference, target) = pair();
        let ref_bytes = reference.to_bytes();
        let loaded = ReferenceBundle::from_bytes(&ref_bytes).unwrap();
        assert_eq!(loaded.hash(), reference.hash());
        assert_eq!(loaded.to_bytes(), ref_bytes);
        let bytes = target.to_bytes();
        let loaded_target = TargetBundle::from_bytes(&bytes, &loaded).unwrap();
        assert_eq!(loaded_target.to_bytes(), bytes);
        assert!(loaded_target.rfm().has_rselect());
        let s = text(b"GATTAGA").symbols();
        let ss = SuffixStructures::new(&s);
        for i in 0..s.len() {
            assert_eq!(loaded_target.rfm().locate(i), ss.sa[i]);
            assert_eq!(loaded_target.rlcp().get(i), ss.lcp[i] as u64);
        }
        assert_eq!(loaded_target.tree().preorder().count(), target.tree().preorder().count());
    }

    #[test]
    fn wrong_reference_is_rejected() {
        let (_, target) = pair();
        let other = ReferenceBundle::build(&text(b"GATTACC"), &ReferenceConfig::default());
        assert!(matches!(TargetBundle::from_bytes(&target.to_bytes(), &other), Err(Error::ReferenceMismatch)));
    }

    #[test]
    fn corruption_and_kind_are_detected() {
        let (reference, target) = pair();
        let mut bytes = target.to_bytes();
        let last = bytes.len() - 10;
        bytes[last] ^= 1;
        assert!(matches!(TargetBundle::from_bytes(&bytes, &reference), Err(Error::Checksum(_))));
        assert!(ReferenceBundle::from_bytes(&target.to_bytes()).is_err());
    }

    #[test]
    fn alphabet_mismatch() {
        let reference = ReferenceBundle::build(&text(b"GATTACA"), &ReferenceConfig::default());
        assert!(TargetBundle::build(&reference, &text(b"GATTANA"), &TargetConfig::default()).is_err());
    }

    #[test]
    fn identical_texts_are_degenerate() {
        let reference = ReferenceBundle::build(&text(b"ACGTTGCAACGGT"), &ReferenceConfig::default());
        let target = TargetBundle::build(&reference, &text(b"ACGTTGCAACGGT"), &TargetConfig::default()).unwrap();
        // Only the endmarker is left outside the common subsequence.
        assert_eq!(target.rfm().lcs_len(), target.len() - 1);
        assert_eq!(target.rlcp().phrase_count(), 1);
    }

    #[test]
    fn deterministic() {
        let (_, a) = pair();
        let (_, b) = pair();
        assert_eq!(a.to_bytes(), b.to_bytes());
    }
}
