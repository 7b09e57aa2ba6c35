use super::{BitVector, RankSelect};
use crate::serialize::{self, tag, Serialize};

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::{self, Read, Write};

const LEAF_FLAG: u64 = 1 << 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Child {
    Node(u32),
    Leaf(u32),
}

impl Child {
    fn encode(self) -> u64 {
        match self {
            Child::Node(i) => i as u64,
            Child::Leaf(s) => LEAF_FLAG | s as u64,
        }
    }

    fn decode(word: u64) -> Self {
        if word & LEAF_FLAG != 0 {
            Child::Leaf((word & !LEAF_FLAG) as u32)
        } else {
            Child::Node(word as u32)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    bits: BitVector,
    children: [Child; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Code {
    bits: u64,
    len: u8,
}

/// A Huffman-shaped wavelet tree over dense `u32` symbols.
///
/// Symbols that never occur have no code: `rank` returns 0 and `select`
/// returns `None` for them. Node 0 is the root when the sequence has at least
/// two distinct symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaveletTree {
    len: usize,
    sigma: usize,
    nodes: Vec<Node>,
    // Only used when fewer than two distinct symbols occur.
    single: Option<u32>,
    codes: Vec<Option<Code>>,
    counts: Vec<usize>,
}

impl WaveletTree {
    /// Builds the tree over `seq`; every symbol must be smaller than `sigma`.
    pub fn new(seq: &[u32], sigma: usize) -> Self {
        let mut counts = vec![0usize; sigma];
        for &s in seq {
            assert!((s as usize) < sigma, "symbol {} outside alphabet of size {}", s, sigma);
            counts[s as usize] += 1;
        }
        let present: Vec<u32> = (0..sigma as u32).filter(|&s| counts[s as usize] > 0).collect();
        if present.len() < 2 {
            let mut codes = vec![None; sigma];
            if let Some(&s) = present.first() {
                codes[s as usize] = Some(Code { bits: 0, len: 0 });
            }
            return WaveletTree { len: seq.len(), sigma, nodes: Vec::new(), single: present.first().copied(), codes, counts };
        }

        // Huffman merge with ties broken by creation order, so shapes are deterministic.
        let mut heap = BinaryHeap::new();
        for &s in &present {
            heap.push(Reverse((counts[s as usize], s as u64, Child::Leaf(s).encode())));
        }
        let mut merged: Vec<[Child; 2]> = Vec::new();
        let mut order = sigma as u64;
        while heap.len() > 1 {
            let Reverse((w0, _, c0)) = heap.pop().unwrap();
            let Reverse((w1, _, c1)) = heap.pop().unwrap();
            merged.push([Child::decode(c0), Child::decode(c1)]);
            heap.push(Reverse((w0 + w1, order, Child::Node(merged.len() as u32 - 1).encode())));
            order += 1;
        }
        // Renumber so the root is node 0 and nodes appear in preorder.
        let root = merged.len() - 1;
        let mut shape: Vec<[Child; 2]> = Vec::with_capacity(merged.len());
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some((old, parent, side)) = stack.pop() {
            let new_index = shape.len();
            if parent != usize::MAX {
                shape[parent][side] = Child::Node(new_index as u32);
            }
            shape.push(merged[old]);
            for side in (0..2).rev() {
                if let Child::Node(c) = merged[old][side] {
                    stack.push((c as usize, new_index, side));
                }
            }
        }
        let codes = Self::assign_codes(&shape, sigma);

        let mut nodes: Vec<Option<Node>> = vec![None; shape.len()];
        let mut work = vec![(0usize, 0usize, seq.to_vec())];
        while let Some((index, depth, local)) = work.pop() {
            let mut halves = [Vec::new(), Vec::new()];
            let bits = BitVector::from_bits(local.iter().map(|&s| {
                let code = codes[s as usize].unwrap();
                let bit = (code.bits >> depth & 1) as usize;
                bit == 1
            }));
            for &s in &local {
                let code = codes[s as usize].unwrap();
                halves[(code.bits >> depth & 1) as usize].push(s);
            }
            drop(local);
            for (side, half) in halves.into_iter().enumerate() {
                if let Child::Node(c) = shape[index][side] {
                    work.push((c as usize, depth + 1, half));
                }
            }
            nodes[index] = Some(Node { bits, children: shape[index] });
        }
        let nodes = nodes.into_iter().map(|n| n.unwrap()).collect();
        WaveletTree { len: seq.len(), sigma, nodes, single: None, codes, counts }
    }

    fn assign_codes(shape: &[[Child; 2]], sigma: usize) -> Vec<Option<Code>> {
        let mut codes = vec![None; sigma];
        let mut stack = vec![(0usize, 0u64, 0u8)];
        while let Some((index, bits, len)) = stack.pop() {
            for (side, child) in shape[index].iter().enumerate() {
                let child_bits = bits | (side as u64) << len;
                match *child {
                    Child::Node(c) => stack.push((c as usize, child_bits, len + 1)),
                    Child::Leaf(s) => codes[s as usize] = Some(Code { bits: child_bits, len: len + 1 }),
                }
            }
        }
        codes
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Total occurrences of `c`.
    pub fn count(&self, c: u32) -> usize {
        self.counts.get(c as usize).copied().unwrap_or(0)
    }

    pub fn access(&self, i: usize) -> u32 {
        self.inverse_select(i).1
    }

    /// Returns `(rank_c(i), c)` where `c` is the symbol at position `i`.
    pub fn inverse_select(&self, mut i: usize) -> (usize, u32) {
        assert!(i < self.len, "index {} out of bounds for length {}", i, self.len);
        if let Some(s) = self.single {
            return (i, s);
        }
        let mut node = &self.nodes[0];
        loop {
            let bit = node.bits.get(i);
            i = node.bits.rank(i, bit);
            match node.children[bit as usize] {
                Child::Node(c) => node = &self.nodes[c as usize],
                Child::Leaf(s) => return (i, s),
            }
        }
    }

    /// Occurrences of `c` in `[0, i)`.
    pub fn rank(&self, c: u32, mut i: usize) -> usize {
        assert!(i <= self.len, "rank position {} beyond length {}", i, self.len);
        let Some(Some(code)) = self.codes.get(c as usize) else {
            return 0;
        };
        let mut node = 0usize;
        for depth in 0..code.len {
            let bit = code.bits >> depth & 1 == 1;
            let n = &self.nodes[node];
            i = n.bits.rank(i, bit);
            if let Child::Node(child) = n.children[bit as usize] {
                node = child as usize;
            }
        }
        i
    }

    /// Position of the occurrence of `c` with rank `k`.
    pub fn select(&self, c: u32, k: usize) -> Option<usize> {
        let code = (*self.codes.get(c as usize)?)?;
        if k >= self.counts[c as usize] {
            return None;
        }
        let mut path = [0u32; 64];
        let mut node = 0u32;
        for depth in 0..code.len as usize {
            path[depth] = node;
            if let Child::Node(child) = self.nodes[node as usize].children[(code.bits >> depth & 1) as usize] {
                node = child;
            }
        }
        let mut pos = k;
        for depth in (0..code.len as usize).rev() {
            let bit = code.bits >> depth & 1 == 1;
            pos = self.nodes[path[depth] as usize].bits.select(pos, bit)?;
        }
        Some(pos)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).map(move |i| self.access(i))
    }
}

impl Serialize for WaveletTree {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::WAVELET_TREE, self.len)?;
        serialize::write_u64(writer, self.sigma as u64)?;
        serialize::write_u64(writer, self.single.map_or(u64::MAX, |s| s as u64))?;
        serialize::write_u64(writer, self.nodes.len() as u64)?;
        for node in &self.nodes {
            serialize::write_u64(writer, node.children[0].encode())?;
            serialize::write_u64(writer, node.children[1].encode())?;
            node.bits.serialize(writer)?;
        }
        Ok(())
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let len = serialize::read_header(reader, tag::WAVELET_TREE)?;
        let sigma = serialize::read_usize(reader)?;
        let single = serialize::read_u64(reader)?;
        let node_count = serialize::read_usize(reader)?;
        if sigma > u32::MAX as usize || node_count >= sigma.max(1) {
            return Err(serialize::invalid_data("wavelet tree header out of range"));
        }
        let mut nodes = Vec::with_capacity(node_count);
        for _ in 0..node_count {
            let left = Child::decode(serialize::read_u64(reader)?);
            let right = Child::decode(serialize::read_u64(reader)?);
            for child in [left, right] {
                let ok = match child {
                    Child::Node(c) => (c as usize) < node_count && c as usize > nodes.len(),
                    Child::Leaf(s) => (s as usize) < sigma,
                };
                if !ok {
                    return Err(serialize::invalid_data("wavelet tree child out of range"));
                }
            }
            nodes.push(Node { bits: BitVector::load(reader)?, children: [left, right] });
        }
        let mut counts = vec![0usize; sigma];
        let (single, codes) = if node_count == 0 {
            let mut codes = vec![None; sigma];
            let single = if single == u64::MAX {
                if len != 0 {
                    return Err(serialize::invalid_data("nonempty wavelet tree without symbols"));
                }
                None
            } else {
                let s = single as usize;
                if s >= sigma {
                    return Err(serialize::invalid_data("wavelet tree symbol out of range"));
                }
                codes[s] = Some(Code { bits: 0, len: 0 });
                counts[s] = len;
                Some(s as u32)
            };
            (single, codes)
        } else {
            let shape: Vec<[Child; 2]> = nodes.iter().map(|n| n.children).collect();
            (None, Self::assign_codes(&shape, sigma))
        };
        let mut tree = WaveletTree { len, sigma, nodes, single, codes, counts };
        if tree.single.is_none() && node_count > 0 {
            if tree.nodes[0].bits.len() != len {
                return Err(serialize::invalid_data("wavelet tree root length mismatch"));
            }
            // Child bitvector lengths must match the parent's zero and one counts.
            for index in 0..tree.nodes.len() {
                let node = &tree.nodes[index];
                let sizes = [node.bits.count_zeros(), node.bits.count_ones()];
                for side in 0..2 {
                    match node.children[side] {
                        Child::Node(c) => {
                            if tree.nodes[c as usize].bits.len() != sizes[side] {
                                return Err(serialize::invalid_data("wavelet tree node length mismatch"));
                            }
                        }
                        Child::Leaf(s) => tree.counts[s as usize] = sizes[side],
                    }
                }
            }
        }
        Ok(tree)
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + 24 + self.nodes.iter().map(|n| 16 + n.bits.size_in_bytes()).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_against_scan(seq: &[u32], sigma: usize) {
        let wt = WaveletTree::new(seq, sigma);
        for (i, &s) in seq.iter().enumerate() {
            assert_eq!(wt.access(i), s);
        }
        for c in 0..sigma as u32 + 1 {
            let mut count = 0;
            for i in 0..=seq.len() {
                assert_eq!(wt.rank(c, i), count, "rank({c}, {i})");
                if i < seq.len() && seq[i] == c {
                    assert_eq!(wt.select(c, count), Some(i));
                    assert_eq!(wt.inverse_select(i), (count, c));
                    count += 1;
                }
            }
            assert_eq!(wt.select(c, count), None);
        }
        let total: usize = (0..sigma as u32).map(|c| wt.rank(c, seq.len())).sum();
        assert_eq!(total, seq.len());
    }

    #[test]
    fn bwt_example() {
        // ACTGA$TT with $ = 0, A = 1, C = 2, G = 3, T = 4.
        let seq = [1, 2, 4, 3, 1, 0, 4, 4];
        let wt = WaveletTree::new(&seq, 5);
        assert_eq!(wt.rank(4, 8), 3);
        assert_eq!(wt.access(5), 0);
        assert_eq!(wt.select(1, 1), Some(4));
        check_against_scan(&seq, 5);
    }

    #[test]
    fn random_sequences_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [0usize, 1, 2, 17, 200, 512] {
            for sigma in [1usize, 2, 5, 20, 256] {
                let skew = rng.gen_range(1..4);
                let seq: Vec<u32> = (0..n)
                    .map(|_| {
                        let r: u32 = rng.gen_range(0..sigma as u32);
                        r / skew
                    })
                    .collect();
                check_against_scan(&seq, sigma);
            }
        }
    }

    #[test]
    fn single_symbol_and_empty() {
        check_against_scan(&[3, 3, 3], 5);
        check_against_scan(&[], 5);
        let wt = WaveletTree::new(&[3, 3, 3], 5);
        assert_eq!(WaveletTree::from_bytes(&wt.to_bytes()).unwrap(), wt);
    }

    #[test]
    fn huffman_shape_gives_frequent_symbols_short_codes() {
        let mut seq = vec![0u32; 1000];
        seq.extend([1, 2, 3, 4]);
        let wt = WaveletTree::new(&seq, 5);
        assert_eq!(wt.codes[0].unwrap().len, 1);
        assert!(wt.codes[4].unwrap().len >= 2);
    }

    #[test]
    fn serialization_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let seq: Vec<u32> = (0..3000).map(|_| rng.gen_range(0..6)).collect();
        let wt = WaveletTree::new(&seq, 6);
        let bytes = wt.to_bytes();
        assert_eq!(bytes.len(), wt.size_in_bytes());
        let loaded = WaveletTree::from_bytes(&bytes).unwrap();
        assert_eq!(loaded, wt);
        assert_eq!(loaded.to_bytes(), bytes);
    }
}
