use crate::serialize::{self, tag, Serialize};
use crate::succinct::SLArray;

use std::io::{self, Read, Write};

/// Branching factor of the minima tree.
pub const BRANCHING: usize = 64;

/// A 64-ary tree of minima over a sequence of leaf values, stored levelwise.
///
/// `values` holds the leaves followed by each internal level; `levels[j]` is
/// the offset of level `j` and the final entry is the total node count. The
/// parent of node `k` at level `j` is node `k / 64` at level `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaTree {
    values: SLArray,
    levels: Vec<u64>,
}

impl MinimaTree {
    pub fn new(leaves: &[u64]) -> Self {
        let mut all = leaves.to_vec();
        let mut levels = vec![0u64];
        let mut level = leaves.to_vec();
        while level.len() > 1 {
            level = level.chunks(BRANCHING).map(|c| *c.iter().min().expect("non-empty chunk")).collect();
            levels.push(all.len() as u64);
            all.extend_from_slice(&level);
        }
        levels.push(all.len() as u64);
        MinimaTree { values: SLArray::from_slice(&all), levels }
    }

    pub fn leaf_count(&self) -> usize {
        self.level_len(0)
    }

    pub fn level_count(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_len(&self, level: usize) -> usize {
        (self.levels[level + 1] - self.levels[level]) as usize
    }

    /// Level offsets into the node array, ending with the node count.
    pub fn level_offsets(&self) -> &[u64] {
        &self.levels
    }

    #[inline]
    pub fn node(&self, level: usize, k: usize) -> u64 {
        self.values.get(self.levels[level] as usize + k)
    }

    #[inline]
    pub fn leaf(&self, k: usize) -> u64 {
        self.values.get(k)
    }

    /// Global minimum, or `None` for an empty tree.
    pub fn root(&self) -> Option<u64> {
        (self.leaf_count() > 0).then(|| self.node(self.level_count() - 1, 0))
    }

    /// Minimum of leaves `a..=b`.
    pub fn range_min(&self, a: usize, b: usize) -> u64 {
        assert!(a <= b && b < self.leaf_count(), "leaf range out of bounds");
        let (mut a, mut end, mut level) = (a, b + 1, 0);
        let mut best = u64::MAX;
        loop {
            if end - a <= 2 * BRANCHING {
                for k in a..end {
                    best = best.min(self.node(level, k));
                }
                return best;
            }
            let (up_a, up_end) = (a.div_ceil(BRANCHING), end / BRANCHING);
            for k in (a..up_a * BRANCHING).chain(up_end * BRANCHING..end) {
                best = best.min(self.node(level, k));
            }
            a = up_a;
            end = up_end;
            level += 1;
        }
    }

    /// Smallest leaf `k >= from` whose value satisfies `pred`.
    pub fn next_leaf<P: Fn(u64) -> bool>(&self, from: usize, pred: P) -> Option<usize> {
        let (mut k, mut level) = (from, 0);
        loop {
            let len = self.level_len(level);
            if k >= len {
                return None;
            }
            let block_end = ((k / BRANCHING + 1) * BRANCHING).min(len);
            if let Some(hit) = (k..block_end).find(|&i| pred(self.node(level, i))) {
                return Some(self.descend(level, hit, &pred, false));
            }
            if block_end == len {
                return None;
            }
            k = k / BRANCHING + 1;
            level += 1;
        }
    }

    /// Largest leaf `k <= from` whose value satisfies `pred`.
    pub fn prev_leaf<P: Fn(u64) -> bool>(&self, from: usize, pred: P) -> Option<usize> {
        let (mut k, mut level) = (from.min(self.leaf_count().checked_sub(1)?), 0);
        loop {
            let block_start = k / BRANCHING * BRANCHING;
            if let Some(hit) = (block_start..=k).rev().find(|&i| pred(self.node(level, i))) {
                return Some(self.descend(level, hit, &pred, true));
            }
            if block_start == 0 {
                return None;
            }
            k = k / BRANCHING - 1;
            level += 1;
        }
    }

    fn descend<P: Fn(u64) -> bool>(&self, mut level: usize, mut k: usize, pred: &P, last: bool) -> usize {
        while level > 0 {
            level -= 1;
            let children = k * BRANCHING..((k + 1) * BRANCHING).min(self.level_len(level));
            k = if last {
                children.rev().find(|&i| pred(self.node(level, i)))
            } else {
                children.into_iter().find(|&i| pred(self.node(level, i)))
            }
            .expect("a child satisfies the predicate");
        }
        k
    }
}

impl Serialize for MinimaTree {
    fn serialize<W: Write>(&self, writer: &mut W) -> io::Result<()> {
        serialize::write_header(writer, tag::MINIMA_TREE, self.leaf_count())?;
        self.values.serialize(writer)?;
        serialize::write_u64_table(writer, &self.levels)
    }

    fn load<R: Read>(reader: &mut R) -> io::Result<Self> {
        let leaves = serialize::read_header(reader, tag::MINIMA_TREE)?;
        let values = SLArray::load(reader)?;
        let levels = serialize::read_u64_table(reader)?;
        let mut consistent = levels.len() >= 2 && levels[0] == 0 && levels[1] as usize == leaves;
        consistent &= levels.last().map(|&v| v as usize) == Some(values.len());
        for w in levels.windows(3) {
            consistent &= w[2] - w[1] == (w[1] - w[0]).div_ceil(BRANCHING as u64);
        }
        if !consistent || (levels.len() > 2 && levels[levels.len() - 1] - levels[levels.len() - 2] != 1) {
            return Err(serialize::invalid_data("inconsistent minima tree"));
        }
        Ok(MinimaTree { values, levels })
    }

    fn size_in_bytes(&self) -> usize {
        serialize::HEADER_BYTES + self.values.size_in_bytes() + serialize::words_size(self.levels.len())
    }
}
