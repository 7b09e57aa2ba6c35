//! rmq/nsv/psv over an LCP array cut into blocks with a minima tree on top.

use std::ops::Range;

use super::minima::MinimaTree;
use crate::{Error, Result};

pub(crate) trait Blocked {
    fn len(&self) -> usize;
    fn block_of(&self, j: usize) -> usize;
    /// Positions of block `b`, clamped to the array.
    fn block_range(&self, b: usize) -> Range<usize>;
    /// Values at positions `range`, which lies inside block `b`.
    fn decode(&self, b: usize, range: Range<usize>) -> Vec<u64>;
    fn minima(&self) -> &MinimaTree;
}

fn leftmost_min(values: &[u64]) -> (usize, u64) {
    let mut best = (0, values[0]);
    for (k, &v) in values.iter().enumerate().skip(1) {
        if v < best.1 {
            best = (k, v);
        }
    }
    best
}

pub(crate) fn range(a: &impl Blocked, range: Range<usize>) -> Vec<u64> {
    assert!(range.end <= a.len(), "range beyond LCP array");
    let mut out = Vec::with_capacity(range.len());
    let mut j = range.start;
    while j < range.end {
        let b = a.block_of(j);
        let end = a.block_range(b).end.min(range.end);
        out.extend(a.decode(b, j..end));
        j = end;
    }
    out
}

pub(crate) fn rmq(a: &impl Blocked, sp: usize, ep: usize) -> Result<(usize, u64)> {
    if sp > ep || ep >= a.len() {
        return Err(Error::InvalidInput(format!("rmq range [{sp}, {ep}] outside [0, {})", a.len())));
    }
    let (l, r) = (a.block_of(sp), a.block_of(ep));
    let (l_range, r_range) = (a.block_range(l), a.block_range(r));
    // Blocks fully inside the query.
    let inner_l = if sp == l_range.start { l } else { l + 1 };
    let inner_r = if ep + 1 == r_range.end { Some(r) } else { r.checked_sub(1) };
    let inner = inner_r.filter(|&ir| ir >= inner_l);
    let Some(inner_r) = inner else {
        let values = range(a, sp..ep + 1);
        let (k, v) = leftmost_min(&values);
        return Ok((sp + k, v));
    };
    let minima = a.minima();
    let m = minima.range_min(inner_l, inner_r);
    let k = minima.next_leaf(inner_l, |v| v <= m).expect("minimum leaf exists");
    let k_range = a.block_range(k);
    let values = a.decode(k, k_range.clone());
    let offset = values.iter().position(|&v| v == m).expect("block holds its minimum");
    let mut best = (k_range.start + offset, m);
    if l < inner_l && minima.leaf(l) <= best.1 {
        let values = a.decode(l, sp..l_range.end);
        let (k, v) = leftmost_min(&values);
        if v <= best.1 {
            best = (sp + k, v);
        }
    }
    if r > inner_r && minima.leaf(r) < best.1 {
        let values = a.decode(r, r_range.start..ep + 1);
        let (k, v) = leftmost_min(&values);
        if v < best.1 {
            best = (r_range.start + k, v);
        }
    }
    Ok(best)
}

/// Next position after `i` whose value satisfies `pred(value, LCP[i])`.
pub(crate) fn next_by(a: &impl Blocked, i: usize, pred: impl Fn(u64, u64) -> bool) -> Option<(usize, u64)> {
    assert!(i < a.len(), "position beyond LCP array");
    let b = a.block_of(i);
    let values = a.decode(b, i..a.block_range(b).end);
    let v = values[0];
    if let Some(k) = values.iter().skip(1).position(|&x| pred(x, v)) {
        return Some((i + 1 + k, values[k + 1]));
    }
    let leaf = a.minima().next_leaf(b + 1, |m| pred(m, v))?;
    let leaf_range = a.block_range(leaf);
    let values = a.decode(leaf, leaf_range.clone());
    let k = values.iter().position(|&x| pred(x, v)).expect("block satisfies the predicate");
    Some((leaf_range.start + k, values[k]))
}

/// Previous position before `i` whose value satisfies `pred(value, LCP[i])`.
pub(crate) fn prev_by(a: &impl Blocked, i: usize, pred: impl Fn(u64, u64) -> bool) -> Option<(usize, u64)> {
    assert!(i < a.len(), "position beyond LCP array");
    let b = a.block_of(i);
    let start = a.block_range(b).start;
    let values = a.decode(b, start..i + 1);
    let v = values[values.len() - 1];
    if let Some(k) = values[..values.len() - 1].iter().rposition(|&x| pred(x, v)) {
        return Some((start + k, values[k]));
    }
    let leaf = a.minima().prev_leaf(b.checked_sub(1)?, |m| pred(m, v))?;
    let leaf_range = a.block_range(leaf);
    let values = a.decode(leaf, leaf_range.clone());
    let k = values.iter().rposition(|&x| pred(x, v)).expect("block satisfies the predicate");
    Some((leaf_range.start + k, values[k]))
}
