use std::ops::Range;

use super::tree::{Node, SuffixTree};
use crate::rlcp::Lcp;
use crate::textindex::Csa;

/// Preorder traversal with Root, Leaf, FChild, NSibling and cached parents.
pub struct Preorder<'a, A, L> {
    tree: &'a SuffixTree<A, L>,
    ancestors: Vec<Node>,
    next: Option<Node>,
}

impl<'a, A: Csa, L: Lcp> Preorder<'a, A, L> {
    pub fn new(tree: &'a SuffixTree<A, L>) -> Self {
        Preorder { tree, ancestors: Vec::new(), next: Some(tree.root()) }
    }
}

impl<A: Csa, L: Lcp> Iterator for Preorder<'_, A, L> {
    type Item = Node;

    fn next(&mut self) -> Option<Node> {
        let v = self.next?;
        if let Some(child) = self.tree.fchild(v) {
            self.ancestors.push(v);
            self.next = Some(child);
            return Some(v);
        }
        let mut current = v;
        self.next = loop {
            if let Some(sibling) = self.tree.nsibling(current) {
                break Some(sibling);
            }
            match self.ancestors.pop() {
                Some(parent) => current = parent,
                None => break None,
            }
        };
        Some(v)
    }
}

/// A maximal substring of the query occurring in the text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalMatch {
    /// Query positions of the substring.
    pub query: Range<usize>,
    /// Suffixes of the text prefixed by the substring.
    pub node: Node,
    /// Length of the substring.
    pub depth: usize,
}

// Keeps the matches not contained in an earlier one. Ends never decrease
// with the start, so containment means an equal end.
fn push_maximal(out: &mut Vec<MaximalMatch>, m: MaximalMatch) {
    if m.depth == 0 {
        return;
    }
    if out.last().is_some_and(|last| last.query.end >= m.query.end) {
        return;
    }
    out.push(m);
}

impl<A: Csa, L: Lcp> SuffixTree<A, L> {
    pub fn preorder(&self) -> Preorder<'_, A, L> {
        Preorder::new(self)
    }

    /// Maximal substrings by matching statistics from left to right, using
    /// Root, SDepth, SLink, Child and Letter.
    pub fn maximal_substrings_forward(&self, query: &[u32]) -> Vec<MaximalMatch> {
        let n = query.len();
        let mut out = Vec::new();
        // The match is query[i..j]. `node` is its deepest ancestor with string
        // depth at most j - i; `edge` is the child of `node` whose edge holds
        // the end of the match when that depth is smaller.
        let (mut i, mut j) = (0, 0);
        let mut node = self.root();
        let mut node_depth = 0;
        let mut edge: Option<(Node, usize)> = None;
        while i < n {
            loop {
                let (w, w_depth) = match edge.take() {
                    Some(e) => e,
                    None => {
                        if j == n {
                            break;
                        }
                        let Some(w) = self.child(node, query[j]) else { break };
                        j += 1;
                        (w, self.sdepth(w))
                    }
                };
                // Letters along the edge, one Ψ step each.
                let mut rank = self.rank_at(w.sp, j - i);
                while j - i < w_depth && j < n && self.csa().first_symbol(rank) == query[j] {
                    rank = self.csa().psi(rank);
                    j += 1;
                }
                if j - i == w_depth {
                    node = w;
                    node_depth = w_depth;
                } else {
                    edge = Some((w, w_depth));
                    break;
                }
            }
            let locus = edge.map_or(node, |e| e.0);
            push_maximal(&mut out, MaximalMatch { query: i..j, node: locus, depth: j - i });
            edge = None;
            if j == i {
                i += 1;
                j = i;
                continue;
            }
            // Drop the first symbol and rescan down to depth j - i.
            i += 1;
            if self.is_root(node) {
                node_depth = 0;
            } else {
                node = self.slink(node);
                node_depth -= 1;
            }
            while node_depth < j - i {
                let w = self.child(node, query[i + node_depth]).expect("suffix of a match occurs");
                let w_depth = self.sdepth(w);
                if w_depth > j - i {
                    edge = Some((w, w_depth));
                    break;
                }
                node = w;
                node_depth = w_depth;
            }
        }
        out
    }

    /// Maximal substrings by backward search from right to left, using LF,
    /// Parent and SDepth.
    pub fn maximal_substrings_backward(&self, query: &[u32]) -> Vec<MaximalMatch> {
        let mut matches = Vec::with_capacity(query.len());
        // query[i + 1..end] matches the suffixes in `node`, with length `depth`.
        let mut node = self.root();
        let mut depth = 0;
        let mut end = query.len();
        for i in (0..query.len()).rev() {
            let c = query[i];
            loop {
                let range = self.csa().backward_step(node.sp..node.ep + 1, c);
                if !range.is_empty() {
                    node = Node::new(range.start, range.end - 1);
                    depth += 1;
                    break;
                }
                if depth == 0 {
                    // Symbol absent from the text.
                    end = i;
                    break;
                }
                let parent = self.parent(node).expect("non-root interval");
                depth = self.sdepth(parent);
                node = parent;
                end = i + 1 + depth;
            }
            matches.push(MaximalMatch { query: i..end, node, depth });
        }
        let mut out = Vec::new();
        for m in matches.into_iter().rev() {
            push_maximal(&mut out, m);
        }
        out
    }
}
