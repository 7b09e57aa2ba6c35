use crate::rlcp::Lcp;
use crate::textindex::Csa;

/// A suffix tree node as its lcp-interval: suffix ranks `sp..=ep`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub sp: usize,
    pub ep: usize,
}

impl Node {
    pub fn new(sp: usize, ep: usize) -> Self {
        assert!(sp <= ep, "empty interval");
        Node { sp, ep }
    }

    /// Number of leaves below the node.
    pub fn count(&self) -> usize {
        self.ep - self.sp + 1
    }

    pub fn is_leaf(&self) -> bool {
        self.sp == self.ep
    }

    /// Whether `self` is an ancestor of `other` (or the same node).
    pub fn is_ancestor_of(&self, other: &Node) -> bool {
        self.sp <= other.sp && other.ep <= self.ep
    }
}

/// Up to this depth, symbols on a root path are read with Ψ steps; deeper
/// ones through `locate` and `inverse` when the CSA supports them.
const PSI_WALK_LIMIT: usize = 32;

/// A compressed suffix tree over a CSA and an LCP array, navigating by
/// nearest smaller values and range minima.
#[derive(Clone, Debug)]
pub struct SuffixTree<A, L> {
    csa: A,
    lcp: L,
}

impl<A: Csa, L: Lcp> SuffixTree<A, L> {
    pub fn new(csa: A, lcp: L) -> Self {
        assert_eq!(csa.len(), lcp.len(), "CSA and LCP array lengths differ");
        assert!(!csa.is_empty(), "empty text");
        SuffixTree { csa, lcp }
    }

    pub fn csa(&self) -> &A {
        &self.csa
    }

    pub fn lcp(&self) -> &L {
        &self.lcp
    }

    /// Number of leaves, the text length including the endmarker.
    pub fn len(&self) -> usize {
        self.csa.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> Node {
        Node::new(0, self.len() - 1)
    }

    pub fn is_root(&self, v: Node) -> bool {
        v == self.root()
    }

    // LCP with -1 at both ends.
    fn lcp_at(&self, i: usize) -> i64 {
        if i == 0 || i >= self.len() {
            -1
        } else {
            self.lcp.get(i) as i64
        }
    }

    /// Text position of the suffix at leaf `v`.
    pub fn locate_leaf(&self, v: Node) -> Option<usize> {
        v.is_leaf().then(|| self.csa.locate(v.sp))
    }

    /// String depth `|π(v)|`.
    pub fn sdepth(&self, v: Node) -> usize {
        if v.is_leaf() {
            self.len() - self.csa.locate(v.sp)
        } else {
            self.lcp.rmq(v.sp + 1, v.ep).expect("interval inside the LCP array").1 as usize
        }
    }

    /// Interval around position `k` bounded by smaller LCP values.
    fn enclosing(&self, k: usize) -> Node {
        let sp = self.lcp.psv(k).map_or(0, |p| p.0);
        let ep = self.lcp.nsv(k).map_or(self.len() - 1, |p| p.0 - 1);
        Node::new(sp, ep)
    }

    pub fn parent(&self, v: Node) -> Option<Node> {
        if self.is_root(v) {
            return None;
        }
        let k = if self.lcp_at(v.sp) >= self.lcp_at(v.ep + 1) { v.sp } else { v.ep + 1 };
        Some(self.enclosing(k))
    }

    pub fn fchild(&self, v: Node) -> Option<Node> {
        if v.is_leaf() {
            return None;
        }
        let (m, _) = self.lcp.rmq(v.sp + 1, v.ep).expect("interval inside the LCP array");
        Some(Node::new(v.sp, m - 1))
    }

    pub fn nsibling(&self, v: Node) -> Option<Node> {
        let next = v.ep + 1;
        if self.is_root(v) || next >= self.len() || self.lcp_at(next) < self.lcp_at(v.sp) {
            return None;
        }
        let ep = self.lcp.nsev(next).map_or(self.len() - 1, |p| p.0 - 1);
        Some(Node::new(next, ep))
    }

    /// Children in alphabetic order.
    pub fn children(&self, v: Node) -> Vec<Node> {
        let mut out = Vec::new();
        let mut child = self.fchild(v);
        while let Some(w) = child {
            out.push(w);
            child = self.nsibling(w);
        }
        out
    }

    pub fn lca(&self, v: Node, w: Node) -> Node {
        if v.is_ancestor_of(&w) {
            return v;
        }
        if w.is_ancestor_of(&v) {
            return w;
        }
        let (sp, ep) = (v.sp.min(w.sp), v.ep.max(w.ep));
        let (k, _) = self.lcp.rmq(sp + 1, ep).expect("interval inside the LCP array");
        self.enclosing(k)
    }

    // Node of depth `depth` enclosing the ranks `x..=y`, which share a prefix
    // of exactly that length.
    fn expand(&self, x: usize, y: usize, depth: usize) -> Node {
        if depth == 0 {
            return self.root();
        }
        if x == y {
            return Node::new(x, x);
        }
        let (k, value) = self.lcp.rmq(x + 1, y).expect("interval inside the LCP array");
        debug_assert_eq!(value as usize, depth);
        self.enclosing(k)
    }

    /// Suffix link; the root links to itself.
    pub fn slink(&self, v: Node) -> Node {
        if self.is_root(v) {
            return v;
        }
        let depth = self.sdepth(v);
        if v.is_leaf() {
            return if depth == 1 { self.root() } else { Node::new(self.csa.psi(v.sp), self.csa.psi(v.sp)) };
        }
        self.expand(self.csa.psi(v.sp), self.csa.psi(v.ep), depth - 1)
    }

    /// `k` suffix links at once, through `locate` and `inverse`.
    pub fn slink_k(&self, v: Node, k: usize) -> Node {
        if k == 0 {
            return v;
        }
        let depth = self.sdepth(v);
        if k >= depth {
            return self.root();
        }
        let x = self.csa.inverse(self.csa.locate(v.sp) + k);
        if v.is_leaf() {
            return Node::new(x, x);
        }
        let y = self.csa.inverse(self.csa.locate(v.ep) + k);
        self.expand(x, y, depth - k)
    }

    /// Rank of the suffix `depth` positions after the suffix of rank `i`.
    pub fn rank_at(&self, mut i: usize, depth: usize) -> usize {
        if depth > PSI_WALK_LIMIT && self.csa.supports_locate() {
            return self.csa.inverse(self.csa.locate(i) + depth);
        }
        for _ in 0..depth {
            i = self.csa.psi(i);
        }
        i
    }

    /// Symbol at offset `depth` of the suffix of rank `i`.
    pub fn symbol_at(&self, i: usize, depth: usize) -> u32 {
        self.csa.first_symbol(self.rank_at(i, depth))
    }

    /// `π(v)[i]`, for `i < sdepth(v)`.
    pub fn letter(&self, v: Node, i: usize) -> u32 {
        self.symbol_at(v.sp, i)
    }

    /// Child whose edge label starts with `c`.
    pub fn child(&self, v: Node, c: u32) -> Option<Node> {
        if v.is_leaf() {
            return None;
        }
        let depth = self.sdepth(v);
        let mut child = self.fchild(v);
        while let Some(w) = child {
            let first = self.symbol_at(w.sp, depth);
            if first == c {
                return Some(w);
            }
            if first > c {
                return None;
            }
            child = self.nsibling(w);
        }
        None
    }

    /// Tree depth, counting parent steps to the root.
    pub fn tdepth(&self, v: Node) -> usize {
        let mut depth = 0;
        let mut node = v;
        while let Some(p) = self.parent(node) {
            node = p;
            depth += 1;
        }
        depth
    }

    /// Highest ancestor of `v` with string depth at least `d`.
    pub fn laq_s(&self, v: Node, d: usize) -> Option<Node> {
        if self.sdepth(v) < d {
            return None;
        }
        let mut node = v;
        while let Some(p) = self.parent(node) {
            if self.sdepth(p) < d {
                break;
            }
            node = p;
        }
        Some(node)
    }

    /// Ancestor of `v` at tree depth `d`.
    pub fn laq_t(&self, v: Node, d: usize) -> Option<Node> {
        let depth = self.tdepth(v);
        if d > depth {
            return None;
        }
        let mut node = v;
        for _ in d..depth {
            node = self.parent(node).expect("ancestor exists");
        }
        Some(node)
    }
}
