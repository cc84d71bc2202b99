//! The Hamming tree.
//!
//! A node at level `i` stands for the string `0^(n−i−ℓ) 1^ℓ b`, where `b`
//! is the fixed suffix of length `i` and `ℓ = k − HW(b)` ones remain to be
//! placed in the first `n − i` positions. An internal node splits on the
//! last undetermined position:
//!
//! * left child: level `i+1`, `ℓ` ones, suffix `0b`
//! * right child: level `i+1`, `ℓ−1` ones, suffix `1b` (same full string as the parent)
//!
//! A node is a leaf once `ℓ = 0` or `ℓ = n − i`, i.e. its string is forced.
//! The leaves enumerate every weight-`k` string exactly once.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::state::{binomial, BitString, MAX_N};

/// Index of a node in [`HammingTree`]'s preorder arena.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A node of the tree. The suffix is packed into a single word, so storage
/// is constant per node regardless of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HammingNode {
    level: u32,
    ones: u32,
    suffix: u64,
    children: Option<(NodeId, NodeId)>,
}

impl HammingNode {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Ones still to be placed in the undetermined prefix.
    pub fn ones(&self) -> u32 {
        self.ones
    }

    pub fn suffix(&self) -> BitString {
        BitString::from_bits(self.suffix, self.level)
    }

    pub fn left(&self) -> Option<NodeId> {
        self.children.map(|(l, _)| l)
    }

    pub fn right(&self) -> Option<NodeId> {
        self.children.map(|(_, r)| r)
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeCounts {
    pub leaves: u64,
    pub internal: u64,
}

/// Binary tree whose leaves enumerate all weight-`k` strings of length `n`.
///
/// Nodes are stored in preorder, so every child has a larger index than its
/// parent and the root is [`NodeId::ROOT`].
#[derive(Clone, Debug)]
pub struct HammingTree {
    n: u32,
    k: u32,
    nodes: Vec<HammingNode>,
}

impl HammingTree {
    pub fn build(n: u32, k: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidN(n));
        }
        if k > n {
            return Err(Error::InvalidK { n, k });
        }
        let leaves = binomial(n, k);
        let capacity = usize::try_from(leaves.saturating_mul(2)).unwrap_or(usize::MAX);
        let mut tree = HammingTree {
            n,
            k,
            nodes: Vec::with_capacity(capacity.saturating_sub(1)),
        };
        tree.grow(0, k, 0);
        Ok(tree)
    }

    fn grow(&mut self, level: u32, ones: u32, suffix: u64) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(HammingNode { level, ones, suffix, children: None });
        if ones != 0 && ones != self.n - level {
            let left = self.grow(level + 1, ones, suffix);
            let right = self.grow(level + 1, ones - 1, suffix | (1 << level));
            self.nodes[id.index()].children = Some((left, right));
        }
        id
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn root(&self) -> NodeId {
        NodeId::ROOT
    }

    pub fn node(&self, id: NodeId) -> &HammingNode {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in preorder (left subtree before right subtree).
    pub fn preorder(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// `0^(n−i−ℓ) 1^ℓ b` for the node.
    pub fn full_string(&self, id: NodeId) -> BitString {
        let node = self.node(id);
        let ones_block = ((1u64 << node.ones) - 1) << node.level;
        BitString::from_bits(ones_block | node.suffix, self.n)
    }

    pub fn leaves_preorder(&self) -> Vec<BitString> {
        self.preorder()
            .filter(|&id| self.node(id).is_leaf())
            .map(|id| self.full_string(id))
            .collect()
    }

    pub fn count_nodes(&self) -> NodeCounts {
        let leaves = self.nodes.iter().filter(|n| n.is_leaf()).count() as u64;
        NodeCounts {
            leaves,
            internal: self.nodes.len() as u64 - leaves,
        }
    }

    /// Deepest level holding an internal node, or `None` for a single leaf.
    pub fn max_internal_level(&self) -> Option<u32> {
        self.nodes.iter().filter(|n| !n.is_leaf()).map(|n| n.level).max()
    }

    /// Graphviz rendering; each node is labelled with its string and `(i, ℓ)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph hamming_tree_n{}_k{} {{", self.n, self.k);
        out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
        for id in self.preorder() {
            let node = self.node(id);
            let style = if node.is_leaf() { ", style=rounded" } else { "" };
            let _ = writeln!(
                out,
                "  v{} [label=\"{}\\n(i={}, l={})\"{}];",
                id.0,
                self.full_string(id),
                node.level,
                node.ones,
                style
            );
        }
        for id in self.preorder() {
            if let Some((left, right)) = self.node(id).children {
                let _ = writeln!(out, "  v{} -> v{} [label=\"0\"];", id.0, left.0);
                let _ = writeln!(out, "  v{} -> v{} [label=\"1\"];", id.0, right.0);
            }
        }
        out.push_str("}\n");
        out
    }
}
