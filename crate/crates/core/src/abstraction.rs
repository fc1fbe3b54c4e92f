//! The ground generalisation `G` and internal tree structure `I`, and their
//! lifting from single trees to multisets of trees.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ast::{AxiomTree, NodeLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Abstraction {
    /// Replace every leaf label with `*`.
    #[serde(rename = "G")]
    Ground,
    /// Delete every leaf and the branch leading to it.
    #[serde(rename = "I")]
    Internal,
}

impl Abstraction {
    pub fn apply(self, tree: &AxiomTree) -> AxiomTree {
        match self {
            Abstraction::Ground => ground_generalisation(tree),
            Abstraction::Internal => internal_tree_structure(tree),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Abstraction::Ground => "G",
            Abstraction::Internal => "I",
        }
    }
}

impl fmt::Display for Abstraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Abstraction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "G" | "g" | "ground" => Ok(Abstraction::Ground),
            "I" | "i" | "internal" => Ok(Abstraction::Internal),
            _ => Err(format!("unknown abstraction `{s}` (expected G or I)")),
        }
    }
}

pub fn ground_generalisation(tree: &AxiomTree) -> AxiomTree {
    tree.map_leaves(&|_| NodeLabel::placeholder())
}

/// # Panics
///
/// Panics when given a bare leaf, which has no internal structure.
pub fn internal_tree_structure(tree: &AxiomTree) -> AxiomTree {
    tree.without_leaves()
        .expect("internal tree structure of a leaf is empty")
}

/// A multiset of abstracted trees keyed by canonical encoding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureMultiset {
    entries: BTreeMap<String, (AxiomTree, usize)>,
}

impl StructureMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, tree: AxiomTree) {
        self.insert_many(tree, 1);
    }

    pub fn insert_many(&mut self, tree: AxiomTree, count: usize) {
        if count == 0 {
            return;
        }
        self.entries
            .entry(tree.canonical_encoding())
            .or_insert((tree, 0))
            .1 += count;
    }

    pub fn multiplicity(&self, encoding: &str) -> usize {
        self.entries.get(encoding).map_or(0, |(_, m)| *m)
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> usize {
        self.entries.values().map(|(_, m)| m).sum()
    }

    /// Number of distinct structures.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(encoding, tree, multiplicity)` in encoding order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &AxiomTree, usize)> {
        self.entries.iter().map(|(k, (t, m))| (k.as_str(), t, *m))
    }

    /// `{enc^m,enc^m}` with entries sorted by encoding.
    pub fn canonical_encoding(&self) -> String {
        let body: Vec<String> = self
            .entries
            .iter()
            .map(|(k, (_, m))| format!("{k}^{m}"))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    /// `{SubClassOf(*, *)^2, ...}`, sorted by encoding.
    pub fn render(&self) -> String {
        let body: Vec<String> = self
            .entries
            .values()
            .map(|(t, m)| format!("{}^{m}", t.render()))
            .collect();
        format!("{{{}}}", body.join(", "))
    }

    /// Multiset inclusion: every multiplicity in `self` is at most the one in
    /// `other`.
    pub fn is_submultiset_of(&self, other: &StructureMultiset) -> bool {
        self.entries
            .iter()
            .all(|(k, (_, m))| *m <= other.multiplicity(k))
    }

    /// Largest depth among member trees.
    pub fn max_depth(&self) -> usize {
        self.entries
            .values()
            .map(|(t, _)| t.depth())
            .max()
            .unwrap_or(0)
    }

    /// Node count of the forest, repeated members counted with multiplicity.
    pub fn node_count(&self) -> usize {
        self.entries.values().map(|(t, m)| t.node_count() * m).sum()
    }
}

impl FromIterator<AxiomTree> for StructureMultiset {
    fn from_iter<T: IntoIterator<Item = AxiomTree>>(iter: T) -> Self {
        let mut ms = StructureMultiset::new();
        for t in iter {
            ms.insert(t);
        }
        ms
    }
}

/// Applies `abstraction` to each tree and accumulates multiplicities.
pub fn lift<'a, I>(trees: I, abstraction: Abstraction) -> StructureMultiset
where
    I: IntoIterator<Item = &'a AxiomTree>,
{
    trees.into_iter().map(|t| abstraction.apply(t)).collect()
}
