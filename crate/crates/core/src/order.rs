//! Containment between modelling structures and the posets they form.
//!
//! Axiom structures are compared with `≲_I^G`: first by embedding their
//! internal tree structures, and, when those coincide, by embedding their
//! ground generalisations. Frame structures are compared by multiset
//! inclusion.

use std::collections::HashMap;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::abstraction::{ground_generalisation, internal_tree_structure, StructureMultiset};
use crate::ast::{AxiomTree, EdgeTag};
use crate::regularity::{ModellingStructure, StructureKind};

/// Where the root of the smaller tree may land.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EmbedMode {
    #[default]
    AnyNode,
    RootToRoot,
}

/// Flattened tree: nodes in post-order, so children precede their parent.
struct Flat<'a> {
    labels: Vec<&'a str>,
    children: Vec<Vec<(EdgeTag, usize)>>,
}

impl<'a> Flat<'a> {
    fn new(tree: &'a AxiomTree) -> Self {
        let mut flat = Flat {
            labels: Vec::new(),
            children: Vec::new(),
        };
        flat.push(tree);
        flat
    }

    fn push(&mut self, t: &'a AxiomTree) -> usize {
        let kids = t
            .children()
            .iter()
            .map(|(tag, c)| (*tag, self.push(c)))
            .collect();
        self.labels.push(t.label().text());
        self.children.push(kids);
        self.labels.len() - 1
    }

    fn root(&self) -> usize {
        self.labels.len() - 1
    }

    fn len(&self) -> usize {
        self.labels.len()
    }
}

/// Is there an injective map from the nodes of `small` into `big` that keeps
/// node labels, edge tags and the parent/child relation?
pub fn tree_embeds(small: &AxiomTree, big: &AxiomTree) -> bool {
    tree_embeds_with(small, big, EmbedMode::AnyNode)
}

pub fn tree_embeds_with(small: &AxiomTree, big: &AxiomTree, mode: EmbedMode) -> bool {
    let s = Flat::new(small);
    let b = Flat::new(big);
    if s.len() > b.len() {
        return false;
    }
    // matches[u * |b| + v]: subtree of s at u embeds with u ↦ v.
    let nb = b.len();
    let mut matches = FixedBitSet::with_capacity(s.len() * nb);
    for u in 0..s.len() {
        for v in 0..nb {
            if s.labels[u] == b.labels[v]
                && s.children[u].len() <= b.children[v].len()
                && children_assignable(&s.children[u], &b.children[v], |x, y| {
                    matches.contains(x * nb + y)
                })
            {
                matches.insert(u * nb + v);
            }
        }
    }
    let root = s.root();
    match mode {
        EmbedMode::AnyNode => (0..nb).any(|v| matches.contains(root * nb + v)),
        EmbedMode::RootToRoot => matches.contains(root * nb + b.root()),
    }
}

/// Bipartite matching (augmenting paths) of every small child onto a distinct
/// big child with the same tag.
fn children_assignable(
    small: &[(EdgeTag, usize)],
    big: &[(EdgeTag, usize)],
    ok: impl Fn(usize, usize) -> bool,
) -> bool {
    if small.is_empty() {
        return true;
    }
    let adj: Vec<Vec<usize>> = small
        .iter()
        .map(|(st, su)| {
            big.iter()
                .enumerate()
                .filter(|(_, (bt, bv))| st == bt && ok(*su, *bv))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    if adj.iter().any(Vec::is_empty) {
        return false;
    }
    let mut owner: Vec<Option<usize>> = vec![None; big.len()];
    for i in 0..small.len() {
        let mut seen = vec![false; big.len()];
        if !augment(i, &adj, &mut owner, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j].is_none_or(|k| augment(k, adj, owner, seen)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

/// `t ≲_I^G t2`.
pub fn axiom_contains(t: &AxiomTree, t2: &AxiomTree) -> bool {
    let (i1, i2) = (internal_tree_structure(t), internal_tree_structure(t2));
    if i1 == i2 {
        tree_embeds(&ground_generalisation(t), &ground_generalisation(t2))
    } else {
        tree_embeds(&i1, &i2)
    }
}

/// `c ≲_G c2`: multiset inclusion of ground-generalised frame axioms.
pub fn frame_contains(c: &StructureMultiset, c2: &StructureMultiset) -> bool {
    c.is_submultiset_of(c2)
}

pub fn structure_contains(a: &ModellingStructure, b: &ModellingStructure) -> Option<bool> {
    match (a, b) {
        (ModellingStructure::Axiom(x), ModellingStructure::Axiom(y)) => Some(axiom_contains(x, y)),
        (ModellingStructure::Frame(x), ModellingStructure::Frame(y)) => Some(frame_contains(x, y)),
        _ => None,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("structure `{0}` occurs more than once")]
    DuplicateStructure(String),
    #[error("element {index} is not a {expected:?} structure")]
    KindMismatch {
        index: usize,
        expected: StructureKind,
    },
    #[error("containment is not antisymmetric: `{0}` and `{1}` contain each other")]
    NotAntisymmetric(String, String),
    #[error("containment relation has a cycle")]
    Cyclic,
    #[error("time budget exhausted while building the poset")]
    TimedOut,
}

/// Distinct structures ordered by containment.
#[derive(Debug, Clone)]
pub struct StructurePoset {
    pub elements: Vec<ModellingStructure>,
    /// Row `i` holds every `j` with `i ≤ j`, including `i` itself.
    relation: Vec<FixedBitSet>,
    /// Covering pairs `(smaller, larger)`.
    pub hasse_edges: Vec<(usize, usize)>,
    /// Nodes on the longest chain.
    pub depth: usize,
    /// Largest number of covering successors of one element.
    pub max_branching: usize,
}

impl StructurePoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.relation[i].contains(j)
    }

    /// All pairs `(i, j)` with `i ≤ j`.
    pub fn relation_pairs(&self) -> Vec<(usize, usize)> {
        self.relation
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.ones().map(move |j| (i, j)))
            .collect()
    }
}

/// Builds the containment poset over `structures`, all of kind `kind`.
///
/// Pairwise checks stop with [`PosetError::TimedOut`] once `deadline` has
/// passed.
pub fn build_poset(
    structures: &[ModellingStructure],
    kind: StructureKind,
    deadline: Option<Instant>,
) -> Result<StructurePoset, PosetError> {
    let n = structures.len();
    let mut seen = HashMap::new();
    for (i, s) in structures.iter().enumerate() {
        if s.kind() != kind {
            return Err(PosetError::KindMismatch {
                index: i,
                expected: kind,
            });
        }
        if seen.insert(s.encoding(), i).is_some() {
            return Err(PosetError::DuplicateStructure(s.encoding()));
        }
    }

    let relation = match kind {
        StructureKind::Axiom => axiom_relation(structures, deadline)?,
        StructureKind::Frame => frame_relation(structures, deadline)?,
    };

    for i in 0..n {
        for j in relation[i].ones() {
            if j > i && relation[j].contains(i) {
                return Err(PosetError::NotAntisymmetric(
                    structures[i].encoding(),
                    structures[j].encoding(),
                ));
            }
        }
    }

    let strict: Vec<FixedBitSet> = relation
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.set(i, false);
            r
        })
        .collect();
    let mut hasse_edges = Vec::new();
    let mut max_branching = 0;
    for (i, row) in strict.iter().enumerate() {
        let mut covers = row.clone();
        for j in row.ones() {
            covers.difference_with(&strict[j]);
        }
        max_branching = max_branching.max(covers.count_ones(..));
        hasse_edges.extend(covers.ones().map(|j| (i, j)));
    }

    let depth = longest_chain(&strict)?;
    Ok(StructurePoset {
        elements: structures.to_vec(),
        relation,
        hasse_edges,
        depth,
        max_branching,
    })
}

fn check_deadline(deadline: Option<Instant>) -> Result<(), PosetError> {
    match deadline {
        Some(d) if Instant::now() >= d => Err(PosetError::TimedOut),
        _ => Ok(()),
    }
}

fn axiom_relation(
    structures: &[ModellingStructure],
    deadline: Option<Instant>,
) -> Result<Vec<FixedBitSet>, PosetError> {
    let n = structures.len();
    let trees: Vec<&AxiomTree> = structures
        .iter()
        .map(|s| match s {
            ModellingStructure::Axiom(t) => t,
            ModellingStructure::Frame(_) => unreachable!("kinds checked"),
        })
        .collect();
    let ground: Vec<AxiomTree> = trees.iter().map(|t| ground_generalisation(t)).collect();

    // Distinct internal structures get a shared id so that their embedding
    // checks are computed once.
    let mut internal_ids: HashMap<String, usize> = HashMap::new();
    let mut internals: Vec<AxiomTree> = Vec::new();
    let internal_of: Vec<usize> = trees
        .iter()
        .map(|t| {
            let i = internal_tree_structure(t);
            let key = i.canonical_encoding();
            *internal_ids.entry(key).or_insert_with(|| {
                internals.push(i);
                internals.len() - 1
            })
        })
        .collect();
    let mut internal_memo: HashMap<(usize, usize), bool> = HashMap::new();

    let mut relation = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        check_deadline(deadline)?;
        relation[i].insert(i);
        for j in 0..n {
            if i == j {
                continue;
            }
            let (a, b) = (internal_of[i], internal_of[j]);
            let contained = if a == b {
                tree_embeds(&ground[i], &ground[j])
            } else {
                *internal_memo
                    .entry((a, b))
                    .or_insert_with(|| tree_embeds(&internals[a], &internals[b]))
            };
            if contained {
                relation[i].insert(j);
            }
        }
    }
    Ok(relation)
}

fn frame_relation(
    structures: &[ModellingStructure],
    deadline: Option<Instant>,
) -> Result<Vec<FixedBitSet>, PosetError> {
    let n = structures.len();
    let mut relation = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        check_deadline(deadline)?;
        relation[i].insert(i);
        for j in 0..n {
            if i != j && structure_contains(&structures[i], &structures[j]) == Some(true) {
                relation[i].insert(j);
            }
        }
    }
    Ok(relation)
}

/// Longest chain (in nodes) of a strict order given as successor sets.
fn longest_chain(strict: &[FixedBitSet]) -> Result<usize, PosetError> {
    let n = strict.len();
    let mut indegree = vec![0usize; n];
    for row in strict {
        for j in row.ones() {
            indegree[j] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut longest = vec![1usize; n];
    let mut visited = 0;
    while let Some(i) = queue.pop() {
        visited += 1;
        for j in strict[i].ones() {
            longest[j] = longest[j].max(longest[i] + 1);
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push(j);
            }
        }
    }
    if visited != n {
        return Err(PosetError::Cyclic);
    }
    Ok(longest.into_iter().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Constructor::*, LeafKind};

    fn c(n: &str) -> AxiomTree {
        AxiomTree::class(format!("<{n}>"))
    }
    fn r() -> AxiomTree {
        AxiomTree::leaf(LeafKind::ObjectProperty, "<R>")
    }
    fn star() -> AxiomTree {
        AxiomTree::placeholder()
    }
    fn sub(a: AxiomTree, b: AxiomTree) -> AxiomTree {
        AxiomTree::node(SubClassOf, vec![a, b])
    }
    fn some(p: AxiomTree, f: AxiomTree) -> AxiomTree {
        AxiomTree::node(ObjectSomeValuesFrom, vec![p, f])
    }
    fn and(xs: Vec<AxiomTree>) -> AxiomTree {
        AxiomTree::node(ObjectIntersectionOf, xs)
    }
    fn axiom(t: AxiomTree) -> ModellingStructure {
        ModellingStructure::Axiom(ground_generalisation(&t))
    }

    #[test]
    fn nested_existential_contains_simple_one() {
        let a1 = sub(c("A"), some(r(), c("B")));
        let a2 = sub(c("A"), some(r(), some(r(), c("B"))));
        assert!(tree_embeds(
            &internal_tree_structure(&a1),
            &internal_tree_structure(&a2)
        ));
        assert!(axiom_contains(&a1, &a2));
        assert!(!axiom_contains(&a2, &a1));
    }

    #[test]
    fn wider_conjunction_contains_narrower() {
        let a1 = sub(c("A"), and(vec![c("C1"), c("C2")]));
        let a2 = sub(c("A"), and(vec![c("C1"), c("C2"), c("C3")]));
        assert_eq!(internal_tree_structure(&a1), internal_tree_structure(&a2));
        assert!(axiom_contains(&a1, &a2));
        assert!(!axiom_contains(&a2, &a1));
    }

    #[test]
    fn different_axiom_kinds_are_incomparable() {
        let s = sub(star(), star());
        let d = AxiomTree::node(DisjointClasses, vec![star(), star()]);
        assert!(!axiom_contains(&s, &d));
        assert!(!axiom_contains(&d, &s));
    }

    #[test]
    fn embedding_basics() {
        let t = sub(c("A"), some(r(), and(vec![c("B"), c("C")])));
        assert!(tree_embeds(&t, &t));
        assert!(tree_embeds_with(&t, &t, EmbedMode::RootToRoot));
        let inner = some(r(), c("B"));
        assert!(!tree_embeds(&inner, &t)); // filler is ⊓, not B
        let inner = some(r(), and(vec![c("C")]));
        assert!(tree_embeds(&inner, &t));
        assert!(!tree_embeds_with(&inner, &t, EmbedMode::RootToRoot));
        let big_exists = some(r(), some(r(), some(r(), c("A"))));
        assert!(!tree_embeds(
            &sub(star(), star()),
            &ground_generalisation(&big_exists)
        ));
    }

    #[test]
    fn embedding_requires_injective_children() {
        let two = and(vec![star(), star()]);
        let one = and(vec![star()]);
        assert!(tree_embeds(&one, &two));
        assert!(!tree_embeds(&two, &one));
        // operands must land on distinct children even if both fit
        let needs_two = and(vec![some(star(), star()), some(star(), star())]);
        let has_one = and(vec![some(star(), star()), star()]);
        assert!(!tree_embeds(&needs_two, &has_one));
    }

    #[test]
    fn edge_tags_must_match() {
        let a = sub(AxiomTree::node(ObjectComplementOf, vec![star()]), star());
        let b = sub(star(), AxiomTree::node(ObjectComplementOf, vec![star()]));
        assert!(!tree_embeds(&a, &b));
    }

    #[test]
    fn frame_containment() {
        let atomic = ground_generalisation(&sub(c("A"), c("B")));
        let ex = ground_generalisation(&sub(c("A"), some(r(), c("B"))));
        let disj = AxiomTree::node(DisjointClasses, vec![star(), star()]);
        let one: StructureMultiset = [atomic.clone()].into_iter().collect();
        let mixed: StructureMultiset = [atomic.clone(), ex].into_iter().collect();
        assert!(frame_contains(&one, &mixed));
        let two: StructureMultiset = [atomic.clone(), atomic.clone()].into_iter().collect();
        let other: StructureMultiset = [atomic, disj].into_iter().collect();
        assert!(!frame_contains(&two, &other));
        assert!(frame_contains(&StructureMultiset::new(), &other));
    }

    #[test]
    fn fig1_poset_is_a_chain() {
        let s = vec![
            axiom(sub(c("A"), and(vec![c("A1"), c("A2")]))),
            axiom(sub(c("C"), and(vec![c("C1"), c("C2"), c("C3")]))),
        ];
        let p = build_poset(&s, StructureKind::Axiom, None).unwrap();
        assert_eq!(p.hasse_edges, vec![(0, 1)]);
        assert_eq!(p.depth, 2);
        assert_eq!(p.max_branching, 1);
    }

    #[test]
    fn atomic_structures_form_an_antichain() {
        let s = vec![
            axiom(sub(c("A"), c("B"))),
            axiom(AxiomTree::node(EquivalentClasses, vec![c("A"), c("B")])),
        ];
        let p = build_poset(&s, StructureKind::Axiom, None).unwrap();
        assert!(p.hasse_edges.is_empty());
        assert_eq!(p.depth, 1);
        assert_eq!(p.max_branching, 0);

        let p = build_poset(&s[..1], StructureKind::Axiom, None).unwrap();
        assert_eq!((p.depth, p.max_branching), (1, 0));

        let p = build_poset(&[], StructureKind::Axiom, None).unwrap();
        assert_eq!((p.depth, p.max_branching), (0, 0));
    }

    #[test]
    fn hasse_diagram_skips_transitive_pairs() {
        // ⊑∃ < ⊑∃∃ < ⊑∃∃∃, and ⊑∃ < ⊑∃(⊓(∃,∃)) which is incomparable to the rest
        let s = vec![
            axiom(sub(c("A"), some(r(), c("B")))),
            axiom(sub(c("A"), some(r(), some(r(), c("B"))))),
            axiom(sub(c("A"), some(r(), some(r(), some(r(), c("B")))))),
            axiom(sub(
                c("A"),
                some(r(), and(vec![some(r(), c("B")), some(r(), c("C"))])),
            )),
        ];
        let p = build_poset(&s, StructureKind::Axiom, None).unwrap();
        assert!(p.le(0, 2));
        assert_eq!(p.hasse_edges, vec![(0, 1), (0, 3), (1, 2)]);
        assert_eq!(p.depth, 3);
        assert_eq!(p.max_branching, 2);
    }

    #[test]
    fn rejects_duplicates_and_mixed_kinds() {
        let s = vec![axiom(sub(c("A"), c("B"))), axiom(sub(c("C"), c("D")))];
        assert!(matches!(
            build_poset(&s, StructureKind::Axiom, None),
            Err(PosetError::DuplicateStructure(_))
        ));
        let s = vec![
            axiom(sub(c("A"), c("B"))),
            ModellingStructure::Frame(StructureMultiset::new()),
        ];
        assert_eq!(
            build_poset(&s, StructureKind::Axiom, None).unwrap_err(),
            PosetError::KindMismatch {
                index: 1,
                expected: StructureKind::Axiom
            }
        );
    }

    #[test]
    fn expired_deadline_times_out() {
        let s = vec![axiom(sub(c("A"), c("B")))];
        let past = Instant::now();
        assert_eq!(
            build_poset(&s, StructureKind::Axiom, Some(past)).unwrap_err(),
            PosetError::TimedOut
        );
    }
}
