//! Random ontology generation and brute-force oracles shared by the
//! integration suites.

#![allow(dead_code)]

use std::path::PathBuf;

use owlstruct::abstraction::StructureMultiset;
use owlstruct::ast::{AxiomTree, NodeLabel};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

// ---------------------------------------------------------------------------
// Generation

const CLASSES: [&str; 4] = [":A", ":B", ":C", "owl:Thing"];
const OBJECT_PROPS: [&str; 2] = [":p", ":q"];
const INDIVIDUALS: [&str; 2] = [":i", ":j"];

fn pick<'a, R: Rng>(rng: &mut R, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

/// Random class expression in functional syntax, at most `depth` constructors deep.
pub fn class_expression<R: Rng>(rng: &mut R, depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.45) {
        return pick(rng, &CLASSES).to_string();
    }
    let d = depth - 1;
    let p = pick(rng, &OBJECT_PROPS);
    match rng.gen_range(0..12) {
        0 | 1 => {
            let n = rng.gen_range(2..=3);
            let ops: Vec<String> = (0..n).map(|_| class_expression(rng, d)).collect();
            format!("ObjectIntersectionOf({})", ops.join(" "))
        }
        2 => format!(
            "ObjectUnionOf({} {})",
            class_expression(rng, d),
            class_expression(rng, d)
        ),
        3 => format!("ObjectComplementOf({})", class_expression(rng, d)),
        4 | 5 => format!("ObjectSomeValuesFrom({p} {})", class_expression(rng, d)),
        6 => format!("ObjectAllValuesFrom({p} {})", class_expression(rng, d)),
        7 => format!("ObjectHasValue({p} {})", pick(rng, &INDIVIDUALS)),
        8 => {
            let n = rng.gen_range(0..3);
            if rng.gen_bool(0.5) {
                format!("ObjectMinCardinality({n} {p} {})", class_expression(rng, d))
            } else {
                format!("ObjectMaxCardinality({n} {p})")
            }
        }
        9 => "DataSomeValuesFrom(:d xsd:string)".to_string(),
        10 => format!("DataHasValue(:d \"{}\")", rng.gen_range(0..2)),
        _ => {
            if rng.gen_bool(0.5) {
                format!("ObjectOneOf({})", pick(rng, &INDIVIDUALS))
            } else {
                format!("ObjectHasSelf({p})")
            }
        }
    }
}

pub fn class_axiom<R: Rng>(rng: &mut R, depth: usize) -> String {
    match rng.gen_range(0..10) {
        0..=5 => format!(
            "SubClassOf({} {})",
            class_expression(rng, depth),
            class_expression(rng, depth)
        ),
        6 | 7 => {
            let n = rng.gen_range(2..=3);
            let ops: Vec<String> = (0..n).map(|_| class_expression(rng, depth)).collect();
            format!("EquivalentClasses({})", ops.join(" "))
        }
        8 => format!(
            "DisjointClasses({} {})",
            class_expression(rng, depth),
            class_expression(rng, depth)
        ),
        _ => format!(
            "DisjointUnion({} {} {})",
            pick(rng, &CLASSES[..3]),
            class_expression(rng, depth),
            class_expression(rng, depth)
        ),
    }
}

/// Functional-syntax ontology with `n` class axioms and a sprinkling of
/// declarations.
pub fn ontology<R: Rng>(rng: &mut R, n: usize, depth: usize) -> String {
    let mut s =
        String::from("Prefix(:=<http://example.org/gen#>)\nOntology(<http://example.org/gen>\n");
    for _ in 0..n {
        if rng.gen_bool(0.1) {
            s.push_str("Declaration(Class(:A))\n");
        }
        s.push_str(&class_axiom(rng, depth));
        s.push('\n');
    }
    s.push_str(")\n");
    s
}

// ---------------------------------------------------------------------------
// Oracles

fn label_text(t: &AxiomTree) -> &str {
    t.label().text()
}

/// Unordered tree equality by exhaustive child matching.
pub fn unordered_eq(a: &AxiomTree, b: &AxiomTree) -> bool {
    if label_text(a) != label_text(b) || a.children().len() != b.children().len() {
        return false;
    }
    let mut used = vec![false; b.children().len()];
    match_all(a.children(), b.children(), 0, &mut used, &|x, y| {
        unordered_eq(x, y)
    })
}

/// Backtracking: can children `xs[i..]` be injectively assigned to unused
/// children of `ys` with equal tags, subject to `fits`?
fn match_all(
    xs: &[(owlstruct::EdgeTag, AxiomTree)],
    ys: &[(owlstruct::EdgeTag, AxiomTree)],
    i: usize,
    used: &mut [bool],
    fits: &dyn Fn(&AxiomTree, &AxiomTree) -> bool,
) -> bool {
    if i == xs.len() {
        return true;
    }
    for j in 0..ys.len() {
        if !used[j] && xs[i].0 == ys[j].0 && fits(&xs[i].1, &ys[j].1) {
            used[j] = true;
            if match_all(xs, ys, i + 1, used, fits) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

pub fn oracle_ground(t: &AxiomTree) -> AxiomTree {
    if t.is_leaf() {
        return AxiomTree::from_parts(NodeLabel::placeholder(), Vec::new());
    }
    AxiomTree::from_parts(
        t.label().clone(),
        t.children()
            .iter()
            .map(|(tag, c)| (*tag, oracle_ground(c)))
            .collect(),
    )
}

pub fn oracle_internal(t: &AxiomTree) -> AxiomTree {
    AxiomTree::from_parts(
        t.label().clone(),
        t.children()
            .iter()
            .filter(|(_, c)| !c.is_leaf())
            .map(|(tag, c)| (*tag, oracle_internal(c)))
            .collect(),
    )
}

/// Groups indices by pairwise unordered equality, first occurrence order.
pub fn group_by_equality(trees: &[AxiomTree]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        match groups.iter_mut().find(|g| unordered_eq(&trees[g[0]], t)) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

/// Normalises a grouping for comparison: sorted members, sorted groups.
pub fn normalise(mut groups: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort();
    groups
}

/// Rooted embedding of `small` at `big`, by backtracking over child
/// assignments.
fn embeds_at(small: &AxiomTree, big: &AxiomTree) -> bool {
    if label_text(small) != label_text(big) || small.children().len() > big.children().len() {
        return false;
    }
    let mut used = vec![false; big.children().len()];
    match_all(small.children(), big.children(), 0, &mut used, &|x, y| {
        embeds_at(x, y)
    })
}

/// `small` embeds into some subtree of `big`.
pub fn oracle_embeds(small: &AxiomTree, big: &AxiomTree) -> bool {
    big.nodes().into_iter().any(|n| embeds_at(small, n))
}

pub fn oracle_axiom_le(a: &AxiomTree, b: &AxiomTree) -> bool {
    let (ia, ib) = (oracle_internal(a), oracle_internal(b));
    if unordered_eq(&ia, &ib) {
        oracle_embeds(&oracle_ground(a), &oracle_ground(b))
    } else {
        oracle_embeds(&ia, &ib)
    }
}

pub fn oracle_frame_le(a: &StructureMultiset, b: &StructureMultiset) -> bool {
    a.iter().all(|(_, t, m)| {
        let in_b: usize = b
            .iter()
            .filter(|(_, u, _)| unordered_eq(t, u))
            .map(|(_, _, n)| n)
            .sum();
        m <= in_b
    })
}

/// Strict pairs with nothing strictly between them.
pub fn transitive_reduction(le: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = le.len();
    let lt = |i: usize, j: usize| i != j && le[i][j];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Nodes on the longest strict chain.
pub fn longest_chain(le: &[Vec<bool>]) -> usize {
    fn from(i: usize, le: &[Vec<bool>], memo: &mut [Option<usize>]) -> usize {
        if let Some(v) = memo[i] {
            return v;
        }
        let best = (0..le.len())
            .filter(|&j| j != i && le[i][j])
            .map(|j| from(j, le, memo))
            .max()
            .unwrap_or(0);
        memo[i] = Some(best + 1);
        best + 1
    }
    let mut memo = vec![None; le.len()];
    (0..le.len())
        .map(|i| from(i, le, &mut memo))
        .max()
        .unwrap_or(0)
}
