mod common;

use std::collections::BTreeSet;

use owlstruct::abstraction::{
    ground_generalisation, internal_tree_structure, Abstraction, StructureMultiset,
};
use owlstruct::ast::AxiomTree;
use owlstruct::frames::{extract_frames, frameless_count};
use owlstruct::fss::{parse_document, Document};
use owlstruct::order::{build_poset, structure_contains, tree_embeds};
use owlstruct::profile::classify_axioms;
use owlstruct::regularity::{
    partition_axioms, partition_frames, ModellingStructure, Regularity, StructureKind,
};
use owlstruct::survey::{analyze, to_json, AnalysisOptions};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

fn random_doc(seed: u64, max_axioms: usize, depth: usize) -> Document {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(0..=max_axioms);
    parse_document(&ontology(&mut rng, n, depth)).unwrap()
}

fn members(p: &[Regularity]) -> Vec<Vec<usize>> {
    normalise(p.iter().map(|r| r.members.clone()).collect())
}

fn small_structures(p: Vec<Regularity>) -> Vec<ModellingStructure> {
    p.into_iter()
        .map(|r| r.structure)
        .filter(|s| s.node_count() <= 12)
        .take(12)
        .collect()
}

fn axiom_structures(seed: u64) -> Vec<ModellingStructure> {
    small_structures(partition_axioms(
        &random_doc(seed, 40, 3),
        Abstraction::Ground,
    ))
}

/// Random multisets over a small pool of ground axiom trees, so that
/// inclusions between them are common.
fn frame_structures(seed: u64) -> Vec<ModellingStructure> {
    let pool: Vec<AxiomTree> = partition_axioms(&random_doc(seed, 12, 2), Abstraction::Ground)
        .into_iter()
        .filter_map(|r| match r.structure {
            ModellingStructure::Axiom(t) if t.node_count() <= 12 => Some(t),
            _ => None,
        })
        .take(4)
        .collect();
    if pool.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..24 {
        let mut m = StructureMultiset::new();
        for t in &pool {
            let count = rng.gen_range(0..=2);
            if count > 0 {
                m.insert_many(t.clone(), count);
            }
        }
        if !m.is_empty() && seen.insert(m.canonical_encoding()) {
            out.push(ModellingStructure::Frame(m));
        }
        if out.len() == 12 {
            break;
        }
    }
    out
}

fn oracle_le(a: &ModellingStructure, b: &ModellingStructure) -> bool {
    match (a, b) {
        (ModellingStructure::Axiom(x), ModellingStructure::Axiom(y)) => oracle_axiom_le(x, y),
        (ModellingStructure::Frame(x), ModellingStructure::Frame(y)) => oracle_frame_le(x, y),
        _ => unreachable!(),
    }
}

fn check_poset(
    structures: &[ModellingStructure],
    kind: StructureKind,
) -> Result<(), TestCaseError> {
    let poset = build_poset(structures, kind, None).unwrap();
    let n = structures.len();
    let le: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| oracle_le(&structures[i], &structures[j]))
                .collect()
        })
        .collect();
    for i in 0..n {
        prop_assert!(poset.le(i, i));
        for j in 0..n {
            prop_assert_eq!(
                poset.le(i, j),
                le[i][j],
                "{} vs {}",
                structures[i].encoding(),
                structures[j].encoding()
            );
            if i != j && le[i][j] {
                prop_assert!(!le[j][i], "antisymmetry");
            }
            for k in 0..n {
                if le[i][j] && le[j][k] {
                    prop_assert!(le[i][k], "transitivity");
                }
            }
        }
    }
    let mut edges = poset.hasse_edges.clone();
    edges.sort_unstable();
    prop_assert_eq!(edges, transitive_reduction(&le));
    prop_assert_eq!(poset.depth, longest_chain(&le));
    let branching = (0..n)
        .map(|i| poset.hasse_edges.iter().filter(|e| e.0 == i).count())
        .max()
        .unwrap_or(0);
    prop_assert_eq!(poset.max_branching, branching);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn axiom_partitions_match_pairwise_grouping(seed in any::<u64>()) {
        let doc = random_doc(seed, 60, 3);
        for abstraction in [Abstraction::Ground, Abstraction::Internal] {
            let p = partition_axioms(&doc, abstraction);
            prop_assert_eq!(p.iter().map(Regularity::size).sum::<usize>(), doc.axioms.len());
            let abstracted: Vec<AxiomTree> = doc
                .axioms
                .iter()
                .map(|t| match abstraction {
                    Abstraction::Ground => oracle_ground(t),
                    Abstraction::Internal => oracle_internal(t),
                })
                .collect();
            prop_assert_eq!(members(&p), normalise(group_by_equality(&abstracted)));
            for w in p.windows(2) {
                prop_assert!((w[1].size(), w[0].structure.encoding()) <= (w[0].size(), w[1].structure.encoding()));
            }
        }
    }

    #[test]
    fn ground_partition_refines_internal(seed in any::<u64>()) {
        let doc = random_doc(seed, 60, 3);
        let g = partition_axioms(&doc, Abstraction::Ground);
        let i = partition_axioms(&doc, Abstraction::Internal);
        prop_assert!(g.len() >= i.len());
        for r in &g {
            let inner: BTreeSet<usize> = r.members.iter().copied().collect();
            prop_assert!(i.iter().any(|q| inner.is_subset(&q.members.iter().copied().collect())));
        }
    }

    #[test]
    fn frame_partitions_cover_frames(seed in any::<u64>()) {
        let doc = random_doc(seed, 40, 2);
        let frames = extract_frames(&doc);
        let p = partition_frames(&frames);
        prop_assert_eq!(p.iter().map(Regularity::size).sum::<usize>(), frames.len());
        let all: BTreeSet<usize> = p.iter().flat_map(|r| r.members.iter().copied()).collect();
        prop_assert_eq!(all, (0..frames.len()).collect::<BTreeSet<_>>());
        for r in &p {
            for &m in &r.members {
                prop_assert_eq!(frames[m].structure.canonical_encoding(), r.structure.encoding());
            }
        }
    }

    #[test]
    fn canonical_encoding_decides_unordered_equality(a in any::<u64>(), b in any::<u64>()) {
        let da = random_doc(a, 6, 2);
        let db = random_doc(b, 6, 2);
        for x in da.axioms.iter().chain(&db.axioms) {
            for y in da.axioms.iter().chain(&db.axioms) {
                let (gx, gy) = (oracle_ground(x), oracle_ground(y));
                prop_assert_eq!(gx.canonical_encoding() == gy.canonical_encoding(), unordered_eq(&gx, &gy));
                prop_assert_eq!(x == y, unordered_eq(x, y));
            }
        }
    }

    #[test]
    fn embedding_agrees_with_backtracking(seed in any::<u64>()) {
        let doc = random_doc(seed, 8, 3);
        let ground: Vec<AxiomTree> = doc.axioms.iter().map(oracle_ground).collect();
        let internal: Vec<AxiomTree> = doc.axioms.iter().map(oracle_internal).collect();
        for trees in [&ground, &internal] {
            for x in trees.iter() {
                for y in trees.iter() {
                    prop_assert_eq!(tree_embeds(x, y), oracle_embeds(x, y), "{} in {}", x.canonical_encoding(), y.canonical_encoding());
                }
            }
        }
    }

    #[test]
    fn axiom_poset_laws(seed in any::<u64>()) {
        check_poset(&axiom_structures(seed), StructureKind::Axiom)?;
    }

    #[test]
    fn frame_poset_laws(seed in any::<u64>()) {
        check_poset(&frame_structures(seed), StructureKind::Frame)?;
    }

    #[test]
    fn containment_is_kind_aware(seed in any::<u64>()) {
        let a = axiom_structures(seed);
        let f = frame_structures(seed);
        if let (Some(x), Some(y)) = (a.first(), f.first()) {
            prop_assert_eq!(structure_contains(x, y), None);
            prop_assert_eq!(structure_contains(x, x), Some(true));
            prop_assert_eq!(structure_contains(y, y), Some(true));
        }
    }

    #[test]
    fn parsing_is_stable_under_reprinting(seed in any::<u64>()) {
        let doc = random_doc(seed, 20, 3);
        let body: Vec<String> = doc.axioms.iter().map(AxiomTree::to_functional).collect();
        let again = parse_document(&format!("Ontology({})", body.join("\n"))).unwrap();
        prop_assert_eq!(&again.axioms, &doc.axioms);
    }

    #[test]
    fn ground_generalisation_keeps_shape(seed in any::<u64>()) {
        let doc = random_doc(seed, 20, 3);
        for t in &doc.axioms {
            let g = ground_generalisation(t);
            prop_assert_eq!(g.node_count(), t.node_count());
            prop_assert_eq!(g.depth(), t.depth());
            prop_assert_eq!(ground_generalisation(&g).canonical_encoding(), g.canonical_encoding());
            prop_assert_eq!(edge_tags(&g), edge_tags(t));
            let i = internal_tree_structure(t);
            prop_assert_eq!(i.node_count(), t.nodes().iter().filter(|n| !n.is_leaf()).count());
            prop_assert!(tree_embeds(&i, &oracle_internal(t)));
        }
    }

    #[test]
    fn classification_is_monotone_under_removal(seed in any::<u64>(), keep in any::<u64>()) {
        let doc = random_doc(seed, 30, 2);
        let mut mask = ChaCha8Rng::seed_from_u64(keep);
        let subset: Vec<AxiomTree> = doc
            .axioms
            .iter()
            .filter(|_| mask.gen_bool(0.5))
            .cloned()
            .collect();
        prop_assert!(classify_axioms(&subset) <= classify_axioms(&doc.axioms));
    }

    #[test]
    fn frames_ignore_axiom_order(seed in any::<u64>()) {
        let doc = random_doc(seed, 30, 2);
        let mut shuffled = doc.clone();
        shuffled.axioms.shuffle(&mut ChaCha8Rng::seed_from_u64(seed.rotate_left(7)));
        let summary = |d: &Document| {
            extract_frames(d)
                .into_iter()
                .map(|f| {
                    let mut members: Vec<String> = f
                        .member_axioms
                        .iter()
                        .map(|&i| d.axioms[i].canonical_encoding())
                        .collect();
                    members.sort();
                    (f.subject, f.structure.canonical_encoding(), members)
                })
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(summary(&doc), summary(&shuffled));
        prop_assert_eq!(frameless_count(&doc), frameless_count(&shuffled));
    }

    #[test]
    fn frames_and_frameless_axioms_cover_the_ontology(seed in any::<u64>()) {
        let doc = random_doc(seed, 30, 2);
        let frames = extract_frames(&doc);
        let covered: BTreeSet<usize> = frames.iter().flat_map(|f| f.member_axioms.iter().copied()).collect();
        prop_assert_eq!(covered.len() + frameless_count(&doc), doc.axioms.len());
        for f in &frames {
            prop_assert_eq!(f.structure.total(), f.member_axioms.len());
        }
    }

    #[test]
    fn analysis_is_deterministic(seed in any::<u64>()) {
        let doc = random_doc(seed, 30, 2);
        let opts = AnalysisOptions::default();
        prop_assert_eq!(to_json(&analyze(&doc, "x", &opts)), to_json(&analyze(&doc.clone(), "x", &opts)));
    }
}

fn edge_tags(t: &AxiomTree) -> Vec<&'static str> {
    let mut tags: Vec<&'static str> = t
        .nodes()
        .iter()
        .flat_map(|n| n.children().iter().map(|(tag, _)| tag.as_str()))
        .collect();
    tags.sort_unstable();
    tags
}
