//! Class frames: the axioms "about" a named class, lifted to a multiset of
//! ground-generalised structures.

use std::collections::BTreeMap;

use crate::abstraction::{lift, Abstraction, StructureMultiset};
use crate::ast::{AxiomTree, Constructor, EdgeTag};
use crate::fss::Document;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFrame {
    /// Class IRI in `<...>` form.
    pub subject: String,
    /// Indices into `Document::axioms`, ascending.
    pub member_axioms: Vec<usize>,
    pub structure: StructureMultiset,
}

/// Named classes whose frame an axiom belongs to.
///
/// `SubClassOf` qualifies its subclass, `DisjointUnion` its defined class,
/// and `EquivalentClasses`/`DisjointClasses` every named class among their
/// direct operands.
pub fn frame_subjects(axiom: &AxiomTree) -> Vec<&str> {
    let Some(c) = axiom.constructor() else {
        return Vec::new();
    };
    let role = match c {
        Constructor::SubClassOf => EdgeTag::Sub,
        Constructor::DisjointUnion => EdgeTag::Lhs,
        Constructor::EquivalentClasses | Constructor::DisjointClasses => EdgeTag::Op,
        _ => return Vec::new(),
    };
    let mut subjects: Vec<&str> = axiom
        .children()
        .iter()
        .filter(|(tag, _)| *tag == role)
        .filter_map(|(_, t)| t.class_iri())
        .collect();
    subjects.sort_unstable();
    subjects.dedup();
    subjects
}

/// One frame per named class with at least one member axiom, ordered by
/// subject IRI.
pub fn extract_frames(doc: &Document) -> Vec<ClassFrame> {
    let mut members: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, axiom) in doc.axioms.iter().enumerate() {
        for subject in frame_subjects(axiom) {
            members.entry(subject).or_default().push(i);
        }
    }
    members
        .into_iter()
        .map(|(subject, member_axioms)| {
            let structure = lift(
                member_axioms.iter().map(|&i| &doc.axioms[i]),
                Abstraction::Ground,
            );
            ClassFrame {
                subject: subject.to_string(),
                member_axioms,
                structure,
            }
        })
        .collect()
}

/// Axioms that belong to no frame (general class inclusions and the like).
pub fn frameless_count(doc: &Document) -> usize {
    doc.axioms
        .iter()
        .filter(|a| frame_subjects(a).is_empty())
        .count()
}
