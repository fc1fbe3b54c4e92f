//! Expressivity category of an ontology's class-expression axioms.
//!
//! The EL++ test is a constructor whitelist over the parsed fragment only; it
//! does not look at property axioms and is therefore an approximation of the
//! OWL 2 EL profile.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ast::{AxiomTree, Constructor};
use crate::fss::Document;

/// Ordered from most to least specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Atomic,
    Elpp,
    Rich,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Atomic, Category::Elpp, Category::Rich];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Atomic => "atomic",
            Category::Elpp => "elpp",
            Category::Rich => "rich",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category `{s}`"))
    }
}

pub fn classify(doc: &Document) -> Category {
    classify_axioms(&doc.axioms)
}

pub fn classify_axioms(axioms: &[AxiomTree]) -> Category {
    if axioms.iter().all(is_atomic_axiom) {
        Category::Atomic
    } else if axioms.iter().all(is_el_axiom) {
        Category::Elpp
    } else {
        Category::Rich
    }
}

/// `SubClassOf`/`EquivalentClasses` over named classes only.
pub fn is_atomic_axiom(axiom: &AxiomTree) -> bool {
    matches!(
        axiom.constructor(),
        Some(Constructor::SubClassOf | Constructor::EquivalentClasses)
    ) && axiom.children().iter().all(|(_, c)| c.is_named_class())
}

pub fn is_el_axiom(axiom: &AxiomTree) -> bool {
    matches!(
        axiom.constructor(),
        Some(
            Constructor::SubClassOf | Constructor::EquivalentClasses | Constructor::DisjointClasses
        )
    ) && axiom.children().iter().all(|(_, c)| is_el_expression(c))
}

fn is_el_expression(t: &AxiomTree) -> bool {
    use Constructor::*;
    let Some(c) = t.constructor() else {
        return true;
    };
    let allowed = match c {
        ObjectIntersectionOf | ObjectSomeValuesFrom | ObjectHasValue | ObjectHasSelf
        | DataSomeValuesFrom | DataHasValue => true,
        ObjectOneOf => t.children().len() == 1,
        _ => false,
    };
    allowed && t.children().iter().all(|(_, c)| is_el_expression(c))
}
