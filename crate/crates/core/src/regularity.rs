//! Syntactic regularities: equivalence classes of axioms (or class frames)
//! that share a modelling structure, plus the size statistics computed over
//! such partitions.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::abstraction::{Abstraction, StructureMultiset};
use crate::ast::AxiomTree;
use crate::frames::ClassFrame;
use crate::fss::Document;
use crate::profile::Category;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Axiom,
    Frame,
}

/// The abstracted form shared by every member of a regularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModellingStructure {
    Axiom(AxiomTree),
    Frame(StructureMultiset),
}

impl ModellingStructure {
    pub fn kind(&self) -> StructureKind {
        match self {
            ModellingStructure::Axiom(_) => StructureKind::Axiom,
            ModellingStructure::Frame(_) => StructureKind::Frame,
        }
    }

    pub fn encoding(&self) -> String {
        match self {
            ModellingStructure::Axiom(t) => t.canonical_encoding(),
            ModellingStructure::Frame(m) => m.canonical_encoding(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            ModellingStructure::Axiom(t) => t.render(),
            ModellingStructure::Frame(m) => m.render(),
        }
    }

    /// Number of nodes; for frames the whole forest with multiplicities.
    pub fn node_count(&self) -> usize {
        match self {
            ModellingStructure::Axiom(t) => t.node_count(),
            ModellingStructure::Frame(m) => m.node_count(),
        }
    }

    /// Tree depth; for frames the maximal depth of its axioms.
    pub fn depth(&self) -> usize {
        match self {
            ModellingStructure::Axiom(t) => t.depth(),
            ModellingStructure::Frame(m) => m.max_depth(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regularity {
    pub structure: ModellingStructure,
    /// Positions of the members in the partitioned sequence (axiom indices or
    /// frame indices), ascending.
    pub members: Vec<usize>,
}

impl Regularity {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

fn group_by_encoding(items: impl Iterator<Item = ModellingStructure>) -> Vec<Regularity> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut groups: Vec<(String, Regularity)> = Vec::new();
    for (i, structure) in items.enumerate() {
        let key = structure.encoding();
        match index.get(&key) {
            Some(&g) => groups[g].1.members.push(i),
            None => {
                index.insert(key.clone(), groups.len());
                groups.push((
                    key,
                    Regularity {
                        structure,
                        members: vec![i],
                    },
                ));
            }
        }
    }
    groups.sort_by(|a, b| b.1.size().cmp(&a.1.size()).then_with(|| a.0.cmp(&b.0)));
    groups.into_iter().map(|(_, r)| r).collect()
}

/// Groups axioms by the encoding of their abstracted tree. Largest first,
/// ties broken by encoding.
pub fn partition_axioms(doc: &Document, abstraction: Abstraction) -> Vec<Regularity> {
    partition_trees(&doc.axioms, abstraction)
}

pub fn partition_trees(axioms: &[AxiomTree], abstraction: Abstraction) -> Vec<Regularity> {
    group_by_encoding(
        axioms
            .iter()
            .map(|t| ModellingStructure::Axiom(abstraction.apply(t))),
    )
}

/// Groups frames by their lifted structure multiset; members index `frames`.
pub fn partition_frames(frames: &[ClassFrame]) -> Vec<Regularity> {
    group_by_encoding(
        frames
            .iter()
            .map(|f| ModellingStructure::Frame(f.structure.clone())),
    )
}

/// Smallest number of regularities, taken largest first, that together hold
/// at least `threshold` of all members. `0` for an empty partition.
///
/// # Panics
///
/// Panics unless `0 < threshold <= 1`.
pub fn coverage_count(partition: &[Regularity], threshold: f64) -> usize {
    assert!(
        threshold > 0.0 && threshold <= 1.0,
        "coverage threshold must lie in (0, 1], got {threshold}"
    );
    let mut sizes: Vec<usize> = partition.iter().map(Regularity::size).collect();
    let total: usize = sizes.iter().sum();
    if total == 0 {
        return 0;
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let mut covered = 0;
    for (k, s) in sizes.into_iter().enumerate() {
        covered += s;
        if covered as f64 / total as f64 >= threshold {
            return k + 1;
        }
    }
    unreachable!("full partition always covers")
}

/// `cells[i][j]` is true iff at least `min_counts[i]` regularities have size
/// at least `min_sizes[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdTable {
    pub min_counts: Vec<usize>,
    pub min_sizes: Vec<usize>,
    pub cells: Vec<Vec<bool>>,
}

impl ThresholdTable {
    pub fn get(&self, min_count: usize, min_size: usize) -> Option<bool> {
        let i = self.min_counts.iter().position(|&k| k == min_count)?;
        let j = self.min_sizes.iter().position(|&s| s == min_size)?;
        Some(self.cells[i][j])
    }
}

pub fn threshold_table(
    partition: &[Regularity],
    min_counts: &[usize],
    min_sizes: &[usize],
) -> ThresholdTable {
    let sizes: Vec<usize> = partition.iter().map(Regularity::size).collect();
    threshold_table_for_sizes(&sizes, min_counts, min_sizes)
}

/// [`threshold_table`] over bare regularity sizes.
pub fn threshold_table_for_sizes(
    sizes: &[usize],
    min_counts: &[usize],
    min_sizes: &[usize],
) -> ThresholdTable {
    let cells = min_counts
        .iter()
        .map(|&k| {
            min_sizes
                .iter()
                .map(|&s| {
                    let n = sizes.iter().filter(|&&size| size >= s).count();
                    k > 0 && n >= k
                })
                .collect()
        })
        .collect();
    ThresholdTable {
        min_counts: min_counts.to_vec(),
        min_sizes: min_sizes.to_vec(),
        cells,
    }
}

/// Structures of the `k` largest regularities.
pub fn top_structures(partition: &[Regularity], k: usize) -> Vec<ModellingStructure> {
    let mut ranked: Vec<&Regularity> = partition.iter().collect();
    ranked.sort_by_cached_key(|r| (std::cmp::Reverse(r.size()), r.structure.encoding()));
    ranked
        .into_iter()
        .take(k)
        .map(|r| r.structure.clone())
        .collect()
}

/// Per-category ontology counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CategoryCounts {
    pub atomic: usize,
    pub elpp: usize,
    pub rich: usize,
}

impl CategoryCounts {
    pub fn get(&self, c: Category) -> usize {
        match c {
            Category::Atomic => self.atomic,
            Category::Elpp => self.elpp,
            Category::Rich => self.rich,
        }
    }

    pub fn bump(&mut self, c: Category) {
        match c {
            Category::Atomic => self.atomic += 1,
            Category::Elpp => self.elpp += 1,
            Category::Rich => self.rich += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.atomic + self.elpp + self.rich
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonStructure {
    pub structure: String,
    pub encoding: String,
    pub counts: CategoryCounts,
    pub total: usize,
}

/// Counts, for every structure, how many ontologies of each category have it
/// among their top structures. Sorted by total descending, then encoding.
pub fn aggregate_common(
    per_ontology_tops: &[(String, Category, Vec<ModellingStructure>)],
) -> Vec<CommonStructure> {
    let mut rows: BTreeMap<String, (String, CategoryCounts)> = BTreeMap::new();
    for (_, category, tops) in per_ontology_tops {
        let mut seen: Vec<String> = Vec::new();
        for s in tops {
            let enc = s.encoding();
            if seen.contains(&enc) {
                continue;
            }
            rows.entry(enc.clone())
                .or_insert_with(|| (s.render(), CategoryCounts::default()))
                .1
                .bump(*category);
            seen.push(enc);
        }
    }
    let mut out: Vec<CommonStructure> = rows
        .into_iter()
        .map(|(encoding, (structure, counts))| CommonStructure {
            structure,
            encoding,
            total: counts.total(),
            counts,
        })
        .collect();
    out.sort_by(|a, b| {
        b.total
            .cmp(&a.total)
            .then_with(|| a.encoding.cmp(&b.encoding))
    });
    out
}
