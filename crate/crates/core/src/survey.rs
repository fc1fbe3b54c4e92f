//! Per-ontology and corpus-wide reports.
//!
//! An [`OntologyReport`] bundles the five measurements taken for every
//! ontology: number of regularities, their sizes, the largest structures,
//! structure size and depth, and the shape of the containment posets.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::abstraction::Abstraction;
use crate::frames::{extract_frames, frameless_count};
use crate::fss::{parse_document, Document, ParseError};
use crate::order::{build_poset, PosetError};
use crate::profile::{classify, Category};
use crate::regularity::{
    aggregate_common, coverage_count, partition_axioms, partition_frames,
    threshold_table_for_sizes, top_structures, CategoryCounts, CommonStructure, ModellingStructure,
    Regularity, StructureKind,
};

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);
pub const DEFAULT_TOP_K: usize = 3;
pub const COVERAGE_THRESHOLD: f64 = 0.9;
pub const MIN_REGULARITIES: [usize; 2] = [5, 10];
pub const MIN_SIZES: [usize; 3] = [10, 100, 1000];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub budget: Duration,
    pub top_k: usize,
    pub dedup: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            budget: DEFAULT_BUDGET,
            top_k: DEFAULT_TOP_K,
            dedup: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedStructure {
    pub structure: String,
    pub encoding: String,
    pub size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HasseSummary {
    pub depth: usize,
    pub max_branching: usize,
}

/// Regularity sizes, largest first, for each partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSizes {
    #[serde(rename = "axioms_G")]
    pub axioms_g: Vec<usize>,
    #[serde(rename = "axioms_I")]
    pub axioms_i: Vec<usize>,
    pub frames: Vec<usize>,
}

/// Regularities needed to cover 90% of the members of each partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Coverage {
    #[serde(rename = "axioms_G")]
    pub axioms_g: usize,
    #[serde(rename = "axioms_I")]
    pub axioms_i: usize,
    pub frames: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OntologyReport {
    pub id: String,
    pub category: Category,
    pub axiom_count: usize,
    pub frame_count: usize,
    pub frameless_count: usize,
    #[serde(rename = "regularities_axioms_G")]
    pub regularities_axioms_g: usize,
    #[serde(rename = "regularities_axioms_I")]
    pub regularities_axioms_i: usize,
    pub regularities_frames: usize,
    pub size_histogram: PartitionSizes,
    pub coverage_90: Coverage,
    pub top3_axioms: Vec<RankedStructure>,
    pub top3_frames: Vec<RankedStructure>,
    pub max_structure_size: usize,
    pub max_frame_structure_size: usize,
    pub max_structure_depth: usize,
    pub max_frame_axioms: usize,
    pub hasse_axioms: Option<HasseSummary>,
    pub hasse_frames: Option<HasseSummary>,
    pub timed_out: bool,
}

/// Report plus the top structures needed for corpus aggregation.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: OntologyReport,
    pub top_axioms: Vec<ModellingStructure>,
    pub top_frames: Vec<ModellingStructure>,
}

fn ranked(partition: &[Regularity], k: usize) -> Vec<RankedStructure> {
    partition
        .iter()
        .take(k)
        .map(|r| RankedStructure {
            structure: r.structure.render(),
            encoding: r.structure.encoding(),
            size: r.size(),
        })
        .collect()
}

fn coverage(partition: &[Regularity]) -> usize {
    coverage_count(partition, COVERAGE_THRESHOLD)
}

fn hasse(
    partition: &[Regularity],
    kind: StructureKind,
    deadline: Instant,
) -> Result<Option<HasseSummary>, PosetError> {
    if partition.is_empty() {
        return Ok(None);
    }
    let structures: Vec<ModellingStructure> =
        partition.iter().map(|r| r.structure.clone()).collect();
    let poset = build_poset(&structures, kind, Some(deadline))?;
    Ok(Some(HasseSummary {
        depth: poset.depth,
        max_branching: poset.max_branching,
    }))
}

pub fn analyze(doc: &Document, id: &str, options: &AnalysisOptions) -> OntologyReport {
    analyze_full(doc, id, options).report
}

/// # Panics
///
/// Panics if `options.budget` is zero or the containment relation turns out
/// not to be a partial order.
pub fn analyze_full(doc: &Document, id: &str, options: &AnalysisOptions) -> Analysis {
    assert!(
        !options.budget.is_zero(),
        "analysis budget must be positive"
    );
    let deduped;
    let doc = if options.dedup {
        let mut d = doc.clone();
        d.dedup();
        deduped = d;
        &deduped
    } else {
        doc
    };
    let deadline = Instant::now() + options.budget;

    let axioms_g = partition_axioms(doc, Abstraction::Ground);
    let axioms_i = partition_axioms(doc, Abstraction::Internal);
    let frames = extract_frames(doc);
    let frame_partition = partition_frames(&frames);

    let structure_of = |p: &[Regularity], f: fn(&ModellingStructure) -> usize| {
        p.iter().map(|r| f(&r.structure)).max().unwrap_or(0)
    };

    let (hasse_axioms, hasse_frames, timed_out) = match (
        hasse(&axioms_g, StructureKind::Axiom, deadline),
        hasse(&frame_partition, StructureKind::Frame, deadline),
    ) {
        (Ok(a), Ok(f)) => (a, f, false),
        (Err(PosetError::TimedOut), _) | (_, Err(PosetError::TimedOut)) => (None, None, true),
        (Err(e), _) | (_, Err(e)) => panic!("containment is not a partial order on {id}: {e}"),
    };

    let report = OntologyReport {
        id: id.to_string(),
        category: classify(doc),
        axiom_count: doc.axioms.len(),
        frame_count: frames.len(),
        frameless_count: frameless_count(doc),
        regularities_axioms_g: axioms_g.len(),
        regularities_axioms_i: axioms_i.len(),
        regularities_frames: frame_partition.len(),
        size_histogram: PartitionSizes {
            axioms_g: axioms_g.iter().map(Regularity::size).collect(),
            axioms_i: axioms_i.iter().map(Regularity::size).collect(),
            frames: frame_partition.iter().map(Regularity::size).collect(),
        },
        coverage_90: Coverage {
            axioms_g: coverage(&axioms_g),
            axioms_i: coverage(&axioms_i),
            frames: coverage(&frame_partition),
        },
        top3_axioms: ranked(&axioms_g, options.top_k),
        top3_frames: ranked(&frame_partition, options.top_k),
        max_structure_size: structure_of(&axioms_g, ModellingStructure::node_count),
        max_frame_structure_size: structure_of(&frame_partition, ModellingStructure::node_count),
        max_structure_depth: structure_of(&axioms_g, ModellingStructure::depth),
        max_frame_axioms: frames
            .iter()
            .map(|f| f.member_axioms.len())
            .max()
            .unwrap_or(0),
        hasse_axioms,
        hasse_frames,
        timed_out,
    };
    Analysis {
        report,
        top_axioms: top_structures(&axioms_g, options.top_k),
        top_frames: top_structures(&frame_partition, options.top_k),
    }
}

// ---------------------------------------------------------------------------
// Corpus

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("{0}: not a directory")]
    NotADirectory(PathBuf),
    #[error("{0}: no .ofn files found")]
    NoOntologies(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
}

pub fn load_document(path: &Path) -> Result<Document, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_document(&text).map_err(|source| LoadError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub index: usize,
    #[serde(flatten)]
    pub report: OntologyReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedFile {
    pub file: String,
    pub reason: String,
}

/// Number of ontologies per category with at least `min_regularities`
/// regularities of size at least `min_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdRow {
    pub min_regularities: usize,
    pub min_size: usize,
    pub axioms: CategoryCounts,
    pub frames: CategoryCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub ontologies: Vec<CorpusEntry>,
    pub excluded: Vec<ExcludedFile>,
    pub common_structures_axioms: Vec<CommonStructure>,
    pub common_structures_frames: Vec<CommonStructure>,
    pub threshold_tables: Vec<ThresholdRow>,
}

/// `.ofn` files directly inside `dir`, sorted by name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, SurveyError> {
    if !dir.is_dir() {
        return Err(SurveyError::NotADirectory(dir.to_path_buf()));
    }
    let entries = fs::read_dir(dir).map_err(|source| SurveyError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| SurveyError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "ofn") {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(SurveyError::NoOntologies(dir.to_path_buf()));
    }
    files.sort();
    Ok(files)
}

fn file_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn survey_corpus(dir: &Path, options: &AnalysisOptions) -> Result<CorpusReport, SurveyError> {
    let files = corpus_files(dir)?;
    let results: Vec<Result<Analysis, ExcludedFile>> = files
        .par_iter()
        .map(|path| {
            let id = file_id(path);
            match load_document(path) {
                Ok(doc) => Ok(analyze_full(&doc, &id, options)),
                Err(e) => Err(ExcludedFile {
                    file: id,
                    reason: match e {
                        LoadError::Io { source, .. } => source.to_string(),
                        LoadError::Parse { source, .. } => source.to_string(),
                    },
                }),
            }
        })
        .collect();

    let mut analyses = Vec::new();
    let mut excluded = Vec::new();
    for r in results {
        match r {
            Ok(a) => analyses.push(a),
            Err(e) => excluded.push(e),
        }
    }
    Ok(assemble_corpus(analyses, excluded))
}

/// Orders analyses by (category, axiom count, id), assigns indices and
/// aggregates the corpus tables.
pub fn assemble_corpus(mut analyses: Vec<Analysis>, excluded: Vec<ExcludedFile>) -> CorpusReport {
    analyses.sort_by(|a, b| {
        (a.report.category, a.report.axiom_count, &a.report.id).cmp(&(
            b.report.category,
            b.report.axiom_count,
            &b.report.id,
        ))
    });

    let tops_axioms: Vec<_> = analyses
        .iter()
        .map(|a| (a.report.id.clone(), a.report.category, a.top_axioms.clone()))
        .collect();
    let tops_frames: Vec<_> = analyses
        .iter()
        .map(|a| (a.report.id.clone(), a.report.category, a.top_frames.clone()))
        .collect();

    let mut threshold_tables = Vec::new();
    for &k in &MIN_REGULARITIES {
        for &s in &MIN_SIZES {
            let mut axioms = CategoryCounts::default();
            let mut frames = CategoryCounts::default();
            for a in &analyses {
                let sizes = &a.report.size_histogram;
                if meets(&sizes.axioms_g, k, s) {
                    axioms.bump(a.report.category);
                }
                if meets(&sizes.frames, k, s) {
                    frames.bump(a.report.category);
                }
            }
            threshold_tables.push(ThresholdRow {
                min_regularities: k,
                min_size: s,
                axioms,
                frames,
            });
        }
    }

    CorpusReport {
        ontologies: analyses
            .into_iter()
            .enumerate()
            .map(|(index, a)| CorpusEntry {
                index,
                report: a.report,
            })
            .collect(),
        excluded,
        common_structures_axioms: aggregate_common(&tops_axioms),
        common_structures_frames: aggregate_common(&tops_frames),
        threshold_tables,
    }
}

fn meets(sizes: &[usize], min_regularities: usize, min_size: usize) -> bool {
    threshold_table_for_sizes(sizes, &[min_regularities], &[min_size]).cells[0][0]
}

pub fn render_structure(s: &ModellingStructure) -> String {
    s.render()
}

// ---------------------------------------------------------------------------
// Output formats

pub const TABULAR_COLUMNS: [&str; 20] = [
    "id",
    "category",
    "axiom_count",
    "frame_count",
    "frameless_count",
    "regularities_axioms_G",
    "regularities_axioms_I",
    "regularities_frames",
    "coverage_90_axioms_G",
    "coverage_90_axioms_I",
    "coverage_90_frames",
    "max_structure_size",
    "max_frame_structure_size",
    "max_structure_depth",
    "max_frame_axioms",
    "hasse_axioms_depth",
    "hasse_axioms_max_branching",
    "hasse_frames_depth",
    "hasse_frames_max_branching",
    "timed_out",
];

impl OntologyReport {
    /// Scalar fields in [`TABULAR_COLUMNS`] order; absent poset metrics are
    /// empty cells.
    pub fn scalar_row(&self) -> Vec<String> {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.id.clone(),
            self.category.to_string(),
            self.axiom_count.to_string(),
            self.frame_count.to_string(),
            self.frameless_count.to_string(),
            self.regularities_axioms_g.to_string(),
            self.regularities_axioms_i.to_string(),
            self.regularities_frames.to_string(),
            self.coverage_90.axioms_g.to_string(),
            self.coverage_90.axioms_i.to_string(),
            self.coverage_90.frames.to_string(),
            self.max_structure_size.to_string(),
            self.max_frame_structure_size.to_string(),
            self.max_structure_depth.to_string(),
            self.max_frame_axioms.to_string(),
            opt(self.hasse_axioms.map(|h| h.depth)),
            opt(self.hasse_axioms.map(|h| h.max_branching)),
            opt(self.hasse_frames.map(|h| h.depth)),
            opt(self.hasse_frames.map(|h| h.max_branching)),
            self.timed_out.to_string(),
        ]
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

pub fn report_tabular(report: &OntologyReport) -> String {
    csv_string(&TABULAR_COLUMNS, [report.scalar_row()])
}

pub fn corpus_tabular(corpus: &CorpusReport) -> String {
    let mut header = vec!["index"];
    header.extend(TABULAR_COLUMNS);
    csv_string(
        &header,
        corpus.ontologies.iter().map(|e| {
            let mut row = vec![e.index.to_string()];
            row.extend(e.report.scalar_row());
            row
        }),
    )
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}
