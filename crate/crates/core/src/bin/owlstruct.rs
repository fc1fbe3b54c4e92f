use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use owlstruct::abstraction::Abstraction;
use owlstruct::frames::extract_frames;
use owlstruct::fss::Document;
use owlstruct::order::{build_poset, PosetError, StructurePoset};
use owlstruct::profile::classify;
use owlstruct::regularity::{partition_axioms, partition_frames, Regularity, StructureKind};
use owlstruct::survey::{
    analyze, corpus_tabular, load_document, report_tabular, survey_corpus, to_json,
    AnalysisOptions, SurveyError, DEFAULT_TOP_K,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PARTIAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "owlstruct",
    version,
    about = "Syntactic regularities and modelling structures in OWL ontologies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full per-ontology report.
    Analyze {
        file: PathBuf,
        #[arg(short, default_value_t = DEFAULT_TOP_K)]
        k: usize,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Reports for every `.ofn` file in a directory plus corpus tables.
    Survey {
        dir: PathBuf,
        #[arg(short, default_value_t = DEFAULT_TOP_K)]
        k: usize,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Largest regularities of axioms and class frames.
    Top {
        file: PathBuf,
        #[arg(short, default_value_t = DEFAULT_TOP_K)]
        k: usize,
        #[arg(long, value_enum, default_value_t = AbstractionArg::G)]
        abstraction: AbstractionArg,
        #[command(flatten)]
        common: Common,
    },
    /// Hasse diagrams of the axiom and frame structures.
    Poset {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = AbstractionArg::G)]
        abstraction: AbstractionArg,
        #[command(flatten)]
        budget: Budget,
        #[command(flatten)]
        common: Common,
    },
    /// Expressivity category: atomic, elpp or rich.
    Classify {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Drop duplicate axioms before analysis.
    #[arg(long)]
    dedup: bool,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    format: Format,
}

#[derive(Args)]
struct Budget {
    /// Seconds allowed for poset construction per ontology.
    #[arg(long = "budget", env = "OWLSTRUCT_BUDGET", default_value = "60", value_parser = parse_seconds)]
    seconds: Duration,
}

#[derive(Clone, Copy, ValueEnum)]
enum AbstractionArg {
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "I", alias = "i")]
    I,
}

impl From<AbstractionArg> for Abstraction {
    fn from(a: AbstractionArg) -> Self {
        match a {
            AbstractionArg::G => Abstraction::Ground,
            AbstractionArg::I => Abstraction::Internal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Structured,
    Tabular,
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !secs.is_finite() || secs <= 0.0 {
        return Err("budget must be a positive number of seconds".into());
    }
    Duration::try_from_secs_f64(secs).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Input(String),
}

struct Output {
    text: String,
    complete: bool,
}

#[derive(Serialize)]
struct RankedEntry {
    rank: usize,
    structure: String,
    size: usize,
}

#[derive(Serialize)]
struct TopReport {
    id: String,
    abstraction: String,
    axioms: Vec<RankedEntry>,
    frames: Vec<RankedEntry>,
}

#[derive(Serialize)]
struct HasseEdge {
    parent: String,
    child: String,
}

#[derive(Serialize)]
struct HasseDiagram {
    elements: Vec<String>,
    edges: Vec<HasseEdge>,
    depth: usize,
    max_branching: usize,
}

#[derive(Serialize)]
struct PosetReport {
    id: String,
    abstraction: String,
    axioms: Option<HasseDiagram>,
    frames: Option<HasseDiagram>,
    timed_out: bool,
}

fn file_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load(path: &Path, dedup: bool) -> Result<Document, Failure> {
    let mut doc = load_document(path).map_err(|e| Failure::Input(e.to_string()))?;
    for w in &doc.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    if dedup {
        doc.dedup();
    }
    Ok(doc)
}

fn ranked(partition: &[Regularity], k: usize) -> Vec<RankedEntry> {
    partition
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, r)| RankedEntry {
            rank: i + 1,
            structure: r.structure.render(),
            size: r.size(),
        })
        .collect()
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
}

fn diagram(poset: &StructurePoset) -> HasseDiagram {
    let enc: Vec<String> = poset.elements.iter().map(|s| s.encoding()).collect();
    HasseDiagram {
        elements: enc.clone(),
        edges: poset
            .hasse_edges
            .iter()
            .map(|&(p, c)| HasseEdge {
                parent: enc[p].clone(),
                child: enc[c].clone(),
            })
            .collect(),
        depth: poset.depth,
        max_branching: poset.max_branching,
    }
}

fn poset_of(
    partition: &[Regularity],
    kind: StructureKind,
    deadline: Instant,
) -> Result<HasseDiagram, PosetError> {
    let structures: Vec<_> = partition.iter().map(|r| r.structure.clone()).collect();
    build_poset(&structures, kind, Some(deadline)).map(|p| diagram(&p))
}

fn run(command: Command) -> Result<(Output, Option<PathBuf>), Failure> {
    let done = |text: String, common: Common| {
        Ok((
            Output {
                text,
                complete: true,
            },
            common.output,
        ))
    };
    match command {
        Command::Analyze {
            file,
            k,
            budget,
            common,
        } => {
            let doc = load(&file, common.dedup)?;
            let options = AnalysisOptions {
                budget: budget.seconds,
                top_k: k,
                dedup: false,
            };
            let report = analyze(&doc, &file_id(&file), &options);
            let text = match common.format {
                Format::Structured => to_json(&report),
                Format::Tabular => report_tabular(&report),
            };
            Ok((
                Output {
                    text,
                    complete: !report.timed_out,
                },
                common.output,
            ))
        }
        Command::Survey {
            dir,
            k,
            budget,
            common,
        } => {
            let options = AnalysisOptions {
                budget: budget.seconds,
                top_k: k,
                dedup: common.dedup,
            };
            let corpus = survey_corpus(&dir, &options).map_err(|e| match e {
                SurveyError::Io { .. } => Failure::Input(e.to_string()),
                _ => Failure::Usage(e.to_string()),
            })?;
            for ex in &corpus.excluded {
                eprintln!("warning: excluded {}: {}", ex.file, ex.reason);
            }
            let complete = corpus.ontologies.iter().all(|e| !e.report.timed_out);
            let text = match common.format {
                Format::Structured => to_json(&corpus),
                Format::Tabular => corpus_tabular(&corpus),
            };
            Ok((Output { text, complete }, common.output))
        }
        Command::Top {
            file,
            k,
            abstraction,
            common,
        } => {
            let doc = load(&file, common.dedup)?;
            let abstraction = Abstraction::from(abstraction);
            let axioms = ranked(&partition_axioms(&doc, abstraction), k);
            let frames = ranked(&partition_frames(&extract_frames(&doc)), k);
            let text = match common.format {
                Format::Structured => to_json(&TopReport {
                    id: file_id(&file),
                    abstraction: abstraction.symbol().to_string(),
                    axioms,
                    frames,
                }),
                Format::Tabular => {
                    let rows = [("axiom", axioms), ("frame", frames)]
                        .into_iter()
                        .flat_map(|(kind, entries)| {
                            entries.into_iter().map(move |e| {
                                vec![
                                    kind.to_string(),
                                    e.rank.to_string(),
                                    e.structure,
                                    e.size.to_string(),
                                ]
                            })
                        })
                        .collect();
                    csv_text(&["kind", "rank", "structure", "size"], rows)
                }
            };
            done(text, common)
        }
        Command::Poset {
            file,
            abstraction,
            budget,
            common,
        } => {
            let doc = load(&file, common.dedup)?;
            let abstraction = Abstraction::from(abstraction);
            let deadline = Instant::now() + budget.seconds;
            let axiom_partition = partition_axioms(&doc, abstraction);
            let frame_partition = partition_frames(&extract_frames(&doc));
            let (axioms, frames, timed_out) = match (
                poset_of(&axiom_partition, StructureKind::Axiom, deadline),
                poset_of(&frame_partition, StructureKind::Frame, deadline),
            ) {
                (Ok(a), Ok(f)) => (Some(a), Some(f), false),
                (Err(PosetError::TimedOut), _) | (_, Err(PosetError::TimedOut)) => {
                    (None, None, true)
                }
                (Err(e), _) | (_, Err(e)) => return Err(Failure::Input(e.to_string())),
            };
            let text = match common.format {
                Format::Structured => to_json(&PosetReport {
                    id: file_id(&file),
                    abstraction: abstraction.symbol().to_string(),
                    axioms,
                    frames,
                    timed_out,
                }),
                Format::Tabular => {
                    let mut rows = Vec::new();
                    for (kind, d) in [("axiom", &axioms), ("frame", &frames)] {
                        for e in d.iter().flat_map(|d| &d.edges) {
                            rows.push(vec![kind.to_string(), e.parent.clone(), e.child.clone()]);
                        }
                    }
                    csv_text(&["kind", "parent", "child"], rows)
                }
            };
            Ok((
                Output {
                    text,
                    complete: !timed_out,
                },
                common.output,
            ))
        }
        Command::Classify { file, common } => {
            let doc = load(&file, common.dedup)?;
            let category = classify(&doc);
            let text = match common.format {
                Format::Structured => format!("{category}\n"),
                Format::Tabular => csv_text(
                    &["id", "category"],
                    vec![vec![file_id(&file), category.to_string()]],
                ),
            };
            done(text, common)
        }
    }
}

fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok((output, path)) => {
            if let Err(e) = emit(&output.text, path.as_deref()) {
                let target = path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
                eprintln!("error: {target}: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            if output.complete {
                ExitCode::SUCCESS
            } else {
                eprintln!("warning: time budget exhausted; poset metrics are missing");
                ExitCode::from(EXIT_PARTIAL)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
