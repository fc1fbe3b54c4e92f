//! Syntactic regularities and modelling structures in OWL ontologies.
//!
//! The pipeline reads an ontology in functional-style syntax ([`fss`]),
//! turns its class-expression axioms into edge-labelled trees ([`ast`]),
//! abstracts them ([`abstraction`]), groups axioms and class frames
//! ([`frames`]) into regularities ([`regularity`]), orders the resulting
//! structures by containment ([`order`]) and summarises everything per
//! ontology or per corpus ([`survey`]).
//!
//! ```
//! use owlstruct::{abstraction::Abstraction, fss::parse_document, regularity::partition_axioms};
//!
//! let doc = parse_document(
//!     "Prefix(:=<http://ex.org/>)
//!      Ontology(SubClassOf(:A :B) SubClassOf(:C :D) SubClassOf(:E ObjectSomeValuesFrom(:p :F)))",
//! )
//! .unwrap();
//! let regs = partition_axioms(&doc, Abstraction::Ground);
//! assert_eq!(regs[0].structure.render(), "SubClassOf(*, *)");
//! assert_eq!(regs[0].size(), 2);
//! ```

pub mod abstraction;
pub mod ast;
pub mod frames;
pub mod fss;
pub mod order;
pub mod profile;
pub mod regularity;
pub mod survey;

pub use abstraction::{Abstraction, StructureMultiset};
pub use ast::{AxiomTree, Constructor, EdgeTag, LeafKind, NodeLabel};
pub use fss::{parse_document, Document, ParseError};
pub use profile::Category;
pub use regularity::{ModellingStructure, Regularity, StructureKind};
