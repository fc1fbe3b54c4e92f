//! Edge-labelled, unordered abstract syntax trees for class-expression axioms.
//!
//! Every parent→child branch carries an [`EdgeTag`] describing the role of the
//! argument (subclass, superclass, operand, property, ...). Because argument
//! order is encoded in the tags, children are treated as an unordered
//! collection and two trees are equal iff their [`AxiomTree::canonical_encoding`]
//! strings are equal.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// The placeholder label that the ground generalisation puts on every leaf.
pub const PLACEHOLDER: &str = "*";

/// OWL constructors that may appear as internal nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constructor {
    SubClassOf,
    EquivalentClasses,
    DisjointClasses,
    DisjointUnion,
    ObjectIntersectionOf,
    ObjectUnionOf,
    ObjectComplementOf,
    ObjectOneOf,
    ObjectSomeValuesFrom,
    ObjectAllValuesFrom,
    ObjectHasValue,
    ObjectHasSelf,
    ObjectMinCardinality,
    ObjectMaxCardinality,
    ObjectExactCardinality,
    DataSomeValuesFrom,
    DataAllValuesFrom,
    DataHasValue,
    DataMinCardinality,
    DataMaxCardinality,
    DataExactCardinality,
}

impl Constructor {
    pub const ALL: [Constructor; 21] = [
        Constructor::SubClassOf,
        Constructor::EquivalentClasses,
        Constructor::DisjointClasses,
        Constructor::DisjointUnion,
        Constructor::ObjectIntersectionOf,
        Constructor::ObjectUnionOf,
        Constructor::ObjectComplementOf,
        Constructor::ObjectOneOf,
        Constructor::ObjectSomeValuesFrom,
        Constructor::ObjectAllValuesFrom,
        Constructor::ObjectHasValue,
        Constructor::ObjectHasSelf,
        Constructor::ObjectMinCardinality,
        Constructor::ObjectMaxCardinality,
        Constructor::ObjectExactCardinality,
        Constructor::DataSomeValuesFrom,
        Constructor::DataAllValuesFrom,
        Constructor::DataHasValue,
        Constructor::DataMinCardinality,
        Constructor::DataMaxCardinality,
        Constructor::DataExactCardinality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constructor::SubClassOf => "SubClassOf",
            Constructor::EquivalentClasses => "EquivalentClasses",
            Constructor::DisjointClasses => "DisjointClasses",
            Constructor::DisjointUnion => "DisjointUnion",
            Constructor::ObjectIntersectionOf => "ObjectIntersectionOf",
            Constructor::ObjectUnionOf => "ObjectUnionOf",
            Constructor::ObjectComplementOf => "ObjectComplementOf",
            Constructor::ObjectOneOf => "ObjectOneOf",
            Constructor::ObjectSomeValuesFrom => "ObjectSomeValuesFrom",
            Constructor::ObjectAllValuesFrom => "ObjectAllValuesFrom",
            Constructor::ObjectHasValue => "ObjectHasValue",
            Constructor::ObjectHasSelf => "ObjectHasSelf",
            Constructor::ObjectMinCardinality => "ObjectMinCardinality",
            Constructor::ObjectMaxCardinality => "ObjectMaxCardinality",
            Constructor::ObjectExactCardinality => "ObjectExactCardinality",
            Constructor::DataSomeValuesFrom => "DataSomeValuesFrom",
            Constructor::DataAllValuesFrom => "DataAllValuesFrom",
            Constructor::DataHasValue => "DataHasValue",
            Constructor::DataMinCardinality => "DataMinCardinality",
            Constructor::DataMaxCardinality => "DataMaxCardinality",
            Constructor::DataExactCardinality => "DataExactCardinality",
        }
    }

    pub fn from_name(name: &str) -> Option<Constructor> {
        Constructor::ALL.iter().copied().find(|c| c.name() == name)
    }

    /// The four axiom kinds that head an analysed axiom.
    pub fn is_axiom(self) -> bool {
        matches!(
            self,
            Constructor::SubClassOf
                | Constructor::EquivalentClasses
                | Constructor::DisjointClasses
                | Constructor::DisjointUnion
        )
    }

    pub fn is_cardinality(self) -> bool {
        matches!(
            self,
            Constructor::ObjectMinCardinality
                | Constructor::ObjectMaxCardinality
                | Constructor::ObjectExactCardinality
                | Constructor::DataMinCardinality
                | Constructor::DataMaxCardinality
                | Constructor::DataExactCardinality
        )
    }

    pub fn is_data(self) -> bool {
        matches!(
            self,
            Constructor::DataSomeValuesFrom
                | Constructor::DataAllValuesFrom
                | Constructor::DataHasValue
                | Constructor::DataMinCardinality
                | Constructor::DataMaxCardinality
                | Constructor::DataExactCardinality
        )
    }
}

impl fmt::Display for Constructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Role of an argument relative to its parent constructor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeTag {
    Sub,
    Super,
    Lhs,
    Op,
    Prop,
    Filler,
    Ind,
    Lit,
    Range,
    Card,
}

impl EdgeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Sub => "sub",
            EdgeTag::Super => "super",
            EdgeTag::Lhs => "lhs",
            EdgeTag::Op => "op",
            EdgeTag::Prop => "prop",
            EdgeTag::Filler => "filler",
            EdgeTag::Ind => "ind",
            EdgeTag::Lit => "lit",
            EdgeTag::Range => "range",
            EdgeTag::Card => "card",
        }
    }

    /// Orders tags by their textual form, which is the order used by the
    /// canonical encoding.
    pub fn cmp_text(self, other: EdgeTag) -> Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The labelling function: the role of argument `position` of `constructor`
/// applied to `arity` arguments.
///
/// Data quantifiers may carry several properties before the data range, so
/// every position but the last is `prop` for them.
///
/// # Panics
///
/// Panics if `position >= arity`.
pub fn edge_label_for(constructor: Constructor, position: usize, arity: usize) -> EdgeTag {
    assert!(
        position < arity,
        "argument position {position} out of range for {constructor} with arity {arity}"
    );
    use Constructor::*;
    match constructor {
        SubClassOf => {
            if position == 0 {
                EdgeTag::Sub
            } else {
                EdgeTag::Super
            }
        }
        DisjointUnion => {
            if position == 0 {
                EdgeTag::Lhs
            } else {
                EdgeTag::Op
            }
        }
        EquivalentClasses | DisjointClasses | ObjectIntersectionOf | ObjectUnionOf
        | ObjectComplementOf | ObjectOneOf => EdgeTag::Op,
        ObjectSomeValuesFrom | ObjectAllValuesFrom => {
            if position == 0 {
                EdgeTag::Prop
            } else {
                EdgeTag::Filler
            }
        }
        ObjectHasValue => {
            if position == 0 {
                EdgeTag::Prop
            } else {
                EdgeTag::Ind
            }
        }
        ObjectHasSelf => EdgeTag::Prop,
        DataHasValue => {
            if position == 0 {
                EdgeTag::Prop
            } else {
                EdgeTag::Lit
            }
        }
        DataSomeValuesFrom | DataAllValuesFrom => {
            if position + 1 == arity {
                EdgeTag::Range
            } else {
                EdgeTag::Prop
            }
        }
        ObjectMinCardinality | ObjectMaxCardinality | ObjectExactCardinality => match position {
            0 => EdgeTag::Card,
            1 => EdgeTag::Prop,
            _ => EdgeTag::Filler,
        },
        DataMinCardinality | DataMaxCardinality | DataExactCardinality => match position {
            0 => EdgeTag::Card,
            1 => EdgeTag::Prop,
            _ => EdgeTag::Range,
        },
    }
}

/// What a leaf token denotes. Retained on concrete trees for classification;
/// it takes no part in equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafKind {
    Class,
    ObjectProperty,
    DataProperty,
    Individual,
    Datatype,
    Literal,
    Cardinality,
    Placeholder,
}

#[derive(Debug, Clone)]
pub enum NodeLabel {
    Constructor(Constructor),
    Leaf { kind: LeafKind, token: String },
}

impl NodeLabel {
    pub fn leaf(kind: LeafKind, token: impl Into<String>) -> Self {
        NodeLabel::Leaf {
            kind,
            token: token.into(),
        }
    }

    pub fn placeholder() -> Self {
        NodeLabel::leaf(LeafKind::Placeholder, PLACEHOLDER)
    }

    /// The text that identifies this label in encodings and renderings.
    pub fn text(&self) -> &str {
        match self {
            NodeLabel::Constructor(c) => c.name(),
            NodeLabel::Leaf { token, .. } => token,
        }
    }

    pub fn constructor(&self) -> Option<Constructor> {
        match self {
            NodeLabel::Constructor(c) => Some(*c),
            NodeLabel::Leaf { .. } => None,
        }
    }

    pub fn leaf_kind(&self) -> Option<LeafKind> {
        match self {
            NodeLabel::Constructor(_) => None,
            NodeLabel::Leaf { kind, .. } => Some(*kind),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, NodeLabel::Leaf { .. })
    }
}

impl PartialEq for NodeLabel {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (NodeLabel::Constructor(a), NodeLabel::Constructor(b)) => a == b,
            (NodeLabel::Leaf { token: a, .. }, NodeLabel::Leaf { token: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl Eq for NodeLabel {}

/// An abstract syntax tree of one axiom (or of a sub-expression).
///
/// Children are kept in the order they were supplied so that a concrete tree
/// can be written back out as functional-style syntax, but equality, hashing
/// and ordering ignore the order of children.
#[derive(Debug, Clone)]
pub struct AxiomTree {
    label: NodeLabel,
    children: Vec<(EdgeTag, AxiomTree)>,
}

impl AxiomTree {
    pub fn leaf(kind: LeafKind, token: impl Into<String>) -> Self {
        AxiomTree {
            label: NodeLabel::leaf(kind, token),
            children: Vec::new(),
        }
    }

    pub fn placeholder() -> Self {
        AxiomTree {
            label: NodeLabel::placeholder(),
            children: Vec::new(),
        }
    }

    /// Named class leaf.
    pub fn class(iri: impl Into<String>) -> Self {
        AxiomTree::leaf(LeafKind::Class, iri)
    }

    /// Builds a constructor node from positional arguments, tagging each
    /// branch with [`edge_label_for`].
    pub fn node(constructor: Constructor, args: Vec<AxiomTree>) -> Self {
        let arity = args.len();
        let children = args
            .into_iter()
            .enumerate()
            .map(|(i, t)| (edge_label_for(constructor, i, arity), t))
            .collect();
        AxiomTree {
            label: NodeLabel::Constructor(constructor),
            children,
        }
    }

    /// Builds a node from already tagged branches.
    pub fn from_parts(label: NodeLabel, children: Vec<(EdgeTag, AxiomTree)>) -> Self {
        AxiomTree { label, children }
    }

    pub fn label(&self) -> &NodeLabel {
        &self.label
    }

    pub fn children(&self) -> &[(EdgeTag, AxiomTree)] {
        &self.children
    }

    pub fn constructor(&self) -> Option<Constructor> {
        self.label.constructor()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty() && self.label.is_leaf()
    }

    /// True for a leaf naming a class.
    pub fn is_named_class(&self) -> bool {
        self.label.leaf_kind() == Some(LeafKind::Class)
    }

    /// The class IRI if this tree is a named class leaf.
    pub fn class_iri(&self) -> Option<&str> {
        match &self.label {
            NodeLabel::Leaf {
                kind: LeafKind::Class,
                token,
            } => Some(token),
            _ => None,
        }
    }

    /// Total number of nodes, leaves included.
    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|(_, c)| c.node_count())
            .sum::<usize>()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|(_, c)| 1 + c.depth())
            .max()
            .unwrap_or(0)
    }

    /// Pre-order traversal of all nodes.
    pub fn nodes(&self) -> Vec<&AxiomTree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            for (_, c) in t.children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Children with their encodings, sorted into canonical order.
    pub fn canonical_children(&self) -> Vec<(EdgeTag, String, &AxiomTree)> {
        let mut kids: Vec<_> = self
            .children
            .iter()
            .map(|(tag, c)| (*tag, c.canonical_encoding(), c))
            .collect();
        kids.sort_by(|a, b| a.0.cmp_text(b.0).then_with(|| a.1.cmp(&b.1)));
        kids
    }

    /// Stable textual identity: a leaf encodes as its token, a constructor as
    /// `Name(tag=child,...)` with children sorted by `(tag, child encoding)`.
    pub fn canonical_encoding(&self) -> String {
        let mut out = String::new();
        self.write_encoding(&mut out);
        out
    }

    fn write_encoding(&self, out: &mut String) {
        out.push_str(self.label.text());
        if self.label.is_leaf() && self.children.is_empty() {
            return;
        }
        out.push('(');
        for (i, (tag, enc, _)) in self.canonical_children().into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(tag.as_str());
            out.push('=');
            out.push_str(&enc);
        }
        out.push(')');
    }

    /// Display form with edge tags elided: `SubClassOf(*, ObjectSomeValuesFrom(*, *))`.
    /// Children appear in canonical order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_rendered(&mut out);
        out
    }

    fn write_rendered(&self, out: &mut String) {
        out.push_str(self.label.text());
        if self.label.is_leaf() && self.children.is_empty() {
            return;
        }
        out.push('(');
        for (i, (_, _, child)) in self.canonical_children().into_iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            child.write_rendered(out);
        }
        out.push(')');
    }

    /// Writes the tree as functional-style syntax, arguments in stored order.
    /// Leaf tokens are emitted verbatim, so full IRIs must already be in
    /// `<...>` form.
    pub fn to_functional(&self) -> String {
        let mut out = String::new();
        self.write_functional(&mut out);
        out
    }

    fn write_functional(&self, out: &mut String) {
        out.push_str(self.label.text());
        if self.label.is_leaf() && self.children.is_empty() {
            return;
        }
        out.push('(');
        for (i, (_, child)) in self.children.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            child.write_functional(out);
        }
        out.push(')');
    }

    /// Applies `f` to every leaf, keeping shape and edge tags.
    pub fn map_leaves(&self, f: &impl Fn(&NodeLabel) -> NodeLabel) -> AxiomTree {
        if self.children.is_empty() && self.label.is_leaf() {
            return AxiomTree {
                label: f(&self.label),
                children: Vec::new(),
            };
        }
        AxiomTree {
            label: self.label.clone(),
            children: self
                .children
                .iter()
                .map(|(tag, c)| (*tag, c.map_leaves(f)))
                .collect(),
        }
    }

    /// Drops every leaf together with the branch leading to it. Returns `None`
    /// if the tree itself is a leaf.
    pub fn without_leaves(&self) -> Option<AxiomTree> {
        if self.label.is_leaf() {
            return None;
        }
        Some(AxiomTree {
            label: self.label.clone(),
            children: self
                .children
                .iter()
                .filter_map(|(tag, c)| c.without_leaves().map(|c| (*tag, c)))
                .collect(),
        })
    }
}

impl PartialEq for AxiomTree {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_encoding() == other.canonical_encoding()
    }
}

impl Eq for AxiomTree {}

impl Hash for AxiomTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_encoding().hash(state);
    }
}

impl PartialOrd for AxiomTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AxiomTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_encoding().cmp(&other.canonical_encoding())
    }
}

impl fmt::Display for AxiomTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
