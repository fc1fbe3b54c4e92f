//! Reader for OWL 2 functional-style syntax.
//!
//! Only the class-expression axioms (`SubClassOf`, `EquivalentClasses`,
//! `DisjointClasses`, `DisjointUnion`) are kept. Every other axiom is counted
//! in [`Document::skipped`]. Axiom annotations are dropped, so an annotated
//! axiom yields the same tree as its bare counterpart.
//!
//! Parsing runs in two stages: a lexer + bracket matcher turns the text into
//! generic [`Term`]s, and the interpreter converts terms into [`AxiomTree`]s.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::ast::{AxiomTree, Constructor, LeafKind};

/// Line/column of a token, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: {message}")]
    Syntax { pos: Position, message: String },
    #[error("{pos}: unknown prefix `{prefix}:`")]
    UnknownPrefix { pos: Position, prefix: String },
    #[error("no Ontology(...) block found")]
    MissingOntology,
}

/// Prefixes that are predefined unless a document rebinds them.
pub const STANDARD_PREFIXES: [(&str, &str); 5] = [
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
    ("xml", "http://www.w3.org/XML/1998/namespace"),
];

/// An ontology restricted to its class-expression axioms.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub ontology_iri: Option<String>,
    pub prefixes: BTreeMap<String, String>,
    pub axioms: Vec<AxiomTree>,
    /// Axioms read but not kept: other axiom kinds and axioms using
    /// unsupported constructors.
    pub skipped: usize,
    pub warnings: Vec<String>,
}

impl Document {
    pub fn total_axioms_read(&self) -> usize {
        self.axioms.len() + self.skipped
    }

    /// Removes repeated axioms (by canonical encoding), keeping the first
    /// occurrence. Returns the number removed.
    pub fn dedup(&mut self) -> usize {
        let before = self.axioms.len();
        let mut seen = HashSet::new();
        self.axioms.retain(|t| seen.insert(t.canonical_encoding()));
        before - self.axioms.len()
    }
}

/// Parses a complete functional-syntax document.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let terms = read_terms(text)?;
    let mut doc = Document::default();
    for (p, iri) in STANDARD_PREFIXES {
        doc.prefixes.insert(p.to_string(), iri.to_string());
    }
    let mut ontology = None;
    for term in terms {
        match term.call() {
            Some(("Prefix", args)) => {
                let (name, iri) = prefix_declaration(&term, args)?;
                doc.prefixes.insert(name, iri);
            }
            Some(("Ontology", _)) => {
                if ontology.is_some() {
                    return Err(syntax(term.pos, "more than one Ontology(...) block"));
                }
                ontology = Some(term);
            }
            _ => {
                return Err(syntax(
                    term.pos,
                    "expected Prefix(...) or Ontology(...) at top level",
                ))
            }
        }
    }
    let ontology = ontology.ok_or(ParseError::MissingOntology)?;
    let Some((_, items)) = ontology.call() else {
        unreachable!()
    };
    let interp = Interpreter {
        prefixes: &doc.prefixes,
    };
    // Resolve every IRI first so that an unknown prefix anywhere is fatal.
    for item in items {
        interp.check_prefixes(item)?;
    }
    let mut header_done = false;
    for item in items {
        match &item.kind {
            TermKind::FullIri(_) | TermKind::Name(_) if !header_done => {
                if doc.ontology_iri.is_none() {
                    doc.ontology_iri = Some(interp.iri(item)?);
                }
            }
            TermKind::Call(name, args) => {
                header_done = true;
                match name.as_str() {
                    "Import" | "Annotation" => {}
                    _ => match Constructor::from_name(name) {
                        Some(c) if c.is_axiom() => match interp.axiom(c, args) {
                            Ok(tree) => doc.axioms.push(tree),
                            Err(message) => {
                                doc.skipped += 1;
                                doc.warnings.push(format!(
                                    "line {}: skipped {name}: {message}",
                                    item.pos.line
                                ));
                            }
                        },
                        _ => doc.skipped += 1,
                    },
                }
            }
            _ => return Err(syntax(item.pos, "unexpected token inside Ontology(...)")),
        }
    }
    Ok(doc)
}

fn syntax(pos: Position, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        message: message.into(),
    }
}

fn prefix_declaration(term: &Term, args: &[Term]) -> Result<(String, String), ParseError> {
    match args {
        [Term {
            kind: TermKind::Name(name),
            ..
        }, Term {
            kind: TermKind::Equals,
            ..
        }, Term {
            kind: TermKind::FullIri(iri),
            ..
        }] if name.ends_with(':') => Ok((name[..name.len() - 1].to_string(), iri.clone())),
        _ => Err(syntax(term.pos, "malformed Prefix declaration")),
    }
}

// ---------------------------------------------------------------------------
// Lexing and term structure

#[derive(Debug, Clone, PartialEq)]
enum TermKind {
    /// `<...>`, stored without the angle brackets.
    FullIri(String),
    /// A bare word: prefixed name, keyword, number or blank node.
    Name(String),
    /// Full literal source text, e.g. `"5"^^xsd:integer`.
    Literal {
        lexical: String,
        suffix: LiteralSuffix,
    },
    Equals,
    Call(String, Vec<Term>),
}

#[derive(Debug, Clone, PartialEq)]
enum LiteralSuffix {
    None,
    Lang(String),
    Datatype(Box<Term>),
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    kind: TermKind,
    pos: Position,
}

impl Term {
    fn call(&self) -> Option<(&str, &[Term])> {
        match &self.kind {
            TermKind::Call(n, a) => Some((n.as_str(), a.as_slice())),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Open,
    Close,
    Equals,
    Iri(String),
    Word(String),
    Literal { lexical: String, suffix: RawSuffix },
}

#[derive(Debug, Clone, PartialEq)]
enum RawSuffix {
    None,
    Lang(String),
    Iri(String),
    Word(String),
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn pos(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_line(&mut self) {
        while let Some(c) = self.bump() {
            if c == '\n' {
                break;
            }
        }
    }

    fn is_word_char(c: char) -> bool {
        !(c.is_whitespace() || matches!(c, '(' | ')' | '<' | '>' | '"' | '='))
    }

    fn word(&mut self) -> String {
        let mut w = String::new();
        while let Some(&c) = self.chars.peek() {
            if !Self::is_word_char(c) {
                break;
            }
            w.push(c);
            self.bump();
        }
        w
    }

    fn iri(&mut self, start: Position) -> Result<String, ParseError> {
        self.bump(); // '<'
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(s),
                Some(c) if c.is_whitespace() => return Err(syntax(start, "whitespace inside IRI")),
                Some(c) => s.push(c),
                None => return Err(syntax(start, "unterminated IRI")),
            }
        }
    }

    fn literal(&mut self, start: Position) -> Result<Token, ParseError> {
        self.bump(); // '"'
        let mut lexical = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some(c @ ('"' | '\\')) => lexical.push(c),
                    Some(c) => {
                        lexical.push('\\');
                        lexical.push(c);
                    }
                    None => return Err(syntax(start, "unterminated literal")),
                },
                Some(c) => lexical.push(c),
                None => return Err(syntax(start, "unterminated literal")),
            }
        }
        let suffix = match self.chars.peek() {
            Some('@') => {
                self.bump();
                RawSuffix::Lang(self.word())
            }
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(syntax(start, "expected `^^` after literal"));
                }
                match self.chars.peek() {
                    Some('<') => {
                        let p = self.pos();
                        RawSuffix::Iri(self.iri(p)?)
                    }
                    _ => {
                        let w = self.word();
                        if w.is_empty() {
                            return Err(syntax(start, "missing datatype after `^^`"));
                        }
                        RawSuffix::Word(w)
                    }
                }
            }
            _ => RawSuffix::None,
        };
        Ok(Token::Literal { lexical, suffix })
    }

    fn next_token(&mut self) -> Result<Option<(Token, Position)>, ParseError> {
        loop {
            let Some(&c) = self.chars.peek() else {
                return Ok(None);
            };
            let pos = self.pos();
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    continue;
                }
                '#' => {
                    self.skip_line();
                    continue;
                }
                '/' => {
                    self.bump();
                    if self.chars.peek() == Some(&'/') {
                        self.skip_line();
                        continue;
                    }
                    return Err(syntax(pos, "unexpected `/`"));
                }
                '(' => {
                    self.bump();
                    Token::Open
                }
                ')' => {
                    self.bump();
                    Token::Close
                }
                '=' => {
                    self.bump();
                    Token::Equals
                }
                '<' => Token::Iri(self.iri(pos)?),
                '"' => self.literal(pos)?,
                '>' => return Err(syntax(pos, "unexpected `>`")),
                _ => Token::Word(self.word()),
            };
            return Ok(Some((tok, pos)));
        }
    }
}

fn read_terms(text: &str) -> Result<Vec<Term>, ParseError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    while let Some(t) = lexer.next_token()? {
        tokens.push(t);
    }
    let end = lexer.pos();
    let mut iter = tokens.into_iter().peekable();
    let mut terms = Vec::new();
    while iter.peek().is_some() {
        terms.push(read_term(&mut iter, end)?);
    }
    Ok(terms)
}

fn read_term(
    iter: &mut std::iter::Peekable<std::vec::IntoIter<(Token, Position)>>,
    end: Position,
) -> Result<Term, ParseError> {
    let (tok, pos) = iter
        .next()
        .ok_or_else(|| syntax(end, "unexpected end of input"))?;
    let kind = match tok {
        Token::Open => return Err(syntax(pos, "unexpected `(`")),
        Token::Close => return Err(syntax(pos, "unbalanced `)`")),
        Token::Equals => TermKind::Equals,
        Token::Iri(s) => TermKind::FullIri(s),
        Token::Literal { lexical, suffix } => TermKind::Literal {
            lexical,
            suffix: match suffix {
                RawSuffix::None => LiteralSuffix::None,
                RawSuffix::Lang(l) => LiteralSuffix::Lang(l),
                RawSuffix::Iri(i) => LiteralSuffix::Datatype(Box::new(Term {
                    kind: TermKind::FullIri(i),
                    pos,
                })),
                RawSuffix::Word(w) => LiteralSuffix::Datatype(Box::new(Term {
                    kind: TermKind::Name(w),
                    pos,
                })),
            },
        },
        Token::Word(w) => {
            if matches!(iter.peek(), Some((Token::Open, _))) {
                iter.next();
                let mut args = Vec::new();
                loop {
                    match iter.peek() {
                        Some((Token::Close, _)) => {
                            iter.next();
                            break;
                        }
                        Some(_) => args.push(read_term(iter, end)?),
                        None => {
                            return Err(syntax(
                                end,
                                format!("unbalanced `(`: `{w}(` opened at {pos} is never closed"),
                            ))
                        }
                    }
                }
                TermKind::Call(w, args)
            } else {
                TermKind::Name(w)
            }
        }
    };
    Ok(Term { kind, pos })
}

// ---------------------------------------------------------------------------
// Interpretation

struct Interpreter<'a> {
    prefixes: &'a BTreeMap<String, String>,
}

type AxiomResult<T> = Result<T, String>;

impl Interpreter<'_> {
    fn check_prefixes(&self, term: &Term) -> Result<(), ParseError> {
        match &term.kind {
            TermKind::Name(_) => {
                if let NameKind::Prefixed = classify_name(term) {
                    self.iri(term)?;
                }
                Ok(())
            }
            TermKind::Literal {
                suffix: LiteralSuffix::Datatype(dt),
                ..
            } => self.check_prefixes(dt),
            TermKind::Call(_, args) => args.iter().try_for_each(|a| self.check_prefixes(a)),
            _ => Ok(()),
        }
    }

    /// Expands a full or prefixed IRI to its full form (without brackets).
    fn iri(&self, term: &Term) -> Result<String, ParseError> {
        match &term.kind {
            TermKind::FullIri(s) => Ok(s.clone()),
            TermKind::Name(w) => {
                let Some((prefix, local)) = w.split_once(':') else {
                    return Err(syntax(term.pos, format!("expected an IRI, found `{w}`")));
                };
                match self.prefixes.get(prefix) {
                    Some(exp) => Ok(format!("{exp}{local}")),
                    None => Err(ParseError::UnknownPrefix {
                        pos: term.pos,
                        prefix: prefix.to_string(),
                    }),
                }
            }
            _ => Err(syntax(term.pos, "expected an IRI")),
        }
    }

    fn entity(&self, term: &Term, kind: LeafKind, what: &str) -> AxiomResult<AxiomTree> {
        match &term.kind {
            TermKind::FullIri(_) | TermKind::Name(_) if classify_name(term) != NameKind::Other => {
                let iri = self.iri(term).map_err(|e| e.to_string())?;
                Ok(AxiomTree::leaf(kind, format!("<{iri}>")))
            }
            TermKind::Call(name, _) => Err(format!("unsupported {what} constructor {name}")),
            _ => Err(format!("expected {what} at {}", term.pos)),
        }
    }

    fn axiom(&self, c: Constructor, args: &[Term]) -> AxiomResult<AxiomTree> {
        let args = strip_annotations(args);
        let parts: Vec<AxiomTree> = match c {
            Constructor::SubClassOf => {
                expect_arity(c, args, 2, 2)?;
                args.iter()
                    .map(|a| self.class_expression(a))
                    .collect::<AxiomResult<_>>()?
            }
            Constructor::EquivalentClasses | Constructor::DisjointClasses => {
                expect_arity(c, args, 2, usize::MAX)?;
                args.iter()
                    .map(|a| self.class_expression(a))
                    .collect::<AxiomResult<_>>()?
            }
            Constructor::DisjointUnion => {
                expect_arity(c, args, 3, usize::MAX)?;
                let mut v = vec![self.entity(&args[0], LeafKind::Class, "class")?];
                for a in &args[1..] {
                    v.push(self.class_expression(a)?);
                }
                v
            }
            _ => unreachable!("not an axiom constructor"),
        };
        Ok(AxiomTree::node(c, parts))
    }

    fn class_expression(&self, term: &Term) -> AxiomResult<AxiomTree> {
        let TermKind::Call(name, args) = &term.kind else {
            return self.entity(term, LeafKind::Class, "class expression");
        };
        let c = match Constructor::from_name(name) {
            Some(c) if !c.is_axiom() => c,
            _ => return Err(format!("unsupported class expression constructor {name}")),
        };
        use Constructor::*;
        let parts = match c {
            ObjectIntersectionOf | ObjectUnionOf => {
                expect_arity(c, args, 2, usize::MAX)?;
                args.iter()
                    .map(|a| self.class_expression(a))
                    .collect::<AxiomResult<_>>()?
            }
            ObjectComplementOf => {
                expect_arity(c, args, 1, 1)?;
                vec![self.class_expression(&args[0])?]
            }
            ObjectOneOf => {
                expect_arity(c, args, 1, usize::MAX)?;
                args.iter()
                    .map(|a| self.individual(a))
                    .collect::<AxiomResult<_>>()?
            }
            ObjectSomeValuesFrom | ObjectAllValuesFrom => {
                expect_arity(c, args, 2, 2)?;
                vec![
                    self.object_property(&args[0])?,
                    self.class_expression(&args[1])?,
                ]
            }
            ObjectHasValue => {
                expect_arity(c, args, 2, 2)?;
                vec![self.object_property(&args[0])?, self.individual(&args[1])?]
            }
            ObjectHasSelf => {
                expect_arity(c, args, 1, 1)?;
                vec![self.object_property(&args[0])?]
            }
            ObjectMinCardinality | ObjectMaxCardinality | ObjectExactCardinality => {
                expect_arity(c, args, 2, 3)?;
                let mut v = vec![cardinality(&args[0])?, self.object_property(&args[1])?];
                if let Some(f) = args.get(2) {
                    v.push(self.class_expression(f)?);
                }
                v
            }
            DataSomeValuesFrom | DataAllValuesFrom => {
                expect_arity(c, args, 2, usize::MAX)?;
                let (range, props) = args.split_last().expect("arity checked");
                let mut v = props
                    .iter()
                    .map(|p| self.entity(p, LeafKind::DataProperty, "data property"))
                    .collect::<AxiomResult<Vec<_>>>()?;
                v.push(self.entity(range, LeafKind::Datatype, "data range")?);
                v
            }
            DataHasValue => {
                expect_arity(c, args, 2, 2)?;
                vec![
                    self.entity(&args[0], LeafKind::DataProperty, "data property")?,
                    self.literal(&args[1])?,
                ]
            }
            DataMinCardinality | DataMaxCardinality | DataExactCardinality => {
                expect_arity(c, args, 2, 3)?;
                let mut v = vec![
                    cardinality(&args[0])?,
                    self.entity(&args[1], LeafKind::DataProperty, "data property")?,
                ];
                if let Some(r) = args.get(2) {
                    v.push(self.entity(r, LeafKind::Datatype, "data range")?);
                }
                v
            }
            SubClassOf | EquivalentClasses | DisjointClasses | DisjointUnion => unreachable!(),
        };
        Ok(AxiomTree::node(c, parts))
    }

    fn object_property(&self, term: &Term) -> AxiomResult<AxiomTree> {
        self.entity(term, LeafKind::ObjectProperty, "object property")
    }

    fn individual(&self, term: &Term) -> AxiomResult<AxiomTree> {
        if let TermKind::Name(w) = &term.kind {
            if w.starts_with("_:") {
                return Ok(AxiomTree::leaf(LeafKind::Individual, w.clone()));
            }
        }
        self.entity(term, LeafKind::Individual, "individual")
    }

    fn literal(&self, term: &Term) -> AxiomResult<AxiomTree> {
        let TermKind::Literal { lexical, suffix } = &term.kind else {
            return Err(format!("expected literal at {}", term.pos));
        };
        let mut token = String::from('"');
        for ch in lexical.chars() {
            if matches!(ch, '"' | '\\') {
                token.push('\\');
            }
            token.push(ch);
        }
        token.push('"');
        match suffix {
            LiteralSuffix::None => {}
            LiteralSuffix::Lang(l) => {
                token.push('@');
                token.push_str(l);
            }
            LiteralSuffix::Datatype(dt) => {
                let iri = self.iri(dt).map_err(|e| e.to_string())?;
                token.push_str("^^<");
                token.push_str(&iri);
                token.push('>');
            }
        }
        Ok(AxiomTree::leaf(LeafKind::Literal, token))
    }
}

#[derive(Debug, PartialEq, Eq)]
enum NameKind {
    Full,
    Prefixed,
    Other,
}

fn classify_name(term: &Term) -> NameKind {
    match &term.kind {
        TermKind::FullIri(_) => NameKind::Full,
        TermKind::Name(w) if w.contains(':') && !w.starts_with("_:") => NameKind::Prefixed,
        _ => NameKind::Other,
    }
}

fn strip_annotations(args: &[Term]) -> &[Term] {
    let skip = args
        .iter()
        .take_while(|a| matches!(a.call(), Some(("Annotation", _))))
        .count();
    &args[skip..]
}

fn expect_arity(c: Constructor, args: &[Term], min: usize, max: usize) -> AxiomResult<()> {
    if args.len() < min || args.len() > max {
        return Err(format!("{c} with {} arguments", args.len()));
    }
    Ok(())
}

fn cardinality(term: &Term) -> AxiomResult<AxiomTree> {
    match &term.kind {
        TermKind::Name(w) if !w.is_empty() && w.bytes().all(|b| b.is_ascii_digit()) => {
            Ok(AxiomTree::leaf(LeafKind::Cardinality, w.clone()))
        }
        _ => Err(format!("expected non-negative integer at {}", term.pos)),
    }
}
