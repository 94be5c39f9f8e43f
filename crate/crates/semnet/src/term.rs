//! Terms, triples, and triple patterns.
//!
//! A term is a URI, a blank node, or a (possibly typed) literal. Triples are
//! constrained so that literals never appear in subject position and only
//! URIs appear in predicate position.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("URI term must be a non-empty absolute IRI (missing ':'): {0:?}")]
    InvalidUri(String),
    #[error("blank node label must be non-empty")]
    EmptyBlankLabel,
    #[error("literal not allowed in {0} position")]
    LiteralPosition(&'static str),
    #[error("blank node not allowed in predicate position")]
    BlankPredicate,
}

/// An RDF term: URI, blank node, or literal.
///
/// The derived ordering (URIs, then blank nodes, then literals, each by
/// text) is the deterministic order used throughout for match results and
/// serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Uri(String),
    Blank(String),
    Literal {
        lexical: String,
        datatype: Option<String>,
    },
}

impl Term {
    /// A validated URI term. The value must contain a scheme separator.
    pub fn uri(value: impl Into<String>) -> Result<Term, TermError> {
        let value = value.into();
        if value.is_empty() || !value.contains(':') {
            return Err(TermError::InvalidUri(value));
        }
        Ok(Term::Uri(value))
    }

    pub fn blank(label: impl Into<String>) -> Result<Term, TermError> {
        let label = label.into();
        if label.is_empty() {
            return Err(TermError::EmptyBlankLabel);
        }
        Ok(Term::Blank(label))
    }

    /// A plain (untyped) literal.
    pub fn literal(lexical: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: None,
        }
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: Some(datatype.into()),
        }
    }

    pub fn is_uri(&self) -> bool {
        matches!(self, Term::Uri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    /// N-Triples rendering of the term.
    pub fn to_ntriples(&self) -> String {
        match self {
            Term::Uri(u) => format!("<{u}>"),
            Term::Blank(b) => format!("_:{b}"),
            Term::Literal { lexical, datatype } => {
                let escaped = escape_literal(lexical);
                match datatype {
                    Some(dt) => format!("\"{escaped}\"^^<{dt}>"),
                    None => format!("\"{escaped}\""),
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ntriples())
    }
}

pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

/// A statement (s, p, o). Construction enforces the positional constraints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub s: Term,
    pub p: Term,
    pub o: Term,
}

impl Triple {
    pub fn new(s: Term, p: Term, o: Term) -> Result<Triple, TermError> {
        if s.is_literal() {
            return Err(TermError::LiteralPosition("subject"));
        }
        match &p {
            Term::Uri(_) => {}
            Term::Blank(_) => return Err(TermError::BlankPredicate),
            Term::Literal { .. } => return Err(TermError::LiteralPosition("predicate")),
        }
        Ok(Triple { s, p, o })
    }

    pub fn to_ntriples(&self) -> String {
        format!(
            "{} {} {} .",
            self.s.to_ntriples(),
            self.p.to_ntriples(),
            self.o.to_ntriples()
        )
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ntriples())
    }
}

/// One position of a triple pattern: a concrete term or a named variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternSlot {
    Term(Term),
    Var(String),
}

impl PatternSlot {
    pub fn var(name: impl Into<String>) -> PatternSlot {
        PatternSlot::Var(name.into())
    }
}

impl From<Term> for PatternSlot {
    fn from(t: Term) -> PatternSlot {
        PatternSlot::Term(t)
    }
}

/// A triple pattern. The same variable name in two positions must bind
/// equal terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub s: PatternSlot,
    pub p: PatternSlot,
    pub o: PatternSlot,
}

impl TriplePattern {
    pub fn new(
        s: impl Into<PatternSlot>,
        p: impl Into<PatternSlot>,
        o: impl Into<PatternSlot>,
    ) -> TriplePattern {
        TriplePattern {
            s: s.into(),
            p: p.into(),
            o: o.into(),
        }
    }

    /// Bindings produced if `t` matches this pattern, or `None`.
    pub fn match_triple(&self, t: &Triple) -> Option<Bindings> {
        let mut bindings = Bindings::new();
        for (slot, term) in [(&self.s, &t.s), (&self.p, &t.p), (&self.o, &t.o)] {
            match slot {
                PatternSlot::Term(expected) => {
                    if expected != term {
                        return None;
                    }
                }
                PatternSlot::Var(name) => match bindings.get(name) {
                    Some(bound) if bound != term => return None,
                    Some(_) => {}
                    None => {
                        bindings.insert(name.clone(), term.clone());
                    }
                },
            }
        }
        Some(bindings)
    }
}

/// Variable name to term map for one pattern match.
pub type Bindings = BTreeMap<String, Term>;
