//! Line-oriented N-Triples subset: parsing and canonical serialization.
//!
//! Accepted tokens are `<uri>`, `_:label`, `"lexical"` and
//! `"lexical"^^<dtype>`; statements end in `.` and `#` starts a comment
//! line. Blank labels are document-scoped: each parse assigns fresh
//! sequential internal ids in first-occurrence order. Serialization emits
//! one statement per line, lexicographically sorted, so
//! `parse(serialize(store))` reproduces the triple set.

use std::collections::HashMap;

use thiserror::Error;

use crate::store::TripleStore;
use crate::term::{Term, TermError, Triple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NtError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Constraint {
        line: usize,
        #[source]
        source: TermError,
    },
}

/// Internal blank ids are zero-padded so their lexicographic order equals
/// their numeric order; this keeps canonical serialization stable under
/// re-parsing.
fn blank_id(n: usize) -> String {
    format!("b{n:06}")
}

/// Parse an N-Triples document into triples in document order.
pub fn parse_ntriples(text: &str) -> Result<Vec<Triple>, NtError> {
    let mut triples = Vec::new();
    let mut blank_ids: HashMap<String, String> = HashMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parser = LineParser::new(line, line_no);
        let s = parser.term(&mut blank_ids)?;
        let p = parser.term(&mut blank_ids)?;
        let o = parser.term(&mut blank_ids)?;
        parser.terminator()?;
        let triple =
            Triple::new(s, p, o).map_err(|source| NtError::Constraint { line: line_no, source })?;
        triples.push(triple);
    }
    Ok(triples)
}

/// Canonical serialization: one sorted statement per line, LF endings.
/// Blank labels are first rewritten to the canonical numbering — the
/// fixpoint where each label equals its first-occurrence index in the
/// sorted document — so that parsing the output reassigns identical ids
/// and `parse(serialize(S))` reproduces a parsed store exactly.
pub fn serialize_ntriples(store: &TripleStore) -> String {
    let mut triples: Vec<Triple> = store.iter().cloned().collect();
    canonicalize_blanks(&mut triples);
    triples.sort();
    let mut out = String::new();
    for t in &triples {
        out.push_str(&t.to_ntriples());
        out.push('\n');
    }
    out
}

/// Relabel blanks by first occurrence in sorted order, repeatedly:
/// relabeling changes the sort order, so iterate until the numbering is
/// stable under its own serialization.
fn canonicalize_blanks(triples: &mut [Triple]) {
    for _ in 0..triples.len() + 8 {
        let mut sorted: Vec<&Triple> = triples.iter().collect();
        sorted.sort();
        let mut mapping: HashMap<String, String> = HashMap::new();
        for t in &sorted {
            for term in [&t.s, &t.o] {
                if let Term::Blank(label) = term {
                    let next = blank_id(mapping.len());
                    mapping.entry(label.clone()).or_insert(next);
                }
            }
        }
        if mapping.iter().all(|(old, new)| old == new) {
            return;
        }
        for t in triples.iter_mut() {
            for term in [&mut t.s, &mut t.o] {
                if let Term::Blank(label) = term {
                    *term = Term::Blank(mapping[label.as_str()].clone());
                }
            }
        }
    }
    debug_assert!(false, "blank canonicalization did not stabilize");
}

struct LineParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    text: &'a str,
}

impl<'a> LineParser<'a> {
    fn new(text: &'a str, line: usize) -> LineParser<'a> {
        LineParser {
            chars: text.chars().collect(),
            pos: 0,
            line,
            text,
        }
    }

    fn err(&self, message: impl Into<String>) -> NtError {
        NtError::Syntax {
            line: self.line,
            message: format!("{} (in {:?})", message.into(), self.text),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some(' ') | Some('\t')) {
            self.pos += 1;
        }
    }

    fn term(&mut self, blank_ids: &mut HashMap<String, String>) -> Result<Term, NtError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some('<') => {
                let uri = self.delimited('<', '>')?;
                Term::uri(uri).map_err(|e| self.err(e.to_string()))
            }
            Some('_') => {
                if self.chars.get(self.pos + 1) != Some(&':') {
                    return Err(self.err("expected ':' after '_' in blank node"));
                }
                self.pos += 2;
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| !c.is_whitespace())
                {
                    self.pos += 1;
                }
                let label: String = self.chars[start..self.pos].iter().collect();
                if label.is_empty() {
                    return Err(self.err("empty blank node label"));
                }
                let next = blank_ids.len();
                let id = blank_ids.entry(label).or_insert_with(|| blank_id(next));
                Ok(Term::Blank(id.clone()))
            }
            Some('"') => {
                let lexical = self.quoted_string()?;
                if self.chars.get(self.pos) == Some(&'^') {
                    if self.chars.get(self.pos + 1) != Some(&'^') {
                        return Err(self.err("expected '^^' before datatype"));
                    }
                    self.pos += 2;
                    if self.chars.get(self.pos) != Some(&'<') {
                        return Err(self.err("expected '<' after '^^'"));
                    }
                    let dtype = self.delimited('<', '>')?;
                    Ok(Term::typed_literal(lexical, dtype))
                } else {
                    Ok(Term::literal(lexical))
                }
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of statement")),
        }
    }

    fn delimited(&mut self, open: char, close: char) -> Result<String, NtError> {
        debug_assert_eq!(self.chars.get(self.pos), Some(&open));
        self.pos += 1;
        let start = self.pos;
        while let Some(&c) = self.chars.get(self.pos) {
            if c == close {
                let value: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                return Ok(value);
            }
            self.pos += 1;
        }
        Err(self.err(format!("unterminated {open}...{close} token")))
    }

    fn quoted_string(&mut self) -> Result<String, NtError> {
        debug_assert_eq!(self.chars.get(self.pos), Some(&'"'));
        self.pos += 1;
        let mut out = String::new();
        while let Some(&c) = self.chars.get(self.pos) {
            match c {
                '"' => {
                    self.pos += 1;
                    return Ok(out);
                }
                '\\' => {
                    self.pos += 1;
                    let escaped = self
                        .chars
                        .get(self.pos)
                        .ok_or_else(|| self.err("dangling escape in literal"))?;
                    match escaped {
                        '\\' => out.push('\\'),
                        '"' => out.push('"'),
                        'n' => out.push('\n'),
                        'r' => out.push('\r'),
                        't' => out.push('\t'),
                        other => return Err(self.err(format!("unknown escape \\{other}"))),
                    }
                    self.pos += 1;
                }
                _ => {
                    out.push(c);
                    self.pos += 1;
                }
            }
        }
        Err(self.err("unterminated literal"))
    }

    fn terminator(&mut self) -> Result<(), NtError> {
        self.skip_ws();
        if self.chars.get(self.pos) != Some(&'.') {
            return Err(self.err("expected '.' terminator"));
        }
        self.pos += 1;
        self.skip_ws();
        if self.pos != self.chars.len() {
            return Err(self.err("trailing content after '.'"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn uri(s: &str) -> Term {
        Term::uri(s).unwrap()
    }

    #[test]
    fn parses_single_uri_statement() {
        let triples = parse_ntriples("<lanl:marko> <lanl:pet> <lanl:fluffy> .\n").unwrap();
        assert_eq!(triples.len(), 1);
        assert_eq!(triples[0].s, uri("lanl:marko"));
        assert_eq!(triples[0].p, uri("lanl:pet"));
        assert_eq!(triples[0].o, uri("lanl:fluffy"));
    }

    #[test]
    fn empty_document_is_empty() {
        assert!(parse_ntriples("").unwrap().is_empty());
        assert!(parse_ntriples("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn parses_typed_literal_object() {
        let triples = parse_ntriples("<a:x> <a:y> \"29\"^^<xsd:int> .").unwrap();
        assert_eq!(triples[0].o, Term::typed_literal("29", "xsd:int"));
    }

    #[test]
    fn literal_subject_is_constraint_error() {
        let err = parse_ntriples("\"x\" <a:p> <a:o> .").unwrap_err();
        assert!(matches!(err, NtError::Constraint { line: 1, .. }));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_ntriples("<a:x> <a:y> <a:z> .\n<a:x> <a:y> .").unwrap_err();
        assert!(matches!(err, NtError::Syntax { line: 2, .. }));
    }

    #[test]
    fn blank_labels_get_fresh_scoped_ids() {
        let doc = "_:alice <a:knows> _:bob .\n_:bob <a:knows> _:alice .";
        let triples = parse_ntriples(doc).unwrap();
        assert_eq!(triples[0].s, Term::Blank("b000000".into()));
        assert_eq!(triples[0].o, Term::Blank("b000001".into()));
        assert_eq!(triples[1].s, Term::Blank("b000001".into()));
    }

    #[test]
    fn one_triple_store_serializes_to_one_terminated_line() {
        let store: TripleStore = parse_ntriples("<a:x> <a:y> <a:z> .")
            .unwrap()
            .into_iter()
            .collect();
        let doc = serialize_ntriples(&store);
        assert_eq!(doc, "<a:x> <a:y> <a:z> .\n");
    }

    #[test]
    fn figure_style_ontology_round_trips() {
        let doc = "\
<lanl:Person> <rdf:type> <rdfs:Class> .
<lanl:Dog> <rdf:type> <rdfs:Class> .
<lanl:pet> <rdf:type> <rdf:Property> .
<lanl:pet> <rdfs:domain> <lanl:Person> .
<lanl:pet> <rdfs:range> <lanl:Dog> .
";
        let store: TripleStore = parse_ntriples(doc).unwrap().into_iter().collect();
        let reparsed: TripleStore = parse_ntriples(&serialize_ntriples(&store))
            .unwrap()
            .into_iter()
            .collect();
        let a: Vec<_> = store.iter().cloned().collect();
        let b: Vec<_> = reparsed.iter().cloned().collect();
        assert_eq!(a, b);
    }
}
