//! Indexed in-memory triple store with pattern matching.
//!
//! Triples are kept as a set plus three lookup maps keyed by (s,p), (p,o),
//! and (o,s), so any pattern with at least two concrete positions resolves
//! through an index. Match results come back in a deterministic sorted
//! order so downstream runs are reproducible.

use std::collections::{BTreeSet, HashMap};

use crate::term::{Bindings, PatternSlot, Term, TermError, Triple, TriplePattern};

#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    triples: BTreeSet<Triple>,
    sp: HashMap<(Term, Term), BTreeSet<Term>>,
    po: HashMap<(Term, Term), BTreeSet<Term>>,
    os: HashMap<(Term, Term), BTreeSet<Term>>,
}

impl TripleStore {
    pub fn new() -> TripleStore {
        TripleStore::default()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    /// Insert a triple; returns `true` iff it was not already present.
    pub fn insert(&mut self, t: Triple) -> bool {
        // Re-check invariants: Triple construction enforces them, but a
        // deserialized value could bypass Triple::new.
        debug_assert!(!t.s.is_literal() && t.p.is_uri());
        if !self.triples.insert(t.clone()) {
            return false;
        }
        self.sp
            .entry((t.s.clone(), t.p.clone()))
            .or_default()
            .insert(t.o.clone());
        self.po
            .entry((t.p.clone(), t.o.clone()))
            .or_default()
            .insert(t.s.clone());
        self.os
            .entry((t.o.clone(), t.s.clone()))
            .or_default()
            .insert(t.p.clone());
        true
    }

    /// Validate and insert terms as a triple.
    pub fn insert_terms(&mut self, s: Term, p: Term, o: Term) -> Result<bool, TermError> {
        Ok(self.insert(Triple::new(s, p, o)?))
    }

    /// Iterate all triples in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// All distinct terms appearing in any position, sorted.
    pub fn terms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            out.insert(t.s.clone());
            out.insert(t.p.clone());
            out.insert(t.o.clone());
        }
        out
    }

    /// Match a pattern, returning one binding map per matching triple in
    /// deterministic (term-sorted) order.
    pub fn match_pattern(&self, pattern: &TriplePattern) -> Vec<Bindings> {
        let mut out: Vec<Bindings> = self
            .candidates(pattern)
            .into_iter()
            .filter_map(|t| pattern.match_triple(&t))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Matching triples (rather than bindings), sorted.
    pub fn match_triples(&self, pattern: &TriplePattern) -> Vec<Triple> {
        let mut out: Vec<Triple> = self
            .candidates(pattern)
            .into_iter()
            .filter(|t| pattern.match_triple(t).is_some())
            .collect();
        out.sort();
        out
    }

    /// Narrow the scan set through the best available index.
    fn candidates(&self, pattern: &TriplePattern) -> Vec<Triple> {
        use PatternSlot::{Term as Concrete, Var};
        match (&pattern.s, &pattern.p, &pattern.o) {
            (Concrete(s), Concrete(p), _) => self
                .sp
                .get(&(s.clone(), p.clone()))
                .map(|objects| {
                    objects
                        .iter()
                        .map(|o| Triple {
                            s: s.clone(),
                            p: p.clone(),
                            o: o.clone(),
                        })
                        .collect()
                })
                .unwrap_or_default(),
            (_, Concrete(p), Concrete(o)) => self
                .po
                .get(&(p.clone(), o.clone()))
                .map(|subjects| {
                    subjects
                        .iter()
                        .map(|s| Triple {
                            s: s.clone(),
                            p: p.clone(),
                            o: o.clone(),
                        })
                        .collect()
                })
                .unwrap_or_default(),
            (Concrete(s), Var(_), Concrete(o)) => self
                .os
                .get(&(o.clone(), s.clone()))
                .map(|predicates| {
                    predicates
                        .iter()
                        .map(|p| Triple {
                            s: s.clone(),
                            p: p.clone(),
                            o: o.clone(),
                        })
                        .collect()
                })
                .unwrap_or_default(),
            _ => self.triples.iter().cloned().collect(),
        }
    }
}

impl FromIterator<Triple> for TripleStore {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> TripleStore {
        let mut store = TripleStore::new();
        for t in iter {
            store.insert(t);
        }
        store
    }
}
