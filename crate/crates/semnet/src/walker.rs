//! Grammar-based walkers: a small destination-query language
//! (`SELECT ?dest WHERE { … }` with the reserved current-position symbol
//! `@`), grammars as webs of such queries with probabilistic
//! transitions, swarms of seeded random walkers producing visitation
//! counts, and breadth-first "geodesic" walkers that clone at every
//! branch to measure semantically-rich shortest paths.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::store::TripleStore;
use crate::term::{Bindings, PatternSlot, Term, TriplePattern};

pub const DEST_VAR: &str = "dest";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkerError {
    #[error("column {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("query never binds ?{DEST_VAR}")]
    MissingDest,
    #[error("filter references ?{0}, which no pattern binds")]
    UnboundFilterVar(String),
    #[error("grammar node {node}: {source}")]
    NodeQuery {
        node: String,
        #[source]
        source: Box<WalkerError>,
    },
    #[error("grammar references unknown node {0}")]
    UnknownNode(String),
    #[error("grammar node {node}: transition probabilities sum to {sum}, expected 1")]
    BadProbabilities { node: String, sum: f64 },
    #[error("grammar node {node}: negative transition probability {p}")]
    NegativeProbability { node: String, p: f64 },
    #[error("invalid grammar JSON: {0}")]
    Json(String),
    #[error("no start vertices: store has no URI terms and none were supplied")]
    NoStartVertices,
    #[error("walker count must be at least 1")]
    NoWalkers,
}

/// One position of a query term: a ground term, a variable, or the
/// current walker location `@`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum QueryTerm {
    Ground(Term),
    Var(String),
    At,
}

impl QueryTerm {
    fn to_slot(&self, at: &Term) -> PatternSlot {
        match self {
            QueryTerm::Ground(t) => PatternSlot::Term(t.clone()),
            QueryTerm::Var(v) => PatternSlot::var(v.clone()),
            QueryTerm::At => PatternSlot::Term(at.clone()),
        }
    }

    /// Resolve to a concrete term under a binding set; `None` for an
    /// unbound variable.
    fn resolve<'a>(&'a self, at: &'a Term, bindings: &'a Bindings) -> Option<&'a Term> {
        match self {
            QueryTerm::Ground(t) => Some(t),
            QueryTerm::Var(v) => bindings.get(v.as_str()),
            QueryTerm::At => Some(at),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPattern {
    pub s: QueryTerm,
    pub p: QueryTerm,
    pub o: QueryTerm,
}

/// A parsed destination query: conjunctive patterns, inequality
/// filters, and the implicit `?dest` projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkerQuery {
    pub patterns: Vec<QueryPattern>,
    pub filters: Vec<(QueryTerm, QueryTerm)>,
}

/// Parse `SELECT ?dest WHERE { pat ('.' pat)* (FILTER '(' t '!=' t ')')* }`.
/// Terms are `<uri>`, `?var`, `@`, or a (possibly typed) literal.
pub fn parse_walker_query(text: &str) -> Result<WalkerQuery, WalkerError> {
    let mut p = QueryParser {
        chars: text.chars().collect(),
        pos: 0,
    };
    p.keyword("SELECT")?;
    p.skip_ws();
    let proj = p.term()?;
    if proj != QueryTerm::Var(DEST_VAR.to_string()) {
        return Err(p.err(format!("projection must be ?{DEST_VAR}")));
    }
    p.keyword("WHERE")?;
    p.eat('{')?;
    let mut patterns = Vec::new();
    let mut filters = Vec::new();
    loop {
        p.skip_ws();
        if p.peek_keyword("FILTER") {
            break;
        }
        let s = p.term()?;
        let pred = p.term()?;
        let o = p.term()?;
        patterns.push(QueryPattern { s, p: pred, o });
        p.skip_ws();
        match p.chars.get(p.pos) {
            Some('.') => {
                p.pos += 1;
                p.skip_ws();
                if p.chars.get(p.pos) == Some(&'}') {
                    break;
                }
            }
            Some('}') => break,
            _ => return Err(p.err("expected '.', '}' or FILTER after pattern")),
        }
    }
    while p.peek_keyword("FILTER") {
        p.keyword("FILTER")?;
        p.eat('(')?;
        let left = p.term()?;
        p.skip_ws();
        if !(p.chars.get(p.pos) == Some(&'!') && p.chars.get(p.pos + 1) == Some(&'=')) {
            return Err(p.err("expected '!=' in FILTER"));
        }
        p.pos += 2;
        let right = p.term()?;
        p.eat(')')?;
        filters.push((left, right));
        p.skip_ws();
        if p.chars.get(p.pos) == Some(&'.') {
            p.pos += 1;
        }
    }
    p.eat('}')?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input after query"));
    }
    if patterns.is_empty() {
        return Err(WalkerError::Syntax {
            pos: 1,
            message: "query has no triple patterns".into(),
        });
    }
    let query = WalkerQuery { patterns, filters };
    validate_query(&query)?;
    Ok(query)
}

fn validate_query(q: &WalkerQuery) -> Result<(), WalkerError> {
    let bound: BTreeSet<&String> = q
        .patterns
        .iter()
        .flat_map(|pat| [&pat.s, &pat.p, &pat.o])
        .filter_map(|t| match t {
            QueryTerm::Var(v) => Some(v),
            _ => None,
        })
        .collect();
    if !bound.contains(&DEST_VAR.to_string()) {
        return Err(WalkerError::MissingDest);
    }
    for (l, r) in &q.filters {
        for side in [l, r] {
            if let QueryTerm::Var(v) = side {
                if !bound.contains(v) {
                    return Err(WalkerError::UnboundFilterVar(v.clone()));
                }
            }
        }
    }
    Ok(())
}

struct QueryParser {
    chars: Vec<char>,
    pos: usize,
}

impl QueryParser {
    fn err(&self, message: impl Into<String>) -> WalkerError {
        WalkerError::Syntax {
            pos: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> Result<(), WalkerError> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn peek_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let upcoming: String = self.chars[self.pos..]
            .iter()
            .take(kw.len())
            .collect::<String>()
            .to_ascii_uppercase();
        upcoming == kw
    }

    fn keyword(&mut self, kw: &str) -> Result<(), WalkerError> {
        if self.peek_keyword(kw) {
            self.pos += kw.len();
            Ok(())
        } else {
            Err(self.err(format!("expected keyword {kw}")))
        }
    }

    fn term(&mut self) -> Result<QueryTerm, WalkerError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some('@') => {
                self.pos += 1;
                Ok(QueryTerm::At)
            }
            Some('?') => {
                self.pos += 1;
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    self.pos += 1;
                }
                if self.pos == start {
                    return Err(self.err("empty variable name"));
                }
                Ok(QueryTerm::Var(self.chars[start..self.pos].iter().collect()))
            }
            Some('<') => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| *c != '>') {
                    self.pos += 1;
                }
                if self.chars.get(self.pos) != Some(&'>') {
                    return Err(self.err("unterminated <uri>"));
                }
                let uri: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                let term = Term::uri(uri).map_err(|e| self.err(e.to_string()))?;
                Ok(QueryTerm::Ground(term))
            }
            Some('"') => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| *c != '"') {
                    self.pos += 1;
                }
                if self.chars.get(self.pos) != Some(&'"') {
                    return Err(self.err("unterminated literal"));
                }
                let lexical: String = self.chars[start..self.pos].iter().collect();
                self.pos += 1;
                if self.chars.get(self.pos) == Some(&'^') && self.chars.get(self.pos + 1) == Some(&'^')
                {
                    self.pos += 2;
                    if self.chars.get(self.pos) != Some(&'<') {
                        return Err(self.err("expected '<' after '^^'"));
                    }
                    self.pos += 1;
                    let dstart = self.pos;
                    while self.chars.get(self.pos).is_some_and(|c| *c != '>') {
                        self.pos += 1;
                    }
                    if self.chars.get(self.pos) != Some(&'>') {
                        return Err(self.err("unterminated datatype uri"));
                    }
                    let dtype: String = self.chars[dstart..self.pos].iter().collect();
                    self.pos += 1;
                    Ok(QueryTerm::Ground(Term::typed_literal(lexical, dtype)))
                } else {
                    Ok(QueryTerm::Ground(Term::literal(lexical)))
                }
            }
            // Bare compact URI, e.g. `lanl:authored`, as the queries in
            // running prose are written.
            Some(c) if c.is_alphanumeric() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .is_some_and(|c| c.is_alphanumeric() || matches!(c, ':' | '_' | '-' | '/'))
                {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                let term = Term::uri(word).map_err(|e| WalkerError::Syntax {
                    pos: start + 1,
                    message: e.to_string(),
                })?;
                Ok(QueryTerm::Ground(term))
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of query")),
        }
    }
}

/// Evaluate a query at a vertex: substitute `@`, join the patterns
/// conjunctively, apply the inequality filters, and return the distinct
/// `?dest` bindings in sorted order.
pub fn eval_walker_query(store: &TripleStore, q: &WalkerQuery, at: &Term) -> Vec<Term> {
    let mut partials: Vec<Bindings> = vec![Bindings::new()];
    for pat in &q.patterns {
        let mut next: Vec<Bindings> = Vec::new();
        for partial in &partials {
            // Instantiate already-bound variables before matching so the
            // store's indices can prune.
            let slot = |qt: &QueryTerm| -> PatternSlot {
                if let QueryTerm::Var(v) = qt {
                    if let Some(t) = partial.get(v.as_str()) {
                        return PatternSlot::Term(t.clone());
                    }
                }
                qt.to_slot(at)
            };
            let pattern = TriplePattern::new(slot(&pat.s), slot(&pat.p), slot(&pat.o));
            for found in store.match_pattern(&pattern) {
                let mut merged = partial.clone();
                merged.extend(found);
                next.push(merged);
            }
        }
        partials = next;
        if partials.is_empty() {
            return Vec::new();
        }
    }
    let mut dests: BTreeSet<Term> = BTreeSet::new();
    'candidate: for bindings in &partials {
        for (l, r) in &q.filters {
            let (lv, rv) = (
                l.resolve(at, bindings).expect("validated filter binding"),
                r.resolve(at, bindings).expect("validated filter binding"),
            );
            if lv == rv {
                continue 'candidate;
            }
        }
        if let Some(dest) = bindings.get(DEST_VAR) {
            dests.insert(dest.clone());
        }
    }
    dests.into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct GrammarNode {
    pub query: WalkerQuery,
    pub transitions: Vec<(String, f64)>,
    pub fallback: String,
}

/// A web of destination queries. Each node carries outgoing transition
/// probabilities (empty = terminal: the walker halts after moving) and a
/// mandatory fallback node taken — without moving — when the query
/// returns nothing.
#[derive(Debug, Clone)]
pub struct Grammar {
    pub start: String,
    pub nodes: BTreeMap<String, GrammarNode>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GrammarFile {
    start: String,
    nodes: BTreeMap<String, GrammarNodeFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GrammarNodeFile {
    query: String,
    #[serde(default)]
    transitions: Vec<(String, f64)>,
    fallback: String,
}

impl Grammar {
    pub fn new(start: String, nodes: BTreeMap<String, GrammarNode>) -> Result<Grammar, WalkerError> {
        let g = Grammar { start, nodes };
        g.validate()?;
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Grammar, WalkerError> {
        let file: GrammarFile =
            serde_json::from_str(text).map_err(|e| WalkerError::Json(e.to_string()))?;
        let mut nodes = BTreeMap::new();
        for (id, node) in file.nodes {
            let query = parse_walker_query(&node.query).map_err(|source| WalkerError::NodeQuery {
                node: id.clone(),
                source: Box::new(source),
            })?;
            nodes.insert(
                id,
                GrammarNode {
                    query,
                    transitions: node.transitions,
                    fallback: node.fallback,
                },
            );
        }
        Grammar::new(file.start, nodes)
    }

    fn validate(&self) -> Result<(), WalkerError> {
        if !self.nodes.contains_key(&self.start) {
            return Err(WalkerError::UnknownNode(self.start.clone()));
        }
        for (id, node) in &self.nodes {
            if !self.nodes.contains_key(&node.fallback) {
                return Err(WalkerError::UnknownNode(node.fallback.clone()));
            }
            if node.transitions.is_empty() {
                continue;
            }
            let mut sum = 0.0;
            for (target, p) in &node.transitions {
                if !self.nodes.contains_key(target) {
                    return Err(WalkerError::UnknownNode(target.clone()));
                }
                if *p < 0.0 {
                    return Err(WalkerError::NegativeProbability {
                        node: id.clone(),
                        p: *p,
                    });
                }
                sum += p;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(WalkerError::BadProbabilities {
                    node: id.clone(),
                    sum,
                });
            }
        }
        Ok(())
    }
}

/// Visitation counts per term, plus helpers for export.
pub type VisitationCounts = BTreeMap<Term, u64>;

fn walker_rng(seed: u64, walker: usize) -> ChaCha8Rng {
    // One independent stream per walker from the shared seed, so the
    // swarm is reproducible regardless of scheduling.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(walker as u64 + 1);
    rng
}

fn run_one_walker(
    store: &TripleStore,
    grammar: &Grammar,
    steps: usize,
    seed: u64,
    walker: usize,
    starts: &[Term],
) -> VisitationCounts {
    let mut rng = walker_rng(seed, walker);
    let mut vertex = starts[rng.gen_range(0..starts.len())].clone();
    let mut node_id = grammar.start.clone();
    let mut counts = VisitationCounts::new();
    for _ in 0..steps {
        let node = &grammar.nodes[&node_id];
        let dests = eval_walker_query(store, &node.query, &vertex);
        if dests.is_empty() {
            // Fallback: switch grammar node without moving. The step is
            // still spent.
            node_id = node.fallback.clone();
            continue;
        }
        vertex = dests[rng.gen_range(0..dests.len())].clone();
        *counts.entry(vertex.clone()).or_default() += 1;
        if node.transitions.is_empty() {
            break;
        }
        let weights = WeightedIndex::new(node.transitions.iter().map(|(_, p)| *p))
            .expect("validated probabilities");
        node_id = node.transitions[weights.sample(&mut rng)].0.clone();
    }
    counts
}

fn merge_counts(per_walker: Vec<VisitationCounts>) -> VisitationCounts {
    let mut total = VisitationCounts::new();
    for counts in per_walker {
        for (term, c) in counts {
            *total.entry(term).or_default() += c;
        }
    }
    total
}

/// Run a swarm of grammar-based random walkers. Start vertices come
/// from `starts` when supplied, otherwise each walker samples uniformly
/// from the store's URI universe. Fully deterministic for a given seed.
pub fn run_random_walkers(
    store: &TripleStore,
    grammar: &Grammar,
    walkers: usize,
    steps: usize,
    seed: u64,
    starts: Option<&[Term]>,
) -> Result<VisitationCounts, WalkerError> {
    if walkers == 0 {
        return Err(WalkerError::NoWalkers);
    }
    grammar.validate()?;
    let universe: Vec<Term> = match starts {
        Some(s) if !s.is_empty() => s.to_vec(),
        // Walker locations are graph positions: URIs in subject or
        // object slots (predicates are not places a walker can stand).
        _ => store
            .iter()
            .flat_map(|t| [&t.s, &t.o])
            .filter(|t| matches!(t, Term::Uri(_)))
            .cloned()
            .collect::<BTreeSet<Term>>()
            .into_iter()
            .collect(),
    };
    if universe.is_empty() {
        return Err(WalkerError::NoStartVertices);
    }
    let run = |w: usize| run_one_walker(store, grammar, steps, seed, w, &universe);
    #[cfg(feature = "parallel")]
    let per_walker: Vec<VisitationCounts> = (0..walkers).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let per_walker: Vec<VisitationCounts> = (0..walkers).map(run).collect();
    Ok(merge_counts(per_walker))
}

/// Breadth-first cloning walkers over the abstract edge defined by one
/// query: every reached term maps to its first-visit depth ≤ max_depth,
/// i.e. the semantically-rich shortest path length from `source`.
pub fn run_geodesic_walkers(
    store: &TripleStore,
    query: &WalkerQuery,
    source: &Term,
    max_depth: usize,
) -> BTreeMap<Term, usize> {
    let mut depths: BTreeMap<Term, usize> = BTreeMap::from([(source.clone(), 0)]);
    let mut frontier: VecDeque<Term> = VecDeque::from([source.clone()]);
    while let Some(vertex) = frontier.pop_front() {
        let depth = depths[&vertex];
        if depth == max_depth {
            continue;
        }
        for dest in eval_walker_query(store, query, &vertex) {
            if !depths.contains_key(&dest) {
                depths.insert(dest.clone(), depth + 1);
                frontier.push_back(dest);
            }
        }
    }
    depths
}

/// CSV export: `term,count,frequency` sorted by term.
pub fn counts_to_csv(counts: &VisitationCounts) -> String {
    let total: u64 = counts.values().sum();
    let mut out = String::from("term,count,frequency\n");
    for (term, c) in counts {
        let freq = if total == 0 {
            0.0
        } else {
            *c as f64 / total as f64
        };
        out.push_str(&format!("{},{c},{freq}\n", term.to_ntriples()));
    }
    out
}

pub fn counts_to_json(counts: &VisitationCounts) -> serde_json::Value {
    let total: u64 = counts.values().sum();
    serde_json::Value::Array(
        counts
            .iter()
            .map(|(term, c)| {
                let freq = if total == 0 {
                    0.0
                } else {
                    *c as f64 / total as f64
                };
                serde_json::json!({
                    "term": term.to_ntriples(),
                    "count": c,
                    "frequency": freq,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Triple;

    fn uri(s: &str) -> Term {
        Term::uri(s).unwrap()
    }

    fn store_of(edges: &[(&str, &str, &str)]) -> TripleStore {
        let mut store = TripleStore::new();
        for (s, p, o) in edges {
            store.insert(Triple::new(uri(s), uri(p), uri(o)).unwrap());
        }
        store
    }

    const COAUTHOR_QUERY: &str =
        "SELECT ?dest WHERE { @ <lanl:authored> ?x . ?dest <lanl:authored> ?x . FILTER(@ != ?dest) }";

    #[test]
    fn parses_coauthor_query() {
        let q = parse_walker_query(COAUTHOR_QUERY).unwrap();
        assert_eq!(q.patterns.len(), 2);
        assert_eq!(q.filters.len(), 1);
        assert_eq!(q.filters[0], (QueryTerm::At, QueryTerm::Var("dest".into())));
    }

    #[test]
    fn parses_teleport_query_with_bare_uris() {
        let q = parse_walker_query("SELECT ?dest WHERE { ?dest rdf:type lanl:Person }").unwrap();
        assert_eq!(q.patterns.len(), 1);
        assert!(q.filters.is_empty());
        assert_eq!(q.patterns[0].p, QueryTerm::Ground(uri("rdf:type")));
    }

    #[test]
    fn query_without_dest_is_rejected() {
        let err = parse_walker_query("SELECT ?dest WHERE { ?a <a:p> ?b }").unwrap_err();
        assert_eq!(err, WalkerError::MissingDest);
    }

    #[test]
    fn filter_on_unbound_variable_is_rejected() {
        let err = parse_walker_query(
            "SELECT ?dest WHERE { ?dest <a:p> ?x . FILTER(?dest != ?ghost) }",
        )
        .unwrap_err();
        assert_eq!(err, WalkerError::UnboundFilterVar("ghost".into()));
    }

    #[test]
    fn coauthor_query_finds_coauthor() {
        let store = store_of(&[
            ("lanl:marko", "lanl:authored", "lanl:article1"),
            ("lanl:johan", "lanl:authored", "lanl:article1"),
            ("lanl:alice", "lanl:authored", "lanl:article2"),
        ]);
        let q = parse_walker_query(COAUTHOR_QUERY).unwrap();
        assert_eq!(
            eval_walker_query(&store, &q, &uri("lanl:marko")),
            vec![uri("lanl:johan")]
        );
        assert!(eval_walker_query(&store, &q, &uri("lanl:alice")).is_empty());
    }

    #[test]
    fn filter_excludes_self_loop() {
        // Without the filter marko would coauthor with himself.
        let store = store_of(&[("lanl:marko", "lanl:authored", "lanl:article1")]);
        let q = parse_walker_query(COAUTHOR_QUERY).unwrap();
        assert!(eval_walker_query(&store, &q, &uri("lanl:marko")).is_empty());
    }

    fn single_node_grammar(query: &str) -> Grammar {
        Grammar::new(
            "walk".into(),
            BTreeMap::from([(
                "walk".into(),
                GrammarNode {
                    query: parse_walker_query(query).unwrap(),
                    transitions: vec![("walk".into(), 1.0)],
                    fallback: "walk".into(),
                },
            )]),
        )
        .unwrap()
    }

    #[test]
    fn grammar_json_round_trip_and_validation() {
        let json = r#"{
            "start": "walk",
            "nodes": {
                "walk": {
                    "query": "SELECT ?dest WHERE { @ <a:next> ?dest }",
                    "transitions": [["walk", 1.0]],
                    "fallback": "walk"
                }
            }
        }"#;
        let g = Grammar::from_json(json).unwrap();
        assert_eq!(g.start, "walk");
        assert_eq!(g.nodes["walk"].query.patterns.len(), 1);
    }

    #[test]
    fn grammar_with_bad_probability_sum_is_rejected() {
        let json = r#"{
            "start": "a",
            "nodes": {
                "a": {
                    "query": "SELECT ?dest WHERE { @ <a:next> ?dest }",
                    "transitions": [["a", 0.5]],
                    "fallback": "a"
                }
            }
        }"#;
        assert!(matches!(
            Grammar::from_json(json),
            Err(WalkerError::BadProbabilities { .. })
        ));
    }

    #[test]
    fn grammar_with_unknown_fallback_is_rejected() {
        let json = r#"{
            "start": "a",
            "nodes": {
                "a": {
                    "query": "SELECT ?dest WHERE { @ <a:next> ?dest }",
                    "transitions": [],
                    "fallback": "missing"
                }
            }
        }"#;
        assert!(matches!(
            Grammar::from_json(json),
            Err(WalkerError::UnknownNode(_))
        ));
    }

    #[test]
    fn cycle_walk_visits_uniformly() {
        let n = 5;
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push((
                format!("a:v{i}"),
                "a:next".to_string(),
                format!("a:v{}", (i + 1) % n),
            ));
        }
        let pairs: Vec<(&str, &str, &str)> = edges
            .iter()
            .map(|(s, p, o)| (s.as_str(), p.as_str(), o.as_str()))
            .collect();
        let store = store_of(&pairs);
        let g = single_node_grammar("SELECT ?dest WHERE { @ <a:next> ?dest }");
        let counts = run_random_walkers(&store, &g, 10, 1000, 7, None).unwrap();
        let total: u64 = counts.values().sum();
        assert_eq!(total, 10 * 1000);
        for c in counts.values() {
            let freq = *c as f64 / total as f64;
            assert!((freq - 1.0 / n as f64).abs() < 0.05, "freq {freq}");
        }
    }

    #[test]
    fn determinism_same_seed_same_counts() {
        let store = store_of(&[
            ("a:x", "a:p", "a:y"),
            ("a:y", "a:p", "a:z"),
            ("a:z", "a:p", "a:x"),
        ]);
        let g = single_node_grammar("SELECT ?dest WHERE { @ <a:p> ?dest }");
        let a = run_random_walkers(&store, &g, 8, 500, 99, None).unwrap();
        let b = run_random_walkers(&store, &g, 8, 500, 99, None).unwrap();
        assert_eq!(a, b);
        let c = run_random_walkers(&store, &g, 8, 500, 100, None).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn fallback_keeps_walker_alive() {
        // The walk query dead-ends at a:z; fallback teleports to any
        // typed vertex, so the walker keeps accumulating visits.
        let store = store_of(&[
            ("a:x", "a:p", "a:y"),
            ("a:y", "a:p", "a:z"),
            ("a:x", "rdf:type", "a:V"),
            ("a:y", "rdf:type", "a:V"),
            ("a:z", "rdf:type", "a:V"),
        ]);
        let g = Grammar::new(
            "walk".into(),
            BTreeMap::from([
                (
                    "walk".into(),
                    GrammarNode {
                        query: parse_walker_query("SELECT ?dest WHERE { @ <a:p> ?dest }").unwrap(),
                        transitions: vec![("walk".into(), 1.0)],
                        fallback: "teleport".into(),
                    },
                ),
                (
                    "teleport".into(),
                    GrammarNode {
                        query: parse_walker_query(
                            "SELECT ?dest WHERE { ?dest <rdf:type> <a:V> }",
                        )
                        .unwrap(),
                        transitions: vec![("walk".into(), 1.0)],
                        fallback: "teleport".into(),
                    },
                ),
            ]),
        )
        .unwrap();
        let steps = 400;
        let counts = run_random_walkers(&store, &g, 4, steps, 3, None).unwrap();
        let total: u64 = counts.values().sum();
        // Fallback steps don't move, so the total is below the budget,
        // but a stalled walker would contribute almost nothing.
        assert!(total > (4 * steps / 2) as u64, "total {total}");
    }

    #[test]
    fn terminal_node_halts_walker() {
        let store = store_of(&[("a:x", "a:p", "a:y"), ("a:y", "a:p", "a:x")]);
        let g = Grammar::new(
            "once".into(),
            BTreeMap::from([(
                "once".into(),
                GrammarNode {
                    query: parse_walker_query("SELECT ?dest WHERE { @ <a:p> ?dest }").unwrap(),
                    transitions: vec![],
                    fallback: "once".into(),
                },
            )]),
        )
        .unwrap();
        let counts =
            run_random_walkers(&store, &g, 1, 100, 5, Some(&[uri("a:x")])).unwrap();
        // Exactly one move, then halt.
        assert_eq!(counts.values().sum::<u64>(), 1);
    }

    #[test]
    fn geodesic_walkers_on_chain() {
        let store = store_of(&[("a:a", "a:p", "a:b"), ("a:b", "a:p", "a:c")]);
        let q = parse_walker_query("SELECT ?dest WHERE { @ <a:p> ?dest }").unwrap();
        let depths = run_geodesic_walkers(&store, &q, &uri("a:a"), 2);
        assert_eq!(
            depths,
            BTreeMap::from([(uri("a:a"), 0), (uri("a:b"), 1), (uri("a:c"), 2)])
        );
        let capped = run_geodesic_walkers(&store, &q, &uri("a:a"), 0);
        assert_eq!(capped, BTreeMap::from([(uri("a:a"), 0)]));
    }

    #[test]
    fn geodesic_walkers_take_shortest_route() {
        // Two routes a→…→d of lengths 2 and 3.
        let store = store_of(&[
            ("a:a", "a:p", "a:b"),
            ("a:b", "a:p", "a:d"),
            ("a:a", "a:p", "a:x"),
            ("a:x", "a:p", "a:y"),
            ("a:y", "a:p", "a:d"),
        ]);
        let q = parse_walker_query("SELECT ?dest WHERE { @ <a:p> ?dest }").unwrap();
        let depths = run_geodesic_walkers(&store, &q, &uri("a:a"), 10);
        assert_eq!(depths[&uri("a:d")], 2);
    }
}
