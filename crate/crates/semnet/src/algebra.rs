//! Multi-relational path algebra: a tensor of {0,1} adjacency slices
//! (one per predicate), a sparse real-valued matrix type, and a small
//! expression language — `slice('uri')`, transpose `t(e)`, product `*`,
//! Hadamard `&`, `ones`, `id`, and boolean complement `not(e)` — whose
//! evaluation composes traverse and filter operations. Products yield
//! path counts, so results are real-valued rather than clipped to {0,1}.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::netkit::Graph;
use crate::store::TripleStore;
use crate::term::{PatternSlot, Term, TriplePattern};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("column {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("column {pos}: not() applied to a non-boolean subexpression")]
    NotOnWeighted { pos: usize },
    #[error("no slice for predicate {0}")]
    MissingSlice(Term),
}

/// Sparse n×n real matrix stored as per-row maps. Products switch to a
/// dense scratch representation below [`DENSE_THRESHOLD`] vertices,
/// where the constant factors of sparse lookups dominate.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMatrix {
    n: usize,
    rows: Vec<BTreeMap<usize, f64>>,
}

const DENSE_THRESHOLD: usize = 64;

impl WeightedMatrix {
    pub fn zeros(n: usize) -> WeightedMatrix {
        WeightedMatrix {
            n,
            rows: vec![BTreeMap::new(); n],
        }
    }

    pub fn identity(n: usize) -> WeightedMatrix {
        let mut m = WeightedMatrix::zeros(n);
        for i in 0..n {
            m.rows[i].insert(i, 1.0);
        }
        m
    }

    pub fn ones(n: usize) -> WeightedMatrix {
        let mut m = WeightedMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.rows[i].insert(j, 1.0);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].get(&j).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(value.is_finite(), "matrix entries must be finite");
        if value == 0.0 {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, value);
        }
    }

    /// Non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(&j, &v)| (i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn transpose(&self) -> WeightedMatrix {
        let mut out = WeightedMatrix::zeros(self.n);
        for (i, j, v) in self.entries() {
            out.rows[j].insert(i, v);
        }
        out
    }

    pub fn multiply(&self, rhs: &WeightedMatrix) -> WeightedMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        if self.n < DENSE_THRESHOLD {
            return self.multiply_dense(rhs);
        }
        let mut out = WeightedMatrix::zeros(self.n);
        for i in 0..self.n {
            let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
            for (&k, &a) in &self.rows[i] {
                for (&j, &b) in &rhs.rows[k] {
                    *acc.entry(j).or_default() += a * b;
                }
            }
            acc.retain(|_, v| *v != 0.0);
            out.rows[i] = acc;
        }
        out
    }

    fn multiply_dense(&self, rhs: &WeightedMatrix) -> WeightedMatrix {
        let n = self.n;
        let mut dense = vec![0.0f64; n * n];
        for (k, row) in rhs.rows.iter().enumerate() {
            for (&j, &b) in row {
                dense[k * n + j] = b;
            }
        }
        let mut out = WeightedMatrix::zeros(n);
        let mut scratch = vec![0.0f64; n];
        for i in 0..n {
            scratch.iter_mut().for_each(|v| *v = 0.0);
            for (&k, &a) in &self.rows[i] {
                let row = &dense[k * n..(k + 1) * n];
                for (s, &b) in scratch.iter_mut().zip(row) {
                    *s += a * b;
                }
            }
            for (j, &v) in scratch.iter().enumerate() {
                if v != 0.0 {
                    out.rows[i].insert(j, v);
                }
            }
        }
        out
    }

    pub fn hadamard(&self, rhs: &WeightedMatrix) -> WeightedMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = WeightedMatrix::zeros(self.n);
        for (i, j, v) in self.entries() {
            let w = rhs.get(i, j);
            if w != 0.0 {
                out.rows[i].insert(j, v * w);
            }
        }
        out
    }

    /// 1 − X for a {0,1}-valued matrix.
    fn complement(&self) -> WeightedMatrix {
        let mut out = WeightedMatrix::ones(self.n);
        for (i, j, v) in self.entries() {
            debug_assert!(v == 1.0, "complement requires a boolean matrix");
            out.rows[i].remove(&j);
        }
        out
    }
}

/// Shared-universe collection of {0,1} adjacency slices, one per
/// predicate. Vertex numbering is the sorted order of the term universe.
#[derive(Debug, Clone)]
pub struct RelationTensor {
    terms: Vec<Term>,
    slices: BTreeMap<Term, WeightedMatrix>,
}

impl RelationTensor {
    pub fn n(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.terms.binary_search(t).ok()
    }

    pub fn predicates(&self) -> impl Iterator<Item = &Term> {
        self.slices.keys()
    }

    pub fn slice(&self, predicate: &Term) -> Option<&WeightedMatrix> {
        self.slices.get(predicate)
    }
}

/// Extract a relation tensor for the given predicates. All slices share
/// one vertex numbering over every non-literal subject/object of the
/// matching triples (literal vertices includable by flag).
pub fn tensor_from_store(
    store: &TripleStore,
    predicates: &[Term],
    include_literals: bool,
) -> RelationTensor {
    let mut universe: BTreeSet<Term> = BTreeSet::new();
    let mut edges: BTreeMap<Term, Vec<(Term, Term)>> = BTreeMap::new();
    for p in predicates {
        let triples = store.match_triples(&TriplePattern::new(
            PatternSlot::var("s"),
            p.clone(),
            PatternSlot::var("o"),
        ));
        let slot = edges.entry(p.clone()).or_default();
        for t in triples {
            if t.o.is_literal() && !include_literals {
                continue;
            }
            universe.insert(t.s.clone());
            universe.insert(t.o.clone());
            slot.push((t.s, t.o));
        }
    }
    let terms: Vec<Term> = universe.into_iter().collect();
    let index: BTreeMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let n = terms.len();
    let slices = edges
        .into_iter()
        .map(|(p, pairs)| {
            let mut m = WeightedMatrix::zeros(n);
            for (s, o) in pairs {
                m.set(index[&s], index[&o], 1.0);
            }
            (p, m)
        })
        .collect();
    RelationTensor { terms, slices }
}

/// Expression tree over tensor slices. Leaves and structure mirror the
/// concrete syntax one-for-one; no rewriting is performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathExpr {
    Slice(Term),
    Transpose(Box<PathExpr>),
    Product(Box<PathExpr>, Box<PathExpr>),
    Hadamard(Box<PathExpr>, Box<PathExpr>),
    Not(Box<PathExpr>),
    Ones,
    Id,
}

impl PathExpr {
    /// Whether every entry of the evaluated matrix is guaranteed to be
    /// 0 or 1. Products count paths and so are not boolean.
    fn is_boolean(&self) -> bool {
        match self {
            PathExpr::Slice(_) | PathExpr::Ones | PathExpr::Id => true,
            PathExpr::Transpose(e) | PathExpr::Not(e) => e.is_boolean(),
            PathExpr::Hadamard(a, b) => a.is_boolean() && b.is_boolean(),
            PathExpr::Product(_, _) => false,
        }
    }
}

/// Recursive-descent parser for the path-expression syntax. `*` binds
/// tighter than `&`; both are left-associative.
pub fn parse_path_expr(text: &str) -> Result<PathExpr, AlgebraError> {
    let mut p = ExprParser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let expr = p.hadamard_expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input after expression"));
    }
    Ok(expr)
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn err(&self, message: impl Into<String>) -> AlgebraError {
        AlgebraError::Syntax {
            pos: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> Result<(), AlgebraError> {
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn hadamard_expr(&mut self) -> Result<PathExpr, AlgebraError> {
        let mut left = self.product_expr()?;
        loop {
            self.skip_ws();
            if self.chars.get(self.pos) == Some(&'&') {
                self.pos += 1;
                let right = self.product_expr()?;
                left = PathExpr::Hadamard(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn product_expr(&mut self) -> Result<PathExpr, AlgebraError> {
        let mut left = self.atom()?;
        loop {
            self.skip_ws();
            if self.chars.get(self.pos) == Some(&'*') {
                self.pos += 1;
                let right = self.atom()?;
                left = PathExpr::Product(Box::new(left), Box::new(right));
            } else {
                return Ok(left);
            }
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn atom(&mut self) -> Result<PathExpr, AlgebraError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some('(') => {
                self.pos += 1;
                let inner = self.hadamard_expr()?;
                self.eat(')')?;
                Ok(inner)
            }
            Some(c) if c.is_alphabetic() => {
                let word_start = self.pos;
                let word = self.word();
                match word.as_str() {
                    "ones" => Ok(PathExpr::Ones),
                    "id" => Ok(PathExpr::Id),
                    "slice" => {
                        self.eat('(')?;
                        self.skip_ws();
                        self.eat('\'')?;
                        let start = self.pos;
                        while self.chars.get(self.pos).is_some_and(|c| *c != '\'') {
                            self.pos += 1;
                        }
                        if self.chars.get(self.pos) != Some(&'\'') {
                            return Err(self.err("unterminated slice uri"));
                        }
                        let uri: String = self.chars[start..self.pos].iter().collect();
                        self.pos += 1;
                        self.eat(')')?;
                        let term = Term::uri(uri).map_err(|e| AlgebraError::Syntax {
                            pos: start + 1,
                            message: e.to_string(),
                        })?;
                        Ok(PathExpr::Slice(term))
                    }
                    "t" => {
                        self.eat('(')?;
                        let inner = self.hadamard_expr()?;
                        self.eat(')')?;
                        Ok(PathExpr::Transpose(Box::new(inner)))
                    }
                    "not" => {
                        self.eat('(')?;
                        let inner = self.hadamard_expr()?;
                        self.eat(')')?;
                        if !inner.is_boolean() {
                            return Err(AlgebraError::NotOnWeighted { pos: word_start + 1 });
                        }
                        Ok(PathExpr::Not(Box::new(inner)))
                    }
                    other => Err(AlgebraError::Syntax {
                        pos: word_start + 1,
                        message: format!("unknown keyword {other:?}"),
                    }),
                }
            }
            Some(c) => Err(self.err(format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }
}

/// Evaluate an expression against a tensor.
pub fn eval_path_expr(
    expr: &PathExpr,
    tensor: &RelationTensor,
) -> Result<WeightedMatrix, AlgebraError> {
    let n = tensor.n();
    match expr {
        PathExpr::Slice(p) => tensor
            .slice(p)
            .cloned()
            .ok_or_else(|| AlgebraError::MissingSlice(p.clone())),
        PathExpr::Transpose(e) => Ok(eval_path_expr(e, tensor)?.transpose()),
        PathExpr::Product(a, b) => {
            Ok(eval_path_expr(a, tensor)?.multiply(&eval_path_expr(b, tensor)?))
        }
        PathExpr::Hadamard(a, b) => {
            Ok(eval_path_expr(a, tensor)?.hadamard(&eval_path_expr(b, tensor)?))
        }
        PathExpr::Not(e) => Ok(eval_path_expr(e, tensor)?.complement()),
        PathExpr::Ones => Ok(WeightedMatrix::ones(n)),
        PathExpr::Id => Ok(WeightedMatrix::identity(n)),
    }
}

/// Reinterpret the non-zero support of a matrix as a netkit graph over
/// the tensor's vertex terms.
pub fn graph_from_matrix(tensor: &RelationTensor, m: &WeightedMatrix) -> Graph {
    assert_eq!(tensor.n(), m.n(), "dimension mismatch");
    let edges: Vec<(usize, usize)> = m.entries().map(|(i, j, _)| (i, j)).collect();
    Graph::from_parts(tensor.terms.clone(), &edges)
}

/// Coordinate-list CSV export: `row,col,value` per non-zero entry.
pub fn matrix_to_csv(tensor: &RelationTensor, m: &WeightedMatrix) -> String {
    let mut out = String::from("row,col,value\n");
    for (i, j, v) in m.entries() {
        out.push_str(&format!(
            "{},{},{}\n",
            tensor.term(i).to_ntriples(),
            tensor.term(j).to_ntriples(),
            v
        ));
    }
    out
}

pub fn matrix_to_json(tensor: &RelationTensor, m: &WeightedMatrix) -> serde_json::Value {
    serde_json::Value::Array(
        m.entries()
            .map(|(i, j, v)| {
                serde_json::json!({
                    "row": tensor.term(i).to_ntriples(),
                    "col": tensor.term(j).to_ntriples(),
                    "value": v,
                })
            })
            .collect(),
    )
}

/// The canonical coauthorship expression: (A·Aᵀ) ∘ not(id).
pub const COAUTHORSHIP_EXPR_TEMPLATE: &str = "(slice('P') * t(slice('P'))) & not(id)";

pub fn coauthorship_expr(authored: &Term) -> PathExpr {
    let authored_slice = Box::new(PathExpr::Slice(authored.clone()));
    PathExpr::Hadamard(
        Box::new(PathExpr::Product(
            authored_slice.clone(),
            Box::new(PathExpr::Transpose(authored_slice)),
        )),
        Box::new(PathExpr::Not(Box::new(PathExpr::Id))),
    )
}
