//! Single-relational network algorithms over sparse directed graphs
//! extracted from the triple store: geodesics (shortest paths,
//! eccentricity/radius/diameter, closeness, betweenness), random-walk
//! rankings (stationary distribution, PageRank, spreading activation),
//! and assortative mixing.
//!
//! The per-source BFS loops (geodesics, betweenness) are embarrassingly
//! parallel; with the `parallel` feature they run on rayon with a
//! deterministic reduction order, and `*_seq` variants provide the
//! sequential fallback either way.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::store::TripleStore;
use crate::term::{PatternSlot, Term, TriplePattern};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("graph is not strongly connected: no path from {from} to {to}")]
    NotStronglyConnected { from: Term, to: Term },
    #[error("graph is periodic (cycle-length gcd {period}); no unique stationary distribution")]
    Periodic { period: usize },
    #[error("vertex {0} has no outgoing edges (rank sink)")]
    RankSink(Term),
    #[error("power iteration did not converge within {max_iter} iterations")]
    NonConvergence { max_iter: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("vertex {0} is incident to an edge but has no metadata value")]
    MissingValue(Term),
    #[error("alpha must lie in (0, 1], got {0}")]
    BadAlpha(f64),
}

/// A directed graph with a term ↔ index bijection. Parallel identical
/// edges are collapsed; successor lists are sorted.
#[derive(Debug, Clone)]
pub struct Graph {
    terms: Vec<Term>,
    out: Vec<Vec<usize>>,
}

impl Graph {
    /// Build from explicit edges over anonymous vertices (used heavily in
    /// tests and benches).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let terms = (0..n)
            .map(|i| Term::uri(format!("v:{i:06}")).expect("vertex uri"))
            .collect();
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge index out of range");
            sets[u].insert(v);
        }
        Graph {
            terms,
            out: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// Build from an explicit sorted term universe plus index edges
    /// (the bridge from path-algebra matrices back into netkit).
    pub fn from_parts(terms: Vec<Term>, edges: &[(usize, usize)]) -> Graph {
        assert!(
            terms.windows(2).all(|w| w[0] < w[1]),
            "vertex terms must be sorted and distinct"
        );
        let n = terms.len();
        let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge index out of range");
            sets[u].insert(v);
        }
        Graph {
            terms,
            out: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.terms[i]
    }

    pub fn index_of(&self, t: &Term) -> Option<usize> {
        self.terms.binary_search(t).ok()
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.out[i]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, succs)| succs.iter().map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    fn reverse(&self) -> Vec<Vec<usize>> {
        let mut rev = vec![Vec::new(); self.n()];
        for (u, v) in self.edges() {
            rev[v].push(u);
        }
        rev
    }
}

/// Extract the single-relational slice for one predicate. Vertex
/// numbering is deterministic (sorted term text); literal objects become
/// vertices only when `include_literals` is set.
pub fn graph_from_store(store: &TripleStore, predicate: &Term, include_literals: bool) -> Graph {
    let triples = store.match_triples(&TriplePattern::new(
        PatternSlot::var("s"),
        predicate.clone(),
        PatternSlot::var("o"),
    ));
    let mut vertices: BTreeSet<Term> = BTreeSet::new();
    for t in &triples {
        if t.o.is_literal() && !include_literals {
            continue;
        }
        vertices.insert(t.s.clone());
        vertices.insert(t.o.clone());
    }
    let terms: Vec<Term> = vertices.into_iter().collect();
    let index: BTreeMap<&Term, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); terms.len()];
    for t in &triples {
        if t.o.is_literal() && !include_literals {
            continue;
        }
        sets[index[&t.s]].insert(index[&t.o]);
    }
    Graph {
        terms,
        out: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
    }
}

/// A per-vertex real-valued ranking.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    pub values: Vec<f64>,
}

impl RankVector {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicSummary {
    pub eccentricities: Vec<usize>,
    pub radius: usize,
    pub diameter: usize,
}

/// BFS hop distances from `src`; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices have distances");
        for &v in g.out_neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Minimum hop count from i to j; `None` when j is unreachable.
pub fn shortest_path_length(g: &Graph, i: usize, j: usize) -> Result<Option<usize>, GraphError> {
    for idx in [i, j] {
        if idx >= g.n() {
            return Err(GraphError::IndexOutOfRange(idx));
        }
    }
    Ok(bfs_distances(g, i)[j])
}

/// Error unless every ordered vertex pair is connected by a path.
pub fn ensure_strongly_connected(g: &Graph) -> Result<(), GraphError> {
    if g.n() <= 1 {
        return Ok(());
    }
    let forward = bfs_distances(g, 0);
    if let Some(bad) = forward.iter().position(Option::is_none) {
        return Err(GraphError::NotStronglyConnected {
            from: g.term(0).clone(),
            to: g.term(bad).clone(),
        });
    }
    // Reverse reachability from vertex 0 covers the remaining pairs.
    let rev = g.reverse();
    let mut seen = vec![false; g.n()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in &rev[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    if let Some(bad) = seen.iter().position(|s| !s) {
        return Err(GraphError::NotStronglyConnected {
            from: g.term(bad).clone(),
            to: g.term(0).clone(),
        });
    }
    Ok(())
}

fn eccentricity_from(g: &Graph, src: usize) -> usize {
    bfs_distances(g, src)
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0)
}

fn summarize(eccentricities: Vec<usize>) -> GeodesicSummary {
    let radius = eccentricities.iter().copied().min().unwrap_or(0);
    let diameter = eccentricities.iter().copied().max().unwrap_or(0);
    GeodesicSummary {
        eccentricities,
        radius,
        diameter,
    }
}

pub fn geodesic_summary_seq(g: &Graph) -> Result<GeodesicSummary, GraphError> {
    ensure_strongly_connected(g)?;
    Ok(summarize(
        (0..g.n()).map(|i| eccentricity_from(g, i)).collect(),
    ))
}

#[cfg(feature = "parallel")]
pub fn geodesic_summary_par(g: &Graph) -> Result<GeodesicSummary, GraphError> {
    ensure_strongly_connected(g)?;
    Ok(summarize(
        (0..g.n())
            .into_par_iter()
            .map(|i| eccentricity_from(g, i))
            .collect(),
    ))
}

/// Per-vertex eccentricities with network radius and diameter.
pub fn geodesic_summary(g: &Graph) -> Result<GeodesicSummary, GraphError> {
    #[cfg(feature = "parallel")]
    {
        geodesic_summary_par(g)
    }
    #[cfg(not(feature = "parallel"))]
    {
        geodesic_summary_seq(g)
    }
}

/// Closeness centrality: reciprocal of the summed shortest paths from
/// each vertex.
pub fn closeness(g: &Graph) -> Result<RankVector, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::Degenerate(
            "closeness needs at least two vertices".into(),
        ));
    }
    ensure_strongly_connected(g)?;
    let per_source = |i: usize| -> f64 {
        let total: usize = bfs_distances(g, i).into_iter().flatten().sum();
        1.0 / total as f64
    };
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = (0..g.n()).into_par_iter().map(per_source).collect();
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = (0..g.n()).map(per_source).collect();
    Ok(RankVector { values })
}

/// Brandes-style dependency accumulation from one source. Endpoints are
/// excluded, matching the strict i ≠ j ≠ k pair sum.
fn betweenness_from(g: &Graph, s: usize) -> Vec<f64> {
    let n = g.n();
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist: Vec<i64> = vec![-1; n];
    sigma[s] = 1.0;
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        stack.push(u);
        for &v in g.out_neighbors(u) {
            if dist[v] < 0 {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
            if dist[v] == dist[u] + 1 {
                sigma[v] += sigma[u];
                preds[v].push(u);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    let mut contribution = vec![0.0f64; n];
    while let Some(w) = stack.pop() {
        for &u in &preds[w] {
            delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w]);
        }
        if w != s {
            contribution[w] = delta[w];
        }
    }
    contribution
}

fn accumulate_betweenness(per_source: Vec<Vec<f64>>, n: usize) -> RankVector {
    let mut values = vec![0.0f64; n];
    // Fixed source-order reduction keeps floating-point sums identical
    // between sequential and parallel runs.
    for contribution in per_source {
        for (acc, c) in values.iter_mut().zip(contribution) {
            *acc += c;
        }
    }
    RankVector { values }
}

pub fn betweenness_seq(g: &Graph) -> Result<RankVector, GraphError> {
    ensure_strongly_connected(g)?;
    let per_source: Vec<Vec<f64>> = (0..g.n()).map(|s| betweenness_from(g, s)).collect();
    Ok(accumulate_betweenness(per_source, g.n()))
}

#[cfg(feature = "parallel")]
pub fn betweenness_par(g: &Graph) -> Result<RankVector, GraphError> {
    ensure_strongly_connected(g)?;
    let per_source: Vec<Vec<f64>> = (0..g.n())
        .into_par_iter()
        .map(|s| betweenness_from(g, s))
        .collect();
    Ok(accumulate_betweenness(per_source, g.n()))
}

/// Betweenness centrality over all ordered vertex pairs.
pub fn betweenness(g: &Graph) -> Result<RankVector, GraphError> {
    #[cfg(feature = "parallel")]
    {
        betweenness_par(g)
    }
    #[cfg(not(feature = "parallel"))]
    {
        betweenness_seq(g)
    }
}

/// Cycle-length gcd via BFS levels; 1 means aperiodic.
fn period(g: &Graph) -> usize {
    let dist = bfs_distances(g, 0);
    let mut gcd_acc: usize = 0;
    for (u, v) in g.edges() {
        let (du, dv) = (dist[u].expect("strongly connected"), dist[v].expect("strongly connected"));
        let diff = (du + 1).abs_diff(dv);
        gcd_acc = gcd(gcd_acc, diff);
    }
    gcd_acc
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One sparse step of the row-stochastic walk: out[j] = Σ_i x[i]/deg(i)
/// over edges (i,j). Sink rows contribute nothing (their mass is
/// returned separately).
fn stochastic_step(g: &Graph, x: &[f64]) -> (Vec<f64>, f64) {
    let mut out = vec![0.0f64; g.n()];
    let mut sink_mass = 0.0;
    for (i, succs) in g.out.iter().enumerate() {
        if succs.is_empty() {
            sink_mass += x[i];
            continue;
        }
        let share = x[i] / succs.len() as f64;
        for &j in succs {
            out[j] += share;
        }
    }
    (out, sink_mass)
}

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Stationary distribution π = πA of the uniform-out-probability walk.
/// Requires an aperiodic, strongly connected graph with no sinks.
pub fn stationary_distribution(
    g: &Graph,
    tol: f64,
    max_iter: usize,
) -> Result<RankVector, GraphError> {
    if let Some(sink) = g.out.iter().position(Vec::is_empty) {
        return Err(GraphError::RankSink(g.term(sink).clone()));
    }
    ensure_strongly_connected(g)?;
    let p = period(g);
    if p != 1 {
        return Err(GraphError::Periodic { period: p });
    }
    let n = g.n();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let (next, sink_mass) = stochastic_step(g, &pi);
        debug_assert!(sink_mass == 0.0);
        if l1_diff(&next, &pi) < tol {
            return Ok(RankVector { values: pi });
        }
        pi = next;
    }
    Err(GraphError::NonConvergence { max_iter })
}

/// PageRank by sparse power iteration. Rank-sink rows are treated as
/// uniform 1/n rows and the teleportation matrix is never materialized;
/// both enter as scalar corrections.
pub fn pagerank(
    g: &Graph,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<RankVector, GraphError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(GraphError::BadAlpha(alpha));
    }
    let n = g.n();
    if n == 0 {
        return Err(GraphError::Degenerate("empty graph".into()));
    }
    let uniform = 1.0 / n as f64;
    let mut pi = vec![uniform; n];
    for _ in 0..max_iter {
        let (stepped, sink_mass) = stochastic_step(g, &pi);
        let teleport = (1.0 - alpha) * uniform;
        let sink_patch = alpha * sink_mass * uniform;
        let next: Vec<f64> = stepped
            .into_iter()
            .map(|v| alpha * v + sink_patch + teleport)
            .collect();
        if l1_diff(&next, &pi) < tol {
            // The returned iterate is the one whose residual was checked.
            return Ok(RankVector { values: pi });
        }
        pi = next;
    }
    Err(GraphError::NonConvergence { max_iter })
}

/// Spreading activation: accumulate, then propagate decayed energy.
/// Energy leaks at rank sinks and the result is deliberately left
/// unnormalized.
pub fn spreading_activation(
    g: &Graph,
    seeds: &BTreeMap<usize, f64>,
    steps: usize,
    delta: f64,
) -> Result<RankVector, GraphError> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(GraphError::Degenerate(format!(
            "delta must lie in [0,1], got {delta}"
        )));
    }
    let n = g.n();
    let mut energy = vec![0.0f64; n];
    for (&v, &e) in seeds {
        if v >= n {
            return Err(GraphError::IndexOutOfRange(v));
        }
        if e < 0.0 {
            return Err(GraphError::Degenerate(format!(
                "seed energy must be non-negative, got {e}"
            )));
        }
        energy[v] += e;
    }
    let mut accumulated = vec![0.0f64; n];
    for _ in 0..steps {
        for (acc, e) in accumulated.iter_mut().zip(&energy) {
            *acc += e;
        }
        let decayed: Vec<f64> = energy.iter().map(|e| delta * e).collect();
        let (next, _leak) = stochastic_step(g, &decayed);
        energy = next;
    }
    Ok(RankVector {
        values: accumulated,
    })
}

fn edge_value_vectors<'a, T: Clone>(
    g: &Graph,
    values: &'a BTreeMap<usize, T>,
) -> Result<(Vec<T>, Vec<T>), GraphError> {
    let mut tails = Vec::with_capacity(g.edge_count());
    let mut heads = Vec::with_capacity(g.edge_count());
    for (u, v) in g.edges() {
        let tu = values
            .get(&u)
            .ok_or_else(|| GraphError::MissingValue(g.term(u).clone()))?;
        let hv = values
            .get(&v)
            .ok_or_else(|| GraphError::MissingValue(g.term(v).clone()))?;
        tails.push(tu.clone());
        heads.push(hv.clone());
    }
    Ok((tails, heads))
}

/// Pearson correlation of scalar metadata across edge endpoints.
pub fn assortativity_scalar(
    g: &Graph,
    values: &BTreeMap<usize, f64>,
) -> Result<f64, GraphError> {
    let m = g.edge_count();
    if m < 2 {
        return Err(GraphError::Degenerate(
            "scalar assortativity needs at least two edges".into(),
        ));
    }
    let (tails, heads) = edge_value_vectors(g, values)?;
    let m = m as f64;
    let sum_j: f64 = tails.iter().sum();
    let sum_k: f64 = heads.iter().sum();
    let sum_jk: f64 = tails.iter().zip(&heads).map(|(j, k)| j * k).sum();
    let sum_j2: f64 = tails.iter().map(|j| j * j).sum();
    let sum_k2: f64 = heads.iter().map(|k| k * k).sum();
    let var_j = m * sum_j2 - sum_j * sum_j;
    let var_k = m * sum_k2 - sum_k * sum_k;
    if var_j <= 0.0 || var_k <= 0.0 {
        return Err(GraphError::Degenerate(
            "endpoint values have zero variance".into(),
        ));
    }
    Ok((m * sum_jk - sum_j * sum_k) / (var_j * var_k).sqrt())
}

/// Nominal assortativity from edge-fraction tallies.
pub fn assortativity_nominal(
    g: &Graph,
    labels: &BTreeMap<usize, String>,
) -> Result<f64, GraphError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(GraphError::Degenerate(
            "nominal assortativity needs at least one edge".into(),
        ));
    }
    let (tails, heads) = edge_value_vectors(g, labels)?;
    let m = m as f64;
    let mut e_pp: BTreeMap<&String, f64> = BTreeMap::new();
    let mut a_p: BTreeMap<&String, f64> = BTreeMap::new();
    let mut b_p: BTreeMap<&String, f64> = BTreeMap::new();
    for (t, h) in tails.iter().zip(&heads) {
        if t == h {
            *e_pp.entry(t).or_default() += 1.0 / m;
        }
        *a_p.entry(t).or_default() += 1.0 / m;
        *b_p.entry(h).or_default() += 1.0 / m;
    }
    let trace: f64 = e_pp.values().sum();
    let expected: f64 = a_p
        .iter()
        .map(|(p, a)| a * b_p.get(*p).copied().unwrap_or(0.0))
        .sum();
    if (1.0 - expected).abs() < 1e-12 {
        return Err(GraphError::Degenerate(
            "all edges carry a single label".into(),
        ));
    }
    Ok((trace - expected) / (1.0 - expected))
}

/// CSV export: `term,value` per vertex.
pub fn rank_to_csv(g: &Graph, rank: &RankVector) -> String {
    let mut out = String::from("term,value\n");
    for (i, v) in rank.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", g.term(i).to_ntriples(), v));
    }
    out
}

pub fn rank_to_json(g: &Graph, rank: &RankVector) -> serde_json::Value {
    serde_json::Value::Array(
        rank.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                serde_json::json!({
                    "term": g.term(i).to_ntriples(),
                    "value": v,
                })
            })
            .collect(),
    )
}

pub fn geodesic_to_json(g: &Graph, summary: &GeodesicSummary) -> serde_json::Value {
    serde_json::json!({
        "radius": summary.radius,
        "diameter": summary.diameter,
        "eccentricities": summary
            .eccentricities
            .iter()
            .enumerate()
            .map(|(i, e)| serde_json::json!({"term": g.term(i).to_ntriples(), "eccentricity": e}))
            .collect::<Vec<_>>(),
    })
}

pub fn geodesic_to_csv(g: &Graph, summary: &GeodesicSummary) -> String {
    let mut out = String::from("term,eccentricity\n");
    for (i, e) in summary.eccentricities.iter().enumerate() {
        out.push_str(&format!("{},{}\n", g.term(i).to_ntriples(), e));
    }
    out
}
