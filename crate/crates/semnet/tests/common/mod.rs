// Each integration target compiles its own copy of this module and uses a
// different subset of the oracles.
#![allow(dead_code)]

//! Shared generators and independent oracles for the integration suites.
//! Every oracle here deliberately recomputes its result from first
//! principles (dense matrices, exhaustive enumeration) rather than
//! calling back into the algorithms under test.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semnet::netkit::Graph;
use semnet::term::{Term, Triple};
use semnet::TripleStore;

pub fn uri(s: &str) -> Term {
    Term::uri(s).unwrap()
}

pub fn triple(s: &str, p: &str, o: &str) -> Triple {
    Triple::new(uri(s), uri(p), uri(o)).unwrap()
}

pub fn store_of(triples: &[(&str, &str, &str)]) -> TripleStore {
    triples.iter().map(|(s, p, o)| triple(s, p, o)).collect()
}

/// Random digraph with independent edge probability; may be
/// disconnected and may contain self-loops.
pub fn random_graph(n: usize, p_edge: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(p_edge) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Strongly connected by construction: Hamiltonian cycle plus random
/// chords.
pub fn random_strongly_connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for _ in 0..extra {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    Graph::from_edges(n, &edges)
}

/// All-pairs shortest paths by Floyd–Warshall (independent of the BFS
/// implementation under test).
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for &j in g.out_neighbors(i) {
            if i != j {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(dik) = d[i][k] else { continue };
            for j in 0..n {
                let Some(dkj) = d[k][j] else { continue };
                let via = dik + dkj;
                if d[i][j].map_or(true, |cur| via < cur) {
                    d[i][j] = Some(via);
                }
            }
        }
    }
    d
}

/// Betweenness by exhaustive enumeration of every shortest path.
pub fn betweenness_oracle(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let dist = floyd_warshall(g);
    let mut score = vec![0.0f64; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || dist[s][t].is_none() {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let u = *path.last().unwrap();
                if u == t {
                    paths.push(path);
                    continue;
                }
                let remaining = dist[s][t].unwrap() - (path.len() - 1);
                for &v in g.out_neighbors(u) {
                    if dist[v][t] == Some(remaining - 1) {
                        let mut next = path.clone();
                        next.push(v);
                        stack.push(next);
                    }
                }
            }
            let total = paths.len() as f64;
            let mut through = vec![0usize; n];
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    through[v] += 1;
                }
            }
            for v in 0..n {
                if through[v] > 0 {
                    score[v] += through[v] as f64 / total;
                }
            }
        }
    }
    score
}

/// Dense row-stochastic walk matrix with rank-sink rows replaced by the
/// uniform row.
fn dense_walk_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        let succs = g.out_neighbors(i);
        if succs.is_empty() {
            for j in 0..n {
                a[i][j] = 1.0 / n as f64;
            }
        } else {
            for &j in succs {
                a[i][j] += 1.0 / succs.len() as f64;
            }
        }
    }
    a
}

/// PageRank by dense power iteration on the fully materialized
/// C = αA + (1−α)B matrix.
pub fn pagerank_dense_oracle(g: &Graph, alpha: f64, tol: f64, max_iter: usize) -> Vec<f64> {
    let n = g.n();
    let a = dense_walk_matrix(g);
    let teleport = (1.0 - alpha) / n as f64;
    let c: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| alpha * a[i][j] + teleport).collect())
        .collect();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..max_iter {
        let next: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| pi[i] * c[i][j]).sum())
            .collect();
        let diff: f64 = next.iter().zip(&pi).map(|(x, y)| (x - y).abs()).sum();
        if diff < tol {
            return pi;
        }
        pi = next;
    }
    pi
}

/// L1 residual ‖πC − π‖₁ against the dense matrix.
pub fn pagerank_residual(g: &Graph, alpha: f64, pi: &[f64]) -> f64 {
    let n = g.n();
    let a = dense_walk_matrix(g);
    let teleport = (1.0 - alpha) / n as f64;
    (0..n)
        .map(|j| {
            let pushed: f64 = (0..n)
                .map(|i| pi[i] * (alpha * a[i][j] + teleport))
                .sum();
            (pushed - pi[j]).abs()
        })
        .sum()
}

/// ‖πA − π‖₁ for the plain (no-teleport) walk matrix; rows of sinks are
/// zero here, matching stationary_distribution's precondition that no
/// sinks exist.
pub fn stationary_residual(g: &Graph, pi: &[f64]) -> f64 {
    let n = g.n();
    let mut pushed = vec![0.0f64; n];
    for i in 0..n {
        let succs = g.out_neighbors(i);
        for &j in succs {
            pushed[j] += pi[i] / succs.len() as f64;
        }
    }
    pushed.iter().zip(pi).map(|(x, y)| (x - y).abs()).sum()
}

/// Spreading activation recomputed with a dense matrix product.
pub fn spreading_dense_oracle(
    g: &Graph,
    seeds: &BTreeMap<usize, f64>,
    steps: usize,
    delta: f64,
) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        let succs = g.out_neighbors(i);
        for &j in succs {
            a[i][j] += 1.0 / succs.len() as f64;
        }
    }
    let mut x = vec![0.0f64; n];
    for (&v, &e) in seeds {
        x[v] += e;
    }
    let mut pi = vec![0.0f64; n];
    for _ in 0..steps {
        for (p, xv) in pi.iter_mut().zip(&x) {
            *p += xv;
        }
        let next: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| delta * x[i] * a[i][j]).sum())
            .collect();
        x = next;
    }
    pi
}

/// Nominal assortativity recomputed from integer edge tallies.
pub fn nominal_assort_oracle(edges: &[(usize, usize)], labels: &[String]) -> f64 {
    let m = edges.len() as f64;
    let mut diag: BTreeMap<&String, usize> = BTreeMap::new();
    let mut tails: BTreeMap<&String, usize> = BTreeMap::new();
    let mut heads: BTreeMap<&String, usize> = BTreeMap::new();
    for &(u, v) in edges {
        let (lu, lv) = (&labels[u], &labels[v]);
        if lu == lv {
            *diag.entry(lu).or_default() += 1;
        }
        *tails.entry(lu).or_default() += 1;
        *heads.entry(lv).or_default() += 1;
    }
    let trace: f64 = diag.values().map(|&c| c as f64 / m).sum();
    let expected: f64 = tails
        .iter()
        .map(|(l, &a)| {
            let b = heads.get(*l).copied().unwrap_or(0);
            (a as f64 / m) * (b as f64 / m)
        })
        .sum();
    (trace - expected) / (1.0 - expected)
}
