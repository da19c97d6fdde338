#![allow(dead_code)]

use graphsig::Graph;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_signal(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Connected weighted graph: a random spanning tree plus extra edges
/// kept with probability `p`.
pub fn connected_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = std::collections::BTreeMap::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.insert((u, v), rng.random_range(0.1..2.0));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                edges.entry((i, j)).or_insert_with(|| rng.random_range(0.1..2.0));
            }
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|((i, j), w)| (i, j, w))).unwrap()
}

/// Possibly disconnected weighted graph.
pub fn sparse_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random_bool(p) {
                edges.push((i, j, rng.random_range(0.1..2.0)));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Connected bipartite graph between two random halves.
pub fn bipartite_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let side: Vec<bool> = (0..n).map(|i| i % 2 == 0).collect();
    let mut edges = std::collections::BTreeMap::new();
    for v in 1..n {
        let candidates: Vec<usize> = (0..v).filter(|&u| side[u] != side[v]).collect();
        let u = candidates[rng.random_range(0..candidates.len())];
        edges.insert((u.min(v), u.max(v)), rng.random_range(0.1..2.0));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if side[i] != side[j] && rng.random_bool(p) {
                edges.entry((i, j)).or_insert_with(|| rng.random_range(0.1..2.0));
            }
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|((i, j), w)| (i, j, w))).unwrap()
}

/// Connected graph with at least one odd cycle.
pub fn odd_cycle_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    loop {
        let g = connected_graph(rng, n, p);
        if !g.is_bipartite() {
            return g;
        }
    }
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
}

/// Dense combinatorial Laplacian built from the edge list.
pub fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.num_vertices();
    let mut l = DMatrix::zeros(n, n);
    for (i, j, w) in g.edges() {
        l[(i, j)] -= w;
        l[(j, i)] -= w;
        l[(i, i)] += w;
        l[(j, j)] += w;
    }
    l
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}
