//! Seeded random graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

const MAX_PAIRING_ATTEMPTS: usize = 100_000;

/// Uniform simple `d`-regular graph on `n` vertices by the pairing
/// (configuration) model, rejecting pairings with loops or multi-edges.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_regular_graph_with(n, d, &mut rng)
}

pub(crate) fn random_regular_graph_with<R: Rng>(n: usize, d: usize, rng: &mut R) -> Result<Graph> {
    if d == 0 || d >= n {
        return Err(Error::param(format!("degree must satisfy 1 <= d < n, got d={d}, n={n}")));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::param(format!("n * d must be even, got {n} * {d}")));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        stubs.shuffle(rng);
        let mut seen = HashSet::with_capacity(n * d / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
        }
        let mut edges: Vec<(usize, usize)> = seen.into_iter().collect();
        edges.sort_unstable();
        return Graph::from_edges(n, edges.into_iter().map(|(a, b)| (a, b, 1.0)));
    }
    Err(Error::Numeric(format!(
        "pairing model found no simple {d}-regular graph on {n} vertices in {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

/// Unit-weight random geometric graph on `n` uniform points in the unit
/// square, linking pairs closer than `radius`. Returns the graph and the
/// points.
pub fn random_geometric_graph(n: usize, radius: f64, seed: u64) -> Result<(Graph, Vec<[f64; 2]>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_geometric_graph_with(n, radius, &mut rng)
}

pub(crate) fn random_geometric_graph_with<R: Rng>(
    n: usize,
    radius: f64,
    rng: &mut R,
) -> Result<(Graph, Vec<[f64; 2]>)> {
    if n < 2 || !(radius > 0.0) {
        return Err(Error::param("need n >= 2 and a positive radius"));
    }
    let points: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = points[i][0] - points[j][0];
            let dy = points[i][1] - points[j][1];
            if (dx * dx + dy * dy).sqrt() < radius {
                edges.push((i, j, 1.0));
            }
        }
    }
    Ok((Graph::from_edges(n, edges)?, points))
}
