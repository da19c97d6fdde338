//! Undirected weighted graphs, Laplacian variants and structural queries.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use crate::spectral::Spectrum;

/// Which member of the Laplacian family to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaplacianVariant {
    /// `L = D - W`.
    Combinatorial,
    /// `D^{-1/2} L D^{-1/2}`.
    Normalized,
    /// Random walk matrix `P = D^{-1} W`.
    RandomWalk,
    /// `I - P`.
    Asymmetric,
}

impl LaplacianVariant {
    pub fn name(self) -> &'static str {
        match self {
            LaplacianVariant::Combinatorial => "combinatorial",
            LaplacianVariant::Normalized => "normalized",
            LaplacianVariant::RandomWalk => "random-walk",
            LaplacianVariant::Asymmetric => "asymmetric",
        }
    }

    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            LaplacianVariant::Combinatorial | LaplacianVariant::Normalized
        )
    }

    fn needs_positive_degrees(self) -> bool {
        !matches!(self, LaplacianVariant::Combinatorial)
    }
}

impl fmt::Display for LaplacianVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LaplacianVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "combinatorial" => Ok(LaplacianVariant::Combinatorial),
            "normalized" => Ok(LaplacianVariant::Normalized),
            "random-walk" => Ok(LaplacianVariant::RandomWalk),
            "asymmetric" => Ok(LaplacianVariant::Asymmetric),
            other => Err(Error::param(format!("unknown Laplacian variant '{other}'"))),
        }
    }
}

/// Undirected graph with strictly positive edge weights, stored as a
/// symmetric sparse adjacency matrix with zero diagonal. Immutable once
/// built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: CsrMatrix,
    degrees: Vec<f64>,
}

impl Graph {
    /// Builds a graph from undirected edges `(i, j, w)`. Each unordered pair
    /// may appear once; zero weights mean "no edge" and are dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::param("graph needs at least one vertex"));
        }
        let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, j, w) in edges {
            if i >= n {
                return Err(Error::VertexOutOfRange { vertex: i, n });
            }
            if j >= n {
                return Err(Error::VertexOutOfRange { vertex: j, n });
            }
            if i == j {
                return Err(Error::param(format!("self-loop at vertex {i}")));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::param(format!("edge ({i}, {j}) has invalid weight {w}")));
            }
            let key = (i.min(j), i.max(j));
            if pairs.insert(key, w).is_some() {
                return Err(Error::param(format!("duplicate edge ({}, {})", key.0, key.1)));
            }
        }
        let mut rows = vec![Vec::new(); n];
        for (&(i, j), &w) in &pairs {
            if w > 0.0 {
                rows[i].push((j, w));
                rows[j].push((i, w));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
        }
        let adjacency = CsrMatrix::from_sorted_rows(rows);
        let degrees = (0..n).map(|i| adjacency.row(i).map(|(_, w)| w).sum()).collect();
        Ok(Self { adjacency, degrees })
    }

    pub fn num_vertices(&self) -> usize {
        self.degrees.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.nnz() / 2
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency.get(i, j)
    }

    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency.row(i)
    }

    /// Every edge once, as `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_vertices()).flat_map(move |i| {
            self.adjacency
                .row(i)
                .filter(move |&(j, _)| j > i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.num_vertices() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.num_vertices(),
            });
        }
        Ok(())
    }

    /// `out = L x` for the combinatorial Laplacian, without materialising L.
    /// Summed as `sum_j w_ij (x_i - x_j)`, so constants map to exact zeros.
    pub fn laplacian_mul_into(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, w) in self.adjacency.row(i) {
                acc += w * (x[i] - x[j]);
            }
            *o = acc;
        }
    }

    /// Sparse Laplacian-family matrix.
    pub fn laplacian(&self, variant: LaplacianVariant) -> Result<CsrMatrix> {
        let n = self.num_vertices();
        if variant.needs_positive_degrees() {
            if let Some(vertex) = self.degrees.iter().position(|&d| d <= 0.0) {
                return Err(Error::DegenerateDegree {
                    vertex,
                    variant: variant.name(),
                });
            }
        }
        let inv_sqrt: Vec<f64> = self.degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row: Vec<(usize, f64)> = Vec::new();
            let diag = match variant {
                LaplacianVariant::Combinatorial => self.degrees[i],
                LaplacianVariant::Normalized | LaplacianVariant::Asymmetric => 1.0,
                LaplacianVariant::RandomWalk => 0.0,
            };
            let mut diag_pushed = false;
            for (j, w) in self.adjacency.row(i) {
                if j > i && !diag_pushed {
                    if diag != 0.0 {
                        row.push((i, diag));
                    }
                    diag_pushed = true;
                }
                let v = match variant {
                    LaplacianVariant::Combinatorial => -w,
                    LaplacianVariant::Normalized => -w * (inv_sqrt[i] * inv_sqrt[j]),
                    LaplacianVariant::RandomWalk => w / self.degrees[i],
                    LaplacianVariant::Asymmetric => -w / self.degrees[i],
                };
                row.push((j, v));
            }
            if !diag_pushed && diag != 0.0 {
                row.push((i, diag));
            }
            rows.push(row);
        }
        Ok(CsrMatrix::from_sorted_rows(rows))
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// their smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut label = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            label[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for (u, _) in self.neighbors(v) {
                    if label[u] == usize::MAX {
                        label[u] = id;
                        members.push(u);
                        queue.push_back(u);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    /// BFS 2-colouring. Returns the two colour classes when the graph is
    /// bipartite; the lowest vertex of every component gets the first class.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.num_vertices();
        let mut color: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let cv = color[v].expect("queued vertices are coloured");
                for (u, _) in self.neighbors(v) {
                    match color[u] {
                        None => {
                            color[u] = Some(!cv);
                            queue.push_back(u);
                        }
                        Some(cu) if cu == cv => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let (mut first, mut second) = (Vec::new(), Vec::new());
        for (v, c) in color.into_iter().enumerate() {
            if c == Some(false) {
                first.push(v);
            } else {
                second.push(v);
            }
        }
        Some((first, second))
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Hop distances from `source` over the unweighted skeleton;
    /// unreachable vertices get `usize::MAX`.
    pub fn hop_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_vertices()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v] + 1;
            for (u, _) in self.neighbors(v) {
                if dist[u] == usize::MAX {
                    dist[u] = next;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Vertices within `k` hops of `i`, including `i`.
    pub fn k_hop_ball(&self, i: usize, k: usize) -> Vec<usize> {
        self.hop_distances(i)
            .into_iter()
            .enumerate()
            .filter(|&(_, d)| d <= k)
            .map(|(v, _)| v)
            .collect()
    }

    /// Subgraph induced by `vertices` (sorted), relabelled `0..len`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.num_vertices()];
        for (local, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = local;
        }
        let edges = self
            .edges()
            .filter(|&(i, j, _)| index[i] != usize::MAX && index[j] != usize::MAX)
            .map(|(i, j, w)| (index[i], index[j], w));
        Graph::from_edges(vertices.len(), edges)
    }
}

/// Thresholded Gaussian kernel graph over points: `w = exp(-d^2 / (2 theta^2))`
/// when `d <= kappa`. `kappa == 0` disables the threshold so every pair is
/// connected.
pub fn build_gaussian_graph(points: &[Vec<f64>], theta: f64, kappa: f64) -> Result<Graph> {
    check_points(points)?;
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::param(format!("theta must be positive, got {theta}")));
    }
    if !(kappa >= 0.0) {
        return Err(Error::param(format!("kappa must be nonnegative, got {kappa}")));
    }
    let n = points.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = euclidean(&points[i], &points[j]);
            if kappa == 0.0 || d <= kappa {
                edges.push((i, j, gaussian_weight(d, theta)));
            }
        }
    }
    let g = Graph::from_edges(n, edges)?;
    if g.num_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(g)
}

/// Edge weighting for k-NN graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KnnWeights {
    Unit,
    Gaussian { theta: f64 },
}

/// Union-symmetrised k-nearest-neighbour graph. Distance ties are broken
/// by the lower vertex index.
pub fn build_knn_graph(points: &[Vec<f64>], k: usize, weights: KnnWeights) -> Result<Graph> {
    check_points(points)?;
    let n = points.len();
    if k == 0 || k >= n {
        return Err(Error::param(format!("k must satisfy 1 <= k < {n}, got {k}")));
    }
    if let KnnWeights::Gaussian { theta } = weights {
        if !(theta > 0.0) {
            return Err(Error::param(format!("theta must be positive, got {theta}")));
        }
    }
    let mut selected: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..n {
        let mut cand: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| (euclidean(&points[i], &points[j]), j))
            .collect();
        cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(d, j) in cand.iter().take(k) {
            let w = match weights {
                KnnWeights::Unit => 1.0,
                KnnWeights::Gaussian { theta } => gaussian_weight(d, theta),
            };
            selected.insert((i.min(j), i.max(j)), w);
        }
    }
    let g = Graph::from_edges(n, selected.into_iter().map(|((i, j), w)| (i, j, w)))?;
    if g.num_edges() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(g)
}

pub(crate) fn gaussian_weight(dist: f64, theta: f64) -> f64 {
    (-dist * dist / (2.0 * theta * theta)).exp()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn check_points(points: &[Vec<f64>]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::param("need at least two points"));
    }
    let dim = points[0].len();
    if dim == 0 {
        return Err(Error::param("points must have at least one coordinate"));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::param(format!(
                "point {i} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::param(format!("point {i} has a non-finite coordinate")));
        }
    }
    Ok(())
}

/// Vertex split produced by [`downsample_polarity`].
#[derive(Debug, Clone, PartialEq)]
pub struct PolaritySplit {
    /// Vertices where the top eigenvector is nonnegative.
    pub kept: Vec<usize>,
    pub discarded: Vec<usize>,
    /// The largest eigenvalue is repeated, so the split depends on the
    /// choice of basis in its eigenspace.
    pub repeated_max: bool,
    /// Vertices where the top eigenvector vanishes (assigned to `kept`).
    pub zero_entries: Vec<usize>,
}

/// Splits vertices by the sign of the eigenvector of the largest
/// combinatorial Laplacian eigenvalue.
pub fn downsample_polarity(g: &Graph, spectrum: &Spectrum) -> Result<PolaritySplit> {
    let n = g.num_vertices();
    if spectrum.variant() != LaplacianVariant::Combinatorial {
        return Err(Error::param("polarity downsampling needs the combinatorial spectrum"));
    }
    if spectrum.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: spectrum.len(),
        });
    }
    let lambdas = spectrum.eigenvalues();
    let top = spectrum.eigenvector(n - 1);
    let repeated_max =
        n >= 2 && (lambdas[n - 1] - lambdas[n - 2]).abs() <= 1e-8 * lambdas[n - 1].max(1.0);
    let mut split = PolaritySplit {
        kept: Vec::new(),
        discarded: Vec::new(),
        repeated_max,
        zero_entries: Vec::new(),
    };
    for (i, &x) in top.iter().enumerate() {
        if x.abs() <= 1e-12 {
            split.zero_entries.push(i);
        }
        if x >= 0.0 || x.abs() <= 1e-12 {
            split.kept.push(i);
        } else {
            split.discarded.push(i);
        }
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path2() -> Graph {
        Graph::from_edges(2, [(0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn identical_points_have_unit_weight() {
        let g = build_gaussian_graph(&[vec![0.3, 0.1], vec![0.3, 0.1]], 0.7, 0.0).unwrap();
        assert_eq!(g.weight(0, 1), 1.0);
    }

    #[test]
    fn collinear_threshold_prunes_far_pair() {
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        let g = build_gaussian_graph(&pts, 1.0, 1.5).unwrap();
        let e = (-0.5f64).exp();
        assert!((g.weight(0, 1) - 0.60653).abs() < 1e-5);
        assert_eq!(g.weight(0, 1), e);
        assert_eq!(g.weight(1, 2), e);
        assert_eq!(g.weight(0, 2), 0.0);
    }

    #[test]
    fn threshold_is_inclusive() {
        let pts = vec![vec![0.0], vec![2.0]];
        let g = build_gaussian_graph(&pts, 0.5, 2.0).unwrap();
        assert_eq!(g.weight(0, 1), (-4.0f64 / 0.5).exp());
    }

    #[test]
    fn gaussian_graph_errors() {
        let pts = vec![vec![0.0], vec![5.0]];
        assert!(matches!(build_gaussian_graph(&pts, 0.0, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(build_gaussian_graph(&pts, -1.0, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(build_gaussian_graph(&pts, 1.0, 1.0), Err(Error::EmptyGraph)));
        assert!(build_gaussian_graph(&pts[..1], 1.0, 0.0).is_err());
    }

    #[test]
    fn knn_equidistant_ties_go_to_lower_index() {
        // Vertex 1 is equidistant from 0 and 2.
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        let g = build_knn_graph(&pts, 1, KnnWeights::Unit).unwrap();
        // 0 -> 1, 1 -> 0 (tie with 2), 2 -> 1.
        let edges: Vec<_> = g.edges().map(|(i, j, _)| (i, j)).collect();
        assert_eq!(edges, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn knn_triangle_ties() {
        // Three points pairwise at squared distance 2: exact ties.
        let pts = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let g = build_knn_graph(&pts, 1, KnnWeights::Unit).unwrap();
        let edges: Vec<_> = g.edges().map(|(i, j, _)| (i, j)).collect();
        // 0 -> 1, 1 -> 0, 2 -> 0.
        assert_eq!(edges, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn knn_collinear_and_complete() {
        let pts = vec![vec![0.0], vec![1.0], vec![3.0]];
        let g = build_knn_graph(&pts, 1, KnnWeights::Unit).unwrap();
        let edges: Vec<_> = g.edges().map(|(i, j, _)| (i, j)).collect();
        assert_eq!(edges, vec![(0, 1), (1, 2)]);
        let g = build_knn_graph(&pts, 2, KnnWeights::Gaussian { theta: 1.0 }).unwrap();
        assert_eq!(g.num_edges(), 3);
        assert!(build_knn_graph(&pts, 3, KnnWeights::Unit).is_err());
        assert!(build_knn_graph(&pts, 0, KnnWeights::Unit).is_err());
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(Graph::from_edges(2, [(0, 0, 1.0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2, 1.0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1, -1.0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1, f64::NAN)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        let g = Graph::from_edges(3, [(0, 1, 0.0), (1, 2, 2.0)]).unwrap();
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn path2_laplacian() {
        let l = path2().laplacian(LaplacianVariant::Combinatorial).unwrap().to_dense();
        assert_eq!(l, nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn isolated_vertex_breaks_normalized_variants() {
        let g = Graph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert!(g.laplacian(LaplacianVariant::Combinatorial).is_ok());
        for v in [
            LaplacianVariant::Normalized,
            LaplacianVariant::RandomWalk,
            LaplacianVariant::Asymmetric,
        ] {
            assert!(matches!(
                g.laplacian(v),
                Err(Error::DegenerateDegree { vertex: 2, .. })
            ));
        }
    }

    #[test]
    fn components_and_bipartiteness() {
        let tri = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert_eq!(tri.connected_components().len(), 1);
        assert!(!tri.is_bipartite());
        let two = Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let comps = two.connected_components();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3]]);
        let c4 = Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]).unwrap();
        assert_eq!(c4.bipartition(), Some((vec![0, 2], vec![1, 3])));
    }

    #[test]
    fn hop_distances_and_balls() {
        let p = Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 0.5)]).unwrap();
        assert_eq!(p.hop_distances(0), vec![0, 1, 2, 3]);
        assert_eq!(p.k_hop_ball(1, 1), vec![0, 1, 2]);
        let two = Graph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert_eq!(two.hop_distances(0)[2], usize::MAX);
    }

    #[test]
    fn variant_parse_roundtrip() {
        for v in [
            LaplacianVariant::Combinatorial,
            LaplacianVariant::Normalized,
            LaplacianVariant::RandomWalk,
            LaplacianVariant::Asymmetric,
        ] {
            assert_eq!(v.name().parse::<LaplacianVariant>().unwrap(), v);
        }
        assert!("foo".parse::<LaplacianVariant>().is_err());
    }
}
