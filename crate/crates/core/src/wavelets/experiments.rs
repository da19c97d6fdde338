//! Spread comparison on random regular graphs and the discontinuity
//! experiment on a random geometric graph.

use std::collections::VecDeque;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::graph::{Graph, LaplacianVariant};
use crate::io::format_g;
use crate::spectral::Spectrum;

use super::ckwt::{ckwt_atoms, MotherWavelet};
use super::random::{random_geometric_graph_with, random_regular_graph_with};
use super::sgwt::{sgwt_atoms, SgwtConfig};
use super::spread::{average_spreads_with, SpectralSpreadMode, SpreadPoint, SpreadReport};
use super::AtomKind;

const MAX_GRAPH_DRAWS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadBenchConfig {
    pub n: usize,
    pub d: usize,
    pub instances: usize,
    pub seed: u64,
    pub ckwt_scales: Vec<usize>,
    pub sgwt_scale_count: usize,
    pub mother: MotherWavelet,
    pub spectral_mode: SpectralSpreadMode,
}

impl Default for SpreadBenchConfig {
    fn default() -> Self {
        Self {
            n: 300,
            d: 5,
            instances: 5,
            seed: 7,
            ckwt_scales: (1..=10).collect(),
            sgwt_scale_count: 5,
            mother: MotherWavelet::MexicanHat,
            spectral_mode: SpectralSpreadMode::OptimalMean,
        }
    }
}

/// Average spatial/spectral spreads of CKWT and SGWT atoms at each scale,
/// averaged again over `instances` connected random `d`-regular graphs.
/// Spectra use the combinatorial Laplacian.
pub fn spread_bench(cfg: &SpreadBenchConfig) -> Result<SpreadReport> {
    if cfg.instances == 0 {
        return Err(Error::param("need at least one instance"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sums: Vec<(String, String, f64, f64)> = Vec::new();
    for _ in 0..cfg.instances {
        let g = draw_connected(&mut rng, |r| random_regular_graph_with(cfg.n, cfg.d, r))?;
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial)?;
        let mut points = Vec::new();
        for &k in &cfg.ckwt_scales {
            let atoms = ckwt_atoms(&g, k, cfg.mother)?;
            let (sp, sc) = average_spreads_with(&g, &s, &atoms, cfg.spectral_mode)?;
            points.push((atoms.kind(), sp, sc));
        }
        let sgwt = SgwtConfig::with_defaults(s.lambda_max(), cfg.sgwt_scale_count)?;
        for atoms in sgwt_atoms(&s, &sgwt)? {
            let (sp, sc) = average_spreads_with(&g, &s, &atoms, cfg.spectral_mode)?;
            // SGWT scale values differ per instance; label by position.
            points.push((atoms.kind(), sp, sc));
        }
        if sums.is_empty() {
            sums = points
                .iter()
                .map(|(kind, _, _)| (kind.transform().to_string(), bench_label(kind, &sgwt), 0.0, 0.0))
                .collect();
        }
        for (acc, (_, sp, sc)) in sums.iter_mut().zip(points) {
            acc.2 += sp;
            acc.3 += sc;
        }
    }
    let k = cfg.instances as f64;
    Ok(SpreadReport {
        variant: LaplacianVariant::Combinatorial,
        points: sums
            .into_iter()
            .map(|(transform, scale, sp, sc)| SpreadPoint {
                transform,
                scale,
                spatial: sp / k,
                spectral: sc / k,
            })
            .collect(),
    })
}

fn bench_label(kind: &AtomKind, sgwt: &SgwtConfig) -> String {
    match kind {
        AtomKind::Sgwt { scale } => {
            let pos = sgwt.scales.iter().position(|t| t == scale).unwrap_or(0);
            format!("t{}", pos + 1)
        }
        other => other.scale_label(),
    }
}

fn draw_connected<R: Rng>(rng: &mut R, mut draw: impl FnMut(&mut R) -> Result<Graph>) -> Result<Graph> {
    for _ in 0..MAX_GRAPH_DRAWS {
        let g = draw(rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Numeric(format!(
        "no connected graph in {MAX_GRAPH_DRAWS} draws"
    )))
}

/// Random geometric graph with a planted cut along `x = 1/2`.
#[derive(Debug, Clone)]
pub struct PlantedCut {
    pub graph: Graph,
    pub points: Vec<[f64; 2]>,
    /// `true` for vertices with `x >= 1/2`.
    pub side: Vec<bool>,
    /// Unit step across the cut plus a gentle vertical ramp.
    pub signal: Vec<f64>,
}

/// Connected random geometric graph on `n` points with a piecewise-smooth
/// signal jumping by 1 across `x = 1/2`.
pub fn planted_cut_instance(n: usize, radius: f64, seed: u64) -> Result<PlantedCut> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let graph = draw_connected(&mut rng, |r| {
        let (g, p) = random_geometric_graph_with(n, radius, r)?;
        points = p;
        Ok(g)
    })?;
    let side: Vec<bool> = points.iter().map(|p| p[0] >= 0.5).collect();
    let signal = points
        .iter()
        .zip(&side)
        .map(|(p, &s)| if s { 1.0 } else { 0.0 } + 0.2 * p[1])
        .collect();
    Ok(PlantedCut {
        graph,
        points,
        side,
        signal,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscontinuityConfig {
    pub ckwt_scales: Vec<usize>,
    pub sgwt_scale_count: usize,
    /// Fraction of largest-magnitude coefficients examined per scale.
    pub top_fraction: f64,
    /// Radius (in hops) of the neighbourhood around the cut.
    pub hops: usize,
    pub mother: MotherWavelet,
}

impl Default for DiscontinuityConfig {
    fn default() -> Self {
        Self {
            ckwt_scales: (1..=10).collect(),
            sgwt_scale_count: 5,
            top_fraction: 0.05,
            hops: 2,
            mother: MotherWavelet::MexicanHat,
        }
    }
}

/// Coefficients of one transform at one scale and how concentrated the
/// largest of them are near the cut.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleConcentration {
    pub kind: AtomKind,
    pub coefficients: Vec<f64>,
    /// Share of the top coefficients whose center lies near the cut.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscontinuityReport {
    /// Vertices within `hops` of a cut edge endpoint.
    pub near_cut: Vec<bool>,
    /// Share of all vertices that are near the cut.
    pub baseline: f64,
    pub scales: Vec<ScaleConcentration>,
}

impl DiscontinuityReport {
    pub fn get(&self, kind: AtomKind) -> Option<&ScaleConcentration> {
        self.scales.iter().find(|s| s.kind == kind)
    }

    /// CSV `scale,kind,fraction,baseline`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "scale,kind,fraction,baseline")?;
        for s in &self.scales {
            writeln!(
                out,
                "{},{},{},{}",
                s.kind.scale_label(),
                s.kind.transform(),
                format_g(s.fraction),
                format_g(self.baseline)
            )?;
        }
        Ok(())
    }
}

/// Computes CKWT and SGWT coefficients of `f` and, per scale, the share of
/// the top `top_fraction` magnitudes centred within `hops` of the cut
/// between `side == true` and `side == false` vertices.
pub fn discontinuity_experiment(
    g: &Graph,
    s: &Spectrum,
    f: &[f64],
    side: &[bool],
    cfg: &DiscontinuityConfig,
) -> Result<DiscontinuityReport> {
    let n = g.num_vertices();
    check_len(n, f.len())?;
    check_len(n, side.len())?;
    check_len(n, s.len())?;
    if !(cfg.top_fraction > 0.0 && cfg.top_fraction <= 1.0) {
        return Err(Error::param("top fraction must lie in (0, 1]"));
    }
    let near_cut = near_cut_set(g, side, cfg.hops);
    let baseline = near_cut.iter().filter(|&&b| b).count() as f64 / n as f64;
    let top = ((cfg.top_fraction * n as f64).ceil() as usize).max(1);

    let mut scales = Vec::new();
    let mut push = |kind: AtomKind, coefficients: Vec<f64>| {
        let fraction = top_share(&coefficients, &near_cut, top);
        scales.push(ScaleConcentration {
            kind,
            coefficients,
            fraction,
        });
    };
    for &k in &cfg.ckwt_scales {
        let atoms = ckwt_atoms(g, k, cfg.mother)?;
        push(atoms.kind(), atoms.coefficients(f)?);
    }
    let sgwt = SgwtConfig::with_defaults(s.lambda_max(), cfg.sgwt_scale_count)?;
    let coeffs = super::sgwt::sgwt_transform(s, &sgwt, f)?;
    for (kind, c) in coeffs.rows() {
        push(kind, c.to_vec());
    }
    Ok(DiscontinuityReport {
        near_cut,
        baseline,
        scales,
    })
}

fn near_cut_set(g: &Graph, side: &[bool], hops: usize) -> Vec<bool> {
    let n = g.num_vertices();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (i, j, _) in g.edges() {
        if side[i] != side[j] {
            for v in [i, j] {
                if dist[v] != 0 {
                    dist[v] = 0;
                    queue.push_back(v);
                }
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        if dist[v] >= hops {
            continue;
        }
        for (u, _) in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist.into_iter().map(|d| d <= hops).collect()
}

fn top_share(coefficients: &[f64], near: &[bool], top: usize) -> f64 {
    let mut order: Vec<usize> = (0..coefficients.len()).collect();
    order.sort_by(|&a, &b| {
        coefficients[b]
            .abs()
            .total_cmp(&coefficients[a].abs())
            .then(a.cmp(&b))
    });
    let hits = order.iter().take(top).filter(|&&i| near[i]).count();
    hits as f64 / top as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_cut_on_a_path() {
        let g = Graph::from_edges(8, (0..7).map(|i| (i, i + 1, 1.0))).unwrap();
        let side: Vec<bool> = (0..8).map(|i| i >= 4).collect();
        let near = near_cut_set(&g, &side, 2);
        assert_eq!(near, vec![false, true, true, true, true, true, true, false]);
    }

    #[test]
    fn top_share_counts_ties_by_index() {
        let c = [1.0, -3.0, 3.0, 0.5];
        let near = [true, false, true, true];
        assert_eq!(top_share(&c, &near, 2), 0.5);
        assert_eq!(top_share(&c, &near, 4), 0.75);
    }

    #[test]
    fn planted_instance_is_connected_and_deterministic() {
        let a = planted_cut_instance(120, 0.2, 5).unwrap();
        let b = planted_cut_instance(120, 0.2, 5).unwrap();
        assert!(a.graph.is_connected());
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.signal, b.signal);
    }
}
