//! Spatial and spectral spread of graph signals and atom sets.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{check_len, Error, Result};
use crate::graph::{Graph, LaplacianVariant};
use crate::io::format_g;
use crate::spectral::Spectrum;

use super::WaveletAtomSet;

fn energy(f: &[f64]) -> Result<f64> {
    let e: f64 = f.iter().map(|x| x * x).sum();
    if e == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(e)
}

/// Second moment of the hop distance from a fixed center under the pmf
/// `f(j)^2 / ||f||^2`. `dist` holds hop distances from that center.
pub fn spatial_spread_about(dist: &[usize], f: &[f64]) -> Result<f64> {
    check_len(dist.len(), f.len())?;
    let e = energy(f)?;
    if dist.iter().zip(f).any(|(&d, &x)| d == usize::MAX && x != 0.0) {
        return Err(Error::Disconnected { components: 2 });
    }
    let s: f64 = dist
        .iter()
        .zip(f)
        .filter(|(_, &x)| x != 0.0)
        .map(|(&d, &x)| (d * d) as f64 * x * x)
        .sum();
    Ok(s / e)
}

/// Spatial spread minimised over centers. Returns `(spread, center)`, the
/// lowest index winning ties.
pub fn spatial_spread(g: &Graph, f: &[f64]) -> Result<(f64, usize)> {
    check_len(g.num_vertices(), f.len())?;
    energy(f)?;
    let components = g.connected_components().len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let mut best = (f64::INFINITY, 0);
    for i in 0..g.num_vertices() {
        let s = spatial_spread_about(&g.hop_distances(i), f)?;
        if s < best.0 {
            best = (s, i);
        }
    }
    Ok(best)
}

/// Choice of the spectral mean `mu` in the spectral spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectralSpreadMode {
    /// Minimise over `mu >= 0`: `sqrt(mu)` is the pmf mean of `sqrt(lambda)`.
    #[default]
    OptimalMean,
    /// Fix `mu = 0` (second moment of `sqrt(lambda)`).
    ZeroMean,
}

/// Spectral spread of a nonnegative spectral density (e.g. `fhat^2`) over
/// the given eigenvalues.
pub fn spectral_spread_of_density(
    eigenvalues: &[f64],
    density: &[f64],
    mode: SpectralSpreadMode,
) -> Result<f64> {
    check_len(eigenvalues.len(), density.len())?;
    let total: f64 = density.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroSignal);
    }
    let roots: Vec<f64> = eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    let center = match mode {
        SpectralSpreadMode::OptimalMean => {
            let m: f64 = roots.iter().zip(density).map(|(r, p)| r * p).sum::<f64>() / total;
            m.max(0.0)
        }
        SpectralSpreadMode::ZeroMean => 0.0,
    };
    Ok(roots
        .iter()
        .zip(density)
        .map(|(r, p)| (r - center) * (r - center) * p)
        .sum::<f64>()
        / total)
}

/// Spectral spread of a signal with the optimal mean.
pub fn spectral_spread(s: &Spectrum, f: &[f64]) -> Result<f64> {
    spectral_spread_with(s, f, SpectralSpreadMode::OptimalMean)
}

pub fn spectral_spread_with(s: &Spectrum, f: &[f64], mode: SpectralSpreadMode) -> Result<f64> {
    let density: Vec<f64> = s.gft(f)?.into_iter().map(|c| c * c).collect();
    spectral_spread_of_density(s.eigenvalues(), &density, mode)
}

/// Average spreads of an atom set: the mean spatial spread of each atom
/// about its own center, and the spectral spread of the center-averaged
/// spectral density `(1/N) sum_i psi_i_hat(lambda)^2`.
pub fn average_spreads(g: &Graph, s: &Spectrum, atoms: &WaveletAtomSet) -> Result<(f64, f64)> {
    average_spreads_with(g, s, atoms, SpectralSpreadMode::OptimalMean)
}

pub fn average_spreads_with(
    g: &Graph,
    s: &Spectrum,
    atoms: &WaveletAtomSet,
    mode: SpectralSpreadMode,
) -> Result<(f64, f64)> {
    let n = g.num_vertices();
    if atoms.is_empty() {
        return Err(Error::param("empty atom set"));
    }
    check_len(n, atoms.len())?;
    check_len(n, s.len())?;
    let spatial: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| spatial_spread_about(&g.hop_distances(i), atoms.atom(i)))
        .collect::<Result<_>>()?;
    let spatial = spatial.iter().sum::<f64>() / n as f64;

    let hat = s.eigenvectors().tr_mul(atoms.atoms());
    let density: Vec<f64> = hat
        .row_iter()
        .map(|row| row.iter().map(|x| x * x).sum::<f64>() / n as f64)
        .collect();
    let spectral = spectral_spread_of_density(s.eigenvalues(), &density, mode)?;
    Ok((spatial, spectral))
}

/// Average spreads of one transform at one scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadPoint {
    /// `ckwt` or `sgwt`.
    pub transform: String,
    /// CKWT hop scale, SGWT scale value or `scaling`.
    pub scale: String,
    /// Hop-distance squared.
    pub spatial: f64,
    /// Eigenvalue units.
    pub spectral: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpreadReport {
    pub variant: LaplacianVariant,
    pub points: Vec<SpreadPoint>,
}

impl SpreadReport {
    /// Mean `(spatial, spectral)` over all scales of one transform.
    pub fn scale_averaged(&self, transform: &str) -> Option<(f64, f64)> {
        let pts: Vec<&SpreadPoint> = self
            .points
            .iter()
            .filter(|p| p.transform == transform)
            .collect();
        if pts.is_empty() {
            return None;
        }
        let k = pts.len() as f64;
        Some((
            pts.iter().map(|p| p.spatial).sum::<f64>() / k,
            pts.iter().map(|p| p.spectral).sum::<f64>() / k,
        ))
    }

    /// CSV `scale,kind,spatial,spectral`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "scale,kind,spatial,spectral")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{}",
                p.scale,
                p.transform,
                format_g(p.spatial),
                format_g(p.spectral)
            )?;
        }
        Ok(())
    }
}
