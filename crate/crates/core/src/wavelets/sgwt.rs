//! Spectral graph wavelets: a translated low-pass scaling kernel plus
//! translated, dilated band-pass kernels.

use nalgebra::DMatrix;

use crate::error::{check_len, Error, Result};
use crate::graph::Graph;
use crate::kernel::SpectralKernel;
use crate::operators::{filter_exact, spectral_response, ChebyshevFilter};
use crate::spectral::{lambda_max_bound, Spectrum};

use super::{AtomKind, WaveletAtomSet};

/// Ratio between the largest eigenvalue and the lowest band-pass centre
/// frequency covered by the wavelet scales.
const LOWPASS_RATIO: f64 = 20.0;

/// Kernels and scales of an SGWT.
#[derive(Debug, Clone)]
pub struct SgwtConfig {
    pub lowpass: SpectralKernel,
    /// Must vanish at 0 and decay at infinity.
    pub bandpass: SpectralKernel,
    /// Wavelet scales, ascending (finest first).
    pub scales: Vec<f64>,
}

impl SgwtConfig {
    /// `lambda exp(-lambda)` band-pass, `exp(-lambda^4)` low-pass and
    /// `count` log-spaced scales from [`default_scales`].
    pub fn with_defaults(lambda_max: f64, count: usize) -> Result<Self> {
        Ok(Self {
            lowpass: SpectralKernel::LowPass,
            bandpass: SpectralKernel::BandPass,
            scales: default_scales(lambda_max, count)?,
        })
    }

    fn validate(&self) -> Result<()> {
        let g0 = self.bandpass.eval(0.0)?;
        if g0.abs() > 1e-12 {
            return Err(Error::Admissibility(g0));
        }
        if self.scales.is_empty() {
            return Err(Error::param("SGWT needs at least one scale"));
        }
        if self.scales.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::param("SGWT scales must be positive"));
        }
        Ok(())
    }

    fn kernels(&self) -> Result<Vec<(AtomKind, SpectralKernel)>> {
        self.validate()?;
        let mut out = vec![(AtomKind::SgwtScaling, self.lowpass.clone())];
        for &t in &self.scales {
            out.push((AtomKind::Sgwt { scale: t }, self.bandpass.dilate(t)?));
        }
        Ok(out)
    }
}

/// `count` scales log-spaced (ascending) over `[1/lambda_max, 40/lambda_max]`.
/// The band-pass default peaks at `t lambda = 1`, so the finest scale
/// resolves the top of the spectrum and the coarsest reaches down to
/// `lambda_max / 40`.
pub fn default_scales(lambda_max: f64, count: usize) -> Result<Vec<f64>> {
    if !(lambda_max > 0.0) || !lambda_max.is_finite() {
        return Err(Error::param(format!("lambda_max must be positive, got {lambda_max}")));
    }
    if count == 0 {
        return Err(Error::param("need at least one scale"));
    }
    let lo = 1.0 / lambda_max;
    let hi = 2.0 * LOWPASS_RATIO / lambda_max;
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi / lo).ln() / (count - 1) as f64;
    Ok((0..count).map(|k| lo * (k as f64 * step).exp()).collect())
}

/// SGWT coefficients: scaling coefficients plus one vector per scale.
#[derive(Debug, Clone, PartialEq)]
pub struct SgwtCoefficients {
    pub scales: Vec<f64>,
    pub scaling: Vec<f64>,
    pub wavelets: Vec<Vec<f64>>,
}

impl SgwtCoefficients {
    /// `(kind, coefficients)` rows, scaling first.
    pub fn rows(&self) -> impl Iterator<Item = (AtomKind, &[f64])> {
        std::iter::once((AtomKind::SgwtScaling, self.scaling.as_slice())).chain(
            self.scales
                .iter()
                .zip(&self.wavelets)
                .map(|(&t, w)| (AtomKind::Sgwt { scale: t }, w.as_slice())),
        )
    }
}

/// Exact SGWT: coefficient `i` at each scale is `(k(L) f)(i)`.
pub fn sgwt_transform(s: &Spectrum, cfg: &SgwtConfig, f: &[f64]) -> Result<SgwtCoefficients> {
    check_len(s.len(), f.len())?;
    let mut rows = cfg
        .kernels()?
        .into_iter()
        .map(|(_, k)| filter_exact(s, &k, f))
        .collect::<Result<Vec<_>>>()?;
    let scaling = rows.remove(0);
    Ok(SgwtCoefficients {
        scales: cfg.scales.clone(),
        scaling,
        wavelets: rows,
    })
}

/// SGWT through Chebyshev filtering with the combinatorial Laplacian of `g`.
pub fn sgwt_transform_chebyshev(
    g: &Graph,
    cfg: &SgwtConfig,
    order: usize,
    f: &[f64],
) -> Result<SgwtCoefficients> {
    check_len(g.num_vertices(), f.len())?;
    let bound = lambda_max_bound(g);
    if bound == 0.0 {
        return Err(Error::EmptyGraph);
    }
    let mut rows = cfg
        .kernels()?
        .into_iter()
        .map(|(_, k)| ChebyshevFilter::new(&k, order, bound)?.apply(g, f))
        .collect::<Result<Vec<_>>>()?;
    let scaling = rows.remove(0);
    Ok(SgwtCoefficients {
        scales: cfg.scales.clone(),
        scaling,
        wavelets: rows,
    })
}

/// Atom sets `[scaling, t_1, .., t_K]`; column `i` of each is `k(L) delta_i`.
pub fn sgwt_atoms(s: &Spectrum, cfg: &SgwtConfig) -> Result<Vec<WaveletAtomSet>> {
    let u = s.eigenvectors();
    cfg.kernels()?
        .into_iter()
        .map(|(kind, k)| {
            let response = spectral_response(s, &k)?;
            let scaled = DMatrix::from_fn(u.nrows(), u.ncols(), |i, l| u[(i, l)] * response[l]);
            Ok(WaveletAtomSet::new(kind, scaled * u.transpose()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LaplacianVariant;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).unwrap()
    }

    #[test]
    fn default_scales_are_log_spaced() {
        let t = default_scales(4.0, 5).unwrap();
        assert_eq!(t.len(), 5);
        assert!((t[0] - 0.25).abs() < 1e-15);
        assert!((t[4] - 10.0).abs() < 1e-12);
        let r = t[1] / t[0];
        for w in t.windows(2) {
            assert!((w[1] / w[0] - r).abs() < 1e-12);
        }
        assert!(default_scales(0.0, 3).is_err());
        assert!(default_scales(1.0, 0).is_err());
    }

    #[test]
    fn non_admissible_bandpass_rejected() {
        let g = cycle(6);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let cfg = SgwtConfig {
            lowpass: SpectralKernel::LowPass,
            bandpass: SpectralKernel::Heat { tau: 1.0 },
            scales: vec![1.0],
        };
        assert!(matches!(
            sgwt_transform(&s, &cfg, &[1.0; 6]),
            Err(Error::Admissibility(_))
        ));
    }

    #[test]
    fn dc_component_vanishes_at_wavelet_scales() {
        let g = cycle(8);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let cfg = SgwtConfig::with_defaults(s.lambda_max(), 3).unwrap();
        let c = sgwt_transform(&s, &cfg, s.eigenvector(0)).unwrap();
        for w in &c.wavelets {
            for x in w {
                assert!(x.abs() < 1e-10);
            }
        }
        let c = sgwt_transform(&s, &cfg, &[3.0; 8]).unwrap();
        for x in &c.scaling {
            assert!((x - 3.0).abs() < 1e-10);
        }
        assert_eq!(c.rows().count(), 4);
    }
}
