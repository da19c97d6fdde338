//! Multiscale graph wavelets and localization metrics.
//!
//! Two designs are provided: [`ckwt`] wavelets are built in the vertex
//! domain from hop-distance shells, [`sgwt`] wavelets in the spectral domain
//! from dilated band-pass kernels. [`spread`] measures how localized a set
//! of atoms is in each domain, and [`experiments`] contains the d-regular
//! spread comparison and the discontinuity experiment.

pub mod ckwt;
pub mod experiments;
pub mod random;
pub mod sgwt;
pub mod spread;

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Result};

pub use ckwt::{ckwt_atoms, ckwt_coefficients, ckwt_shell_constants, MotherWavelet};
pub use experiments::{
    discontinuity_experiment, planted_cut_instance, spread_bench, DiscontinuityConfig,
    DiscontinuityReport, PlantedCut, SpreadBenchConfig,
};
pub use random::{random_geometric_graph, random_regular_graph};
pub use sgwt::{default_scales, sgwt_atoms, sgwt_transform, sgwt_transform_chebyshev, SgwtConfig};
pub use spread::{
    average_spreads, spatial_spread, spectral_spread, SpectralSpreadMode, SpreadPoint,
    SpreadReport,
};

/// Which transform and scale an atom set belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AtomKind {
    Ckwt { scale: usize },
    SgwtScaling,
    Sgwt { scale: f64 },
}

impl AtomKind {
    pub fn transform(&self) -> &'static str {
        match self {
            AtomKind::Ckwt { .. } => "ckwt",
            AtomKind::SgwtScaling | AtomKind::Sgwt { .. } => "sgwt",
        }
    }

    pub fn scale_label(&self) -> String {
        match self {
            AtomKind::Ckwt { scale } => scale.to_string(),
            AtomKind::SgwtScaling => "scaling".into(),
            AtomKind::Sgwt { scale } => crate::io::format_g(*scale),
        }
    }
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.transform(), self.scale_label())
    }
}

/// One atom per center vertex at a single scale. Column `i` of the atom
/// matrix is the atom centred at vertex `i`.
#[derive(Debug, Clone)]
pub struct WaveletAtomSet {
    kind: AtomKind,
    atoms: DMatrix<f64>,
    flagged: Vec<usize>,
}

impl WaveletAtomSet {
    pub fn new(kind: AtomKind, atoms: DMatrix<f64>) -> Self {
        Self {
            kind,
            atoms,
            flagged: Vec::new(),
        }
    }

    pub(crate) fn with_flags(kind: AtomKind, atoms: DMatrix<f64>, flagged: Vec<usize>) -> Self {
        Self {
            kind,
            atoms,
            flagged,
        }
    }

    pub fn kind(&self) -> AtomKind {
        self.kind
    }

    /// Number of atoms (= number of vertices).
    pub fn len(&self) -> usize {
        self.atoms.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.ncols() == 0
    }

    pub fn atoms(&self) -> &DMatrix<f64> {
        &self.atoms
    }

    pub fn atom(&self, center: usize) -> &[f64] {
        let n = self.atoms.nrows();
        &self.atoms.as_slice()[center * n..(center + 1) * n]
    }

    /// Centers whose atoms needed special handling (CKWT: a hop shell
    /// within the scale was empty).
    pub fn flagged_centers(&self) -> &[usize] {
        &self.flagged
    }

    /// Coefficients `<f, psi_i>` for every center `i`.
    pub fn coefficients(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.atoms.nrows(), f.len())?;
        let v = DVector::from_column_slice(f);
        Ok(self.atoms.tr_mul(&v).as_slice().to_vec())
    }
}
