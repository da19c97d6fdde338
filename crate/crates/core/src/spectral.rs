//! Laplacian eigendecomposition, the graph Fourier transform and
//! smoothness functionals.

use std::io::Write;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_len, Error, Result};
use crate::graph::{Graph, LaplacianVariant};
use crate::io::format_g;

/// Residual tolerance for eigenpairs, scaled by `max(1, lambda)`.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-8;

/// Eigenvalues below this count as zero when counting multiplicities.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EigenOptions {
    /// Decompose graphs with several connected components instead of
    /// rejecting them.
    pub allow_disconnected: bool,
}

/// Full eigendecomposition of a symmetric Laplacian variant.
///
/// Eigenvalues are ascending and the eigenvectors (columns of `U`) are
/// orthonormal. Each eigenvector is oriented so that its first entry with
/// magnitude above `1e-10` is positive.
#[derive(Debug, Clone)]
pub struct Spectrum {
    variant: LaplacianVariant,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    operator: DMatrix<f64>,
}

impl Spectrum {
    /// Decomposes a connected graph.
    pub fn compute(g: &Graph, variant: LaplacianVariant) -> Result<Self> {
        Self::compute_with(g, variant, EigenOptions::default())
    }

    pub fn compute_with(g: &Graph, variant: LaplacianVariant, opts: EigenOptions) -> Result<Self> {
        if !variant.is_symmetric() {
            return Err(Error::UnsupportedVariant(variant.name()));
        }
        if !opts.allow_disconnected {
            let components = g.connected_components().len();
            if components > 1 {
                return Err(Error::Disconnected { components });
            }
        }
        let operator = g.laplacian(variant)?.to_dense();
        let n = operator.nrows();
        let eig = SymmetricEigen::new(operator.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        orient_columns(&mut eigenvectors);

        let spectrum = Self {
            variant,
            eigenvalues,
            eigenvectors,
            operator,
        };
        let (worst, at) = spectrum.worst_residual();
        if worst > EIGEN_RESIDUAL_TOL {
            return Err(Error::Numeric(format!(
                "eigenpair {at} has scaled residual {worst:e} (tolerance {EIGEN_RESIDUAL_TOL:e})"
            )));
        }
        Ok(spectrum)
    }

    /// Assembles a spectrum from an explicit eigenbasis of `g`'s Laplacian,
    /// e.g. a different orthonormal basis of degenerate eigenspaces.
    pub fn from_basis(
        g: &Graph,
        variant: LaplacianVariant,
        eigenvalues: Vec<f64>,
        eigenvectors: DMatrix<f64>,
    ) -> Result<Self> {
        if !variant.is_symmetric() {
            return Err(Error::UnsupportedVariant(variant.name()));
        }
        let operator = g.laplacian(variant)?.to_dense();
        let n = operator.nrows();
        check_len(n, eigenvalues.len())?;
        if eigenvectors.shape() != (n, n) {
            return Err(Error::param("eigenvector matrix must be N x N"));
        }
        if eigenvalues.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("eigenvalues must be ascending"));
        }
        let gram = eigenvectors.tr_mul(&eigenvectors) - DMatrix::identity(n, n);
        if gram.amax() > 1e-8 {
            return Err(Error::Numeric("eigenvectors are not orthonormal".into()));
        }
        let spectrum = Self {
            variant,
            eigenvalues,
            eigenvectors,
            operator,
        };
        let (worst, at) = spectrum.worst_residual();
        if worst > EIGEN_RESIDUAL_TOL {
            return Err(Error::Numeric(format!(
                "eigenpair {at} has scaled residual {worst:e}"
            )));
        }
        Ok(spectrum)
    }

    pub fn variant(&self) -> LaplacianVariant {
        self.variant
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum of a non-empty graph")
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Eigenvector `u_l` as a contiguous slice.
    pub fn eigenvector(&self, l: usize) -> &[f64] {
        let n = self.len();
        &self.eigenvectors.as_slice()[l * n..(l + 1) * n]
    }

    /// Dense Laplacian the spectrum was computed from.
    pub fn operator(&self) -> &DMatrix<f64> {
        &self.operator
    }

    /// Count of eigenvalues below [`ZERO_EIGENVALUE_TOL`].
    pub fn zero_multiplicity(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| l.abs() < ZERO_EIGENVALUE_TOL)
            .count()
    }

    /// Largest `||L u - lambda u|| / max(1, lambda)` and its index.
    pub fn worst_residual(&self) -> (f64, usize) {
        let lu = &self.operator * &self.eigenvectors;
        let mut worst = (0.0, 0);
        for (l, &lambda) in self.eigenvalues.iter().enumerate() {
            let r = (lu.column(l) - self.eigenvectors.column(l) * lambda).norm()
                / lambda.abs().max(1.0);
            if r > worst.0 {
                worst = (r, l);
            }
        }
        worst
    }

    /// Forward transform: `fhat[l] = <f, u_l>`.
    pub fn gft(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), f.len())?;
        let v = DVector::from_column_slice(f);
        Ok(self.eigenvectors.tr_mul(&v).as_slice().to_vec())
    }

    /// Inverse transform: `f(i) = sum_l fhat[l] u_l(i)`.
    pub fn igft(&self, fhat: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), fhat.len())?;
        let v = DVector::from_column_slice(fhat);
        Ok((&self.eigenvectors * v).as_slice().to_vec())
    }

    /// CSV with header `ell,lambda`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "ell,lambda")?;
        for (l, lambda) in self.eigenvalues.iter().enumerate() {
            writeln!(out, "{l},{}", format_g(*lambda))?;
        }
        Ok(())
    }

    /// Dense dump of `U`, one row per vertex, comma separated.
    pub fn write_eigenvectors<W: Write>(&self, mut out: W) -> Result<()> {
        for i in 0..self.len() {
            let row: Vec<String> = (0..self.len())
                .map(|l| format_g(self.eigenvectors[(i, l)]))
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn orient_columns(u: &mut DMatrix<f64>) {
    for mut col in u.column_iter_mut() {
        if let Some(&first) = col.iter().find(|x| x.abs() > 1e-10) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
}

const LANCZOS_STEPS: usize = 60;

/// Upper bound on the largest eigenvalue of the combinatorial Laplacian:
/// the top Ritz value of a fully reorthogonalised Lanczos run plus its
/// residual, inflated by 1%, and never above the Gershgorin bound
/// `2 max d_i`.
pub fn lambda_max_bound(g: &Graph) -> f64 {
    let n = g.num_vertices();
    let gershgorin = 2.0 * g.degrees().iter().copied().fold(0.0, f64::max);
    if gershgorin == 0.0 {
        return 0.0;
    }
    // Fixed, generic start vector keeps the estimate deterministic.
    let mut q: Vec<f64> = (0..n)
        .map(|i| ((i * 7919 + 13) % 1009) as f64 / 1009.0 - 0.5)
        .collect();
    normalize(&mut q);
    let steps = LANCZOS_STEPS.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut w = vec![0.0; n];
    for _ in 0..steps {
        g.laplacian_mul_into(&q, &mut w);
        let a: f64 = q.iter().zip(&w).map(|(x, y)| x * y).sum();
        alpha.push(a);
        basis.push(std::mem::take(&mut q));
        // Two passes of Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let c: f64 = v.iter().zip(&w).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
            }
        }
        let b = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        beta.push(b);
        if b <= 1e-12 * gershgorin {
            break;
        }
        q = w.iter().map(|v| v / b).collect();
    }
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (top, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0));
    // Residual of the top Ritz pair: |beta_m * s_m|.
    let residual = (beta[m - 1] * eig.eigenvectors[(m - 1, top)]).abs();
    (1.01 * (theta + residual)).min(gershgorin)
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// Edges `(i, j)`, `i < j`, whose endpoint values have strictly opposite
/// signs.
pub fn zero_crossings(g: &Graph, f: &[f64]) -> Result<Vec<(usize, usize)>> {
    check_len(g.num_vertices(), f.len())?;
    Ok(g
        .edges()
        .filter(|&(i, j, _)| f[i] * f[j] < 0.0)
        .map(|(i, j, _)| (i, j))
        .collect())
}

/// Edge derivative of `f` along `(i, j)` at `i`: `sqrt(w_ij) (f(j) - f(i))`.
/// Zero when the vertices are not adjacent.
pub fn edge_derivative(g: &Graph, f: &[f64], i: usize, j: usize) -> Result<f64> {
    check_len(g.num_vertices(), f.len())?;
    g.check_vertex(i)?;
    g.check_vertex(j)?;
    Ok(g.weight(i, j).sqrt() * (f[j] - f[i]))
}

/// Gradient of `f` at `i`: edge derivatives to every neighbour.
pub fn gradient(g: &Graph, f: &[f64], i: usize) -> Result<Vec<(usize, f64)>> {
    check_len(g.num_vertices(), f.len())?;
    g.check_vertex(i)?;
    Ok(g
        .neighbors(i)
        .map(|(j, w)| (j, w.sqrt() * (f[j] - f[i])))
        .collect())
}

/// Local variation `||grad_i f||_2`.
pub fn local_variation(g: &Graph, f: &[f64], i: usize) -> Result<f64> {
    check_len(g.num_vertices(), f.len())?;
    g.check_vertex(i)?;
    Ok(local_variation_sq(g, f, i).sqrt())
}

fn local_variation_sq(g: &Graph, f: &[f64], i: usize) -> f64 {
    g.neighbors(i)
        .map(|(j, w)| w * (f[j] - f[i]) * (f[j] - f[i]))
        .sum()
}

/// Discrete p-Dirichlet form `S_p(f) = (1/p) sum_i ||grad_i f||^p`.
pub fn dirichlet_form(g: &Graph, f: &[f64], p: f64) -> Result<f64> {
    check_len(g.num_vertices(), f.len())?;
    if !(p >= 1.0) {
        return Err(Error::param(format!("p must be >= 1, got {p}")));
    }
    let total: f64 = (0..g.num_vertices())
        .map(|i| {
            let sq = local_variation_sq(g, f, i);
            if p == 2.0 {
                sq
            } else {
                sq.sqrt().powf(p)
            }
        })
        .sum();
    Ok(total / p)
}

/// Laplacian quadratic form `f^T L f` via a sparse product.
pub fn quadratic_form(g: &Graph, f: &[f64]) -> Result<f64> {
    check_len(g.num_vertices(), f.len())?;
    let mut lf = vec![0.0; f.len()];
    g.laplacian_mul_into(f, &mut lf);
    Ok(f.iter().zip(&lf).map(|(a, b)| a * b).sum())
}

/// Laplacian semi-norm `sqrt(S_2(f))`.
pub fn laplacian_seminorm(g: &Graph, f: &[f64]) -> Result<f64> {
    Ok(dirichlet_form(g, f, 2.0)?.sqrt())
}

/// Outcome of [`rayleigh_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RayleighReport {
    /// `max_l |u_l^T L u_l - lambda_l|`.
    pub max_eigen_error: f64,
    /// `min` over levels and samples of `f^T L f - lambda_l` for random unit
    /// `f` orthogonal to `u_0 .. u_{l-1}`.
    pub min_margin: f64,
    pub samples_per_level: usize,
    pub passed: bool,
}

/// Numerical check of the Courant-Fischer characterisation of the spectrum.
pub fn rayleigh_check(s: &Spectrum, samples_per_level: usize, seed: u64) -> RayleighReport {
    let n = s.len();
    let u = s.eigenvectors();
    let l_op = s.operator();
    let lu = l_op * u;
    let mut max_eigen_error: f64 = 0.0;
    for l in 0..n {
        let q = u.column(l).dot(&lu.column(l));
        max_eigen_error = max_eigen_error.max((q - s.eigenvalues()[l]).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_margin = f64::INFINITY;
    for l in 0..n {
        for _ in 0..samples_per_level {
            let mut f = DVector::from_fn(n, |_, _| StandardNormal.sample(&mut rng));
            for m in 0..l {
                let c = u.column(m).dot(&f);
                f.axpy(-c, &u.column(m), 1.0);
            }
            let norm = f.norm();
            if norm < 1e-12 {
                continue;
            }
            f /= norm;
            let q = f.dot(&(l_op * &f));
            min_margin = min_margin.min(q - s.eigenvalues()[l]);
        }
    }
    RayleighReport {
        max_eigen_error,
        min_margin,
        samples_per_level,
        passed: max_eigen_error <= 1e-8 && min_margin >= -1e-8,
    }
}
