//! Filtering and the generalized shift operators.
//!
//! Spectral filters `h(L)` are applied either exactly through the
//! eigenbasis ([`filter_exact`]) or with a shifted Chebyshev expansion that
//! only needs sparse matrix-vector products ([`ChebyshevFilter`]). An
//! order-`K` Chebyshev filter is a degree-`K` polynomial in `L`, so its output
//! at a vertex depends only on inputs within `K` hops.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::error::{check_len, Error, Result};
use crate::graph::Graph;
use crate::kernel::SpectralKernel;
use crate::sparse::CsrMatrix;
use crate::spectral::{lambda_max_bound, Spectrum};

pub const DEFAULT_CHEBYSHEV_ORDER: usize = 30;

/// Square operator that can be applied to a vector.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply_into(&self, x: &[f64], out: &mut [f64]);
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        CsrMatrix::dim(self)
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.mul_vec_into(x, out)
    }
}

/// A graph acts as its combinatorial Laplacian.
impl LinearOperator for Graph {
    fn dim(&self) -> usize {
        self.num_vertices()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.laplacian_mul_into(x, out)
    }
}

/// Kernel samples `h(lambda_l)` over the spectrum.
pub fn spectral_response(s: &Spectrum, k: &SpectralKernel) -> Result<Vec<f64>> {
    k.eval_all(s.eigenvalues())
}

/// `U diag(h(lambda)) U^T f`.
pub fn filter_exact(s: &Spectrum, k: &SpectralKernel, f: &[f64]) -> Result<Vec<f64>> {
    let response = spectral_response(s, k)?;
    let mut fhat = s.gft(f)?;
    fhat.iter_mut().zip(&response).for_each(|(c, h)| *c *= h);
    s.igft(&fhat)
}

/// Chebyshev expansion of a kernel on `[0, lambda_bound]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevFilter {
    coeffs: Vec<f64>,
    lambda_bound: f64,
}

impl ChebyshevFilter {
    /// Coefficients `c_0 .. c_order` from `2 * order` Chebyshev-Gauss nodes
    /// mapped onto `[0, lambda_bound]`.
    pub fn new(kernel: &SpectralKernel, order: usize, lambda_bound: f64) -> Result<Self> {
        if order < 1 {
            return Err(Error::param("Chebyshev order must be at least 1"));
        }
        if !(lambda_bound > 0.0) || !lambda_bound.is_finite() {
            return Err(Error::param(format!(
                "lambda bound must be positive and finite, got {lambda_bound}"
            )));
        }
        kernel.check_covers(lambda_bound)?;
        let half = lambda_bound / 2.0;
        let samples = 2 * order;
        let nodes: Vec<(f64, f64)> = (0..samples)
            .map(|j| {
                let theta = PI * (j as f64 + 0.5) / samples as f64;
                Ok((theta, kernel.eval(half * theta.cos() + half)?))
            })
            .collect::<Result<_>>()?;
        let coeffs = (0..=order)
            .map(|k| {
                let sum: f64 = nodes.iter().map(|(t, g)| g * (k as f64 * t).cos()).sum();
                2.0 * sum / samples as f64
            })
            .collect();
        Ok(Self {
            coeffs,
            lambda_bound,
        })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn lambda_bound(&self) -> f64 {
        self.lambda_bound
    }

    /// Scalar value of the approximating polynomial.
    pub fn eval(&self, lambda: f64) -> f64 {
        let half = self.lambda_bound / 2.0;
        let x = (lambda - half) / half;
        let (mut t_prev, mut t_cur) = (1.0, x);
        let mut acc = 0.5 * self.coeffs[0] + self.coeffs[1] * x;
        for c in &self.coeffs[2..] {
            let t_next = 2.0 * x * t_cur - t_prev;
            acc += c * t_next;
            t_prev = t_cur;
            t_cur = t_next;
        }
        acc
    }

    /// `p(A) f` by the three-term recurrence.
    pub fn apply<A: LinearOperator + ?Sized>(&self, op: &A, f: &[f64]) -> Result<Vec<f64>> {
        let n = op.dim();
        check_len(n, f.len())?;
        let half = self.lambda_bound / 2.0;
        // shifted(x) = (A x - half x) / half
        let shifted = |x: &[f64], out: &mut [f64]| {
            op.apply_into(x, out);
            for (o, xi) in out.iter_mut().zip(x) {
                *o = (*o - half * xi) / half;
            }
        };
        let mut t_prev = f.to_vec();
        let mut t_cur = vec![0.0; n];
        shifted(&t_prev, &mut t_cur);
        let mut out: Vec<f64> = t_prev
            .iter()
            .zip(&t_cur)
            .map(|(a, b)| 0.5 * self.coeffs[0] * a + self.coeffs[1] * b)
            .collect();
        let mut scratch = vec![0.0; n];
        for &c in &self.coeffs[2..] {
            shifted(&t_cur, &mut scratch);
            for i in 0..n {
                let t_next = 2.0 * scratch[i] - t_prev[i];
                out[i] += c * t_next;
                t_prev[i] = t_next;
            }
            std::mem::swap(&mut t_prev, &mut t_cur);
        }
        Ok(out)
    }

    /// Applies the filter to several signals.
    pub fn apply_batch<A: LinearOperator + Sync + ?Sized>(
        &self,
        op: &A,
        signals: &[Vec<f64>],
    ) -> Result<Vec<Vec<f64>>> {
        use rayon::prelude::*;
        signals.par_iter().map(|f| self.apply(op, f)).collect()
    }
}

/// Chebyshev filtering with the combinatorial Laplacian of `g`, using the
/// power-iteration bound from [`lambda_max_bound`].
pub fn filter_chebyshev(
    g: &Graph,
    k: &SpectralKernel,
    order: usize,
    f: &[f64],
) -> Result<Vec<f64>> {
    check_len(g.num_vertices(), f.len())?;
    let bound = lambda_max_bound(g);
    if bound == 0.0 {
        return Err(Error::EmptyGraph);
    }
    ChebyshevFilter::new(k, order, bound)?.apply(g, f)
}

/// Localized vertex-domain filter
/// `f_out(i) = b_ii f(i) + sum_{j in N(i, K)} b_ij f(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFilter {
    hops: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl VertexFilter {
    /// Validates that every nonzero `b_ij` lies within `hops` of `i`.
    pub fn new(g: &Graph, hops: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        check_len(g.num_vertices(), rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            if row.iter().all(|&(_, b)| b == 0.0) {
                continue;
            }
            let dist = g.hop_distances(i);
            for &(j, b) in row {
                g.check_vertex(j)?;
                if b != 0.0 && dist[j] > hops {
                    return Err(Error::Contract(format!(
                        "coefficient b[{i}][{j}] lies outside the {hops}-hop neighbourhood"
                    )));
                }
            }
        }
        Ok(Self { hops, rows })
    }

    /// Coefficients of the polynomial kernel `sum_k a_k lambda^k` in the
    /// vertex domain, i.e. the entries of `p(L)` restricted to `K` hops.
    pub fn from_polynomial(g: &Graph, coeffs: &[f64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("polynomial needs at least one coefficient"));
        }
        let n = g.num_vertices();
        let degree = coeffs.len() - 1;
        let mut rows = Vec::with_capacity(n);
        let mut scratch = vec![0.0; n];
        for i in 0..n {
            // Horner on delta_i; p(L) is symmetric so the column is the row.
            let mut y = vec![0.0; n];
            y[i] = coeffs[degree];
            for &a in coeffs[..degree].iter().rev() {
                g.laplacian_mul_into(&y, &mut scratch);
                std::mem::swap(&mut y, &mut scratch);
                y[i] += a;
            }
            let dist = g.hop_distances(i);
            rows.push(
                y.into_iter()
                    .enumerate()
                    .filter(|&(j, b)| b != 0.0 && dist[j] <= degree)
                    .collect(),
            );
        }
        Ok(Self { hops: degree, rows })
    }

    pub fn hops(&self) -> usize {
        self.hops
    }

    pub fn coefficient(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|&&(c, _)| c == j)
            .map_or(0.0, |&(_, b)| b)
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len(self.rows.len(), f.len())?;
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(j, b)| b * f[j]).sum())
            .collect())
    }
}

/// Second operand of a graph convolution.
#[derive(Debug, Clone, Copy)]
pub enum ConvolutionPartner<'a> {
    /// Vertex-domain signal, transformed with the GFT.
    Signal(&'a [f64]),
    /// Kernel sampled on the spectrum.
    Kernel(&'a SpectralKernel),
}

/// Generalized convolution: pointwise product in the spectral domain.
pub fn convolve(s: &Spectrum, f: &[f64], h: ConvolutionPartner<'_>) -> Result<Vec<f64>> {
    let hhat = match h {
        ConvolutionPartner::Signal(h) => s.gft(h)?,
        ConvolutionPartner::Kernel(k) => spectral_response(s, k)?,
    };
    let mut fhat = s.gft(f)?;
    fhat.iter_mut().zip(&hhat).for_each(|(a, b)| *a *= b);
    s.igft(&fhat)
}

/// Generalized translation of a kernel to vertex `n`:
/// `(T_n g)(i) = sqrt(N) sum_l g(lambda_l) u_l(n) u_l(i)`.
pub fn translate(s: &Spectrum, k: &SpectralKernel, n: usize) -> Result<Vec<f64>> {
    let size = s.len();
    if n >= size {
        return Err(Error::VertexOutOfRange { vertex: n, n: size });
    }
    let response = spectral_response(s, k)?;
    let u = s.eigenvectors();
    let scale = (size as f64).sqrt();
    let weights = DVector::from_fn(size, |l, _| scale * response[l] * u[(n, l)]);
    Ok((u * weights).as_slice().to_vec())
}

/// Generalized modulation by eigenvector `k`: `sqrt(N) u_k(i) g(i)`.
pub fn modulate(s: &Spectrum, f: &[f64], k: usize) -> Result<Vec<f64>> {
    check_len(s.len(), f.len())?;
    if k >= s.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            limit: s.len(),
        });
    }
    let scale = (s.len() as f64).sqrt();
    Ok(s.eigenvector(k)
        .iter()
        .zip(f)
        .map(|(u, g)| scale * u * g)
        .collect())
}

/// Generalized dilation `lambda -> g(s lambda)`.
pub fn dilate(k: &SpectralKernel, s: f64) -> Result<SpectralKernel> {
    k.dilate(s)
}

/// `exp(-tau L) f`.
pub fn heat_diffuse(s: &Spectrum, f: &[f64], tau: f64) -> Result<Vec<f64>> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::param(format!("tau must be nonnegative, got {tau}")));
    }
    if tau == 0.0 {
        check_len(s.len(), f.len())?;
        return Ok(f.to_vec());
    }
    filter_exact(s, &SpectralKernel::Heat { tau }, f)
}

/// How a [`FilterOperator`] is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    Exact,
    Chebyshev { order: usize },
}

/// A kernel bound to an evaluation strategy.
#[derive(Debug, Clone)]
pub struct FilterOperator {
    pub kernel: SpectralKernel,
    pub mode: FilterMode,
}

impl FilterOperator {
    pub fn new(kernel: SpectralKernel, mode: FilterMode) -> Result<Self> {
        if let FilterMode::Chebyshev { order } = mode {
            if order < 1 {
                return Err(Error::param("Chebyshev order must be at least 1"));
            }
        }
        Ok(Self { kernel, mode })
    }

    /// Exact mode needs `spectrum`; Chebyshev mode only uses `g`.
    pub fn apply(&self, g: &Graph, spectrum: Option<&Spectrum>, f: &[f64]) -> Result<Vec<f64>> {
        match self.mode {
            FilterMode::Exact => {
                let s = spectrum
                    .ok_or_else(|| Error::param("exact filtering needs a spectrum"))?;
                filter_exact(s, &self.kernel, f)
            }
            FilterMode::Chebyshev { order } => filter_chebyshev(g, &self.kernel, order, f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LaplacianVariant;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap()
    }

    #[test]
    fn identity_kernel_is_identity() {
        let g = path(5);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let f = [1.0, -2.0, 0.5, 3.0, 0.0];
        let out = filter_exact(&s, &SpectralKernel::Constant(1.0), &f).unwrap();
        for (a, b) in out.iter().zip(&f) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_kernel_order_one_is_laplacian() {
        let g = path(6);
        let f = [0.3, -1.0, 2.0, 0.0, 1.5, -0.7];
        let mut lf = vec![0.0; 6];
        g.laplacian_mul_into(&f, &mut lf);
        let cheb = filter_chebyshev(&g, &SpectralKernel::Polynomial(vec![0.0, 1.0]), 1, &f).unwrap();
        for (a, b) in cheb.iter().zip(&lf) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn chebyshev_scalar_eval_matches_kernel_for_polynomials() {
        let k = SpectralKernel::Polynomial(vec![1.0, -0.5, 0.25, 0.1]);
        let c = ChebyshevFilter::new(&k, 3, 4.0).unwrap();
        for x in [0.0, 0.7, 2.0, 4.0] {
            assert!((c.eval(x) - k.eval(x).unwrap()).abs() < 1e-12);
        }
        assert!(ChebyshevFilter::new(&k, 0, 4.0).is_err());
        assert!(ChebyshevFilter::new(&k, 3, 0.0).is_err());
    }

    #[test]
    fn vertex_filter_identity_and_negative_laplacian() {
        let g = path(4);
        let ident = VertexFilter::new(&g, 0, (0..4).map(|i| vec![(i, 1.0)]).collect()).unwrap();
        let f = [1.0, 2.0, -3.0, 4.0];
        assert_eq!(ident.apply(&f).unwrap(), f.to_vec());

        let rows = (0..4)
            .map(|i| {
                let mut r: Vec<(usize, f64)> = g.neighbors(i).collect();
                r.push((i, -g.degree(i)));
                r
            })
            .collect();
        let neg_l = VertexFilter::new(&g, 1, rows).unwrap();
        let mut lf = vec![0.0; 4];
        g.laplacian_mul_into(&f, &mut lf);
        for (a, b) in neg_l.apply(&f).unwrap().iter().zip(&lf) {
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn vertex_filter_rejects_far_coefficients() {
        let g = path(4);
        let mut rows: Vec<Vec<(usize, f64)>> = (0..4).map(|i| vec![(i, 1.0)]).collect();
        rows[0].push((3, 0.5));
        assert!(matches!(VertexFilter::new(&g, 2, rows), Err(Error::Contract(_))));
    }

    #[test]
    fn modulation_and_translation_basics() {
        let g = path(5);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let f = [1.0, 2.0, 3.0, 4.0, 5.0];
        let m0 = modulate(&s, &f, 0).unwrap();
        for (a, b) in m0.iter().zip(&f) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(modulate(&s, &f, 5).is_err());
        let t = translate(&s, &SpectralKernel::Constant(1.0), 2).unwrap();
        for (i, v) in t.iter().enumerate() {
            let want = if i == 2 { 5f64.sqrt() } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
        assert!(translate(&s, &SpectralKernel::Constant(1.0), 5).is_err());
    }

    #[test]
    fn heat_rejects_negative_time() {
        let g = path(3);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        assert!(heat_diffuse(&s, &[1.0, 0.0, 0.0], -1.0).is_err());
        let out = heat_diffuse(&s, &[1.0, 0.0, 0.0], 0.0).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn filter_operator_modes() {
        let g = path(4);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let op = FilterOperator::new(SpectralKernel::Heat { tau: 1.0 }, FilterMode::Exact).unwrap();
        assert!(op.apply(&g, None, &[1.0; 4]).is_err());
        assert!(op.apply(&g, Some(&s), &[1.0; 4]).is_ok());
        assert!(FilterOperator::new(SpectralKernel::LowPass, FilterMode::Chebyshev { order: 0 }).is_err());
    }
}
