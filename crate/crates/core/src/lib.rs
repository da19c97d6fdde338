//! Signal processing on undirected weighted graphs.
//!
//! The crate covers the whole pipeline from graph construction to
//! multiscale analysis:
//!
//! - [`graph`]: graphs from edge lists, point clouds or k-NN, Laplacian
//!   variants, components, bipartiteness and polarity downsampling.
//! - [`spectral`]: eigendecomposition, the graph Fourier transform pair and
//!   discrete-calculus smoothness measures.
//! - [`kernel`] and [`operators`]: spectral kernels, exact and Chebyshev
//!   filtering, vertex-domain filtering, convolution, translation,
//!   modulation, dilation and heat diffusion.
//! - [`wavelets`]: hop-shell (CKWT) and spectral (SGWT) graph wavelets,
//!   spatial/spectral spread metrics and the two wavelet experiments.
//! - [`denoise`]: Tikhonov denoising and the 8-neighbour image graph.
//! - [`cli`]: the `graphsig` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod denoise;
pub mod error;
pub mod graph;
pub mod io;
pub mod kernel;
pub mod operators;
pub mod solver;
pub mod sparse;
pub mod spectral;
pub mod wavelets;

pub use error::{Error, Result};
pub use graph::{Graph, LaplacianVariant};
pub use kernel::SpectralKernel;
pub use spectral::Spectrum;
