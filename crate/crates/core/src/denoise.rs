//! Tikhonov graph denoising and the 8-neighbour image graph.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{check_len, Error, Result};
use crate::graph::{gaussian_weight, Graph};
use crate::kernel::SpectralKernel;
use crate::operators::{filter_exact, LinearOperator};
use crate::solver::conjugate_gradient_from;
use crate::spectral::Spectrum;

/// Residual target for the linear-solve path.
pub const CG_TOLERANCE: f64 = 1e-8;

/// Grayscale image with intensities in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param("image dimensions must be positive"));
        }
        check_len(width * height, pixels.len())?;
        if pixels.iter().any(|p| !p.is_finite()) {
            return Err(Error::param("pixel values must be finite"));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    /// Copy with every value clamped to `[0, 1]`.
    pub fn clamped(&self) -> Self {
        Self {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| p.clamp(0.0, 1.0)).collect(),
        }
    }
}

/// Netpbm grayscale encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// `P2`
    Ascii,
    /// `P5`
    Binary,
}

/// Reads a P2 or P5 PGM; values map to `v / maxval`.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos)?;
    let format = match magic.as_str() {
        "P2" => PgmFormat::Ascii,
        "P5" => PgmFormat::Binary,
        other => return Err(pgm_err(format!("unsupported magic '{other}'"))),
    };
    let width: usize = parse_tok(&next_token(bytes, &mut pos)?, "width")?;
    let height: usize = parse_tok(&next_token(bytes, &mut pos)?, "height")?;
    let maxval: u32 = parse_tok(&next_token(bytes, &mut pos)?, "maxval")?;
    if maxval == 0 || maxval > 65535 {
        return Err(pgm_err(format!("invalid maxval {maxval}")));
    }
    let count = width * height;
    let scale = maxval as f64;
    let raw: Vec<u32> = match format {
        PgmFormat::Ascii => (0..count)
            .map(|_| parse_tok(&next_token(bytes, &mut pos)?, "pixel"))
            .collect::<Result<_>>()?,
        PgmFormat::Binary => {
            // Exactly one whitespace byte separates the header from the raster.
            pos += 1;
            let depth = if maxval < 256 { 1 } else { 2 };
            let data = bytes
                .get(pos..pos + count * depth)
                .ok_or_else(|| pgm_err("truncated raster".into()))?;
            if depth == 1 {
                data.iter().map(|&b| b as u32).collect()
            } else {
                data.chunks_exact(2)
                    .map(|c| u32::from(c[0]) << 8 | u32::from(c[1]))
                    .collect()
            }
        }
    };
    if let Some(v) = raw.iter().find(|&&v| v > maxval) {
        return Err(pgm_err(format!("pixel value {v} exceeds maxval {maxval}")));
    }
    GrayImage::new(width, height, raw.into_iter().map(|v| v as f64 / scale).collect())
}

/// Writes an 8-bit PGM (maxval 255); values are clamped and rounded.
pub fn write_pgm(img: &GrayImage, format: PgmFormat) -> Vec<u8> {
    let levels: Vec<u8> = img
        .pixels
        .iter()
        .map(|p| (p.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect();
    match format {
        PgmFormat::Binary => {
            let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
            out.extend_from_slice(&levels);
            out
        }
        PgmFormat::Ascii => {
            let mut out = format!("P2\n{} {}\n255\n", img.width, img.height);
            for row in levels.chunks(img.width) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

fn pgm_err(message: String) -> Error {
    Error::Parse { line: 0, message }
}

fn parse_tok<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| pgm_err(format!("invalid {what} '{tok}'")))
}

fn next_token(bytes: &[u8], pos: &mut usize) -> Result<String> {
    loop {
        match bytes.get(*pos) {
            Some(b'#') => {
                while bytes.get(*pos).is_some_and(|&b| b != b'\n') {
                    *pos += 1;
                }
            }
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
            None => return Err(pgm_err("unexpected end of file".into())),
        }
    }
    let start = *pos;
    while bytes.get(*pos).is_some_and(|b| !b.is_ascii_whitespace()) {
        *pos += 1;
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

/// How [`tikhonov_denoise`] computes `(I + gamma L)^{-1} y`.
#[derive(Debug, Clone, Copy)]
pub enum TikhonovMode<'a> {
    /// Spectral filter `1 / (1 + gamma lambda)`.
    Spectral(&'a Spectrum),
    /// Conjugate gradient on the sparse system.
    ConjugateGradient,
}

struct RegularizedLaplacian<'a> {
    g: &'a Graph,
    gamma: f64,
}

impl LinearOperator for RegularizedLaplacian<'_> {
    fn dim(&self) -> usize {
        self.g.num_vertices()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.g.laplacian_mul_into(x, out);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = xi + self.gamma * *o;
        }
    }
}

/// Minimiser of `||f - y||^2 + gamma f^T L f`.
pub fn tikhonov_denoise(g: &Graph, y: &[f64], gamma: f64, mode: TikhonovMode<'_>) -> Result<Vec<f64>> {
    check_len(g.num_vertices(), y.len())?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::param(format!("gamma must be positive, got {gamma}")));
    }
    match mode {
        TikhonovMode::Spectral(s) => filter_exact(s, &SpectralKernel::Tikhonov { gamma }, y),
        TikhonovMode::ConjugateGradient => {
            let op = RegularizedLaplacian { g, gamma };
            let max_iter = 10 * g.num_vertices();
            // y is the exact answer on constants and a close one for small gamma.
            Ok(conjugate_gradient_from(&op, y, y.to_vec(), CG_TOLERANCE, max_iter)?.x)
        }
    }
}

/// Pixel graph linking each pixel to its horizontal, vertical and diagonal
/// neighbours, weighted by the Gaussian kernel of the intensity difference.
/// `kappa == 0` keeps every lattice edge.
pub fn build_semilocal_image_graph(img: &GrayImage, theta: f64, kappa: f64) -> Result<Graph> {
    if img.width * img.height < 2 {
        return Err(Error::param("image must have at least two pixels"));
    }
    if !(theta > 0.0) {
        return Err(Error::param(format!("theta must be positive, got {theta}")));
    }
    if !(kappa >= 0.0) {
        return Err(Error::param(format!("kappa must be nonnegative, got {kappa}")));
    }
    let (w, h) = (img.width as isize, img.height as isize);
    let mut edges = Vec::with_capacity(4 * img.pixels.len());
    // Forward half of the 8-neighbourhood; each edge is visited once.
    const FORWARD: [(isize, isize); 4] = [(1, 0), (-1, 1), (0, 1), (1, 1)];
    for y in 0..h {
        for x in 0..w {
            let i = img.index(x as usize, y as usize);
            for (dx, dy) in FORWARD {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || nx >= w || ny >= h {
                    continue;
                }
                let j = img.index(nx as usize, ny as usize);
                let d = (img.pixels[i] - img.pixels[j]).abs();
                if kappa == 0.0 || d <= kappa {
                    edges.push((i, j, gaussian_weight(d, theta)));
                }
            }
        }
    }
    Graph::from_edges(img.pixels.len(), edges)
}

fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let m = i.rem_euclid(2 * n);
    (if m < n { m } else { 2 * n - 1 - m }) as usize
}

/// Separable Gaussian low-pass filter truncated at `3 sigma`, with
/// half-sample symmetric reflection at the borders.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::param(format!("sigma must be positive, got {sigma}")));
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);

    let (w, h) = (img.width, img.height);
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            tmp[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(k, t)| t * img.pixels[y * w + reflect(x as isize + k as isize - radius, w)])
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(k, t)| t * tmp[reflect(y as isize + k as isize - radius, h) * w + x])
                .sum();
        }
    }
    GrayImage::new(w, h, out)
}

/// Semi-local graph denoising: image graph from the noisy intensities,
/// Tikhonov filtering by conjugate gradient, then clamping to `[0, 1]`.
pub fn denoise_image(noisy: &GrayImage, gamma: f64, theta: f64) -> Result<GrayImage> {
    let g = build_semilocal_image_graph(noisy, theta, 0.0)?;
    let f = tikhonov_denoise(&g, noisy.pixels(), gamma, TikhonovMode::ConjugateGradient)?;
    Ok(GrayImage::new(noisy.width, noisy.height, f)?.clamped())
}

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::param("image dimensions differ"));
    }
    Ok(masked_mse(a.pixels(), b.pixels(), None))
}

/// Mean squared error over pixels where `mask` is true.
pub fn mse_masked(a: &GrayImage, b: &GrayImage, mask: &[bool]) -> Result<f64> {
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Error::param("image dimensions differ"));
    }
    check_len(a.pixels.len(), mask.len())?;
    if !mask.iter().any(|&m| m) {
        return Err(Error::param("mask selects no pixels"));
    }
    Ok(masked_mse(a.pixels(), b.pixels(), Some(mask)))
}

fn masked_mse(a: &[f64], b: &[f64], mask: Option<&[bool]>) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        if mask.is_none_or(|m| m[k]) {
            sum += (x - y) * (x - y);
            count += 1;
        }
    }
    sum / count as f64
}

/// Peak signal-to-noise ratio in dB for peak value 1.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(-10.0 * mse(a, b)?.log10())
}

/// Adds seeded Gaussian noise and clamps to `[0, 1]`.
pub fn add_gaussian_noise(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::param(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = img
        .pixels
        .iter()
        .map(|p| p + normal.sample(&mut rng))
        .collect();
    Ok(GrayImage::new(img.width, img.height, pixels)?.clamped())
}

/// Pixels within `radius` (Chebyshev distance) of an intensity jump in
/// `clean`, i.e. of a pair of 8-neighbours with different values.
pub fn edge_neighborhood(clean: &GrayImage, radius: usize) -> Vec<bool> {
    let (w, h) = (clean.width as isize, clean.height as isize);
    let mut on_edge = vec![false; clean.pixels.len()];
    for y in 0..h {
        for x in 0..w {
            let v = clean.get(x as usize, y as usize);
            'nb: for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if (0..w).contains(&nx)
                        && (0..h).contains(&ny)
                        && clean.get(nx as usize, ny as usize) != v
                    {
                        on_edge[clean.index(x as usize, y as usize)] = true;
                        break 'nb;
                    }
                }
            }
        }
    }
    let r = radius as isize;
    let mut mask = vec![false; on_edge.len()];
    for y in 0..h {
        for x in 0..w {
            if !on_edge[clean.index(x as usize, y as usize)] {
                continue;
            }
            for ny in (y - r).max(0)..=(y + r).min(h - 1) {
                for nx in (x - r).max(0)..=(x + r).min(w - 1) {
                    mask[clean.index(nx as usize, ny as usize)] = true;
                }
            }
        }
    }
    mask
}

/// Piecewise-constant test image: a checkerboard of `block`-pixel squares
/// at intensities 0.2 and 0.8.
pub fn checkerboard(width: usize, height: usize, block: usize) -> Result<GrayImage> {
    if block == 0 {
        return Err(Error::param("block size must be positive"));
    }
    GrayImage::from_fn(width, height, |x, y| {
        if (x / block + y / block).is_multiple_of(2) {
            0.2
        } else {
            0.8
        }
    })
}

/// Smooth horizontal ramp from 0.1 to 0.9.
pub fn horizontal_gradient(width: usize, height: usize) -> Result<GrayImage> {
    let span = (width.max(2) - 1) as f64;
    GrayImage::from_fn(width, height, |x, _| 0.1 + 0.8 * x as f64 / span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_graph_has_unit_weights() {
        let img = GrayImage::new(3, 3, vec![0.4; 9]).unwrap();
        let g = build_semilocal_image_graph(&img, 0.1, 0.0).unwrap();
        assert!(g.edges().all(|(_, _, w)| w == 1.0));
        // 3x3 lattice: 12 axis edges + 8 diagonals.
        assert_eq!(g.num_edges(), 20);
        assert_eq!(g.neighbors(4).count(), 8);
        assert_eq!(g.neighbors(0).count(), 3);
    }

    #[test]
    fn two_pixel_image_weight() {
        let img = GrayImage::new(2, 1, vec![0.0, 0.1]).unwrap();
        let g = build_semilocal_image_graph(&img, 0.1, 0.0).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert!((g.weight(0, 1) - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn single_pixel_rejected() {
        let img = GrayImage::new(1, 1, vec![0.5]).unwrap();
        assert!(build_semilocal_image_graph(&img, 0.1, 0.0).is_err());
    }

    #[test]
    fn tiny_sigma_blur_is_identity() {
        let img = checkerboard(8, 8, 3).unwrap();
        let out = gaussian_blur(&img, 1e-6).unwrap();
        for (a, b) in out.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() < 1e-6);
        }
        assert!(gaussian_blur(&img, 0.0).is_err());
    }

    #[test]
    fn constant_image_unchanged_by_blur() {
        let img = GrayImage::new(5, 4, vec![0.3; 20]).unwrap();
        for s in [0.5, 1.5, 3.5] {
            let out = gaussian_blur(&img, s).unwrap();
            for p in out.pixels() {
                assert!((p - 0.3).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn impulse_response_is_sampled_gaussian() {
        let sigma = 1.5;
        let r = 5isize;
        let n = 21;
        let c = 10;
        let mut pixels = vec![0.0; n * n];
        pixels[c * n + c] = 1.0;
        let img = GrayImage::new(n, n, pixels).unwrap();
        let out = gaussian_blur(&img, sigma).unwrap();
        let g1 = |x: isize| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp();
        let z: f64 = (-r..=r).map(g1).sum();
        for y in 0..n as isize {
            for x in 0..n as isize {
                let (dx, dy) = (x - c as isize, y - c as isize);
                let want = if dx.abs() <= r && dy.abs() <= r {
                    g1(dx) * g1(dy) / (z * z)
                } else {
                    0.0
                };
                assert!((out.get(x as usize, y as usize) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reflection_indices() {
        assert_eq!(reflect(-1, 4), 0);
        assert_eq!(reflect(-2, 4), 1);
        assert_eq!(reflect(4, 4), 3);
        assert_eq!(reflect(5, 4), 2);
        assert_eq!(reflect(9, 4), 1);
    }

    #[test]
    fn pgm_roundtrip_both_encodings() {
        let img = GrayImage::from_fn(4, 3, |x, y| ((x + 4 * y) * 20) as f64 / 255.0).unwrap();
        for fmt in [PgmFormat::Ascii, PgmFormat::Binary] {
            let bytes = write_pgm(&img, fmt);
            let back = read_pgm(&bytes).unwrap();
            assert_eq!(back.width(), 4);
            for (a, b) in back.pixels().iter().zip(img.pixels()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pgm_with_comments_and_errors() {
        let img = read_pgm(b"P2\n# comment\n2 1\n# more\n255\n0 255\n").unwrap();
        assert_eq!(img.pixels(), &[0.0, 1.0]);
        assert!(read_pgm(b"P3\n1 1\n255\n0\n").is_err());
        assert!(read_pgm(b"P2\n2 1\n255\n0\n").is_err());
        assert!(read_pgm(b"P2\n1 1\n100\n101\n").is_err());
        assert!(read_pgm(b"P5\n2 2\n255\n\x00").is_err());
    }

    #[test]
    fn tikhonov_parameter_checks() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        assert!(tikhonov_denoise(&g, &[1.0, 0.0], 0.0, TikhonovMode::ConjugateGradient).is_err());
        assert!(tikhonov_denoise(&g, &[1.0], 1.0, TikhonovMode::ConjugateGradient).is_err());
    }

    #[test]
    fn edge_mask_marks_boundaries() {
        let img = GrayImage::from_fn(6, 1, |x, _| if x < 3 { 0.0 } else { 1.0 }).unwrap();
        let m = edge_neighborhood(&img, 1);
        assert_eq!(m, vec![false, true, true, true, true, false]);
    }
}
