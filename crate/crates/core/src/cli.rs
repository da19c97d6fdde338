//! `graphsig` command-line front end.
//!
//! Exit codes: 0 on success, 1 on invalid input or arguments, 2 on numeric
//! failure. Outputs are written atomically (temporary file + rename); when
//! `--output` is omitted they go to standard output. The environment
//! variable `GRAPHSIG_THREADS` caps internal parallelism (0 or unset: one
//! thread per core).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::denoise::{self, GrayImage, PgmFormat};
use crate::error::{Error, Result};
use crate::graph::{self, Graph, KnnWeights, LaplacianVariant};
use crate::io::{self as gio, format_g};
use crate::kernel::SpectralKernel;
use crate::operators::{self, ChebyshevFilter, DEFAULT_CHEBYSHEV_ORDER};
use crate::spectral::{lambda_max_bound, EigenOptions, Spectrum};
use crate::wavelets::{
    self, ckwt::MotherWavelet, sgwt::SgwtConfig, spread::SpectralSpreadMode, SpreadBenchConfig,
};

const FORMATS: &str = "File formats:
  edge list    first line 'N M', then M lines 'i j w' (0-based vertices, decimal weight)
  point cloud  first line 'N D', then N rows of D floats
  signal       one decimal float per line, N lines
All numbers are written with %.12g; CSV files carry a header row.";

/// Validated configuration of one `graphsig` invocation.
#[derive(Debug, Parser)]
#[command(name = "graphsig", version, about = "Signal processing on weighted graphs", after_help = FORMATS)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph from a point cloud (Gaussian kernel or k-NN) and write an edge list.
    #[command(after_help = FORMATS)]
    BuildGraph(BuildGraphArgs),
    /// Eigendecompose a Laplacian; writes CSV 'ell,lambda' (eigenvalues in Laplacian units).
    #[command(after_help = FORMATS)]
    Spectrum(SpectrumArgs),
    /// Graph Fourier transform (or its inverse) of a signal file.
    #[command(after_help = FORMATS)]
    Gft(GftArgs),
    /// Filter a signal with a spectral kernel, exactly or by Chebyshev approximation.
    #[command(after_help = FORMATS)]
    Filter(FilterArgs),
    /// Translate a spectral kernel to a vertex: sqrt(N) * k(L) delta_n.
    #[command(after_help = FORMATS)]
    Translate(TranslateArgs),
    /// Heat diffusion exp(-tau L) f; tau is in units of 1/eigenvalue.
    #[command(after_help = FORMATS)]
    Heat(HeatArgs),
    /// Tikhonov graph denoising of a PGM image; prints a CSV 'method,mse,psnr' report.
    Denoise(DenoiseArgs),
    /// Spectral graph wavelet coefficients; writes CSV 'scale,center,value'.
    #[command(after_help = FORMATS)]
    Sgwt(SgwtArgs),
    /// Hop-shell graph wavelet coefficients; writes CSV 'scale,center,value'.
    #[command(after_help = FORMATS)]
    Ckwt(CkwtArgs),
    /// Spatial/spectral spreads of CKWT and SGWT on random regular graphs;
    /// writes CSV 'scale,kind,spatial,spectral' (spatial in hops^2, spectral in eigenvalue units).
    SpreadBench(SpreadBenchArgs),
    /// Split vertices by the sign of the top Laplacian eigenvector; writes CSV 'vertex,set'.
    #[command(after_help = FORMATS)]
    Downsample(DownsampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Combinatorial,
    Normalized,
}

impl From<VariantArg> for LaplacianVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Combinatorial => LaplacianVariant::Combinatorial,
            VariantArg::Normalized => LaplacianVariant::Normalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Chebyshev,
}

#[derive(Debug, Args)]
pub struct BuildGraphArgs {
    /// Point-cloud file.
    #[arg(long)]
    pub points: PathBuf,
    /// Gaussian kernel width (distance units). Required unless --knn is given.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Distance threshold; 0 keeps every pair.
    #[arg(long, default_value_t = 0.0)]
    pub kappa: f64,
    /// Connect each point to its k nearest neighbours (union-symmetrised).
    /// Weights are Gaussian when --theta is given, else 1.
    #[arg(long)]
    pub knn: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Edge-list file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = VariantArg::Combinatorial)]
    pub variant: VariantArg,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Decompose disconnected graphs instead of failing.
    #[arg(long)]
    pub allow_disconnected: bool,
    /// Also write the dense eigenvector matrix (row i = vertex i) here.
    #[arg(long)]
    pub dump_u: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GftArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Signal file (spectral coefficients when --inverse).
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long)]
    pub inverse: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Spectral kernel selection.
#[derive(Debug, Clone, Args)]
pub struct KernelSpec {
    /// heat (exp(-tau l)), tikhonov (1/(1+gamma l)), polynomial, bandpass
    /// (l exp(-l)), lowpass (exp(-l^4)), constant, table.
    #[arg(long, default_value = "heat")]
    pub kernel: String,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Polynomial coefficients a0,a1,... (ascending degree).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub coeffs: Vec<f64>,
    /// Value of the constant kernel.
    #[arg(long)]
    pub value: Option<f64>,
    /// Table kernel file: lines 'lambda value', ascending lambda.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Dilate the kernel: l -> k(s l).
    #[arg(long)]
    pub dilate: Option<f64>,
}

impl KernelSpec {
    pub fn build(&self) -> Result<SpectralKernel> {
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| Error::param(format!("kernel '{}' needs --{flag}", self.kernel)))
        };
        let k = match self.kernel.as_str() {
            "heat" => SpectralKernel::Heat {
                tau: need(self.tau, "tau")?,
            },
            "tikhonov" => {
                let gamma = need(self.gamma, "gamma")?;
                if !(gamma > 0.0) {
                    return Err(Error::param("gamma must be positive"));
                }
                SpectralKernel::Tikhonov { gamma }
            }
            "polynomial" => {
                if self.coeffs.is_empty() {
                    return Err(Error::param("kernel 'polynomial' needs --coeffs"));
                }
                SpectralKernel::Polynomial(self.coeffs.clone())
            }
            "bandpass" => SpectralKernel::BandPass,
            "lowpass" => SpectralKernel::LowPass,
            "constant" => SpectralKernel::Constant(need(self.value, "value")?),
            "table" => {
                let path = self
                    .table
                    .as_ref()
                    .ok_or_else(|| Error::param("kernel 'table' needs --table"))?;
                let text = fs::read_to_string(path)?;
                let mut xs = Vec::new();
                let mut ys = Vec::new();
                for (line, l) in text.lines().enumerate() {
                    let l = l.trim();
                    if l.is_empty() || l.starts_with('#') {
                        continue;
                    }
                    let mut it = l.split_whitespace().map(str::parse::<f64>);
                    match (it.next(), it.next()) {
                        (Some(Ok(x)), Some(Ok(y))) => {
                            xs.push(x);
                            ys.push(y);
                        }
                        _ => {
                            return Err(Error::Parse {
                                line: line + 1,
                                message: "expected 'lambda value'".into(),
                            })
                        }
                    }
                }
                SpectralKernel::table(xs, ys)?
            }
            other => return Err(Error::param(format!("unknown kernel '{other}'"))),
        };
        match self.dilate {
            Some(s) => k.dilate(s),
            None => Ok(k),
        }
    }
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub signal: PathBuf,
    #[command(flatten)]
    pub kernel: KernelSpec,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Chebyshev polynomial order.
    #[arg(long, default_value_t = DEFAULT_CHEBYSHEV_ORDER)]
    pub order: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TranslateArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    pub kernel: KernelSpec,
    /// Target vertex (0-based).
    #[arg(long)]
    pub vertex: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HeatArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub signal: PathBuf,
    /// Diffusion time (>= 0).
    #[arg(long)]
    pub tau: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_CHEBYSHEV_ORDER)]
    pub order: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineArg {
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PgmArg {
    Ascii,
    Binary,
}

#[derive(Debug, Args)]
pub struct DenoiseArgs {
    /// Noisy PGM image (P2 or P5); pixels map to v / maxval.
    #[arg(long)]
    pub input: PathBuf,
    /// Regularisation weight.
    #[arg(long, default_value_t = 10.0)]
    pub gamma: f64,
    /// Gaussian kernel width for intensity differences (intensity units in [0, 1]).
    #[arg(long, default_value_t = 0.1)]
    pub theta: f64,
    /// Denoised PGM output.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = PgmArg::Binary)]
    pub format: PgmArg,
    /// Also run a comparison baseline.
    #[arg(long, value_enum)]
    pub baseline: Option<BaselineArg>,
    /// Baseline Gaussian standard deviation in pixels.
    #[arg(long, default_value_t = 1.5)]
    pub sigma: f64,
    /// Where to write the baseline image.
    #[arg(long)]
    pub baseline_output: Option<PathBuf>,
    /// Clean reference image for the metrics (defaults to the input).
    #[arg(long)]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SgwtArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub signal: PathBuf,
    /// Number of log-spaced wavelet scales.
    #[arg(long, default_value_t = 5)]
    pub scales: usize,
    /// Explicit wavelet scales (overrides --scales).
    #[arg(long, value_delimiter = ',')]
    pub scale_values: Vec<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 50)]
    pub order: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MotherArg {
    MexicanHat,
    CenteredMexicanHat,
}

impl From<MotherArg> for MotherWavelet {
    fn from(m: MotherArg) -> Self {
        match m {
            MotherArg::MexicanHat => MotherWavelet::MexicanHat,
            MotherArg::CenteredMexicanHat => MotherWavelet::CenteredMexicanHat,
        }
    }
}

#[derive(Debug, Args)]
pub struct CkwtArgs {
    /// Edge-list file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub signal: PathBuf,
    /// Scales 1..=max-scale (hops).
    #[arg(long, default_value_t = 10)]
    pub max_scale: usize,
    #[arg(long, value_enum, default_value_t = MotherArg::MexicanHat)]
    pub mother: MotherArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpreadModeArg {
    Optimal,
    Zero,
}

#[derive(Debug, Args)]
pub struct SpreadBenchArgs {
    #[arg(long, default_value_t = 300)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub d: usize,
    #[arg(long, default_value_t = 5)]
    pub instances: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// CKWT scales 1..=max-ckwt-scale.
    #[arg(long, default_value_t = 10)]
    pub max_ckwt_scale: usize,
    #[arg(long, default_value_t = 5)]
    pub sgwt_scales: usize,
    #[arg(long, value_enum, default_value_t = MotherArg::MexicanHat)]
    pub mother: MotherArg,
    /// Spectral mean: optimal (minimised) or fixed at zero.
    #[arg(long, value_enum, default_value_t = SpreadModeArg::Optimal)]
    pub spectral_mode: SpreadModeArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DownsampleArgs {
    /// Edge-list file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = std::env::var("GRAPHSIG_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return 2;
        }
    };
    match pool.install(|| execute(&config.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => gio::write_atomic(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn emit_signal(path: Option<&Path>, f: &[f64]) -> Result<()> {
    let mut buf = Vec::new();
    gio::write_signal(&mut buf, f)?;
    emit(path, &buf)
}

fn load_graph(path: &Path) -> Result<Graph> {
    gio::parse_edge_list(&fs::read_to_string(path)?)
}

fn load_signal(path: &Path, n: usize) -> Result<Vec<f64>> {
    let f = gio::parse_signal(&fs::read_to_string(path)?)?;
    if f.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: f.len(),
        });
    }
    Ok(f)
}

fn load_pgm(path: &Path) -> Result<GrayImage> {
    denoise::read_pgm(&fs::read(path)?)
}

fn chebyshev_filter(
    g: &Graph,
    variant: LaplacianVariant,
    kernel: &SpectralKernel,
    order: usize,
    f: &[f64],
) -> Result<Vec<f64>> {
    match variant {
        LaplacianVariant::Combinatorial => operators::filter_chebyshev(g, kernel, order, f),
        // The normalized spectrum lies in [0, 2].
        _ => ChebyshevFilter::new(kernel, order, 2.0)?.apply(&g.laplacian(variant)?, f),
    }
}

fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::BuildGraph(a) => {
            let points = gio::parse_point_cloud(&fs::read_to_string(&a.points)?)?;
            let g = match (a.knn, a.theta) {
                (Some(k), theta) => {
                    let w = theta.map_or(KnnWeights::Unit, |theta| KnnWeights::Gaussian { theta });
                    graph::build_knn_graph(&points, k, w)?
                }
                (None, Some(theta)) => graph::build_gaussian_graph(&points, theta, a.kappa)?,
                (None, None) => return Err(Error::param("give --theta or --knn")),
            };
            let mut buf = Vec::new();
            gio::write_edge_list(&mut buf, &g)?;
            emit(a.output.as_deref(), &buf)
        }
        Command::Spectrum(a) => {
            let g = load_graph(&a.input.graph)?;
            let opts = EigenOptions {
                allow_disconnected: a.allow_disconnected,
            };
            let s = Spectrum::compute_with(&g, a.input.variant.into(), opts)?;
            if let Some(p) = &a.dump_u {
                let mut buf = Vec::new();
                s.write_eigenvectors(&mut buf)?;
                gio::write_atomic(p, &buf)?;
            }
            let mut buf = Vec::new();
            s.write_csv(&mut buf)?;
            emit(a.output.as_deref(), &buf)
        }
        Command::Gft(a) => {
            let g = load_graph(&a.input.graph)?;
            let f = load_signal(&a.signal, g.num_vertices())?;
            let s = Spectrum::compute(&g, a.input.variant.into())?;
            let out = if a.inverse { s.igft(&f)? } else { s.gft(&f)? };
            emit_signal(a.output.as_deref(), &out)
        }
        Command::Filter(a) => {
            let g = load_graph(&a.input.graph)?;
            let f = load_signal(&a.signal, g.num_vertices())?;
            let kernel = a.kernel.build()?;
            let variant = a.input.variant.into();
            let out = match a.mode {
                ModeArg::Exact => {
                    operators::filter_exact(&Spectrum::compute(&g, variant)?, &kernel, &f)?
                }
                ModeArg::Chebyshev => chebyshev_filter(&g, variant, &kernel, a.order, &f)?,
            };
            emit_signal(a.output.as_deref(), &out)
        }
        Command::Translate(a) => {
            let g = load_graph(&a.input.graph)?;
            let kernel = a.kernel.build()?;
            let s = Spectrum::compute(&g, a.input.variant.into())?;
            let out = operators::translate(&s, &kernel, a.vertex)?;
            emit_signal(a.output.as_deref(), &out)
        }
        Command::Heat(a) => {
            let g = load_graph(&a.input.graph)?;
            let f = load_signal(&a.signal, g.num_vertices())?;
            if !(a.tau >= 0.0) {
                return Err(Error::param(format!("tau must be nonnegative, got {}", a.tau)));
            }
            let variant = a.input.variant.into();
            let out = match a.mode {
                _ if a.tau == 0.0 => f,
                ModeArg::Exact => operators::heat_diffuse(&Spectrum::compute(&g, variant)?, &f, a.tau)?,
                ModeArg::Chebyshev => chebyshev_filter(
                    &g,
                    variant,
                    &SpectralKernel::Heat { tau: a.tau },
                    a.order,
                    &f,
                )?,
            };
            emit_signal(a.output.as_deref(), &out)
        }
        Command::Denoise(a) => run_denoise(a),
        Command::Sgwt(a) => {
            let g = load_graph(&a.input.graph)?;
            let f = load_signal(&a.signal, g.num_vertices())?;
            let variant: LaplacianVariant = a.input.variant.into();
            let coeffs = match a.mode {
                ModeArg::Exact => {
                    let s = Spectrum::compute(&g, variant)?;
                    let cfg = sgwt_config(a, s.lambda_max())?;
                    wavelets::sgwt_transform(&s, &cfg, &f)?
                }
                ModeArg::Chebyshev => {
                    if variant != LaplacianVariant::Combinatorial {
                        return Err(Error::param(
                            "Chebyshev SGWT uses the combinatorial Laplacian",
                        ));
                    }
                    let cfg = sgwt_config(a, lambda_max_bound(&g))?;
                    wavelets::sgwt_transform_chebyshev(&g, &cfg, a.order, &f)?
                }
            };
            let mut buf = b"scale,center,value\n".to_vec();
            for (kind, c) in coeffs.rows() {
                let label = kind.scale_label();
                for (i, v) in c.iter().enumerate() {
                    writeln!(buf, "{label},{i},{}", format_g(*v))?;
                }
            }
            emit(a.output.as_deref(), &buf)
        }
        Command::Ckwt(a) => {
            let g = load_graph(&a.graph)?;
            let f = load_signal(&a.signal, g.num_vertices())?;
            if a.max_scale < 1 {
                return Err(Error::param("--max-scale must be at least 1"));
            }
            let mut buf = b"scale,center,value\n".to_vec();
            for k in 1..=a.max_scale {
                let atoms = wavelets::ckwt_atoms(&g, k, a.mother.into())?;
                if !atoms.flagged_centers().is_empty() {
                    eprintln!(
                        "warning: scale {k}: {} centers have empty hop shells; constants re-centred",
                        atoms.flagged_centers().len()
                    );
                }
                for (i, v) in atoms.coefficients(&f)?.iter().enumerate() {
                    writeln!(buf, "{k},{i},{}", format_g(*v))?;
                }
            }
            emit(a.output.as_deref(), &buf)
        }
        Command::SpreadBench(a) => {
            if a.max_ckwt_scale < 1 {
                return Err(Error::param("--max-ckwt-scale must be at least 1"));
            }
            let cfg = SpreadBenchConfig {
                n: a.n,
                d: a.d,
                instances: a.instances,
                seed: a.seed,
                ckwt_scales: (1..=a.max_ckwt_scale).collect(),
                sgwt_scale_count: a.sgwt_scales,
                mother: a.mother.into(),
                spectral_mode: match a.spectral_mode {
                    SpreadModeArg::Optimal => SpectralSpreadMode::OptimalMean,
                    SpreadModeArg::Zero => SpectralSpreadMode::ZeroMean,
                },
            };
            let report = wavelets::spread_bench(&cfg)?;
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            emit(a.output.as_deref(), &buf)
        }
        Command::Downsample(a) => {
            let g = load_graph(&a.graph)?;
            let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial)?;
            let split = graph::downsample_polarity(&g, &s)?;
            if split.repeated_max {
                eprintln!("warning: largest eigenvalue is repeated; split depends on the eigenbasis");
            }
            if !split.zero_entries.is_empty() {
                eprintln!(
                    "warning: {} vertices have a zero eigenvector entry and were kept",
                    split.zero_entries.len()
                );
            }
            let mut sets = vec![""; g.num_vertices()];
            split.kept.iter().for_each(|&v| sets[v] = "kept");
            split.discarded.iter().for_each(|&v| sets[v] = "discarded");
            let mut buf = b"vertex,set\n".to_vec();
            for (v, s) in sets.iter().enumerate() {
                writeln!(buf, "{v},{s}")?;
            }
            emit(a.output.as_deref(), &buf)
        }
    }
}

fn sgwt_config(a: &SgwtArgs, lambda_max: f64) -> Result<SgwtConfig> {
    let mut cfg = SgwtConfig::with_defaults(lambda_max, a.scales.max(1))?;
    if !a.scale_values.is_empty() {
        cfg.scales = a.scale_values.clone();
    } else if a.scales == 0 {
        return Err(Error::param("--scales must be at least 1"));
    }
    Ok(cfg)
}

fn run_denoise(a: &DenoiseArgs) -> Result<()> {
    let noisy = load_pgm(&a.input)?;
    let reference = match &a.reference {
        Some(p) => load_pgm(p)?,
        None => noisy.clone(),
    };
    let denoised = denoise::denoise_image(&noisy, a.gamma, a.theta)?;
    let format = match a.format {
        PgmArg::Ascii => PgmFormat::Ascii,
        PgmArg::Binary => PgmFormat::Binary,
    };
    gio::write_atomic(&a.output, &denoise::write_pgm(&denoised, format))?;

    let mut report = String::from("method,mse,psnr\n");
    let mut row = |name: &str, img: &GrayImage| -> Result<()> {
        let m = denoise::mse(img, &reference)?;
        report.push_str(&format!("{name},{},{}\n", format_g(m), format_g(-10.0 * m.log10())));
        Ok(())
    };
    if a.reference.is_some() {
        row("input", &noisy)?;
    }
    row("graph", &denoised)?;
    if let Some(BaselineArg::Gaussian) = a.baseline {
        let blurred = denoise::gaussian_blur(&noisy, a.sigma)?.clamped();
        if let Some(p) = &a.baseline_output {
            gio::write_atomic(p, &denoise::write_pgm(&blurred, format))?;
        }
        row("gaussian", &blurred)?;
    }
    print!("{report}");
    Ok(())
}
