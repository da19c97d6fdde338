//! Spectral kernels: real functions of a Laplacian eigenvalue.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Slack allowed below 0 and beyond table ends, to absorb eigenvalues such
/// as `-1e-16` produced by round-off.
const DOMAIN_SLACK: f64 = 1e-10;

/// A transfer function `g(lambda)` on `[0, inf)`.
#[derive(Clone)]
pub enum SpectralKernel {
    Constant(f64),
    /// `exp(-tau * lambda)`.
    Heat { tau: f64 },
    /// `1 / (1 + gamma * lambda)`.
    Tikhonov { gamma: f64 },
    /// `sum_k a_k lambda^k`, coefficients stored from degree 0.
    Polynomial(Vec<f64>),
    /// Band-pass `lambda * exp(-lambda)`.
    BandPass,
    /// Low-pass `exp(-lambda^4)`.
    LowPass,
    /// Piecewise-linear interpolation of `(lambda, value)` samples; no
    /// extrapolation.
    Table { lambdas: Vec<f64>, values: Vec<f64> },
    /// `inner(scale * lambda)`.
    Dilated {
        inner: Box<SpectralKernel>,
        scale: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for SpectralKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Heat { tau } => write!(f, "Heat {{ tau: {tau} }}"),
            Self::Tikhonov { gamma } => write!(f, "Tikhonov {{ gamma: {gamma} }}"),
            Self::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            Self::BandPass => f.write_str("BandPass"),
            Self::LowPass => f.write_str("LowPass"),
            Self::Table { lambdas, .. } => write!(f, "Table({} samples)", lambdas.len()),
            Self::Dilated { inner, scale } => write!(f, "Dilated({inner:?}, {scale})"),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl SpectralKernel {
    pub fn table(lambdas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if lambdas.len() < 2 || lambdas.len() != values.len() {
            return Err(Error::param(
                "table kernel needs at least two samples and matching lengths",
            ));
        }
        if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::param("table abscissae must be strictly increasing"));
        }
        if lambdas.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(Error::param("table entries must be finite"));
        }
        Ok(Self::Table { lambdas, values })
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::Custom(Arc::new(f))
    }

    /// Evaluates the kernel, failing outside its domain or on a non-finite
    /// result.
    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if lambda < -DOMAIN_SLACK || lambda.is_nan() {
            return Err(Error::Domain {
                lambda,
                reason: "negative argument".into(),
            });
        }
        let v = match self {
            Self::Constant(c) => *c,
            Self::Heat { tau } => (-tau * lambda).exp(),
            Self::Tikhonov { gamma } => 1.0 / (1.0 + gamma * lambda),
            Self::Polynomial(coeffs) => coeffs.iter().rev().fold(0.0, |acc, a| acc * lambda + a),
            Self::BandPass => lambda * (-lambda).exp(),
            Self::LowPass => (-lambda.powi(4)).exp(),
            Self::Table { lambdas, values } => interpolate(lambdas, values, lambda)?,
            Self::Dilated { inner, scale } => inner.eval(scale * lambda)?,
            Self::Custom(f) => f(lambda),
        };
        if !v.is_finite() {
            return Err(Error::Domain {
                lambda,
                reason: format!("kernel value {v} is not finite"),
            });
        }
        Ok(v)
    }

    /// Evaluates at every eigenvalue.
    pub fn eval_all(&self, lambdas: &[f64]) -> Result<Vec<f64>> {
        lambdas.iter().map(|&l| self.eval(l)).collect()
    }

    /// Largest argument the kernel accepts, `inf` for closed forms.
    pub fn domain_end(&self) -> f64 {
        match self {
            Self::Table { lambdas, .. } => lambdas[lambdas.len() - 1],
            Self::Dilated { inner, scale } => inner.domain_end() / scale,
            _ => f64::INFINITY,
        }
    }

    /// Dilation `lambda -> g(s lambda)`. Nested dilations collapse into one
    /// and heat kernels absorb the scale into `tau`.
    pub fn dilate(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::param(format!("dilation scale must be positive, got {s}")));
        }
        Ok(match self {
            Self::Heat { tau } => Self::Heat { tau: tau * s },
            Self::Dilated { inner, scale } => Self::Dilated {
                inner: inner.clone(),
                scale: scale * s,
            },
            other => Self::Dilated {
                inner: Box::new(other.clone()),
                scale: s,
            },
        })
    }

    /// Like [`dilate`](Self::dilate), but also requires the result to be
    /// defined on `[0, lambda_max]`.
    pub fn dilate_covering(&self, s: f64, lambda_max: f64) -> Result<Self> {
        let d = self.dilate(s)?;
        d.check_covers(lambda_max)?;
        Ok(d)
    }

    pub fn check_covers(&self, lambda_max: f64) -> Result<()> {
        let end = self.domain_end();
        if end + DOMAIN_SLACK < lambda_max {
            return Err(Error::Domain {
                lambda: lambda_max,
                reason: format!("kernel only defined up to {end}"),
            });
        }
        Ok(())
    }

    /// Degree for polynomial kernels.
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            Self::Polynomial(c) => Some(c.len().saturating_sub(1)),
            _ => None,
        }
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Result<f64> {
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    if x < lo - DOMAIN_SLACK || x > hi + DOMAIN_SLACK {
        return Err(Error::Domain {
            lambda: x,
            reason: format!("outside table range [{lo}, {hi}]"),
        });
    }
    let x = x.clamp(lo, hi);
    let k = match xs.binary_search_by(|p| p.total_cmp(&x)) {
        Ok(k) => return Ok(ys[k]),
        Err(k) => k,
    };
    let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    Ok(ys[k - 1] + t * (ys[k] - ys[k - 1]))
}
