//! Hop-shell (Crovella–Kolaczyk) graph wavelets.
//!
//! The atom at center `i` and scale `k` takes the value
//! `a_{k,tau} / |shell(i, tau)|` on every vertex exactly `tau` hops from `i`
//! (`tau <= k`) and zero beyond. The shell constants `a_{k,tau}` are the
//! averages of a mother wavelet on `[0, 1)` over `[tau/(k+1), (tau+1)/(k+1)]`,
//! shifted to sum to zero.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{AtomKind, WaveletAtomSet};

/// Mother wavelet on `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MotherWavelet {
    /// Radial Mexican hat `(1 - u^2) exp(-u^2 / 2)`, `u = 5x`: peak at the
    /// center vertex, negative ring further out.
    #[default]
    MexicanHat,
    /// Mexican hat centred at `x = 1/2`, `u = 10x - 5`.
    CenteredMexicanHat,
}

impl MotherWavelet {
    /// `u = slope * x + offset`.
    fn affine(self) -> (f64, f64) {
        match self {
            MotherWavelet::MexicanHat => (5.0, 0.0),
            MotherWavelet::CenteredMexicanHat => (10.0, -5.0),
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        let (a, b) = self.affine();
        let u = a * x + b;
        (1.0 - u * u) * (-u * u / 2.0).exp()
    }

    /// Mean over `[x0, x1]`, from the antiderivative `u exp(-u^2 / 2)` of
    /// `(1 - u^2) exp(-u^2 / 2)`.
    pub fn interval_average(self, x0: f64, x1: f64) -> f64 {
        let (a, b) = self.affine();
        let anti = |u: f64| u * (-u * u / 2.0).exp();
        (anti(a * x1 + b) - anti(a * x0 + b)) / (a * (x1 - x0))
    }
}

/// Shell constants `a_{k,0} .. a_{k,k}`, mean-shifted to sum to zero.
pub fn ckwt_shell_constants(k: usize, mother: MotherWavelet) -> Result<Vec<f64>> {
    if k < 1 {
        return Err(Error::param("CKWT scale must be at least 1"));
    }
    let width = 1.0 / (k + 1) as f64;
    let raw: Vec<f64> = (0..=k)
        .map(|tau| mother.interval_average(tau as f64 * width, (tau + 1) as f64 * width))
        .collect();
    Ok(recenter(&raw))
}

fn recenter(a: &[f64]) -> Vec<f64> {
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    a.iter().map(|x| x - mean).collect()
}

/// Atoms for every center at scale `k`, using hop distances on the
/// unweighted skeleton of `g`.
///
/// When a shell `tau <= k` is empty around a center (the center's
/// eccentricity is below `k`), the constants of the non-empty shells are
/// re-centred to keep the atom zero-sum and the center is flagged.
pub fn ckwt_atoms(g: &Graph, k: usize, mother: MotherWavelet) -> Result<WaveletAtomSet> {
    let components = g.connected_components().len();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let constants = ckwt_shell_constants(k, mother)?;
    let n = g.num_vertices();
    let columns: Vec<(Vec<f64>, bool)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let dist = g.hop_distances(i);
            let mut shell_size = vec![0usize; k + 1];
            for &d in &dist {
                if d <= k {
                    shell_size[d] += 1;
                }
            }
            let nonempty: Vec<usize> = (0..=k).filter(|&t| shell_size[t] > 0).collect();
            let flagged = nonempty.len() < k + 1;
            let mut a = vec![0.0; k + 1];
            if flagged {
                let kept: Vec<f64> = nonempty.iter().map(|&t| constants[t]).collect();
                for (&t, v) in nonempty.iter().zip(recenter(&kept)) {
                    a[t] = v;
                }
            } else {
                a.copy_from_slice(&constants);
            }
            let atom = dist
                .iter()
                .map(|&d| if d <= k { a[d] / shell_size[d] as f64 } else { 0.0 })
                .collect();
            (atom, flagged)
        })
        .collect();
    let mut atoms = DMatrix::zeros(n, n);
    let mut flagged = Vec::new();
    for (i, (atom, flag)) in columns.into_iter().enumerate() {
        atoms.set_column(i, &nalgebra::DVector::from_vec(atom));
        if flag {
            flagged.push(i);
        }
    }
    Ok(WaveletAtomSet::with_flags(AtomKind::Ckwt { scale: k }, atoms, flagged))
}

/// CKWT coefficients `<f, psi_{k,i}>` for every center `i`.
pub fn ckwt_coefficients(
    g: &Graph,
    f: &[f64],
    k: usize,
    mother: MotherWavelet,
) -> Result<Vec<f64>> {
    ckwt_atoms(g, k, mother)?.coefficients(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrature_average(m: MotherWavelet, x0: f64, x1: f64, samples: usize) -> f64 {
        // Composite Simpson's rule.
        let h = (x1 - x0) / samples as f64;
        let mut s = m.eval(x0) + m.eval(x1);
        for j in 1..samples {
            let w = if j % 2 == 1 { 4.0 } else { 2.0 };
            s += w * m.eval(x0 + j as f64 * h);
        }
        s * h / 3.0 / (x1 - x0)
    }

    #[test]
    fn closed_form_average_matches_quadrature() {
        for m in [MotherWavelet::MexicanHat, MotherWavelet::CenteredMexicanHat] {
            for k in [1usize, 2, 5, 10] {
                let w = 1.0 / (k + 1) as f64;
                for tau in 0..=k {
                    let x0 = tau as f64 * w;
                    let closed = m.interval_average(x0, x0 + w);
                    let quad = quadrature_average(m, x0, x0 + w, 2048);
                    assert!((closed - quad).abs() < 1e-10, "{m:?} k={k} tau={tau}");
                }
            }
        }
    }

    #[test]
    fn shell_constants_sum_to_zero() {
        for k in 1..=10 {
            let a = ckwt_shell_constants(k, MotherWavelet::MexicanHat).unwrap();
            assert_eq!(a.len(), k + 1);
            assert!(a.iter().sum::<f64>().abs() < 1e-14);
            assert!(a[0] > 0.0);
        }
        assert!(ckwt_shell_constants(0, MotherWavelet::MexicanHat).is_err());
    }

    #[test]
    fn star_graph_values() {
        let g = Graph::from_edges(6, (1..6).map(|j| (0, j, 1.0))).unwrap();
        let a = ckwt_shell_constants(1, MotherWavelet::MexicanHat).unwrap();
        let set = ckwt_atoms(&g, 1, MotherWavelet::MexicanHat).unwrap();
        let atom = set.atom(0);
        assert_eq!(atom[0], a[0]);
        for &v in &atom[1..] {
            assert_eq!(v, a[1] / 5.0);
        }
        assert!(set.flagged_centers().is_empty());
    }

    #[test]
    fn empty_shells_are_flagged_and_recentred() {
        // Path 0-1-2: center 1 has eccentricity 1, so at k=2 shell 2 is empty.
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let set = ckwt_atoms(&g, 2, MotherWavelet::MexicanHat).unwrap();
        assert_eq!(set.flagged_centers(), &[1]);
        for i in 0..3 {
            assert!(set.atom(i).iter().sum::<f64>().abs() < 1e-14);
        }
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(
            ckwt_atoms(&g, 1, MotherWavelet::MexicanHat),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn constant_signal_has_zero_coefficients() {
        let g = Graph::from_edges(5, (0..4).map(|i| (i, i + 1, 1.0))).unwrap();
        let c = ckwt_coefficients(&g, &[2.0; 5], 2, MotherWavelet::MexicanHat).unwrap();
        for x in c {
            assert!(x.abs() < 1e-12);
        }
    }
}
