mod common;

use common::*;
use graphsig::wavelets::{
    ckwt_atoms, ckwt_shell_constants, random_regular_graph, sgwt_atoms, sgwt_transform, sgwt_transform_chebyshev,
    spatial_spread, spectral_spread, spread_bench, MotherWavelet, SgwtConfig, SpreadBenchConfig,
};
use graphsig::{Error, Graph, LaplacianVariant, SpectralKernel, Spectrum};
use rand::Rng;

#[test]
fn ckwt_atoms_are_zero_sum_shell_constant_and_supported() {
    let mut r = rng(101);
    for _ in 0..20 {
        let n = r.random_range(10..=60);
        let g = connected_graph(&mut r, n, 0.04);
        for k in 1..=10 {
            let atoms = ckwt_atoms(&g, k, MotherWavelet::MexicanHat).unwrap();
            for i in 0..n {
                let atom = atoms.atom(i);
                let dist = g.hop_distances(i);
                assert!(atom.iter().sum::<f64>().abs() <= 1e-10);
                let mut shell_value = vec![None; k + 1];
                for j in 0..n {
                    if dist[j] > k {
                        assert_eq!(atom[j], 0.0, "support leaks at scale {k}");
                    } else {
                        let v = shell_value[dist[j]].get_or_insert(atom[j]);
                        assert_eq!(*v, atom[j], "shell {} not constant", dist[j]);
                    }
                }
            }
        }
    }
}

#[test]
fn ckwt_flags_centers_with_short_eccentricity() {
    let g = path(4);
    let atoms = ckwt_atoms(&g, 5, MotherWavelet::MexicanHat).unwrap();
    assert_eq!(atoms.flagged_centers(), &[0, 1, 2, 3]);
    for i in 0..4 {
        assert!(atoms.atom(i).iter().sum::<f64>().abs() <= 1e-12);
    }
    let disconnected = Graph::from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
    assert!(matches!(
        ckwt_atoms(&disconnected, 1, MotherWavelet::MexicanHat),
        Err(Error::Disconnected { components: 2 })
    ));
}

#[test]
fn ckwt_constants_sum_to_zero_for_both_mothers() {
    for mother in [MotherWavelet::MexicanHat, MotherWavelet::CenteredMexicanHat] {
        for k in 1..=12 {
            let c = ckwt_shell_constants(k, mother).unwrap();
            assert_eq!(c.len(), k + 1);
            assert!(c.iter().sum::<f64>().abs() <= 1e-14);
        }
    }
    // The radial hat peaks at the center.
    let c = ckwt_shell_constants(4, MotherWavelet::MexicanHat).unwrap();
    assert!(c[0] > 0.0 && c.iter().all(|&x| x <= c[0]));
}

#[test]
fn sgwt_wavelets_annihilate_constants() {
    let mut r = rng(7);
    for _ in 0..5 {
        let n = r.random_range(10..60);
        let g = connected_graph(&mut r, n, 0.1);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let cfg = SgwtConfig::with_defaults(s.lambda_max(), 5).unwrap();
        let c = sgwt_transform(&s, &cfg, &vec![2.5; n]).unwrap();
        for row in &c.wavelets {
            assert!(row.iter().all(|x| x.abs() <= 1e-10));
        }
        assert!(c.scaling.iter().all(|x| (x - 2.5).abs() <= 1e-10));
    }
}

#[test]
fn sgwt_atoms_and_filtering_agree() {
    let mut r = rng(9);
    let g = connected_graph(&mut r, 50, 0.08);
    let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
    let cfg = SgwtConfig::with_defaults(s.lambda_max(), 4).unwrap();
    let f = random_signal(&mut r, 50);
    let coeffs = sgwt_transform(&s, &cfg, &f).unwrap();
    let atoms = sgwt_atoms(&s, &cfg).unwrap();
    assert_eq!(atoms.len(), 5);
    for (set, (kind, row)) in atoms.iter().zip(coeffs.rows()) {
        assert_eq!(set.kind(), kind);
        assert!(max_abs_diff(&set.coefficients(&f).unwrap(), row) <= 1e-10);
    }
}

#[test]
fn sgwt_chebyshev_matches_exact_on_regular_graphs() {
    for (n, d, seed) in [(50, 3, 1), (100, 4, 2), (200, 5, 3), (200, 3, 4)] {
        let g = random_regular_graph(n, d, seed).unwrap();
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let cfg = SgwtConfig::with_defaults(s.lambda_max(), 5).unwrap();
        let f = random_signal(&mut rng(seed), n);
        let exact = sgwt_transform(&s, &cfg, &f).unwrap();
        let cheb = sgwt_transform_chebyshev(&g, &cfg, 50, &f).unwrap();
        for ((kind, a), (_, b)) in exact.rows().zip(cheb.rows()) {
            let err = max_abs_diff(a, b);
            assert!(err <= 1e-4, "n = {n}, d = {d}, {kind:?}: error {err:e}");
        }
    }
}

#[test]
fn sgwt_chebyshev_scaling_error_grows_with_the_spectral_bound() {
    // Band-pass rows converge fast; the quartic low-pass has a sharp cutoff
    // near 1 whose approximation degrades as the interval widens.
    let mut r = rng(13);
    let mut worst = Vec::new();
    for p in [0.02, 0.2] {
        let g = connected_graph(&mut r, 80, p);
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let cfg = SgwtConfig::with_defaults(s.lambda_max(), 5).unwrap();
        let f = random_signal(&mut r, 80);
        let exact = sgwt_transform(&s, &cfg, &f).unwrap();
        let cheb = sgwt_transform_chebyshev(&g, &cfg, 50, &f).unwrap();
        for (a, b) in exact.wavelets.iter().zip(&cheb.wavelets) {
            assert!(max_abs_diff(a, b) <= 1e-10);
        }
        worst.push(max_abs_diff(&exact.scaling, &cheb.scaling));
        let hi = sgwt_transform_chebyshev(&g, &cfg, 160, &f).unwrap();
        assert!(max_abs_diff(&exact.scaling, &hi.scaling) <= 1e-4);
    }
    assert!(worst[0] < worst[1], "{worst:?}");
}

#[test]
fn sgwt_rejects_inadmissible_band_pass() {
    let g = cycle(6);
    let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
    let cfg = SgwtConfig {
        lowpass: SpectralKernel::LowPass,
        bandpass: SpectralKernel::Heat { tau: 1.0 },
        scales: vec![1.0],
    };
    assert!(matches!(sgwt_transform(&s, &cfg, &[1.0; 6]), Err(Error::Admissibility(_))));
}

#[test]
fn spreads_of_deltas_and_eigenvectors() {
    let mut r = rng(4);
    let g = connected_graph(&mut r, 20, 0.1);
    let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
    for i in 0..20 {
        let mut d = vec![0.0; 20];
        d[i] = -1.7;
        assert_eq!(spatial_spread(&g, &d).unwrap(), (0.0, i));
    }
    for l in 0..20 {
        assert!(spectral_spread(&s, s.eigenvector(l)).unwrap() <= 1e-12);
    }
}

#[test]
fn spread_bench_is_reproducible() {
    let cfg = SpreadBenchConfig {
        n: 40,
        d: 3,
        instances: 2,
        seed: 99,
        ckwt_scales: vec![1, 2, 3],
        sgwt_scale_count: 3,
        ..SpreadBenchConfig::default()
    };
    let csv = |cfg: &SpreadBenchConfig| {
        let mut out = Vec::new();
        spread_bench(cfg).unwrap().write_csv(&mut out).unwrap();
        String::from_utf8(out).unwrap()
    };
    let a = csv(&cfg);
    assert_eq!(a, csv(&cfg));
    assert_eq!(a.lines().count(), 1 + 3 + 4);
    assert!(a.starts_with("scale,kind,spatial,spectral\n"));
    let other = SpreadBenchConfig { seed: 100, ..cfg };
    assert_ne!(a, csv(&other));
}
