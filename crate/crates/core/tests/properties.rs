mod common;

use std::collections::BTreeMap;

use common::*;
use graphsig::denoise::{tikhonov_denoise, TikhonovMode};
use graphsig::operators::{filter_exact, heat_diffuse, ChebyshevFilter};
use graphsig::spectral::{dirichlet_form, lambda_max_bound, quadratic_form};
use graphsig::{Graph, LaplacianVariant, SpectralKernel, Spectrum};
use proptest::prelude::*;

/// Connected weighted graph on 2..=max_n vertices: a random tree plus
/// random extra edges.
fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let tree = prop::collection::vec((any::<prop::sample::Index>(), 0.1f64..3.0), n - 1);
        let extra = prop::collection::vec((0..n, 0..n, 0.1f64..3.0), 0..2 * n);
        (Just(n), tree, extra).prop_map(|(n, tree, extra)| {
            let mut edges = BTreeMap::new();
            for (v, (parent, w)) in tree.into_iter().enumerate() {
                let v = v + 1;
                edges.insert((parent.index(v), v), w);
            }
            for (i, j, w) in extra {
                if i != j {
                    edges.entry((i.min(j), i.max(j))).or_insert(w);
                }
            }
            Graph::from_edges(n, edges.into_iter().map(|((i, j), w)| (i, j, w))).unwrap()
        })
    })
}

fn arb_graph_and_signal(max_n: usize) -> impl Strategy<Value = (Graph, Vec<f64>)> {
    arb_connected(max_n).prop_flat_map(|g| {
        let n = g.num_vertices();
        (Just(g), prop::collection::vec(-5.0f64..5.0, n))
    })
}

fn arb_variant() -> impl Strategy<Value = LaplacianVariant> {
    prop_oneof![
        Just(LaplacianVariant::Combinatorial),
        Just(LaplacianVariant::Normalized)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_with_exact_degrees(g in arb_connected(30)) {
        let n = g.num_vertices();
        for i in 0..n {
            prop_assert_eq!(g.weight(i, i), 0.0);
            let mut row = 0.0;
            for (j, w) in g.neighbors(i) {
                prop_assert_eq!(g.weight(j, i), w);
                row += w;
            }
            prop_assert_eq!(g.degree(i), row);
        }
    }

    #[test]
    fn laplacian_row_laws(g in arb_connected(30)) {
        let n = g.num_vertices();
        let ones = vec![1.0; n];
        let l = g.laplacian(LaplacianVariant::Combinatorial).unwrap();
        for x in l.mul_vec(&ones).unwrap() {
            prop_assert!(x.abs() <= 1e-12);
        }
        let p = g.laplacian(LaplacianVariant::RandomWalk).unwrap();
        for x in p.mul_vec(&ones).unwrap() {
            prop_assert!((x - 1.0).abs() <= 1e-12);
        }
        prop_assert!(g.laplacian(LaplacianVariant::Normalized).unwrap().is_symmetric());
    }

    #[test]
    fn parseval_and_roundtrip((g, f) in arb_graph_and_signal(25), variant in arb_variant()) {
        let s = Spectrum::compute(&g, variant).unwrap();
        let fhat = s.gft(&f).unwrap();
        prop_assert!((norm(&fhat) - norm(&f)).abs() <= 1e-10 * norm(&f).max(1.0));
        prop_assert!(max_abs_diff(&s.igft(&fhat).unwrap(), &f) <= 1e-10);
        prop_assert!(max_abs_diff(&s.gft(&s.igft(&f).unwrap()).unwrap(), &f) <= 1e-10);
    }

    #[test]
    fn smoothness_three_ways((g, f) in arb_graph_and_signal(25)) {
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let by_form = quadratic_form(&g, &f).unwrap();
        let by_edges: f64 = g.edges().map(|(i, j, w)| w * (f[j] - f[i]).powi(2)).sum();
        let by_spectrum: f64 = s
            .gft(&f)
            .unwrap()
            .iter()
            .zip(s.eigenvalues())
            .map(|(c, l)| l * c * c)
            .sum();
        let by_dirichlet = dirichlet_form(&g, &f, 2.0).unwrap();
        let scale = by_edges.max(1.0);
        prop_assert!((by_form - by_edges).abs() <= 1e-10 * scale);
        prop_assert!((by_spectrum - by_edges).abs() <= 1e-10 * scale);
        prop_assert!((by_dirichlet - by_edges).abs() <= 1e-10 * scale);
    }

    #[test]
    fn normalized_spectrum_in_unit_interval(g in arb_connected(40)) {
        let s = Spectrum::compute(&g, LaplacianVariant::Normalized).unwrap();
        for &l in s.eigenvalues() {
            prop_assert!((-1e-10..=2.0 + 1e-10).contains(&l));
        }
    }

    #[test]
    fn asymmetric_laplacian_shares_normalized_spectrum(g in arb_connected(25)) {
        let s = Spectrum::compute(&g, LaplacianVariant::Normalized).unwrap();
        let la = g.laplacian(LaplacianVariant::Asymmetric).unwrap();
        for l in 0..s.len() {
            let v: Vec<f64> = s
                .eigenvector(l)
                .iter()
                .zip(g.degrees())
                .map(|(u, d)| u / d.sqrt())
                .collect();
            let lv = la.mul_vec(&v).unwrap();
            let lambda = s.eigenvalues()[l];
            let r: Vec<f64> = lv.iter().zip(&v).map(|(a, b)| a - lambda * b).collect();
            prop_assert!(norm(&r) <= 1e-8);
        }
    }

    #[test]
    fn combinatorial_lambda_bound_dominates(g in arb_connected(40)) {
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        prop_assert!(lambda_max_bound(&g) >= s.lambda_max() - 1e-12);
    }

    #[test]
    fn heat_semigroup_and_mass(
        (g, f) in arb_graph_and_signal(25),
        t1 in 0.0f64..2.0,
        t2 in 0.0f64..2.0,
    ) {
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let once = heat_diffuse(&s, &f, t1 + t2).unwrap();
        let twice = heat_diffuse(&s, &heat_diffuse(&s, &f, t1).unwrap(), t2).unwrap();
        prop_assert!(max_abs_diff(&once, &twice) <= 1e-8);
        let m0: f64 = f.iter().sum();
        let m1: f64 = once.iter().sum();
        prop_assert!((m0 - m1).abs() <= 1e-10 * m0.abs().max(1.0) * g.num_vertices() as f64);
    }

    #[test]
    fn tikhonov_modes_agree_and_smooth((g, y) in arb_graph_and_signal(30), gamma in 0.01f64..50.0) {
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let a = tikhonov_denoise(&g, &y, gamma, TikhonovMode::Spectral(&s)).unwrap();
        let b = tikhonov_denoise(&g, &y, gamma, TikhonovMode::ConjugateGradient).unwrap();
        prop_assert!(max_abs_diff(&a, &b) <= 1e-8);
        prop_assert!(quadratic_form(&g, &a).unwrap() <= quadratic_form(&g, &y).unwrap() + 1e-12);
    }

    #[test]
    fn tikhonov_distance_grows_with_gamma((g, y) in arb_graph_and_signal(20)) {
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let mut last = 0.0;
        for gamma in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0] {
            let f = tikhonov_denoise(&g, &y, gamma, TikhonovMode::Spectral(&s)).unwrap();
            let d: Vec<f64> = f.iter().zip(&y).map(|(a, b)| a - b).collect();
            let dist = norm(&d);
            prop_assert!(dist >= last - 1e-12);
            last = dist;
        }
    }

    #[test]
    fn chebyshev_error_within_uniform_bound(
        (g, f) in arb_graph_and_signal(30),
        tau in 0.05f64..2.0,
        order in 3usize..25,
    ) {
        let kernel = SpectralKernel::Heat { tau };
        let bound = lambda_max_bound(&g);
        let filter = ChebyshevFilter::new(&kernel, order, bound).unwrap();
        let samples = 4000;
        let mut uniform: f64 = 0.0;
        for k in 0..=samples {
            let x = bound * k as f64 / samples as f64;
            uniform = uniform.max((filter.eval(x) - kernel.eval(x).unwrap()).abs());
        }
        let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
        let exact = filter_exact(&s, &kernel, &f).unwrap();
        let approx = filter.apply(&g, &f).unwrap();
        // Sampling underestimates the sup slightly; allow a small cushion.
        prop_assert!(max_abs_diff(&exact, &approx) <= 2.0 * (1.05 * uniform + 1e-13) * norm(&f));
    }
}

#[test]
fn chebyshev_error_decreases_with_order() {
    let mut r = rng(11);
    let g = connected_graph(&mut r, 60, 0.08);
    let f = random_signal(&mut r, 60);
    let s = Spectrum::compute(&g, LaplacianVariant::Combinatorial).unwrap();
    let kernel = SpectralKernel::Heat { tau: 0.8 };
    let exact = filter_exact(&s, &kernel, &f).unwrap();
    let errs: Vec<f64> = [5, 10, 20, 40]
        .iter()
        .map(|&k| {
            let approx = ChebyshevFilter::new(&kernel, k, lambda_max_bound(&g))
                .unwrap()
                .apply(&g, &f)
                .unwrap();
            max_abs_diff(&exact, &approx)
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}
