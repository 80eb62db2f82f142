mod common;

use proptest::prelude::*;

use percothresh_core::nbt::build_b;
use percothresh_core::spectral::{
    dag_check, dense_eigenvalues, power_spectral_radius, spectral_radius_of_b2_via_m, KrylovOptions, DEFAULT_DENSE_CAP,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use percothresh_core::thresholds::{spectral_radius, EstimateOptions, FastRoute};
use percothresh_core::{triangles_per_edge, Graph};

fn radius(g: &Graph, order: usize) -> f64 {
    let opts = EstimateOptions { fast: FastRoute::Off, ..EstimateOptions::default() };
    let r = spectral_radius(g, order, &opts).unwrap();
    assert!(r.converged, "{r:?}");
    r.radius
}

fn dense_radius(g: &Graph, order: usize) -> f64 {
    let b = build_b(g, order).unwrap().op;
    dense_eigenvalues(&b, DEFAULT_DENSE_CAP).unwrap().first().map(|z| z.norm()).unwrap_or(0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn radii_decrease_with_order(g in common::sparse_graph(4, 20, 0.25)) {
        let r: Vec<f64> = (0..4).map(|k| radius(&g, k)).collect();
        for w in r.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-8, "{r:?}");
        }
    }

    #[test]
    fn nilpotent_past_longest_cycle(g in common::graph(3, 9)) {
        let l = common::longest_cycle(&g);
        for order in 0..=5usize {
            let b = build_b(&g, order).unwrap().op;
            if l == 0 || order + 1 >= l {
                if order >= 1 {
                    prop_assert!(dag_check(&b), "order {} longest cycle {}", order, l);
                    prop_assert_eq!(radius(&g, order), 0.0);
                }
            } else {
                prop_assert!(!dag_check(&b));
                prop_assert!(radius(&g, order) >= 1.0 - 1e-8);
            }
        }
    }

    #[test]
    fn triangle_free_orders_one_and_two_agree(g in common::sparse_graph(4, 24, 0.2)) {
        prop_assume!(triangles_per_edge(&g).undirected_sum() == 0);
        let (r1, r2) = (radius(&g, 1), radius(&g, 2));
        prop_assert!((r1 - r2).abs() <= 1e-8, "{} vs {}", r1, r2);
    }

    #[test]
    fn power_matches_dense(g in common::sparse_graph(3, 14, 0.35), order in 0usize..=2) {
        let b = build_b(&g, order).unwrap().op;
        prop_assume!(!dag_check(&b));
        let p = power_spectral_radius(&b, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        prop_assert!(p.converged);
        let d = dense_radius(&g, order);
        prop_assert!((p.radius - d).abs() <= 1e-8 * d.max(1.0), "power {} dense {}", p.radius, d);
    }

    #[test]
    fn reduced_route_matches_explicit(g in common::sparse_graph(5, 16, 0.4)) {
        let m = spectral_radius_of_b2_via_m(&g, &KrylovOptions::default()).unwrap();
        prop_assert!(m.converged);
        let e = radius(&g, 2);
        prop_assert!((m.radius - e).abs() <= 1e-6 * e.max(1.0), "{:?} vs {}", m, e);
    }
}

#[test]
fn dense_spectrum_of_ring() {
    // C_6 adjacency: 2 cos(2 pi k / 6)
    let g = percothresh_core::generators::ring(6).unwrap();
    let ev = dense_eigenvalues(&build_b(&g, 0).unwrap().op, 100).unwrap();
    let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let want = [-2.0, -1.0, -1.0, 1.0, 1.0, 2.0];
    for (a, b) in re.iter().zip(want) {
        assert!((a - b).abs() < 1e-9, "{re:?}");
    }
    assert!(ev.iter().all(|z| z.im.abs() < 1e-9));
}
