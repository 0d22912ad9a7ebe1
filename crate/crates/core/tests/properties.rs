use std::f64::consts::PI;

use netcurv::direction_analysis::{generic_direction, integrate_mu, mu_of_direction};
use netcurv::double_cover::{
    double_graph, enumerate_pairings, euler_circuit, parameterization_curvature, vertex_matchings,
    EndId, DEFAULT_MAX_VALENCE,
};
use netcurv::graph_model::{graph_to_json, load_graph_str, Point3, SpatialGraph};
use netcurv::random_graphs::{
    random_closed_polygon, random_graph, random_rotation, refine_randomly,
};
use netcurv::refinement::{builtin, inscribe, BUILTIN_NAMES};
use netcurv::vertex_curvature::{net_total_curvature, NcMethod};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact_n(g: &SpatialGraph) -> f64 {
    net_total_curvature(g, NcMethod::Exact).unwrap()
}

/// `(2d - 1)!!`
fn double_factorial_odd(d: usize) -> usize {
    (1..=d).map(|k| 2 * k - 1).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stars_count_loop_ends_twice(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 16, 4);
        for (v, _) in g.vertices().iter().enumerate() {
            let expected: usize = g
                .edges()
                .iter()
                .map(|e| usize::from(e.from == v) + usize::from(e.to == v))
                .sum();
            prop_assert_eq!(g.valence(v), expected);
            let star = g.point_star(v);
            prop_assert_eq!(star.tangents.len(), expected);
        }
    }

    #[test]
    fn rigid_motions_preserve_curvature(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 16, 4);
        let rot = random_rotation(&mut rng);
        let shift = Point3::new(rng.random_range(-5.0..5.0), 3.0, -1.0);
        let h = g.map_points(|p| rot(p) + shift).unwrap();
        for k in 0..g.edges().len() {
            let a = g.edge_interior_curvature_by_id(k);
            let b = h.edge_interior_curvature_by_id(k);
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
        prop_assert!((exact_n(&g) - exact_n(&h)).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_is_canonical(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_graph(&mut rng, 12, 4);
        let g = refine_randomly(&mut rng, &base, 3);
        let s = graph_to_json(&g);
        let back = load_graph_str(&s).unwrap();
        prop_assert_eq!(graph_to_json(&back), s);
        prop_assert_eq!(back.vertex_list(), g.vertex_list());
        prop_assert_eq!(back.edge_specs(), g.edge_specs());
    }

    #[test]
    fn pairings_bound_net_curvature(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 8, 3);
        let n = exact_n(&g);
        let iter = enumerate_pairings(&g, true, DEFAULT_MAX_VALENCE).unwrap();
        prop_assume!(iter.total() <= 4000);
        for p in iter {
            let c = parameterization_curvature(&g, &p).unwrap();
            prop_assert!(c.half_curvature() >= n - 1e-9);
        }
    }

    #[test]
    fn euler_circuit_is_one_walk(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 14, 4);
        let d = double_graph(&g);
        let circuit = euler_circuit(&d);
        prop_assert_eq!(circuit.walks.len(), 1);
        prop_assert_eq!(circuit.walks[0].len(), 2 * g.edges().len());
        let again = parameterization_curvature(&g, &circuit.pairing).unwrap();
        prop_assert_eq!(again.walks.len(), 1);
        prop_assert!((again.total_curvature - circuit.total_curvature).abs() < 1e-12);
    }

    #[test]
    fn refinement_raises_multiplicity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_graph(&mut rng, 10, 4);
        let count = rng.random_range(1..6);
        let q = refine_randomly(&mut rng, &p, count);
        for _ in 0..50 {
            let Some(e) = generic_direction(&q, &mut rng, 100) else { continue };
            let Ok(coarse) = mu_of_direction(&p, e) else { continue };
            let fine = mu_of_direction(&q, e).unwrap();
            prop_assert!(fine.mu >= coarse.mu, "{} < {} at {}", fine.mu, coarse.mu, e);
        }
        prop_assert!(exact_n(&q) >= exact_n(&p) - 1e-9);
    }

    #[test]
    fn closed_polygons_integrate_to_at_least_two_pi(seed in any::<u64>(), n in 3usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_closed_polygon(&mut rng, n);
        let m = integrate_mu(&g, 20_000, seed).unwrap();
        prop_assert!(m.n_estimate >= 2.0 * PI - 3.0 * m.stderr - 1e-9);
        prop_assert!(exact_n(&g) >= 2.0 * PI - 1e-9);
    }
}

#[test]
fn matching_counts_are_odd_double_factorials() {
    for d in 1..=5 {
        let ends: Vec<EndId> = (0..d)
            .flat_map(|e| {
                (0..2).map(move |copy| EndId {
                    edge: e,
                    side: 0,
                    copy,
                })
            })
            .collect();
        // 2d ends at a valence-d vertex of the double: (2d - 1)!! matchings
        assert_eq!(
            vertex_matchings(&ends, true).len(),
            double_factorial_odd(d),
            "d = {d}"
        );
    }
}

#[test]
fn inscriptions_are_nested() {
    for name in BUILTIN_NAMES {
        let pg = builtin(name, 1).unwrap();
        for level in 0..6 {
            let a = inscribe(&pg, level).unwrap();
            let b = inscribe(&pg, level + 1).unwrap();
            let pts = |g: &SpatialGraph| -> Vec<Point3> {
                g.edges()
                    .iter()
                    .flat_map(|e| e.polyline.iter().copied())
                    .collect()
            };
            let fine = pts(&b);
            for p in pts(&a) {
                assert!(
                    fine.iter().any(|q| q.distance(p) < 1e-12),
                    "{name} level {level}: {p:?} missing"
                );
            }
            assert!(exact_n(&b) >= exact_n(&a) - 1e-9, "{name} level {level}");
        }
    }
}
