use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symdyn::catalog::Example;
use symdyn::graph::{build_rauzy_graph, cycle_space, decompose_in_cycles, Multigraph};
use symdyn::torus::examples::hexagon_center;
use symdyn::torus::{
    circle_rotation, fundamental_domain_coverage, hexagon_default, minimality_check, OrbitStatus,
    PiecewiseTranslation,
};
use symdyn::verify::{random_connected_multigraph, random_conservative_flow, run_verification, VerifyConfig};
use symdyn::word::{complexity, StabilizationPolicy};

fn coherent(map: &Arc<PiecewiseTranslation>, x0: &[f64], steps: usize) {
    let orbit = map.orbit(x0, steps).unwrap();
    let word = map.coding(x0).unwrap().take(orbit.cells.len());
    for (j, (p, s)) in orbit.points.iter().zip(word.symbols()).enumerate() {
        if j < orbit.cells.len() {
            assert_eq!(map.locate(p), Ok(s.index()), "step {j}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn circle_coding_follows_the_orbit(alpha in 0.01f64..0.99, x0 in 0.0f64..1.0) {
        let map = Arc::new(circle_rotation(alpha).unwrap());
        coherent(&map, &[x0], 500);
    }

    #[test]
    fn rational_vectors_have_relations(p in 1i64..50, q in 1i64..50, r in 1i64..50) {
        let a = [p as f64 / q as f64 % 1.0, r as f64 / 97.0];
        let v = minimality_check(&a, 1000, 1e-9);
        let c = v.relation.expect("relation for rational input");
        prop_assert!(c[..2].iter().any(|&x| x != 0));
        let value = c[0] as f64 * a[0] + c[1] as f64 * a[1] + c[2] as f64;
        prop_assert!(value.abs() < 1e-9);
    }

    #[test]
    fn rank_formula_and_cycles_are_flows(seed in any::<u64>(), extra in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Disjoint union of connected pieces.
        let mut edges = Vec::new();
        let mut offset = 0;
        for _ in 0..=extra {
            let g = random_connected_multigraph(&mut rng);
            edges.extend(g.edges().iter().map(|&(s, t)| (s + offset, t + offset)));
            offset += g.vertex_count();
        }
        let g = Multigraph::new(offset, edges).unwrap();
        let basis = cycle_space(&g);
        let (c, _) = g.components();
        prop_assert_eq!(c, extra + 1);
        prop_assert_eq!(basis.dimension + g.vertex_count(), g.edge_count() + c);
        for z in &basis.cycles {
            let defect = g.conservation_defect(&z.as_f64()).unwrap();
            prop_assert!(defect.iter().all(|&d| d == 0.0));
        }
        // Independence: each cycle alone touches its generator edge.
        for (j, &e) in basis.generators.iter().enumerate() {
            for (i, z) in basis.cycles.iter().enumerate() {
                prop_assert_eq!(z.coefficients[e], i8::from(i == j));
            }
        }
    }

    #[test]
    fn conservative_flows_decompose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_connected_multigraph(&mut rng);
        let f = random_conservative_flow(&g, &mut rng);
        let basis = cycle_space(&g);
        let d = decompose_in_cycles(&g, &basis, &f, 1e-9).unwrap();
        prop_assert!(d.is_ok());
    }
}

#[test]
fn hexagon_coding_follows_the_orbit() {
    for seed in [0, 1, 7] {
        let map = Arc::new(hexagon_default(seed).unwrap());
        let x0 = hexagon_center(&map);
        coherent(&map, &x0, 5_000);
        assert_eq!(map.orbit(&x0, 5_000).unwrap().status, OrbitStatus::Complete);
    }
}

#[test]
fn hexagon_cells_tile_the_torus() {
    for seed in [0, 1, 2, 3] {
        let map = hexagon_default(seed).unwrap();
        assert!(fundamental_domain_coverage(&map, 200_000, seed).fraction() >= 0.999);
        assert_eq!(map.piece_count(), map.dim() + 1);
    }
}

#[test]
fn domain_json_round_trip() {
    let map = hexagon_default(0).unwrap();
    let again = PiecewiseTranslation::from_json(&map.to_json().unwrap()).unwrap();
    let x0 = hexagon_center(&map);
    let (a, b) = (Arc::new(map), Arc::new(again));
    assert_eq!(a.coding(&x0).unwrap().take(10_000), b.coding(&x0).unwrap().take(10_000));
}

#[test]
fn rauzy_graphs_match_complexity_and_are_connected() {
    for e in [Example::k_bonacci(2).unwrap(), Example::k_bonacci(3).unwrap(), Example::circle(0.3819660112501051).unwrap()] {
        let r = complexity(&e.word, 9, StabilizationPolicy::default()).unwrap();
        for n in 1..=8 {
            let g = build_rauzy_graph(&e.word, n, 1 << 16).unwrap();
            assert!(!g.provisional);
            assert_eq!(g.vertices.len(), r.p(n).unwrap(), "{} n={n}", e.name);
            assert_eq!(g.edges.len(), r.p(n + 1).unwrap(), "{} n={n}", e.name);
            assert!(g.graph.is_connected());
            assert!(g.count_defects().unwrap().iter().all(|d| d.abs() <= 1));
        }
    }
}

#[test]
fn verification_reports_are_deterministic() {
    let config = VerifyConfig {
        only: vec!["cycle-roundtrip".into(), "graph-example".into(), "measure-identities".into()],
        samples: 20_000,
        seeds: vec![5],
        ..VerifyConfig::default()
    };
    let a = run_verification(&config).unwrap();
    let b = run_verification(&config).unwrap();
    assert_eq!(a.to_json(false), b.to_json(false));
    assert_eq!(a.checks.len(), 3);
    assert!(a.checks.iter().all(|c| !c.claim.is_empty() && !c.tolerance.is_empty()));
    assert!(a.to_json(false).contains("\"seeds\""));
    assert!(!a.to_json(false).contains("runtime_ms"));
    assert!(a.to_json(true).contains("runtime_ms"));
}

#[test]
fn unknown_check_is_an_error() {
    let config = VerifyConfig { only: vec!["nope".into()], ..VerifyConfig::default() };
    assert!(run_verification(&config).is_err());
}
