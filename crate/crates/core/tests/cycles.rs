use normred::cycle::{
    brute_force_minimal_anti_nef, build_star_graph, is_computation_sequence, laufer_fundamental_cycle, DualGraph,
    Vertex,
};
use normred::graph_file::GraphFile;
use normred::par::Exec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A connected negative-definite graph with at most `max_n` vertices, weights in
/// `-4..=-1` and genera in `{0, 1}`. Falls back to a `(-2)`-chain when sampling keeps failing.
fn random_graph(seed: u64, max_n: usize) -> DualGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let n = rng.random_range(1..=max_n);
        let vertices: Vec<Vertex> = (0..n)
            .map(|i| Vertex {
                id: format!("v{i}"),
                genus: rng.random_range(0..=1),
                self_int: rng.random_range(-4..=-1),
            })
            .collect();
        // a random spanning tree keeps it connected, then a few extra edges
        let mut edges: Vec<(usize, usize, u32)> = (1..n).map(|i| (rng.random_range(0..i), i, 1)).collect();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.15) && !edges.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                    edges.push((i, j, 1));
                }
            }
        }
        if let Ok(g) = DualGraph::new(vertices, &edges) {
            if g.is_negative_definite() && g.is_connected() {
                return g;
            }
        }
    }
    let chain: Vec<Vertex> = (0..max_n)
        .map(|i| Vertex {
            id: format!("v{i}"),
            genus: 0,
            self_int: -2,
        })
        .collect();
    let edges: Vec<_> = (1..max_n).map(|i| (i - 1, i, 1)).collect();
    DualGraph::new(chain, &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn laufer_cycle_is_the_brute_force_minimum(seed in any::<u64>()) {
        let g = random_graph(seed, 6);
        let laufer = laufer_fundamental_cycle(&g).unwrap();
        let z = &laufer.cycle;
        prop_assert!(z.is_positive());
        prop_assert!(g.is_anti_nef(z));
        prop_assert!(is_computation_sequence(&g, &laufer.sequence));
        let top = z.coeffs().iter().copied().max().unwrap().max(6);
        let brute = brute_force_minimal_anti_nef(&g, &vec![top; g.len()], Exec::Parallel);
        prop_assert_eq!(brute.as_ref(), Some(z));
        let sequential = brute_force_minimal_anti_nef(&g, &vec![top; g.len()], Exec::Sequential);
        prop_assert_eq!(sequential, brute);
    }

    #[test]
    fn arithmetic_genus_is_additive(seed in any::<u64>()) {
        let g = random_graph(seed, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut draw = || loop {
            let c: Vec<i64> = (0..g.len()).map(|_| rng.random_range(0..=5)).collect();
            if c.iter().any(|&x| x > 0) {
                break g.cycle(c).unwrap();
            }
        };
        for _ in 0..20 {
            let (a, b) = (draw(), draw());
            let lhs = g.pa(&a.add(&b).unwrap()).unwrap();
            let rhs = g.pa(&a).unwrap() + g.pa(&b).unwrap() + g.intersect(&a, &b).unwrap() - 1;
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn graph_files_round_trip(seed in any::<u64>()) {
        let g = random_graph(seed, 6);
        let z = laufer_fundamental_cycle(&g).unwrap().cycle;
        let text = GraphFile::from_graph(&g, &[("Z", &z)]).to_json();
        let file = GraphFile::parse(&text).unwrap();
        prop_assert_eq!(file.to_json(), text);
        let (back, cycles) = file.to_graph().unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(cycles[0].1.coeffs(), z.coeffs());
    }
}

#[test]
fn single_vertex_pa_is_its_genus() {
    // p_a(E) = (E^2 + K E)/2 + 1 = g when K E = -E^2 + 2g - 2
    for genus in 0..4 {
        for w in -5..=-1 {
            let g = DualGraph::new(
                vec![Vertex {
                    id: "e".into(),
                    genus,
                    self_int: w,
                }],
                &[],
            )
            .unwrap();
            assert_eq!(g.pa(&g.vertex_cycle(0)).unwrap(), i64::from(genus));
        }
    }
}

#[test]
fn star_graphs_have_central_genus() {
    for d in 3..=5u32 {
        for r in 1..=3u32 {
            let s = build_star_graph(d, r).unwrap();
            assert_eq!(s.graph.len() as u32, 1 + d * r);
            let z = s.fundamental_cycle().unwrap();
            assert_eq!(s.graph.pa(&z).unwrap(), i64::from((d - 1) * (d - 2) / 2), "d={d} r={r}");
            assert!(s.checks.iter().all(|c| c.passed));
        }
    }
}

#[test]
fn rejects_graphs_that_are_not_resolutions() {
    let v = |id: &str, w| Vertex {
        id: id.into(),
        genus: 0,
        self_int: w,
    };
    // two (-1)-curves meeting once: determinant 0
    let g = DualGraph::new(vec![v("a", -1), v("b", -1)], &[(0, 1, 1)]).unwrap();
    assert!(!g.is_negative_definite());
    assert!(laufer_fundamental_cycle(&g).is_err());
    let apart = DualGraph::new(vec![v("a", -2), v("b", -3)], &[]).unwrap();
    assert!(apart.is_negative_definite() && !apart.is_connected());
    assert!(laufer_fundamental_cycle(&apart).is_err());
}
