use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use normred::closure::{vero_ideal, vero_reduction};
use normred::cycle::{brute_force_minimal_anti_nef, DualGraph};
use normred::ideal::product_initial_pieces;
use normred::par::Exec;
use normred::qseq::{sweep, FamilySpec, RunOptions};
use normred::ring::RingPresentation;
use normred::Field;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn family_sweep(c: &mut Criterion) {
    let specs: Vec<FamilySpec> = (3..=5)
        .flat_map(|d| (1..=3).map(move |r| FamilySpec::Blowup { d, r }))
        .collect();
    let mut group = c.benchmark_group("blowup_grid");
    group.sample_size(10);
    for (name, exec) in MODES {
        let opts = RunOptions {
            exec,
            field: Field::Prime(32003),
            ..RunOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let runs = sweep(black_box(&specs), &opts);
                assert!(runs.iter().all(|r| r.is_ok()));
            })
        });
    }
    group.finish();
}

fn vero_products(c: &mut Criterion) {
    let mut group = c.benchmark_group("vero_product_g3");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                // fresh ring and ideal each time so nothing is served from caches
                let ring = RingPresentation::veronese(3, Field::Prime(32003)).unwrap();
                let ideal = vero_ideal(&ring).unwrap().with_exec(exec);
                let q = vero_reduction(&ring).unwrap();
                let comp = |t: u32| ideal.power_component(3, t);
                black_box(product_initial_pieces(&ring, &q, &comp, 12, exec).unwrap());
            })
        });
    }
    group.finish();
}

fn anti_nef_search(c: &mut Criterion) {
    // E_6 graph: chain of five -2 curves with a -2 curve on the middle one
    let mut m = vec![vec![0i64; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)] {
        m[i][j] = 1;
        m[j][i] = 1;
    }
    let g = DualGraph::from_matrix(&m).unwrap();
    let bound = vec![6i64; 6];
    let mut group = c.benchmark_group("brute_force_e6");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(brute_force_minimal_anti_nef(&g, &bound, exec)))
        });
    }
    group.finish();
}

criterion_group!(benches, family_sweep, vero_products, anti_nef_search);
criterion_main!(benches);
