use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use homlab_bench::{named, random_target};
use homlab_core::brw::{brw_distribution, brw_samples};
use homlab_core::decomp::{find_strong_decomposition, SearchBudget};
use homlab_core::density::{cartesian_cycle_audit, codegree_bound_check};
use homlab_core::graph::construct::NamedGraph;
use homlab_core::hom::{
    count_homomorphisms, count_homomorphisms_elimination, count_tree_homomorphisms, cycle_hom_trace,
};

fn counting(c: &mut Criterion) {
    let g = random_target(16, 3);
    let c4 = named(NamedGraph::Cycle(4));
    let mut group = c.benchmark_group("hom_c4_gnp16");
    group.bench_function("backtrack", |b| b.iter(|| count_homomorphisms(black_box(&c4), &g)));
    group.bench_function("elimination", |b| {
        b.iter(|| count_homomorphisms_elimination(black_box(&c4), &g, 1 << 20).unwrap())
    });
    group.bench_function("trace", |b| b.iter(|| cycle_hom_trace(4, black_box(&g)).unwrap()));
    group.finish();

    let mut group = c.benchmark_group("hom_tree");
    for n in [4usize, 8, 16] {
        let t = named(NamedGraph::Path(n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| count_tree_homomorphisms(t, &g).unwrap())
        });
    }
    group.finish();
}

fn walks(c: &mut Criterion) {
    let g = random_target(12, 1);
    let t = named(NamedGraph::Star(3));
    c.bench_function("brw_samples_1000", |b| b.iter(|| brw_samples(&t, &g, black_box(9), 1000).unwrap()));
    let small = random_target(6, 2);
    c.bench_function("brw_distribution_p4", |b| {
        b.iter(|| brw_distribution(&named(NamedGraph::Path(4)), black_box(&small), 1 << 20).unwrap())
    });
}

fn structure(c: &mut Criterion) {
    let h = named(NamedGraph::CompleteBipartite(2, 4));
    c.bench_function("strong_search_k24", |b| {
        b.iter(|| find_strong_decomposition(black_box(&h), &SearchBudget::default()).unwrap())
    });
    let g = random_target(16, 0);
    let all: Vec<usize> = (0..16).collect();
    c.bench_function("codegree_gnp16", |b| b.iter(|| codegree_bound_check(black_box(&g), &all)));
    let k3 = named(NamedGraph::Complete(3));
    let k2 = named(NamedGraph::Complete(2));
    c.bench_function("cartesian_audit_k2_c4_k3", |b| {
        b.iter(|| cartesian_cycle_audit(black_box(&k2), 2, &k3, 1 << 16).unwrap())
    });
}

criterion_group!(benches, counting, walks, structure);
criterion_main!(benches);
