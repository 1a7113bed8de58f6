use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use vsep_bench::{laplacian_history, weighted_grid};
use vsep_core::{project_embedding, EmbedConfig};

fn bench_embedding(c: &mut Criterion) {
    let mut group = c.benchmark_group("embedding");
    group.sample_size(20);
    let cfg = EmbedConfig::default();
    let projected = EmbedConfig { exact_when_wide: false, ..EmbedConfig::default() };
    for side in [6, 10, 16] {
        let g = weighted_grid(side);
        let op = laplacian_history(&g, 20);
        let norm = op.certified_norm();
        group.bench_with_input(BenchmarkId::new("exact", side * side), &op, |b, op| {
            b.iter(|| project_embedding(black_box(op), 0.3, 0.1, norm, 0, &[0], &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("projected", side * side), &op, |b, op| {
            b.iter(|| project_embedding(black_box(op), 0.45, 0.1, norm, 0, &[0], &projected).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_embedding);
criterion_main!(benches);
