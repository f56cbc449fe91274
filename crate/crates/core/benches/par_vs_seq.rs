use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mobile_atlas::oracle::checks::{exhaustive_cancellation, hp_reports, roundtrip_suite};
use mobile_atlas::oracle::enumerate_rooted_maps;
use mobile_atlas::par::Exec;

fn modes() -> [(&'static str, Exec); 2] {
    [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)]
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::new("rooted_maps_5_edges", name), &exec, |b, &e| b.iter(|| enumerate_rooted_maps(5, true, e).unwrap()));
        g.bench_with_input(BenchmarkId::new("hp_counts_g2", name), &exec, |b, &e| b.iter(|| hp_reports(2, e).unwrap()));
        g.bench_with_input(BenchmarkId::new("round_trip_4_edges", name), &exec, |b, &e| b.iter(|| roundtrip_suite(4, e).unwrap()));
        g.bench_with_input(BenchmarkId::new("cancellation_3_edges", name), &exec, |b, &e| b.iter(|| exhaustive_cancellation(3, 1, e).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, oracle);
criterion_main!(benches);
