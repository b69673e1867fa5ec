use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use balltheory::catalog::{generators, Family, GroupSpec};
use balltheory::gpt::{constraint_suite, local_pool, MForm};
use balltheory::nogo::quantum_positive_check;
use balltheory::par::Execution;
use balltheory::sampling::{gaussian_matrix, stream};
use balltheory::transitivity::monte_carlo_twirl;

const STRATEGIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn bench_constraint_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("constraint_suite");
    group.sample_size(10);
    for family in [Family::G2, Family::Spin9] {
        let spec = GroupSpec::smallest(family);
        let pool = local_pool(&generators(&spec).unwrap(), 1);
        let m = MForm::identity(spec.d);
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, spec.to_string()), &exec, |b, &exec| {
                b.iter(|| black_box(constraint_suite("bench", &pool, &m, 2_000, 3, exec).unwrap()));
            });
        }
    }
    group.finish();
}

fn bench_monte_carlo_twirl(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_twirl");
    group.sample_size(10);
    let spec = GroupSpec::smallest(Family::Spin7);
    let h = generators(&spec).unwrap();
    let z = gaussian_matrix(&mut stream(4, 0), spec.d, spec.d);
    for (name, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "spin7_5000"), |b| {
            b.iter(|| black_box(monte_carlo_twirl(&z, &h, 5_000, 9, exec)));
        });
    }
    group.finish();
}

fn bench_quantum(c: &mut Criterion) {
    let mut group = c.benchmark_group("quantum_positive_check");
    group.sample_size(10);
    for (name, exec) in STRATEGIES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(quantum_positive_check(5_000, 2, exec).unwrap()));
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_constraint_suite,
    bench_monte_carlo_twirl,
    bench_quantum
);
criterion_main!(benches);
