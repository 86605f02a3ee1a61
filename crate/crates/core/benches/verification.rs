use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use multinet::circular::circular_violations;
use multinet::circular::CanonicalKind;
use multinet::qnets::multi_q_violations;
use multinet::samples;
use multinet::subdivision::{subdivide_q, SeedPolicy};
use multinet::Exec;
use std::hint::black_box;

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn multi_q(c: &mut Criterion) {
    let mut group = c.benchmark_group("multi_q_violations");
    group.sample_size(10);
    for n in [8, 14] {
        let net = samples::random_translation_net(&mut samples::rng(1), n, n).unwrap();
        for (name, exec) in POLICIES {
            group.bench_with_input(BenchmarkId::new(name, n), &net, |b, net| {
                b.iter(|| multi_q_violations(black_box(net), exec))
            });
        }
    }
    group.finish();
}

fn multi_circular(c: &mut Criterion) {
    let mut group = c.benchmark_group("circular_violations");
    group.sample_size(10);
    let net = samples::random_canonical(&mut samples::rng(2), CanonicalKind::Rotational, 12, 12).unwrap();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| b.iter(|| circular_violations(black_box(&net), true, exec)));
    }
    group.finish();
}

fn subdivision(c: &mut Criterion) {
    let mut group = c.benchmark_group("subdivide_q");
    group.sample_size(10);
    let net = samples::random_q_net(&mut samples::rng(3), 6, 6).unwrap();
    for (name, exec) in POLICIES {
        group.bench_function(name, |b| {
            b.iter(|| subdivide_q(black_box(&net), 3, 3, 2, &SeedPolicy::Uniform, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, multi_q, multi_circular, subdivision);
criterion_main!(benches);
