use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gaugekit::abelianize::{abelianize_so3, WeakOptions};
use gaugekit::gauge::conjecture_probe;
use gaugekit::lie::{so3_structure, so4_structure};
use gaugekit::models::{build_f_model, verify_closure_with, LMode};
use gaugekit::par::Execution;
use gaugekit::poisson::bracket_matrix_with;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn brackets(c: &mut Criterion) {
    let m = build_f_model(&so4_structure(), LMode::AdjointAuxiliary).unwrap();
    let mut g = c.benchmark_group("so4 bracket table");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| bracket_matrix_with(&m.constraints, &m.constraints, &m.chart, exec))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("so4 closure");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| verify_closure_with(&m, exec))
        });
    }
    g.finish();
}

fn probe(c: &mut Criterion) {
    let f = so4_structure();
    let mut g = c.benchmark_group("so4 null-space probe, 50 trials");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| conjecture_probe(&f, 50, 1, exec).unwrap())
        });
    }
    g.finish();
}

fn weak_sampling(c: &mut Criterion) {
    let m = build_f_model(&so3_structure(), LMode::AdjointAuxiliary).unwrap();
    let mut g = c.benchmark_group("so3 abelianize with surface sampling");
    g.sample_size(20);
    for (name, exec) in MODES {
        let opts = WeakOptions {
            exec,
            ..WeakOptions::seeded(1)
        };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, opts| {
            b.iter(|| {
                let set = abelianize_so3(&m, 3, opts).unwrap();
                set.det_c_samples(&m, opts).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, brackets, probe, weak_sampling);
criterion_main!(benches);
