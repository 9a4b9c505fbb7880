//! Sequential against data-parallel execution of the same workloads. Without
//! the `parallel` feature both variants run on one thread.

use std::hint::black_box;

use cml::par::{map_indices, Exec};
use cml::poly_core::{discriminant, roots};
use cml::suite::{random, run_suite, trial_rng, SuiteConfig};
use cml::TolerancePolicy;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn root_batches(c: &mut Criterion) {
    let tol = TolerancePolicy::default();
    let mut group = c.benchmark_group("roots_batch_256_deg8");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                map_indices(exec, 256, |i| {
                    let p = random::monic(&mut trial_rng(7, 0, i), 8);
                    let r = roots(&p, &tol).map(|r| r.len()).unwrap_or(0);
                    (r, discriminant(&p).map(|d| d.norm()).unwrap_or(0.0))
                })
            })
        });
    }
    group.finish();
}

fn verification_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SuiteConfig {
            trials: 50,
            curve_trials: 4,
            exec,
            ..SuiteConfig::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(run_suite(&cfg).expect("suite runs").passed()))
        });
    }
    group.finish();
}

criterion_group!(benches, root_batches, verification_suite);
criterion_main!(benches);
