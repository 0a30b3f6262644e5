//! Sequential vs rayon: single large builds, the verify fan-out, and the
//! odd-reflection orbit search.

use cartan_forge::builder::{build_with, BuildLimits};
use cartan_forge::catalog::{builtin_catalog, instantiate_with_defaults, ConcreteCartan};
use cartan_forge::par::{self, Execution};
use cartan_forge::reflection::{enumerate_bases, DEFAULT_LIMIT};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn concrete(name: &str) -> ConcreteCartan {
    instantiate_with_defaults(builtin_catalog().get(name).expect("catalog entry"), &Default::default()).unwrap()
}

fn builds(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    for name in ["e(8,8)#cat", "g(8,6)#5", "e(7,1)#cat"] {
        let cc = concrete(name);
        for (label, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(label, name), &cc, |b, cc| {
                b.iter(|| build_with(cc, BuildLimits::default(), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn fan_out(c: &mut Criterion) {
    let cat = builtin_catalog();
    let ccs: Vec<ConcreteCartan> =
        cat.specs().iter().filter_map(|s| instantiate_with_defaults(s, &Default::default()).ok()).collect();
    let mut g = c.benchmark_group("catalog");
    g.sample_size(10);
    for (label, exec) in MODES {
        g.bench_function(label, |b| {
            b.iter(|| par::map(exec, &ccs, |cc| build_with(cc, BuildLimits::default(), Execution::Sequential).is_ok()))
        });
    }
    g.finish();
}

fn orbits(c: &mut Criterion) {
    let cc = concrete("g(4,6)#2");
    let mut g = c.benchmark_group("orbit");
    g.sample_size(10);
    for (label, exec) in MODES {
        g.bench_function(label, |b| {
            b.iter(|| enumerate_bases(&cc, DEFAULT_LIMIT, BuildLimits::default(), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, builds, fan_out, orbits);
criterion_main!(benches);
