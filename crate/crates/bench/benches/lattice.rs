use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latcheck_core::invariants::{minmaxl, modular_elements};
use latcheck_core::{FiniteGroup, GroupOptions, GroupSpec, LatticeOptions, SubgroupLattice};

const SPECS: &[&str] = &["sym:4", "alt:5", "psl2:7", "prod(sym:4,sym:3)"];

fn group(spec: &str) -> Arc<FiniteGroup> {
    Arc::new(GroupSpec::parse(spec).unwrap().build(GroupOptions::default()).unwrap())
}

fn enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for &spec in SPECS {
        let grp = group(spec);
        g.bench_with_input(BenchmarkId::from_parameter(spec), &grp, |b, grp| {
            b.iter(|| SubgroupLattice::enumerate(grp.clone(), LatticeOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("modular_scan");
    g.sample_size(10);
    for &spec in SPECS {
        let lat = SubgroupLattice::enumerate(group(spec), LatticeOptions::default()).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(spec), &lat, |b, lat| b.iter(|| modular_elements(lat)));
    }
    g.finish();

    let lat = SubgroupLattice::enumerate(group("psl2:11"), LatticeOptions::default()).unwrap();
    c.bench_function("minmaxl/psl2:11", |b| b.iter(|| minmaxl(&lat)));
}

criterion_group!(benches, enumerate, invariants);
criterion_main!(benches);
