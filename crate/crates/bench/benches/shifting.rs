use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mpfam::shifting::{shifted_closure, stabilize_nontrivial};
use mpfam_bench::{structure, reversed_construction};

fn shifting(c: &mut Criterion) {
    let mut group = c.benchmark_group("shifting");
    for (n, k) in [(vec![7, 6], vec![3, 2]), (vec![4, 4, 4], vec![2, 1, 1])] {
        let ps = structure(&n, &k);
        let fam = reversed_construction(&ps);
        group.bench_function(format!("closure {ps}"), |b| b.iter(|| shifted_closure(&ps, black_box(&fam)).unwrap().len()));
        group.bench_function(format!("stabilize {ps}"), |b| b.iter(|| stabilize_nontrivial(&ps, black_box(&fam)).unwrap().steps));
    }
    group.finish();
}

criterion_group!(benches, shifting);
criterion_main!(benches);
