use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mpfam::{max_family, oracle_max, Mode};
use mpfam_bench::structure;

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    for (n, k) in [(vec![5, 5], vec![2, 2]), (vec![3, 3, 3], vec![1, 1, 1]), (vec![2, 5, 5], vec![1, 2, 2])] {
        let ps = structure(&n, &k);
        for mode in [Mode::Intersecting, Mode::Nontrivial] {
            group.bench_function(format!("primary {ps} {mode}"), |b| b.iter(|| max_family(black_box(&ps), mode).unwrap().size));
            group.bench_function(format!("reference {ps} {mode}"), |b| b.iter(|| oracle_max(black_box(&ps), mode).unwrap().size));
        }
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
