use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sumsetlab::search::{exact_c, exact_z, zero_sum_subset_oracle};
use sumsetlab::{restricted_sumset, GroupSpec, SearchOptions};

fn sumsets(c: &mut Criterion) {
    let mut group = c.benchmark_group("restricted_sumset");
    for (name, factors) in [
        ("Z64", vec![64]),
        ("Z2^6", vec![2; 6]),
        ("Z3^4", vec![3; 4]),
    ] {
        let g = GroupSpec::new(&factors).unwrap();
        let half: Vec<usize> = (0..g.order()).step_by(2).collect();
        let set = g.set_from(&half).unwrap();
        for h in [2, 4] {
            group.bench_with_input(BenchmarkId::new(name, h), &h, |b, &h| {
                b.iter(|| restricted_sumset(&g, black_box(&set), h))
            });
        }
    }
    group.finish();
}

fn searches(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_search");
    group.sample_size(10);
    let opts = SearchOptions::default();
    let cases = [
        ("C", vec![2, 2, 2, 2], 3),
        ("C", vec![16], 5),
        ("Z", vec![3, 3, 3], 3),
        ("Z", vec![2, 8], 4),
    ];
    for (quantity, factors, h) in cases {
        let g = GroupSpec::new(&factors).unwrap();
        let id = BenchmarkId::new(quantity, format!("{g}/h={h}"));
        group.bench_function(id, |b| {
            b.iter(|| match quantity {
                "C" => exact_c(&g, h, &opts).unwrap(),
                _ => exact_z(&g, h, &opts).unwrap(),
            })
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("zero_sum_oracle");
    for factors in [vec![16], vec![2, 2, 2, 2], vec![32]] {
        let g = GroupSpec::new(&factors).unwrap();
        let m = g.order() / 2;
        group.bench_function(g.to_string(), |b| {
            b.iter(|| zero_sum_subset_oracle(&g, black_box(m), true))
        });
    }
    group.finish();
}

criterion_group!(benches, sumsets, searches, oracle);
criterion_main!(benches);
