use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qtoric::cohomology::{char_numbers, presentation};
use qtoric::families::{count_alpha, enumerate_matrices, square, DEFAULT_SEARCH_CAP};
use qtoric::gkm::{build_gkm, gkm_equiv};
use qtoric::canonical_form;
use qtoric_bench::fixtures;

fn canonical(c: &mut Criterion) {
    let mut g = c.benchmark_group("canonical_form");
    for (name, q) in fixtures() {
        g.bench_function(name, |b| b.iter(|| canonical_form(black_box(&q)).unwrap()));
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology");
    g.sample_size(10);
    for (name, q) in fixtures() {
        g.bench_function(format!("presentation/{name}"), |b| b.iter(|| presentation(black_box(&q))));
        g.bench_function(format!("char_numbers/{name}"), |b| b.iter(|| char_numbers(black_box(&q)).unwrap()));
    }
    g.finish();
}

fn gkm(c: &mut Criterion) {
    let mut g = c.benchmark_group("gkm_equiv");
    for (name, q) in fixtures() {
        let graph = build_gkm(&q).unwrap();
        g.bench_function(name, |b| b.iter(|| gkm_equiv(black_box(&graph), black_box(&graph)).unwrap()));
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("square/bound2", |b| {
        b.iter(|| enumerate_matrices(black_box(&square()), 2, DEFAULT_SEARCH_CAP).unwrap())
    });
    g.bench_function("count_alpha/6", |b| b.iter(|| count_alpha(black_box(6), false).unwrap()));
    g.finish();
}

criterion_group!(benches, canonical, cohomology, gkm, search);
criterion_main!(benches);
