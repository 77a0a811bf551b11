//! Poset-construction benchmarks.
//!
//! Run with the default features for the rayon-backed breadth-first
//! closure, and with `--no-default-features` for the sequential fallback;
//! comparing the two runs measures the parallel speedup.

use criterion::{criterion_group, criterion_main, Criterion};

use windlass::forest::fuss_catalan_poset;
use windlass::order::upper_set;
use windlass::signature::Signature;
use windlass::term::parse_term;

fn bench_upper_sets(c: &mut Criterion) {
    let sig = Signature::a_family(8);
    let base = parse_term("a3(a3(*,*,*), a1(*), a2(*,*))", &sig).unwrap();
    c.bench_function("upper_set/14", |b| {
        b.iter(|| upper_set(&base, 1_000_000).unwrap())
    });
    let wide = parse_term("a4(a2(*,*), a2(*,*), a2(*,*), a2(*,*))", &sig).unwrap();
    c.bench_function("upper_set/wide", |b| {
        b.iter(|| upper_set(&wide, 1_000_000).unwrap())
    });
}

fn bench_fuss_catalan(c: &mut Criterion) {
    c.bench_function("fuss_catalan/2_5", |b| {
        b.iter(|| fuss_catalan_poset(2, 5, 1_000_000).unwrap())
    });
    c.bench_function("fuss_catalan/3_5", |b| {
        b.iter(|| fuss_catalan_poset(3, 5, 1_000_000).unwrap())
    });
}

criterion_group!(benches, bench_upper_sets, bench_fuss_catalan);
criterion_main!(benches);
