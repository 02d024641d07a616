use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use gsl_core::specialize::integer_points;
use gsl_core::*;

fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn oracle_bench(c: &mut Criterion) {
    let v4 = Cover::bundled("v4_sqrt_t_sqrt_t_minus_1").unwrap();
    let c3 = Cover::bundled("c3_shanks").unwrap();
    let unramified = v4.specialize(&rat(7));
    let ramified = c3.specialize(&rat(13 + 7 * 3));
    c.bench_function("oracle/v4 t0=7 p=7", |b| b.iter(|| oracle(black_box(&unramified), 7)));
    c.bench_function("oracle/c3 meeting p=7", |b| b.iter(|| oracle(black_box(&ramified), 7)));
    let deep = UniPoly::from_ints(&[60025, 0, -510, 0, 1]);
    c.bench_function("oracle/shared leading terms p=5", |b| b.iter(|| oracle(black_box(&deep), 5)));
}

fn cover_bench(c: &mut Criterion) {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../covers/c3_shanks.json")).unwrap();
    c.bench_function("cover/build c3", |b| b.iter(|| Cover::from_json(black_box(&text)).unwrap()));
}

fn sweep_bench(c: &mut Criterion) {
    let c2 = Cover::bundled("c2_sqrt_t").unwrap();
    let points = integer_points(-20, 20);
    c.bench_function("sweep/c2 41 points x 3 primes", |b| {
        b.iter(|| sweep(&c2, black_box(&points), &[3, 5, 7], 1))
    });
}

criterion_group!(benches, oracle_bench, cover_bench, sweep_bench);
criterion_main!(benches);
