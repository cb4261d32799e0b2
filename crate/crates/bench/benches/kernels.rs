use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nichols_core::sweep::{check_point, shorthand_points, Check};
use nichols_core::{compute_j, parse_field_spec, BraidingParams, Oracle};

fn f9_point() -> BraidingParams {
    let field = parse_field_spec("ext:Fp:3:1,0,1").unwrap();
    let t = field.parse_element("t").unwrap();
    BraidingParams::shorthand(t.clone(), t, field.parse_element("-1").unwrap()).unwrap()
}

fn generic_point() -> BraidingParams {
    let field = parse_field_spec("Fp:101").unwrap();
    let el = |s: &str| field.parse_element(s).unwrap();
    BraidingParams::shorthand(el("3"), el("7"), el("-1")).unwrap()
}

fn symmetrizer(c: &mut Criterion) {
    let p = generic_point();
    let mut group = c.benchmark_group("symmetrizer");
    for m in [3usize, 5, 7] {
        // A fresh oracle each time so the recursion is not served from cache.
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| Oracle::new(&p).symmetrizer(black_box(&[m, 2])).unwrap().rank())
        });
    }
    group.finish();
}

fn verify(c: &mut Criterion) {
    let f9 = f9_point();
    c.bench_function("verify_main F9 m=3", |b| b.iter(|| Oracle::new(&f9).verify_main(black_box(3)).unwrap()));
    let generic = generic_point();
    c.bench_function("verify_main F101 m=6", |b| {
        b.iter(|| Oracle::new(&generic).verify_main(black_box(6)).unwrap())
    });
}

fn j_set(c: &mut Criterion) {
    let p = f9_point();
    c.bench_function("compute_j to 200", |b| b.iter(|| compute_j(black_box(200), &p)));
}

fn scan(c: &mut Criterion) {
    let field = parse_field_spec("Fp:5").unwrap();
    let points = shorthand_points(&field).unwrap();
    c.bench_function("scan main F5 m<=4", |b| {
        b.iter(|| points.iter().map(|p| check_point(Check::Main, p, 4).violations.len()).sum::<usize>())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = symmetrizer, verify, j_set, scan
}
criterion_main!(benches);
