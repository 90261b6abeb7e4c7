use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use oodn::exploiters;
use oodn::expr::{self, normalize};
use oodn::{fixtures, io};

fn union(c: &mut Criterion) {
    let f = fixtures::figures();
    let classes: Vec<_> = ["T(A)", "T(B)", "T(C)"].iter().map(|n| f.class(n).unwrap()).collect();
    c.bench_function("class_union/three figures", |b| b.iter(|| exploiters::class_union(black_box(&classes)).unwrap()));
    let (a, t) = (classes[0], classes[2]);
    c.bench_function("class_symmetric_difference/A,C", |b| {
        b.iter(|| exploiters::class_symmetric_difference(black_box(a), black_box(t)).unwrap())
    });
}

fn normal_form(c: &mut Criterion) {
    let e = expr::parse(
        "not not (self.p3.value + 1 > 2 and all_equal(self.p2.values)) or 2 * max(self.p2.values) < sum(self.p2.values) + 0",
    )
    .unwrap();
    c.bench_function("normalize/mixed", |b| b.iter(|| normalize(black_box(&e))));
}

fn inference(c: &mut Criterion) {
    let p = fixtures::polygons();
    c.bench_function("infer_relations/polygons", |b| b.iter(|| black_box(&p).infer_relations(1.0).unwrap()));
}

fn documents(c: &mut Criterion) {
    let text = io::save(&fixtures::polygons().with_inferred(1.0).unwrap());
    c.bench_function("io/load polygons", |b| b.iter(|| io::load(black_box(&text)).unwrap()));
    let n = io::load(&text).unwrap();
    c.bench_function("io/save polygons", |b| b.iter(|| io::save(black_box(&n))));
}

criterion_group!(benches, union, normal_form, inference, documents);
criterion_main!(benches);
