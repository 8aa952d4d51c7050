use criterion::{criterion_group, criterion_main, Criterion};
use pdmn_core::plcore::{query_exact_report, EngineOptions};
use pdmn_core::tableparse::parse_workbook;
use pdmn_core::translate::translate_model;

const EARTHQUAKE: &str = include_str!("../../cli/tests/data/earthquake.pdmn");

fn bench_parse(c: &mut Criterion) {
    c.bench_function("parse_workbook/earthquake", |b| {
        b.iter(|| parse_workbook(EARTHQUAKE, "earthquake.pdmn").unwrap())
    });
}

fn bench_translate(c: &mut Criterion) {
    let model = parse_workbook(EARTHQUAKE, "earthquake.pdmn").unwrap();
    c.bench_function("translate_model/earthquake", |b| b.iter(|| translate_model(&model)));
}

fn bench_query(c: &mut Criterion) {
    let model = parse_workbook(EARTHQUAKE, "earthquake.pdmn").unwrap();
    let translation = translate_model(&model);
    let options = EngineOptions::default();
    c.bench_function("query_exact/earthquake", |b| {
        b.iter(|| query_exact_report(&translation.program, &options).unwrap())
    });
}

criterion_group!(benches, bench_parse, bench_translate, bench_query);
criterion_main!(benches);
