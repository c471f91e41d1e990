use criterion::{criterion_group, criterion_main, Criterion};
use sc_core::io::{read_certificate, write_certificate};
use sc_core::{sc_upper_bound, verify_certificate, Example, Planner, SearchConfig};

fn circle_config() -> SearchConfig {
    SearchConfig {
        b: 1,
        c_max: 16,
        max_pieces: 2,
        max_b: 1,
        ..SearchConfig::default()
    }
}

fn search(c: &mut Criterion) {
    let circle = Example::Circle.complex();
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("circle b=1", |b| b.iter(|| sc_upper_bound(&circle, &circle_config()).unwrap()));
    group.finish();
}

fn certificates(c: &mut Criterion) {
    let report = sc_upper_bound(&Example::Circle.complex(), &circle_config()).unwrap();
    let cert = report.certificate().unwrap();
    let text = write_certificate(cert);
    c.bench_function("verify circle certificate", |b| b.iter(|| verify_certificate(cert).unwrap()));
    c.bench_function("read circle certificate", |b| b.iter(|| read_certificate(&text).unwrap()));

    let emb = Example::Circle.embedding();
    let planner = Planner::new(cert, &emb).unwrap();
    let (x, y) = ([1.0, 0.0], [0.25, 0.4330127018922193]);
    c.bench_function("plan circle pair", |b| b.iter(|| planner.plan(&x, &y).unwrap()));
}

criterion_group!(benches, search, certificates);
criterion_main!(benches);
