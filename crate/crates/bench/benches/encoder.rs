use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use hdlang::encoder::{synthetic_text, throughput_probe};
use hdlang::{Encoder, EncoderConfig};

const FLOOR: f64 = 100_000.0;

fn stream_vs_naive(c: &mut Criterion) {
    let mut group = c.benchmark_group("encode_10k_chars");
    group.sample_size(10);
    group.throughput(Throughput::Elements(10_000));
    for n in [2usize, 4, 5] {
        let encoder = Encoder::new(EncoderConfig::new(n, 10_000, 1).unwrap()).unwrap();
        let text = synthetic_text(10_000, encoder.alphabet(), 7);
        group.bench_with_input(BenchmarkId::new("stream", n), &text, |b, t| {
            b.iter(|| encoder.encode_text_stream(black_box(t)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("naive", n), &text, |b, t| {
            b.iter(|| encoder.encode_text_naive(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn ngram(c: &mut Criterion) {
    let encoder = Encoder::new(EncoderConfig::new(4, 10_000, 1).unwrap()).unwrap();
    let block = encoder.alphabet().symbols_of("the ").unwrap();
    c.bench_function("encode_ngram_n4", |b| {
        b.iter(|| encoder.encode_ngram(black_box(&block)).unwrap())
    });
}

fn floor(_: &mut Criterion) {
    let probe = throughput_probe(1_000_000, &EncoderConfig::new(4, 10_000, 1).unwrap()).unwrap();
    let rate = probe.chars_per_second();
    println!("throughput D=10000 n=4: {rate:.0} chars/s");
    assert!(
        rate >= FLOOR,
        "{rate:.0} chars/s is below the {FLOOR:.0} floor"
    );
}

criterion_group!(benches, stream_vs_naive, ngram, floor);
criterion_main!(benches);
