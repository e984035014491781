use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rpim_core::bench::{run_bench_with, synthesize, BenchInput, InputKind, DEFAULT_SEED};
use rpim_core::codec::compress_image;
use rpim_core::image::{encode_bmp, LinearizationMode};
use rpim_core::par::Execution;
use rpim_core::repair::CompressorConfig;

const SIDE: u32 = 128;

fn compress_by_image(c: &mut Criterion) {
    let mut group = c.benchmark_group("compress_image");
    for name in ["solid", "tiles", "mono", "gradient", "noise"] {
        let img = synthesize(name, SIDE, DEFAULT_SEED).unwrap();
        group.throughput(Throughput::Bytes(img.samples().len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(name), &img, |b, img| {
            b.iter(|| compress_image(black_box(img), LinearizationMode::ZigZag, CompressorConfig::default()))
        });
    }
    group.finish();
}

fn sweep_sequential_vs_parallel(c: &mut Criterion) {
    let inputs: Vec<BenchInput> = ["solid", "tiles", "mono", "noise"]
        .iter()
        .flat_map(|name| {
            let bmp = encode_bmp(&synthesize(name, SIDE, DEFAULT_SEED).unwrap());
            [
                BenchInput::new(*name, InputKind::Bmp, bmp.clone()),
                BenchInput::new(*name, InputKind::OpaqueStream, bmp),
            ]
        })
        .collect();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(label, |b| {
            b.iter(|| run_bench_with(&inputs, &LinearizationMode::ALL, CompressorConfig::default(), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, compress_by_image, sweep_sequential_vs_parallel);
criterion_main!(benches);
