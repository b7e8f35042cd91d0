use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use llr_scl::channel_sim::{SimConfig, Simulation};
use llr_scl::datapath::{FloatDatapath, MetricMode};
use llr_scl::llr_kernels::Kernel;
use llr_scl::quantization::{FixedDatapath, QuantSpec};
use llr_scl::sc_decoder::sc_decode;
use llr_scl::scl_decoder::SclDecoder;
use llr_scl::sorting_network::build_batcher;
use std::hint::black_box;

fn frame(n: usize) -> (Simulation, Vec<f64>) {
    let sim = Simulation::new(SimConfig {
        seed: 3,
        ..SimConfig::new(n, n / 2, 1, vec![2.0])
    })
    .unwrap();
    let llrs = sim.frame(0, 0).llrs;
    (sim, llrs)
}

fn bench_sc(c: &mut Criterion) {
    let mut group = c.benchmark_group("sc");
    for n in [256usize, 1024] {
        let (sim, llrs) = frame(n);
        for kernel in [Kernel::MinSum, Kernel::Exact] {
            group.bench_function(BenchmarkId::new(format!("{kernel:?}"), n), |b| {
                b.iter(|| sc_decode(sim.code(), black_box(&llrs), kernel).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_scl(c: &mut Criterion) {
    let mut group = c.benchmark_group("scl");
    let (sim, llrs) = frame(1024);
    for list in [2usize, 4, 8, 16] {
        let approx = SclDecoder::new(
            sim.code().clone(),
            list,
            FloatDatapath::new(Kernel::MinSum, MetricMode::Approx),
        )
        .unwrap();
        let exact = SclDecoder::new(
            sim.code().clone(),
            list,
            FloatDatapath::new(Kernel::Exact, MetricMode::Exact),
        )
        .unwrap();
        let fixed = SclDecoder::new(
            sim.code().clone(),
            list,
            FixedDatapath::new(QuantSpec::default()),
        )
        .unwrap();
        group.bench_function(BenchmarkId::new("approx_minsum", list), |b| {
            b.iter(|| approx.decode(black_box(&llrs)).unwrap())
        });
        group.bench_function(BenchmarkId::new("exact_exact", list), |b| {
            b.iter(|| exact.decode(black_box(&llrs)).unwrap())
        });
        group.bench_function(BenchmarkId::new("fixed_q6", list), |b| {
            b.iter(|| fixed.decode(black_box(&llrs)).unwrap())
        });
    }
    group.finish();
}

fn bench_sorter(c: &mut Criterion) {
    let mut group = c.benchmark_group("batcher");
    for size in [8usize, 32] {
        let net = build_batcher(size).unwrap();
        let values: Vec<f64> = (0..size).map(|i| ((i * 37) % size) as f64).collect();
        group.bench_function(BenchmarkId::from_parameter(size), |b| {
            b.iter(|| net.apply(black_box(&values)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sc, bench_scl, bench_sorter);
criterion_main!(benches);
