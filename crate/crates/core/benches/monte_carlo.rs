//! Sequential vs rayon-parallel frame evaluation for a fixed Monte-Carlo point.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use llr_scl::channel_sim::{Execution, SimConfig, Simulation};
use std::hint::black_box;

const FRAMES: u64 = 1024;

fn executions() -> Vec<(&'static str, Execution)> {
    vec![
        ("sequential", Execution::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Execution::Parallel),
    ]
}

fn bench_point(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    group.throughput(Throughput::Elements(FRAMES));
    for (n, list) in [(128usize, 4usize), (1024, 4)] {
        let cfg = SimConfig {
            max_frames: FRAMES,
            seed: 1,
            ..SimConfig::new(n, n / 2, list, vec![2.0])
        };
        let sim = Simulation::new(cfg).unwrap();
        for (name, exec) in executions() {
            group.bench_with_input(
                BenchmarkId::new(name, format!("n{n}_L{list}")),
                &exec,
                |b, &exec| b.iter(|| black_box(sim.run_point(0, exec))),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_point);
criterion_main!(benches);
