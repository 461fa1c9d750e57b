//! Sequential vs rayon fan-out over independent verification trials.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use wbinom_core::binomial::{elliptic_binom_closed, BinomTable};
use wbinom_core::coeffs::relative_error;
use wbinom_core::exec;
use wbinom_core::random::{base_q, nome, param, trial_rng};
use wbinom_core::weights::WeightSpec;

/// One elliptic closed-form-vs-recursion trial up to `n = 10`.
fn trial(t: &u64) -> f64 {
    let mut rng = trial_rng(7, "bench", *t);
    let (a, b, q, p) = (param(&mut rng), param(&mut rng), base_q(&mut rng), nome(&mut rng));
    let Ok(spec) = WeightSpec::elliptic(a, b, q, p) else { return 0.0 };
    let mut table = BinomTable::<Complex64>::new(&spec);
    let mut worst = 0.0f64;
    for n in 0..=10 {
        for k in 0..=n {
            if let (Ok(x), Ok(y)) = (table.get(n, k), elliptic_binom_closed(a, b, q, p, n, k)) {
                worst = worst.max(relative_error(x, y));
            }
        }
    }
    worst
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("elliptic-trials");
    for count in [16u64, 128] {
        let trials: Vec<u64> = (0..count).collect();
        group.bench_with_input(BenchmarkId::new("sequential", count), &trials, |bch, ts| {
            bch.iter(|| black_box(exec::map_sequential(ts, trial)))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", count), &trials, |bch, ts| {
            bch.iter(|| black_box(exec::map_parallel(ts, trial)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
