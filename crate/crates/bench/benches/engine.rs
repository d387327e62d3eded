use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shootout_core::engine::total_win_probability_with;
use shootout_core::monte_carlo::{estimate_win_probability, SimConfig};
use shootout_core::*;

fn regular_phase(c: &mut Criterion) {
    let params = Params::new(0.75, 2.0 / 3.0).unwrap();
    let mut group = c.benchmark_group("regular phase");
    for n in [5u32, 8] {
        for (name, method) in [
            ("enumerate", EvalMethod::Enumerate),
            ("dp", EvalMethod::ScoreDifferenceDp),
        ] {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    total_win_probability_with(
                        &MechanismId::CatchUp,
                        PressureModelId::M1,
                        black_box(&params),
                        n,
                        method,
                    )
                    .unwrap()
                })
            });
        }
    }
    group.bench_function("dp 16 rounds", |b| {
        b.iter(|| {
            total_win_probability_with(
                &MechanismId::BehindFirst,
                PressureModelId::M2,
                black_box(&params),
                16,
                EvalMethod::ScoreDifferenceDp,
            )
            .unwrap()
        })
    });
    group.finish();
}

fn exact_arithmetic(c: &mut Criterion) {
    let params = Params::new(BigRational::from_ratio(3, 4), BigRational::from_ratio(2, 3)).unwrap();
    c.bench_function("rational dp 8 rounds", |b| {
        b.iter(|| {
            total_win_probability_with(
                &MechanismId::DoubleAlternating,
                PressureModelId::M1,
                black_box(&params),
                8,
                EvalMethod::ScoreDifferenceDp,
            )
            .unwrap()
        })
    });
}

fn sudden_death(c: &mut Criterion) {
    let params = Params::new(0.75, 2.0 / 3.0).unwrap();
    c.bench_function("sd_win all cases", |b| {
        b.iter(|| {
            let mut sum = 0.0;
            for pattern in SdPattern::ALL {
                for cls in [ModelClass::Class1, ModelClass::Class23] {
                    sum += sd_win(pattern, cls, black_box(&params)).unwrap();
                }
            }
            sum
        })
    });
}

fn monte_carlo(c: &mut Criterion) {
    let cfg = SimConfig::new(
        MechanismId::AdjBehindFirst,
        PressureModelId::M2,
        Params::new(0.75, 2.0 / 3.0).unwrap(),
        5,
        100_000,
        1,
    );
    let mut group = c.benchmark_group("monte carlo");
    group.sample_size(10);
    group.bench_function("100k shootouts", |b| {
        b.iter(|| estimate_win_probability(black_box(&cfg)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    regular_phase,
    exact_arithmetic,
    sudden_death,
    monte_carlo
);
criterion_main!(benches);
