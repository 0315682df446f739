//! Sequential vs rayon-parallel evaluation of the hot loops: exhausting a
//! hitting set on a zero circuit, randomized Jacobian rank, and a small
//! composed corpus. Build with `--no-default-features` to see the
//! sequential fallback on both sides.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use faithful::circuit::DEFAULT_EXPAND_BUDGET;
use faithful::corpus::{self, CorpusKind};
use faithful::depth4::lift_identity;
use faithful::exec::Parallelism;
use faithful::gen;
use faithful::hitting::{pit, sz_grid, PitOptions, RankBound};
use faithful::indep::{jacobian, jacobian_rank, RankMethod};
use faithful::maps::SearchOptions;
use faithful::FieldSpec;

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn grid_exhaustion(c: &mut Criterion) {
    let field = FieldSpec::prime(1_000_003).unwrap();
    let zero = lift_identity(&gen::depth3_identity(field), 2).unwrap();
    let hs = sz_grid((0..16).map(|i| field.element(i)).collect(), zero.nvars(), 15).unwrap();
    let mut group = c.benchmark_group("pit/grid-exhaustion");
    group.sample_size(10);
    for (name, parallelism) in MODES {
        let opts = PitOptions {
            max_points: u64::MAX,
            parallelism,
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(pit(&zero, &hs, &opts).unwrap()))
        });
    }
    group.finish();
}

fn randomized_rank(c: &mut Criterion) {
    let field = FieldSpec::prime(1_000_003).unwrap();
    let j = jacobian(&gen::quadric_family(field, 4, 4)).unwrap();
    let method = RankMethod::Randomized { seed: 1, trials: 64 };
    let mut group = c.benchmark_group("indep/randomized-rank");
    for (name, parallelism) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(jacobian_rank(&j, method, parallelism)))
        });
    }
    group.finish();
}

fn composed_corpus(c: &mut Criterion) {
    let instances = corpus::instances(CorpusKind::Composed, 7, 10).unwrap();
    let mut group = c.benchmark_group("corpus/composed-10");
    group.sample_size(10);
    for (name, parallelism) in MODES {
        let pit_opts = PitOptions {
            parallelism,
            ..PitOptions::default()
        };
        let search = SearchOptions {
            parallelism,
            ..SearchOptions::default()
        };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                for inst in &instances {
                    black_box(corpus::judge(inst, RankBound::Trivial, &pit_opts, &search, DEFAULT_EXPAND_BUDGET).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, grid_exhaustion, randomized_rank, composed_corpus);
criterion_main!(benches);
