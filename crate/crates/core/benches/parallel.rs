use std::hint::black_box;

use amenable_entropy::bowen::{candidate_balls, weighted_w, BowenOptions, TargetSet};
use amenable_entropy::combinatorics::verify_ln_bound;
use amenable_entropy::entropy_top::{htop_profile, OpenCoverSpec};
use amenable_entropy::group::{FolnerSequence, GroupSpec};
use amenable_entropy::measures::{local_entropy_batch, ProductMeasure};
use amenable_entropy::numeric::Exponent;
use amenable_entropy::shift_space::{eps, ShiftSpace};
use amenable_entropy::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::Ratio;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn brin_katok(c: &mut Criterion) {
    let mu = ProductMeasure::bernoulli_frac(GroupSpec::z(), &[(3, 10), (7, 10)]).unwrap();
    let seq = FolnerSequence::zd_boxes(1).unwrap();
    let ns: Vec<usize> = (100..=2000).step_by(100).collect();
    let seeds: Vec<u64> = (0..64).collect();
    let mut g = c.benchmark_group("brin_katok_batch");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| local_entropy_batch(&mu, eps(1, 2), &seq, &ns, black_box(&seeds), exec).unwrap())
        });
    }
    g.finish();
}

fn ln_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("ln_bound_grid");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_ln_bound(black_box(500), Ratio::new(1, 20), Ratio::new(1, 50), 5, exec).unwrap())
        });
    }
    g.finish();
}

fn lp_components(c: &mut Criterion) {
    let s = ShiftSpace::full(GroupSpec::z(), 2).unwrap();
    let seq = FolnerSequence::zd_boxes(1).unwrap();
    let fam = candidate_balls(&s, &seq, eps(1, 4), 4, 7, &TargetSet::Whole).unwrap();
    let mut g = c.benchmark_group("weighted_cover_lp");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = BowenOptions {
            exec,
            ..BowenOptions::default()
        };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| weighted_w(&s, &TargetSet::Whole, &fam, black_box(&Exponent::real(0.6)), opts).unwrap())
        });
    }
    g.finish();
}

fn htop(c: &mut Criterion) {
    let s = ShiftSpace::full(GroupSpec::zd(2).unwrap(), 2).unwrap();
    let gm = ShiftSpace::golden_mean();
    let boxes2 = FolnerSequence::zd_boxes(2).unwrap();
    let boxes1 = FolnerSequence::zd_boxes(1).unwrap();
    let ns1: Vec<usize> = (1..=400).collect();
    let mut g = c.benchmark_group("htop_profile");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new("z2_full", name), |b| {
            b.iter(|| {
                htop_profile(
                    &s,
                    OpenCoverSpec::alphabet(),
                    &boxes2,
                    black_box(&[1, 2, 3, 4, 5, 6]),
                    exec,
                )
                .unwrap()
            })
        });
        g.bench_function(BenchmarkId::new("golden_mean", name), |b| {
            b.iter(|| htop_profile(&gm, OpenCoverSpec::refined(2), &boxes1, black_box(&ns1), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, brin_katok, ln_grid, lp_components, htop);
criterion_main!(benches);
