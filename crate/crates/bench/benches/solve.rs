use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mesplan_bench::load;
use mesplan_core::solver::separate_cones;
use mesplan_core::{bf_solve, build_extensive_form, ph_solve, BuildOptions, PhConfig, SolverConfig};

fn build(c: &mut Criterion) {
    let case1 = load("feeder15.json", "case1.json");
    c.bench_function("build extensive form, case 1", |b| {
        b.iter(|| {
            build_extensive_form(&case1.network, &case1.assets, &case1.scenarios, case1.horizon(), &BuildOptions::default())
                .unwrap()
        })
    });
    let model =
        build_extensive_form(&case1.network, &case1.assets, &case1.scenarios, case1.horizon(), &BuildOptions::default()).unwrap();
    let x: Vec<f64> = model.columns.iter().map(|c| if c.ub.is_finite() { c.ub } else { c.lb }).collect();
    c.bench_function("separate cones, case 1", |b| b.iter(|| separate_cones(&model, black_box(&x), 1e-6).ok()));
}

fn solve(c: &mut Criterion) {
    let small = load("feeder3.json", "small_case.json");
    let mut group = c.benchmark_group("small instance");
    group.sample_size(10);
    group.bench_function("direct", |b| {
        b.iter(|| {
            bf_solve(&small.network, &small.assets, &small.scenarios, small.horizon(), &BuildOptions::default(), &SolverConfig::default())
                .unwrap()
        })
    });
    group.bench_function("hedging", |b| {
        let cfg = PhConfig { threads: Some(1), ..Default::default() };
        b.iter(|| ph_solve(&small.network, &small.assets, &small.scenarios, small.horizon(), &BuildOptions::default(), &cfg).unwrap())
    });
    group.finish();
}

criterion_group!(benches, build, solve);
criterion_main!(benches);
