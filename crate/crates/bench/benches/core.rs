use std::f64::consts::FRAC_PI_4;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion as Bench};
use mumsteer_core::criteria::{
    j_mum, Criterion, CriterionId, MeasurementConfig, Orientation, MU_MAX,
};
use mumsteer_core::linalg::hermitian_eigenvalues;
use mumsteer_core::measurements::{build_gsic, build_mums, resolve_gsic_t, resolve_mum_t, TChoice};
use mumsteer_core::scan::{run_sweep, Axis, SweepSpec};
use mumsteer_core::shotsim::{estimate_j, ShotConfig};
use mumsteer_core::states::{munro_mems, random, Family};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn eigenvalues(c: &mut Bench) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("hermitian_eigenvalues");
    for dim in [4, 8, 16, 32] {
        let m = random::mixed_matrix(&mut rng, dim, dim);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &m, |b, m| {
            b.iter(|| hermitian_eigenvalues(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn construction(c: &mut Bench) {
    let mut group = c.benchmark_group("build");
    for d in [2, 3, 5, 8] {
        let t = resolve_mum_t(d, TChoice::Auto).unwrap();
        group.bench_with_input(BenchmarkId::new("mums", d), &d, |b, &d| {
            b.iter(|| build_mums(d, black_box(t)).unwrap())
        });
        let t = resolve_gsic_t(d, TChoice::Auto).unwrap();
        group.bench_with_input(BenchmarkId::new("gsic", d), &d, |b, &d| {
            b.iter(|| build_gsic(d, black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn functional(c: &mut Bench) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let q = build_mums(2, resolve_mum_t(2, TChoice::Ideal).unwrap())
        .unwrap()
        .conjugate();
    let mut group = c.benchmark_group("j_mum");
    for d in [2, 4, 8] {
        let p = build_mums(d, resolve_mum_t(d, TChoice::Auto).unwrap()).unwrap();
        let rho = random::state(&mut rng, d, 2);
        group.bench_with_input(BenchmarkId::from_parameter(d), &rho, |b, rho| {
            b.iter(|| j_mum(black_box(rho), &p, &q, Orientation::QuditQubit).unwrap())
        });
    }
    group.finish();

    let crit = Criterion::build(CriterionId::Thm3Gsic, 2, &MeasurementConfig::default()).unwrap();
    let rho = munro_mems(0.8).unwrap();
    c.bench_function("evaluate_thm3_gsic_2x2", |b| {
        b.iter(|| crit.evaluate(black_box(&rho), MU_MAX).unwrap())
    });
}

fn sweep(c: &mut Bench) {
    let spec = SweepSpec {
        family: Family::WernerDerivative {
            p: 1.0,
            theta: FRAC_PI_4,
        },
        axes: vec![
            Axis::new("p", 0.0, 1.0, 50),
            Axis::new("theta", 0.0, FRAC_PI_4, 50),
        ],
        criterion: CriterionId::Thm1Mum,
        mu: MU_MAX,
        measurement: MeasurementConfig::default(),
    };
    c.bench_function("sweep_werner_50x50_thm1", |b| {
        b.iter(|| run_sweep(black_box(&spec)).unwrap())
    });
}

fn shots(c: &mut Bench) {
    let p = build_mums(2, resolve_mum_t(2, TChoice::Ideal).unwrap()).unwrap();
    let q = p.conjugate();
    let rho = munro_mems(0.8).unwrap();
    let cfg = ShotConfig::new(100_000, 7).unwrap();
    c.bench_function("estimate_j_1e5_shots", |b| {
        b.iter(|| estimate_j(black_box(&rho), &p, &q, Orientation::QuditQubit, &cfg).unwrap())
    });
}

criterion_group!(benches, eigenvalues, construction, functional, sweep, shots);
criterion_main!(benches);
