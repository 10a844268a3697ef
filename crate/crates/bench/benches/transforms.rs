use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use hgfrft_core::filtering::FrequencyRegion;
use hgfrft_core::graph::{Graph, ShiftKind};
use hgfrft_core::linalg::{eig_normal, frac_power, CMatrix};
use hgfrft_core::sampling::{bandlimited_basis, greedy_sample};
use hgfrft_core::transform::{hgfrft, JointSignal, OperatorFactory};

fn random_signal(m: usize, n: usize, seed: u64) -> JointSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    JointSignal::new(CMatrix::from_fn(m, n, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    }))
}

fn bench_eig_normal(c: &mut Criterion) {
    let f = OperatorFactory::dft(64).unwrap();
    let base = f.base().clone();
    c.bench_function("eig_normal_dft64", |b| {
        b.iter(|| eig_normal(black_box(&base)).unwrap())
    });
}

fn bench_frac_power(c: &mut Criterion) {
    let f = OperatorFactory::dft(64).unwrap();
    let dec = eig_normal(f.base()).unwrap();
    c.bench_function("frac_power_dft64", |b| {
        b.iter(|| frac_power(black_box(&dec), black_box(0.7)).unwrap())
    });
}

fn bench_joint_transform(c: &mut Criterion) {
    let graph = Graph::random_geometric(16, 0.5, 1).unwrap().graph;
    let fh = OperatorFactory::dft(32).unwrap();
    let fg = OperatorFactory::gft(&graph, ShiftKind::Laplacian).unwrap();
    let oh = fh.at_order(0.7).unwrap();
    let og = fg.at_order(0.5).unwrap();
    let sig = random_signal(32, 16, 9);
    c.bench_function("hgfrft_32x16", |b| {
        b.iter(|| hgfrft(black_box(&sig), &oh, &og).unwrap())
    });
}

fn bench_greedy(c: &mut Criterion) {
    let graph = Graph::random_geometric(8, 0.6, 2).unwrap().graph;
    let fh = OperatorFactory::dft(8).unwrap();
    let fg = OperatorFactory::gft(&graph, ShiftKind::Laplacian).unwrap();
    let oh = fh.at_order(0.7).unwrap();
    let og = fg.at_order(0.5).unwrap();
    let support = FrequencyRegion::from_flat([0usize, 1, 2, 3], 8);
    let u_k = bandlimited_basis(&oh, &og, &support).unwrap();
    c.bench_function("greedy_sample_64x4", |b| {
        b.iter(|| greedy_sample(black_box(&u_k), 4).unwrap())
    });
}

criterion_group!(
    benches,
    bench_eig_normal,
    bench_frac_power,
    bench_joint_transform,
    bench_greedy
);
criterion_main!(benches);
