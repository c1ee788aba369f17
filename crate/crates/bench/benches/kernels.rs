//! Hot paths: lattice normal forms, the full gluing pipeline, and the
//! extremal series product underpinning every structural coefficient.

use std::hint::black_box;

use conifold_core::{
    complete_from_b, glue_check, random_presentation, smith_normal_form, structural_coefficient,
    ExtremalModel, IntMatrix, TransitionPresentation,
};
use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    let entries = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-9..=9i64))).collect();
    IntMatrix::new(rows, cols, entries)
}

fn bench_smith_normal_form(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let m = random_matrix(&mut rng, 12, 8);
    c.bench_function("smith_normal_form 12x8", |b| {
        b.iter(|| smith_normal_form(black_box(&m)))
    });
}

fn bench_validate_random(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = random_presentation(&mut rng, 20);
    c.bench_function("validate k<=20", |b| b.iter(|| black_box(&p).validate().unwrap()));
}

fn bench_glue_sixteen_node(c: &mut Criterion) {
    let ones = IntMatrix::new(16, 1, vec![BigInt::from(1); 16]);
    let p = complete_from_b(16, ones).unwrap();
    c.bench_function("glue_check 16-node", |b| {
        b.iter(|| glue_check(black_box(&p)).unwrap())
    });
}

fn bench_structural_series(c: &mut Criterion) {
    let a = IntMatrix::new(2, 1, vec![BigInt::from(1), BigInt::from(-1)]);
    let bm = IntMatrix::new(2, 1, vec![BigInt::from(1), BigInt::from(1)]);
    let p = TransitionPresentation::new(2, a, bm).unwrap();
    let model = ExtremalModel::new(p, 8);
    c.bench_function("structural_coefficient order 8", |b| {
        b.iter(|| structural_coefficient(black_box(&model), 0, 0, 0).unwrap())
    });
}

criterion_group!(
    kernels,
    bench_smith_normal_form,
    bench_validate_random,
    bench_glue_sixteen_node,
    bench_structural_series
);
criterion_main!(kernels);
