use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use sixteenons::sample;

fn products(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("product");
    for level in [3u8, 4] {
        let x = sample::nonzero_element(&mut rng, level, 9);
        let y = sample::nonzero_element(&mut rng, level, 9);
        group.bench_with_input(BenchmarkId::new("mul", level), &(x, y), |b, (x, y)| {
            b.iter(|| black_box(x) * black_box(y))
        });
    }
    let x = sample::nonzero_element(&mut rng, 4, 9);
    let y = sample::nonzero_element(&mut rng, 4, 9);
    group.bench_function("conway_smith_16", |b| b.iter(|| black_box(&x).mul_conway_smith(black_box(&y))));
    group.bench_function("simplified_16", |b| b.iter(|| black_box(&x).mul_16on_simplified(black_box(&y))));
    group.finish();
}

fn inverse(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let x = sample::nonzero_element(&mut rng, 4, 9);
    c.bench_function("inverse_16", |b| b.iter(|| black_box(&x).inverse()));
}

criterion_group!(benches, products, inverse);
criterion_main!(benches);
