use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use mkw_core::embedding::phi;
use mkw_core::forest::enumerate_forests;
use mkw_core::growth::primitive_projection;
use mkw_core::mkw::mkw_coproduct;
use mkw_core::postlie::gl_product;
use mkw_core::{Alphabet, LinComb};

fn sum_of_degree(n: usize, a: &Alphabet) -> LinComb {
    let mut x = LinComb::zero();
    for f in enumerate_forests(n, a) {
        x.add_term(f, mkw_core::lincomb::int(1));
    }
    x
}

fn hopf(c: &mut Criterion) {
    let plain = Alphabet::plain();
    let mut g = c.benchmark_group("hopf");
    for n in [3, 4, 5] {
        let x = sum_of_degree(n, &plain);
        g.bench_with_input(BenchmarkId::new("mkw_coproduct", n), &x, |b, x| b.iter(|| mkw_coproduct(black_box(x))));
        g.bench_with_input(BenchmarkId::new("primitive_projection", n), &x, |b, x| {
            b.iter(|| primitive_projection(black_box(x)))
        });
        g.bench_with_input(BenchmarkId::new("phi", n), &x, |b, x| b.iter(|| phi(black_box(x))));
    }
    for n in [2, 3] {
        let x = sum_of_degree(n, &plain);
        g.bench_with_input(BenchmarkId::new("gl_product", n), &x, |b, x| b.iter(|| gl_product(black_box(x), black_box(x))));
    }
    g.finish();
}

criterion_group!(benches, hopf);
criterion_main!(benches);
