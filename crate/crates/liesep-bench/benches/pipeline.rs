use criterion::{black_box, criterion_group, criterion_main, Criterion};

use liesep_core::examples_builtin::{build_a13, build_sl4};
use liesep_core::geometry::is_flat;
use liesep_core::symcore::{gcd, parse_polynomial, q, vars, Polynomial, Vars};

fn poly(s: &str, vs: &Vars) -> Polynomial {
    parse_polynomial(s, vs).unwrap()
}

fn bench_gcd(c: &mut Criterion) {
    let vs = vars(&["x", "y", "z"]);
    let r = poly("x^3*y - 2*y*z^2 + 5*x*z + 7", &vs);
    let a = &poly("x^4 + y^3*z - 3*x*y + 1", &vs) * &r;
    let b = &poly("y^4 - x^2*z^2 + z - 2", &vs) * &r;
    c.bench_function("gcd_trivariate", |bch| bch.iter(|| gcd(black_box(&a), black_box(&b))));
}

fn bench_a13(c: &mut Criterion) {
    let ex = build_a13(q(1), q(2), q(3));
    c.bench_function("a13_pipeline", |bch| bch.iter(|| ex.run(black_box(&ex.spec_consistent)).unwrap()));
}

fn bench_sl4(c: &mut Criterion) {
    let ex = build_sl4();
    let mut group = c.benchmark_group("sl4");
    group.sample_size(10);
    group.bench_function("flatness", |bch| bch.iter(|| is_flat(black_box(&ex.metric)).unwrap()));
    group.bench_function("pipeline", |bch| bch.iter(|| ex.run().unwrap()));
    group.finish();
}

criterion_group!(benches, bench_gcd, bench_a13, bench_sl4);
criterion_main!(benches);
