use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fide_core::fracops::psi_table;
use fide_core::galerkin::{assemble, solve, transform_problem, Problem};

const EXAMPLE1_F: &str = "(-x + sqrt(x)*(sqrt(x)*cos(x) + sqrt(pi)*(besselj0(x/2)*cos(x/2) \
     - besselj1(x/2)*sin(x/2))) - 2*sin(x)) / (2*sqrt(x))";

fn example1() -> Problem {
    Problem::from_sources("example1", 0.5, 0.5, "1", EXAMPLE1_F, "sqrt(x*t)").unwrap()
}

fn bench_assembly(c: &mut Criterion) {
    let p = example1();
    let tp = transform_problem(&p).unwrap();
    let mut group = c.benchmark_group("assemble");
    for n in [8, 16, 32, 64] {
        let psi = psi_table(n, p.q()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| assemble(&tp, black_box(n), &psi).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("solve");
    for n in [8, 16] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| solve(&p, black_box(n)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_assembly);
criterion_main!(benches);
