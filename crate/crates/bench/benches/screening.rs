use criterion::{black_box, criterion_group, criterion_main, Criterion};
use polytile_core::{
    case2_candidates, check_e_with, check_k, make_triple, search_case2, EOptions, EquationSolution,
    Target, VertexForm,
};

fn k_over_candidates(c: &mut Criterion) {
    let vertex = [VertexForm::TwoAlpha.equation()];
    for sides in [78u64, 500] {
        let candidates = case2_candidates(sides).unwrap();
        c.bench_function(&format!("check_k case2 N={sides}"), |b| {
            b.iter(|| {
                candidates
                    .iter()
                    .filter(|(_, t)| check_k(t, sides, &vertex).unwrap().passed())
                    .count()
            })
        });
    }
}

fn e_instances(c: &mut Criterion) {
    let two_alpha = EOptions {
        vertex_equations: Some(vec![EquationSolution::new(Target::VertexDelta, 2, 0, 0)]),
        ..EOptions::default()
    };
    let cases = [
        ("witness N=42", make_triple(20, 10, 12, 42).unwrap(), 42),
        ("refutation N=78", make_triple(38, 17, 23, 78).unwrap(), 78),
    ];
    for (name, triple, sides) in cases {
        c.bench_function(&format!("check_e {name}"), |b| {
            b.iter(|| check_e_with(black_box(&triple), sides, &two_alpha).unwrap())
        });
    }
    let pentagon = make_triple(6, 1, 3, 10).unwrap();
    c.bench_function("check_e witness N=5 all vertices", |b| {
        b.iter(|| check_e_with(black_box(&pentagon), 5, &EOptions::default()).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_case2");
    group.sample_size(10);
    group.bench_function("25..=200 with E", |b| b.iter(|| search_case2(25, 200, true).unwrap()));
    group.finish();
}

criterion_group!(benches, k_over_candidates, e_instances, sweep);
criterion_main!(benches);
