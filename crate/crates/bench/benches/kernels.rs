use criterion::{criterion_group, criterion_main, Criterion};
use semisign::iplog::solve_iplog;
use semisign::num::algebraic::roots;
use semisign::num::PolyQ;
use semisign::relations::{default_bound, multiplicative_lattice};
use semisign::{
    nonnegative_membership_diag, positive_membership, sign_set, AlgebraicNumber, ConeSystem, LogLinExpr, Rational,
    RationalMatrix,
};
use std::hint::black_box;

fn rotation() -> RationalMatrix {
    let q = |n: i64| Rational::new(n.into(), 5.into());
    RationalMatrix::from_rows(&[vec![q(3), q(-4)], vec![q(4), q(3)]], &q(0))
}

fn bench_sign_set(c: &mut Criterion) {
    let m = RationalMatrix::from_ints(&[&[1, -2, 0], &[2, 1, 1], &[0, 1, 3]]);
    c.bench_function("sign_set 3x3", |b| b.iter(|| sign_set(black_box(&m)).unwrap()));
    let r = rotation();
    c.bench_function("sign_set rotation", |b| b.iter(|| sign_set(black_box(&r)).unwrap()));
}

fn bench_roots(c: &mut Criterion) {
    let p = PolyQ::new([-2, 0, 0, 0, 1].iter().map(|&x| Rational::from_integer(x.into())).collect());
    c.bench_function("roots x^4 - 2", |b| b.iter(|| roots(black_box(&p))));
}

fn bench_relations(c: &mut Criterion) {
    let nums: Vec<AlgebraicNumber> = [2, 3, 6, -12].iter().map(|&x| AlgebraicNumber::from_int(x)).collect();
    let bound = default_bound(&nums);
    c.bench_function("multiplicative lattice 4 rationals", |b| {
        b.iter(|| multiplicative_lattice(black_box(&nums), bound))
    });
}

fn bench_iplog(c: &mut Criterion) {
    let l = |x: i64| LogLinExpr::log(&AlgebraicNumber::from_int(x));
    let rows = vec![vec![l(2), l(3).scale(&Rational::from_integer((-1).into()))], vec![l(5).scale(&Rational::from_integer((-1).into())), l(3)]];
    let sys = ConeSystem::from_logs(&rows, None, 2).unwrap();
    c.bench_function("iplog 2x2", |b| b.iter(|| solve_iplog(black_box(&sys))));
}

fn bench_membership(c: &mut Criterion) {
    let pair = [RationalMatrix::from_ints(&[&[0, 2], &[2, 0]]), RationalMatrix::from_ints(&[&[1, 1], &[1, 1]])];
    c.bench_function("positive membership pair", |b| b.iter(|| positive_membership(black_box(&pair)).unwrap()));
    let diag = [RationalMatrix::from_ints(&[&[-2, -2], &[0, 2]]), RationalMatrix::from_ints(&[&[6, -4], &[0, 14]])];
    c.bench_function("nonnegative membership diag", |b| {
        b.iter(|| nonnegative_membership_diag(black_box(&diag)).unwrap())
    });
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = bench_sign_set, bench_roots, bench_relations, bench_iplog, bench_membership
}
criterion_main!(kernels);
