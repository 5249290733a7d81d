use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::BigRational;

use qkac::charring::{denominator, extract_multiplicities, weyl_kac};
use qkac::{Drinfeld, RootVec, SpecPoint, Verma, Weight};
use qkac_bench::borel;

fn word_bases(c: &mut Criterion) {
    let mut g = c.benchmark_group("dim_series");
    for (name, h) in [("A2", 6), ("G2", 6), ("A3", 4), ("A1~", 6)] {
        g.bench_with_input(BenchmarkId::new(name, h), &h, |b, &h| b.iter(|| borel(name, h).dim_series(h).unwrap()));
    }
    g.finish();
}

fn pairing(c: &mut Criterion) {
    let mut g = c.benchmark_group("pairing_matrix");
    g.sample_size(20);
    for (name, gamma) in [("A2", vec![2, 2]), ("B2", vec![2, 3]), ("G2", vec![2, 3])] {
        let gamma = RootVec(gamma);
        let dr = Drinfeld::new(borel(name, gamma.height()));
        dr.borel().component_basis(&gamma).unwrap();
        g.bench_with_input(BenchmarkId::new(name, &gamma), &gamma, |b, gamma| b.iter(|| dr.pairing_matrix(gamma).unwrap()));
    }
    g.finish();
}

fn radical(c: &mut Criterion) {
    let dr = Drinfeld::new(borel("G2", 5));
    let gamma = RootVec(vec![2, 3]);
    let z = SpecPoint::Rational(BigRational::new(1.into(), 3.into()));
    dr.borel().component_basis(&gamma).unwrap();
    c.bench_function("radical_at/G2/(2,3)", |b| b.iter(|| dr.radical_at(&gamma, &z).unwrap()));
}

fn characters(c: &mut Criterion) {
    let h = 6;
    let b = borel("B2", h);
    let d = b.datum().clone();
    let denom = denominator(2, &extract_multiplicities(&b.dim_series(h).unwrap()).unwrap(), h);
    let lambda = Weight(vec![1, 1]);
    c.bench_function("weyl_kac/B2/6", |bch| bch.iter(|| weyl_kac(&d, &lambda, &denom).unwrap()));
}

fn gram(c: &mut Criterion) {
    let b = borel("A2", 4);
    let v = Verma::new(b, Weight(vec![1, 1])).unwrap();
    let gamma = RootVec(vec![2, 2]);
    let zs = [BigRational::from_integer(2.into())];
    c.bench_function("gram_matrix/A2/(1,1)/(2,2)", |bch| bch.iter(|| v.gram_matrix(&gamma, &zs).unwrap()));
}

criterion_group!(benches, word_bases, pairing, radical, characters, gram);
criterion_main!(benches);
