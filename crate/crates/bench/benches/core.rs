use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qdiag_core::hecke::{diag_kernel_of_p, e21, HeckeElt, Sign};
use qdiag_core::pplactic::{lemma_brute_check, preplactic_check, verify_conjecture, IdealVariant};
use qdiag_core::qma::{expand_diagonal, DEFAULT_MAX_BLOCK};
use qdiag_core::rmat::pi;

fn hecke(c: &mut Criterion) {
    let x = HeckeElt::from_word(&[1, 2, 1, 3, 2], 4).unwrap();
    let y = HeckeElt::from_word(&[3, 2, 1, 2], 4).unwrap();
    c.bench_function("hecke mul r=4", |b| b.iter(|| black_box(&x).mul(black_box(&y)).unwrap()));
    c.bench_function("diag kernel r=4", |b| b.iter(|| diag_kernel_of_p(black_box(4)).unwrap()));
}

fn rmat(c: &mut Criterion) {
    let e = e21(Sign::Plus);
    c.bench_function("pi e21 n=3", |b| b.iter(|| pi(black_box(&e), 3, 3).unwrap()));
    c.bench_function("expand diagonal (1,1,1)", |b| {
        b.iter(|| expand_diagonal(3, black_box(&[1, 1, 1])).unwrap())
    });
}

fn pplactic(c: &mut Criterion) {
    let mut g = c.benchmark_group("pplactic");
    g.sample_size(10);
    g.bench_function("preplactic r=3", |b| {
        b.iter(|| preplactic_check(3, &[IdealVariant::Concat, IdealVariant::ActionClosed]).unwrap())
    });
    g.bench_function("lemma brute", |b| b.iter(|| lemma_brute_check(Sign::Plus).unwrap()));
    g.bench_function("conjecture d=3 r=4", |b| {
        b.iter(|| verify_conjecture(3, 4, DEFAULT_MAX_BLOCK).unwrap())
    });
    g.finish();
}

criterion_group!(benches, hecke, rmat, pplactic);
criterion_main!(benches);
