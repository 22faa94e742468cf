use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wakimoto_core::affine::{verify_relation, Realization};
use wakimoto_core::characters::{fock_character, verma_character, RootDatum};
use wakimoto_core::fields::wakimoto_currents_a22;
use wakimoto_core::fock::{FockSpace, FreeFieldData, Mode};
use wakimoto_core::lie::GeneratorLabel;
use wakimoto_core::linalg::{nullspace, Matrix};
use wakimoto_core::scalar::{q, qr};
use wakimoto_core::singular::{find_singular, restricted_realization, RaisingSet};
use wakimoto_core::{Level, Q};

fn relation(c: &mut Criterion) {
    let cur = wakimoto_currents_a22();
    let mut g = c.benchmark_group("relation");
    g.sample_size(10);
    for (name, level) in [("numeric", Level::Value(qr(7, 3))), ("symbolic", Level::Symbolic)] {
        let sp = FockSpace::wakimoto(Arc::new(FreeFieldData::a2_2()), level, vec![qr(1, 3)]).unwrap().truncated(Mode::int(2), 1);
        let real = Realization::new(cur.clone(), sp).unwrap();
        let (x, y) = (GeneratorLabel::e(1, 1), GeneratorLabel::e(1, -1));
        g.bench_function(name, |b| b.iter(|| verify_relation(&real, &x, Mode::new(1, 2), &y, Mode::new(-1, 2)).unwrap()));
    }
    g.finish();
}

fn character(c: &mut Criterion) {
    let datum = RootDatum::a2_2();
    let sp = FockSpace::wakimoto(Arc::new(FreeFieldData::a2_2()), Level::Value(q(1)), vec![qr(2, 7)]).unwrap().truncated(Mode::int(3), 2);
    c.bench_function("character/verma_d3", |b| b.iter(|| verma_character(black_box(Mode::int(3)), 2, &datum)));
    c.bench_function("character/fock_d3", |b| b.iter(|| fock_character(&sp, Mode::int(3)).unwrap()));
}

fn singular(c: &mut Criterion) {
    let real = restricted_realization(&wakimoto_currents_a22(), qr(7, 5), Mode::int(1), 1).unwrap();
    let mut g = c.benchmark_group("singular");
    g.sample_size(10);
    g.bench_function("restricted_deg1", |b| b.iter(|| find_singular(&real, Mode::int(1), RaisingSet::Full, 0).unwrap()));
    g.finish();
}

fn kernel(c: &mut Criterion) {
    // rank ≤ 30 by construction: product of 60×30 and 30×80 small-integer matrices
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rnd = |r: usize, s: usize| -> Vec<Vec<Q>> { (0..r).map(|_| (0..s).map(|_| qr(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()).collect() };
    let (a, b) = (rnd(60, 30), rnd(30, 80));
    let rows = a.iter().map(|ar| (0..80).map(|j| ar.iter().zip(&b).map(|(x, br)| x * &br[j]).sum()).collect()).collect();
    let m = Matrix::from_rows(80, rows);
    c.bench_function("nullspace/60x80_rank30", |bch| bch.iter(|| nullspace(black_box(&m))));
}

criterion_group!(benches, relation, character, singular, kernel);
criterion_main!(benches);
