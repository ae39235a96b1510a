use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use xsect_core::exchange::{build_disjointness_graph, certify_matching, exchange_lemma1};
use xsect_core::lex::partner_thresholds;
use xsect_core::search::random::{random_shifted_nontrivial, trial_rng};
use xsect_core::search::{enumerate_shifted_intersecting, FamilyClass, Universe};
use xsect_core::set::all_ksets;
use xsect_core::{lex_rank, lex_unrank, GroundParams, LexRank};

fn lex(c: &mut Criterion) {
    let p = GroundParams::new(20, 6).unwrap();
    let sets = all_ksets(GroundParams::new(12, 5).unwrap());
    c.bench_function("lex_rank 12C5 layer", |b| {
        b.iter(|| sets.iter().map(|s| lex_rank(black_box(s)).get()).sum::<u64>())
    });
    c.bench_function("lex_unrank 20C6", |b| {
        b.iter(|| lex_unrank(LexRank::new(black_box(20_000), p).unwrap(), p).unwrap())
    });
    c.bench_function("partner_thresholds (12,4,4)", |b| b.iter(|| partner_thresholds(black_box(12), 4, 4).unwrap()));
}

fn exchange(c: &mut Criterion) {
    let fam = random_shifted_nontrivial(GroundParams::new(11, 4).unwrap(), &mut trial_rng(1, 0)).unwrap();
    c.bench_function("exchange_lemma1 (11,4)", |b| b.iter(|| exchange_lemma1(black_box(&fam)).unwrap()));
    let ex = exchange_lemma1(&fam).unwrap();
    let graph = build_disjointness_graph(&ex.context.fam_a, &ex.context.fam_b).unwrap();
    c.bench_function("certify_matching (11,4)", |b| b.iter(|| certify_matching(black_box(&graph))));
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("shifted maximal enumeration");
    group.sample_size(10);
    for (n, k) in [(9, 3), (10, 4)] {
        let u = Universe::new(GroundParams::new(n, k).unwrap());
        group.bench_function(format!("({n},{k})"), |b| {
            b.iter(|| {
                let mut best = 0;
                enumerate_shifted_intersecting(&u, FamilyClass::Maximal, None, |f| best = best.max(f.diversity()));
                best
            })
        });
    }
    group.finish();
}

criterion_group!(benches, lex, exchange, enumeration);
criterion_main!(benches);
