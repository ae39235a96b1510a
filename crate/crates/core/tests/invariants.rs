use proptest::prelude::*;
use xsect_core::binom::{binom, choose, parse_exact};
use xsect_core::exchange::{exchange_lemma1, exchange_thm4, thm4_window, Point};
use xsect_core::lex::{lex_next, partner_by_scan, partner_of_segment};
use xsect_core::matching::hopcroft_karp;
use xsect_core::search::random::{random_cross_intersecting_pair, random_intersecting, random_shifted_nontrivial, trial_rng};
use xsect_core::set::all_ksets;
use xsect_core::shifting::{shift_family, shift_family_any};
use xsect_core::{
    are_cross_intersecting, family_order, is_shifted, kk_compress_pair, lex_family, lex_rank, lex_unrank,
    shift_preserving_nontriviality, shift_to_fixpoint, BigCount, Error, Exact, GroundParams, KSet, LexRank, SetFamily,
    ShiftPair,
};

fn params() -> impl Strategy<Value = GroundParams> {
    (2usize..=9).prop_flat_map(|n| (Just(n), 1..n)).prop_map(|(n, k)| GroundParams::new(n, k).unwrap())
}

/// An arbitrary (not necessarily intersecting) family.
fn any_family() -> impl Strategy<Value = SetFamily> {
    params().prop_flat_map(|p| {
        let layer = all_ksets(p);
        proptest::collection::vec(any::<bool>(), layer.len()).prop_map(move |keep| {
            SetFamily::new(p, layer.iter().zip(&keep).filter(|(_, &k)| k).map(|(s, _)| *s)).unwrap()
        })
    })
}

/// A random maximal or partial intersecting family with `n >= 2k`.
fn intersecting_family() -> impl Strategy<Value = SetFamily> {
    (4usize..=10, any::<u64>(), any::<bool>()).prop_flat_map(|(n, seed, maximal)| {
        (1..=n / 2).prop_map(move |k| {
            random_intersecting(GroundParams::new(n, k).unwrap(), &mut trial_rng(seed, 0), maximal)
        })
    })
}

fn shifted_nontrivial() -> impl Strategy<Value = SetFamily> {
    (2usize..=4, any::<u64>()).prop_flat_map(|(k, seed)| {
        (2 * k + 1..=11).prop_map(move |n| {
            random_shifted_nontrivial(GroundParams::new(n, k).unwrap(), &mut trial_rng(seed, 1)).unwrap()
        })
    })
}

/// Dominance: `a` is obtained from `b` by moving elements down.
fn dominates(a: &KSet, b: &KSet) -> bool {
    let (x, y) = (a.to_vec(), b.to_vec());
    x.iter().zip(&y).all(|(p, q)| p <= q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_unrank_is_a_bijection(p in params(), r in any::<u64>()) {
        let size = choose(p.n(), p.k());
        let rank = 1 + r % size;
        let s = lex_unrank(LexRank::new(rank, p).unwrap(), p).unwrap();
        prop_assert_eq!(s.len(), p.k());
        prop_assert_eq!(lex_rank(&s).get(), rank);
        if rank < size {
            prop_assert_eq!(lex_rank(&lex_next(&s).unwrap()).get(), rank + 1);
        }
    }

    #[test]
    fn rank_order_is_lex_order(p in params(), r1 in any::<u64>(), r2 in any::<u64>()) {
        let size = choose(p.n(), p.k());
        let a = lex_unrank(LexRank::new(1 + r1 % size, p).unwrap(), p).unwrap();
        let b = lex_unrank(LexRank::new(1 + r2 % size, p).unwrap(), p).unwrap();
        prop_assert_eq!(a.lex_cmp(&b), lex_rank(&a).cmp(&lex_rank(&b)));
        // the lowest element of the symmetric difference decides
        if a != b {
            let low = (a.bits() ^ b.bits()).trailing_zeros() as usize + 1;
            prop_assert_eq!(a.contains(low), lex_rank(&a) < lex_rank(&b));
        }
    }

    #[test]
    fn lex_segment_is_a_prefix_of_the_layer(p in params(), m in any::<u64>()) {
        let m = m % (choose(p.n(), p.k()) + 1);
        let seg = lex_family(p, &BigCount::from(m)).unwrap();
        let layer = all_ksets(p);
        prop_assert_eq!(seg.members(), &layer[..m as usize]);
    }

    #[test]
    fn one_shift_keeps_size_and_intersection((f, i, j) in any_family().prop_flat_map(|f| {
        let n = f.n();
        (Just(f), 1..n).prop_flat_map(move |(f, i)| (Just(f), Just(i), i + 1..=n))
    })) {
        let g = shift_family(&f, ShiftPair::new(i, j, f.n()).unwrap());
        prop_assert_eq!(g.len(), f.len());
        if f.is_intersecting() {
            prop_assert!(g.is_intersecting());
        }
        prop_assert!(family_order(&g).ok() <= family_order(&f).ok());
    }

    #[test]
    fn shifting_to_a_fixed_point(f in any_family()) {
        let (g, trace) = shift_to_fixpoint(&f).unwrap();
        prop_assert!(is_shifted(&g));
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(f.is_intersecting(), f.is_intersecting() && g.is_intersecting());
        // replaying the trace gives the same family
        let mut h = f.clone();
        for &p in &trace.shifts {
            h = shift_family(&h, p);
        }
        prop_assert_eq!(h, g.clone());
        // shifted families are down-sets for dominance
        let layer = all_ksets(g.params());
        for a in g.iter() {
            for b in &layer {
                if dominates(b, a) {
                    prop_assert!(g.contains(b));
                }
            }
        }
    }

    #[test]
    fn any_shift_keeps_size_and_intersection((f, i, j) in intersecting_family().prop_flat_map(|f| {
        let n = f.n();
        (Just(f), 1..=n, 1..=n)
    })) {
        prop_assume!(i != j);
        let g = shift_family_any(&f, i, j).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert!(g.is_intersecting());
    }

    #[test]
    fn nontrivial_shift_keeps_nontriviality(f in intersecting_family()) {
        prop_assume!(!f.is_trivial() && !f.is_empty());
        let out = shift_preserving_nontriviality(&f).unwrap();
        prop_assert_eq!(out.family.len(), f.len());
        prop_assert!(out.family.is_intersecting());
        prop_assert!(!out.family.is_trivial());
    }

    #[test]
    fn exchange_step_improves_lex_order(f in shifted_nontrivial()) {
        let ex = exchange_lemma1(&f).unwrap();
        prop_assert!(ex.family.is_intersecting());
        prop_assert!(ex.family.len() >= f.len());
        prop_assert!(ex.order_after < ex.order_before);
        prop_assert!(ex.graph.regular_degree().is_some());
    }

    #[test]
    fn kk_compression_keeps_cross_intersection(seed in any::<u64>(), n in 6usize..=10, a in 2usize..=4, b in 2usize..=4) {
        prop_assume!(a + b <= n);
        let (f, g) = random_cross_intersecting_pair(n, a, b, &mut trial_rng(seed, 0)).unwrap();
        let (lf, lg) = kk_compress_pair(&f, &g).unwrap();
        prop_assert_eq!((lf.len(), lg.len()), (f.len(), g.len()));
        prop_assert!(are_cross_intersecting(&lf, &lg).unwrap());
    }

    #[test]
    fn partner_thresholds_agree_with_scan(n in 4usize..=9, a in 1usize..=4, b in 1usize..=4, m in any::<u64>()) {
        prop_assume!(a < n && b < n);
        let pa = GroundParams::new(n, a).unwrap();
        let m = m % (pa.layer_size() + 1);
        let seg = lex_family(pa, &BigCount::from(m)).unwrap();
        prop_assert_eq!(partner_of_segment(pa, m, b).unwrap(), partner_by_scan(&seg, b).unwrap());
    }

    #[test]
    fn pascal_rule_holds_for_rationals(num in -40i64..40, den in 1i64..8, m in 0i64..8) {
        let x = Exact::new(num.into(), den.into());
        let one = Exact::from_integer(1.into());
        prop_assert_eq!(binom(&x, m), binom(&(&x - &one), m) + binom(&(&x - &one), m - 1));
    }

    #[test]
    fn matching_size_is_maximum(rows in proptest::collection::vec(0u16..256, 1..8)) {
        let right = 8;
        let adj: Vec<Vec<usize>> = rows.iter().map(|&r| (0..right).filter(|v| r >> v & 1 == 1).collect()).collect();
        let mate = hopcroft_karp(&adj, right);
        let size = mate.iter().flatten().count();
        // brute force: largest left subset with a system of distinct representatives
        let best = (0u32..1 << adj.len())
            .filter(|&s| {
                (0u32..1 << adj.len()).all(|t| {
                    t & s != t || {
                        let nb = (0..adj.len()).filter(|&u| t >> u & 1 == 1).fold(0u16, |acc, u| acc | rows[u]);
                        nb.count_ones() >= t.count_ones()
                    }
                })
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap();
        prop_assert_eq!(size, best);
    }
}

#[test]
fn family_json_is_canonical() {
    let text = r#"{"n":6,"k":3,"sets":[[2,3,4],[1,2,3],[1,4,5]]}"#;
    let fam: SetFamily = serde_json::from_str(text).unwrap();
    assert_eq!(
        serde_json::to_string(&fam).unwrap(),
        r#"{"n":6,"k":3,"sets":[[1,2,3],[1,4,5],[2,3,4]]}"#
    );
}

#[test]
fn decimal_and_fraction_parse_alike() {
    assert_eq!(parse_exact("2.5"), parse_exact("5/2"));
    assert_eq!(parse_exact("10/4"), parse_exact("5/2"));
    assert!(parse_exact("1/0").is_none());
    assert!(parse_exact("x").is_none());
}

/// Exchanges succeed wherever a context exists; for Point 1 the last set of
/// `L(a, m)` need not admit an index `l` once `m` passes `C(n-j, a-j)`.
#[test]
fn thm4_exchange_across_windows() {
    for (n, a, b, j, p) in [(9, 3, 4, 2, Point::One), (9, 4, 3, 3, Point::Two), (9, 4, 4, 2, Point::Three)] {
        let (lo, hi) = thm4_window(n, a, b, j, p).unwrap();
        let mut done = 0;
        for m in lo.max(1)..=hi {
            let f = lex_family(GroundParams::new(n, a).unwrap(), &BigCount::from(m)).unwrap();
            match exchange_thm4(&f, b, j, p) {
                Ok(ex) => {
                    assert!(are_cross_intersecting(&ex.new_f, &ex.new_g).unwrap());
                    assert!(ex.new_f.len() + ex.new_g.len() >= f.len() + ex.partner.len());
                    done += 1;
                }
                Err(Error::NoFranklIndex(_)) if p == Point::One => {}
                Err(e) => panic!("({n},{a},{b},{j}) m={m}: {e}"),
            }
        }
        assert!(done > 0, "({n},{a},{b},{j}): no exchange applied");
    }
}

/// The Point 2 bound is not monotone in `j`; the verifier treats each `j`
/// separately.
#[test]
fn thm4_bound_is_not_monotone_in_j() {
    let bound = |n: usize, a: usize, b: usize, j: usize| {
        choose(n, b) as i64 + choose(n - j, a - j) as i64 - choose(n - j, b) as i64
    };
    let mut flips = Vec::new();
    for n in 7..=10 {
        for a in 2..=4 {
            for b in 2..=a {
                for j in 1..a {
                    let (x, y) = (bound(n, a, b, j), bound(n, a, b, j + 1));
                    if x < y {
                        flips.push(format!("({n},{a},{b}): j={j} gives {x}, j={} gives {y}", j + 1));
                    }
                }
            }
        }
    }
    for f in &flips {
        println!("{f}");
    }
    assert!(flips.iter().any(|f| f.starts_with("(9,4,3): j=3")));
}
