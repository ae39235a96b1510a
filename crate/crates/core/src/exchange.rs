//! The exchange `F' = (F \ A) ∪ B` driven by a regular disjointness graph,
//! and its cross-intersecting variants.

use rayon::prelude::*;
use serde::Serialize;

use crate::binom::choose;
use crate::error::{Error, Result};
use crate::family::{are_cross_intersecting, SetFamily};
use crate::lex::{family_order, is_initial_segment, lex_rank, lex_unrank, max_compatible_partner, LexRank};
use crate::matching::{hall_violator, hopcroft_karp};
use crate::set::{subsets_of_mask, GroundParams, KSet};
use crate::shifting::{frankl_l, is_shifted, shift_to_fixpoint};

/// The bundle `(F, l, L, A, B)` around the max-order set `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeContext {
    /// Max-order member (Lemma 1, Points 1–2) or first non-member (Point 3).
    pub pivot: KSet,
    pub l: usize,
    pub big_l: KSet,
    /// Sets agreeing with the pivot on the prefix.
    pub fam_a: SetFamily,
    /// Sets whose trace on the prefix is exactly `L`.
    pub fam_b: SetFamily,
    pub prefix_len: usize,
}

impl ExchangeContext {
    fn build(pivot: KSet, big_l: KSet, l: usize, prefix_len: usize, a: usize, b: usize) -> Result<Self> {
        let n = pivot.n();
        let prefix = KSet::prefix(n, prefix_len);
        let tail = prefix.complement();
        let head_a = pivot.intersection(&prefix);
        let fam_a = extensions(n, a, head_a, tail)?;
        let fam_b = extensions(n, b, big_l, tail)?;
        Ok(ExchangeContext {
            pivot,
            l,
            big_l,
            fam_a,
            fam_b,
            prefix_len,
        })
    }
}

/// All `size`-sets equal to `head` on the prefix, i.e. `head ∪ X` with
/// `X ⊆ tail`.
fn extensions(n: usize, size: usize, head: KSet, tail: KSet) -> Result<SetFamily> {
    let params = GroundParams::new(n, size)?;
    if head.len() > size {
        return Ok(SetFamily::empty(params));
    }
    let members = subsets_of_mask(tail.bits(), size - head.len())
        .into_iter()
        .map(|x| KSet::from_bits_unchecked(n, x | head.bits()))
        .collect();
    // head is fixed, so lex order of tails is lex order of the sets
    Ok(SetFamily::from_sorted_unchecked(params, members))
}

/// Parts `A`, `B` joined by an edge whenever the two sets are disjoint.
#[derive(Debug, Clone)]
pub struct BipartiteDisjointness {
    pub part_a: SetFamily,
    pub part_b: SetFamily,
    /// `adj[i]` lists indices into `part_b` disjoint from `part_a[i]`.
    pub adj: Vec<Vec<usize>>,
}

impl BipartiteDisjointness {
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn degrees_a(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn degrees_b(&self) -> Vec<usize> {
        let mut deg = vec![0; self.part_b.len()];
        for row in &self.adj {
            for &v in row {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Common degree when every vertex on both sides has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let mut all = self.degrees_a().into_iter().chain(self.degrees_b());
        let first = all.next()?;
        all.all(|d| d == first).then_some(first)
    }

    /// Debug dump: vertices and neighbours as lex ranks.
    pub fn dump(&self, matching: Option<&MatchingCertificate>) -> GraphDump {
        let ranks = |f: &SetFamily| f.iter().map(|s| lex_rank(s).get()).collect::<Vec<_>>();
        let rb = ranks(&self.part_b);
        GraphDump {
            part_a: ranks(&self.part_a),
            adjacency: self
                .adj
                .iter()
                .map(|row| row.iter().map(|&v| rb[v]).collect())
                .collect(),
            part_b: rb,
            matching: matching.map(|m| {
                m.pairs()
                    .iter()
                    .map(|&(u, v)| (lex_rank(&self.part_a.members()[u]).get(), lex_rank(&self.part_b.members()[v]).get()))
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphDump {
    pub part_a: Vec<u64>,
    pub part_b: Vec<u64>,
    pub adjacency: Vec<Vec<u64>>,
    pub matching: Option<Vec<(u64, u64)>>,
}

pub fn build_disjointness_graph(part_a: &SetFamily, part_b: &SetFamily) -> Result<BipartiteDisjointness> {
    if part_a.n() != part_b.n() {
        return Err(Error::GroundMismatch {
            left: part_a.n(),
            right: part_b.n(),
        });
    }
    let row = |a: &KSet| -> Vec<usize> {
        part_b
            .iter()
            .enumerate()
            .filter(|(_, b)| !a.intersects(b))
            .map(|(j, _)| j)
            .collect()
    };
    let adj = if part_a.len() * part_b.len() > 1 << 16 {
        part_a.members().par_iter().map(row).collect()
    } else {
        part_a.iter().map(row).collect()
    };
    Ok(BipartiteDisjointness {
        part_a: part_a.clone(),
        part_b: part_b.clone(),
        adj,
    })
}

/// Which part a Hall violator lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    A,
    B,
}

/// Outcome of [`certify_matching`]. Pairs are `(index in A, index in B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingCertificate {
    /// Maximum matching covering every vertex of the smaller part.
    Saturating { pairs: Vec<(usize, usize)> },
    /// Maximum matching leaving the smaller part uncovered, with a set `S` in
    /// that part whose neighbourhood is smaller than `S`.
    Deficient {
        pairs: Vec<(usize, usize)>,
        side: Side,
        hall_set: Vec<usize>,
        neighbourhood: Vec<usize>,
    },
}

impl MatchingCertificate {
    pub fn pairs(&self) -> &[(usize, usize)] {
        match self {
            MatchingCertificate::Saturating { pairs } | MatchingCertificate::Deficient { pairs, .. } => pairs,
        }
    }

    pub fn size(&self) -> usize {
        self.pairs().len()
    }

    pub fn is_saturating(&self) -> bool {
        matches!(self, MatchingCertificate::Saturating { .. })
    }
}

/// Maximum matching on the disjointness graph, saturating the smaller part
/// or explaining why it cannot.
pub fn certify_matching(g: &BipartiteDisjointness) -> MatchingCertificate {
    let (na, nb) = (g.part_a.len(), g.part_b.len());
    let (side, adj, right) = if na <= nb {
        (Side::A, g.adj.clone(), nb)
    } else {
        let mut rev = vec![Vec::new(); nb];
        for (u, row) in g.adj.iter().enumerate() {
            for &v in row {
                rev[v].push(u);
            }
        }
        (Side::B, rev, na)
    };
    let mate = hopcroft_karp(&adj, right);
    let mut pairs: Vec<(usize, usize)> = mate
        .iter()
        .enumerate()
        .filter_map(|(u, v)| v.map(|v| if side == Side::A { (u, v) } else { (v, u) }))
        .collect();
    pairs.sort_unstable();
    if pairs.len() == adj.len() {
        MatchingCertificate::Saturating { pairs }
    } else {
        let (hall_set, neighbourhood) = hall_violator(&adj, right, &mate);
        MatchingCertificate::Deficient {
            pairs,
            side,
            hall_set,
            neighbourhood,
        }
    }
}

/// Lemma 1 set-up for a shifted, nontrivially intersecting family with
/// `n > 2k`.
pub fn build_context_lemma1(fam: &SetFamily) -> Result<ExchangeContext> {
    let (n, k) = (fam.n(), fam.k());
    if n <= 2 * k {
        return Err(Error::Precondition(format!("need n > 2k, got n={n}, k={k}")));
    }
    if !fam.is_intersecting() {
        return Err(Error::Precondition("family is not intersecting".into()));
    }
    if fam.is_trivial() {
        return Err(Error::Precondition("family is trivially intersecting".into()));
    }
    if !is_shifted(fam) {
        return Err(Error::Precondition("family is not shifted".into()));
    }
    let pivot = *fam.last().ok_or(Error::EmptyFamily)?;
    let (l, big_l) = frankl_l(&pivot)?;
    let ctx = ExchangeContext::build(pivot, big_l, l, 2 * l, k, k)?;
    let expected = choose(n - 2 * l, k - l) as usize;
    if big_l.len() != l || ctx.fam_a.len() != expected || ctx.fam_b.len() != expected {
        return Err(Error::InvariantViolated(format!(
            "|A|={}, |B|={}, expected C({}, {}) = {expected}",
            ctx.fam_a.len(),
            ctx.fam_b.len(),
            n - 2 * l,
            k - l
        )));
    }
    Ok(ctx)
}

/// Result of one Lemma 1 exchange with its certificates.
#[derive(Debug, Clone)]
pub struct Lemma1Exchange {
    pub context: ExchangeContext,
    pub graph: BipartiteDisjointness,
    pub matching: MatchingCertificate,
    pub degree: usize,
    /// `F' = (F \ A) ∪ B`.
    pub family: SetFamily,
    pub order_before: LexRank,
    pub order_after: LexRank,
    /// `l = k`: the pivot is `{2, ..., k+1}`-like and the exchange lands on a
    /// trivial family.
    pub l_equals_k: bool,
}

/// Performs the exchange and checks every claim about it.
pub fn exchange_lemma1(fam: &SetFamily) -> Result<Lemma1Exchange> {
    let context = build_context_lemma1(fam)?;
    let (n, k, l) = (fam.n(), fam.k(), context.l);
    let graph = build_disjointness_graph(&context.fam_a, &context.fam_b)?;
    let want_degree = choose(n - 2 * l - (k - l), k - l) as usize;
    let degree = graph.regular_degree().ok_or_else(|| {
        Error::InvariantViolated("disjointness graph is not regular".into())
    })?;
    if degree != want_degree {
        return Err(Error::InvariantViolated(format!(
            "degree {degree}, expected {want_degree}"
        )));
    }
    let matching = certify_matching(&graph);
    if !matching.is_saturating() || matching.size() != context.fam_b.len() {
        return Err(Error::InvariantViolated("no perfect matching".into()));
    }
    let family = fam.difference(&context.fam_a)?.union(&context.fam_b)?;
    if !family.is_intersecting() {
        return Err(Error::InvariantViolated("F' is not intersecting".into()));
    }
    let order_before = family_order(fam)?;
    let order_after = family_order(&family)?;
    if order_after >= order_before {
        return Err(Error::InvariantViolated(format!(
            "order did not drop ({order_before} -> {order_after})"
        )));
    }
    if family.len() < fam.len() {
        return Err(Error::InvariantViolated("F' is smaller than F".into()));
    }
    Ok(Lemma1Exchange {
        l_equals_k: l == k,
        context,
        graph,
        matching,
        degree,
        family,
        order_before,
        order_after,
    })
}

/// Alternates exchange and shifting until the family becomes trivial.
/// Returns the final family and the number of exchanges performed.
pub fn exchange_until_trivial(fam: &SetFamily) -> Result<(SetFamily, usize)> {
    let (mut cur, _) = shift_to_fixpoint(fam)?;
    let mut steps = 0;
    while !cur.is_trivial() {
        let ex = exchange_lemma1(&cur)?;
        cur = shift_to_fixpoint(&ex.family)?.0;
        steps += 1;
        if steps as u64 > fam.params().layer_size() {
            return Err(Error::InvariantViolated("exchange did not terminate".into()));
        }
    }
    Ok((cur, steps))
}

/// The three settings of the cross-intersecting sum bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Point {
    /// `a < b`, `|F| >= C(n-j, a-j)`.
    One,
    /// `a >= b`, `C(n-j, a-j) <= |F| <= C(n+b-1-a, b-1) + C(n+b-2-a, b-1)`.
    Two,
    /// `a >= b`, `C(n-a+b-3, b-3) + C(n-a+b-4, b-3) <= |F| <= C(n-j, a-j)`.
    Three,
}

impl Point {
    pub fn from_index(p: u8) -> Option<Point> {
        match p {
            1 => Some(Point::One),
            2 => Some(Point::Two),
            3 => Some(Point::Three),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Point::One => 1,
            Point::Two => 2,
            Point::Three => 3,
        }
    }
}

/// Integer binomial with the conventions `C(x, m) = 0` for `m < 0` or
/// `0 <= x < m`.
pub(crate) fn c(x: i64, m: i64) -> i64 {
    use num_traits::ToPrimitive;
    crate::binom::binom_int(x, m).to_i64().expect("binomial fits i64")
}

/// Inclusive window of admissible `|F|` for a point, clipped to
/// `[0, C(n, a)]`. `None` when empty.
pub fn thm4_window(n: usize, a: usize, b: usize, j: usize, point: Point) -> Option<(u64, u64)> {
    let (n_, a_, b_, j_) = (n as i64, a as i64, b as i64, j as i64);
    let layer = choose(n, a) as i64;
    let (lo, hi) = match point {
        Point::One => (c(n_ - j_, a_ - j_), layer),
        Point::Two => (
            c(n_ - j_, a_ - j_),
            c(n_ + b_ - 1 - a_, b_ - 1) + c(n_ + b_ - 2 - a_, b_ - 1),
        ),
        Point::Three => (
            c(n_ - a_ + b_ - 3, b_ - 3) + c(n_ - a_ + b_ - 4, b_ - 3),
            c(n_ - j_, a_ - j_),
        ),
    };
    let (lo, hi) = (lo.max(0), hi.min(layer));
    (lo <= hi).then_some((lo as u64, hi as u64))
}

fn thm4_preconditions(fam_f: &SetFamily, b: usize, j: usize, point: Point) -> Result<()> {
    let (n, a) = (fam_f.n(), fam_f.k());
    if n < a + b {
        return Err(Error::Precondition(format!("need n >= a + b, got n={n}, a={a}, b={b}")));
    }
    if j == 0 {
        return Err(Error::Precondition("need j >= 1".into()));
    }
    match point {
        Point::One if a > b => return Err(Error::Precondition(format!("point 1 needs a <= b, got a={a}, b={b}"))),
        Point::Two | Point::Three if a < b => {
            return Err(Error::Precondition(format!("point {} needs a >= b, got a={a}, b={b}", point.index())))
        }
        _ => {}
    }
    if !is_initial_segment(fam_f) {
        return Err(Error::Precondition("F must be an initial lex segment".into()));
    }
    let m = fam_f.len() as u64;
    match thm4_window(n, a, b, j, point) {
        Some((lo, hi)) if lo <= m && m <= hi => Ok(()),
        Some((lo, hi)) => Err(Error::Precondition(format!(
            "|F| = {m} violates the window {lo} <= |F| <= {hi}"
        ))),
        None => Err(Error::Precondition("the size window is empty".into())),
    }
}

/// Context of the exchange for a lex initial segment `F = L(a, m)` and
/// partner size `b`, following the construction of the given point.
pub fn build_context_thm4(fam_f: &SetFamily, b: usize, j: usize, point: Point) -> Result<ExchangeContext> {
    thm4_preconditions(fam_f, b, j, point)?;
    let (n, a) = (fam_f.n(), fam_f.k());
    let d = a - b.min(a);
    let ctx = match point {
        Point::One | Point::Two => {
            let pivot = *fam_f.last().ok_or(Error::EmptyFamily)?;
            let shift = if point == Point::Two { d } else { 0 };
            if point == Point::Two {
                if !KSet::prefix(n, d).is_subset(&pivot) {
                    return Err(Error::InvariantViolated(format!("F = {pivot} does not contain [{d}]")));
                }
                if !(pivot.contains(d + 1) || pivot.contains(d + 2)) {
                    return Err(Error::InvariantViolated(format!(
                        "F = {pivot} misses both {} and {}",
                        d + 1,
                        d + 2
                    )));
                }
            }
            let l = (1..)
                .take_while(|&l| shift + 2 * l <= n)
                .filter(|&l| pivot.intersection(&KSet::prefix(n, shift + 2 * l)).len() == shift + l)
                .last()
                .ok_or_else(|| Error::NoFranklIndex(pivot.to_string()))?;
            let prefix_len = shift + 2 * l;
            let big_l = KSet::prefix(n, prefix_len).difference(&pivot);
            ExchangeContext::build(pivot, big_l, l, prefix_len, a, b)?
        }
        Point::Three => {
            let m = fam_f.len() as u64;
            let params = fam_f.params();
            if m >= params.layer_size() {
                return Err(Error::Precondition("F is the full layer; no first non-member".into()));
            }
            let pivot = lex_unrank(LexRank::new(m + 1, params)?, params)?;
            let t = (1..=d + 1)
                .find(|&i| pivot.intersection(&KSet::prefix(n, i + 1)) == KSet::prefix(n, i))
                .map(|i| i + 1)
                .or_else(|| {
                    (pivot.intersection(&KSet::prefix(n, d + 4)) == KSet::prefix(n, d + 2)).then_some(d + 4)
                })
                .filter(|&t| t <= n)
                .ok_or_else(|| {
                    Error::InvariantViolated(format!("no admissible prefix length for F = {pivot}"))
                })?;
            let big_l = KSet::prefix(n, t).difference(&pivot);
            ExchangeContext::build(pivot, big_l, big_l.len(), t, a, b)?
        }
    };
    let (sa, sb) = (ctx.fam_a.len(), ctx.fam_b.len());
    let ok = match point {
        Point::Two => sa == sb && sa as u64 == choose(n - ctx.prefix_len, b - ctx.l),
        Point::One => sa <= sb && (a != b || sa == sb),
        Point::Three => sa >= sb,
    };
    if !ok {
        return Err(Error::InvariantViolated(format!(
            "point {}: |A| = {sa}, |B| = {sb}",
            point.index()
        )));
    }
    Ok(ctx)
}

/// One cross-intersecting exchange step with its certificates.
#[derive(Debug, Clone)]
pub struct Thm4Exchange {
    pub context: ExchangeContext,
    pub matching: MatchingCertificate,
    /// Largest partner of the input `F`.
    pub partner: SetFamily,
    pub new_f: SetFamily,
    pub new_g: SetFamily,
}

/// Builds the context, pairs `F` with its largest partner `G`, and forms
/// `(F \ A, G ∪ B)` (Points 1–2) or `(F ∪ A, G \ B)` (Point 3). Checks the new
/// pair is cross-intersecting and its total size did not drop.
pub fn exchange_thm4(fam_f: &SetFamily, b: usize, j: usize, point: Point) -> Result<Thm4Exchange> {
    let context = build_context_thm4(fam_f, b, j, point)?;
    let partner = max_compatible_partner(fam_f, b)?;
    let graph = build_disjointness_graph(&context.fam_a, &context.fam_b)?;
    let matching = certify_matching(&graph);
    if !matching.is_saturating() {
        return Err(Error::InvariantViolated("disjointness graph has no saturating matching".into()));
    }
    let (new_f, new_g) = match point {
        Point::One | Point::Two => (fam_f.difference(&context.fam_a)?, partner.union(&context.fam_b)?),
        Point::Three => (fam_f.union(&context.fam_a)?, partner.difference(&context.fam_b)?),
    };
    if !are_cross_intersecting(&new_f, &new_g)? {
        return Err(Error::InvariantViolated(format!(
            "point {}: exchanged pair is not cross-intersecting",
            point.index()
        )));
    }
    if new_f.len() + new_g.len() < fam_f.len() + partner.len() {
        return Err(Error::InvariantViolated(format!(
            "point {}: exchange lost size",
            point.index()
        )));
    }
    Ok(Thm4Exchange {
        context,
        matching,
        partner,
        new_f,
        new_g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lex::lex_segment;

    fn s(n: usize, e: &[usize]) -> KSet {
        KSet::from_elements(n, e).unwrap()
    }

    #[test]
    fn lemma1_small_example() {
        let fam = SetFamily::from_lists(5, 2, &[&[2, 3], &[1, 2], &[1, 3]]).unwrap();
        let ctx = build_context_lemma1(&fam).unwrap();
        assert_eq!(ctx.pivot, s(5, &[2, 3]));
        assert_eq!(ctx.l, 2);
        assert_eq!(ctx.big_l, s(5, &[1, 4]));
        assert_eq!(ctx.fam_a.members(), &[s(5, &[2, 3])]);
        assert_eq!(ctx.fam_b.members(), &[s(5, &[1, 4])]);

        let ex = exchange_lemma1(&fam).unwrap();
        let expected = SetFamily::from_lists(5, 2, &[&[1, 2], &[1, 3], &[1, 4]]).unwrap();
        assert_eq!(ex.family, expected);
        assert!(ex.l_equals_k);
    }

    #[test]
    fn lemma1_rejects_star_and_unshifted() {
        let star = SetFamily::star(GroundParams::new(7, 3).unwrap(), 1).unwrap();
        assert!(build_context_lemma1(&star).is_err());
        let unshifted = SetFamily::from_lists(7, 3, &[&[2, 3, 4], &[1, 2, 5], &[1, 3, 5]]).unwrap();
        assert!(build_context_lemma1(&unshifted).is_err());
        let small_n = SetFamily::from_lists(4, 2, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap();
        assert!(build_context_lemma1(&small_n).is_err());
    }

    #[test]
    fn graph_basics() {
        let a = SetFamily::from_lists(4, 2, &[&[1, 2]]).unwrap();
        let b = SetFamily::from_lists(4, 2, &[&[3, 4]]).unwrap();
        let g = build_disjointness_graph(&a, &b).unwrap();
        assert_eq!(g.edge_count(), 1);
        let m = certify_matching(&g);
        assert_eq!(m.size(), 1);
        assert!(m.is_saturating());

        let c = SetFamily::from_lists(4, 2, &[&[1, 3]]).unwrap();
        let g = build_disjointness_graph(&a, &c).unwrap();
        assert_eq!(g.edge_count(), 0);
        match certify_matching(&g) {
            MatchingCertificate::Deficient { pairs, hall_set, neighbourhood, .. } => {
                assert!(pairs.is_empty());
                assert_eq!(hall_set, vec![0]);
                assert!(neighbourhood.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn regular_graph_n9_k4_l2() {
        // pivot with l = 2: parts of size C(5, 2), degree C(3, 2)
        let n = 9;
        let pivot = s(n, &[2, 3, 8, 9]);
        let (l, big_l) = frankl_l(&pivot).unwrap();
        assert_eq!(l, 2);
        let ctx = ExchangeContext::build(pivot, big_l, l, 2 * l, 4, 4).unwrap();
        assert_eq!(ctx.fam_a.len(), 10);
        assert_eq!(ctx.fam_b.len(), 10);
        let g = build_disjointness_graph(&ctx.fam_a, &ctx.fam_b).unwrap();
        assert_eq!(g.regular_degree(), Some(choose(3, 2) as usize));
        let m = certify_matching(&g);
        assert!(m.is_saturating());
        assert_eq!(m.size(), 10);
        let dump = g.dump(Some(&m));
        assert_eq!(dump.matching.unwrap().len(), 10);
    }

    #[test]
    fn exchange_until_trivial_reaches_star() {
        let n = 7;
        let pivot = KSet::interval(n, 2, 4);
        let hm = SetFamily::from_predicate(GroundParams::new(n, 3).unwrap(), |x| {
            *x == pivot || (x.contains(1) && x.intersects(&pivot))
        });
        let (out, steps) = exchange_until_trivial(&hm).unwrap();
        assert!(out.is_trivial());
        assert!(steps >= 1);
        assert!(out.len() >= hm.len());

        let f1 = SetFamily::from_predicate(GroundParams::new(n, 3).unwrap(), |x| {
            x.intersection(&KSet::prefix(n, 3)).len() >= 2
        });
        let (out, _) = exchange_until_trivial(&f1).unwrap();
        assert!(out.is_trivial());
        assert!(out.len() >= 13);
    }

    #[test]
    fn thm4_windows() {
        assert_eq!(thm4_window(9, 4, 4, 2, Point::Two), Some((21, 91)));
        assert_eq!(thm4_window(9, 4, 3, 2, Point::Two), Some((21, 21 + 15)));
        assert_eq!(thm4_window(8, 3, 4, 1, Point::One), Some((21, 56)));
        assert_eq!(thm4_window(8, 4, 3, 4, Point::Two), Some((1, 15 + 10)));
        assert_eq!(thm4_window(8, 4, 3, 1, Point::Two), None);
    }

    #[test]
    fn thm4_point2_context() {
        let params = GroundParams::new(9, 4).unwrap();
        let fam = lex_segment(params, choose(7, 2) as usize);
        let ctx = build_context_thm4(&fam, 3, 2, Point::Two).unwrap();
        assert!(ctx.pivot.contains(1));
        assert!(ctx.pivot.contains(2) || ctx.pivot.contains(3));
        assert_eq!(ctx.fam_a.len(), ctx.fam_b.len());
        let ex = exchange_thm4(&fam, 3, 2, Point::Two).unwrap();
        assert!(ex.new_f.len() + ex.new_g.len() >= fam.len() + ex.partner.len());
    }

    #[test]
    fn thm4_point1_context() {
        let params = GroundParams::new(9, 3).unwrap();
        for j in 1..=3 {
            let m = choose(9 - j, 3 - j) as usize;
            let fam = lex_segment(params, m);
            let ctx = build_context_thm4(&fam, 4, j, Point::One).unwrap();
            assert!(KSet::prefix(9, j).is_subset(&ctx.pivot));
            assert!(ctx.fam_a.len() <= ctx.fam_b.len());
            exchange_thm4(&fam, 4, j, Point::One).unwrap();
        }
    }

    #[test]
    fn thm4_point1_matches_point2_when_a_equals_b() {
        for n in 6..=9 {
            for a in 2..=n / 2 {
                let params = GroundParams::new(n, a).unwrap();
                for j in 1..=a {
                    let Some((lo, hi)) = thm4_window(n, a, a, j, Point::Two) else { continue };
                    for m in lo.max(1)..=hi {
                        let fam = lex_segment(params, m as usize);
                        let p1 = build_context_thm4(&fam, a, j, Point::One);
                        let p2 = build_context_thm4(&fam, a, j, Point::Two);
                        match (p1, p2) {
                            (Ok(x), Ok(y)) => assert_eq!(x, y),
                            (Err(_), Err(_)) => {}
                            (x, y) => panic!("n={n} a={a} j={j} m={m}: {x:?} vs {y:?}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn thm4_point3_context() {
        let params = GroundParams::new(9, 4).unwrap();
        let (lo, hi) = thm4_window(9, 4, 3, 2, Point::Three).unwrap();
        for m in lo..=hi {
            let fam = lex_segment(params, m as usize);
            let ctx = build_context_thm4(&fam, 3, 2, Point::Three).unwrap();
            assert!(ctx.fam_a.len() >= ctx.fam_b.len());
            assert!(!fam.contains(&ctx.pivot));
            exchange_thm4(&fam, 3, 2, Point::Three).unwrap();
        }
    }

    #[test]
    fn thm4_rejects_out_of_window() {
        let params = GroundParams::new(9, 4).unwrap();
        let fam = lex_segment(params, 5);
        let err = build_context_thm4(&fam, 3, 2, Point::Two).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("window")));
        let not_segment = SetFamily::from_lists(9, 4, &[&[2, 3, 4, 5]]).unwrap();
        assert!(build_context_thm4(&not_segment, 3, 1, Point::Two).is_err());
    }
}
