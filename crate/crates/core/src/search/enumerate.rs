//! Enumeration of shifted intersecting families.
//!
//! A family is shifted iff it is a down-set of the dominance order on
//! k-sets, whose covering moves replace an element `e` by `e - 1`. Lex order
//! is a linear extension of dominance, so a family can be built by deciding
//! the k-sets one at a time in lex order: a set may join only if none of its
//! lower covers was rejected and it meets every set already taken.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::family::SetFamily;
use crate::set::{all_ksets, GroundParams, KSet};

/// Which shifted intersecting families to visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyClass {
    /// Every shifted intersecting family, the empty one included.
    All,
    /// Only those to which no k-set can be added without losing
    /// shiftedness or the intersecting property.
    Maximal,
}

/// Counts from an enumeration run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub visited: u64,
    pub nodes: u64,
    /// The deadline passed before the search space was exhausted.
    pub partial: bool,
}

impl EnumStats {
    fn merge(self, other: EnumStats) -> EnumStats {
        EnumStats {
            visited: self.visited + other.visited,
            nodes: self.nodes + other.nodes,
            partial: self.partial || other.partial,
        }
    }
}

/// The k-layer indexed in lex order, with the bitsets the search needs.
#[derive(Debug, Clone)]
pub struct Universe {
    params: GroundParams,
    sets: Vec<KSet>,
    words: usize,
    /// `disjoint[i]`: sets disjoint from set `i`.
    disjoint: Vec<u64>,
    /// `upset[i]`: sets that dominate set `i` (itself included).
    upset: Vec<u64>,
}

impl Universe {
    pub fn new(params: GroundParams) -> Universe {
        let sets = all_ksets(params);
        let count = sets.len();
        let words = count.div_ceil(64).max(1);
        let mut disjoint = vec![0u64; count * words];
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                if !a.intersects(b) {
                    disjoint[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        let index_of = |s: &KSet| sets.binary_search(s).expect("k-set in layer");
        // upper covers: replace e by e + 1 when e + 1 is absent
        let upper_covers: Vec<Vec<usize>> = sets
            .iter()
            .map(|s| {
                s.elements()
                    .filter(|&e| e < params.n() && !s.contains(e + 1))
                    .map(|e| {
                        let bits = (s.bits() & !(1 << (e - 1))) | (1 << e);
                        index_of(&KSet::from_bits_unchecked(params.n(), bits))
                    })
                    .collect()
            })
            .collect();
        let mut upset = vec![0u64; count * words];
        // covers point to larger lex indices, so fill from the top
        for i in (0..count).rev() {
            upset[i * words + i / 64] |= 1 << (i % 64);
            for &j in &upper_covers[i] {
                for w in 0..words {
                    let v = upset[j * words + w];
                    upset[i * words + w] |= v;
                }
            }
        }
        Universe {
            params,
            sets,
            words,
            disjoint,
            upset,
        }
    }

    pub fn params(&self) -> GroundParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[KSet] {
        &self.sets
    }

    #[inline]
    fn row<'a>(&self, table: &'a [u64], i: usize) -> &'a [u64] {
        &table[i * self.words..(i + 1) * self.words]
    }
}

#[inline]
fn test_bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 != 0
}

/// A visited family, valid only during the visitor call.
pub struct FamilyView<'a> {
    universe: &'a Universe,
    members: &'a [u32],
    degrees: &'a [u32],
}

impl FamilyView<'_> {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `degrees()[e - 1]` is the degree of element `e`.
    pub fn degrees(&self) -> &[u32] {
        self.degrees
    }

    /// Lex indices of the members, increasing.
    pub fn indices(&self) -> &[u32] {
        self.members
    }

    pub fn members(&self) -> impl Iterator<Item = KSet> + '_ {
        self.members.iter().map(|&i| self.universe.sets[i as usize])
    }

    /// Maximum degree, smallest element on ties.
    pub fn max_degree(&self) -> (usize, usize) {
        let mut best = (1, self.degrees.first().copied().unwrap_or(0) as usize);
        for (idx, &d) in self.degrees.iter().enumerate().skip(1) {
            if d as usize > best.1 {
                best = (idx + 1, d as usize);
            }
        }
        best
    }

    pub fn diversity(&self) -> usize {
        self.len() - self.max_degree().1
    }

    /// A shifted family is nontrivial iff it holds a set avoiding 1.
    pub fn is_trivial(&self) -> bool {
        self.members.is_empty() || self.degrees[0] as usize == self.members.len()
    }

    pub fn to_family(&self) -> SetFamily {
        SetFamily::from_sorted_unchecked(self.universe.params, self.members().collect())
    }
}

struct Search<'a, F> {
    u: &'a Universe,
    class: FamilyClass,
    deadline: Option<Instant>,
    stop: &'a AtomicBool,
    visit: F,
    // per-depth state: dead = rejected or above a rejected set, blocked =
    // disjoint from a taken set
    dead: Vec<u64>,
    blocked: Vec<u64>,
    members: Vec<u32>,
    pending: Vec<u32>,
    degrees: Vec<u32>,
    included: Vec<u64>,
    stats: EnumStats,
}

impl<F: FnMut(&FamilyView<'_>)> Search<'_, F> {
    fn new<'a>(
        u: &'a Universe,
        class: FamilyClass,
        deadline: Option<Instant>,
        stop: &'a AtomicBool,
        visit: F,
    ) -> Search<'a, F> {
        let w = u.words;
        let levels = u.len() + 1;
        Search {
            u,
            class,
            deadline,
            stop,
            visit,
            dead: vec![0; levels * w],
            blocked: vec![0; levels * w],
            members: Vec::new(),
            pending: Vec::new(),
            degrees: vec![0; u.params.n()],
            included: vec![0; w],
            stats: EnumStats::default(),
        }
    }

    #[inline]
    fn level(&self, t: usize) -> std::ops::Range<usize> {
        t * self.u.words..(t + 1) * self.u.words
    }

    /// Some undecided set at index `>= t` that is still available and
    /// disjoint from `x`.
    fn has_future_killer(&self, x: usize, t: usize) -> bool {
        let w = self.u.words;
        let dis = self.u.row(&self.u.disjoint, x);
        let dead = &self.dead[self.level(t)];
        let blocked = &self.blocked[self.level(t)];
        let first = t / 64;
        (first..w).any(|i| {
            let mut m = dis[i] & !dead[i] & !blocked[i];
            if i == first {
                m &= !0u64 << (t % 64);
            }
            m != 0
        })
    }

    fn satisfied(&self, x: usize) -> bool {
        let dis = self.u.row(&self.u.disjoint, x);
        dis.iter().zip(&self.included).any(|(a, b)| a & b != 0)
    }

    fn pending_viable(&self, t: usize) -> bool {
        self.pending
            .iter()
            .all(|&x| self.satisfied(x as usize) || self.has_future_killer(x as usize, t))
    }

    fn out_of_time(&mut self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            self.stats.partial = true;
            return true;
        }
        if self.stats.nodes & 0x3fff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stop.store(true, Ordering::Relaxed);
                    self.stats.partial = true;
                    return true;
                }
            }
        }
        false
    }

    /// Copies level `t` state into level `t + 1`, OR-ing `extra` into either
    /// the dead or the blocked row.
    fn descend(&mut self, t: usize, into_dead: Option<usize>, into_blocked: Option<usize>) {
        let w = self.u.words;
        let (cur, next) = (t * w, (t + 1) * w);
        for i in 0..w {
            let mut d = self.dead[cur + i];
            let mut b = self.blocked[cur + i];
            if let Some(x) = into_dead {
                d |= self.u.upset[x * w + i];
            }
            if let Some(x) = into_blocked {
                b |= self.u.disjoint[x * w + i];
            }
            self.dead[next + i] = d;
            self.blocked[next + i] = b;
        }
    }

    fn run(&mut self, t: usize) {
        self.stats.nodes += 1;
        if self.out_of_time() {
            return;
        }
        if self.class == FamilyClass::Maximal && !self.pending_viable(t) {
            return;
        }
        if t == self.u.len() {
            self.stats.visited += 1;
            let view = FamilyView {
                universe: self.u,
                members: &self.members,
                degrees: &self.degrees,
            };
            (self.visit)(&view);
            return;
        }
        let here = self.level(t);
        let dead = test_bit(&self.dead[here.clone()], t);
        let blocked = test_bit(&self.blocked[here], t);
        if dead || blocked {
            self.descend(t, Some(t), None);
            self.run(t + 1);
            return;
        }
        // take set t
        let set = self.u.sets[t];
        self.members.push(t as u32);
        self.included[t / 64] |= 1 << (t % 64);
        for e in set.elements() {
            self.degrees[e - 1] += 1;
        }
        self.descend(t, None, Some(t));
        self.run(t + 1);
        for e in set.elements() {
            self.degrees[e - 1] -= 1;
        }
        self.included[t / 64] &= !(1 << (t % 64));
        self.members.pop();

        // reject set t
        self.descend(t, Some(t), None);
        if self.class == FamilyClass::Maximal {
            if !self.has_future_killer(t, t + 1) {
                return;
            }
            self.pending.push(t as u32);
            self.run(t + 1);
            self.pending.pop();
        } else {
            self.run(t + 1);
        }
    }
}

/// Visits every shifted intersecting family of the class exactly once, in a
/// deterministic order.
pub fn enumerate_shifted_intersecting(
    universe: &Universe,
    class: FamilyClass,
    deadline: Option<Instant>,
    visit: impl FnMut(&FamilyView<'_>),
) -> EnumStats {
    let stop = AtomicBool::new(false);
    let mut search = Search::new(universe, class, deadline, &stop, visit);
    search.run(0);
    search.stats
}

/// Parallel fold over the same families as [`enumerate_shifted_intersecting`].
///
/// The search tree is cut after a fixed number of free decisions; subtrees are
/// folded independently and merged in tree order, so the result does not
/// depend on scheduling as long as `merge` is associative.
pub fn fold_shifted_intersecting<A, I, V, M>(
    universe: &Universe,
    class: FamilyClass,
    deadline: Option<Instant>,
    init: I,
    visit: V,
    merge: M,
) -> (A, EnumStats)
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &FamilyView<'_>) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    const SPLIT_DEPTH: usize = 10;
    let stop = AtomicBool::new(false);
    // Collect decision prefixes (take/reject for the first free sets).
    let prefixes = split_prefixes(universe, class, SPLIT_DEPTH);
    let results: Vec<(A, EnumStats)> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = init();
            let stats = {
                let mut search = Search::new(universe, class, deadline, &stop, |v: &FamilyView<'_>| {
                    visit(&mut acc, v)
                });
                search.replay(prefix);
                search.stats
            };
            (acc, stats)
        })
        .collect();
    let mut stats = EnumStats::default();
    let mut acc = init();
    for (a, s) in results {
        acc = merge(acc, a);
        stats = stats.merge(s);
    }
    stats.partial |= stop.load(Ordering::Relaxed);
    (acc, stats)
}

/// Decision prefixes: `true` = take, `false` = reject, one entry per free
/// (neither dead nor blocked) set, in lex order.
fn split_prefixes(universe: &Universe, class: FamilyClass, depth: usize) -> Vec<Vec<bool>> {
    let stop = AtomicBool::new(false);
    let mut out = Vec::new();
    let mut search = Search::new(universe, class, None, &stop, |_: &FamilyView<'_>| {});
    search.collect_prefixes(0, depth, &mut Vec::new(), &mut out);
    out
}

impl<F: FnMut(&FamilyView<'_>)> Search<'_, F> {
    fn collect_prefixes(&mut self, t: usize, depth: usize, prefix: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if self.class == FamilyClass::Maximal && !self.pending_viable(t) {
            return;
        }
        if t == self.u.len() || prefix.len() == depth {
            out.push(prefix.clone());
            return;
        }
        let here = self.level(t);
        if test_bit(&self.dead[here.clone()], t) || test_bit(&self.blocked[here], t) {
            self.descend(t, Some(t), None);
            self.collect_prefixes(t + 1, depth, prefix, out);
            return;
        }
        self.take(t);
        prefix.push(true);
        self.collect_prefixes(t + 1, depth, prefix, out);
        prefix.pop();
        self.untake(t);

        self.descend(t, Some(t), None);
        if self.class == FamilyClass::Maximal {
            if !self.has_future_killer(t, t + 1) {
                return;
            }
            self.pending.push(t as u32);
        }
        prefix.push(false);
        self.collect_prefixes(t + 1, depth, prefix, out);
        prefix.pop();
        if self.class == FamilyClass::Maximal {
            self.pending.pop();
        }
    }

    fn take(&mut self, t: usize) {
        let set = self.u.sets[t];
        self.members.push(t as u32);
        self.included[t / 64] |= 1 << (t % 64);
        for e in set.elements() {
            self.degrees[e - 1] += 1;
        }
        self.descend(t, None, Some(t));
    }

    fn untake(&mut self, t: usize) {
        let set = self.u.sets[t];
        for e in set.elements() {
            self.degrees[e - 1] -= 1;
        }
        self.included[t / 64] &= !(1 << (t % 64));
        self.members.pop();
    }

    /// Re-applies a decision prefix from the root, then searches below it.
    fn replay(&mut self, prefix: &[bool]) {
        let mut t = 0;
        let mut decisions = prefix.iter();
        loop {
            if self.class == FamilyClass::Maximal && !self.pending_viable(t) {
                return;
            }
            if t == self.u.len() {
                break;
            }
            let here = self.level(t);
            if test_bit(&self.dead[here.clone()], t) || test_bit(&self.blocked[here], t) {
                self.descend(t, Some(t), None);
                t += 1;
                continue;
            }
            match decisions.next() {
                None => break,
                Some(true) => self.take(t),
                Some(false) => {
                    self.descend(t, Some(t), None);
                    if self.class == FamilyClass::Maximal {
                        self.pending.push(t as u32);
                    }
                }
            }
            t += 1;
        }
        self.run(t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifting::is_shifted;

    fn brute_force(params: GroundParams) -> Vec<SetFamily> {
        let all = all_ksets(params);
        assert!(all.len() <= 20);
        let mut out = Vec::new();
        for mask in 0u32..(1 << all.len()) {
            let fam = SetFamily::new(
                params,
                all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s),
            )
            .unwrap();
            if fam.is_intersecting() && is_shifted(&fam) {
                out.push(fam);
            }
        }
        out
    }

    fn is_maximal(fam: &SetFamily, all: &[SetFamily]) -> bool {
        !all.iter().any(|g| g.len() == fam.len() + 1 && fam.is_subfamily_of(g))
    }

    fn enumerate(params: GroundParams, class: FamilyClass) -> Vec<SetFamily> {
        let u = Universe::new(params);
        let mut out = Vec::new();
        let stats = enumerate_shifted_intersecting(&u, class, None, |v| out.push(v.to_family()));
        assert_eq!(stats.visited as usize, out.len());
        assert!(!stats.partial);
        out
    }

    #[test]
    fn agrees_with_brute_force() {
        for (n, k) in [(3, 1), (4, 2), (5, 2), (6, 2), (6, 3)] {
            let params = GroundParams::new(n, k).unwrap();
            let mut expected = brute_force(params);
            let mut got = enumerate(params, FamilyClass::All);
            expected.sort_by(|a, b| a.members().cmp(b.members()));
            got.sort_by(|a, b| a.members().cmp(b.members()));
            assert_eq!(got, expected, "n={n} k={k}");
            assert!(got.iter().any(|f| f.is_empty()));

            let mut maximal: Vec<SetFamily> =
                expected.iter().filter(|f| is_maximal(f, &expected)).cloned().collect();
            let mut got_max = enumerate(params, FamilyClass::Maximal);
            maximal.sort_by(|a, b| a.members().cmp(b.members()));
            got_max.sort_by(|a, b| a.members().cmp(b.members()));
            assert_eq!(got_max, maximal, "maximal n={n} k={k}");
        }
    }

    #[test]
    fn visited_families_are_shifted_and_intersecting() {
        let params = GroundParams::new(7, 3).unwrap();
        let u = Universe::new(params);
        let mut count = 0;
        enumerate_shifted_intersecting(&u, FamilyClass::All, None, |v| {
            let f = v.to_family();
            assert!(f.is_intersecting());
            assert!(is_shifted(&f));
            assert_eq!(v.max_degree(), f.max_degree());
            count += 1;
        });
        assert!(count > 0);
    }

    #[test]
    fn parallel_fold_matches_sequential() {
        for (n, k, class) in [(7, 3, FamilyClass::All), (8, 3, FamilyClass::Maximal), (8, 4, FamilyClass::Maximal)] {
            let params = GroundParams::new(n, k).unwrap();
            let u = Universe::new(params);
            let mut seq = Vec::new();
            let s1 = enumerate_shifted_intersecting(&u, class, None, |v| seq.push(v.indices().to_vec()));
            let (par, s2) = fold_shifted_intersecting(
                &u,
                class,
                None,
                Vec::new,
                |acc: &mut Vec<Vec<u32>>, v| acc.push(v.indices().to_vec()),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            );
            assert_eq!(s1.visited, s2.visited);
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn deadline_marks_partial() {
        let params = GroundParams::new(10, 4).unwrap();
        let u = Universe::new(params);
        let stats = enumerate_shifted_intersecting(&u, FamilyClass::All, Some(Instant::now()), |_| {});
        assert!(stats.partial);
    }
}
