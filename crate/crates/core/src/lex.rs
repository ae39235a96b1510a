//! Lexicographic order on k-sets: ranking, initial segments `L(k, m)`,
//! Kruskal–Katona style compression of cross-intersecting pairs and the
//! largest cross-intersecting partner of a family.

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::binom::{choose, BigCount};
use crate::error::{Error, Result};
use crate::family::{are_cross_intersecting, SetFamily};
use crate::set::{all_ksets, ground_mask, GroundParams, KSet};

/// 1-based position of a k-set in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexRank(u64);

impl LexRank {
    pub fn new(value: u64, params: GroundParams) -> Result<Self> {
        let max = params.layer_size();
        if value == 0 || value > max {
            return Err(Error::RankOutOfRange { rank: value, max });
        }
        Ok(LexRank(value))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for LexRank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rank of `set` among the `|set|`-subsets of `[n]`.
pub fn lex_rank(set: &KSet) -> LexRank {
    LexRank(rank_bits(set.n(), set.len(), set.bits()))
}

/// Combinatorial number system, O(n) per set.
#[inline]
pub(crate) fn rank_bits(n: usize, k: usize, bits: u32) -> u64 {
    let mut before = 0u64;
    let mut prev = 0usize;
    let mut i = 0usize;
    let mut rest = bits;
    while rest != 0 {
        let a = rest.trailing_zeros() as usize + 1;
        rest &= rest - 1;
        i += 1;
        for v in prev + 1..a {
            before += choose(n - v, k - i);
        }
        prev = a;
    }
    before + 1
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(rank: LexRank, params: GroundParams) -> Result<KSet> {
    let r = LexRank::new(rank.get(), params)?;
    let (n, k) = (params.n(), params.k());
    let mut rest = r.get() - 1;
    let mut bits = 0u32;
    let mut v = 1usize;
    for i in 1..=k {
        loop {
            let c = choose(n - v, k - i);
            if rest < c {
                break;
            }
            rest -= c;
            v += 1;
        }
        bits |= 1 << (v - 1);
        v += 1;
    }
    Ok(KSet::from_bits_unchecked(n, bits))
}

/// Lexicographic successor among sets of the same size.
pub fn lex_next(set: &KSet) -> Option<KSet> {
    let n = set.n();
    let mut elems = set.to_vec();
    let k = elems.len();
    let pos = (0..k).rev().find(|&i| elems[i] < n - (k - 1 - i))?;
    elems[pos] += 1;
    for q in pos + 1..k {
        elems[q] = elems[q - 1] + 1;
    }
    let bits = elems.iter().fold(0u32, |acc, &e| acc | 1 << (e - 1));
    Some(KSet::from_bits_unchecked(n, bits))
}

/// `L(k, m)`: the first `m` k-sets in lexicographic order.
pub fn lex_family(params: GroundParams, m: &BigCount) -> Result<SetFamily> {
    let max = params.layer_size();
    let m = m
        .to_u64()
        .filter(|&m| m <= max)
        .ok_or_else(|| Error::CountOutOfRange {
            m: m.to_string(),
            max,
        })?;
    Ok(lex_segment(params, m as usize))
}

/// [`lex_family`] for an in-range machine-word count.
pub(crate) fn lex_segment(params: GroundParams, m: usize) -> SetFamily {
    let mut members = Vec::with_capacity(m);
    let mut cur = Some(KSet::prefix(params.n(), params.k()));
    while members.len() < m {
        match cur {
            Some(s) => {
                members.push(s);
                cur = lex_next(&s);
            }
            None => break,
        }
    }
    SetFamily::from_sorted_unchecked(params, members)
}

/// Maximal rank among the members.
pub fn family_order(fam: &SetFamily) -> Result<LexRank> {
    fam.last().map(lex_rank).ok_or(Error::EmptyFamily)
}

/// `true` iff `fam` equals `L(k, |fam|)`.
pub fn is_initial_segment(fam: &SetFamily) -> bool {
    match fam.last() {
        None => true,
        Some(last) => lex_rank(last).get() == fam.len() as u64,
    }
}

/// The largest family of `b`-sets cross-intersecting with `fam`: every
/// `b`-set meeting all members. Initial segments take a fast path.
pub fn max_compatible_partner(fam: &SetFamily, b: usize) -> Result<SetFamily> {
    if is_initial_segment(fam) {
        partner_of_segment(fam.params(), fam.len() as u64, b)
    } else {
        partner_by_scan(fam, b)
    }
}

/// Scans every `b`-set against every member.
pub fn partner_by_scan(fam: &SetFamily, b: usize) -> Result<SetFamily> {
    let params = fam.params().with_k(b)?;
    let layer = all_ksets(params);
    let keep = |g: &KSet| fam.iter().all(|f| f.intersects(g));
    let members: Vec<KSet> = if layer.len() > 4096 {
        layer.into_par_iter().filter(|g| keep(g)).collect()
    } else {
        layer.into_iter().filter(|g| keep(g)).collect()
    };
    Ok(SetFamily::from_sorted_unchecked(params, members))
}

/// Rank of the lexicographically first `a`-set avoiding `g`, or
/// `C(n, a) + 1` when no such set exists.
///
/// A `b`-set `g` meets every member of `L(a, m)` iff this threshold exceeds
/// `m`: the first `a`-set disjoint from `g` precedes every other one.
#[inline]
pub fn avoidance_threshold(n: usize, a: usize, g: &KSet) -> u64 {
    let free = !g.bits() & ground_mask(n);
    if (free.count_ones() as usize) < a {
        return choose(n, a) + 1;
    }
    let mut bits = 0u32;
    let mut rest = free;
    for _ in 0..a {
        let low = rest & rest.wrapping_neg();
        bits |= low;
        rest ^= low;
    }
    rank_bits(n, a, bits)
}

/// Partner of `L(a, m)` computed from avoidance thresholds.
pub fn partner_of_segment(params_a: GroundParams, m: u64, b: usize) -> Result<SetFamily> {
    let (n, a) = (params_a.n(), params_a.k());
    if m > params_a.layer_size() {
        return Err(Error::CountOutOfRange {
            m: m.to_string(),
            max: params_a.layer_size(),
        });
    }
    let params_b = params_a.with_k(b)?;
    let members = all_ksets(params_b)
        .into_iter()
        .filter(|g| avoidance_threshold(n, a, g) > m)
        .collect();
    Ok(SetFamily::from_sorted_unchecked(params_b, members))
}

/// Sorted avoidance thresholds of all `b`-sets; the partner of `L(a, m)` has
/// as many members as there are thresholds above `m`.
pub fn partner_thresholds(n: usize, a: usize, b: usize) -> Result<Vec<u64>> {
    let params_b = GroundParams::new(n, b)?;
    GroundParams::new(n, a)?;
    let mut t: Vec<u64> = all_ksets(params_b)
        .iter()
        .map(|g| avoidance_threshold(n, a, g))
        .collect();
    t.sort_unstable();
    Ok(t)
}

/// `|partner(L(a, m))|` from precomputed thresholds.
pub fn partner_size(thresholds: &[u64], m: u64) -> usize {
    thresholds.len() - thresholds.partition_point(|&t| t <= m)
}

/// Replaces a cross-intersecting pair by the initial segments of the same
/// sizes and checks the result is still cross-intersecting.
pub fn kk_compress_pair(f: &SetFamily, g: &SetFamily) -> Result<(SetFamily, SetFamily)> {
    if !are_cross_intersecting(f, g)? {
        return Err(Error::NotCrossIntersecting);
    }
    let lf = lex_segment(f.params(), f.len());
    let lg = lex_segment(g.params(), g.len());
    if !are_cross_intersecting(&lf, &lg)? {
        return Err(Error::InvariantViolated(format!(
            "L({}, {}) and L({}, {}) are not cross-intersecting",
            f.k(),
            lf.len(),
            g.k(),
            lg.len()
        )));
    }
    Ok((lf, lg))
}
