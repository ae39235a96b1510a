//! The `(i, j)`-shift on sets and families, shiftedness, shifting to a fixed
//! point, and the shift pipeline that keeps a family nontrivial.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::{GroundParams, KSet};

/// A pair `1 <= i < j <= n`; the shift replaces `j` by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftPair {
    i: usize,
    j: usize,
}

impl ShiftPair {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i == 0 || i >= j || j > n {
            return Err(Error::InvalidShiftPair { i, j, n });
        }
        Ok(ShiftPair { i, j })
    }

    #[inline]
    pub fn i(&self) -> usize {
        self.i
    }

    #[inline]
    pub fn j(&self) -> usize {
        self.j
    }

    /// All pairs in sweep order `(1,2), (1,3), ..., (1,n), (2,3), ...`.
    pub fn sweep(n: usize) -> impl Iterator<Item = ShiftPair> {
        (1..n).flat_map(move |i| (i + 1..=n).map(move |j| ShiftPair { i, j }))
    }
}

/// `S_{i,j}(A)`.
#[inline]
pub fn shift_set(set: &KSet, pair: ShiftPair) -> KSet {
    let (bi, bj) = (1u32 << (pair.i - 1), 1u32 << (pair.j - 1));
    let bits = set.bits();
    if bits & bi != 0 || bits & bj == 0 {
        *set
    } else {
        KSet::from_bits_unchecked(set.n(), (bits & !bj) | bi)
    }
}

/// `S_{i,j}(F)`: a member moves unless its image is already present.
pub fn shift_family(fam: &SetFamily, pair: ShiftPair) -> SetFamily {
    let moved = fam.iter().map(|a| {
        let s = shift_set(a, pair);
        if s != *a && !fam.contains(&s) {
            s
        } else {
            *a
        }
    });
    let mut members: Vec<KSet> = moved.collect();
    members.sort_unstable();
    SetFamily::from_sorted_unchecked(fam.params(), members)
}

/// `S_{i,j}(F)` for any distinct `i, j`, including `i > j`.
pub fn shift_family_any(fam: &SetFamily, i: usize, j: usize) -> Result<SetFamily> {
    let n = fam.n();
    if i == 0 || j == 0 || i == j || i > n || j > n {
        return Err(Error::InvalidShiftPair { i, j, n });
    }
    let (bi, bj) = (1u32 << (i - 1), 1u32 << (j - 1));
    let moved = fam.iter().map(|a| {
        let bits = a.bits();
        if bits & bi != 0 || bits & bj == 0 {
            return *a;
        }
        let s = KSet::from_bits_unchecked(n, (bits & !bj) | bi);
        if fam.contains(&s) {
            *a
        } else {
            s
        }
    });
    let mut members: Vec<KSet> = moved.collect();
    members.sort_unstable();
    Ok(SetFamily::from_sorted_unchecked(fam.params(), members))
}

/// `true` iff `fam` is fixed by every shift.
pub fn is_shifted(fam: &SetFamily) -> bool {
    // closure under every replacement j -> i with i < j, i not in A
    fam.iter().all(|a| {
        a.elements().all(|j| {
            (1..j)
                .filter(|&i| !a.contains(i))
                .all(|i| fam.contains(&shift_set(a, ShiftPair { i, j })))
        })
    })
}

/// Sum of all elements over all members; strictly decreases under every
/// shift that changes the family.
pub fn shift_potential(fam: &SetFamily) -> u64 {
    fam.iter()
        .map(|a| a.elements().map(|e| e as u64).sum::<u64>())
        .sum()
}

/// Ordered record of the transformations applied to a family.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftTrace {
    pub shifts: Vec<ShiftPair>,
    /// Relabelling applied after `shifts[..after]`.
    pub relabel: Option<Relabel>,
}

/// Permutation of the ground set; `perm[e - 1]` is the new label of `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relabel {
    pub after: usize,
    pub perm: Vec<usize>,
}

fn shift_until_fixed(
    mut fam: SetFamily,
    pairs: &[ShiftPair],
    trace: &mut Vec<ShiftPair>,
) -> Result<SetFamily> {
    let mut potential = shift_potential(&fam);
    'restart: loop {
        for &p in pairs {
            let next = shift_family(&fam, p);
            if next != fam {
                let np = shift_potential(&next);
                if np >= potential || next.len() != fam.len() {
                    return Err(Error::InvariantViolated(format!(
                        "shift ({}, {}) did not decrease the potential",
                        p.i, p.j
                    )));
                }
                potential = np;
                trace.push(p);
                fam = next;
                continue 'restart;
            }
        }
        return Ok(fam);
    }
}

/// Applies shifts in sweep order, restarting after every effective shift,
/// until the family is shifted.
pub fn shift_to_fixpoint(fam: &SetFamily) -> Result<(SetFamily, ShiftTrace)> {
    let pairs: Vec<ShiftPair> = ShiftPair::sweep(fam.n()).collect();
    let mut shifts = Vec::new();
    let out = shift_until_fixed(fam.clone(), &pairs, &mut shifts)?;
    if fam.is_intersecting() && !out.is_intersecting() {
        return Err(Error::InvariantViolated(
            "shifting destroyed the intersecting property".into(),
        ));
    }
    Ok((out, ShiftTrace { shifts, relabel: None }))
}

/// Applies a ground-set permutation (`perm[e - 1]` = new label of `e`).
pub fn relabel_family(fam: &SetFamily, perm: &[usize]) -> Result<SetFamily> {
    let n = fam.n();
    let mut seen = vec![false; n + 1];
    if perm.len() != n || perm.iter().any(|&x| x == 0 || x > n || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::Precondition(format!("{perm:?} is not a permutation of [{n}]")));
    }
    let members = fam.iter().map(|a| {
        let bits = a.elements().fold(0u32, |acc, e| acc | 1 << (perm[e - 1] - 1));
        KSet::from_bits_unchecked(n, bits)
    });
    SetFamily::new(fam.params(), members)
}

/// How [`shift_preserving_nontriviality`] finished.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NontrivialEnd {
    /// Reached a shifted family without ever being blocked.
    Shifted,
    /// Blocked by a pair, relabelled to `{1, 2}`; the result contains
    /// `C([k+1], k)` and was then shifted to a fixed point.
    ShiftedAfterRelabel,
    /// Blocked and relabelled, but `C([k+1], k)` is missing because sets
    /// through `{1, 2}` are absent (input not of maximal size). Shifts among
    /// `{3..n}` that would create a common element were skipped; see
    /// [`NontrivialShift::tail_fixed`].
    NeedsSaturation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NontrivialShift {
    pub family: SetFamily,
    pub trace: ShiftTrace,
    pub end: NontrivialEnd,
    /// The pair whose shift would have made the family trivial.
    pub blocking_pair: Option<ShiftPair>,
    /// After relabelling, whether every shift with `i, j > 2` could be applied
    /// to a fixed point without creating a common element.
    pub tail_fixed: bool,
}

/// `C([k+1], k)`.
pub fn top_layer_block(params: GroundParams) -> SetFamily {
    let k = params.k();
    let base = KSet::prefix(params.n(), k + 1);
    SetFamily::from_predicate(params, |s| s.is_subset(&base))
}

/// Shifts while keeping the family nontrivially intersecting.
///
/// Shifts that would create a common element are skipped. If that blocks
/// progress, every member meets the blocking pair `{x, y}`; the ground set is
/// relabelled so that `x -> 1`, `y -> 2`, shifts among `{3..n}` are applied to
/// a fixed point, and, once `C([k+1], k)` is present, all shifts are safe.
pub fn shift_preserving_nontriviality(fam: &SetFamily) -> Result<NontrivialShift> {
    if !fam.is_intersecting() {
        return Err(Error::Precondition("family is not intersecting".into()));
    }
    if fam.is_trivial() {
        return Err(Error::Precondition("family is trivially intersecting".into()));
    }
    let n = fam.n();
    let size = fam.len();
    let all: Vec<ShiftPair> = ShiftPair::sweep(n).collect();
    let mut trace = ShiftTrace::default();
    let (mut cur, blocked) = shift_avoiding_trivial(fam.clone(), &all, &mut trace.shifts)?;

    let mut tail_fixed = true;
    let end = match blocked {
        None => NontrivialEnd::Shifted,
        Some(p) => {
            let perm = pair_to_front(n, p.i, p.j);
            cur = relabel_family(&cur, &perm)?;
            trace.relabel = Some(Relabel {
                after: trace.shifts.len(),
                perm,
            });
            let tail: Vec<ShiftPair> = all.iter().copied().filter(|q| q.i > 2).collect();
            let (next, tail_blocked) = shift_avoiding_trivial(cur, &tail, &mut trace.shifts)?;
            cur = next;
            tail_fixed = tail_blocked.is_none();
            if tail_fixed && top_layer_block(cur.params()).is_subfamily_of(&cur) {
                cur = shift_until_fixed(cur, &all, &mut trace.shifts)?;
                NontrivialEnd::ShiftedAfterRelabel
            } else {
                NontrivialEnd::NeedsSaturation
            }
        }
    };

    if cur.len() != size || !cur.is_intersecting() || cur.is_trivial() {
        return Err(Error::InvariantViolated(
            "nontrivial shift pipeline lost size, intersection or nontriviality".into(),
        ));
    }
    Ok(NontrivialShift {
        family: cur,
        trace,
        end,
        blocking_pair: blocked,
        tail_fixed,
    })
}

/// Shifts in sweep order, skipping any shift that would leave a common
/// element; returns the first skipped pair of the final sweep.
fn shift_avoiding_trivial(
    mut cur: SetFamily,
    pairs: &[ShiftPair],
    trace: &mut Vec<ShiftPair>,
) -> Result<(SetFamily, Option<ShiftPair>)> {
    let mut potential = shift_potential(&cur);
    'restart: loop {
        let mut blocked = None;
        for &p in pairs {
            let next = shift_family(&cur, p);
            if next == cur {
                continue;
            }
            if next.is_trivial() {
                blocked.get_or_insert(p);
                continue;
            }
            let np = shift_potential(&next);
            if np >= potential {
                return Err(Error::InvariantViolated("shift potential did not decrease".into()));
            }
            potential = np;
            trace.push(p);
            cur = next;
            continue 'restart;
        }
        return Ok((cur, blocked));
    }
}

/// Permutation sending `x -> 1` and `y -> 2` via two transpositions.
fn pair_to_front(n: usize, x: usize, y: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    let swap = |perm: &mut Vec<usize>, a: usize, b: usize| {
        for v in perm.iter_mut() {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
    };
    swap(&mut perm, x, 1);
    let y_now = perm[y - 1];
    swap(&mut perm, y_now, 2);
    perm
}

/// Maximal `l` with `|F ∩ [2l-1]| = l` and `2l <= n`, together with
/// `L = [2l] \ F`.
pub fn frankl_l(set: &KSet) -> Result<(usize, KSet)> {
    let n = set.n();
    let best = (1..)
        .take_while(|&l| 2 * l <= n)
        .filter(|&l| set.intersection(&KSet::prefix(n, 2 * l - 1)).len() == l)
        .last()
        .ok_or_else(|| Error::NoFranklIndex(set.to_string()))?;
    Ok((best, KSet::prefix(n, 2 * best).difference(set)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::all_ksets;

    fn s(n: usize, e: &[usize]) -> KSet {
        KSet::from_elements(n, e).unwrap()
    }

    fn pair(i: usize, j: usize) -> ShiftPair {
        ShiftPair::new(i, j, 30).unwrap()
    }

    #[test]
    fn shift_any_agrees_with_conjugated_shift() {
        let params = GroundParams::new(6, 3).unwrap();
        let layer = all_ksets(params);
        for mask in [0x5a5a5u32, 0x13579, 0xfedcb] {
            let fam = SetFamily::new(params, layer.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| *x)).unwrap();
            for (i, j) in [(2, 5), (5, 2), (6, 1)] {
                let direct = shift_family_any(&fam, i, j).unwrap();
                let (lo, hi) = (i.min(j), i.max(j));
                // swap lo and hi, shift hi into lo, swap back
                let mut perm: Vec<usize> = (1..=6).collect();
                perm.swap(lo - 1, hi - 1);
                let conj = if i < j {
                    shift_family(&fam, pair(i, j))
                } else {
                    let t = relabel_family(&fam, &perm).unwrap();
                    relabel_family(&shift_family(&t, pair(lo, hi)), &perm).unwrap()
                };
                assert_eq!(direct, conj, "({i},{j})");
                assert_eq!(direct.len(), fam.len());
            }
        }
        assert!(shift_family_any(&SetFamily::empty(params), 3, 3).is_err());
    }

    fn hm_family(n: usize, k: usize) -> SetFamily {
        let a = KSet::interval(n, 2, k + 1);
        SetFamily::from_predicate(GroundParams::new(n, k).unwrap(), |x| {
            *x == a || (x.contains(1) && x.intersects(&a))
        })
    }

    #[test]
    fn pair_validation() {
        assert!(ShiftPair::new(2, 2, 5).is_err());
        assert!(ShiftPair::new(3, 2, 5).is_err());
        assert!(ShiftPair::new(1, 6, 5).is_err());
        assert_eq!(ShiftPair::sweep(4).count(), 6);
    }

    #[test]
    fn set_shift_examples() {
        assert_eq!(shift_set(&s(5, &[2, 3]), pair(1, 2)), s(5, &[1, 3]));
        assert_eq!(shift_set(&s(5, &[1, 2]), pair(1, 2)), s(5, &[1, 2]));
        assert_eq!(shift_set(&s(5, &[1, 4, 5]), pair(2, 4)), s(5, &[1, 2, 5]));
    }

    #[test]
    fn family_shift_examples() {
        let params = GroundParams::new(6, 3).unwrap();
        let star = SetFamily::star(params, 1).unwrap();
        for p in ShiftPair::sweep(6) {
            assert_eq!(shift_family(&star, p), star);
        }
        let fam = SetFamily::from_lists(4, 2, &[&[2, 3], &[2, 4], &[3, 4]]).unwrap();
        let expected = SetFamily::from_lists(4, 2, &[&[1, 3], &[1, 4], &[3, 4]]).unwrap();
        assert_eq!(shift_family(&fam, pair(1, 2)), expected);
        let both = SetFamily::from_lists(4, 2, &[&[2, 3], &[1, 3]]).unwrap();
        assert_eq!(shift_family(&both, pair(1, 2)), both);
    }

    #[test]
    fn shiftedness_examples() {
        for n in 2..=8 {
            for k in 1..=n.min(4) {
                let params = GroundParams::new(n, k).unwrap();
                for m in 0..=params.layer_size() as usize {
                    assert!(is_shifted(&crate::lex::lex_segment(params, m)));
                }
            }
        }
        assert!(!is_shifted(&SetFamily::from_lists(4, 2, &[&[2, 3]]).unwrap()));
        for k in 1..=5 {
            assert!(is_shifted(&top_layer_block(GroundParams::new(9, k).unwrap())));
        }
    }

    #[test]
    fn is_shifted_matches_pairwise_definition() {
        let params = GroundParams::new(5, 2).unwrap();
        let all = all_ksets(params);
        for mask in 0u32..(1 << all.len()) {
            let fam = SetFamily::new(
                params,
                all.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| *s),
            )
            .unwrap();
            let by_def = ShiftPair::sweep(5).all(|p| shift_family(&fam, p) == fam);
            assert_eq!(is_shifted(&fam), by_def);
        }
    }

    #[test]
    fn fixpoint_examples() {
        let star = SetFamily::star(GroundParams::new(6, 3).unwrap(), 1).unwrap();
        let (out, trace) = shift_to_fixpoint(&star).unwrap();
        assert_eq!(out, star);
        assert!(trace.shifts.is_empty());

        let fam = SetFamily::from_lists(4, 2, &[&[2, 3], &[2, 4], &[3, 4]]).unwrap();
        let (out, trace) = shift_to_fixpoint(&fam).unwrap();
        let expected = SetFamily::from_lists(4, 2, &[&[1, 2], &[1, 3], &[2, 3]]).unwrap();
        assert_eq!(out, expected);
        assert!(is_shifted(&out));
        // reproducible
        assert_eq!(shift_to_fixpoint(&fam).unwrap().1, trace);
    }

    #[test]
    fn nontrivial_pipeline_on_block() {
        let params = GroundParams::new(7, 3).unwrap();
        let block = top_layer_block(params);
        let out = shift_preserving_nontriviality(&block).unwrap();
        assert_eq!(out.family, block);
        assert_eq!(out.end, NontrivialEnd::Shifted);
        assert!(out.trace.shifts.is_empty());
    }

    #[test]
    fn nontrivial_pipeline_on_relabelled_hm() {
        let hm = hm_family(7, 3);
        // scramble labels
        let perm = vec![5, 3, 7, 1, 2, 6, 4];
        let scrambled = relabel_family(&hm, &perm).unwrap();
        let out = shift_preserving_nontriviality(&scrambled).unwrap();
        assert_eq!(out.family.len(), 13);
        assert!(out.family.is_intersecting());
        assert!(!out.family.is_trivial());
        assert_ne!(out.end, NontrivialEnd::NeedsSaturation);
        assert!(is_shifted(&out.family));
    }

    #[test]
    fn nontrivial_pipeline_flags_missing_saturation() {
        // every member meets {1,2}; the pipeline gets blocked and only a
        // few sets through {1,2} are present
        let fam =
            SetFamily::from_lists(7, 3, &[&[1, 3, 6], &[2, 3, 6], &[1, 2, 5]])
                .unwrap();
        assert!(fam.is_intersecting() && !fam.is_trivial());
        let out = shift_preserving_nontriviality(&fam).unwrap();
        assert_eq!(out.family.len(), fam.len());
        assert!(out.family.is_intersecting() && !out.family.is_trivial());
        assert_eq!(out.end, NontrivialEnd::NeedsSaturation);
        assert_eq!(out.blocking_pair, Some(pair(1, 3)));
        assert!(out.trace.relabel.is_some());
        assert!(!out.tail_fixed);
    }

    #[test]
    fn nontrivial_pipeline_rejects_trivial() {
        let star = SetFamily::star(GroundParams::new(6, 3).unwrap(), 2).unwrap();
        assert!(shift_preserving_nontriviality(&star).is_err());
    }

    #[test]
    fn pair_to_front_cases() {
        for n in 3..=6 {
            for x in 1..=n {
                for y in x + 1..=n {
                    let perm = pair_to_front(n, x, y);
                    assert_eq!(perm[x - 1], 1);
                    assert_eq!(perm[y - 1], 2);
                    let mut sorted = perm.clone();
                    sorted.sort();
                    assert_eq!(sorted, (1..=n).collect::<Vec<_>>());
                }
            }
        }
    }

    fn frankl_scan_oracle(set: &KSet) -> Option<usize> {
        let n = set.n();
        let mut best = None;
        for l in 1..=n / 2 {
            let count = set.elements().filter(|&e| e < 2 * l).count();
            if count == l {
                best = Some(l);
            }
        }
        best
    }

    #[test]
    fn frankl_l_examples() {
        assert_eq!(frankl_l(&s(5, &[2, 3])).unwrap(), (2, s(5, &[1, 4])));
        assert_eq!(frankl_l(&s(7, &[1, 2, 3])).unwrap(), (3, s(7, &[4, 5, 6])));
        assert_eq!(frankl_l(&s(6, &[1, 3, 5])).unwrap(), (3, s(6, &[2, 4, 6])));
        assert!(frankl_l(&s(6, &[3, 4])).is_err());
        for set in all_ksets(GroundParams::new(10, 4).unwrap()) {
            match (frankl_l(&set), frankl_scan_oracle(&set)) {
                (Ok((l, big_l)), Some(expected)) => {
                    assert_eq!(l, expected);
                    assert_eq!(big_l.len(), l);
                    assert!(big_l.is_subset(&KSet::prefix(10, 2 * l)));
                }
                (Err(_), None) => {}
                (got, want) => panic!("{set}: {got:?} vs {want:?}"),
            }
        }
    }
}
