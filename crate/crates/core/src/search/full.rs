//! Enumeration of maximal intersecting families without the shiftedness
//! restriction: maximal cliques of the intersection graph on k-sets.

use std::time::Instant;

use crate::family::SetFamily;
use crate::search::enumerate::EnumStats;
use crate::set::{all_ksets, GroundParams, KSet};

type Bits = Vec<u64>;

fn bits_iter(b: &[u64]) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            (x != 0).then(|| {
                let t = x.trailing_zeros() as usize;
                x &= x - 1;
                w * 64 + t
            })
        })
    })
}

fn and(a: &[u64], b: &[u64]) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&w| w == 0)
}

struct Kliques<'a, F> {
    sets: &'a [KSet],
    params: GroundParams,
    adj: Vec<Bits>,
    clique: Vec<KSet>,
    deadline: Option<Instant>,
    visit: F,
    stats: EnumStats,
}

impl<F: FnMut(&SetFamily)> Kliques<'_, F> {
    // Bron–Kerbosch with Tomita pivoting.
    fn expand(&mut self, p: Bits, mut x: Bits) {
        self.stats.nodes += 1;
        if self.stats.partial {
            return;
        }
        if self.stats.nodes & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.stats.partial = true;
                    return;
                }
            }
        }
        if is_zero(&p) && is_zero(&x) {
            self.stats.visited += 1;
            let mut members = self.clique.clone();
            members.sort_unstable();
            (self.visit)(&SetFamily::from_sorted_unchecked(self.params, members));
            return;
        }
        let pivot = bits_iter(&p)
            .chain(bits_iter(&x))
            .max_by_key(|&u| and_count(&p, &self.adj[u]))
            .expect("p or x nonempty");
        let candidates: Vec<usize> = bits_iter(&p).filter(|&v| self.adj[pivot][v / 64] >> (v % 64) & 1 == 0).collect();
        let mut p = p;
        for v in candidates {
            self.clique.push(self.sets[v]);
            let np = and(&p, &self.adj[v]);
            let nx = and(&x, &self.adj[v]);
            self.expand(np, nx);
            self.clique.pop();
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }
}

/// Visits every maximal intersecting family in `C([n], k)` once.
pub fn enumerate_maximal_intersecting(
    params: GroundParams,
    deadline: Option<Instant>,
    visit: impl FnMut(&SetFamily),
) -> EnumStats {
    let sets = all_ksets(params);
    let words = sets.len().div_ceil(64).max(1);
    let adj: Vec<Bits> = sets
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut row = vec![0u64; words];
            for (j, b) in sets.iter().enumerate() {
                if i != j && a.intersects(b) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
            row
        })
        .collect();
    let mut all = vec![0u64; words];
    for i in 0..sets.len() {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut k = Kliques {
        sets: &sets,
        params,
        adj,
        clique: Vec::new(),
        deadline,
        visit,
        stats: EnumStats::default(),
    };
    k.expand(all, vec![0; words]);
    k.stats
}

/// For `n = 2k` the maximal intersecting families are exactly the choices of
/// one set from each complementary pair. Visits all `2^(C(n,k)/2)` of them.
pub fn enumerate_complementary_choices(
    params: GroundParams,
    deadline: Option<Instant>,
    mut visit: impl FnMut(&SetFamily),
) -> crate::error::Result<EnumStats> {
    let (n, k) = (params.n(), params.k());
    if n != 2 * k {
        return Err(crate::error::Error::Precondition(format!("need n = 2k, got n={n}, k={k}")));
    }
    // pairs: the sets containing 1 and their complements
    let firsts: Vec<KSet> = all_ksets(params).into_iter().filter(|s| s.contains(1)).collect();
    if firsts.len() > 24 {
        return Err(crate::error::Error::Precondition(format!(
            "2^{} choices is too many",
            firsts.len()
        )));
    }
    let mut stats = EnumStats::default();
    for mask in 0u64..(1 << firsts.len()) {
        if mask & 0xfff == 0 {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    stats.partial = true;
                    break;
                }
            }
        }
        let members = firsts
            .iter()
            .enumerate()
            .map(|(i, s)| if mask >> i & 1 == 1 { s.complement() } else { *s });
        let fam = SetFamily::new(params, members)?;
        stats.visited += 1;
        stats.nodes += 1;
        visit(&fam);
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_maximal(params: GroundParams) -> Vec<SetFamily> {
        let all = all_ksets(params);
        let fams: Vec<SetFamily> = (0u32..(1 << all.len()))
            .map(|mask| {
                SetFamily::new(params, all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s))
                    .unwrap()
            })
            .filter(|f| f.is_intersecting())
            .collect();
        fams.iter()
            .filter(|f| {
                all.iter().all(|s| f.contains(s) || f.iter().any(|m| !m.intersects(s)))
            })
            .cloned()
            .collect()
    }

    #[test]
    fn maximal_cliques_match_brute_force() {
        for (n, k) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
            let params = GroundParams::new(n, k).unwrap();
            let mut got = Vec::new();
            let stats = enumerate_maximal_intersecting(params, None, |f| got.push(f.clone()));
            assert!(!stats.partial);
            let mut want = brute_maximal(params);
            got.sort_by(|a, b| a.members().cmp(b.members()));
            want.sort_by(|a, b| a.members().cmp(b.members()));
            assert_eq!(got, want, "n={n} k={k}");
        }
    }

    #[test]
    fn complementary_choices_at_n_2k() {
        let params = GroundParams::new(6, 3).unwrap();
        let mut seen = 0;
        let stats = enumerate_complementary_choices(params, None, |f| {
            assert!(f.is_intersecting());
            assert_eq!(f.len(), 10);
            seen += 1;
        })
        .unwrap();
        assert_eq!(seen, 1024);
        assert_eq!(stats.visited, 1024);
        let mut cliques = 0;
        enumerate_maximal_intersecting(params, None, |_| cliques += 1);
        assert_eq!(cliques, 1024);
        assert!(enumerate_complementary_choices(GroundParams::new(7, 3).unwrap(), None, |_| {}).is_err());
    }
}
