//! Seeded random generators for intersecting and cross-intersecting
//! families. Every draw is a function of `(seed, stream)` only, so parallel
//! trials stay reproducible.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::set::{all_ksets, GroundParams, KSet};

pub type TrialRng = ChaCha8Rng;

/// Independent generator for trial `stream` of a seeded run.
pub fn trial_rng(seed: u64, stream: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Greedy growth over a shuffled layer. With `maximal` the result cannot be
/// extended; otherwise growth stops at a random target size.
pub fn random_intersecting(params: GroundParams, rng: &mut impl Rng, maximal: bool) -> SetFamily {
    let mut layer = all_ksets(params);
    layer.shuffle(rng);
    // bias half the draws towards a random star so that large, low-diversity
    // families show up too
    if rng.random_bool(0.5) {
        let x = rng.random_range(1..=params.n());
        layer.sort_by_key(|s| !s.contains(x));
        let head = layer.iter().filter(|s| s.contains(x)).count();
        let keep = rng.random_range(0..=head);
        layer[keep..].shuffle(rng);
    }
    let target = if maximal {
        usize::MAX
    } else {
        rng.random_range(1..=layer.len().max(1))
    };
    let mut members: Vec<KSet> = Vec::new();
    for s in layer {
        if members.len() >= target {
            break;
        }
        if members.iter().all(|m| m.intersects(&s)) {
            members.push(s);
        }
    }
    SetFamily::new(params, members).expect("members lie in the layer")
}

/// Sets outside `fam` whose lower covers all lie in `fam` and which meet
/// every member: the sets that keep `fam` shifted and intersecting.
pub fn addable_shifted(fam: &SetFamily) -> Vec<KSet> {
    all_ksets(fam.params())
        .into_iter()
        .filter(|s| !fam.contains(s))
        .filter(|s| {
            s.elements().filter(|&e| e > 1 && !s.contains(e - 1)).all(|e| {
                let lower = KSet::from_bits_unchecked(s.n(), (s.bits() & !(1 << (e - 1))) | (1 << (e - 2)));
                fam.contains(&lower)
            })
        })
        .filter(|s| fam.iter().all(|m| m.intersects(s)))
        .collect()
}

/// A random shifted, nontrivially intersecting family: all k-subsets of
/// `[k+1]`, grown by random addable sets until a random stop.
pub fn random_shifted_nontrivial(params: GroundParams, rng: &mut impl Rng) -> Result<SetFamily> {
    let (n, k) = (params.n(), params.k());
    if k < 2 || n < k + 1 {
        return Err(Error::Precondition(format!(
            "no nontrivial intersecting family for n={n}, k={k}"
        )));
    }
    let base = all_ksets(params).into_iter().filter(|s| s.max_element() <= Some(k + 1));
    let mut fam = SetFamily::new(params, base)?;
    let stop = rng.random_range(0.01..0.4);
    loop {
        let options = addable_shifted(&fam);
        let Some(&s) = options.choose(rng) else { break };
        fam = fam.union(&SetFamily::new(params, [s])?)?;
        if rng.random_bool(stop) {
            break;
        }
    }
    Ok(fam)
}

/// A random cross-intersecting pair in `C([n], a) x C([n], b)`.
pub fn random_cross_intersecting_pair(
    n: usize,
    a: usize,
    b: usize,
    rng: &mut impl Rng,
) -> Result<(SetFamily, SetFamily)> {
    let pa = GroundParams::new(n, a)?;
    let pb = GroundParams::new(n, b)?;
    let mut first: Vec<KSet> = all_ksets(pa);
    first.shuffle(rng);
    if rng.random_bool(0.5) {
        // concentrate on a star, with a few stray sets
        let x = rng.random_range(1..=n);
        let strays = rng.random_range(0..=3);
        let mut star: Vec<KSet> = first.iter().filter(|s| s.contains(x)).copied().collect();
        star.extend(first.iter().filter(|s| !s.contains(x)).take(strays));
        first = star;
    }
    let take = rng.random_range(0..=first.len());
    first.truncate(take);
    let fam_f = SetFamily::new(pa, first)?;
    let keep = rng.random_range(0.3..=1.0);
    let second = all_ksets(pb)
        .into_iter()
        .filter(|g| fam_f.iter().all(|f| f.intersects(g)))
        .filter(|_| rng.random_bool(keep));
    let fam_g = SetFamily::new(pb, second.collect::<Vec<_>>())?;
    Ok((fam_f, fam_g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::are_cross_intersecting;
    use crate::shifting::is_shifted;

    #[test]
    fn same_seed_same_family() {
        let params = GroundParams::new(9, 3).unwrap();
        let a = random_intersecting(params, &mut trial_rng(7, 3), false);
        let b = random_intersecting(params, &mut trial_rng(7, 3), false);
        assert_eq!(a, b);
    }

    #[test]
    fn generated_families_have_their_properties() {
        let params = GroundParams::new(9, 3).unwrap();
        for t in 0..50 {
            let mut rng = trial_rng(1, t);
            let f = random_intersecting(params, &mut rng, t % 2 == 0);
            assert!(f.is_intersecting());
            if t % 2 == 0 {
                assert!(addable_any(&f).is_none());
            }
            let s = random_shifted_nontrivial(params, &mut rng).unwrap();
            assert!(s.is_intersecting() && is_shifted(&s) && !s.is_trivial());
            let (f, g) = random_cross_intersecting_pair(8, 3, 3, &mut rng).unwrap();
            assert!(are_cross_intersecting(&f, &g).unwrap());
        }
    }

    fn addable_any(f: &SetFamily) -> Option<KSet> {
        all_ksets(f.params())
            .into_iter()
            .find(|s| !f.contains(s) && f.iter().all(|m| m.intersects(s)))
    }
}
