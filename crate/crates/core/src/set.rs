//! Ground sets and k-element subsets stored as bitmasks.
//!
//! Element `i` (1-based) lives in bit `i - 1`.

use std::cmp::Ordering;
use std::fmt;

use crate::binom::MAX_N;
use crate::error::{Error, Result};

/// Ground-set size `n` together with the uniform set size `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundParams {
    n: u8,
    k: u8,
}

impl GroundParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n || n > MAX_N {
            return Err(Error::InvalidParams { n, k });
        }
        Ok(GroundParams {
            n: n as u8,
            k: k as u8,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k as usize
    }

    /// Same ground set, different set size.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        GroundParams::new(self.n(), k)
    }

    /// Number of k-sets, `C(n, k)`.
    pub fn layer_size(&self) -> u64 {
        crate::binom::choose(self.n(), self.k())
    }

    pub(crate) fn ground_mask(&self) -> u32 {
        ground_mask(self.n())
    }
}

#[inline]
pub(crate) fn ground_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A subset of `[n]` with its cardinality cached.
///
/// Used both for members of uniform families and for auxiliary element sets
/// such as `I`, `J` and `L`. Ordering is the lexicographic order on subsets:
/// `A < B` iff the smallest element of the symmetric difference lies in `A`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KSet {
    bits: u32,
    n: u8,
    len: u8,
}

impl KSet {
    pub fn from_bits(n: usize, bits: u32) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::InvalidParams { n, k: 0 });
        }
        if bits & !ground_mask(n) != 0 {
            let elem = 32 - bits.leading_zeros() as usize;
            return Err(Error::ElementOutOfRange { elem, n });
        }
        Ok(KSet::from_bits_unchecked(n, bits))
    }

    #[inline]
    pub(crate) fn from_bits_unchecked(n: usize, bits: u32) -> Self {
        KSet {
            bits,
            n: n as u8,
            len: bits.count_ones() as u8,
        }
    }

    /// Builds a set from 1-based elements in any order; duplicates are rejected.
    pub fn from_elements(n: usize, elems: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elems {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { elem: e, n });
            }
            let b = 1u32 << (e - 1);
            if bits & b != 0 {
                return Err(Error::NotStrictlyIncreasing(elems.to_vec()));
            }
            bits |= b;
        }
        KSet::from_bits(n, bits)
    }

    /// The interval `[lo, hi]` (empty when `lo > hi`).
    pub fn interval(n: usize, lo: usize, hi: usize) -> Self {
        let hi = hi.min(n);
        if lo == 0 || lo > hi {
            return KSet::from_bits_unchecked(n, 0);
        }
        let bits = ground_mask(hi) & !ground_mask(lo - 1);
        KSet::from_bits_unchecked(n, bits)
    }

    /// `[m] = {1, ..., m}` clipped to the ground set.
    pub fn prefix(n: usize, m: usize) -> Self {
        KSet::interval(n, 1, m)
    }

    pub fn empty(n: usize) -> Self {
        KSet::from_bits_unchecked(n, 0)
    }

    #[inline]
    pub fn bits(&self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(&self, elem: usize) -> bool {
        (1..=32).contains(&elem) && self.bits & (1u32 << (elem - 1)) != 0
    }

    #[inline]
    pub fn intersects(&self, other: &KSet) -> bool {
        self.bits & other.bits != 0
    }

    #[inline]
    pub fn is_subset(&self, other: &KSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersection(&self, other: &KSet) -> KSet {
        KSet::from_bits_unchecked(self.n(), self.bits & other.bits)
    }

    pub fn union(&self, other: &KSet) -> KSet {
        KSet::from_bits_unchecked(self.n(), self.bits | other.bits)
    }

    pub fn difference(&self, other: &KSet) -> KSet {
        KSet::from_bits_unchecked(self.n(), self.bits & !other.bits)
    }

    /// `[n] \ self`.
    pub fn complement(&self) -> KSet {
        KSet::from_bits_unchecked(self.n(), !self.bits & ground_mask(self.n()))
    }

    /// Smallest element, if any.
    pub fn min_element(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize + 1)
    }

    pub fn max_element(&self) -> Option<usize> {
        (self.bits != 0).then(|| 32 - self.bits.leading_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn elements(&self) -> Elements {
        Elements { bits: self.bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements().collect()
    }

    /// Lexicographic comparison: the set holding the smallest element of the
    /// symmetric difference comes first.
    #[inline]
    pub fn lex_cmp(&self, other: &KSet) -> Ordering {
        lex_cmp_bits(self.bits, other.bits)
    }
}

#[inline]
pub(crate) fn lex_cmp_bits(a: u32, b: u32) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let d = a ^ b;
    let low = d & d.wrapping_neg();
    if a & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other).then(self.n.cmp(&other.n))
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, e) in self.elements().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Iterator over the elements of a [`KSet`].
#[derive(Clone)]
pub struct Elements {
    bits: u32,
}

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let e = self.bits.trailing_zeros() as usize + 1;
        self.bits &= self.bits - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.bits.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

/// All `m`-subsets of the bits in `mask`, as raw bitmasks in lexicographic
/// set order.
pub(crate) fn subsets_of_mask(mask: u32, m: usize) -> Vec<u32> {
    let positions: Vec<u32> = (0..32).filter(|b| mask & (1 << b) != 0).collect();
    let mut out = Vec::new();
    if m > positions.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        out.push(idx.iter().fold(0u32, |acc, &i| acc | 1 << positions[i]));
        // advance the index tuple in lexicographic order
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] < positions.len() - (m - pos) {
                idx[pos] += 1;
                for q in pos + 1..m {
                    idx[q] = idx[q - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Every k-set of `[n]` in lexicographic order.
pub fn all_ksets(params: GroundParams) -> Vec<KSet> {
    subsets_of_mask(params.ground_mask(), params.k())
        .into_iter()
        .map(|b| KSet::from_bits_unchecked(params.n(), b))
        .collect()
}
