//! Uniform set families and their elementary statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::{all_ksets, GroundParams, KSet};

/// A duplicate-free family of k-sets of `[n]`, kept in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct SetFamily {
    params: GroundParams,
    members: Vec<KSet>,
}

/// Wire form: `{"n":int,"k":int,"sets":[[int,...],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub k: usize,
    pub sets: Vec<Vec<usize>>,
}

impl TryFrom<FamilyJson> for SetFamily {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        let params = GroundParams::new(j.n, j.k)?;
        let mut members = Vec::with_capacity(j.sets.len());
        for set in &j.sets {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotStrictlyIncreasing(set.clone()));
            }
            members.push(KSet::from_elements(j.n, set)?);
        }
        SetFamily::new(params, members)
    }
}

impl From<SetFamily> for FamilyJson {
    fn from(f: SetFamily) -> Self {
        FamilyJson {
            n: f.params.n(),
            k: f.params.k(),
            sets: f.members.iter().map(|s| s.to_vec()).collect(),
        }
    }
}

impl SetFamily {
    /// Validates, sorts and deduplicates `members`.
    pub fn new(params: GroundParams, members: impl IntoIterator<Item = KSet>) -> Result<Self> {
        let mut v: Vec<KSet> = members.into_iter().collect();
        for s in &v {
            if s.n() != params.n() {
                return Err(Error::GroundMismatch {
                    left: params.n(),
                    right: s.n(),
                });
            }
            if s.len() != params.k() {
                return Err(Error::WrongSetSize {
                    set: s.to_string(),
                    got: s.len(),
                    expected: params.k(),
                });
            }
        }
        v.sort_unstable();
        v.dedup();
        Ok(SetFamily { params, members: v })
    }

    /// Caller guarantees members are valid, sorted and distinct.
    pub(crate) fn from_sorted_unchecked(params: GroundParams, members: Vec<KSet>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        SetFamily { params, members }
    }

    /// Convenience constructor from element lists.
    pub fn from_lists(n: usize, k: usize, sets: &[&[usize]]) -> Result<Self> {
        let params = GroundParams::new(n, k)?;
        let members = sets
            .iter()
            .map(|s| KSet::from_elements(n, s))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::new(params, members)
    }

    pub fn empty(params: GroundParams) -> Self {
        SetFamily {
            params,
            members: Vec::new(),
        }
    }

    /// All of `C([n], k)`.
    pub fn full_layer(params: GroundParams) -> Self {
        SetFamily::from_sorted_unchecked(params, all_ksets(params))
    }

    /// Every k-set satisfying `pred`.
    pub fn from_predicate(params: GroundParams, mut pred: impl FnMut(&KSet) -> bool) -> Self {
        let members = all_ksets(params).into_iter().filter(|s| pred(s)).collect();
        SetFamily::from_sorted_unchecked(params, members)
    }

    /// The full star `{A : elem ∈ A}`.
    pub fn star(params: GroundParams, elem: usize) -> Result<Self> {
        if elem == 0 || elem > params.n() {
            return Err(Error::ElementOutOfRange {
                elem,
                n: params.n(),
            });
        }
        Ok(SetFamily::from_predicate(params, |s| s.contains(elem)))
    }

    #[inline]
    pub fn params(&self) -> GroundParams {
        self.params
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.params.n()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.params.k()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in lexicographic order.
    #[inline]
    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, KSet> {
        self.members.iter()
    }

    pub fn contains(&self, set: &KSet) -> bool {
        self.members.binary_search(set).is_ok()
    }

    /// Lexicographically last member.
    pub fn last(&self) -> Option<&KSet> {
        self.members.last()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|s| other.contains(s))
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        self.check_same_layer(other)?;
        SetFamily::new(
            self.params,
            self.members.iter().chain(other.members.iter()).copied(),
        )
    }

    pub fn difference(&self, other: &SetFamily) -> Result<SetFamily> {
        self.check_same_layer(other)?;
        let members = self
            .members
            .iter()
            .filter(|s| !other.contains(s))
            .copied()
            .collect();
        Ok(SetFamily::from_sorted_unchecked(self.params, members))
    }

    pub(crate) fn check_same_layer(&self, other: &SetFamily) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::GroundMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        if self.k() != other.k() {
            return Err(Error::Precondition(format!(
                "families have different set sizes ({} vs {})",
                self.k(),
                other.k()
            )));
        }
        Ok(())
    }

    /// `true` iff any two members meet. Empty and singleton families qualify.
    pub fn is_intersecting(&self) -> bool {
        let m = &self.members;
        for (idx, a) in m.iter().enumerate() {
            if m[idx + 1..].iter().any(|b| !a.intersects(b)) {
                return false;
            }
        }
        true
    }

    /// Degree of every element; index `e - 1` holds `|{F : e ∈ F}|`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n()];
        for s in &self.members {
            for e in s.elements() {
                deg[e - 1] += 1;
            }
        }
        deg
    }

    pub fn degree(&self, elem: usize) -> usize {
        self.members.iter().filter(|s| s.contains(elem)).count()
    }

    /// An element of maximum degree (smallest on ties) and that degree.
    pub fn max_degree(&self) -> (usize, usize) {
        let deg = self.degrees();
        let mut best = (1, deg[0]);
        for (idx, &d) in deg.iter().enumerate().skip(1) {
            if d > best.1 {
                best = (idx + 1, d);
            }
        }
        best
    }

    /// `|F| - Δ(F)`.
    pub fn diversity(&self) -> usize {
        self.len() - self.max_degree().1
    }

    /// Smallest element shared by every member; `None` for the empty family.
    pub fn common_element(&self) -> Option<usize> {
        let first = self.members.first()?;
        let common = self.members.iter().fold(first.bits(), |acc, s| acc & s.bits());
        (common != 0).then(|| common.trailing_zeros() as usize + 1)
    }

    /// Trivially intersecting: every member contains one fixed element.
    /// The empty family counts as trivial.
    pub fn is_trivial(&self) -> bool {
        self.is_empty() || self.common_element().is_some()
    }

    /// `F(Ī J)` re-indexed onto `[n] \ (I ∪ J)`.
    pub fn restrict(&self, avoid: &KSet, include: &KSet) -> Result<Restriction> {
        if avoid.intersects(include) {
            return Err(Error::OverlappingRestriction);
        }
        for x in [avoid, include] {
            if x.n() != self.n() {
                return Err(Error::GroundMismatch {
                    left: self.n(),
                    right: x.n(),
                });
            }
        }
        let removed = avoid.union(include);
        let kept: Vec<usize> = removed.complement().to_vec();
        let new_n = kept.len();
        let new_k = self.k() - include.len().min(self.k());
        let params = GroundParams::new(new_n, new_k)?;
        let mut position = [0usize; 33];
        for (idx, &e) in kept.iter().enumerate() {
            position[e] = idx + 1;
        }
        let mut members = Vec::new();
        for s in &self.members {
            if include.is_subset(s) && !s.intersects(avoid) {
                let rest = s.difference(include);
                let bits = rest
                    .elements()
                    .fold(0u32, |acc, e| acc | 1 << (position[e] - 1));
                members.push(KSet::from_bits_unchecked(new_n, bits));
            }
        }
        Ok(Restriction {
            family: SetFamily::new(params, members)?,
            ground: kept,
            include: *include,
            parent_n: self.n(),
        })
    }
}

impl std::fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SetFamily(n={}, k={}, ", self.n(), self.k())?;
        f.debug_list().entries(self.members.iter()).finish()?;
        f.write_str(")")
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a KSet;
    type IntoIter = std::slice::Iter<'a, KSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Result of [`SetFamily::restrict`], remembering how to map back.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub family: SetFamily,
    /// `ground[i - 1]` is the original element relabelled as `i`.
    pub ground: Vec<usize>,
    pub include: KSet,
    parent_n: usize,
}

impl Restriction {
    /// Maps each member back to the original ground set and re-inserts `J`.
    pub fn lift(&self) -> Vec<KSet> {
        self.family
            .iter()
            .map(|s| {
                let bits = s
                    .elements()
                    .fold(self.include.bits(), |acc, e| acc | 1 << (self.ground[e - 1] - 1));
                KSet::from_bits_unchecked(self.parent_n, bits)
            })
            .collect()
    }
}

/// `true` iff every member of `a` meets every member of `b`; vacuous when
/// either is empty.
pub fn are_cross_intersecting(a: &SetFamily, b: &SetFamily) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::GroundMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(a.iter().all(|x| b.iter().all(|y| x.intersects(y))))
}
