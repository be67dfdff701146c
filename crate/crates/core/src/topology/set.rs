//! Points and finite point sets.
//!
//! An [`OpenSet`] is a bit set over a fixed universe `[0, n)`. The name
//! reflects how the rest of the crate uses these values: sets handed out by a
//! [`Topology`](super::Topology) are members of its open-set lattice. The type
//! itself is just a canonical finite set and is also used for arbitrary
//! subsets (subspace carriers, cover candidates).

use std::cmp::Ordering;
use std::fmt;

/// Index of a point in a space with points `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const BLOCK_BITS: usize = 64;

/// A set of point indices over a fixed universe size.
///
/// Equality is set equality (universes must match). The `Ord` impl is the
/// canonical total order used everywhere scheduling must be deterministic:
/// cardinality ascending, ties broken lexicographically on the sorted member
/// list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpenSet {
    universe: usize,
    blocks: Vec<u64>,
}

fn block_count(universe: usize) -> usize {
    universe.div_ceil(BLOCK_BITS)
}

impl OpenSet {
    /// The empty set over `universe` points.
    pub fn empty(universe: usize) -> Self {
        OpenSet {
            universe,
            blocks: vec![0; block_count(universe)],
        }
    }

    /// The whole point set `{0, …, universe-1}`.
    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(PointId(i));
        }
        set
    }

    /// Builds a set from point indices. Panics if an index is out of range.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(PointId(i));
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn contains(&self, p: PointId) -> bool {
        p.0 < self.universe && self.blocks[p.0 / BLOCK_BITS] >> (p.0 % BLOCK_BITS) & 1 == 1
    }

    pub fn insert(&mut self, p: PointId) {
        assert!(p.0 < self.universe, "point {} outside universe {}", p, self.universe);
        self.blocks[p.0 / BLOCK_BITS] |= 1 << (p.0 % BLOCK_BITS);
    }

    fn zip_blocks(&self, other: &OpenSet, op: impl Fn(u64, u64) -> u64) -> OpenSet {
        assert_eq!(self.universe, other.universe, "sets from different spaces");
        OpenSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        self.zip_blocks(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &OpenSet) -> OpenSet {
        self.zip_blocks(other, |a, b| a & b)
    }

    /// Members of `self` not in `other`.
    pub fn difference(&self, other: &OpenSet) -> OpenSet {
        self.zip_blocks(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &OpenSet) -> bool {
        assert_eq!(self.universe, other.universe, "sets from different spaces");
        self.blocks.iter().zip(&other.blocks).all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_strict_subset(&self, other: &OpenSet) -> bool {
        self.is_subset(other) && self != other
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = PointId> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            (0..BLOCK_BITS)
                .filter(move |bit| block >> bit & 1 == 1)
                .map(move |bit| PointId(bi * BLOCK_BITS + bit))
        })
    }

    /// Position of `p` among the members in ascending order.
    /// Only meaningful when `self.contains(p)`.
    pub fn rank(&self, p: PointId) -> usize {
        debug_assert!(self.contains(p));
        let full_blocks: usize = self.blocks[..p.0 / BLOCK_BITS]
            .iter()
            .map(|b| b.count_ones() as usize)
            .sum();
        let below = (1u64 << (p.0 % BLOCK_BITS)) - 1;
        full_blocks + (self.blocks[p.0 / BLOCK_BITS] & below).count_ones() as usize
    }
}

impl Ord for OpenSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for OpenSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<PointId> for OpenSet {
    /// Collects into a set whose universe is just large enough; mostly a test
    /// convenience. Prefer [`OpenSet::from_indices`] with an explicit universe.
    fn from_iter<I: IntoIterator<Item = PointId>>(iter: I) -> Self {
        let ids: Vec<usize> = iter.into_iter().map(|p| p.0).collect();
        let universe = ids.iter().max().map_or(0, |m| m + 1);
        OpenSet::from_indices(universe, ids)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(universe: usize, ids: &[usize]) -> OpenSet {
        OpenSet::from_indices(universe, ids.iter().copied())
    }

    #[test]
    fn empty_and_full() {
        assert!(OpenSet::empty(5).is_empty());
        assert_eq!(OpenSet::full(5).len(), 5);
        assert_eq!(OpenSet::full(0), OpenSet::empty(0));
    }

    #[test]
    fn canonical_order_is_cardinality_then_lex() {
        let mut sets = [
            set(3, &[1, 2]),
            set(3, &[0]),
            set(3, &[]),
            set(3, &[0, 1]),
            set(3, &[1]),
            set(3, &[0, 2]),
        ];
        sets.sort();
        let rendered: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(rendered, ["{}", "{0}", "{1}", "{0,1}", "{0,2}", "{1,2}"]);
    }

    #[test]
    fn rank_counts_smaller_members() {
        let s = set(70, &[0, 3, 65, 68]);
        assert_eq!(s.rank(PointId(0)), 0);
        assert_eq!(s.rank(PointId(3)), 1);
        assert_eq!(s.rank(PointId(65)), 2);
        assert_eq!(s.rank(PointId(68)), 3);
    }

    #[test]
    fn display_uses_braces() {
        assert_eq!(set(4, &[0, 2]).to_string(), "{0,2}");
        assert_eq!(set(4, &[]).to_string(), "{}");
    }

    proptest! {
        #[test]
        fn union_intersection_laws(a in proptest::collection::btree_set(0usize..16, 0..10),
                                   b in proptest::collection::btree_set(0usize..16, 0..10),
                                   c in proptest::collection::btree_set(0usize..16, 0..10)) {
            let a = set(16, &a.into_iter().collect::<Vec<_>>());
            let b = set(16, &b.into_iter().collect::<Vec<_>>());
            let c = set(16, &c.into_iter().collect::<Vec<_>>());
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert_eq!(a.intersection(&b), b.intersection(&a));
            prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
            prop_assert_eq!(a.intersection(&b).intersection(&c), a.intersection(&b.intersection(&c)));
            prop_assert_eq!(a.union(&a.intersection(&b)), a.clone());
            prop_assert_eq!(a.intersection(&a.union(&b)), a.clone());
            prop_assert!(a.intersection(&b).is_subset(&a));
            prop_assert!(a.is_subset(&a.union(&b)));
        }

        #[test]
        fn iter_is_sorted_and_consistent(ids in proptest::collection::btree_set(0usize..100, 0..30)) {
            let s = set(100, &ids.iter().copied().collect::<Vec<_>>());
            let collected: Vec<usize> = s.iter().map(|p| p.0).collect();
            prop_assert_eq!(collected, ids.into_iter().collect::<Vec<_>>());
        }
    }
}
