//! Finite topological spaces built from bases.
//!
//! A [`Base`] is a family of point sets; when it satisfies the two base
//! properties (it covers the space, and every point of a pairwise
//! intersection sits inside some base element contained in that
//! intersection), the base generates a [`Topology`]: the collection of all
//! unions of base elements. The lattice is materialized eagerly and every
//! later query (minimal open supersets, subspaces, chain conditions) is a
//! plain scan over it.

mod set;

pub use set::{OpenSet, PointId};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Default cap on the number of opens materialized by [`Topology::generate`].
pub const DEFAULT_LATTICE_CAP: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("base is invalid: {}", render_violations(.0))]
    InvalidBase(Vec<BaseViolation>),
    #[error("open-set lattice exceeds the cap of {cap} opens")]
    LatticeTooLarge { cap: usize },
    #[error("set {0} is not an open of this topology")]
    NotOpen(OpenSet),
    #[error("the full space has no strict open superset")]
    NoExtension,
}

fn render_violations(vs: &[BaseViolation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// A failed base property, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseViolation {
    /// Property (1): the elements do not cover the space.
    UncoveredPoint { point: PointId },
    /// Property (2): `elements[first] ∩ elements[second]` contains `point`
    /// but no element fits between the point and the intersection.
    IntersectionNotCovered {
        first: usize,
        second: usize,
        point: PointId,
    },
}

impl fmt::Display for BaseViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseViolation::UncoveredPoint { point } => {
                write!(f, "point {point} is covered by no base element")
            }
            BaseViolation::IntersectionNotCovered { first, second, point } => write!(
                f,
                "point {point} lies in the intersection of elements {first} and {second} \
                 but in no base element contained in it"
            ),
        }
    }
}

/// A generating family for a topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Base {
    point_count: usize,
    elements: Vec<OpenSet>,
}

impl Base {
    /// Panics if an element's universe differs from `point_count`.
    pub fn new(point_count: usize, elements: Vec<OpenSet>) -> Self {
        for e in &elements {
            assert_eq!(e.universe(), point_count, "base element universe mismatch");
        }
        Base { point_count, elements }
    }

    /// Convenience constructor from raw index lists.
    pub fn from_index_lists(point_count: usize, lists: &[Vec<usize>]) -> Self {
        let elements = lists
            .iter()
            .map(|l| OpenSet::from_indices(point_count, l.iter().copied()))
            .collect();
        Base::new(point_count, elements)
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn elements(&self) -> &[OpenSet] {
        &self.elements
    }

    /// Checks the two base properties and returns every violation found.
    ///
    /// Property (2) is checked pointwise: for each point `x` of an
    /// intersection `U1 ∩ U2` there must be an element `U3` with
    /// `x ∈ U3 ⊆ U1 ∩ U2`. Intersections are not required to be elements
    /// themselves.
    pub fn validate(&self) -> Vec<BaseViolation> {
        let mut violations = Vec::new();

        let mut covered = OpenSet::empty(self.point_count);
        for e in &self.elements {
            covered = covered.union(e);
        }
        for i in 0..self.point_count {
            let p = PointId(i);
            if !covered.contains(p) {
                violations.push(BaseViolation::UncoveredPoint { point: p });
            }
        }

        for i in 0..self.elements.len() {
            for j in i + 1..self.elements.len() {
                let inter = self.elements[i].intersection(&self.elements[j]);
                for x in inter.iter() {
                    let witnessed = self
                        .elements
                        .iter()
                        .any(|e| e.contains(x) && e.is_subset(&inter));
                    if !witnessed {
                        violations.push(BaseViolation::IntersectionNotCovered {
                            first: i,
                            second: j,
                            point: x,
                        });
                    }
                }
            }
        }

        violations
    }
}

/// Witness that two minimal open supersets of `base` overlap beyond it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalExtensionViolation {
    pub base: OpenSet,
    pub first: OpenSet,
    pub second: OpenSet,
    pub intersection: OpenSet,
}

impl fmt::Display for MinimalExtensionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "minimal supersets {} and {} of {} intersect in {}, not in {}",
            self.first, self.second, self.base, self.intersection, self.base
        )
    }
}

/// A finite topological space: the full open-set lattice over `0..point_count`.
///
/// Values are immutable after generation and safe to share across threads.
#[derive(Debug, Clone)]
pub struct Topology {
    point_count: usize,
    /// All opens in canonical order (cardinality, then lexicographic).
    opens: Vec<OpenSet>,
    index: HashMap<OpenSet, usize>,
}

impl PartialEq for Topology {
    fn eq(&self, other: &Self) -> bool {
        self.point_count == other.point_count && self.opens == other.opens
    }
}

impl Eq for Topology {}

impl Topology {
    /// Generates the lattice of all unions of base elements, with the
    /// default size cap.
    pub fn generate(base: &Base) -> Result<Topology, TopologyError> {
        Self::generate_with_cap(base, DEFAULT_LATTICE_CAP)
    }

    /// As [`Topology::generate`], aborting with `LatticeTooLarge` once more
    /// than `cap` opens have been materialized.
    pub fn generate_with_cap(base: &Base, cap: usize) -> Result<Topology, TopologyError> {
        let violations = base.validate();
        if !violations.is_empty() {
            return Err(TopologyError::InvalidBase(violations));
        }

        // Fixpoint closure under pairwise union, seeded with ∅ and the
        // elements. Every union of a subfamily is reachable this way.
        let mut seen: HashSet<OpenSet> = HashSet::new();
        let mut list: Vec<OpenSet> = Vec::new();
        let push = |s: OpenSet, list: &mut Vec<OpenSet>, seen: &mut HashSet<OpenSet>| {
            if seen.insert(s.clone()) {
                list.push(s);
            }
        };
        push(OpenSet::empty(base.point_count), &mut list, &mut seen);
        for e in &base.elements {
            push(e.clone(), &mut list, &mut seen);
        }

        let mut i = 0;
        while i < list.len() {
            for j in 0..i {
                let u = list[i].union(&list[j]);
                if !seen.contains(&u) {
                    if list.len() >= cap {
                        return Err(TopologyError::LatticeTooLarge { cap });
                    }
                    seen.insert(u.clone());
                    list.push(u);
                }
            }
            i += 1;
        }

        Ok(Self::from_open_collection(base.point_count, list))
    }

    /// Internal constructor from an explicit open collection; deduplicates
    /// and imposes the canonical order. The collection must already contain
    /// ∅ and the full set and be closed under union and intersection.
    fn from_open_collection(point_count: usize, mut opens: Vec<OpenSet>) -> Topology {
        opens.sort();
        opens.dedup();
        debug_assert!(opens.contains(&OpenSet::empty(point_count)));
        debug_assert!(opens.contains(&OpenSet::full(point_count)));
        let index = opens
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Topology { point_count, opens, index }
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.point_count).map(PointId)
    }

    /// All opens in canonical order.
    pub fn opens(&self) -> &[OpenSet] {
        &self.opens
    }

    pub fn empty_set(&self) -> OpenSet {
        OpenSet::empty(self.point_count)
    }

    pub fn full_set(&self) -> OpenSet {
        OpenSet::full(self.point_count)
    }

    /// Whether `u` is an element of the lattice.
    pub fn contains(&self, u: &OpenSet) -> bool {
        u.universe() == self.point_count && self.index.contains_key(u)
    }

    /// All opens `V ⊋ u` with nothing strictly between, in canonical order.
    ///
    /// The order makes single-step extension deterministic when callers take
    /// the first entry.
    pub fn minimal_open_supersets(&self, u: &OpenSet) -> Result<Vec<OpenSet>, TopologyError> {
        if !self.contains(u) {
            return Err(TopologyError::NotOpen(u.clone()));
        }
        if *u == self.full_set() {
            return Err(TopologyError::NoExtension);
        }
        let supersets: Vec<&OpenSet> = self
            .opens
            .iter()
            .filter(|v| u.is_strict_subset(v))
            .collect();
        let minimal = supersets
            .iter()
            .filter(|v| !supersets.iter().any(|w| w.is_strict_subset(v)))
            .map(|v| (*v).clone())
            .collect();
        Ok(minimal)
    }

    /// Checks that any two distinct minimal open supersets of an open `u`
    /// intersect exactly in `u`. On lattices closed under intersection this
    /// never fails; single-step extension is well-defined because of it.
    pub fn check_minimal_extension_property(&self) -> Vec<MinimalExtensionViolation> {
        let full = self.full_set();
        let mut violations = Vec::new();
        for u in &self.opens {
            if *u == full {
                continue;
            }
            let minimal = self
                .minimal_open_supersets(u)
                .expect("u is a non-full open");
            for i in 0..minimal.len() {
                for j in i + 1..minimal.len() {
                    let inter = minimal[i].intersection(&minimal[j]);
                    if inter != *u {
                        violations.push(MinimalExtensionViolation {
                            base: u.clone(),
                            first: minimal[i].clone(),
                            second: minimal[j].clone(),
                            intersection: inter,
                        });
                    }
                }
            }
        }
        violations
    }

    /// The subspace topology on `y`: opens are `{ y ∩ U }` with the points of
    /// `y` reindexed to `0..y.len()` in ascending order of original index.
    pub fn subspace(&self, y: &OpenSet) -> Topology {
        assert_eq!(y.universe(), self.point_count, "subspace carrier universe mismatch");
        let members: Vec<PointId> = y.iter().collect();
        let rank_of: HashMap<PointId, usize> =
            members.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let opens = self
            .opens
            .iter()
            .map(|u| {
                let inter = u.intersection(y);
                OpenSet::from_indices(members.len(), inter.iter().map(|p| rank_of[&p]))
            })
            .collect();
        Self::from_open_collection(members.len(), opens)
    }

    /// The smallest open containing `x`: the intersection of every open that
    /// does. Open because the lattice is closed under finite intersection.
    pub fn minimal_neighborhood(&self, x: PointId) -> OpenSet {
        assert!(x.0 < self.point_count, "point {x} outside the space");
        let mut acc = self.full_set();
        for u in &self.opens {
            if u.contains(x) {
                acc = acc.intersection(u);
            }
        }
        acc
    }

    /// Verifies the ascending chain condition on opens by exhibiting a
    /// topological order of the strict-inclusion digraph. Always true for a
    /// generated lattice (it is finite); the check documents the hypothesis
    /// instead of assuming it.
    pub fn is_noetherian(&self) -> bool {
        let n = self.opens.len();
        let mut successors: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for (i, u) in self.opens.iter().enumerate() {
            for (j, v) in self.opens.iter().enumerate() {
                if i != j && u.is_strict_subset(v) {
                    successors[i].push(j);
                    indegree[j] += 1;
                }
            }
        }
        let mut queue: VecDeque<usize> =
            (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut popped = 0;
        while let Some(i) = queue.pop_front() {
            popped += 1;
            for &j in &successors[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        popped == n
    }
}
