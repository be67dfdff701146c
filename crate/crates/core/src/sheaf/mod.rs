//! Sections of the sheaf of ring-valued functions on a finite space.
//!
//! A [`Section`] is a total assignment of carrier elements to the points of
//! one open set. Functions restrict and glue literally, so the sheaf axioms
//! hold by construction; the operations here make them checkable so the crate
//! doubles as an axiom-verification workbench.

mod morphism;

pub use morphism::{check_morphism, MorphismCheckConfig, MorphismViolation, SheafMorphism};

use std::fmt::Write as _;

use thiserror::Error;

use crate::ring::Ring;
use crate::topology::{OpenSet, PointId, Topology};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SheafError {
    #[error("target {target} is not a subset of the section domain {domain}")]
    NotASubset { target: OpenSet, domain: OpenSet },
    #[error("cover union {union} does not equal the domain {domain}")]
    CoverMismatch { union: OpenSet, domain: OpenSet },
    #[error("incompatible sections at point {point}: {left} vs {right}")]
    IncompatibleSections {
        point: PointId,
        left: String,
        right: String,
    },
    #[error("point {0} is not in the section domain")]
    PointNotInDomain(PointId),
    #[error("section domains differ: {left} vs {right}")]
    DomainMismatch { left: OpenSet, right: OpenSet },
    #[error("cannot glue an empty family of sections")]
    EmptyGlue,
    #[error("assignment does not match the domain (missing {missing:?}, extra {extra:?})")]
    AssignmentMismatch {
        missing: Vec<PointId>,
        extra: Vec<PointId>,
    },
}

/// A ring-valued function on one open set.
///
/// Values are stored densely, parallel to the domain's members in ascending
/// order. The section over ∅ is the unique empty assignment.
#[derive(Debug, Clone)]
pub struct Section<R: Ring> {
    domain: OpenSet,
    values: Vec<R::Elem>,
}

impl<R: Ring> PartialEq for Section<R> {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.values == other.values
    }
}

impl<R: Ring> Section<R> {
    /// The sole section over ∅ (the zero ring has one element).
    pub fn empty(universe: usize) -> Self {
        Section {
            domain: OpenSet::empty(universe),
            values: Vec::new(),
        }
    }

    /// Builds a section by evaluating `f` at every point of `domain`.
    pub fn from_fn(domain: OpenSet, mut f: impl FnMut(PointId) -> R::Elem) -> Self {
        let values = domain.iter().map(&mut f).collect();
        Section { domain, values }
    }

    pub fn constant(domain: OpenSet, value: R::Elem) -> Self {
        Self::from_fn(domain, |_| value.clone())
    }

    /// Builds a section from point/value pairs, which must hit exactly the
    /// points of `domain`, each once. Duplicates are reported as extras.
    pub fn from_pairs(
        domain: OpenSet,
        pairs: &[(PointId, R::Elem)],
    ) -> Result<Self, SheafError> {
        let mut values: Vec<Option<R::Elem>> = vec![None; domain.len()];
        let mut extra = Vec::new();
        for (p, v) in pairs {
            if !domain.contains(*p) {
                extra.push(*p);
                continue;
            }
            let slot = &mut values[domain.rank(*p)];
            if slot.is_some() {
                extra.push(*p);
            } else {
                *slot = Some(v.clone());
            }
        }
        let missing: Vec<PointId> = domain
            .iter()
            .filter(|p| values[domain.rank(*p)].is_none())
            .collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(SheafError::AssignmentMismatch { missing, extra });
        }
        Ok(Section {
            domain,
            values: values.into_iter().map(|v| v.expect("checked total")).collect(),
        })
    }

    pub fn domain(&self) -> &OpenSet {
        &self.domain
    }

    pub fn universe(&self) -> usize {
        self.domain.universe()
    }

    pub fn value_at(&self, p: PointId) -> Option<&R::Elem> {
        if self.domain.contains(p) {
            Some(&self.values[self.domain.rank(p)])
        } else {
            None
        }
    }

    /// Point/value pairs in ascending point order.
    pub fn iter(&self) -> impl Iterator<Item = (PointId, &R::Elem)> {
        self.domain.iter().zip(self.values.iter())
    }

    /// The restriction map: the same values on the smaller open `v`.
    pub fn restrict(&self, v: &OpenSet) -> Result<Section<R>, SheafError> {
        if !v.is_subset(&self.domain) {
            return Err(SheafError::NotASubset {
                target: v.clone(),
                domain: self.domain.clone(),
            });
        }
        Ok(Section::from_fn(v.clone(), |p| {
            self.value_at(p).expect("v ⊆ domain").clone()
        }))
    }

    /// Carrier-level equality: same domain, values equal under the ring.
    pub fn ring_eq(&self, ring: &R, other: &Section<R>) -> bool {
        self.domain == other.domain
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| ring.eq_elem(a, b))
    }

    fn zip_with(
        &self,
        other: &Section<R>,
        mut op: impl FnMut(&R::Elem, &R::Elem) -> R::Elem,
    ) -> Result<Section<R>, SheafError> {
        if self.domain != other.domain {
            return Err(SheafError::DomainMismatch {
                left: self.domain.clone(),
                right: other.domain.clone(),
            });
        }
        Ok(Section {
            domain: self.domain.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(a, b))
                .collect(),
        })
    }

    /// Pointwise sum; both sections must share a domain.
    pub fn pointwise_add(&self, ring: &R, other: &Section<R>) -> Result<Section<R>, SheafError> {
        self.zip_with(other, |a, b| ring.add(a, b))
    }

    /// Pointwise product; both sections must share a domain.
    pub fn pointwise_mul(&self, ring: &R, other: &Section<R>) -> Result<Section<R>, SheafError> {
        self.zip_with(other, |a, b| ring.mul(a, b))
    }

    /// Pointwise negation.
    pub fn pointwise_neg(&self, ring: &R) -> Section<R> {
        Section {
            domain: self.domain.clone(),
            values: self.values.iter().map(|a| ring.neg(a)).collect(),
        }
    }

    /// The germ of this section at `x`: its restriction to the minimal open
    /// neighborhood of `x` in `topology`. On a finite intersection-closed
    /// lattice that restriction determines the equivalence class of pairs
    /// `(U, σ)` agreeing near `x`.
    pub fn germ_at(&self, topology: &Topology, x: PointId) -> Result<Germ<R>, SheafError> {
        if !self.domain.contains(x) {
            return Err(SheafError::PointNotInDomain(x));
        }
        let neighborhood = topology.minimal_neighborhood(x);
        let representative = self
            .restrict(&neighborhood)
            .expect("U_x ⊆ every open containing x");
        Ok(Germ {
            point: x,
            representative,
        })
    }

    /// Renders as `p=v, …` using the carrier's formatting.
    pub fn render(&self, ring: &R) -> String {
        let mut out = String::new();
        for (k, (p, v)) in self.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}={}", p, ring.render(v));
        }
        out
    }
}

/// The germ of a section at a point, represented by its restriction to the
/// minimal open neighborhood of the point.
#[derive(Debug, Clone)]
pub struct Germ<R: Ring> {
    point: PointId,
    representative: Section<R>,
}

impl<R: Ring> PartialEq for Germ<R> {
    fn eq(&self, other: &Self) -> bool {
        self.point == other.point && self.representative == other.representative
    }
}

impl<R: Ring> Germ<R> {
    pub fn point(&self) -> PointId {
        self.point
    }

    /// The minimal open neighborhood the germ lives on.
    pub fn neighborhood(&self) -> &OpenSet {
        self.representative.domain()
    }

    pub fn representative(&self) -> &Section<R> {
        &self.representative
    }
}

/// The uniqueness axiom as a check: do `a` and `b` agree once restricted to
/// every element of `cover`? The cover must exactly cover the common domain.
pub fn sections_equal_on_cover<R: Ring>(
    ring: &R,
    a: &Section<R>,
    b: &Section<R>,
    cover: &[OpenSet],
) -> Result<bool, SheafError> {
    if a.domain() != b.domain() {
        return Err(SheafError::DomainMismatch {
            left: a.domain().clone(),
            right: b.domain().clone(),
        });
    }
    let mut union = OpenSet::empty(a.universe());
    for u in cover {
        union = union.union(u);
    }
    if union != *a.domain() {
        return Err(SheafError::CoverMismatch {
            union,
            domain: a.domain().clone(),
        });
    }
    for u in cover {
        let ra = a.restrict(u).expect("cover element inside domain");
        let rb = b.restrict(u).expect("cover element inside domain");
        if !ra.ring_eq(ring, &rb) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The gluing axiom: assembles pairwise-compatible sections into the unique
/// section on the union of their domains.
///
/// Compatibility is checked pointwise on overlaps with the carrier's
/// equality; the first conflict is reported with both values.
pub fn glue<R: Ring>(ring: &R, parts: &[Section<R>]) -> Result<Section<R>, SheafError> {
    let first = parts.first().ok_or(SheafError::EmptyGlue)?;
    let mut union = OpenSet::empty(first.universe());
    for part in parts {
        union = union.union(part.domain());
    }
    let mut values: Vec<Option<&R::Elem>> = vec![None; union.len()];
    for part in parts {
        for (p, v) in part.iter() {
            let slot = &mut values[union.rank(p)];
            match slot {
                None => *slot = Some(v),
                Some(existing) => {
                    if !ring.eq_elem(existing, v) {
                        return Err(SheafError::IncompatibleSections {
                            point: p,
                            left: ring.render(existing),
                            right: ring.render(v),
                        });
                    }
                }
            }
        }
    }
    Ok(Section {
        domain: union,
        values: values
            .into_iter()
            .map(|v| v.expect("every union point came from some part").clone())
            .collect(),
    })
}
