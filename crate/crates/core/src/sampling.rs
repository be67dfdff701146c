//! Random generators for randomized checks: valid bases, sections, covers.
//!
//! Used by the verification suites (library tests and the CLI `verify`
//! command). Generators take an explicit RNG so runs are reproducible.

use rand::rngs::StdRng;
use rand::Rng;

use crate::ring::Ring;
use crate::sheaf::Section;
use crate::topology::{Base, OpenSet, Topology};

/// A random base over up to `max_points` points that satisfies both base
/// properties.
///
/// Random subsets are patched to cover the space and then closed under
/// pairwise intersection, which makes property (2) hold with the
/// intersection itself as witness.
pub fn random_valid_base(rng: &mut StdRng, max_points: usize) -> Base {
    let point_count = rng.gen_range(0..=max_points);
    let mut elements: Vec<OpenSet> = Vec::new();
    let element_count = rng.gen_range(1..=4);
    for _ in 0..element_count {
        let mut set = OpenSet::empty(point_count);
        for i in 0..point_count {
            if rng.gen_bool(0.5) {
                set.insert(crate::topology::PointId(i));
            }
        }
        if !elements.contains(&set) {
            elements.push(set);
        }
    }

    let mut covered = OpenSet::empty(point_count);
    for e in &elements {
        covered = covered.union(e);
    }
    if covered != OpenSet::full(point_count) {
        let patch = OpenSet::full(point_count).difference(&covered);
        elements.push(patch);
    }

    // Close under pairwise intersection.
    let mut i = 0;
    while i < elements.len() {
        for j in 0..i {
            let inter = elements[i].intersection(&elements[j]);
            if !elements.contains(&inter) {
                elements.push(inter);
            }
        }
        i += 1;
    }

    let base = Base::new(point_count, elements);
    debug_assert!(base.validate().is_empty());
    base
}

/// A section over `domain` with values sampled from the carrier.
pub fn random_section<R: Ring>(rng: &mut StdRng, ring: &R, domain: &OpenSet) -> Section<R> {
    Section::from_fn(domain.clone(), |_| ring.sample(rng))
}

/// An open cover of `u` assembled from opens of `t` contained in `u`.
/// Falls back to including `u` itself when the random picks fall short.
pub fn random_cover(rng: &mut StdRng, t: &Topology, u: &OpenSet) -> Vec<OpenSet> {
    let inside: Vec<&OpenSet> = t.opens().iter().filter(|v| v.is_subset(u)).collect();
    let mut cover: Vec<OpenSet> = inside
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .map(|v| (*v).clone())
        .collect();
    let mut union = OpenSet::empty(u.universe());
    for v in &cover {
        union = union.union(v);
    }
    if cover.is_empty() || union != *u {
        cover.push(u.clone());
    }
    cover
}
