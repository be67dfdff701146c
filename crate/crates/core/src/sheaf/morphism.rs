//! Sheaf morphisms and the commuting-square check.

use std::fmt;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::ring::Ring;
use crate::sheaf::Section;
use crate::topology::{OpenSet, Topology};

/// A family of per-open maps `φ(U): F(U) → G(U)` between sheaves of `R`- and
/// `S`-valued functions. Whether the family commutes with restriction is what
/// [`check_morphism`] verifies.
pub struct SheafMorphism<'a, R: Ring, S: Ring> {
    source: R,
    target: S,
    #[allow(clippy::type_complexity)]
    map: Box<dyn Fn(&OpenSet, &Section<R>) -> Section<S> + 'a>,
}

impl<'a, R: Ring, S: Ring> SheafMorphism<'a, R, S> {
    pub fn new(
        source: R,
        target: S,
        map: impl Fn(&OpenSet, &Section<R>) -> Section<S> + 'a,
    ) -> Self {
        SheafMorphism {
            source,
            target,
            map: Box::new(map),
        }
    }

    /// The morphism induced by a map on values, applied pointwise on every
    /// open. Such a family always commutes with restriction.
    pub fn pointwise(source: R, target: S, f: impl Fn(&R::Elem) -> S::Elem + 'a) -> Self {
        Self::new(source, target, move |_, s: &Section<R>| {
            Section::from_fn(s.domain().clone(), |p| f(s.value_at(p).expect("total")))
        })
    }

    pub fn apply(&self, open: &OpenSet, section: &Section<R>) -> Section<S> {
        (self.map)(open, section)
    }

    pub fn source(&self) -> &R {
        &self.source
    }

    pub fn target(&self) -> &S {
        &self.target
    }
}

/// A broken commuting square: restricting after mapping differs from mapping
/// after restricting, for `input` over `sup` restricted down to `sub`.
#[derive(Debug, Clone)]
pub struct MorphismViolation<R: Ring, S: Ring> {
    pub sup: OpenSet,
    pub sub: OpenSet,
    pub input: Section<R>,
    pub restrict_then_map: Section<S>,
    pub map_then_restrict: Section<S>,
}

impl<R: Ring, S: Ring> fmt::Display for MorphismViolation<R, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "square fails for {} ⊆ {}: restrict∘map ≠ map∘restrict",
            self.sub, self.sup
        )
    }
}

/// How [`check_morphism`] picks input sections.
#[derive(Debug, Clone)]
pub struct MorphismCheckConfig {
    /// Enumerate sections exhaustively while `|carrier|^|U|` stays at or
    /// below this bound (requires a finite carrier).
    pub exhaustive_limit: u64,
    /// Number of random sections per inclusion otherwise.
    pub samples: usize,
    pub seed: u64,
}

impl Default for MorphismCheckConfig {
    fn default() -> Self {
        MorphismCheckConfig {
            exhaustive_limit: 4096,
            samples: 256,
            seed: 0x5eaf,
        }
    }
}

fn enumerate_sections<R: Ring>(
    ring: &R,
    domain: &OpenSet,
    limit: u64,
) -> Option<Vec<Section<R>>> {
    let elems = ring.elements()?;
    let count = (elems.len() as u64).checked_pow(domain.len() as u32)?;
    if count > limit {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; domain.len()];
    loop {
        let points: Vec<_> = domain.iter().collect();
        out.push(Section::from_fn(domain.clone(), |p| {
            let k = points.iter().position(|q| *q == p).expect("member");
            elems[digits[k]].clone()
        }));
        // Mixed-radix increment.
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Some(out);
            }
            digits[k] += 1;
            if digits[k] < elems.len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Checks the commuting square `restrict ∘ φ(V) = φ(U) ∘ restrict` for every
/// inclusion `U ⊆ V` of opens, over enumerated or sampled sections on `V`.
pub fn check_morphism<R: Ring, S: Ring>(
    topology: &Topology,
    morphism: &SheafMorphism<'_, R, S>,
    config: &MorphismCheckConfig,
) -> Vec<MorphismViolation<R, S>> {
    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut violations = Vec::new();
    for sup in topology.opens() {
        let inputs = enumerate_sections(morphism.source(), sup, config.exhaustive_limit)
            .unwrap_or_else(|| {
                (0..config.samples)
                    .map(|_| {
                        Section::from_fn(sup.clone(), |_| morphism.source().sample(&mut rng))
                    })
                    .collect()
            });
        for sub in topology.opens() {
            if !sub.is_subset(sup) {
                continue;
            }
            for input in &inputs {
                let map_then_restrict = morphism
                    .apply(sup, input)
                    .restrict(sub)
                    .expect("sub ⊆ sup");
                let restrict_then_map =
                    morphism.apply(sub, &input.restrict(sub).expect("sub ⊆ sup"));
                if !map_then_restrict.ring_eq(morphism.target(), &restrict_then_map) {
                    violations.push(MorphismViolation {
                        sup: sup.clone(),
                        sub: sub.clone(),
                        input: input.clone(),
                        restrict_then_map,
                        map_then_restrict,
                    });
                }
            }
        }
    }
    violations
}
