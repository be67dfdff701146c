//! The chain topology on `{0, …, n}` and its counting rule.

use crate::engine::{ExtensionRule, RuleError};
use crate::ring::Ring;
use crate::sheaf::Section;
use crate::topology::{Base, OpenSet, PointId, Topology};

/// The topology on `n + 1` points whose opens are ∅ and the initial segments
/// `U_i = {0, …, i}`. Every `U_i` covers exactly `U_{i-1}`, so each region has
/// a unique minimal extension.
pub fn chain_space(n: usize) -> Topology {
    let point_count = n + 1;
    let elements = (0..=n)
        .map(|i| OpenSet::from_indices(point_count, 0..=i))
        .collect();
    Topology::generate(&Base::new(point_count, elements))
        .expect("initial segments form a valid base")
}

/// σ(0) = 0 and σ(i) = σ(i-1) + 1, the counting recurrence on the chain.
///
/// New points are processed in ascending order, so multi-point extensions
/// work as long as predecessors are available.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChainRule;

impl<R: Ring> ExtensionRule<R> for ChainRule {
    fn extend(
        &self,
        ring: &R,
        current: &Section<R>,
        target: &OpenSet,
    ) -> Result<Vec<(PointId, R::Elem)>, RuleError> {
        let one = ring.one();
        let mut out: Vec<(PointId, R::Elem)> = Vec::new();
        for p in target.difference(current.domain()).iter() {
            let value = if p.0 == 0 {
                ring.zero()
            } else {
                let needed = PointId(p.0 - 1);
                let prev = current
                    .value_at(needed)
                    .or_else(|| {
                        out.iter().find(|(q, _)| *q == needed).map(|(_, v)| v)
                    })
                    .ok_or(RuleError::MissingDependency { point: p, needed })?;
                ring.add(prev, &one)
            };
            out.push((p, value));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulingPolicy};
    use crate::ring::Integers;

    #[test]
    fn one_point_chain() {
        let t = chain_space(0);
        assert_eq!(
            t.opens(),
            &[OpenSet::empty(1), OpenSet::from_indices(1, [0])]
        );
    }

    #[test]
    fn chain_has_covering_initial_segments() {
        let n = 3;
        let t = chain_space(n);
        assert_eq!(t.opens().len(), n + 2);
        let u = |i: usize| OpenSet::from_indices(n + 1, 0..=i);
        for i in 1..=n {
            assert_eq!(t.minimal_open_supersets(&u(i - 1)).unwrap(), vec![u(i)]);
        }
        assert_eq!(t.minimal_open_supersets(&t.empty_set()).unwrap(), vec![u(0)]);
    }

    #[test]
    fn unique_minimal_extension_everywhere() {
        let t = chain_space(5);
        for u in t.opens() {
            if *u == t.full_set() {
                continue;
            }
            assert_eq!(t.minimal_open_supersets(u).unwrap().len(), 1);
        }
    }

    #[test]
    fn counting_rule_matches_its_closed_form() {
        let n = 20;
        let trace = run(
            &chain_space(n),
            &Integers,
            &ChainRule,
            &SchedulingPolicy::Canonical,
        )
        .unwrap();
        assert_eq!(trace.steps.len(), n + 1);
        for i in 0..=n {
            assert_eq!(trace.result.value_at(PointId(i)), Some(&(i as i64)));
        }
    }
}
