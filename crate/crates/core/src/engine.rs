//! The computation engine: inductive extension of sections.
//!
//! Starting from the empty section, each step picks the first minimal open
//! superset of the region covered so far, asks an [`ExtensionRule`] for the
//! values of the newly exposed points, and merges them in. The covered region
//! grows strictly, so on a finite lattice the loop reaches the full space and
//! the accumulated section is the result. Every step is recorded in a
//! [`ComputationTrace`] that can be replayed.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::ring::Ring;
use crate::sheaf::Section;
use crate::topology::{OpenSet, PointId, Topology, TopologyError};

/// Failure raised by a rule itself while extending a section.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("point {point} depends on point {needed}, which has no value yet")]
    MissingDependency { point: PointId, needed: PointId },
    #[error("conflicting values at point {point}: {left} vs {right}")]
    GluingConflict {
        point: PointId,
        left: String,
        right: String,
    },
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("step {step}: rule assigned the wrong points (missing {missing:?}, extra {extra:?})")]
    RuleDomain {
        step: usize,
        missing: Vec<PointId>,
        extra: Vec<PointId>,
    },
    #[error("step {step}: {source}")]
    Rule { step: usize, source: RuleError },
    #[error("step {step}: rule output changed between identical invocations; the rule is not pure")]
    NonDeterministicReplay { step: usize },
    #[error("trace corrupt at step {step}: {reason}")]
    TraceCorrupt { step: usize, reason: String },
    #[error("invalid scheduling policy: {0}")]
    InvalidPolicy(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Produces values for the points a single extension step exposes.
///
/// `current` is the section over the covered region `U'`; `target` is the
/// chosen minimal open superset `U`. The rule must return a value for every
/// point of `U \ U'` and nothing else, and must be a pure function of its
/// inputs; the engine invokes it twice per step and rejects rules whose
/// output differs.
pub trait ExtensionRule<R: Ring> {
    fn extend(
        &self,
        ring: &R,
        current: &Section<R>,
        target: &OpenSet,
    ) -> Result<Vec<(PointId, R::Elem)>, RuleError>;
}

/// Assigns the same value to every new point. Useful as the trivial rule and
/// for reachability arguments.
#[derive(Debug, Clone)]
pub struct ConstantRule<E>(pub E);

impl<R: Ring> ExtensionRule<R> for ConstantRule<R::Elem> {
    fn extend(
        &self,
        _ring: &R,
        current: &Section<R>,
        target: &OpenSet,
    ) -> Result<Vec<(PointId, R::Elem)>, RuleError> {
        Ok(target
            .difference(current.domain())
            .iter()
            .map(|p| (p, self.0.clone()))
            .collect())
    }
}

/// How the engine breaks ties between several minimal open supersets.
#[derive(Debug, Clone)]
pub enum SchedulingPolicy {
    /// The lattice's canonical order: cardinality ascending, then
    /// lexicographic.
    Canonical,
    /// A caller-supplied total order over all opens of the topology.
    Explicit(Vec<OpenSet>),
}

/// One extension step: the region before, the open chosen, and the values
/// assigned to the new points (ascending point order).
#[derive(Debug, Clone)]
pub struct TraceStep<R: Ring> {
    pub previous: OpenSet,
    pub chosen: OpenSet,
    pub assigned: Vec<(PointId, R::Elem)>,
}

impl<R: Ring> PartialEq for TraceStep<R> {
    fn eq(&self, other: &Self) -> bool {
        self.previous == other.previous
            && self.chosen == other.chosen
            && self.assigned == other.assigned
    }
}

/// The full record of a run: every step plus the resulting global section.
#[derive(Debug, Clone)]
pub struct ComputationTrace<R: Ring> {
    pub steps: Vec<TraceStep<R>>,
    pub result: Section<R>,
}

impl<R: Ring> PartialEq for ComputationTrace<R> {
    fn eq(&self, other: &Self) -> bool {
        self.steps == other.steps && self.result == other.result
    }
}

impl<R: Ring> ComputationTrace<R> {
    /// Line-oriented rendering, one step per line:
    /// `step <k>: U'=<set> -> U=<set>; assign <id>=<value>[, ...]`
    /// followed by `result: <id>=<value>, ...`.
    pub fn render(&self, ring: &R) -> String {
        let mut out = String::new();
        for (k, step) in self.steps.iter().enumerate() {
            let assigned = step
                .assigned
                .iter()
                .map(|(p, v)| format!("{}={}", p, ring.render(v)))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!(
                "step {}: U'={} -> U={}; assign {}\n",
                k + 1,
                step.previous,
                step.chosen,
                assigned
            ));
        }
        out.push_str(&self.render_result(ring));
        out.push('\n');
        out
    }

    /// Just the final line of [`render`](Self::render).
    pub fn render_result(&self, ring: &R) -> String {
        let rendered = self.result.render(ring);
        if rendered.is_empty() {
            "result:".to_string()
        } else {
            format!("result: {rendered}")
        }
    }
}

fn checked_assignments<R: Ring>(
    ring: &R,
    rule: &(impl ExtensionRule<R> + ?Sized),
    current: &Section<R>,
    target: &OpenSet,
    step: usize,
) -> Result<Vec<(PointId, R::Elem)>, EngineError> {
    let raise = |source| EngineError::Rule { step, source };
    let mut assigned = rule.extend(ring, current, target).map_err(raise)?;
    assigned.sort_by_key(|(p, _)| *p);

    let expected = target.difference(current.domain());
    let got = OpenSet::from_indices(
        target.universe(),
        assigned.iter().filter(|(p, _)| p.0 < target.universe()).map(|(p, _)| p.0),
    );
    let missing: Vec<PointId> = expected.difference(&got).iter().collect();
    let mut extra: Vec<PointId> = got.difference(&expected).iter().collect();
    extra.extend(
        assigned
            .iter()
            .filter(|(p, _)| p.0 >= target.universe())
            .map(|(p, _)| *p),
    );
    let duplicates = assigned.windows(2).any(|w| w[0].0 == w[1].0);
    if !missing.is_empty() || !extra.is_empty() || duplicates {
        return Err(EngineError::RuleDomain { step, missing, extra });
    }

    // Purity check: an identical second invocation must reproduce the output.
    let mut again = rule.extend(ring, current, target).map_err(raise)?;
    again.sort_by_key(|(p, _)| *p);
    if again != assigned {
        return Err(EngineError::NonDeterministicReplay { step });
    }
    Ok(assigned)
}

fn extend_section<R: Ring>(
    current: &Section<R>,
    target: &OpenSet,
    assigned: &[(PointId, R::Elem)],
) -> Section<R> {
    let lookup: HashMap<PointId, &R::Elem> =
        assigned.iter().map(|(p, v)| (*p, v)).collect();
    Section::from_fn(target.clone(), |p| {
        current
            .value_at(p)
            .or_else(|| lookup.get(&p).copied())
            .expect("target = current ∪ assigned")
            .clone()
    })
}

fn pick_target(
    policy: &SchedulingPolicy,
    candidates: Vec<OpenSet>,
) -> Result<OpenSet, EngineError> {
    match policy {
        SchedulingPolicy::Canonical => Ok(candidates
            .into_iter()
            .next()
            .expect("non-full open has a minimal superset")),
        SchedulingPolicy::Explicit(order) => {
            let mut best: Option<(usize, OpenSet)> = None;
            for u in candidates {
                let rank = order.iter().position(|v| *v == u).ok_or_else(|| {
                    EngineError::InvalidPolicy(format!(
                        "open {u} is missing from the explicit order"
                    ))
                })?;
                if best.as_ref().is_none_or(|(r, _)| rank < *r) {
                    best = Some((rank, u));
                }
            }
            Ok(best.expect("non-full open has a minimal superset").1)
        }
    }
}

/// Runs a computation to the global section on `topology`.
///
/// The base step is the empty section over ∅; each inductive step extends to
/// the first minimal open superset under `policy`. Gluing the accumulated
/// section is an assert-and-merge, since all values come from one growing
/// assignment. Terminates after at most `|opens|` steps because the covered
/// region grows strictly inside a finite lattice.
pub fn run<R: Ring>(
    topology: &Topology,
    ring: &R,
    rule: &(impl ExtensionRule<R> + ?Sized),
    policy: &SchedulingPolicy,
) -> Result<ComputationTrace<R>, EngineError> {
    if let SchedulingPolicy::Explicit(order) = policy {
        for u in topology.opens() {
            if !order.contains(u) {
                return Err(EngineError::InvalidPolicy(format!(
                    "open {u} is missing from the explicit order"
                )));
            }
        }
    }

    let full = topology.full_set();
    let mut covered = topology.empty_set();
    let mut current = Section::<R>::empty(topology.point_count());
    let mut steps = Vec::new();

    while covered != full {
        let step = steps.len() + 1;
        let candidates = topology.minimal_open_supersets(&covered)?;
        let target = pick_target(policy, candidates)?;
        let assigned = checked_assignments(ring, rule, &current, &target, step)?;
        current = extend_section(&current, &target, &assigned);
        steps.push(TraceStep {
            previous: covered,
            chosen: target.clone(),
            assigned,
        });
        covered = target;
    }

    Ok(ComputationTrace { steps, result: current })
}

/// Reapplies the recorded assignments of `trace` and checks they rebuild the
/// recorded result. Rules are not invoked.
pub fn replay<R: Ring>(
    trace: &ComputationTrace<R>,
    topology: &Topology,
) -> Result<Section<R>, EngineError> {
    let corrupt = |step: usize, reason: String| EngineError::TraceCorrupt { step, reason };

    let mut covered = topology.empty_set();
    let mut current = Section::<R>::empty(topology.point_count());
    for (k, step) in trace.steps.iter().enumerate() {
        let idx = k + 1;
        if step.previous != covered {
            return Err(corrupt(
                idx,
                format!("step starts from {} but {} is covered", step.previous, covered),
            ));
        }
        if !topology.contains(&step.chosen) {
            return Err(corrupt(idx, format!("{} is not an open", step.chosen)));
        }
        if !covered.is_strict_subset(&step.chosen) {
            return Err(corrupt(
                idx,
                format!("{} does not strictly extend {}", step.chosen, covered),
            ));
        }
        let expected = step.chosen.difference(&covered);
        let mut seen = OpenSet::empty(topology.point_count());
        for (p, _) in &step.assigned {
            if !expected.contains(*p) || seen.contains(*p) {
                return Err(corrupt(idx, format!("assignment collides at point {p}")));
            }
            seen.insert(*p);
        }
        if seen != expected {
            let missing: Vec<PointId> = expected.difference(&seen).iter().collect();
            return Err(corrupt(idx, format!("points {missing:?} left unassigned")));
        }
        current = extend_section(&current, &step.chosen, &step.assigned);
        covered = step.chosen.clone();
    }
    if current != trace.result {
        return Err(corrupt(
            trace.steps.len(),
            "replayed section differs from the recorded result".to_string(),
        ));
    }
    Ok(current)
}

/// Witness that extending along two minimal supersets in either order gave
/// different values somewhere on their union.
#[derive(Debug, Clone)]
pub struct WellDefinednessViolation<R: Ring> {
    pub base: OpenSet,
    pub first: OpenSet,
    pub second: OpenSet,
    pub point: PointId,
    pub via_first: R::Elem,
    pub via_second: R::Elem,
}

/// Checks order-independence of `rule` on every reachable covered region.
///
/// For every region `U'` reachable from ∅ by single extension steps and every
/// pair `U, V` of distinct minimal open supersets of `U'`, the rule is run
/// along `U` then `U∪V` and along `V` then `U∪V`; the two sections on `U∪V`
/// must agree. Since distinct minimal supersets intersect exactly in `U'`,
/// disagreement can only come from output that depends on arrival order.
pub fn verify_well_definedness<R: Ring>(
    topology: &Topology,
    ring: &R,
    rule: &(impl ExtensionRule<R> + ?Sized),
) -> Result<Vec<WellDefinednessViolation<R>>, EngineError> {
    let apply = |current: &Section<R>, target: &OpenSet| -> Result<Section<R>, EngineError> {
        let assigned = rule
            .extend(ring, current, target)
            .map_err(|source| EngineError::Rule { step: 0, source })?;
        Ok(extend_section(current, target, &assigned))
    };

    let full = topology.full_set();
    let empty = topology.empty_set();
    let mut sections: HashMap<OpenSet, Section<R>> = HashMap::new();
    sections.insert(empty.clone(), Section::empty(topology.point_count()));
    let mut queue: VecDeque<OpenSet> = VecDeque::from([empty]);
    let mut violations = Vec::new();

    while let Some(region) = queue.pop_front() {
        if region == full {
            continue;
        }
        let base_section = sections[&region].clone();
        let minimal = topology.minimal_open_supersets(&region)?;
        let mut extended = Vec::with_capacity(minimal.len());
        for target in &minimal {
            let section = apply(&base_section, target)?;
            if !sections.contains_key(target) {
                sections.insert(target.clone(), section.clone());
                queue.push_back(target.clone());
            }
            extended.push(section);
        }
        for i in 0..minimal.len() {
            for j in i + 1..minimal.len() {
                let union = minimal[i].union(&minimal[j]);
                let via_first = apply(&extended[i], &union)?;
                let via_second = apply(&extended[j], &union)?;
                for p in union.iter() {
                    let a = via_first.value_at(p).expect("total on union");
                    let b = via_second.value_at(p).expect("total on union");
                    if !ring.eq_elem(a, b) {
                        violations.push(WellDefinednessViolation {
                            base: region.clone(),
                            first: minimal[i].clone(),
                            second: minimal[j].clone(),
                            point: p,
                            via_first: a.clone(),
                            via_second: b.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(violations)
}
