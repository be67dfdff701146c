//! The quadric surface `x1·x4 = x2·x3` over a small prime field.
//!
//! The space is the finite point set of the quadric in affine 4-space over
//! `F_p`. The generating family keeps only the two distinguished opens
//! `D(x2)`, `D(x4)`, their intersection, and the whole space, so the union
//! `D(x2) ∪ D(x4)` is an open of the lattice without being one of the
//! generators, which is the structural point of the example. On the overlap
//! the two slope formulas `x1/x2` and `x3/x4` agree because the points
//! satisfy the quadric equation.

use thiserror::Error;

use crate::engine::{ExtensionRule, RuleError};
use crate::ring::{PrimeField, Ring, RingError};
use crate::sheaf::Section;
use crate::topology::{Base, OpenSet, PointId, Topology};

/// Largest modulus accepted by [`quadric_space`]; keeps `p^4` enumeration
/// and the lattice at desk scale.
pub const MAX_QUADRIC_PRIME: u64 = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadricError {
    #[error(transparent)]
    InvalidModulus(#[from] RingError),
    #[error("prime {0} exceeds the supported maximum of {MAX_QUADRIC_PRIME}")]
    PrimeTooLarge(u64),
    #[error("function table must list one value below p for each of the p field elements")]
    InvalidFunctionTable,
}

/// A point of the quadric: coordinates in `F_p` with `x1·x4 = x2·x3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadricPoint {
    pub coords: [u64; 4],
}

impl QuadricPoint {
    pub fn x1(&self) -> u64 {
        self.coords[0]
    }
    pub fn x2(&self) -> u64 {
        self.coords[1]
    }
    pub fn x3(&self) -> u64 {
        self.coords[2]
    }
    pub fn x4(&self) -> u64 {
        self.coords[3]
    }
}

/// The quadric's point list, field, topology, and the two distinguished opens.
#[derive(Debug, Clone)]
pub struct QuadricSpace {
    pub topology: Topology,
    pub points: Vec<QuadricPoint>,
    pub field: PrimeField,
    /// Points where `x2 ≠ 0`.
    pub d2: OpenSet,
    /// Points where `x4 ≠ 0`.
    pub d4: OpenSet,
}

impl QuadricSpace {
    /// The open `D(x2) ∪ D(x4)`: in the lattice, but not a generator.
    pub fn slope_domain(&self) -> OpenSet {
        self.d2.union(&self.d4)
    }

    /// The two local slope sections: `f(x1/x2)` on `D(x2)` and `f(x3/x4)` on
    /// `D(x4)`.
    pub fn local_sections(&self, f: &MonadicFn) -> (Section<PrimeField>, Section<PrimeField>) {
        let field = self.field;
        let on_d2 = Section::from_fn(self.d2.clone(), |p| {
            let pt = &self.points[p.0];
            f.apply(&field, field.div(pt.x1(), pt.x2()))
        });
        let on_d4 = Section::from_fn(self.d4.clone(), |p| {
            let pt = &self.points[p.0];
            f.apply(&field, field.div(pt.x3(), pt.x4()))
        });
        (on_d2, on_d4)
    }
}

/// Enumerates the quadric over `F_p` and generates its topology from the base
/// `{X, D(x2), D(x4), D(x2) ∩ D(x4)}`. Points are indexed in lexicographic
/// coordinate order.
pub fn quadric_space(p: u64) -> Result<QuadricSpace, QuadricError> {
    let field = PrimeField::new(p)?;
    if p > MAX_QUADRIC_PRIME {
        return Err(QuadricError::PrimeTooLarge(p));
    }
    let mut points = Vec::new();
    for x1 in 0..p {
        for x2 in 0..p {
            for x3 in 0..p {
                for x4 in 0..p {
                    if field.mul(&x1, &x4) == field.mul(&x2, &x3) {
                        points.push(QuadricPoint {
                            coords: [x1, x2, x3, x4],
                        });
                    }
                }
            }
        }
    }
    let count = points.len();
    let member_ids = |pred: &dyn Fn(&QuadricPoint) -> bool| {
        OpenSet::from_indices(
            count,
            points
                .iter()
                .enumerate()
                .filter(|(_, pt)| pred(pt))
                .map(|(i, _)| i),
        )
    };
    let d2 = member_ids(&|pt| pt.x2() != 0);
    let d4 = member_ids(&|pt| pt.x4() != 0);
    let base = Base::new(
        count,
        vec![OpenSet::full(count), d2.clone(), d4.clone(), d2.intersection(&d4)],
    );
    let topology = Topology::generate(&base).expect("distinguished opens form a valid base");
    Ok(QuadricSpace {
        topology,
        points,
        field,
        d2,
        d4,
    })
}

/// A function `F_p → F_p` applied to the slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonadicFn {
    Identity,
    /// `x ↦ x^k` (with `0^0 = 1`).
    Power(u32),
    /// Explicit value table indexed by the argument.
    Table(Vec<u64>),
}

impl MonadicFn {
    pub fn apply(&self, field: &PrimeField, x: u64) -> u64 {
        match self {
            MonadicFn::Identity => field.reduce(x),
            MonadicFn::Power(k) => field.pow(x, u64::from(*k)),
            MonadicFn::Table(values) => values[field.reduce(x) as usize],
        }
    }
}

/// Assigns `f(x1/x2)` on `D(x2)`, `f(x3/x4)` on `D(x4)`, and a default value
/// on the rest of the quadric. Where both slope formulas apply they are
/// evaluated and compared; a mismatch means the point list is corrupt.
#[derive(Debug, Clone)]
pub struct QuadricRule {
    points: Vec<QuadricPoint>,
    field: PrimeField,
    f: MonadicFn,
    default_value: u64,
}

impl QuadricRule {
    pub fn new(
        space: &QuadricSpace,
        f: MonadicFn,
        default_value: u64,
    ) -> Result<Self, QuadricError> {
        if let MonadicFn::Table(values) = &f {
            let p = space.field.modulus();
            if values.len() as u64 != p || values.iter().any(|v| *v >= p) {
                return Err(QuadricError::InvalidFunctionTable);
            }
        }
        Ok(QuadricRule {
            points: space.points.clone(),
            field: space.field,
            f,
            default_value: space.field.reduce(default_value),
        })
    }

    fn value_for(&self, point: PointId) -> Result<u64, RuleError> {
        let pt = &self.points[point.0];
        let field = &self.field;
        let via_d2 = (pt.x2() != 0).then(|| self.f.apply(field, field.div(pt.x1(), pt.x2())));
        let via_d4 = (pt.x4() != 0).then(|| self.f.apply(field, field.div(pt.x3(), pt.x4())));
        match (via_d2, via_d4) {
            (Some(a), Some(b)) if a != b => Err(RuleError::GluingConflict {
                point,
                left: a.to_string(),
                right: b.to_string(),
            }),
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Ok(self.default_value),
        }
    }
}

impl ExtensionRule<PrimeField> for QuadricRule {
    fn extend(
        &self,
        _ring: &PrimeField,
        current: &Section<PrimeField>,
        target: &OpenSet,
    ) -> Result<Vec<(PointId, u64)>, RuleError> {
        if current.universe() != self.points.len() {
            return Err(RuleError::Unsupported(format!(
                "space has {} points but the quadric has {}",
                current.universe(),
                self.points.len()
            )));
        }
        target
            .difference(current.domain())
            .iter()
            .map(|p| Ok((p, self.value_for(p)?)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, SchedulingPolicy};
    use crate::sheaf::glue;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// Independent count: (a,d) pairs with a·d = v number 2p-1 for v = 0 and
    /// p-1 otherwise, so the quadric has (2p-1)² + (p-1)³ points.
    fn expected_point_count(p: u64) -> usize {
        ((2 * p - 1).pow(2) + (p - 1).pow(3)) as usize
    }

    #[test]
    fn point_counts_match_the_counting_formula() {
        assert_eq!(quadric_space(2).unwrap().points.len(), 10);
        for p in [2, 3, 5, 7, 11, 13] {
            assert_eq!(
                quadric_space(p).unwrap().points.len(),
                expected_point_count(p),
                "p = {p}"
            );
        }
    }

    #[test]
    fn non_primes_and_oversized_primes_are_rejected() {
        assert!(matches!(
            quadric_space(4),
            Err(QuadricError::InvalidModulus(RingError::NotPrime(4)))
        ));
        assert!(matches!(
            quadric_space(17),
            Err(QuadricError::PrimeTooLarge(17))
        ));
    }

    #[test]
    fn origin_lies_outside_both_distinguished_opens() {
        let space = quadric_space(3).unwrap();
        let origin = space
            .points
            .iter()
            .position(|pt| pt.coords == [0, 0, 0, 0])
            .expect("origin satisfies the equation");
        assert!(!space.d2.contains(PointId(origin)));
        assert!(!space.d4.contains(PointId(origin)));
    }

    #[test]
    fn lattice_has_the_six_expected_opens() {
        for p in [2, 3, 5] {
            let space = quadric_space(p).unwrap();
            let overlap = space.d2.intersection(&space.d4);
            assert!(overlap.is_subset(&space.d2));
            assert!(space.d2.is_subset(&space.topology.full_set()));
            let expected = {
                let mut v = vec![
                    space.topology.empty_set(),
                    overlap,
                    space.d2.clone(),
                    space.d4.clone(),
                    space.slope_domain(),
                    space.topology.full_set(),
                ];
                v.sort();
                v
            };
            assert_eq!(space.topology.opens(), expected.as_slice(), "p = {p}");
        }
    }

    #[test]
    fn slope_domain_is_open_but_not_a_generator() {
        let space = quadric_space(3).unwrap();
        let union = space.slope_domain();
        assert!(space.topology.contains(&union));
        assert_ne!(union, space.d2);
        assert_ne!(union, space.d4);
        assert_ne!(union, space.topology.full_set());
    }

    #[test]
    fn slopes_agree_on_the_overlap_for_every_supported_prime() {
        for p in [2, 3, 5, 7, 11, 13] {
            let space = quadric_space(p).unwrap();
            let field = space.field;
            for id in space.d2.intersection(&space.d4).iter() {
                let pt = &space.points[id.0];
                assert_eq!(
                    field.div(pt.x1(), pt.x2()),
                    field.div(pt.x3(), pt.x4()),
                    "p = {p}, point {:?}",
                    pt.coords
                );
            }
        }
    }

    #[test]
    fn both_formulas_agree_at_the_all_ones_point() {
        let space = quadric_space(5).unwrap();
        let rule = QuadricRule::new(&space, MonadicFn::Identity, 1).unwrap();
        let id = space
            .points
            .iter()
            .position(|pt| pt.coords == [1, 1, 1, 1])
            .unwrap();
        assert_eq!(rule.value_for(PointId(id)).unwrap(), 1);
    }

    #[test]
    fn worked_overlap_point_in_f5() {
        // (2,1,4,2): on the quadric since 2·2 = 4 = 1·4; x1/x2 = 2 and
        // x3/x4 = 4·2⁻¹ = 4·3 = 12 ≡ 2 (mod 5).
        let space = quadric_space(5).unwrap();
        let field = space.field;
        let id = space
            .points
            .iter()
            .position(|pt| pt.coords == [2, 1, 4, 2])
            .expect("point satisfies the equation");
        assert_eq!(field.div(2, 1), 2);
        assert_eq!(field.div(4, 2), 2);
        let rule = QuadricRule::new(&space, MonadicFn::Identity, 1).unwrap();
        assert_eq!(rule.value_for(PointId(id)).unwrap(), 2);
    }

    #[test]
    fn points_off_both_opens_get_the_default() {
        let space = quadric_space(3).unwrap();
        let rule = QuadricRule::new(&space, MonadicFn::Identity, 1).unwrap();
        let origin = space
            .points
            .iter()
            .position(|pt| pt.coords == [0, 0, 0, 0])
            .unwrap();
        assert_eq!(rule.value_for(PointId(origin)).unwrap(), 1);
    }

    #[test]
    fn corrupted_points_raise_a_gluing_conflict() {
        let space = quadric_space(3).unwrap();
        // (1,1,0,1) violates the equation: x1·x4 = 1 but x2·x3 = 0.
        let rule = QuadricRule {
            points: vec![QuadricPoint { coords: [1, 1, 0, 1] }],
            field: space.field,
            f: MonadicFn::Identity,
            default_value: 1,
        };
        let current = Section::empty(1);
        let target = OpenSet::full(1);
        assert!(matches!(
            rule.extend(&space.field, &current, &target),
            Err(RuleError::GluingConflict { point: PointId(0), .. })
        ));
    }

    #[test]
    fn local_sections_glue_for_every_function_on_tiny_fields() {
        for p in [2u64, 3] {
            let space = quadric_space(p).unwrap();
            let mut table = vec![0u64; p as usize];
            loop {
                let f = MonadicFn::Table(table.clone());
                let (on_d2, on_d4) = space.local_sections(&f);
                let glued = glue(&space.field, &[on_d2.clone(), on_d4.clone()]).unwrap();
                assert_eq!(glued.domain(), &space.slope_domain());
                assert_eq!(&glued.restrict(&space.d2).unwrap(), &on_d2);
                assert_eq!(&glued.restrict(&space.d4).unwrap(), &on_d4);
                // Next table in mixed-radix order.
                let mut k = 0;
                loop {
                    if k == table.len() {
                        break;
                    }
                    table[k] += 1;
                    if table[k] < p {
                        break;
                    }
                    table[k] = 0;
                    k += 1;
                }
                if table.iter().all(|v| *v == 0) {
                    break;
                }
            }
        }
    }

    #[test]
    fn local_sections_glue_for_sampled_functions_in_f5() {
        let space = quadric_space(5).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let table: Vec<u64> = (0..5).map(|_| rng.gen_range(0..5)).collect();
            let (on_d2, on_d4) = space.local_sections(&MonadicFn::Table(table));
            assert!(glue(&space.field, &[on_d2, on_d4]).is_ok());
        }
    }

    #[test]
    fn engine_result_matches_the_piecewise_definition() {
        for p in [2u64, 3, 5] {
            let space = quadric_space(p).unwrap();
            let rule = QuadricRule::new(&space, MonadicFn::Power(2), 1).unwrap();
            let trace = run(
                &space.topology,
                &space.field,
                &rule,
                &SchedulingPolicy::Canonical,
            )
            .unwrap();
            let field = space.field;
            for (id, pt) in space.points.iter().enumerate() {
                let expected = if pt.x2() != 0 {
                    field.pow(field.div(pt.x1(), pt.x2()), 2)
                } else if pt.x4() != 0 {
                    field.pow(field.div(pt.x3(), pt.x4()), 2)
                } else {
                    1
                };
                assert_eq!(trace.result.value_at(PointId(id)), Some(&expected));
            }
        }
    }

    #[test]
    fn function_tables_are_validated() {
        let space = quadric_space(3).unwrap();
        assert!(matches!(
            QuadricRule::new(&space, MonadicFn::Table(vec![0, 1]), 1),
            Err(QuadricError::InvalidFunctionTable)
        ));
        assert!(matches!(
            QuadricRule::new(&space, MonadicFn::Table(vec![0, 1, 3]), 1),
            Err(QuadricError::InvalidFunctionTable)
        ));
        assert!(QuadricRule::new(&space, MonadicFn::Table(vec![0, 1, 2]), 1).is_ok());
    }
}
