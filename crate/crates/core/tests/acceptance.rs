//! Acceptance suite: one test per criterion, each printing a pass line and
//! enforcing its runtime budget. Criterion 7 (byte-identical CLI output plus
//! trace replay) lives in the CLI crate's acceptance suite.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sheafcomp::builtin::{
    chain_space, quadric_space, staircase_space, AlignmentScoring, ChainRule, Grid, GridCost,
    MonadicFn, NwRule, QuadricRule, ScoredNwRule,
};
use sheafcomp::sampling::{random_cover, random_section, random_valid_base};
use sheafcomp::{
    glue, run, sections_equal_on_cover, verify_well_definedness, ConstantRule, PointId,
    PrimeField, Rat, Rationals, SchedulingPolicy, Section, Topology,
};

const BASE_SEED: u64 = 0x51_EA_F0;
const BASE_COUNT: usize = 200;
const MAX_POINTS: usize = 8;

fn generated_topologies() -> Vec<Topology> {
    let mut rng = StdRng::seed_from_u64(BASE_SEED);
    (0..BASE_COUNT)
        .map(|_| {
            let base = random_valid_base(&mut rng, MAX_POINTS);
            assert!(base.validate().is_empty());
            Topology::generate(&base).expect("sampled bases are valid")
        })
        .collect()
}

fn finish(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("criterion {criterion}: PASS in {elapsed:?} (budget {budget:?})");
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its budget: {elapsed:?} >= {budget:?}"
    );
}

#[test]
fn criterion_1_sheaf_axiom_suite() {
    let started = Instant::now();
    let field = PrimeField::new(3).unwrap();
    let mut rng = StdRng::seed_from_u64(BASE_SEED ^ 1);

    for t in generated_topologies() {
        for _ in 0..3 {
            let u = t.opens()[rng.gen_range(0..t.opens().len())].clone();
            let sigma = random_section(&mut rng, &field, &u);

            // Restriction identity.
            assert_eq!(sigma.restrict(&u).unwrap(), sigma);

            // Restriction composition along a sampled chain W ⊆ V ⊆ U.
            let inside: Vec<_> = t.opens().iter().filter(|v| v.is_subset(&u)).collect();
            let v = inside[rng.gen_range(0..inside.len())].clone();
            let deeper: Vec<_> = inside.iter().copied().filter(|w| w.is_subset(&v)).collect();
            let w = deeper[rng.gen_range(0..deeper.len())].clone();
            assert_eq!(
                sigma.restrict(&v).unwrap().restrict(&w).unwrap(),
                sigma.restrict(&w).unwrap()
            );

            // Uniqueness: agreement on a cover is exactly pointwise equality.
            let cover = random_cover(&mut rng, &t, &u);
            let tau = random_section(&mut rng, &field, &u);
            assert_eq!(
                sections_equal_on_cover(&field, &sigma, &tau, &cover).unwrap(),
                sigma == tau
            );
            assert!(sections_equal_on_cover(&field, &sigma, &sigma, &cover).unwrap());

            // Gluing round-trip and glue-then-restrict.
            let parts: Vec<Section<PrimeField>> = cover
                .iter()
                .map(|c| sigma.restrict(c).unwrap())
                .collect();
            let glued = glue(&field, &parts).unwrap();
            assert_eq!(glued, sigma);
            for (c, part) in cover.iter().zip(&parts) {
                assert_eq!(&glued.restrict(c).unwrap(), part);
            }
        }
    }
    finish("1 (sheaf axiom suite)", started, Duration::from_secs(10));
}

#[test]
fn criterion_2_well_definedness() {
    let started = Instant::now();

    for t in generated_topologies() {
        assert!(t.check_minimal_extension_property().is_empty());
    }

    assert!(
        verify_well_definedness(&chain_space(6), &sheafcomp::Integers, &ChainRule)
            .unwrap()
            .is_empty()
    );

    let grid_topology = staircase_space(3, 3);
    let mut rng = StdRng::seed_from_u64(BASE_SEED ^ 2);
    let cost = GridCost::from_fn(Grid::new(3, 3), |_, _| {
        Ratio::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4))
    });
    assert!(
        verify_well_definedness(&grid_topology, &Rationals, &NwRule::new(cost))
            .unwrap()
            .is_empty()
    );
    let scoring = AlignmentScoring {
        match_cost: Ratio::new(0, 1),
        mismatch_cost: Ratio::new(1, 1),
        gap_cost: Ratio::new(1, 1),
        seq_a: b"ABA".to_vec(),
        seq_b: b"BAB".to_vec(),
    };
    assert!(verify_well_definedness(
        &grid_topology,
        &Rationals,
        &ScoredNwRule::new(&Rationals, &scoring)
    )
    .unwrap()
    .is_empty());

    for p in [2, 3, 5] {
        let space = quadric_space(p).unwrap();
        let rule = QuadricRule::new(&space, MonadicFn::Identity, 1).unwrap();
        assert!(
            verify_well_definedness(&space.topology, &space.field, &rule)
                .unwrap()
                .is_empty()
        );
    }

    finish("2 (well-definedness)", started, Duration::from_secs(10));
}

#[test]
fn criterion_3_global_section_reached() {
    let started = Instant::now();
    for t in generated_topologies() {
        let trace = run(
            &t,
            &sheafcomp::Integers,
            &ConstantRule(0i64),
            &SchedulingPolicy::Canonical,
        )
        .unwrap();
        assert_eq!(trace.result.domain(), &t.full_set());
        assert!(trace.steps.len() <= t.opens().len());
    }
    finish("3 (global section reached)", started, Duration::from_secs(5));
}

/// Minimum alignment cost by enumerating every alignment of the suffixes.
fn brute_force_alignment(s: &AlignmentScoring<Rat>, ai: usize, bi: usize) -> Rat {
    let la = s.seq_a.len();
    let lb = s.seq_b.len();
    if ai == la && bi == lb {
        return Ratio::new(0, 1);
    }
    let mut best: Option<Rat> = None;
    let mut consider = |c: Rat| best = Some(best.map_or(c, |b: Rat| b.min(c)));
    if ai < la {
        consider(s.gap_cost + brute_force_alignment(s, ai + 1, bi));
    }
    if bi < lb {
        consider(s.gap_cost + brute_force_alignment(s, ai, bi + 1));
    }
    if ai < la && bi < lb {
        consider(*s.substitution(ai, bi) + brute_force_alignment(s, ai + 1, bi + 1));
    }
    best.expect("some move is available")
}

/// Minimum over all monotone paths `(0,0) → (ti,tj)` of the summed source
/// cell costs, by exhaustive path enumeration.
fn brute_force_path(cost: &GridCost<Rat>, i: usize, j: usize, ti: usize, tj: usize, acc: Rat, best: &mut Option<Rat>) {
    if (i, j) == (ti, tj) {
        *best = Some(best.map_or(acc, |b: Rat| b.min(acc)));
        return;
    }
    let here = acc + *cost.at(i, j);
    if i < ti {
        brute_force_path(cost, i + 1, j, ti, tj, here, best);
    }
    if j < tj {
        brute_force_path(cost, i, j + 1, ti, tj, here, best);
    }
    if i < ti && j < tj {
        brute_force_path(cost, i + 1, j + 1, ti, tj, here, best);
    }
}

fn two_letter_sequences(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        for mask in 0u32..1 << len {
            out.push(
                (0..len)
                    .map(|k| if mask >> k & 1 == 1 { b'B' } else { b'A' })
                    .collect(),
            );
        }
    }
    out
}

#[test]
fn criterion_4_alignment_oracle_equivalence() {
    let started = Instant::now();

    // Scored rule vs. exhaustive alignment enumeration, all 2-letter
    // sequence pairs of lengths up to 4.
    let sequences = two_letter_sequences(4);
    let mut spaces: HashMap<(usize, usize), Topology> = HashMap::new();
    for a in &sequences {
        for b in &sequences {
            let scoring = AlignmentScoring {
                match_cost: Ratio::new(0, 1),
                mismatch_cost: Ratio::new(1, 1),
                gap_cost: Ratio::new(1, 1),
                seq_a: a.clone(),
                seq_b: b.clone(),
            };
            let (m, n) = scoring.extents();
            let t = spaces
                .entry((m, n))
                .or_insert_with(|| staircase_space(m, n));
            let rule = ScoredNwRule::new(&Rationals, &scoring);
            let trace = run(t, &Rationals, &rule, &SchedulingPolicy::Canonical).unwrap();
            let got = *trace
                .result
                .value_at(Grid::new(m, n).point(m, n))
                .unwrap();
            assert_eq!(got, brute_force_alignment(&scoring, 0, 0), "{a:?} vs {b:?}");
        }
    }

    // Single-cost rule vs. exhaustive monotone-path enumeration, 50 random
    // cost tables.
    let mut rng = StdRng::seed_from_u64(BASE_SEED ^ 4);
    for _ in 0..50 {
        let (m, n) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let grid = Grid::new(m, n);
        let cost = GridCost::from_fn(grid, |_, _| {
            Ratio::new(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=6))
        });
        let t = spaces
            .entry((m, n))
            .or_insert_with(|| staircase_space(m, n));
        let trace = run(
            t,
            &Rationals,
            &NwRule::new(cost.clone()),
            &SchedulingPolicy::Canonical,
        )
        .unwrap();
        for i in 0..=m {
            for j in 0..=n {
                let mut best = None;
                brute_force_path(&cost, 0, 0, i, j, Ratio::new(0, 1), &mut best);
                assert_eq!(
                    trace.result.value_at(grid.point(i, j)),
                    best.as_ref(),
                    "cell ({i},{j})"
                );
            }
        }
    }

    finish("4 (alignment oracles)", started, Duration::from_secs(30));
}

#[test]
fn criterion_5_chain_closed_form() {
    let started = Instant::now();
    for n in [0usize, 1, 7, 100] {
        let trace = run(
            &chain_space(n),
            &sheafcomp::Integers,
            &ChainRule,
            &SchedulingPolicy::Canonical,
        )
        .unwrap();
        assert_eq!(trace.steps.len(), n + 1);
        for i in 0..=n {
            assert_eq!(trace.result.value_at(PointId(i)), Some(&(i as i64)));
        }
    }
    finish("5 (chain closed form)", started, Duration::from_secs(1));
}

#[test]
fn criterion_6_quadric_gluing() {
    let started = Instant::now();
    for p in [2u64, 3, 5] {
        let space = quadric_space(p).unwrap();
        let field = space.field;

        // Slope identity, exhaustively on the overlap.
        for id in space.d2.intersection(&space.d4).iter() {
            let pt = &space.points[id.0];
            assert_eq!(
                field.div(pt.x1(), pt.x2()),
                field.div(pt.x3(), pt.x4()),
                "p = {p}"
            );
        }

        // The two local sections glue without conflict, for the identity and
        // a few power maps.
        for f in [MonadicFn::Identity, MonadicFn::Power(2), MonadicFn::Power(3)] {
            let (on_d2, on_d4) = space.local_sections(&f);
            let glued = glue(&field, &[on_d2.clone(), on_d4.clone()]).unwrap();
            assert_eq!(glued.domain(), &space.slope_domain());
            assert_eq!(&glued.restrict(&space.d2).unwrap(), &on_d2);
            assert_eq!(&glued.restrict(&space.d4).unwrap(), &on_d4);
        }

        // The computed global section is the piecewise definition with
        // default 1 outside the slope domain.
        let rule = QuadricRule::new(&space, MonadicFn::Identity, 1).unwrap();
        let trace = run(&space.topology, &field, &rule, &SchedulingPolicy::Canonical).unwrap();
        assert_eq!(trace.result.domain(), &space.topology.full_set());
        for (id, pt) in space.points.iter().enumerate() {
            let expected = if pt.x2() != 0 {
                field.div(pt.x1(), pt.x2())
            } else if pt.x4() != 0 {
                field.div(pt.x3(), pt.x4())
            } else {
                1
            };
            assert_eq!(trace.result.value_at(PointId(id)), Some(&expected), "p = {p}");
        }
    }
    finish("6 (quadric gluing)", started, Duration::from_secs(5));
}

/// Order ideals of the grid order `[0,m] × [0,n]`, counted as non-increasing
/// sequences of row filling lengths. Independent of the lattice generator.
fn order_ideal_count(m: usize, n: usize) -> usize {
    fn count(rows_left: usize, cap: usize) -> usize {
        if rows_left == 0 {
            return 1;
        }
        (0..=cap).map(|l| count(rows_left - 1, l)).sum()
    }
    count(m + 1, n + 1)
}

#[test]
fn criterion_8_staircase_lattice_count() {
    let started = Instant::now();
    assert_eq!(staircase_space(1, 1).opens().len(), 6);
    for m in 0..=3 {
        for n in 0..=3 {
            assert_eq!(
                staircase_space(m, n).opens().len(),
                order_ideal_count(m, n),
                "m={m} n={n}"
            );
        }
    }
    finish("8 (staircase lattice count)", started, Duration::from_secs(5));
}
