//! The staircase topology on a grid and the alignment recurrences on it.
//!
//! The space is `[0,m] × [0,n]` with the topology generated by the rectangles
//! `U_{i,j} = {(k,l) : k ≤ i, l ≤ j}`. Its opens are exactly the downward
//! closed subsets of the grid order (staircases), and every minimal
//! extension exposes a single cell, which is what makes the table-filling
//! recurrences single-step rules.

use thiserror::Error;

use crate::engine::{ExtensionRule, RuleError};
use crate::ring::{OrderedRing, Ring};
use crate::sheaf::Section;
use crate::topology::{Base, OpenSet, PointId, Topology};

/// Cell indexing for a `(m+1) × (n+1)` grid, row-major: `(i, j) ↦ i·(n+1)+j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    rows: usize,
    cols: usize,
}

impl Grid {
    /// Grid with extents `m`, `n`, i.e. cells `(0,0)` through `(m,n)`.
    pub fn new(m: usize, n: usize) -> Grid {
        Grid {
            rows: m + 1,
            cols: n + 1,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn point_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn point(&self, i: usize, j: usize) -> PointId {
        debug_assert!(i < self.rows && j < self.cols);
        PointId(i * self.cols + j)
    }

    pub fn coords(&self, p: PointId) -> (usize, usize) {
        (p.0 / self.cols, p.0 % self.cols)
    }
}

/// The topology of staircases on the grid `[0,m] × [0,n]`.
pub fn staircase_space(m: usize, n: usize) -> Topology {
    let grid = Grid::new(m, n);
    let mut elements = Vec::with_capacity(grid.point_count());
    for i in 0..grid.rows() {
        for j in 0..grid.cols() {
            elements.push(OpenSet::from_indices(
                grid.point_count(),
                (0..=i).flat_map(|k| (0..=j).map(move |l| grid.point(k, l).0)),
            ));
        }
    }
    Topology::generate(&Base::new(grid.point_count(), elements))
        .expect("rectangles form a valid base")
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridCostError {
    #[error("cost table must be rectangular and nonempty")]
    NotRectangular,
}

/// A total cost function on the cells of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCost<E> {
    grid: Grid,
    values: Vec<E>,
}

impl<E: Clone> GridCost<E> {
    pub fn from_fn(grid: Grid, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut values = Vec::with_capacity(grid.point_count());
        for i in 0..grid.rows() {
            for j in 0..grid.cols() {
                values.push(f(i, j));
            }
        }
        GridCost { grid, values }
    }

    pub fn constant(grid: Grid, value: E) -> Self {
        Self::from_fn(grid, |_, _| value.clone())
    }

    /// Builds from row-major rows; all rows must have equal, nonzero length.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self, GridCostError> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if height == 0 || width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(GridCostError::NotRectangular);
        }
        Ok(GridCost {
            grid: Grid::new(height - 1, width - 1),
            values: rows.into_iter().flatten().collect(),
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.values[self.grid.point(i, j).0]
    }
}

/// Match/mismatch/gap penalties for two concrete sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentScoring<E> {
    pub match_cost: E,
    pub mismatch_cost: E,
    pub gap_cost: E,
    pub seq_a: Vec<u8>,
    pub seq_b: Vec<u8>,
}

impl<E: Clone> AlignmentScoring<E> {
    /// Grid extents induced by the sequences: `(|a|, |b|)`.
    pub fn extents(&self) -> (usize, usize) {
        (self.seq_a.len(), self.seq_b.len())
    }

    /// Cost of aligning `seq_a[i]` against `seq_b[j]`.
    pub fn substitution(&self, i: usize, j: usize) -> &E {
        if self.seq_a[i] == self.seq_b[j] {
            &self.match_cost
        } else {
            &self.mismatch_cost
        }
    }
}

/// The substitution costs of `scoring` as a grid cost table.
///
/// Cell `(i, j)` holds the cost of aligning `seq_a[i]` with `seq_b[j]`; the
/// last row and column, which no diagonal move ever reads, are padded with
/// zero so the table is total on the grid.
pub fn alignment_cost<R: Ring>(
    ring: &R,
    scoring: &AlignmentScoring<R::Elem>,
) -> GridCost<R::Elem> {
    let (m, n) = scoring.extents();
    GridCost::from_fn(Grid::new(m, n), |i, j| {
        if i < m && j < n {
            scoring.substitution(i, j).clone()
        } else {
            ring.zero()
        }
    })
}

enum Move {
    Vertical,
    Horizontal,
    Diagonal,
}

/// Shared recurrence body: the new cell takes the minimum over its in-grid
/// predecessors of their value plus a move-dependent cost.
fn nw_extend<R: OrderedRing>(
    ring: &R,
    current: &Section<R>,
    target: &OpenSet,
    grid: Grid,
    cost_of_move: impl Fn(usize, usize, Move) -> R::Elem,
) -> Result<Vec<(PointId, R::Elem)>, RuleError> {
    if current.universe() != grid.point_count() {
        return Err(RuleError::Unsupported(format!(
            "space has {} points but the cost grid has {}",
            current.universe(),
            grid.point_count()
        )));
    }
    let mut out: Vec<(PointId, R::Elem)> = Vec::new();
    // Ascending point order is ascending (i, j), so predecessors exposed in
    // the same step are already in `out`.
    for p in target.difference(current.domain()).iter() {
        let (i, j) = grid.coords(p);
        if (i, j) == (0, 0) {
            out.push((p, ring.zero()));
            continue;
        }
        let mut predecessors: Vec<(usize, usize, Move)> = Vec::with_capacity(3);
        if i > 0 {
            predecessors.push((i - 1, j, Move::Vertical));
        }
        if j > 0 {
            predecessors.push((i, j - 1, Move::Horizontal));
        }
        if i > 0 && j > 0 {
            predecessors.push((i - 1, j - 1, Move::Diagonal));
        }
        let mut best: Option<R::Elem> = None;
        for (pi, pj, mv) in predecessors {
            let needed = grid.point(pi, pj);
            let prev = current
                .value_at(needed)
                .or_else(|| out.iter().find(|(q, _)| *q == needed).map(|(_, v)| v))
                .ok_or(RuleError::MissingDependency { point: p, needed })?
                .clone();
            let candidate = ring.add(&prev, &cost_of_move(pi, pj, mv));
            best = Some(match best {
                None => candidate,
                Some(b) => ring.min(b, candidate),
            });
        }
        out.push((p, best.expect("a non-origin cell has a predecessor")));
    }
    Ok(out)
}

/// The single-cost recurrence: every move out of cell `(i, j)` costs
/// `c(i, j)`, the cost of the source cell.
#[derive(Debug, Clone)]
pub struct NwRule<E> {
    cost: GridCost<E>,
}

impl<E: Clone> NwRule<E> {
    pub fn new(cost: GridCost<E>) -> Self {
        NwRule { cost }
    }
}

impl<R: OrderedRing> ExtensionRule<R> for NwRule<R::Elem> {
    fn extend(
        &self,
        ring: &R,
        current: &Section<R>,
        target: &OpenSet,
    ) -> Result<Vec<(PointId, R::Elem)>, RuleError> {
        nw_extend(ring, current, target, self.cost.grid(), |i, j, _| {
            self.cost.at(i, j).clone()
        })
    }
}

/// Standard alignment scoring: gap moves cost the gap penalty, diagonal moves
/// cost the substitution of the two characters they consume.
#[derive(Debug, Clone)]
pub struct ScoredNwRule<E> {
    substitution: GridCost<E>,
    gap: E,
}

impl<E: Clone> ScoredNwRule<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, scoring: &AlignmentScoring<E>) -> Self {
        ScoredNwRule {
            substitution: alignment_cost(ring, scoring),
            gap: scoring.gap_cost.clone(),
        }
    }
}

impl<R: OrderedRing> ExtensionRule<R> for ScoredNwRule<R::Elem> {
    fn extend(
        &self,
        ring: &R,
        current: &Section<R>,
        target: &OpenSet,
    ) -> Result<Vec<(PointId, R::Elem)>, RuleError> {
        nw_extend(
            ring,
            current,
            target,
            self.substitution.grid(),
            |i, j, mv| match mv {
                Move::Diagonal => self.substitution.at(i, j).clone(),
                Move::Vertical | Move::Horizontal => self.gap.clone(),
            },
        )
    }
}
