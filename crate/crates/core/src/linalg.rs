//! The inequality description of the polytope and checks on its square subsystems.
//!
//! The polytope is `{x : A x >= b}` where `A` stacks the cube rows `±e_i` and
//! the ballot rows. Every invertible `m × m` row subset of `A` should have
//! determinant ±1, and Gaussian elimination on it should never leave the
//! entries {-1, 0, 1}. Both facts are checked exhaustively here over exact
//! integers.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BallotError, Result};
use crate::geom::{ballot_vectors, BallotSide, GapVector};
use crate::rational::{self, Rational};

pub type IntMatrix = Vec<Vec<i64>>;

pub const DEFAULT_UNIMODULAR_CAP: usize = 4;
pub const DEFAULT_BFS_CAP: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowKind {
    CubeLower { coord: usize },
    CubeUpper { coord: usize },
    LeftBallot { depth: usize },
    RightBallot { depth: usize },
}

/// Rows `a_i` and right-hand sides `b_i` of `a_i · x >= b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintSystem {
    pub n: usize,
    pub rows: IntMatrix,
    pub rhs: Vec<i64>,
    pub kinds: Vec<RowKind>,
}

impl ConstraintSystem {
    pub fn dim(&self) -> usize {
        2 * self.n - 1
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_flat(&self) -> bool {
        is_flat(&self.rows)
    }

    /// Whether `x` satisfies every row.
    pub fn satisfies(&self, x: &[Rational]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(row, &b)| {
            let lhs = row
                .iter()
                .zip(x)
                .fold(Rational::zero(), |acc, (&a, xi)| acc + xi * rational::int(a));
            lhs >= rational::int(b)
        })
    }
}

/// Cube rows (`+e_i` then `-e_i` for each coordinate), left ballot rows by depth,
/// right ballot rows by depth.
pub fn constraint_system(n: usize) -> ConstraintSystem {
    assert!(n >= 1, "n must be >= 1");
    let m = 2 * n - 1;
    let mut rows = Vec::with_capacity(3 * m - 1);
    let mut rhs = Vec::with_capacity(3 * m - 1);
    let mut kinds = Vec::with_capacity(3 * m - 1);
    for i in 0..m {
        let mut up = vec![0; m];
        up[i] = 1;
        rows.push(up);
        rhs.push(0);
        kinds.push(RowKind::CubeLower { coord: i + 1 });
        let mut down = vec![0; m];
        down[i] = -1;
        rows.push(down);
        rhs.push(-1);
        kinds.push(RowKind::CubeUpper { coord: i + 1 });
    }
    for w in ballot_vectors(n) {
        rows.push(w.entries.iter().map(|&e| e as i64).collect());
        rhs.push(0);
        kinds.push(match w.side {
            BallotSide::Left => RowKind::LeftBallot { depth: w.depth },
            BallotSide::Right => RowKind::RightBallot { depth: w.depth },
        });
    }
    ConstraintSystem { n, rows, rhs, kinds }
}

pub fn is_flat(m: &[Vec<i64>]) -> bool {
    m.iter().flatten().all(|x| x.abs() <= 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationTrace {
    /// The input followed by the matrix after each column is cleared.
    pub steps: Vec<IntMatrix>,
    pub all_flat: bool,
    /// Fraction-free determinant, computed independently of the trace.
    pub determinant: i64,
    pub singular: bool,
    /// Determinant implied by the elimination itself; `None` when it stalled.
    pub elimination_determinant: Option<i64>,
    /// Some column had nonzero candidates but none equal to ±1, so clearing
    /// it would need a non-unit scaling.
    pub stalled: bool,
}

/// Gauss–Jordan elimination using only row negation and adding integer
/// multiples of one row to another.
///
/// For column `c` the pivot is the first row, in the original order, that
/// has not pivoted yet and holds ±1 in column `c`. A `-1` pivot row is
/// negated, then column `c` is cleared from every other row. Rows are never
/// moved, so a nonsingular input ends as a permutation matrix.
pub fn flat_elimination(matrix: &[Vec<i64>]) -> Result<EliminationTrace> {
    let size = matrix.len();
    if matrix.iter().any(|r| r.len() != size) {
        return Err(BallotError::Precondition("matrix must be square".into()));
    }
    let determinant = bareiss_determinant(matrix);
    let mut a: IntMatrix = matrix.to_vec();
    let mut steps = vec![a.clone()];
    let mut pivot_col: Vec<Option<usize>> = vec![None; size];
    let mut negations = 0usize;
    let mut singular = false;
    let mut stalled = false;

    for c in 0..size {
        let free = || (0..size).filter(|&r| pivot_col[r].is_none());
        let Some(p) = free().find(|&r| a[r][c].abs() == 1) else {
            if free().any(|r| a[r][c] != 0) {
                stalled = true;
                break;
            }
            singular = true;
            steps.push(a.clone());
            continue;
        };
        if a[p][c] == -1 {
            a[p].iter_mut().for_each(|x| *x = -*x);
            negations += 1;
        }
        let pivot_row = a[p].clone();
        for (r, row) in a.iter_mut().enumerate() {
            let f = row[c];
            if r != p && f != 0 {
                row.iter_mut().zip(&pivot_row).for_each(|(x, &y)| *x -= f * y);
            }
        }
        pivot_col[p] = Some(c);
        steps.push(a.clone());
    }

    let elimination_determinant = if stalled {
        None
    } else if singular {
        Some(0)
    } else {
        let perm: Vec<usize> = pivot_col.iter().map(|c| c.expect("every row pivoted")).collect();
        let sign = permutation_sign(&perm) * if negations % 2 == 0 { 1 } else { -1 };
        Some(sign)
    };
    let all_flat = steps.iter().all(|s| is_flat(s));
    Ok(EliminationTrace {
        steps,
        all_flat,
        singular: determinant == 0,
        determinant,
        elimination_determinant,
        stalled,
    })
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Bareiss fraction-free determinant.
pub fn bareiss_determinant(matrix: &[Vec<i64>]) -> i64 {
    let size = matrix.len();
    if size == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..size).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[size - 1][size - 1]).expect("determinant fits in i64")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularityReport {
    pub n: usize,
    pub submatrices_tested: usize,
    pub invertible_count: usize,
    pub all_unimodular: bool,
    /// Flatness of every elimination trace on an invertible subset.
    pub all_flat: bool,
    /// The elimination's own determinant agrees with Bareiss on every subset.
    pub determinants_agree: bool,
    /// Up to ten offending row subsets (0-based row indices).
    pub failures: Vec<Vec<usize>>,
}

impl UnimodularityReport {
    pub fn passed(&self) -> bool {
        self.all_unimodular && self.all_flat && self.determinants_agree
    }
}

pub fn verify_unimodularity(n: usize) -> Result<UnimodularityReport> {
    verify_unimodularity_with(n, DEFAULT_UNIMODULAR_CAP, |_, _| {})
}

/// Runs [`flat_elimination`] on every `m`-row subset, lexicographically by
/// row index. `progress(done, total)` is called after each batch.
pub fn verify_unimodularity_with(
    n: usize,
    cap: usize,
    mut progress: impl FnMut(usize, usize),
) -> Result<UnimodularityReport> {
    if n == 0 {
        return Err(BallotError::Precondition("n must be >= 1".into()));
    }
    if n > cap {
        return Err(BallotError::CapExceeded { operation: "verify_unimodularity", n, cap });
    }
    let system = constraint_system(n);
    let m = system.dim();
    let subsets: Vec<Vec<usize>> = (0..system.len()).combinations(m).collect();
    let total = subsets.len();
    let mut report = UnimodularityReport {
        n,
        submatrices_tested: total,
        invertible_count: 0,
        all_unimodular: true,
        all_flat: true,
        determinants_agree: true,
        failures: Vec::new(),
    };
    let mut done = 0;
    for batch in subsets.chunks(8192) {
        let outcomes: Vec<(bool, bool, bool, bool)> = batch
            .par_iter()
            .map(|rows| {
                let sub: IntMatrix = rows.iter().map(|&r| system.rows[r].clone()).collect();
                let trace = flat_elimination(&sub).expect("square by construction");
                let invertible = !trace.singular;
                (
                    invertible,
                    !invertible || trace.determinant.abs() == 1,
                    !invertible || trace.all_flat,
                    trace.elimination_determinant == Some(trace.determinant),
                )
            })
            .collect();
        for (rows, (inv, unimod, flat, agree)) in batch.iter().zip(outcomes) {
            report.invertible_count += usize::from(inv);
            report.all_unimodular &= unimod;
            report.all_flat &= flat;
            report.determinants_agree &= agree;
            if !(unimod && flat && agree) && report.failures.len() < 10 {
                report.failures.push(rows.clone());
            }
        }
        done += batch.len();
        progress(done, total);
    }
    Ok(report)
}

/// Solves `A x = b` over the rationals; `None` if `A` is singular.
pub fn solve_exact(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Rational>> {
    let size = a.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            row.iter()
                .map(|&x| rational::int(x))
                .chain(std::iter::once(rational::int(bi)))
                .collect()
        })
        .collect();
    for c in 0..size {
        let p = (c..size).find(|&r| !aug[r][c].is_zero())?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        aug[c].iter_mut().for_each(|x| *x *= &inv);
        let pivot = aug[c].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != c && !row[c].is_zero() {
                let f = row[c].clone();
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x -= &f * y);
            }
        }
    }
    Some(aug.into_iter().map(|row| row[size].clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasicSolutionSurvey {
    pub n: usize,
    pub basic_solutions: usize,
    pub all_integral: bool,
    pub feasible: Vec<GapVector>,
}

pub fn basic_feasible_solutions(n: usize) -> Result<Vec<GapVector>> {
    basic_solution_survey(n, DEFAULT_BFS_CAP).map(|s| s.feasible)
}

/// Solves every invertible `m`-row subsystem with equality and keeps the
/// solutions that satisfy the whole system, deduplicated and sorted.
pub fn basic_solution_survey(n: usize, cap: usize) -> Result<BasicSolutionSurvey> {
    if n == 0 {
        return Err(BallotError::Precondition("n must be >= 1".into()));
    }
    if n > cap {
        return Err(BallotError::CapExceeded { operation: "basic_feasible_solutions", n, cap });
    }
    let system = constraint_system(n);
    let m = system.dim();
    let solutions: Vec<Vec<Rational>> = (0..system.len())
        .combinations(m)
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|rows| {
            let a: IntMatrix = rows.iter().map(|&r| system.rows[r].clone()).collect();
            let b: Vec<i64> = rows.iter().map(|&r| system.rhs[r]).collect();
            solve_exact(&a, &b)
        })
        .collect();
    let all_integral = solutions.iter().flatten().all(|x| x.denom().is_one());
    let feasible: BTreeSet<Vec<Rational>> = solutions
        .iter()
        .filter(|x| system.satisfies(x))
        .cloned()
        .collect();
    Ok(BasicSolutionSurvey {
        n,
        basic_solutions: solutions.len(),
        all_integral,
        feasible: feasible
            .into_iter()
            .map(|x| GapVector::new(x).expect("odd dimension"))
            .collect(),
    })
}

/// The 5×5 subsystem used as the worked elimination example, with the
/// matrices after each cleared column.
pub fn worked_example() -> (IntMatrix, Vec<IntMatrix>) {
    let a0 = vec![
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 0, 0, 1],
        vec![1, -1, 0, 0, 0],
        vec![0, -1, 1, -1, 1],
        vec![0, 0, 0, -1, 1],
    ];
    let a2 = vec![
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 0, 0, 1],
        vec![1, 0, 0, 0, 0],
        vec![0, 0, 1, -1, 1],
        vec![0, 0, 0, -1, 1],
    ];
    let a4 = vec![
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 0, 0, 1],
        vec![1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0],
        vec![0, 0, 0, 1, -1],
    ];
    let a5 = vec![
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 0, 0, 1],
        vec![1, 0, 0, 0, 0],
        vec![0, 0, 1, 0, 0],
        vec![0, 0, 0, 1, 0],
    ];
    let trace = vec![a0.clone(), a0.clone(), a2.clone(), a2, a4, a5];
    (a0, trace)
}
