//! Dense two-phase simplex, sized for the tiny LPs in the polytope checks.
//!
//! Two entry points: [`maximize_free`] for inequality systems over free
//! variables (recession-direction probes) and [`feasible_eq`] for
//! equality-form feasibility over nonnegative variables (convex-combination
//! certificates). Bland's rule keeps the highly degenerate instances from
//! cycling; a pivot cap turns any stall into an error instead of a hang.

use crate::error::{Error, Result};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub enum LpSolution {
    Optimal { x: Vec<f64>, value: f64 },
    Unbounded,
    Infeasible,
}

const MAX_PIVOTS: usize = 50_000;

struct Tableau {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal(f64),
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = 1.0 / self.a[r][c];
        for x in self.a[r].iter_mut() {
            *x *= inv;
        }
        self.b[r] *= inv;
        let m = self.a.len();
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = self.a[i][c];
            if f == 0.0 {
                continue;
            }
            let (row_r, row_i) = if i < r {
                let (lo, hi) = self.a.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = self.a.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (x, &p) in row_i.iter_mut().zip(row_r) {
                *x -= f * p;
            }
            self.a[i][c] = 0.0;
            self.b[i] -= f * self.b[r];
        }
        self.basis[r] = c;
    }

    /// Maximizes `c . y` from the current basic feasible point, Bland's rule
    /// on both the entering and leaving choices.
    fn optimize(&mut self, c: &[f64]) -> Result<Phase> {
        let m = self.a.len();
        let n = c.len();
        for _ in 0..MAX_PIVOTS {
            let mut in_basis = vec![false; n];
            for &j in &self.basis {
                in_basis[j] = true;
            }
            let cb: Vec<f64> = self.basis.iter().map(|&j| c[j]).collect();
            let mut enter = None;
            for j in 0..n {
                if in_basis[j] {
                    continue;
                }
                let z: f64 = (0..m).map(|i| cb[i] * self.a[i][j]).sum();
                if c[j] - z > tol::LP_PIVOT {
                    enter = Some(j);
                    break;
                }
            }
            let Some(col) = enter else {
                let value: f64 = (0..m).map(|i| cb[i] * self.b[i]).sum();
                return Ok(Phase::Optimal(value));
            };
            let mut best = f64::INFINITY;
            for i in 0..m {
                if self.a[i][col] > tol::LP_PIVOT {
                    best = best.min(self.b[i] / self.a[i][col]);
                }
            }
            if best.is_infinite() {
                return Ok(Phase::Unbounded);
            }
            let row = (0..m)
                .filter(|&i| {
                    self.a[i][col] > tol::LP_PIVOT
                        && self.b[i] / self.a[i][col] <= best + 1e-12
                })
                .min_by_key(|&i| self.basis[i])
                .expect("ratio test found a row");
            self.pivot(row, col);
        }
        Err(Error::LpStalled)
    }

    /// Drives zero-level artificial variables (columns >= `real_cols`) out of
    /// the basis; rows that cannot be repaired are redundant and dropped.
    fn purge_artificials(&mut self, real_cols: usize) {
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= real_cols {
                let col = (0..real_cols).find(|&j| self.a[r][j].abs() > tol::LP_PIVOT);
                match col {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.a.remove(r);
                        self.b.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in self.a.iter_mut() {
            row.truncate(real_cols);
        }
    }

    fn extract(&self, cols: usize) -> Vec<f64> {
        let mut y = vec![0.0; cols];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < cols {
                y[j] = self.b[i];
            }
        }
        y
    }
}

/// Maximizes `c . x` subject to `a x <= b` with `x` free (componentwise
/// unrestricted). Rows may have rhs of either sign; phase 1 runs only when
/// needed.
pub fn maximize_free(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let nvars = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != nvars) {
        return Err(Error::DimensionMismatch(
            "LP constraint shapes disagree".into(),
        ));
    }
    // Columns: x+ | x- | slacks | artificials (for rows with b < 0).
    let art_rows: Vec<usize> = (0..m).filter(|&i| b[i] < 0.0).collect();
    let real_cols = 2 * nvars + m;
    let total_cols = real_cols + art_rows.len();
    let mut t = Tableau {
        a: vec![vec![0.0; total_cols]; m],
        b: vec![0.0; m],
        basis: vec![0; m],
    };
    let mut art_seen = 0;
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nvars {
            t.a[i][j] = flip * a[i][j];
            t.a[i][nvars + j] = -flip * a[i][j];
        }
        t.a[i][2 * nvars + i] = flip;
        t.b[i] = flip * b[i];
        if b[i] < 0.0 {
            let art = real_cols + art_seen;
            art_seen += 1;
            t.a[i][art] = 1.0;
            t.basis[i] = art;
        } else {
            t.basis[i] = 2 * nvars + i;
        }
    }
    if !art_rows.is_empty() {
        let mut phase1 = vec![0.0; total_cols];
        for j in real_cols..total_cols {
            phase1[j] = -1.0;
        }
        match t.optimize(&phase1)? {
            Phase::Optimal(v) if v >= -tol::LP_PIVOT => t.purge_artificials(real_cols),
            Phase::Optimal(_) => return Ok(LpSolution::Infeasible),
            Phase::Unbounded => unreachable!("phase-1 objective is bounded above by zero"),
        }
    }
    let mut obj = vec![0.0; t.a.first().map_or(real_cols, |r| r.len())];
    for j in 0..nvars {
        obj[j] = c[j];
        obj[nvars + j] = -c[j];
    }
    match t.optimize(&obj)? {
        Phase::Unbounded => Ok(LpSolution::Unbounded),
        Phase::Optimal(value) => {
            let y = t.extract(2 * nvars);
            let x = (0..nvars).map(|j| y[j] - y[nvars + j]).collect();
            Ok(LpSolution::Optimal { x, value })
        }
    }
}

/// Feasibility of `a x = b, x >= 0` via phase-1 artificials; returns a
/// feasible point if one exists.
pub fn feasible_eq(a: &[Vec<f64>], b: &[f64]) -> Result<Option<Vec<f64>>> {
    let m = a.len();
    let nvars = a.first().map_or(0, |r| r.len());
    if b.len() != m || a.iter().any(|row| row.len() != nvars) {
        return Err(Error::DimensionMismatch(
            "LP constraint shapes disagree".into(),
        ));
    }
    let total_cols = nvars + m;
    let mut t = Tableau {
        a: vec![vec![0.0; total_cols]; m],
        b: vec![0.0; m],
        basis: (0..m).map(|i| nvars + i).collect(),
    };
    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..nvars {
            t.a[i][j] = flip * a[i][j];
        }
        t.a[i][nvars + i] = 1.0;
        t.b[i] = flip * b[i];
    }
    let mut phase1 = vec![0.0; total_cols];
    for j in nvars..total_cols {
        phase1[j] = -1.0;
    }
    match t.optimize(&phase1)? {
        Phase::Optimal(v) if v >= -tol::LP_PIVOT => Ok(Some(t.extract(nvars))),
        Phase::Optimal(_) => Ok(None),
        Phase::Unbounded => unreachable!("phase-1 objective is bounded above by zero"),
    }
}
