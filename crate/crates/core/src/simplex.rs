//! Phase-1 simplex over an exact ordered field.
//!
//! Decides whether `A x = b, x ≥ 0` has a solution and returns a basic one.
//! Pivoting follows Bland's rule (smallest entering index, smallest leaving
//! basis index on ratio ties), so it terminates and is deterministic.

use num_traits::{Num, Signed};

pub trait Field: Num + Signed + Ord + Clone {}
impl<T: Num + Signed + Ord + Clone> Field for T {}

#[derive(Debug, Clone)]
pub struct Tableau<T> {
    rows: usize,
    cols: usize,
    // rows × (cols + rows) coefficients; artificials occupy the last `rows` columns.
    a: Vec<Vec<T>>,
    rhs: Vec<T>,
    // reduced costs of the phase-1 objective (sum of artificials)
    cost: Vec<T>,
    basis: Vec<usize>,
}

impl<T: Field> Tableau<T> {
    /// `a` is `rows × cols`, `b` has length `rows`.
    pub fn new(a: Vec<Vec<T>>, b: Vec<T>) -> Self {
        let rows = a.len();
        assert_eq!(b.len(), rows, "rhs length must match row count");
        let cols = a.first().map_or(0, Vec::len);
        let width = cols + rows;
        let mut table = Vec::with_capacity(rows);
        let mut rhs = Vec::with_capacity(rows);
        for (i, (mut row, bi)) in a.into_iter().zip(b).enumerate() {
            assert_eq!(row.len(), cols, "ragged constraint matrix");
            let flip = bi.is_negative();
            if flip {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            row.resize(width, T::zero());
            row[cols + i] = T::one();
            rhs.push(if flip { -bi } else { bi });
            table.push(row);
        }
        let mut cost = vec![T::zero(); width];
        for (j, c) in cost.iter_mut().enumerate().take(cols) {
            *c = table.iter().fold(T::zero(), |acc, row| acc - row[j].clone());
        }
        Tableau {
            rows,
            cols,
            a: table,
            rhs,
            cost,
            basis: (cols..cols + rows).collect(),
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        if !p.is_one() {
            for x in self.a[row].iter_mut() {
                *x = x.clone() / p.clone();
            }
            self.rhs[row] = self.rhs[row].clone() / p;
        }
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows {
            if i == row || self.a[i][col].is_zero() {
                continue;
            }
            let f = self.a[i][col].clone();
            for (x, y) in self.a[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.cost[col].clone();
        if !f.is_zero() {
            for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.basis[row] = col;
    }

    /// Run to optimality; returns a basic solution if the artificial sum
    /// reaches zero.
    pub fn solve(mut self) -> Option<Vec<T>> {
        while let Some(col) = self.cost.iter().position(|c| c.is_negative()) {
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows {
                let aij = &self.a[i][col];
                if !aij.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / aij.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            // The phase-1 objective is bounded below by zero.
            let (row, _) = best.expect("phase-1 objective cannot be unbounded");
            self.pivot(row, col);
        }
        let infeasible = self
            .basis
            .iter()
            .zip(&self.rhs)
            .any(|(&j, r)| j >= self.cols && !r.is_zero());
        if infeasible {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (&j, r) in self.basis.iter().zip(&self.rhs) {
            if j < self.cols {
                x[j] = r.clone();
            }
        }
        Some(x)
    }
}

/// Some `x ≥ 0` with `A x = b`, if one exists.
pub fn find_nonnegative_solution<T: Field>(a: Vec<Vec<T>>, b: Vec<T>) -> Option<Vec<T>> {
    Tableau::new(a, b).solve()
}
