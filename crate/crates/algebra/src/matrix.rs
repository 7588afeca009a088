//! Dense matrices over an exact ring, with fraction-free elimination.

use std::fmt;

use crate::error::AlgebraError;
use crate::scalar::Ring;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactMatrix<R: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> ExactMatrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Self, AlgebraError> {
        if data.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::DimensionMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[R] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<R> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<R>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> ExactMatrix<S> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Bareiss elimination. Pivots are taken column by column, left to right,
    /// using the topmost nonzero entry at or below the current row. Returns the
    /// reduced rows, the rank, and the parity of the row swaps.
    fn bareiss(&self) -> (Vec<Vec<R>>, usize, bool) {
        let mut a = self.to_rows();
        let mut prev = R::one();
        let mut row = 0;
        let mut odd_swaps = false;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            if p != row {
                a.swap(p, row);
                odd_swaps = !odd_swaps;
            }
            let (top, rest) = a.split_at_mut(row + 1);
            let pivot_row = &top[row];
            let pivot = pivot_row[col].clone();
            for r in rest.iter_mut() {
                let factor = r[col].clone();
                for j in col + 1..self.cols {
                    let v = pivot.mul(&r[j]).sub(&factor.mul(&pivot_row[j]));
                    r[j] = if prev.is_one() {
                        v
                    } else {
                        v.try_div_exact(&prev)
                            .expect("fraction-free elimination divides exactly")
                    };
                }
                r[col] = R::zero();
            }
            prev = pivot;
            row += 1;
        }
        (a, row, odd_swaps)
    }

    pub fn rank_exact(&self) -> usize {
        self.bareiss().1
    }

    pub fn determinant(&self) -> Result<R, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(R::one());
        }
        let (a, rank, odd) = self.bareiss();
        if rank < self.rows {
            return Ok(R::zero());
        }
        let d = a[self.rows - 1][self.cols - 1].clone();
        Ok(if odd { d.neg() } else { d })
    }
}

impl<R: Ring + fmt::Display> fmt::Display for ExactMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
