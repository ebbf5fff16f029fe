//! Exact dense linear algebra over [`Rational`].
//!
//! Everything here is deterministic: pivots are always the first nonzero
//! entry in column order, so ranks, solutions and nullspace vectors are
//! reproducible across runs. Rank uses fraction-free (Bareiss) elimination on
//! row-scaled integer copies; solving and nullspace extraction use rational
//! Gauss-Jordan. Target sizes are a few dozen rows and columns.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;

pub type Vector = Vec<Rational>;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len(), "dot length mismatch");
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

/// `x + s·p`.
pub fn add_scaled(x: &[Rational], s: &Rational, p: &[Rational]) -> Vector {
    x.iter().zip(p).map(|(a, b)| a + s * b).collect()
}

pub fn scale_vec(s: &Rational, v: &[Rational]) -> Vector {
    v.iter().map(|a| s * a).collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count mismatch");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Stacks the referenced rows (in order) into a new matrix.
    pub fn from_row_refs(cols: usize, rows: &[&[Rational]]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix::new(rows.len(), cols, data)
    }

    /// Integer-entry convenience, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.get_mut(c, r) = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mat_vec(&self, v: &[Rational]) -> Vector {
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination on a row-scaled
    /// integer copy. Pivot rule: first row with a nonzero entry, columns in
    /// order.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|r| scale_row_to_int(self.row(r)))
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..cols {
            let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot_row);
            for r in rank + 1..rows {
                for c in col + 1..cols {
                    // Bareiss one-step: exact integer division by the previous pivot.
                    let num = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                    a[r][c] = num / &prev;
                }
                a[r][col] = BigInt::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form; returns the transformed matrix and the list
    /// of pivot columns.
    fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            if next_row == m.rows {
                break;
            }
            let Some(pr) = (next_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(next_row, pr);
            let inv = m.get(next_row, col).recip();
            m.scale_row(next_row, &inv);
            for r in 0..m.rows {
                if r != next_row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    m.sub_scaled_row(r, next_row, &factor);
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: &Rational) {
        for c in 0..self.cols {
            let v = self.get(r, c) * s;
            *self.get_mut(r, c) = v;
        }
    }

    /// row_r -= factor * row_src
    fn sub_scaled_row(&mut self, r: usize, src: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = self.get(r, c) - factor * self.get(src, c);
            *self.get_mut(r, c) = v;
        }
    }

    /// Exact solution of a square nonsingular system.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vector, Error> {
        let cols = Matrix::new(rhs.len(), 1, rhs.to_vec());
        let sol = self.solve_matrix(&cols)?;
        Ok((0..self.cols).map(|r| sol.get(r, 0).clone()).collect())
    }

    /// Solves `self · X = rhs` for a square nonsingular `self` with one
    /// column of `X` per column of `rhs`.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "solve needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if rhs.rows != self.rows {
            return Err(Error::Dimension(format!(
                "rhs has {} rows, matrix has {}",
                rhs.rows, self.rows
            )));
        }
        let n = self.rows;
        let k = rhs.cols;
        let mut aug = Matrix::zeros(n, n + k);
        for r in 0..n {
            for c in 0..n {
                *aug.get_mut(r, c) = self.get(r, c).clone();
            }
            for c in 0..k {
                *aug.get_mut(r, n + c) = rhs.get(r, c).clone();
            }
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
            return Err(Error::SingularMatrix);
        }
        let mut x = Matrix::zeros(n, k);
        for r in 0..n {
            for c in 0..k {
                *x.get_mut(r, c) = red.get(r, n + c).clone();
            }
        }
        Ok(x)
    }

    /// Deterministic nonzero nullspace vector, or `None` when the columns are
    /// independent: the lowest-index free column is set to 1, remaining free
    /// columns to 0, pivot variables back-solved.
    pub fn nullspace_vector(&self) -> Option<Vector> {
        self.nullspace_from_free(|free| free.first().copied())
    }

    /// Basis of the nullspace, one vector per free column.
    pub fn nullspace_basis(&self) -> Vec<Vector> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| build_null_vector(&red, &pivots, self.cols, f))
            .collect()
    }

    fn nullspace_from_free(&self, pick: impl Fn(&[usize]) -> Option<usize>) -> Option<Vector> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let f = pick(&free)?;
        Some(build_null_vector(&red, &pivots, self.cols, f))
    }
}

fn build_null_vector(red: &Matrix, pivots: &[usize], cols: usize, free_col: usize) -> Vector {
    let mut v = vec![Rational::zero(); cols];
    v[free_col] = Rational::one();
    for (row, &pcol) in pivots.iter().enumerate() {
        // x_pivot = -entry(row, free) with the free variable at 1.
        v[pcol] = -red.get(row, free_col);
    }
    v
}

/// Clears denominators of one row, returning integer entries.
fn scale_row_to_int(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

/// l1 norm of the integer scaling of a row; at least 1. Used for the
/// Hadamard-style coordinate bound.
pub fn scaled_row_l1(row: &[Rational]) -> BigInt {
    let sum: BigInt = scale_row_to_int(row).iter().map(|x| x.abs()).sum();
    if sum.is_zero() {
        BigInt::one()
    } else {
        sum
    }
}

/// Smallest row index outside `sub` whose product with `p` is nonzero.
///
/// Preconditions: rank(D) = cols, the rows in `sub` annihilate `p`, `p != 0`.
/// Under those, such a row always exists and is linearly independent of the
/// `sub` rows; absence is reported as an internal error.
pub fn independent_row_outside(d: &Matrix, sub: &[usize], p: &[Rational]) -> Result<usize, Error> {
    for r in 0..d.rows() {
        if sub.contains(&r) {
            continue;
        }
        if !dot(d.row(r), p).is_zero() {
            return Ok(r);
        }
    }
    Err(Error::internal(
        "no row outside the subset has a nonzero product; preconditions violated",
    ))
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
