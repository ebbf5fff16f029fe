//! The mixed-form LP data model: minimize c^T x subject to A_E x = b_E and
//! A_I x >= b_I, plus the feasibility, active-set and step machinery built on
//! it.
//!
//! Constraint indices are 1-based throughout the public surface: equalities
//! are 1..=m_E, inequalities m_E+1..=m_E+m_I, matching the numbering used in
//! certificates and CLI output.

use crate::error::Error;
use crate::linalg::{add_scaled, dot, is_zero_vec, Matrix, Vector};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct MixedLp {
    a_eq: Matrix,
    b_eq: Vector,
    a_ineq: Matrix,
    b_ineq: Vector,
    cost: Vector,
}

impl MixedLp {
    pub fn new(
        a_eq: Matrix,
        b_eq: Vector,
        a_ineq: Matrix,
        b_ineq: Vector,
        cost: Vector,
    ) -> Result<Self, Error> {
        let n = cost.len();
        if a_eq.cols() != n && a_eq.rows() > 0 {
            return Err(Error::Dimension(format!(
                "equality block has {} columns, objective has {n}",
                a_eq.cols()
            )));
        }
        if a_ineq.cols() != n && a_ineq.rows() > 0 {
            return Err(Error::Dimension(format!(
                "inequality block has {} columns, objective has {n}",
                a_ineq.cols()
            )));
        }
        if a_eq.rows() != b_eq.len() {
            return Err(Error::Dimension(format!(
                "{} equality rows but {} right-hand sides",
                a_eq.rows(),
                b_eq.len()
            )));
        }
        if a_ineq.rows() != b_ineq.len() {
            return Err(Error::Dimension(format!(
                "{} inequality rows but {} right-hand sides",
                a_ineq.rows(),
                b_ineq.len()
            )));
        }
        // Normalize empty blocks to the right column count.
        let a_eq = if a_eq.rows() == 0 {
            Matrix::zeros(0, n)
        } else {
            a_eq
        };
        let a_ineq = if a_ineq.rows() == 0 {
            Matrix::zeros(0, n)
        } else {
            a_ineq
        };
        Ok(MixedLp {
            a_eq,
            b_eq,
            a_ineq,
            b_ineq,
            cost,
        })
    }

    /// All-inequality convenience constructor (m_E = 0).
    pub fn all_inequality(a: Matrix, b: Vector, cost: Vector) -> Result<Self, Error> {
        let n = cost.len();
        MixedLp::new(Matrix::zeros(0, n), Vec::new(), a, b, cost)
    }

    pub fn n(&self) -> usize {
        self.cost.len()
    }

    pub fn m_eq(&self) -> usize {
        self.a_eq.rows()
    }

    pub fn m_ineq(&self) -> usize {
        self.a_ineq.rows()
    }

    pub fn m(&self) -> usize {
        self.m_eq() + self.m_ineq()
    }

    pub fn cost(&self) -> &[Rational] {
        &self.cost
    }

    pub fn a_eq(&self) -> &Matrix {
        &self.a_eq
    }

    pub fn b_eq(&self) -> &[Rational] {
        &self.b_eq
    }

    pub fn a_ineq(&self) -> &Matrix {
        &self.a_ineq
    }

    pub fn b_ineq(&self) -> &[Rational] {
        &self.b_ineq
    }

    pub fn is_equality(&self, index: usize) -> bool {
        index >= 1 && index <= self.m_eq()
    }

    /// Coefficient row of combined constraint `index` (1-based).
    pub fn row(&self, index: usize) -> &[Rational] {
        assert!(
            index >= 1 && index <= self.m(),
            "constraint index out of range"
        );
        if index <= self.m_eq() {
            self.a_eq.row(index - 1)
        } else {
            self.a_ineq.row(index - 1 - self.m_eq())
        }
    }

    pub fn rhs(&self, index: usize) -> &Rational {
        assert!(
            index >= 1 && index <= self.m(),
            "constraint index out of range"
        );
        if index <= self.m_eq() {
            &self.b_eq[index - 1]
        } else {
            &self.b_ineq[index - 1 - self.m_eq()]
        }
    }

    /// a_i^T x - b_i.
    pub fn residual(&self, x: &[Rational], index: usize) -> Rational {
        dot(self.row(index), x) - self.rhs(index)
    }

    pub fn objective(&self, x: &[Rational]) -> Rational {
        dot(&self.cost, x)
    }

    /// Combined constraint matrix [A_E; A_I].
    pub fn combined_matrix(&self) -> Matrix {
        let rows: Vec<&[Rational]> = (1..=self.m()).map(|i| self.row(i)).collect();
        Matrix::from_row_refs(self.n(), &rows)
    }

    pub fn combined_rhs(&self) -> Vector {
        (1..=self.m()).map(|i| self.rhs(i).clone()).collect()
    }

    /// First violated constraint, if any: equalities must hold exactly,
    /// inequalities must have nonnegative residual.
    pub fn first_violation(&self, x: &[Rational]) -> Option<(usize, Rational)> {
        for i in 1..=self.m() {
            let res = self.residual(x, i);
            let ok = if self.is_equality(i) {
                res.is_zero()
            } else {
                !res.is_negative()
            };
            if !ok {
                return Some((i, res));
            }
        }
        None
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.n() && self.first_violation(x).is_none()
    }
}

/// Partition of the inequality constraints at a feasible point, plus the
/// stacked active-constraint matrix (equalities first).
#[derive(Clone, Debug)]
pub struct ActiveSet {
    pub at: Vector,
    /// Active inequality constraints, ascending 1-based combined indices.
    pub active_ineq: Vec<usize>,
    /// Strictly satisfied inequality constraints, ascending.
    pub inactive_ineq: Vec<usize>,
    /// A_E stacked over the active inequality rows, in index order.
    pub matrix: Matrix,
    /// Combined constraint index of each matrix row.
    pub row_indices: Vec<usize>,
}

impl ActiveSet {
    pub fn active_count(&self) -> usize {
        self.row_indices.len()
    }
}

pub fn active_set(lp: &MixedLp, x: &[Rational]) -> Result<ActiveSet, Error> {
    if x.len() != lp.n() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            lp.n()
        )));
    }
    if let Some((index, residual)) = lp.first_violation(x) {
        return Err(Error::NotFeasible { index, residual });
    }
    let mut active_ineq = Vec::new();
    let mut inactive_ineq = Vec::new();
    for i in lp.m_eq() + 1..=lp.m() {
        if lp.residual(x, i).is_zero() {
            active_ineq.push(i);
        } else {
            inactive_ineq.push(i);
        }
    }
    let mut row_indices: Vec<usize> = (1..=lp.m_eq()).collect();
    row_indices.extend(&active_ineq);
    let rows: Vec<&[Rational]> = row_indices.iter().map(|&i| lp.row(i)).collect();
    let matrix = Matrix::from_row_refs(lp.n(), &rows);
    Ok(ActiveSet {
        at: x.to_vec(),
        active_ineq,
        inactive_ineq,
        matrix,
        row_indices,
    })
}

/// True iff A_E p = 0 and every active inequality row has a_i^T p >= 0.
pub fn is_feasible_direction(
    lp: &MixedLp,
    aset: &ActiveSet,
    p: &[Rational],
) -> Result<bool, Error> {
    if is_zero_vec(p) {
        return Err(Error::ZeroDirection);
    }
    for i in 1..=lp.m_eq() {
        if !dot(lp.row(i), p).is_zero() {
            return Ok(false);
        }
    }
    for &i in &aset.active_ineq {
        if dot(lp.row(i), p).is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Maximum feasible step along a feasible direction.
#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    /// `None` means +∞ (no inactive inequality decreases along p).
    pub sigma: Option<Rational>,
    /// Constraints attaining the minimum step; nonempty iff `sigma` is finite.
    pub blocking: Vec<usize>,
}

/// The smallest step σ^i = (b_i - a_i^T x)/(a_i^T p) over the inactive
/// inequalities with a_i^T p < 0, or +∞ when there are none.
pub fn max_feasible_step(
    lp: &MixedLp,
    aset: &ActiveSet,
    p: &[Rational],
) -> Result<StepResult, Error> {
    if !is_feasible_direction(lp, aset, p)? {
        return Err(Error::NotFeasibleDirection);
    }
    let mut sigma: Option<Rational> = None;
    let mut blocking = Vec::new();
    for &i in &aset.inactive_ineq {
        let slope = dot(lp.row(i), p);
        if !slope.is_negative() {
            continue;
        }
        let step = -lp.residual(&aset.at, i) / slope;
        match &sigma {
            Some(best) if &step > best => {}
            Some(best) if &step == best => blocking.push(i),
            _ => {
                sigma = Some(step);
                blocking = vec![i];
            }
        }
    }
    Ok(StepResult { sigma, blocking })
}

/// Result of checking the equality block for redundancy.
#[derive(Clone, Debug)]
pub enum EqualityReduction {
    /// Equality rows are independent (possibly after dropping consistent
    /// duplicates); `dropped` lists removed 1-based equality indices.
    Consistent { lp: MixedLp, dropped: Vec<usize> },
    /// The equalities are contradictory. `combination` is a vector y over the
    /// original equality rows with yᵀA_E = 0 and yᵀb_E > 0.
    Inconsistent { combination: Vector },
}

/// Drops dependent-but-consistent equality rows; detects contradictions.
///
/// The solver requires rank(A_E) = m_E; rather than fail on redundant input,
/// consistent duplicates are removed (a diagnostic decision surfaced through
/// the `dropped` list) and contradictions become an exact infeasibility
/// witness.
pub fn reduce_equalities(lp: &MixedLp) -> EqualityReduction {
    let m_eq = lp.m_eq();
    if m_eq == 0 {
        return EqualityReduction::Consistent {
            lp: lp.clone(),
            dropped: Vec::new(),
        };
    }
    let mut kept: Vec<usize> = Vec::new(); // 1-based equality indices
    let mut dropped = Vec::new();
    for i in 1..=m_eq {
        let mut rows: Vec<&[Rational]> = kept.iter().map(|&k| lp.row(k)).collect();
        let before = Matrix::from_row_refs(lp.n(), &rows).rank();
        rows.push(lp.row(i));
        let after = Matrix::from_row_refs(lp.n(), &rows).rank();
        if after > before {
            kept.push(i);
            continue;
        }
        // Row i is a combination of the kept rows: find y with K^T y = a_i.
        let k_rows: Vec<&[Rational]> = kept.iter().map(|&k| lp.row(k)).collect();
        let k_mat = Matrix::from_row_refs(lp.n(), &k_rows);
        let y = solve_consistent(&k_mat.transpose(), lp.row(i));
        let implied_rhs = dot(
            &y,
            &kept.iter().map(|&k| lp.rhs(k).clone()).collect::<Vec<_>>(),
        );
        if &implied_rhs == lp.rhs(i) {
            dropped.push(i);
        } else {
            // y on kept rows, -1 on row i: combination annihilates A_E with
            // nonzero rhs product; orient it positive.
            let mut combo = vec![Rational::zero(); m_eq];
            for (pos, &k) in kept.iter().enumerate() {
                combo[k - 1] = y[pos].clone();
            }
            combo[i - 1] = Rational::from_int(-1);
            if (implied_rhs - lp.rhs(i)).is_negative() {
                combo = combo.iter().map(|v| -v).collect();
            }
            return EqualityReduction::Inconsistent { combination: combo };
        }
    }
    if dropped.is_empty() {
        return EqualityReduction::Consistent {
            lp: lp.clone(),
            dropped,
        };
    }
    let rows: Vec<Vec<Rational>> = kept.iter().map(|&k| lp.row(k).to_vec()).collect();
    let b: Vector = kept.iter().map(|&k| lp.rhs(k).clone()).collect();
    let reduced = MixedLp::new(
        Matrix::from_rows(rows),
        b,
        lp.a_ineq().clone(),
        lp.b_ineq().to_vec(),
        lp.cost().to_vec(),
    )
    .expect("reduced dimensions are consistent");
    EqualityReduction::Consistent {
        lp: reduced,
        dropped,
    }
}

/// Particular solution of Ax = b with free variables at zero, or `None` when
/// the system is inconsistent.
pub(crate) fn particular_solution(a: &Matrix, b: &[Rational]) -> Option<Vector> {
    let n = a.cols();
    let rows: Vec<Vec<Rational>> = b
        .iter()
        .enumerate()
        .map(|(r, rhs)| {
            let mut row = a.row(r).to_vec();
            row.push(rhs.clone());
            row
        })
        .collect();
    let (red, pivots) = aug_rref(&Matrix::from_rows(rows));
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = red.get(row, n).clone();
    }
    Some(x)
}

/// Solves Mx = rhs known to be consistent (rhs in the column space of M);
/// free variables are set to zero.
fn solve_consistent(m: &Matrix, rhs: &[Rational]) -> Vector {
    particular_solution(m, rhs).expect("inconsistent system passed to solve_consistent")
}

// rref is private to linalg; a tiny local reimplementation keeps the module
// boundaries clean for this one consistent-solve helper.
fn aug_rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows: Vec<Vec<Rational>> = (0..m.rows()).map(|r| m.row(r).to_vec()).collect();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(pr) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, pr);
        let inv = rows[next][col].recip();
        for v in rows[next].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && !row[col].is_zero() {
                let f = row[col].clone();
                for (dst, src) in row.iter_mut().zip(&pivot_row) {
                    *dst = &*dst - &f * src;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    (Matrix::from_rows(rows), pivots)
}

/// Exact segment check used by tests: x + αp stays feasible for α in [0, σ̂].
pub fn point_along(x: &[Rational], alpha: &Rational, p: &[Rational]) -> Vector {
    add_scaled(x, alpha, p)
}
