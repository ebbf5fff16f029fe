//! Farkas oracle: given A and c, exactly one of these holds, and the oracle
//! returns its witness.
//!
//! 1. some y >= 0 has A^T y = c;
//! 2. some p has Ap >= 0 and c^T p < 0.
//!
//! The decision is made constructively through an auxiliary box program
//! min c^T p over Ap >= 0, -1 <= p_i <= 1: feasible at p = 0, bounded, and of
//! full rank regardless of A, so the main solver always certifies it. A zero
//! optimum yields case 1 from the multiplier, a negative one yields case 2
//! from the minimizer.

use crate::certify::{solve_with, SolveOptions, SolveOutcome};
use crate::error::Error;
use crate::linalg::{dot, Matrix, Vector};
use crate::model::MixedLp;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub enum FarkasOutcome {
    /// c is a nonnegative combination of the rows of A: A^T y = c, y >= 0.
    Combination { y: Vector },
    /// A separating direction: Ap >= 0 and c^T p < 0.
    Separation { p: Vector },
}

/// The auxiliary program: rows of A with rhs 0, then I_n and -I_n with
/// rhs -1 (the box -1 <= p_i <= 1).
pub fn box_lp(a: &Matrix, c: &[Rational]) -> Result<MixedLp, Error> {
    let n = c.len();
    if a.cols() != n && a.rows() > 0 {
        return Err(Error::Dimension(format!(
            "matrix has {} columns, vector has {n}",
            a.cols()
        )));
    }
    let mut rows: Vec<Vector> = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
    let mut rhs = vec![Rational::zero(); a.rows()];
    for sign in [1i64, -1] {
        for j in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[j] = Rational::from_int(sign);
            rows.push(row);
            rhs.push(Rational::from_int(-1));
        }
    }
    MixedLp::all_inequality(Matrix::from_rows(rows), rhs, c.to_vec())
}

pub fn farkas(a: &Matrix, c: &[Rational]) -> Result<FarkasOutcome, Error> {
    let lp = box_lp(a, c)?;
    let n = c.len();
    let m = a.rows();
    let opts = SolveOptions {
        start: Some(vec![Rational::zero(); n]),
        ..Default::default()
    };
    let sol = match solve_with(&lp, &opts)? {
        SolveOutcome::Optimal(sol) => sol,
        other => {
            return Err(Error::internal(format!(
                "box program must be solvable, got {other:?}"
            )))
        }
    };
    let value = lp.objective(&sol.x_star);
    if value.is_positive() {
        return Err(Error::internal(
            "box program value above zero despite feasible p = 0",
        ));
    }
    if value.is_zero() {
        let lambda = &sol.certificate.lambda;
        // A zero optimum forces the box multipliers λ2, λ3 to vanish.
        if lambda[m..].iter().any(|v| !v.is_zero()) {
            return Err(Error::internal(
                "box rows carry multipliers at a zero optimum",
            ));
        }
        let y: Vector = lambda[..m].to_vec();
        let combination_ok = y.iter().all(|v| !v.is_negative())
            && (0..n).all(|j| (0..m).map(|i| &y[i] * &a.row(i)[j]).sum::<Rational>() == c[j]);
        if !combination_ok {
            return Err(Error::internal("combination witness fails verification"));
        }
        Ok(FarkasOutcome::Combination { y })
    } else {
        let p = sol.x_star;
        let separation_ok =
            (0..m).all(|i| !dot(a.row(i), &p).is_negative()) && dot(c, &p).is_negative();
        if !separation_ok {
            return Err(Error::internal("separation witness fails verification"));
        }
        Ok(FarkasOutcome::Separation { p })
    }
}
