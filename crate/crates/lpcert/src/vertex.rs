//! Vertex classification, brute-force vertex enumeration, and the
//! descent-to-vertex procedure.
//!
//! Enumeration is the crate's desk-scale oracle: it tries every subset of n
//! constraints containing all equalities, solves the square system, and keeps
//! feasible solutions. Subsets are independent work items, so with the
//! `parallel` feature they are evaluated on a rayon pool; the sequential path
//! stays available for comparison and as the no-rayon fallback.

use itertools::Itertools;

use crate::error::Error;
use crate::linalg::{add_scaled, dot, is_zero_vec, scale_vec, Matrix, Vector};
use crate::model::{active_set, max_feasible_step, reduce_equalities, EqualityReduction, MixedLp};
use crate::rational::Rational;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default cap on the number of enumerated subsets.
pub const DEFAULT_SUBSET_CAP: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    NotVertex,
    Nondegenerate,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    pub kind: VertexKind,
    pub active_rank: usize,
    pub active_count: usize,
}

/// Classifies a feasible point: a vertex has active rank n; nondegenerate
/// with exactly n active constraints, degenerate with more.
pub fn classify_vertex(lp: &MixedLp, x: &[Rational]) -> Result<VertexClass, Error> {
    let aset = active_set(lp, x)?;
    let active_rank = aset.matrix.rank();
    let active_count = aset.active_count();
    let kind = if active_rank < lp.n() {
        VertexKind::NotVertex
    } else if active_count == lp.n() {
        VertexKind::Nondegenerate
    } else {
        VertexKind::Degenerate
    };
    Ok(VertexClass {
        kind,
        active_rank,
        active_count,
    })
}

/// All vertices of the feasible region, exactly, in deterministic
/// (coordinate-lexicographic) order. Empty when rank(A) < n.
///
/// Cost is C(m_I, n - m_E) square solves, guarded by `cap`.
pub fn enumerate_vertices(lp: &MixedLp, cap: u128) -> Result<Vec<Vector>, Error> {
    #[cfg(feature = "parallel")]
    {
        enumerate_vertices_par(lp, cap)
    }
    #[cfg(not(feature = "parallel"))]
    {
        enumerate_vertices_seq(lp, cap)
    }
}

/// Sequential enumeration; always available.
pub fn enumerate_vertices_seq(lp: &MixedLp, cap: u128) -> Result<Vec<Vector>, Error> {
    let Some((lp, combos)) = enumeration_plan(lp, cap)? else {
        return Ok(Vec::new());
    };
    let found: Vec<Vector> = combos
        .into_iter()
        .filter_map(|combo| try_subset(&lp, &combo))
        .collect();
    Ok(dedup_sorted(found))
}

/// Rayon-parallel enumeration over the same deterministic subset list.
#[cfg(feature = "parallel")]
pub fn enumerate_vertices_par(lp: &MixedLp, cap: u128) -> Result<Vec<Vector>, Error> {
    let Some((lp, combos)) = enumeration_plan(lp, cap)? else {
        return Ok(Vec::new());
    };
    let found: Vec<Vector> = combos
        .into_par_iter()
        .filter_map(|combo| try_subset(&lp, &combo))
        .collect();
    Ok(dedup_sorted(found))
}

/// Shared setup: reduce redundant equalities (indices do not surface in the
/// output), check rank and cap, and list the inequality-index combinations.
#[allow(clippy::type_complexity)]
fn enumeration_plan(lp: &MixedLp, cap: u128) -> Result<Option<(MixedLp, Vec<Vec<usize>>)>, Error> {
    let lp = match reduce_equalities(lp) {
        EqualityReduction::Consistent { lp, .. } => lp,
        EqualityReduction::Inconsistent { .. } => return Ok(None),
    };
    let n = lp.n();
    if lp.m_eq() > n || lp.combined_matrix().rank() < n {
        return Ok(None);
    }
    let pick = n - lp.m_eq();
    let needed = binomial(lp.m_ineq() as u128, pick as u128);
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    let combos: Vec<Vec<usize>> = (lp.m_eq() + 1..=lp.m()).combinations(pick).collect();
    Ok(Some((lp, combos)))
}

fn try_subset(lp: &MixedLp, ineq_indices: &[usize]) -> Option<Vector> {
    let mut indices: Vec<usize> = (1..=lp.m_eq()).collect();
    indices.extend_from_slice(ineq_indices);
    let rows: Vec<&[Rational]> = indices.iter().map(|&i| lp.row(i)).collect();
    let mat = Matrix::from_row_refs(lp.n(), &rows);
    let rhs: Vector = indices.iter().map(|&i| lp.rhs(i).clone()).collect();
    let x = mat.solve(&rhs).ok()?;
    lp.is_feasible(&x).then_some(x)
}

fn dedup_sorted(mut found: Vec<Vector>) -> Vec<Vector> {
    found.sort();
    found.dedup();
    found
}

fn binomial(m: u128, k: u128) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(m - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub point: Vector,
    pub active_rank: usize,
}

#[derive(Clone, Debug)]
pub enum DescentEnd {
    /// A vertex with objective value no worse than the start.
    Vertex(Vector),
    /// Feasible ray with A_E p = 0, A_I p >= 0, c^T p < 0.
    Unbounded(Vector),
}

#[derive(Clone, Debug)]
pub struct DescentOutcome {
    pub end: DescentEnd,
    /// (iterate, active rank) per visited point; ranks strictly increase.
    pub trace: Vec<TraceStep>,
}

/// Walks from a feasible point to a vertex without increasing the objective,
/// or exits with a certified unbounded ray. Requires rank(A) = n; terminates
/// in at most n rank-increasing steps.
///
/// Deterministic choices: the nullspace direction comes from
/// [`Matrix::nullspace_vector`]; candidate constraints are scanned in
/// increasing index order; when c^T p = 0 the sign makes the first candidate
/// row decrease, otherwise the sign makes the objective decrease.
pub fn descend_to_vertex(lp: &MixedLp, x0: &[Rational]) -> Result<DescentOutcome, Error> {
    if lp.combined_matrix().rank() < lp.n() {
        return Err(Error::RankDeficient);
    }
    let mut x = x0.to_vec();
    let mut trace = Vec::new();
    for _ in 0..=lp.n() {
        let aset = active_set(lp, &x)?;
        let rank = aset.matrix.rank();
        trace.push(TraceStep {
            point: x.clone(),
            active_rank: rank,
        });
        if rank == lp.n() {
            return Ok(DescentOutcome {
                end: DescentEnd::Vertex(x),
                trace,
            });
        }

        let p = aset
            .matrix
            .nullspace_vector()
            .ok_or_else(|| Error::internal("active matrix of deficient rank has no nullspace"))?;
        // Inactive inequalities crossed by p; nonempty since rank(A) = n.
        let candidates: Vec<usize> = aset
            .inactive_ineq
            .iter()
            .copied()
            .filter(|&j| !dot(lp.row(j), &p).is_zero())
            .collect();
        if candidates.is_empty() {
            return Err(Error::internal(
                "no inactive constraint crosses the nullspace direction",
            ));
        }

        let cp = dot(lp.cost(), &p);
        let direction = if cp.is_zero() {
            let j = candidates[0];
            if dot(lp.row(j), &p).is_negative() {
                p
            } else {
                scale_vec(&Rational::from_int(-1), &p)
            }
        } else {
            let descent = if cp.is_negative() {
                p
            } else {
                scale_vec(&Rational::from_int(-1), &p)
            };
            if candidates
                .iter()
                .any(|&j| dot(lp.row(j), &descent).is_negative())
            {
                descent
            } else {
                // Every crossed constraint increases along the descent
                // direction: the objective is unbounded along it.
                verify_ray(lp, &descent)?;
                return Ok(DescentOutcome {
                    end: DescentEnd::Unbounded(descent),
                    trace,
                });
            }
        };

        let step = max_feasible_step(lp, &aset, &direction)?;
        let sigma = step
            .sigma
            .ok_or_else(|| Error::internal("descent step must be blocked by construction"))?;
        x = add_scaled(&x, &sigma, &direction);
    }
    Err(Error::internal(
        "descent failed to reach a vertex within n steps",
    ))
}

/// Exact check of an unbounded ray.
pub(crate) fn verify_ray(lp: &MixedLp, p: &[Rational]) -> Result<(), Error> {
    let ok = !is_zero_vec(p)
        && (1..=lp.m_eq()).all(|i| dot(lp.row(i), p).is_zero())
        && (lp.m_eq() + 1..=lp.m()).all(|i| !dot(lp.row(i), p).is_negative())
        && dot(lp.cost(), p).is_negative();
    if ok {
        Ok(())
    } else {
        Err(Error::internal("claimed unbounded ray fails verification"))
    }
}
