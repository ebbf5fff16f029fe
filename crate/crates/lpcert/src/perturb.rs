//! The perturbed LP, solved exactly in symbolic ε.
//!
//! Inequality right-hand sides are relaxed to b_i - ε^{k_i} with distinct
//! powers k_i (equalities untouched). In exact lexicographic arithmetic every
//! vertex of the perturbed problem is nondegenerate: an active inequality row
//! dependent on other active rows would force a polynomial identity in ε
//! whose ε^{k_i} coefficient is -1 on one side and 0 on the other. That makes
//! a simple pivoting scheme finite without any anti-cycling rule, and its
//! result un-perturbs into an optimal vertex, optimal working set, and
//! multiplier certificate for the original problem.

use crate::error::Error;
use crate::lex::{lex_dot, LexValue};
use crate::linalg::{dot, Matrix, Vector};
use crate::model::MixedLp;
use crate::rational::Rational;
use crate::vertex::verify_ray;

/// The base LP with symbolically perturbed inequality right-hand sides.
#[derive(Clone, Debug)]
pub struct PerturbedLp {
    base: MixedLp,
    /// order[j] = ε exponent of inequality j+1; a permutation of 1..=m_I.
    order: Vec<usize>,
    /// Perturbed rhs per inequality row: constant b_j, coefficient -1 at ε^{order[j]}.
    rhs_ineq: Vec<LexValue>,
}

/// Builds the perturbed program. `order`, when given, must be a permutation
/// of 1..=m_I assigning an ε power to each inequality; identity by default.
pub fn perturb(lp: &MixedLp, order: Option<&[usize]>) -> Result<PerturbedLp, Error> {
    let m_ineq = lp.m_ineq();
    let order: Vec<usize> = match order {
        None => (1..=m_ineq).collect(),
        Some(o) => {
            let mut seen = vec![false; m_ineq + 1];
            if o.len() != m_ineq
                || o.iter()
                    .any(|&k| k == 0 || k > m_ineq || std::mem::replace(&mut seen[k], true))
            {
                return Err(Error::Dimension(format!(
                    "epsilon order must be a permutation of 1..={m_ineq}"
                )));
            }
            o.to_vec()
        }
    };
    let len = m_ineq + 1;
    let rhs_ineq = lp
        .b_ineq()
        .iter()
        .zip(&order)
        .map(|(b, &k)| {
            let mut v = LexValue::constant(b.clone(), len);
            v = v.add(&LexValue::monomial(Rational::from_int(-1), k, len));
            v
        })
        .collect();
    Ok(PerturbedLp {
        base: lp.clone(),
        order,
        rhs_ineq,
    })
}

impl PerturbedLp {
    pub fn base(&self) -> &MixedLp {
        &self.base
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Coefficient length of every LexValue in this instance: m_I + 1.
    pub fn lex_len(&self) -> usize {
        self.base.m_ineq() + 1
    }

    pub fn rhs_ineq(&self) -> &[LexValue] {
        &self.rhs_ineq
    }

    /// Perturbed rhs of combined constraint `index` as a LexValue.
    pub fn rhs_lex(&self, index: usize) -> LexValue {
        if self.base.is_equality(index) {
            LexValue::constant(self.base.rhs(index).clone(), self.lex_len())
        } else {
            self.rhs_ineq[index - 1 - self.base.m_eq()].clone()
        }
    }

    /// a_i^T x - (perturbed rhs)_i, exactly in lex arithmetic.
    pub fn residual(&self, x: &[LexValue], index: usize) -> LexValue {
        lex_dot(self.base.row(index), x).sub(&self.rhs_lex(index))
    }

    /// The concrete rational LP obtained by substituting a numeric ε.
    /// Display and validation helper; the solver never does this.
    pub fn instantiate(&self, eps: &Rational) -> MixedLp {
        let b_ineq: Vector = self.rhs_ineq.iter().map(|v| v.eval(eps)).collect();
        MixedLp::new(
            self.base.a_eq().clone(),
            self.base.b_eq().to_vec(),
            self.base.a_ineq().clone(),
            b_ineq,
            self.base.cost().to_vec(),
        )
        .expect("instantiation preserves dimensions")
    }
}

/// n constraint indices (equalities first, inequalities ascending) with their
/// stacked rows and original right-hand sides.
#[derive(Clone, Debug, PartialEq)]
pub struct WorkingSet {
    indices: Vec<usize>,
    matrix: Matrix,
    b_w: Vector,
}

impl WorkingSet {
    /// Validated constructor: indices must be distinct, contain every
    /// equality (listed first), be active at `x`, and stack to independent
    /// rows.
    pub fn build(lp: &MixedLp, indices: &[usize], x: &[Rational]) -> Result<Self, Error> {
        let ws = WorkingSet::from_indices(lp, indices)?;
        for &i in &ws.indices {
            if !lp.residual(x, i).is_zero() {
                return Err(Error::NotOptimalVertex(format!(
                    "working constraint {i} is not active at the given point"
                )));
            }
        }
        Ok(ws)
    }

    pub(crate) fn from_indices(lp: &MixedLp, indices: &[usize]) -> Result<Self, Error> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != indices.len() {
            return Err(Error::Dimension(
                "working set indices must be distinct".into(),
            ));
        }
        if sorted.iter().any(|&i| i == 0 || i > lp.m()) {
            return Err(Error::Dimension("working set index out of range".into()));
        }
        if sorted.iter().take_while(|&&i| lp.is_equality(i)).count() < lp.m_eq() {
            return Err(Error::Dimension(
                "working set must contain every equality constraint".into(),
            ));
        }
        let rows: Vec<&[Rational]> = sorted.iter().map(|&i| lp.row(i)).collect();
        let matrix = Matrix::from_row_refs(lp.n(), &rows);
        if matrix.rank() < matrix.rows() {
            return Err(Error::RankDeficient);
        }
        let b_w: Vector = sorted.iter().map(|&i| lp.rhs(i).clone()).collect();
        Ok(WorkingSet {
            indices: sorted,
            matrix,
            b_w,
        })
    }

    /// Swaps the index labels after solving a reindexed (reduced) system; the
    /// replacement must be strictly increasing so rows keep matching labels.
    pub(crate) fn relabel(mut self, indices: Vec<usize>) -> Result<Self, Error> {
        if indices.len() != self.indices.len() || indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::internal(
                "relabel needs a strictly increasing index list of equal length",
            ));
        }
        self.indices = indices;
        Ok(self)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn b_w(&self) -> &[Rational] {
        &self.b_w
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// A nondegenerate optimal vertex of the perturbed problem.
#[derive(Clone, Debug)]
pub struct LexVertex {
    pub working: WorkingSet,
    /// The vertex coordinates as ε-polynomials.
    pub x_eps: Vec<LexValue>,
    /// Unique solution of W^T λ̄ = c; nonnegative on inequality positions.
    pub lambda_bar: Vector,
}

#[derive(Clone, Debug)]
pub enum PerturbedOutcome {
    Vertex(LexVertex),
    /// Certified ray of the original problem: A_E p = 0, A_I p >= 0, c^T p < 0.
    Unbounded {
        ray: Vector,
    },
}

/// Solves the perturbed program exactly from a feasible point of the original
/// LP (which is automatically lex-feasible: every inequality slack only gains
/// +ε^k).
///
/// Two phases, both in exact lex arithmetic. First the descent procedure
/// walks to a lex-vertex, raising the active rank every step. Then, while
/// some working inequality multiplier is negative, the pivot moves along the
/// direction p with W p = e_i and exchanges the unique blocking row into the
/// working set; the objective strictly lex-decreases, so the walk visits each
/// working set at most once and terminates.
pub fn solve_perturbed(plp: &PerturbedLp, start: &[Rational]) -> Result<PerturbedOutcome, Error> {
    let lp = plp.base();
    let n = lp.n();
    if start.len() != n {
        return Err(Error::Dimension(format!(
            "start point has {} coordinates, expected {n}",
            start.len()
        )));
    }
    if lp.a_eq().rank() < lp.m_eq() || lp.combined_matrix().rank() < n {
        return Err(Error::RankDeficient);
    }
    if let Some((index, residual)) = lp.first_violation(start) {
        return Err(Error::NotFeasible { index, residual });
    }

    let len = plp.lex_len();
    let mut x: Vec<LexValue> = start
        .iter()
        .map(|v| LexValue::constant(v.clone(), len))
        .collect();

    // Phase 1: descend to a lex-vertex. Each step raises the active rank, so
    // n steps always suffice.
    let mut steps = 0usize;
    loop {
        let active = active_rows(plp, &x)?;
        let rows: Vec<&[Rational]> = active.iter().map(|&i| lp.row(i)).collect();
        let amat = Matrix::from_row_refs(n, &rows);
        if amat.rank() == n {
            break;
        }
        steps += 1;
        if steps > n {
            return Err(Error::internal(
                "descent failed to reach a lex-vertex within n steps",
            ));
        }
        let p = amat
            .nullspace_vector()
            .ok_or_else(|| Error::internal("rank-deficient active matrix has no nullspace"))?;
        let inactive: Vec<usize> = (lp.m_eq() + 1..=lp.m())
            .filter(|i| !active.contains(i))
            .collect();
        let candidates: Vec<usize> = inactive
            .iter()
            .copied()
            .filter(|&j| !dot(lp.row(j), &p).is_zero())
            .collect();
        if candidates.is_empty() {
            return Err(Error::internal(
                "no inactive constraint crosses the descent direction",
            ));
        }
        let cp = dot(lp.cost(), &p);
        let flip = |v: &Vector| -> Vector { v.iter().map(|a| -a).collect() };
        let direction = if cp.is_zero() {
            if dot(lp.row(candidates[0]), &p).is_negative() {
                p
            } else {
                flip(&p)
            }
        } else {
            let descent = if cp.is_negative() { p } else { flip(&p) };
            if candidates
                .iter()
                .any(|&j| dot(lp.row(j), &descent).is_negative())
            {
                descent
            } else {
                verify_ray(lp, &descent)?;
                return Ok(PerturbedOutcome::Unbounded { ray: descent });
            }
        };
        let (sigma, _blockers) = lex_ratio_step(plp, &x, &inactive, &direction)?
            .ok_or_else(|| Error::internal("descent step must be blocked by construction"))?;
        take_step(&mut x, &sigma, &direction);
    }

    // Phase 2: pivot while a working inequality multiplier is negative.
    let mut pivots = 0u64;
    let mut objective = lex_dot(lp.cost(), &x);
    loop {
        let active = active_rows(plp, &x)?;
        if active.len() != n {
            return Err(Error::internal(format!(
                "lex-vertex must have exactly {n} active rows, found {}",
                active.len()
            )));
        }
        let rows: Vec<&[Rational]> = active.iter().map(|&i| lp.row(i)).collect();
        let wmat = Matrix::from_row_refs(n, &rows);
        let lambda_bar = wmat
            .transpose()
            .solve(lp.cost())
            .map_err(|_| Error::internal("working matrix at a lex-vertex is singular"))?;

        let negative_pos = active
            .iter()
            .enumerate()
            .position(|(pos, &idx)| !lp.is_equality(idx) && lambda_bar[pos].is_negative());
        let Some(pos) = negative_pos else {
            let working = WorkingSet::from_indices(lp, &active)?;
            let lv = LexVertex {
                working,
                x_eps: x,
                lambda_bar,
            };
            check_lex_vertex(plp, &lv)?;
            return Ok(PerturbedOutcome::Vertex(lv));
        };

        // Direction with W p = e_pos: working rows stay active except the
        // leaving one, and c^T p = λ̄_pos < 0.
        let mut e = vec![Rational::zero(); n];
        e[pos] = Rational::one();
        let p = wmat
            .solve(&e)
            .map_err(|_| Error::internal("working matrix at a lex-vertex is singular"))?;
        let inactive: Vec<usize> = (lp.m_eq() + 1..=lp.m())
            .filter(|i| !active.contains(i))
            .collect();
        match lex_ratio_step(plp, &x, &inactive, &p)? {
            None => {
                verify_ray(lp, &p)?;
                return Ok(PerturbedOutcome::Unbounded { ray: p });
            }
            Some((sigma, blockers)) => {
                if blockers.len() != 1 {
                    return Err(Error::internal(
                        "ratio tie at a lex-vertex contradicts perturbed nondegeneracy",
                    ));
                }
                take_step(&mut x, &sigma, &p);
            }
        }

        // Nondegeneracy makes every pivot strictly improving, which is the
        // whole termination argument.
        let next_objective = lex_dot(lp.cost(), &x);
        if next_objective >= objective {
            return Err(Error::internal(
                "pivot failed to lex-decrease the objective",
            ));
        }
        objective = next_objective;

        pivots += 1;
        if pivots > pivot_bound(lp.m(), n) {
            return Err(Error::internal(
                "pivot count exceeded the number of working sets",
            ));
        }
    }
}

/// Ascending combined indices of rows with zero lex residual; errors if any
/// residual is lex-negative (the iterate left the feasible region — a bug).
fn active_rows(plp: &PerturbedLp, x: &[LexValue]) -> Result<Vec<usize>, Error> {
    let lp = plp.base();
    let mut active = Vec::new();
    for i in 1..=lp.m() {
        let res = plp.residual(x, i);
        match (lp.is_equality(i), res.sign()) {
            (_, 0) => active.push(i),
            (true, _) => {
                return Err(Error::internal(format!(
                    "equality row {i} drifted off zero"
                )))
            }
            (false, -1) => {
                return Err(Error::internal(format!(
                    "inequality row {i} became lex-negative"
                )))
            }
            _ => {}
        }
    }
    Ok(active)
}

/// Lex minimum-ratio test over `rows` (inactive inequalities): smallest
/// σ_i = residual_i / (-a_i^T dir) among rows decreasing along `dir`.
#[allow(clippy::type_complexity)]
fn lex_ratio_step(
    plp: &PerturbedLp,
    x: &[LexValue],
    rows: &[usize],
    dir: &[Rational],
) -> Result<Option<(LexValue, Vec<usize>)>, Error> {
    let lp = plp.base();
    let mut best: Option<(LexValue, Vec<usize>)> = None;
    for &i in rows {
        let slope = dot(lp.row(i), dir);
        if !slope.is_negative() {
            continue;
        }
        let sigma = plp.residual(x, i).div_scalar(&-slope);
        match &mut best {
            Some((min, args)) => {
                if sigma < *min {
                    *min = sigma;
                    *args = vec![i];
                } else if sigma == *min {
                    args.push(i);
                }
            }
            None => best = Some((sigma, vec![i])),
        }
    }
    if let Some((sigma, _)) = &best {
        if sigma.sign() != 1 {
            return Err(Error::internal("ratio step must be lex-positive"));
        }
    }
    Ok(best)
}

fn take_step(x: &mut [LexValue], sigma: &LexValue, dir: &[Rational]) {
    for (xi, di) in x.iter_mut().zip(dir) {
        if !di.is_zero() {
            *xi = xi.add(&sigma.mul_scalar(di));
        }
    }
}

fn pivot_bound(m: usize, n: usize) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..n.min(m) {
        acc = acc.saturating_mul((m - i) as u64);
    }
    acc.max(16)
}

/// Re-verifies every LexVertex invariant: working system solved exactly,
/// multiplier signs, and strict lex-positivity of all non-working slacks
/// (the perturbed problem's nondegeneracy).
pub fn check_lex_vertex(plp: &PerturbedLp, lv: &LexVertex) -> Result<(), Error> {
    let lp = plp.base();
    for (pos, &i) in lv.working.indices().iter().enumerate() {
        if !plp.residual(&lv.x_eps, i).is_zero() {
            return Err(Error::internal(format!(
                "working row {i} is not lex-active"
            )));
        }
        if !lp.is_equality(i) && lv.lambda_bar[pos].is_negative() {
            return Err(Error::internal(format!(
                "working inequality {i} has a negative multiplier"
            )));
        }
    }
    let reproduced = lv.working.matrix().transpose().mat_vec(&lv.lambda_bar);
    if reproduced != lp.cost() {
        return Err(Error::internal("W^T λ̄ = c fails at the lex-vertex"));
    }
    for i in 1..=lp.m() {
        if lv.working.indices().contains(&i) {
            continue;
        }
        if plp.residual(&lv.x_eps, i).sign() != 1 {
            return Err(Error::internal(format!(
                "non-working constraint {i} is not strictly lex-positive"
            )));
        }
    }
    Ok(())
}

/// Result of dropping the perturbation: an optimal vertex of the original
/// problem with its working set and full multiplier vector.
#[derive(Clone, Debug)]
pub struct UnperturbResult {
    pub x_star: Vector,
    /// Length-m multiplier: λ̄ scattered onto working indices, zero elsewhere.
    pub lambda_star: Vector,
    pub working: WorkingSet,
}

/// Maps a lex-vertex back to the original problem: x* solves W x = b_W with
/// the unperturbed right-hand side, and λ* is λ̄ padded with zeros. All
/// certificate conditions are re-verified exactly before returning; a failure
/// signals an implementation bug, not bad data.
pub fn unperturb(plp: &PerturbedLp, lv: &LexVertex) -> Result<UnperturbResult, Error> {
    let lp = plp.base();
    let x_star = lv
        .working
        .matrix()
        .solve(lv.working.b_w())
        .map_err(|_| Error::internal("working matrix is singular in unperturb"))?;
    let mut lambda_star = vec![Rational::zero(); lp.m()];
    for (pos, &i) in lv.working.indices().iter().enumerate() {
        lambda_star[i - 1] = lv.lambda_bar[pos].clone();
    }

    if let Some((index, residual)) = lp.first_violation(&x_star) {
        return Err(Error::internal(format!(
            "unperturbed vertex violates constraint {index} by {residual}"
        )));
    }
    let stationarity = (0..lp.n()).all(|j| {
        let col: Rational = (1..=lp.m())
            .map(|i| &lambda_star[i - 1] * &lp.row(i)[j])
            .sum();
        col == lp.cost()[j]
    });
    let signs = (lp.m_eq() + 1..=lp.m()).all(|i| !lambda_star[i - 1].is_negative());
    let complementarity = (1..=lp.m())
        .map(|i| &lambda_star[i - 1] * &lp.residual(&x_star, i))
        .sum::<Rational>()
        .is_zero();
    if !(stationarity && signs && complementarity) {
        return Err(Error::internal(
            "unperturbed certificate fails its optimality conditions",
        ));
    }
    Ok(UnperturbResult {
        x_star,
        lambda_star,
        working: lv.working.clone(),
    })
}
