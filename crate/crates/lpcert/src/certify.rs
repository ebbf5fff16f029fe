//! Certificate logic and the top-level solve.
//!
//! A multiplier λ certifies optimality of a feasible x* through three exact
//! conditions: stationarity A^T λ = c, sign λ_I >= 0, and complementarity
//! λ^T(Ax* - b) = 0. Everything in this module either produces such
//! certificates (via the perturbed solve), checks them, or transfers them
//! between optimal points. Outcomes carry their own exactly-verifiable
//! witnesses; there are no tolerances.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Error;
use crate::linalg::{dot, scaled_row_l1, Matrix, Vector};
use crate::model::{active_set, reduce_equalities, EqualityReduction, MixedLp};
use crate::perturb::{perturb, solve_perturbed, unperturb, PerturbedOutcome, WorkingSet};
use crate::rational::Rational;
use crate::vertex::{
    classify_vertex, enumerate_vertices, verify_ray, VertexKind, DEFAULT_SUBSET_CAP,
};

/// The three certificate conditions, evaluated exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertChecks {
    pub stationarity: bool,
    pub sign: bool,
    pub complementarity: bool,
}

impl CertChecks {
    pub fn all(&self) -> bool {
        self.stationarity && self.sign && self.complementarity
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub lambda: Vector,
    pub checks: CertChecks,
}

impl Certificate {
    /// λ^T b, recomputed from the multiplier (never stored).
    pub fn dual_value(&self, lp: &MixedLp) -> Rational {
        dot(&self.lambda, &lp.combined_rhs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Optimal,
    NotOptimal,
}

/// Full report of a certificate check at a point.
#[derive(Clone, Debug)]
pub struct CertReport {
    pub certificate: Certificate,
    pub feasible: bool,
    pub verdict: Verdict,
}

fn checks_at(lp: &MixedLp, x: &[Rational], lambda: &[Rational]) -> CertChecks {
    let (stationarity, sign) = dual_feasibility(lp, lambda);
    let complementarity = (1..=lp.m())
        .map(|i| &lambda[i - 1] * &lp.residual(x, i))
        .sum::<Rational>()
        .is_zero();
    CertChecks {
        stationarity,
        sign,
        complementarity,
    }
}

/// (A^T λ = c, λ_I >= 0), both exact.
fn dual_feasibility(lp: &MixedLp, lambda: &[Rational]) -> (bool, bool) {
    let stationarity = (0..lp.n()).all(|j| {
        let col: Rational = (1..=lp.m()).map(|i| &lambda[i - 1] * &lp.row(i)[j]).sum();
        col == lp.cost()[j]
    });
    let sign = (lp.m_eq() + 1..=lp.m()).all(|i| !lambda[i - 1].is_negative());
    (stationarity, sign)
}

fn dims_ok(lp: &MixedLp, x: &[Rational], lambda: &[Rational]) -> Result<(), Error> {
    if x.len() != lp.n() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            lp.n()
        )));
    }
    if lambda.len() != lp.m() {
        return Err(Error::Dimension(format!(
            "multiplier has {} components, expected {}",
            lambda.len(),
            lp.m()
        )));
    }
    Ok(())
}

/// The weak-duality lower bound λ^T b, after checking dual feasibility.
pub fn dual_bound(lp: &MixedLp, lambda: &[Rational]) -> Result<Rational, Error> {
    if lambda.len() != lp.m() {
        return Err(Error::Dimension(format!(
            "multiplier has {} components, expected {}",
            lambda.len(),
            lp.m()
        )));
    }
    let (stationarity, sign) = dual_feasibility(lp, lambda);
    if !stationarity {
        return Err(Error::NotDualFeasible("stationarity"));
    }
    if !sign {
        return Err(Error::NotDualFeasible("sign"));
    }
    Ok(dot(lambda, &lp.combined_rhs()))
}

/// Evaluates all certificate conditions at (x, λ). Failures are data, not
/// errors: the verdict is Optimal iff x is feasible and every check holds.
pub fn check_certificate(
    lp: &MixedLp,
    x: &[Rational],
    lambda: &[Rational],
) -> Result<CertReport, Error> {
    dims_ok(lp, x, lambda)?;
    let feasible = lp.is_feasible(x);
    let checks = checks_at(lp, x, lambda);
    let verdict = if feasible && checks.all() {
        Verdict::Optimal
    } else {
        Verdict::NotOptimal
    };
    Ok(CertReport {
        certificate: Certificate {
            lambda: lambda.to_vec(),
            checks,
        },
        feasible,
        verdict,
    })
}

/// Complementarity transfer: given a certificate whose stationarity and sign
/// conditions hold (and whose dual value is the optimal value), any feasible
/// point is optimal iff λ^T(Ax - b) = 0 there.
pub fn transfer_check(
    lp: &MixedLp,
    certificate: &Certificate,
    x_other: &[Rational],
) -> Result<Verdict, Error> {
    dims_ok(lp, x_other, &certificate.lambda)?;
    let checks = checks_at(lp, x_other, &certificate.lambda);
    if !checks.stationarity {
        return Err(Error::NotDualFeasible("stationarity"));
    }
    if !checks.sign {
        return Err(Error::NotDualFeasible("sign"));
    }
    if let Some((index, residual)) = lp.first_violation(x_other) {
        return Err(Error::NotFeasible { index, residual });
    }
    Ok(if checks.complementarity {
        Verdict::Optimal
    } else {
        Verdict::NotOptimal
    })
}

#[derive(Clone, Debug)]
pub enum VertexTestOutcome {
    /// The padded m-vector multiplier certifying optimality.
    Optimal { lambda: Vector },
    /// A feasible descent direction: the vertex is not optimal.
    Descent { direction: Vector },
}

/// Optimality test at a nondegenerate vertex: solve Ā^T λ̄ = c; nonnegative
/// active-inequality components certify optimality, otherwise the coordinate
/// direction through the lowest negative position is a feasible descent
/// direction.
pub fn nondegenerate_vertex_test(lp: &MixedLp, x: &[Rational]) -> Result<VertexTestOutcome, Error> {
    let class = classify_vertex(lp, x)?;
    if class.kind != VertexKind::Nondegenerate {
        return Err(Error::NotNondegenerate);
    }
    let aset = active_set(lp, x)?;
    let lambda_bar = aset
        .matrix
        .transpose()
        .solve(lp.cost())
        .map_err(|_| Error::internal("nondegenerate active matrix must be nonsingular"))?;
    let neg = aset
        .row_indices
        .iter()
        .enumerate()
        .position(|(pos, &idx)| !lp.is_equality(idx) && lambda_bar[pos].is_negative());
    match neg {
        None => {
            let mut lambda = vec![Rational::zero(); lp.m()];
            for (pos, &idx) in aset.row_indices.iter().enumerate() {
                lambda[idx - 1] = lambda_bar[pos].clone();
            }
            Ok(VertexTestOutcome::Optimal { lambda })
        }
        Some(pos) => {
            let mut e = vec![Rational::zero(); lp.n()];
            e[pos] = Rational::one();
            let direction = aset
                .matrix
                .solve(&e)
                .map_err(|_| Error::internal("nondegenerate active matrix must be nonsingular"))?;
            Ok(VertexTestOutcome::Descent { direction })
        }
    }
}

/// Builds an optimal working set at a given optimal vertex from any valid
/// certificate: the equality rows plus every inequality with a positive
/// multiplier, completed to rank n by the lowest-index active rows that
/// raise the rank.
pub fn optimal_working_set_at(
    lp: &MixedLp,
    x_star: &[Rational],
    certificate: &Certificate,
) -> Result<WorkingSet, Error> {
    dims_ok(lp, x_star, &certificate.lambda)?;
    let checks = checks_at(lp, x_star, &certificate.lambda);
    if !checks.stationarity {
        return Err(Error::NotDualFeasible("stationarity"));
    }
    if !checks.sign {
        return Err(Error::NotDualFeasible("sign"));
    }
    let aset = active_set(lp, x_star)?;
    if !checks.complementarity {
        return Err(Error::NotOptimalVertex(
            "complementarity fails: the certificate does not certify this point".into(),
        ));
    }
    if aset.matrix.rank() < lp.n() {
        return Err(Error::RankDeficient);
    }

    let mut selected: Vec<usize> = aset
        .row_indices
        .iter()
        .copied()
        .filter(|&i| lp.is_equality(i) || certificate.lambda[i - 1].is_positive())
        .collect();
    let mut rank = rank_of(lp, &selected);
    for &i in &aset.row_indices {
        if rank == lp.n() {
            break;
        }
        if selected.contains(&i) {
            continue;
        }
        let mut with = selected.clone();
        with.push(i);
        let r = rank_of(lp, &with);
        if r > rank {
            selected = with;
            rank = r;
        }
    }
    if rank < lp.n() {
        return Err(Error::RankDeficient);
    }
    let working = WorkingSet::build(lp, &selected, x_star)?;
    // W^T λ_W = c must hold with the restricted multiplier: λ is zero outside
    // the working set by complementarity and sign.
    let lambda_w: Vector = working
        .indices()
        .iter()
        .map(|&i| certificate.lambda[i - 1].clone())
        .collect();
    if working.matrix().transpose().mat_vec(&lambda_w) != lp.cost() {
        return Err(Error::internal(
            "restricted multiplier is incompatible with the working set",
        ));
    }
    Ok(working)
}

fn rank_of(lp: &MixedLp, indices: &[usize]) -> usize {
    let rows: Vec<&[Rational]> = indices.iter().map(|&i| lp.row(i)).collect();
    Matrix::from_row_refs(lp.n(), &rows).rank()
}

/// Exactly-verifiable evidence that no feasible point exists.
#[derive(Clone, Debug)]
pub enum InfeasibleWitness {
    /// y over the equality rows with y^T A_E = 0 and y^T b_E > 0.
    Equalities { combination: Vector },
    /// Optimal phase-1 data: the minimum violation s* is positive. `x_s` is
    /// the optimal (x, s) of the phase-1 program built with box radius
    /// `box_bound`; `lambda` is its optimal multiplier.
    Phase1 {
        box_bound: Rational,
        s_star: Rational,
        x_s: Vector,
        lambda: Vector,
    },
}

impl InfeasibleWitness {
    /// Re-derives everything and checks the witness exactly against `lp`.
    pub fn verify(&self, lp: &MixedLp) -> bool {
        match self {
            InfeasibleWitness::Equalities { combination } => {
                if combination.len() != lp.m_eq() {
                    return false;
                }
                let zeroed = (0..lp.n()).all(|j| {
                    (1..=lp.m_eq())
                        .map(|i| &combination[i - 1] * &lp.row(i)[j])
                        .sum::<Rational>()
                        .is_zero()
                });
                let rhs: Rational = (1..=lp.m_eq())
                    .map(|i| &combination[i - 1] * lp.rhs(i))
                    .sum();
                zeroed && rhs.is_positive()
            }
            InfeasibleWitness::Phase1 {
                box_bound,
                s_star,
                x_s,
                lambda,
            } => {
                let rlp = match reduce_equalities(lp) {
                    EqualityReduction::Consistent { lp, .. } => lp,
                    EqualityReduction::Inconsistent { .. } => return false,
                };
                if *box_bound < coordinate_bound(&rlp) || !s_star.is_positive() {
                    return false;
                }
                let phase1 = build_phase1(&rlp, box_bound);
                if x_s.len() != phase1.n() || x_s[phase1.n() - 1] != *s_star {
                    return false;
                }
                matches!(
                    check_certificate(&phase1, x_s, lambda),
                    Ok(report) if report.verdict == Verdict::Optimal
                )
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            InfeasibleWitness::Equalities { .. } => {
                "the equality rows admit a combination y with y^T A_E = 0 and y^T b_E > 0".into()
            }
            InfeasibleWitness::Phase1 { s_star, .. } => {
                format!("every point violates some inequality by at least s* = {s_star}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum FeasibilityOutcome {
    Feasible(Vector),
    Infeasible(InfeasibleWitness),
}

/// Box radius covering a basic point of every nonempty face: one plus the
/// product over all rows of the l1 norm of the integer-scaled row (with its
/// rhs). Coordinates of such points are ratios of integer minors with
/// nonzero denominator, hence bounded by the product.
pub fn coordinate_bound(lp: &MixedLp) -> Rational {
    let mut prod = BigInt::one();
    for i in 1..=lp.m() {
        let mut row = lp.row(i).to_vec();
        row.push(lp.rhs(i).clone());
        prod *= scaled_row_l1(&row);
    }
    Rational::from_bigint(prod) + Rational::one()
}

/// Phase-1 program over (x, s): minimize s subject to A_E x = b_E,
/// A_I x + s·1 >= b_I, s >= 0, and |x_j| <= box_bound. Feasible by
/// construction, bounded below by 0, and full rank thanks to the box and the
/// s >= 0 row.
fn build_phase1(rlp: &MixedLp, box_bound: &Rational) -> MixedLp {
    let n = rlp.n();
    let mut eq_rows: Vec<Vector> = Vec::with_capacity(rlp.m_eq());
    for i in 1..=rlp.m_eq() {
        let mut row = rlp.row(i).to_vec();
        row.push(Rational::zero());
        eq_rows.push(row);
    }
    let mut ge_rows: Vec<Vector> = Vec::new();
    let mut ge_rhs: Vector = Vec::new();
    for i in rlp.m_eq() + 1..=rlp.m() {
        let mut row = rlp.row(i).to_vec();
        row.push(Rational::one());
        ge_rows.push(row);
        ge_rhs.push(rlp.rhs(i).clone());
    }
    let mut s_row = vec![Rational::zero(); n + 1];
    s_row[n] = Rational::one();
    ge_rows.push(s_row);
    ge_rhs.push(Rational::zero());
    for sign in [1i64, -1] {
        for j in 0..n {
            let mut row = vec![Rational::zero(); n + 1];
            row[j] = Rational::from_int(sign);
            ge_rows.push(row);
            ge_rhs.push(-box_bound.clone());
        }
    }
    let mut cost = vec![Rational::zero(); n + 1];
    cost[n] = Rational::one();
    MixedLp::new(
        if rlp.m_eq() == 0 {
            Matrix::zeros(0, n + 1)
        } else {
            Matrix::from_rows(eq_rows)
        },
        rlp.b_eq().to_vec(),
        Matrix::from_rows(ge_rows),
        ge_rhs,
        cost,
    )
    .expect("phase-1 dimensions are consistent")
}

/// Particular solution of the (independent) equality system, free variables
/// at zero; the zero vector when there are no equalities.
fn equality_point(rlp: &MixedLp) -> Result<Vector, Error> {
    if rlp.m_eq() == 0 {
        return Ok(vec![Rational::zero(); rlp.n()]);
    }
    crate::model::particular_solution(rlp.a_eq(), rlp.b_eq())
        .ok_or_else(|| Error::internal("reduced equality system must be consistent"))
}

/// Finds a feasible point or proves that none exists.
pub fn find_feasible_point(lp: &MixedLp) -> Result<FeasibilityOutcome, Error> {
    match reduce_equalities(lp) {
        EqualityReduction::Inconsistent { combination } => Ok(FeasibilityOutcome::Infeasible(
            InfeasibleWitness::Equalities { combination },
        )),
        EqualityReduction::Consistent { lp: rlp, .. } => find_feasible_reduced(&rlp),
    }
}

fn find_feasible_reduced(rlp: &MixedLp) -> Result<FeasibilityOutcome, Error> {
    let x_eq = equality_point(rlp)?;
    if rlp.is_feasible(&x_eq) {
        return Ok(FeasibilityOutcome::Feasible(x_eq));
    }
    let mut box_bound = coordinate_bound(rlp);
    let coord_max = x_eq
        .iter()
        .map(Rational::abs)
        .max()
        .unwrap_or_else(Rational::zero);
    if box_bound <= coord_max {
        box_bound = coord_max + Rational::one();
    }
    let phase1 = build_phase1(rlp, &box_bound);

    let worst = (rlp.m_eq() + 1..=rlp.m())
        .map(|i| -rlp.residual(&x_eq, i))
        .max()
        .unwrap_or_else(Rational::zero);
    let s0 = if worst.is_positive() {
        worst + Rational::one()
    } else {
        Rational::one()
    };
    let mut start = x_eq;
    start.push(s0);

    let plp = perturb(&phase1, None)?;
    let up = match solve_perturbed(&plp, &start)? {
        PerturbedOutcome::Vertex(lv) => unperturb(&plp, &lv)?,
        PerturbedOutcome::Unbounded { .. } => {
            return Err(Error::internal(
                "phase-1 objective is bounded below by zero",
            ))
        }
    };
    let n = rlp.n();
    let s_star = up.x_star[n].clone();
    if s_star.is_zero() {
        let x: Vector = up.x_star[..n].to_vec();
        if let Some((index, residual)) = rlp.first_violation(&x) {
            return Err(Error::internal(format!(
                "phase-1 returned s*=0 but constraint {index} is violated by {residual}"
            )));
        }
        Ok(FeasibilityOutcome::Feasible(x))
    } else {
        Ok(FeasibilityOutcome::Infeasible(InfeasibleWitness::Phase1 {
            box_bound,
            s_star,
            x_s: up.x_star,
            lambda: up.lambda_star,
        }))
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Permutation of 1..=m_I assigning ε powers; identity by default.
    pub epsilon_order: Option<Vec<usize>>,
    /// Feasible starting point; skips the feasibility phase.
    pub start: Option<Vector>,
    /// Cross-check the outcome against brute-force vertex enumeration.
    pub oracle_check: bool,
    /// Subset cap for enumeration in oracle-check mode.
    pub subset_cap: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            epsilon_order: None,
            start: None,
            oracle_check: false,
            subset_cap: DEFAULT_SUBSET_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OptimalSolution {
    pub x_star: Vector,
    pub certificate: Certificate,
    pub working: WorkingSet,
    /// Set when c = 0: any feasible point is optimal with λ = 0.
    pub degenerate_objective: bool,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Optimal(OptimalSolution),
    Unbounded { ray: Vector },
    Infeasible { witness: InfeasibleWitness },
}

pub fn solve(lp: &MixedLp) -> Result<SolveOutcome, Error> {
    solve_with(lp, &SolveOptions::default())
}

/// Full pipeline: reduce redundant equalities, find a feasible point (phase
/// 1), then solve the symbolically perturbed program and un-perturb into a
/// certificate. Rank-deficient instances are boxed first (see below). Every
/// outcome is re-verified exactly against the original data before being
/// returned.
pub fn solve_with(lp: &MixedLp, opts: &SolveOptions) -> Result<SolveOutcome, Error> {
    let (rlp, kept_eq) = match reduce_equalities(lp) {
        EqualityReduction::Inconsistent { combination } => {
            return Ok(SolveOutcome::Infeasible {
                witness: InfeasibleWitness::Equalities { combination },
            })
        }
        EqualityReduction::Consistent { lp: rlp, dropped } => {
            let kept: Vec<usize> = (1..=lp.m_eq()).filter(|i| !dropped.contains(i)).collect();
            (rlp, kept)
        }
    };
    // Maps a reduced combined index to the original combined index.
    let to_original = |i: usize| -> usize {
        if i <= kept_eq.len() {
            kept_eq[i - 1]
        } else {
            lp.m_eq() + (i - kept_eq.len())
        }
    };

    let x0 = match &opts.start {
        Some(x) => {
            if x.len() != lp.n() {
                return Err(Error::Dimension(format!(
                    "start point has {} coordinates, expected {}",
                    x.len(),
                    lp.n()
                )));
            }
            if let Some((index, residual)) = lp.first_violation(x) {
                return Err(Error::NotFeasible { index, residual });
            }
            x.clone()
        }
        None => match find_feasible_reduced(&rlp)? {
            FeasibilityOutcome::Infeasible(witness) => {
                return Ok(SolveOutcome::Infeasible { witness })
            }
            FeasibilityOutcome::Feasible(x) => x,
        },
    };

    if lp.cost().iter().all(Rational::is_zero) {
        // Degenerate objective: every feasible point is optimal with λ = 0.
        let reduced_eq: Vec<usize> = (1..=rlp.m_eq()).collect();
        let working = WorkingSet::build(&rlp, &reduced_eq, &x0)?.relabel(kept_eq.clone())?;
        let lambda = vec![Rational::zero(); lp.m()];
        let sol = finalize_optimal(lp, x0, lambda, working, true)?;
        return Ok(SolveOutcome::Optimal(sol));
    }

    let n = rlp.n();
    let outcome = if rlp.combined_matrix().rank() == n {
        let inner = solve_full_rank(&rlp, &x0, opts.epsilon_order.as_deref())?;
        match inner {
            InnerOutcome::Unbounded(ray) => {
                verify_ray(lp, &ray)?;
                SolveOutcome::Unbounded { ray }
            }
            InnerOutcome::Optimal {
                x_star,
                lambda,
                working_indices,
            } => {
                let lambda_orig = scatter(lp.m(), &lambda, &to_original);
                let indices_orig: Vec<usize> =
                    working_indices.iter().map(|&i| to_original(i)).collect();
                let working =
                    WorkingSet::build(&rlp, &working_indices, &x_star)?.relabel(indices_orig)?;
                SolveOutcome::Optimal(finalize_optimal(lp, x_star, lambda_orig, working, false)?)
            }
        }
    } else {
        solve_rank_deficient(lp, &rlp, &x0, opts, &to_original)?
    };

    if opts.oracle_check {
        oracle_cross_check(lp, &outcome, opts.subset_cap)?;
    }
    Ok(outcome)
}

enum InnerOutcome {
    Optimal {
        x_star: Vector,
        lambda: Vector,
        working_indices: Vec<usize>,
    },
    Unbounded(Vector),
}

fn solve_full_rank(
    rlp: &MixedLp,
    x0: &[Rational],
    order: Option<&[usize]>,
) -> Result<InnerOutcome, Error> {
    let plp = perturb(rlp, order)?;
    match solve_perturbed(&plp, x0)? {
        PerturbedOutcome::Unbounded { ray } => Ok(InnerOutcome::Unbounded(ray)),
        PerturbedOutcome::Vertex(lv) => {
            let up = unperturb(&plp, &lv)?;
            Ok(InnerOutcome::Optimal {
                x_star: up.x_star,
                lambda: up.lambda_star,
                working_indices: up.working.indices().to_vec(),
            })
        }
    }
}

fn scatter(m: usize, reduced: &[Rational], to_original: &impl Fn(usize) -> usize) -> Vector {
    let mut out = vec![Rational::zero(); m];
    for (i, v) in reduced.iter().enumerate() {
        out[to_original(i + 1) - 1] = v.clone();
    }
    out
}

/// rank(A) < n: box the variables with the Hadamard-based radius to force
/// rank n, solve, and translate back. A certificate whose box multipliers are
/// all zero is a certificate for the original problem. A positive box
/// multiplier means no bounded optimum inside a box that provably contains
/// one if any exists — the instance is unbounded, certified by a nullspace
/// ray when one exists, otherwise through the recession-cone program.
fn solve_rank_deficient(
    lp: &MixedLp,
    rlp: &MixedLp,
    x0: &[Rational],
    opts: &SolveOptions,
    to_original: &impl Fn(usize) -> usize,
) -> Result<SolveOutcome, Error> {
    // Cheap detection first: a nullspace direction of A with nonzero cost
    // keeps every constraint value unchanged and improves forever.
    for basis_vec in rlp.combined_matrix().nullspace_basis() {
        let cp = dot(rlp.cost(), &basis_vec);
        if !cp.is_zero() {
            let ray = if cp.is_negative() {
                basis_vec
            } else {
                basis_vec.iter().map(|v| -v).collect()
            };
            verify_ray(lp, &ray)?;
            return Ok(SolveOutcome::Unbounded { ray });
        }
    }

    let box_bound = coordinate_bound(rlp);
    match solve_boxed_once(rlp, x0, &box_bound, opts)? {
        BoxedOutcome::Clean {
            x_star,
            lambda,
            working_indices,
        } => {
            let lambda_orig = scatter(lp.m(), &lambda, to_original);
            let indices_orig: Vec<usize> =
                working_indices.iter().map(|&i| to_original(i)).collect();
            let working =
                WorkingSet::build(rlp, &working_indices, &x_star)?.relabel(indices_orig)?;
            return Ok(SolveOutcome::Optimal(finalize_optimal(
                lp,
                x_star,
                lambda_orig,
                working,
                false,
            )?));
        }
        BoxedOutcome::BoxBound => {}
    }

    // A box row carries a positive multiplier: decide unboundedness through
    // the recession cone, min c^T p over A_E p = 0, A_I p >= 0, |p_i| <= 1.
    let rec = recession_lp(rlp);
    let zero = vec![Rational::zero(); rlp.n()];
    match solve_full_rank(&rec, &zero, None)? {
        InnerOutcome::Unbounded(_) => {
            return Err(Error::internal("recession program is bounded by its box"))
        }
        InnerOutcome::Optimal { x_star: p_star, .. } => {
            if rec.objective(&p_star).is_negative() {
                verify_ray(lp, &p_star)?;
                return Ok(SolveOutcome::Unbounded { ray: p_star });
            }
        }
    }

    // Bounded after all: enlarge the box once and resolve.
    let enlarged = Rational::from_int(2) * &box_bound + Rational::one();
    match solve_boxed_once(rlp, x0, &enlarged, opts)? {
        BoxedOutcome::Clean {
            x_star,
            lambda,
            working_indices,
        } => {
            let lambda_orig = scatter(lp.m(), &lambda, to_original);
            let indices_orig: Vec<usize> =
                working_indices.iter().map(|&i| to_original(i)).collect();
            let working =
                WorkingSet::build(rlp, &working_indices, &x_star)?.relabel(indices_orig)?;
            Ok(SolveOutcome::Optimal(finalize_optimal(
                lp,
                x_star,
                lambda_orig,
                working,
                false,
            )?))
        }
        BoxedOutcome::BoxBound => Err(Error::internal(
            "bounded instance still pins the enlarged box; coordinate bound violated",
        )),
    }
}

enum BoxedOutcome {
    /// Optimal with every box multiplier zero: `lambda` and `working_indices`
    /// are already restricted to original (reduced) rows.
    Clean {
        x_star: Vector,
        lambda: Vector,
        working_indices: Vec<usize>,
    },
    /// Some box row carries a positive multiplier.
    BoxBound,
}

fn solve_boxed_once(
    rlp: &MixedLp,
    x0: &[Rational],
    box_bound: &Rational,
    opts: &SolveOptions,
) -> Result<BoxedOutcome, Error> {
    let boxed = add_box(rlp, box_bound);
    let start = if x0.iter().all(|v| v.abs() <= *box_bound) {
        x0.to_vec()
    } else {
        match find_feasible_reduced(&boxed)? {
            FeasibilityOutcome::Feasible(x) => x,
            FeasibilityOutcome::Infeasible(_) => {
                return Err(Error::internal(
                    "boxed region must contain a feasible point",
                ))
            }
        }
    };
    // Extend a user ε order over the box rows in identity order.
    let order: Option<Vec<usize>> = opts.epsilon_order.as_ref().map(|user| {
        let mut ext = user.clone();
        ext.extend(rlp.m_ineq() + 1..=rlp.m_ineq() + 2 * rlp.n());
        ext
    });
    match solve_full_rank(&boxed, &start, order.as_deref())? {
        InnerOutcome::Unbounded(_) => Err(Error::internal("boxed feasible region is bounded")),
        InnerOutcome::Optimal {
            x_star,
            lambda,
            working_indices,
        } => {
            let m_inner = rlp.m();
            if lambda[m_inner..].iter().any(|v| !v.is_zero()) {
                return Ok(BoxedOutcome::BoxBound);
            }
            let kept: Vec<usize> = working_indices
                .into_iter()
                .filter(|&i| i <= m_inner && (rlp.is_equality(i) || lambda[i - 1].is_positive()))
                .collect();
            Ok(BoxedOutcome::Clean {
                x_star,
                lambda: lambda[..m_inner].to_vec(),
                working_indices: kept,
            })
        }
    }
}

/// Appends 2n box rows x_j >= -M and -x_j >= -M after the inequalities.
fn add_box(rlp: &MixedLp, bound: &Rational) -> MixedLp {
    let n = rlp.n();
    let mut ge_rows: Vec<Vector> = (rlp.m_eq() + 1..=rlp.m())
        .map(|i| rlp.row(i).to_vec())
        .collect();
    let mut ge_rhs = rlp.b_ineq().to_vec();
    for sign in [1i64, -1] {
        for j in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[j] = Rational::from_int(sign);
            ge_rows.push(row);
            ge_rhs.push(-bound.clone());
        }
    }
    MixedLp::new(
        rlp.a_eq().clone(),
        rlp.b_eq().to_vec(),
        Matrix::from_rows(ge_rows),
        ge_rhs,
        rlp.cost().to_vec(),
    )
    .expect("boxing preserves dimensions")
}

/// min c^T p subject to A_E p = 0, A_I p >= 0, |p_i| <= 1: negative optimum
/// iff a feasible unbounded ray exists.
fn recession_lp(rlp: &MixedLp) -> MixedLp {
    let n = rlp.n();
    let zeros_eq = vec![Rational::zero(); rlp.m_eq()];
    let mut ge_rows: Vec<Vector> = (rlp.m_eq() + 1..=rlp.m())
        .map(|i| rlp.row(i).to_vec())
        .collect();
    let mut ge_rhs = vec![Rational::zero(); rlp.m_ineq()];
    for sign in [1i64, -1] {
        for j in 0..n {
            let mut row = vec![Rational::zero(); n];
            row[j] = Rational::from_int(sign);
            ge_rows.push(row);
            ge_rhs.push(Rational::from_int(-1));
        }
    }
    MixedLp::new(
        rlp.a_eq().clone(),
        zeros_eq,
        Matrix::from_rows(ge_rows),
        ge_rhs,
        rlp.cost().to_vec(),
    )
    .expect("recession dimensions are consistent")
}

/// Re-verifies an optimal outcome against the original data and assembles the
/// public solution value.
fn finalize_optimal(
    lp: &MixedLp,
    x_star: Vector,
    lambda: Vector,
    working: WorkingSet,
    degenerate_objective: bool,
) -> Result<OptimalSolution, Error> {
    let report = check_certificate(lp, &x_star, &lambda)?;
    if report.verdict != Verdict::Optimal {
        return Err(Error::internal(format!(
            "solver produced a non-verifying certificate: feasible={} checks={:?}",
            report.feasible, report.certificate.checks
        )));
    }
    if report.certificate.dual_value(lp) != lp.objective(&x_star) {
        return Err(Error::internal(
            "dual value must equal the primal objective",
        ));
    }
    Ok(OptimalSolution {
        x_star,
        certificate: report.certificate,
        working,
        degenerate_objective,
    })
}

fn oracle_cross_check(lp: &MixedLp, outcome: &SolveOutcome, cap: u128) -> Result<(), Error> {
    let vertices = enumerate_vertices(lp, cap)?;
    match outcome {
        SolveOutcome::Optimal(sol) => {
            if let Some(best) = vertices.iter().map(|v| lp.objective(v)).min() {
                if best != lp.objective(&sol.x_star) {
                    return Err(Error::internal(format!(
                        "oracle mismatch: enumeration minimum {best}, solver objective {}",
                        lp.objective(&sol.x_star)
                    )));
                }
            }
        }
        SolveOutcome::Unbounded { ray } => {
            verify_ray(lp, ray)?;
        }
        SolveOutcome::Infeasible { witness } => {
            if !vertices.is_empty() || !witness.verify(lp) {
                return Err(Error::internal(
                    "oracle mismatch: infeasible instance has vertices",
                ));
            }
        }
    }
    Ok(())
}
