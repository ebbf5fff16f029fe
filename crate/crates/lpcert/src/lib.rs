//! Exact-arithmetic linear-programming optimality engine.
//!
//! Solves mixed-form LPs (minimize c^T x subject to A_E x = b_E and
//! A_I x >= b_I) entirely over arbitrary-precision rationals. The solver
//! perturbs the inequality right-hand sides by symbolic powers of ε, pivots
//! in exact lexicographic arithmetic where every vertex is nondegenerate, and
//! un-perturbs the result into an optimal vertex, an optimal working set, and
//! a multiplier certificate that is re-verified before being returned.
//! Unbounded and infeasible instances come with exactly checkable witnesses
//! of their own, and a Farkas oracle decides which side of the alternative
//! holds for any (A, c).
//!
//! Brute-force vertex enumeration is included as a desk-scale oracle; with
//! the `parallel` feature (default) it fans out over a rayon pool, and a
//! sequential fallback remains available via `--no-default-features`.

pub mod certify;
pub mod error;
pub mod farkas;
pub mod lex;
pub mod linalg;
pub mod model;
pub mod parse;
pub mod perturb;
pub mod rational;
pub mod vertex;

pub use certify::{
    check_certificate, dual_bound, find_feasible_point, nondegenerate_vertex_test,
    optimal_working_set_at, solve, solve_with, transfer_check, CertChecks, CertReport, Certificate,
    FeasibilityOutcome, InfeasibleWitness, OptimalSolution, SolveOptions, SolveOutcome, Verdict,
    VertexTestOutcome,
};
pub use error::Error;
pub use farkas::{box_lp, farkas, FarkasOutcome};
pub use lex::LexValue;
pub use linalg::{Matrix, Vector};
pub use model::{
    active_set, is_feasible_direction, max_feasible_step, reduce_equalities, ActiveSet,
    EqualityReduction, MixedLp, StepResult,
};
pub use parse::{parse_lp, parse_matrix, parse_vector, ParsedLp};
pub use perturb::{
    perturb, solve_perturbed, unperturb, LexVertex, PerturbedLp, PerturbedOutcome, UnperturbResult,
    WorkingSet,
};
pub use rational::Rational;
pub use vertex::{
    classify_vertex, descend_to_vertex, enumerate_vertices, enumerate_vertices_seq, DescentEnd,
    DescentOutcome, TraceStep, VertexClass, VertexKind, DEFAULT_SUBSET_CAP,
};

#[cfg(feature = "parallel")]
pub use vertex::enumerate_vertices_par;
