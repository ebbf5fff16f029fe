//! Acceptance suite: golden-example reproduction plus randomized property
//! criteria, one test per criterion, each printing a PASS line. Run with
//!
//! ```text
//! cargo test -p lpcert-cli --test acceptance -- --nocapture
//! ```

use std::sync::LazyLock;
use std::time::Instant;

use lpcert::linalg::dot;
use lpcert::{
    box_lp, check_certificate, descend_to_vertex, enumerate_vertices, farkas, find_feasible_point,
    optimal_working_set_at, parse_lp, perturb, solve, solve_perturbed, solve_with, transfer_check,
    DescentEnd, FarkasOutcome, FeasibilityOutcome, Matrix, MixedLp, PerturbedOutcome, Rational,
    SolveOptions, SolveOutcome, Vector, Verdict, DEFAULT_SUBSET_CAP,
};
use lpcert_cli::render::{render_svg, RenderConfig};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn r(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

fn rv(vals: &[(i64, i64)]) -> Vector {
    vals.iter().map(|&(n, d)| r(n, d)).collect()
}

fn degen2() -> MixedLp {
    parse_lp("vars 2\nmin 1 -1/2\nge 1 1 >= 3\nge 1 5/2 >= 6\nge 1 -2 >= -3\n")
        .unwrap()
        .lp
}

fn work6() -> MixedLp {
    parse_lp(
        "vars 3\nmin 1 2 3\n\
         ge 0 0 1 >= 1\nge 1 2 1 >= 5\nge 1 -1 2 >= 3\n\
         ge 1 1 1 >= 4\nge -1 0 1 >= -2\nge 0 1 -1 >= -1/2\n",
    )
    .unwrap()
    .lp
}

fn ray_ok(lp: &MixedLp, p: &[Rational]) -> bool {
    p.iter().any(|v| !v.is_zero())
        && (1..=lp.m_eq()).all(|i| dot(lp.row(i), p).is_zero())
        && (lp.m_eq() + 1..=lp.m()).all(|i| !dot(lp.row(i), p).is_negative())
        && dot(lp.cost(), p).is_negative()
}

struct Instance {
    lp: MixedLp,
    start: Vector,
}

/// Deterministic corpus of feasible full-rank instances with n <= 4, m <= 8
/// and integer entries in {-3..3}; shared by criteria 4, 5, 6 and 8.
static CORPUS: LazyLock<Vec<Instance>> = LazyLock::new(generate_corpus);

fn corpus() -> &'static [Instance] {
    &CORPUS
}

fn generate_corpus() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1CE_CAFE);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < 560 {
        attempts += 1;
        assert!(attempts < 20_000, "corpus generation stalled");
        let n = rng.gen_range(1..=4usize);
        let m_eq = usize::from(rng.gen_bool(0.2));
        let m_ineq = rng.gen_range(n..=8 - m_eq);
        let mut entry = |rng: &mut ChaCha8Rng| Rational::from_int(rng.gen_range(-3..=3i64));
        let rows =
            |k: usize, rng: &mut ChaCha8Rng, entry: &mut dyn FnMut(&mut ChaCha8Rng) -> Rational| {
                (0..k)
                    .map(|_| (0..n).map(|_| entry(rng)).collect::<Vector>())
                    .collect::<Vec<_>>()
            };
        let a_eq_rows = rows(m_eq, &mut rng, &mut entry);
        let b_eq: Vector = (0..m_eq).map(|_| entry(&mut rng)).collect();
        let a_ineq_rows = rows(m_ineq, &mut rng, &mut entry);
        let b_ineq: Vector = (0..m_ineq).map(|_| entry(&mut rng)).collect();
        let cost: Vector = (0..n).map(|_| entry(&mut rng)).collect();
        let a_eq = if m_eq == 0 {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(a_eq_rows)
        };
        let lp = MixedLp::new(a_eq, b_eq, Matrix::from_rows(a_ineq_rows), b_ineq, cost).unwrap();
        if lp.a_eq().rank() < lp.m_eq() || lp.combined_matrix().rank() < n {
            continue;
        }
        match find_feasible_point(&lp).unwrap() {
            FeasibilityOutcome::Feasible(start) => out.push(Instance { lp, start }),
            FeasibilityOutcome::Infeasible(w) => assert!(w.verify(&lp)),
        }
    }
    out
}

#[test]
fn criterion_1_degenerate_golden_example() {
    let lp = degen2();
    let t0 = Instant::now();
    let SolveOutcome::Optimal(sol) = solve(&lp).unwrap() else {
        panic!("must be optimal")
    };
    assert_eq!(sol.x_star, rv(&[(1, 1), (2, 1)]));
    assert_eq!(lp.objective(&sol.x_star), r(0, 1));
    assert_eq!(sol.working.indices(), &[2, 3]);
    assert_eq!(sol.certificate.lambda, rv(&[(0, 1), (1, 3), (2, 3)]));

    let opts = SolveOptions {
        epsilon_order: Some(vec![2, 1, 3]),
        ..Default::default()
    };
    let SolveOutcome::Optimal(swapped) = solve_with(&lp, &opts).unwrap() else {
        panic!("must be optimal")
    };
    assert_eq!(swapped.x_star, rv(&[(1, 1), (2, 1)]));
    assert_eq!(swapped.working.indices(), &[1, 3]);
    assert_eq!(swapped.certificate.lambda, rv(&[(1, 2), (0, 1), (1, 2)]));
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1: PASS — x*=(1,2), objective 0, working sets {{2,3}}/{{1,3}} with multipliers (1/3,2/3)/(1/2,1/2) in {elapsed:?}");
}

#[test]
fn criterion_2_six_constraint_golden_example() {
    let lp = work6();
    let t0 = Instant::now();
    let SolveOutcome::Optimal(sol) = solve(&lp).unwrap() else {
        panic!("must be optimal")
    };
    assert_eq!(lp.objective(&sol.x_star), r(7, 1));

    // Certificate: A^T λ = c and λ >= 0, recomputed here.
    let lambda = &sol.certificate.lambda;
    assert!(lambda.iter().all(|l| !l.is_negative()));
    for j in 0..lp.n() {
        let col: Rational = (1..=lp.m()).map(|i| &lambda[i - 1] * &lp.row(i)[j]).sum();
        assert_eq!(col, lp.cost()[j]);
    }

    // Complementarity transfers to all three points named by the source data.
    for x in [
        rv(&[(2, 1), (1, 1), (1, 1)]),
        rv(&[(3, 1), (1, 2), (1, 1)]),
        rv(&[(5, 2), (3, 4), (1, 1)]),
    ] {
        assert_eq!(
            transfer_check(&lp, &sol.certificate, &x).unwrap(),
            Verdict::Optimal,
            "at {x:?}"
        );
    }

    let w = optimal_working_set_at(&lp, &rv(&[(2, 1), (1, 1), (1, 1)]), &sol.certificate).unwrap();
    assert_eq!(w.indices(), &[1, 2, 3]);

    let vertices = enumerate_vertices(&lp, DEFAULT_SUBSET_CAP).unwrap();
    assert!(vertices.contains(&rv(&[(2, 1), (1, 1), (1, 1)])));
    assert!(vertices.contains(&rv(&[(3, 1), (1, 2), (1, 1)])));
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 2: PASS — objective 7, certificate verifies, transfer to all three points, working set {{1,2,3}} at (2,1,1), both vertices enumerated in {elapsed:?}");
}

#[test]
fn criterion_3_multiplier_sign_counterexample() {
    let lp = degen2();
    let report =
        check_certificate(&lp, &rv(&[(1, 1), (2, 1)]), &rv(&[(2, 1), (-1, 1), (0, 1)])).unwrap();
    assert_eq!(report.verdict, Verdict::NotOptimal);
    assert!(
        !report.certificate.checks.sign,
        "sign condition must be the failure"
    );
    assert!(report.feasible);
    assert!(report.certificate.checks.stationarity);
    println!("criterion 3: PASS — λ=(2,-1,0) rejected on the sign condition alone");
}

#[test]
fn criterion_4_perturbed_nondegeneracy() {
    let corpus = corpus();
    let mut bounded = 0usize;
    for (idx, inst) in corpus.iter().enumerate() {
        let plp = perturb(&inst.lp, None).unwrap();
        let lv = match solve_perturbed(&plp, &inst.start).unwrap() {
            PerturbedOutcome::Vertex(lv) => lv,
            PerturbedOutcome::Unbounded { ray } => {
                assert!(ray_ok(&inst.lp, &ray), "instance {idx}");
                continue;
            }
        };
        bounded += 1;
        let n = inst.lp.n();
        let mut active = 0usize;
        for i in 1..=inst.lp.m() {
            let slack = plp.residual(&lv.x_eps, i);
            if lv.working.indices().contains(&i) {
                assert!(
                    slack.is_zero(),
                    "instance {idx}: working row {i} not active"
                );
                active += 1;
            } else if slack.is_zero() {
                active += 1;
            } else {
                assert_eq!(
                    slack.sign(),
                    1,
                    "instance {idx}: non-working slack of row {i} not lex-positive"
                );
            }
        }
        assert_eq!(
            active, n,
            "instance {idx}: lex-vertex must have exactly n active rows"
        );
    }
    assert!(
        bounded >= 200,
        "only {bounded} bounded instances in the corpus"
    );
    println!("criterion 4: PASS — {bounded} bounded instances, every final lex-vertex has exactly n active rows and strictly lex-positive non-working slacks");
}

#[test]
fn criterion_5_oracle_equivalence() {
    let corpus = corpus();
    let mut optimal = 0usize;
    let mut unbounded = 0usize;
    for (idx, inst) in corpus.iter().enumerate() {
        let opts = SolveOptions {
            start: Some(inst.start.clone()),
            ..Default::default()
        };
        let vertices = enumerate_vertices(&inst.lp, DEFAULT_SUBSET_CAP).unwrap();
        match solve_with(&inst.lp, &opts).unwrap() {
            SolveOutcome::Optimal(sol) => {
                optimal += 1;
                let best = vertices
                    .iter()
                    .map(|v| inst.lp.objective(v))
                    .min()
                    .unwrap_or_else(|| panic!("instance {idx}: optimal but no vertices"));
                assert_eq!(best, inst.lp.objective(&sol.x_star), "instance {idx}");
            }
            SolveOutcome::Unbounded { ray } => {
                unbounded += 1;
                assert!(ray_ok(&inst.lp, &ray), "instance {idx}");
                // The enumeration minimum is not a lower bound along the ray:
                // walk far enough that the objective drops strictly below it.
                if let Some(best) = vertices.iter().map(|v| inst.lp.objective(v)).min() {
                    let start_val = inst.lp.objective(&inst.start);
                    let slope = dot(inst.lp.cost(), &ray);
                    let reach = (&best - &start_val) / &slope;
                    let t = if reach.is_positive() {
                        reach
                    } else {
                        Rational::zero()
                    } + Rational::one();
                    let far: Vector = inst
                        .start
                        .iter()
                        .zip(&ray)
                        .map(|(x, p)| x + &t * p)
                        .collect();
                    assert!(
                        inst.lp.is_feasible(&far),
                        "instance {idx}: ray leaves the region"
                    );
                    assert!(inst.lp.objective(&far) < best, "instance {idx}");
                }
            }
            SolveOutcome::Infeasible { .. } => panic!("instance {idx}: corpus is feasible"),
        }
    }
    println!("criterion 5: PASS — {optimal} optimal values match enumeration minima, {unbounded} unbounded rays verified against the vertex bound");
}

#[test]
fn criterion_6_weak_duality() {
    let corpus = corpus();
    let mut certificates = 0usize;
    let mut fuzzed = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0_D0);
    for inst in corpus {
        let opts = SolveOptions {
            start: Some(inst.start.clone()),
            ..Default::default()
        };
        let SolveOutcome::Optimal(sol) = solve_with(&inst.lp, &opts).unwrap() else {
            continue;
        };
        certificates += 1;
        let lp = &inst.lp;
        let primal = lp.objective(&sol.x_star);
        let lambda = &sol.certificate.lambda;
        assert_eq!(sol.certificate.dual_value(lp), primal, "c^T x* = λ^T b");
        let slack_product: Rational = (1..=lp.m())
            .map(|i| &lambda[i - 1] * &lp.residual(&sol.x_star, i))
            .sum();
        assert!(slack_product.is_zero(), "λ^T(Ax*-b) = 0");

        // Fuzz around λ* inside the stationarity manifold.
        let basis = lp.combined_matrix().transpose().nullspace_basis();
        for _ in 0..4 {
            let mut fuzz = lambda.clone();
            for mu in &basis {
                let t = r(rng.gen_range(-2..=2i64), rng.gen_range(1..=3i64));
                for (l, m) in fuzz.iter_mut().zip(mu) {
                    *l = &*l + &t * m;
                }
            }
            if (lp.m_eq() + 1..=lp.m()).any(|i| fuzz[i - 1].is_negative()) {
                continue;
            }
            fuzzed += 1;
            assert!(
                dot(&fuzz, &lp.combined_rhs()) <= primal,
                "dual value exceeds primal"
            );
        }
    }
    assert!(certificates >= 200);
    assert!(
        fuzzed >= 100,
        "only {fuzzed} sign-feasible fuzzed multipliers"
    );
    println!("criterion 6: PASS — {certificates} certificates satisfy both identities exactly; {fuzzed} fuzzed dual-feasible multipliers stay below the primal value");
}

#[test]
fn criterion_7_farkas_exclusivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFA_DE);
    let mut combinations = 0usize;
    let mut separations = 0usize;
    for case in 0..500 {
        let m = rng.gen_range(1..=4usize);
        let n = rng.gen_range(1..=3usize);
        let a = Matrix::from_rows(
            (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| Rational::from_int(rng.gen_range(-2..=2i64)))
                        .collect()
                })
                .collect::<Vec<Vector>>(),
        );
        let c: Vector = (0..n)
            .map(|_| Rational::from_int(rng.gen_range(-2..=2i64)))
            .collect();

        // Independent multiplier route: solving the auxiliary box program
        // directly gives the full multiplier and the optimal value.
        let aux = box_lp(&a, &c).unwrap();
        let SolveOutcome::Optimal(aux_sol) = solve(&aux).unwrap() else {
            panic!("case {case}: box program is always solvable")
        };
        let aux_value = aux.objective(&aux_sol.x_star);

        match farkas(&a, &c).unwrap() {
            FarkasOutcome::Combination { y } => {
                combinations += 1;
                assert!(y.iter().all(|v| !v.is_negative()), "case {case}");
                for (j, cj) in c.iter().enumerate() {
                    let col: Rational = (0..m).map(|i| &y[i] * &a.row(i)[j]).sum();
                    assert_eq!(&col, cj, "case {case}");
                }
                // The box optimum is zero and its box multipliers vanish.
                assert!(aux_value.is_zero(), "case {case}");
                assert!(
                    aux_sol.certificate.lambda[m..]
                        .iter()
                        .all(Rational::is_zero),
                    "case {case}: λ2 = λ3 = 0 must hold"
                );
                // Grid evidence that no separation exists in the box.
                assert!(
                    grid_separation(&a, &c).is_none(),
                    "case {case}: grid found a separating p despite a combination"
                );
            }
            FarkasOutcome::Separation { p } => {
                separations += 1;
                assert!(
                    (0..m).all(|i| !dot(a.row(i), &p).is_negative()),
                    "case {case}"
                );
                assert!(dot(&c, &p).is_negative(), "case {case}");
                assert!(aux_value.is_negative(), "case {case}");
                // Grid evidence that no nonnegative combination reproduces c.
                assert!(
                    grid_combination(&a, &c).is_none(),
                    "case {case}: grid found a combination despite a separation"
                );
            }
        }
    }
    assert!(
        combinations > 0 && separations > 0,
        "both branches must occur"
    );
    println!("criterion 7: PASS — 500 instances, {combinations} combinations / {separations} separations, witnesses exact, λ2=λ3=0 in every combination case");
}

/// Searches a half-step grid in the box for p with Ap >= 0 and c^T p < 0.
fn grid_separation(a: &Matrix, c: &[Rational]) -> Option<Vector> {
    let n = c.len();
    let steps: Vec<Rational> = (-2..=2).map(|k| r(k, 2)).collect();
    let mut idx = vec![0usize; n];
    loop {
        let p: Vector = idx.iter().map(|&i| steps[i].clone()).collect();
        if (0..a.rows()).all(|i| !dot(a.row(i), &p).is_negative()) && dot(c, &p).is_negative() {
            return Some(p);
        }
        let mut carry = 0;
        while carry < n {
            idx[carry] += 1;
            if idx[carry] < steps.len() {
                break;
            }
            idx[carry] = 0;
            carry += 1;
        }
        if carry == n {
            return None;
        }
    }
}

/// Searches a half-step grid of nonnegative y for A^T y = c.
fn grid_combination(a: &Matrix, c: &[Rational]) -> Option<Vector> {
    let m = a.rows();
    let n = c.len();
    let steps: Vec<Rational> = (0..=4).map(|k| r(k, 2)).collect();
    let mut idx = vec![0usize; m];
    loop {
        let y: Vector = idx.iter().map(|&i| steps[i].clone()).collect();
        if (0..n).all(|j| (0..m).map(|i| &y[i] * &a.row(i)[j]).sum::<Rational>() == c[j]) {
            return Some(y);
        }
        let mut carry = 0;
        while carry < m {
            idx[carry] += 1;
            if idx[carry] < steps.len() {
                break;
            }
            idx[carry] = 0;
            carry += 1;
        }
        if carry == m {
            return None;
        }
    }
}

#[test]
fn criterion_8_descent_iteration_bound() {
    let corpus = corpus();
    let mut runs = 0usize;
    for (idx, inst) in corpus.iter().enumerate() {
        let out = descend_to_vertex(&inst.lp, &inst.start).unwrap();
        runs += 1;
        // Trace records one entry per Step-1 visit: at most n steps plus the
        // starting point.
        assert!(
            out.trace.len() <= inst.lp.n() + 1,
            "instance {idx}: {} trace entries for n={}",
            out.trace.len(),
            inst.lp.n()
        );
        let ranks: Vec<usize> = out.trace.iter().map(|t| t.active_rank).collect();
        assert!(
            ranks.windows(2).all(|w| w[0] < w[1]),
            "instance {idx}: ranks {ranks:?}"
        );
        match out.end {
            DescentEnd::Vertex(v) => {
                assert!(
                    inst.lp.objective(&v) <= inst.lp.objective(&inst.start),
                    "instance {idx}"
                );
            }
            DescentEnd::Unbounded(p) => assert!(ray_ok(&inst.lp, &p), "instance {idx}"),
        }
    }
    assert!(runs >= 400);
    println!("criterion 8: PASS — {runs} descents, all within n rank-increasing steps");
}

#[test]
fn criterion_9_render_reproduces_perturbation_split() {
    let lp = degen2();
    let half = r(1, 2);

    // Computed vertex counts: 1 for the unperturbed cone, 1 for order
    // (1,2,3), 2 for order (2,1,3).
    let base = enumerate_vertices(&lp, DEFAULT_SUBSET_CAP).unwrap();
    assert_eq!(base.len(), 1);
    let single = perturb(&lp, Some(&[1, 2, 3])).unwrap().instantiate(&half);
    let split = perturb(&lp, Some(&[2, 1, 3])).unwrap().instantiate(&half);
    let single_vs = enumerate_vertices(&single, DEFAULT_SUBSET_CAP).unwrap();
    let split_vs = enumerate_vertices(&split, DEFAULT_SUBSET_CAP).unwrap();
    assert_eq!(
        single_vs.len(),
        1,
        "order (1,2,3) must produce a single vertex"
    );
    assert_eq!(split_vs.len(), 2, "order (2,1,3) must produce two vertices");

    // The surviving vertices carry the expected active sets: {2,3} for the
    // single one, and {1,3} at the optimal one of the split pair.
    let active = |lp: &MixedLp, v: &[Rational]| -> Vec<usize> {
        (1..=lp.m()).filter(|&i| lp.residual(v, i).is_zero()).collect()
    };
    assert_eq!(active(&single, &single_vs[0]), vec![2, 3]);
    let split_opt = split_vs
        .iter()
        .min_by(|a, b| split.objective(a).cmp(&split.objective(b)))
        .unwrap();
    assert_eq!(active(&split, split_opt), vec![1, 3]);

    // The SVG outputs mark exactly those vertices.
    let configs = [
        (RenderConfig::default(), 1usize),
        (
            RenderConfig {
                epsilon: Some(half.clone()),
                order: Some(vec![1, 2, 3]),
            },
            1,
        ),
        (
            RenderConfig {
                epsilon: Some(half.clone()),
                order: Some(vec![2, 1, 3]),
            },
            2,
        ),
    ];
    for (cfg, expected) in configs {
        let svg = render_svg(&lp, &cfg).unwrap();
        assert_eq!(
            svg.matches("class=\"vertex\"").count(),
            expected,
            "marker count for {cfg:?}"
        );
    }
    println!("criterion 9: PASS — vertex counts 1 (unperturbed), 1 (order 1,2,3) and 2 (order 2,1,3) in both enumeration and SVG markers");
}
