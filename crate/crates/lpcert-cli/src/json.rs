//! JSON shapes emitted by the CLI. All numbers are rational strings.

use lpcert::{CertReport, InfeasibleWitness, MixedLp, Rational, SolveOutcome, Verdict};
use serde::{Deserialize, Serialize};

pub fn rationals_to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(Rational::to_string).collect()
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ChecksJson {
    pub feasible: bool,
    pub stationarity: bool,
    pub sign: bool,
    pub complementarity: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub kind: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_star: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub combination: Option<Vec<String>>,
}

/// The certificate document written by `solve`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub working_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<ChecksJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate_objective: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

impl CertificateJson {
    pub fn from_outcome(lp: &MixedLp, outcome: &SolveOutcome) -> Self {
        match outcome {
            SolveOutcome::Optimal(sol) => CertificateJson {
                status: "optimal".into(),
                x: Some(rationals_to_strings(&sol.x_star)),
                objective: Some(lp.objective(&sol.x_star).to_string()),
                lambda: Some(rationals_to_strings(&sol.certificate.lambda)),
                working_set: Some(sol.working.indices().to_vec()),
                ray: None,
                checks: Some(ChecksJson {
                    feasible: true,
                    stationarity: sol.certificate.checks.stationarity,
                    sign: sol.certificate.checks.sign,
                    complementarity: sol.certificate.checks.complementarity,
                }),
                degenerate_objective: sol.degenerate_objective.then_some(true),
                witness: None,
            },
            SolveOutcome::Unbounded { ray } => CertificateJson {
                status: "unbounded".into(),
                x: None,
                objective: None,
                lambda: None,
                working_set: None,
                ray: Some(rationals_to_strings(ray)),
                checks: None,
                degenerate_objective: None,
                witness: None,
            },
            SolveOutcome::Infeasible { witness } => {
                let w = match witness {
                    InfeasibleWitness::Equalities { combination } => WitnessJson {
                        kind: "inconsistent_equalities".into(),
                        detail: witness.describe(),
                        s_star: None,
                        combination: Some(rationals_to_strings(combination)),
                    },
                    InfeasibleWitness::Phase1 { s_star, .. } => WitnessJson {
                        kind: "positive_phase1".into(),
                        detail: witness.describe(),
                        s_star: Some(s_star.to_string()),
                        combination: None,
                    },
                };
                CertificateJson {
                    status: "infeasible".into(),
                    x: None,
                    objective: None,
                    lambda: None,
                    working_set: None,
                    ray: None,
                    checks: None,
                    degenerate_objective: None,
                    witness: Some(w),
                }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertifyJson {
    pub verdict: String,
    pub checks: ChecksJson,
}

impl CertifyJson {
    pub fn from_report(report: &CertReport) -> Self {
        CertifyJson {
            verdict: match report.verdict {
                Verdict::Optimal => "optimal".into(),
                Verdict::NotOptimal => "not_optimal".into(),
            },
            checks: ChecksJson {
                feasible: report.feasible,
                stationarity: report.certificate.checks.stationarity,
                sign: report.certificate.checks.sign,
                complementarity: report.certificate.checks.complementarity,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceJson {
    pub point: Vec<String>,
    pub active_rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DescentJson {
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<String>>,
    pub trace: Vec<TraceJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FarkasJson {
    pub case: u8,
    pub witness: Vec<String>,
}
