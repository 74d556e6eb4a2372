//! JSON documents written by the subcommands.

use qgame_core::analysis::{
    entanglement_entropy, entropy_of_lambda, moderated_operator, moderated_payoffs, moderation_closed_form, LogBase,
};
use qgame_core::oracle::{verify_nash, verify_record, DeviationReport, StrategyGrid};
use qgame_core::{
    equilibria_at, interior_family, joint_state, CorrelationParams, EquilibriumRecord, Operator4, PayoffMatrix,
    StrategyVector, SurfaceRow,
};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct StrategyDoc {
    pub a0: f64,
    /// `None` when the phase is uniformly random.
    pub phase: Option<f64>,
}

impl StrategyDoc {
    fn of(s: &StrategyVector, scrambled: bool) -> Self {
        StrategyDoc { a0: s.a0(), phase: (!scrambled).then(|| s.phase()) }
    }
}

#[derive(Debug, Serialize)]
pub struct RecordDoc {
    pub kind: &'static str,
    /// Player A's amplitude on `|0>`.
    pub a0: f64,
    pub phase: Option<f64>,
    pub alpha: StrategyDoc,
    pub beta: StrategyDoc,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub boundary: bool,
    /// Entanglement entropy of the joint state; `None` for phase-scrambled play.
    pub entropy: Option<f64>,
}

fn record_doc(r: &EquilibriumRecord, gamma: &CorrelationParams, base: LogBase) -> RecordDoc {
    let scrambled = r.phase_scrambled();
    let entropy = (!scrambled).then(|| entanglement_entropy(&joint_state(&r.alpha, &r.beta, gamma), base));
    RecordDoc {
        kind: r.kind.label(),
        a0: r.alpha.a0(),
        phase: if scrambled { None } else { Some(r.phase_star.unwrap_or(r.alpha.phase())) },
        alpha: StrategyDoc::of(&r.alpha, scrambled),
        beta: StrategyDoc::of(&r.beta, scrambled),
        payoff_a: r.payoff_a,
        payoff_b: r.payoff_b,
        boundary: r.boundary,
        entropy,
    }
}

#[derive(Debug, Serialize)]
pub struct EquilibriaDoc {
    pub gamma: [f64; 2],
    pub tau: f64,
    pub g_plus: f64,
    pub g_minus: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub delta: f64,
    pub log_base: &'static str,
    pub records: Vec<RecordDoc>,
}

fn base_label(base: LogBase) -> &'static str {
    match base {
        LogBase::Natural => "e",
        LogBase::Two => "2",
    }
}

/// Records at `gamma`, optionally followed by `family` samples of the
/// asymmetric interior family.
pub fn equilibria(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    base: LogBase,
    family: Option<usize>,
) -> (Vec<EquilibriumRecord>, EquilibriaDoc) {
    let report = equilibria_at(a, gamma);
    let mut records = report.records.clone();
    if let Some(n) = family {
        records.extend(interior_family(a, gamma, n));
    }
    let f = report.functions;
    let doc = EquilibriaDoc {
        gamma: [gamma.gamma1(), gamma.gamma2()],
        tau: f.tau,
        g_plus: f.g_plus,
        g_minus: f.g_minus,
        h_plus: f.h_plus,
        h_minus: f.h_minus,
        delta: f.delta,
        log_base: base_label(base),
        records: records.iter().map(|r| record_doc(r, gamma, base)).collect(),
    };
    (records, doc)
}

#[derive(Debug, Serialize)]
pub struct CheckDoc {
    pub kind: String,
    pub alpha: StrategyDoc,
    pub beta: StrategyDoc,
    pub max_gain_a: f64,
    pub max_gain_b: f64,
    pub best_deviation_a: StrategyDoc,
    pub best_deviation_b: StrategyDoc,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub gamma: [f64; 2],
    pub n_amp: usize,
    pub n_phase: usize,
    pub tol: f64,
    pub allowance: f64,
    pub all_pass: bool,
    pub checks: Vec<CheckDoc>,
}

fn check_doc(kind: String, alpha: StrategyDoc, beta: StrategyDoc, d: &DeviationReport) -> CheckDoc {
    CheckDoc {
        kind,
        alpha,
        beta,
        max_gain_a: d.max_gain_a,
        max_gain_b: d.max_gain_b,
        best_deviation_a: StrategyDoc::of(&d.best_deviation_a, false),
        best_deviation_b: StrategyDoc::of(&d.best_deviation_b, false),
        pass: d.is_nash,
    }
}

/// Oracle check of every record, plus any injected strategy pairs.
pub fn verify(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    grid: &StrategyGrid,
    tol: f64,
    family: Option<usize>,
    injected: &[(StrategyVector, StrategyVector)],
) -> Result<VerifyDoc, CliError> {
    let (records, _) = equilibria(a, gamma, LogBase::Natural, family);
    let mut checks = Vec::new();
    let mut allowance = 0.0;
    for r in &records {
        let d = verify_record(a, gamma, r, grid, tol).map_err(CliError::input)?;
        allowance = d.allowance;
        let scrambled = r.phase_scrambled();
        checks.push(check_doc(
            r.kind.label().into(),
            StrategyDoc::of(&r.alpha, scrambled),
            StrategyDoc::of(&r.beta, scrambled),
            &d,
        ));
    }
    for (alpha, beta) in injected {
        let d = verify_nash(a, gamma, alpha, beta, grid, tol).map_err(CliError::input)?;
        allowance = d.allowance;
        checks.push(check_doc("Injected".into(), StrategyDoc::of(alpha, false), StrategyDoc::of(beta, false), &d));
    }
    Ok(VerifyDoc {
        gamma: [gamma.gamma1(), gamma.gamma2()],
        n_amp: grid.n_amp(),
        n_phase: grid.n_phase(),
        tol,
        allowance,
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

#[derive(Debug, Serialize)]
pub struct ModerateDoc {
    pub payoff: [f64; 4],
    pub n_quad: usize,
    /// Real parts of the averaged operator, rows in basis order 00, 01, 10, 11.
    pub operator_re: [[f64; 4]; 4],
    pub operator_im: [[f64; 4]; 4],
    /// Diagonal of the moderated payoff table.
    pub moderated_payoff: [f64; 4],
    /// Largest entry of `|average - (A + CAC) / 2|`.
    pub residual: f64,
}

fn split(op: &Operator4) -> ([[f64; 4]; 4], [[f64; 4]; 4]) {
    let mut re = [[0.0; 4]; 4];
    let mut im = [[0.0; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            re[r][c] = op.entry(r, c).re();
            im[r][c] = op.entry(r, c).im();
        }
    }
    (re, im)
}

pub fn moderate(a: &PayoffMatrix, n_quad: usize) -> Result<ModerateDoc, CliError> {
    let op = moderated_operator(a, n_quad).map_err(CliError::input)?;
    let (operator_re, operator_im) = split(&op);
    Ok(ModerateDoc {
        payoff: a.as_array(),
        n_quad,
        operator_re,
        operator_im,
        moderated_payoff: moderated_payoffs(a).map_err(CliError::input)?.as_array(),
        residual: op.max_abs_diff(&moderation_closed_form(a)),
    })
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum EntropyDoc {
    Lambda { lambda: f64, log_base: &'static str, entropy: f64 },
    State { gamma: [f64; 2], alpha: StrategyDoc, beta: StrategyDoc, log_base: &'static str, entropy: f64 },
    Records { gamma: [f64; 2], log_base: &'static str, records: Vec<EntropyEntry> },
}

#[derive(Debug, Serialize)]
pub struct EntropyEntry {
    pub kind: &'static str,
    pub a0: f64,
    pub phase: Option<f64>,
    pub entropy: Option<f64>,
}

pub fn entropy_lambda(lambda: f64, base: LogBase) -> Result<EntropyDoc, CliError> {
    let entropy = entropy_of_lambda(lambda, base).map_err(CliError::input)?;
    Ok(EntropyDoc::Lambda { lambda, log_base: base_label(base), entropy })
}

pub fn entropy_state(
    gamma: &CorrelationParams,
    alpha: &StrategyVector,
    beta: &StrategyVector,
    base: LogBase,
) -> EntropyDoc {
    EntropyDoc::State {
        gamma: [gamma.gamma1(), gamma.gamma2()],
        alpha: StrategyDoc::of(alpha, false),
        beta: StrategyDoc::of(beta, false),
        log_base: base_label(base),
        entropy: entanglement_entropy(&joint_state(alpha, beta, gamma), base),
    }
}

pub fn entropy_records(a: &PayoffMatrix, gamma: &CorrelationParams, base: LogBase) -> EntropyDoc {
    let (_, doc) = equilibria(a, gamma, base, None);
    EntropyDoc::Records {
        gamma: doc.gamma,
        log_base: doc.log_base,
        records: doc
            .records
            .into_iter()
            .map(|r| EntropyEntry { kind: r.kind, a0: r.a0, phase: r.phase, entropy: r.entropy })
            .collect(),
    }
}

/// A surface row in JSON form, same fields as the CSV columns.
#[derive(Debug, Serialize)]
pub struct RowDoc {
    pub gamma1: f64,
    pub gamma2: f64,
    pub kind: &'static str,
    pub a0_star: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub delta: f64,
}

impl From<&SurfaceRow> for RowDoc {
    fn from(r: &SurfaceRow) -> Self {
        RowDoc {
            gamma1: r.gamma1,
            gamma2: r.gamma2,
            kind: r.kind.label(),
            a0_star: r.a0_star,
            payoff_a: r.payoff_a,
            payoff_b: r.payoff_b,
            h_plus: r.h_plus,
            h_minus: r.h_minus,
            delta: r.delta,
        }
    }
}
