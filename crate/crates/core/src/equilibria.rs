//! Closed-form classification of quantum Nash equilibria at fixed `gamma`.
//!
//! Four edge equilibria are selected by the signs of `H+` and `H-`. The
//! symmetric interior solution uses the phase equilibrium when
//! `|G-| <= |G+|` and the phase-averaged game (interference set to zero)
//! otherwise. [`interior_family`] enumerates the wider family of interior
//! equilibria whose two phases differ.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::error::GameError;
use crate::operator::{reduce_angle, CorrelationParams, StrategyVector};
use crate::payoff::{game_functions, GameFunctions, PayoffEvaluator, PayoffMatrix, Player};

/// Default slack on the sign conditions of the edge equilibria.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

/// Relative size below which `G+` and `G-` count as zero.
const INTERFERENCE_ZERO: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquilibriumKind {
    /// `|0,0>`
    Edge00,
    /// `|1,1>`
    Edge11,
    /// `|0,1>`
    Edge01,
    /// `|1,0>`
    Edge10,
    /// Symmetric interior solution with both phases at the phase equilibrium.
    SymmetricCoherent,
    /// Symmetric interior solution of the phase-averaged game.
    SymmetricPhaseScrambled,
    /// Interior equilibrium whose phases (and possibly amplitudes) differ.
    InteriorFamily,
}

impl EquilibriumKind {
    pub const fn label(self) -> &'static str {
        match self {
            EquilibriumKind::Edge00 => "Edge00",
            EquilibriumKind::Edge11 => "Edge11",
            EquilibriumKind::Edge01 => "Edge01",
            EquilibriumKind::Edge10 => "Edge10",
            EquilibriumKind::SymmetricCoherent => "SymmetricCoherent",
            EquilibriumKind::SymmetricPhaseScrambled => "SymmetricPhaseScrambled",
            EquilibriumKind::InteriorFamily => "InteriorFamily",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        [
            EquilibriumKind::Edge00,
            EquilibriumKind::Edge11,
            EquilibriumKind::Edge01,
            EquilibriumKind::Edge10,
            EquilibriumKind::SymmetricCoherent,
            EquilibriumKind::SymmetricPhaseScrambled,
            EquilibriumKind::InteriorFamily,
        ]
        .into_iter()
        .find(|k| k.label() == label)
    }

    pub const fn is_edge(self) -> bool {
        matches!(
            self,
            EquilibriumKind::Edge00
                | EquilibriumKind::Edge11
                | EquilibriumKind::Edge01
                | EquilibriumKind::Edge10
        )
    }

    /// Both players use the same strategy.
    pub const fn is_symmetric(self) -> bool {
        matches!(
            self,
            EquilibriumKind::Edge00
                | EquilibriumKind::Edge11
                | EquilibriumKind::SymmetricCoherent
                | EquilibriumKind::SymmetricPhaseScrambled
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquilibriumRecord {
    pub kind: EquilibriumKind,
    pub alpha: StrategyVector,
    pub beta: StrategyVector,
    pub payoff_a: f64,
    pub payoff_b: f64,
    /// Phase equilibrium `xi*` for [`EquilibriumKind::SymmetricCoherent`].
    pub phase_star: Option<f64>,
    /// An admitting condition holds only within the boundary tolerance.
    pub boundary: bool,
}

impl EquilibriumRecord {
    fn evaluate(
        kind: EquilibriumKind,
        eval: &PayoffEvaluator,
        alpha: StrategyVector,
        beta: StrategyVector,
        phase_star: Option<f64>,
        boundary: bool,
    ) -> Self {
        EquilibriumRecord {
            kind,
            alpha,
            beta,
            payoff_a: eval.payoff(&alpha, &beta, Player::A),
            payoff_b: eval.payoff(&alpha, &beta, Player::B),
            phase_star,
            boundary,
        }
    }

    /// True when the players' phases are uniformly randomised rather than fixed.
    pub fn phase_scrambled(&self) -> bool {
        self.kind == EquilibriumKind::SymmetricPhaseScrambled
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumReport {
    pub gamma: CorrelationParams,
    pub functions: GameFunctions,
    pub records: Vec<EquilibriumRecord>,
}

impl EquilibriumReport {
    pub fn find(&self, kind: EquilibriumKind) -> Option<&EquilibriumRecord> {
        self.records.iter().find(|r| r.kind == kind)
    }

    pub fn has(&self, kind: EquilibriumKind) -> bool {
        self.find(kind).is_some()
    }
}

/// Edge equilibria admitted by the signs of `H+` and `H-`.
pub fn classify_edges(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    boundary_tol: f64,
) -> Vec<EquilibriumRecord> {
    let eval = PayoffEvaluator::new(a, gamma);
    let f = *eval.functions();
    let near_plus = f.h_plus.abs() <= boundary_tol;
    let near_minus = f.h_minus.abs() <= boundary_tol;
    let (k0, k1) = (StrategyVector::KET0, StrategyVector::KET1);
    let mut out = Vec::with_capacity(4);
    if f.h_plus > -boundary_tol {
        out.push(EquilibriumRecord::evaluate(EquilibriumKind::Edge00, &eval, k0, k0, None, near_plus));
    }
    if f.h_minus > -boundary_tol {
        out.push(EquilibriumRecord::evaluate(EquilibriumKind::Edge11, &eval, k1, k1, None, near_minus));
    }
    if f.h_plus < boundary_tol && f.h_minus < boundary_tol {
        let boundary = near_plus || near_minus;
        out.push(EquilibriumRecord::evaluate(EquilibriumKind::Edge01, &eval, k0, k1, None, boundary));
        out.push(EquilibriumRecord::evaluate(EquilibriumKind::Edge10, &eval, k1, k0, None, boundary));
    }
    out
}

fn negligible(g: f64, a: &PayoffMatrix) -> bool {
    g.abs() <= INTERFERENCE_ZERO * a.max_abs_entry().max(1.0)
}

/// Symmetric phase equilibrium `xi*` in `[0, pi)`, solving `cos 2xi* = -G-/G+`
/// on the branch where the interference payoff is `+a0 a1 b0 b1 Delta`.
///
/// Absent when `|G-| > |G+|` or when both vanish.
pub fn phase_equilibrium(a: &PayoffMatrix, gamma: &CorrelationParams) -> Option<f64> {
    phase_equilibrium_from(&game_functions(a, gamma), a)
}

fn phase_equilibrium_from(f: &GameFunctions, a: &PayoffMatrix) -> Option<f64> {
    if negligible(f.g_plus, a) || f.g_minus.abs() > f.g_plus.abs() {
        return None;
    }
    let cos2 = (-f.g_minus / f.g_plus).clamp(-1.0, 1.0);
    let sin2 = -f.g_plus.signum() * libm::sqrt(1.0 - cos2 * cos2);
    let xi = reduce_angle(libm::atan2(sin2, cos2) / 2.0);
    Some(if xi >= PI { xi - PI } else { xi })
}

/// The symmetric interior equilibrium `a0* = b0* = sqrt((H- - D)/(H+ + H- - 2D))`.
pub fn symmetric_interior(a: &PayoffMatrix, gamma: &CorrelationParams) -> Option<EquilibriumRecord> {
    symmetric_interior_with(a, gamma, &PayoffEvaluator::new(a, gamma), DEFAULT_BOUNDARY_TOL)
}

fn symmetric_interior_with(
    a: &PayoffMatrix,
    _gamma: &CorrelationParams,
    eval: &PayoffEvaluator,
    boundary_tol: f64,
) -> Option<EquilibriumRecord> {
    let f = eval.functions();
    let phase = phase_equilibrium_from(f, a);
    let delta = if phase.is_some() { f.delta } else { 0.0 };
    let upper = f.h_plus - delta;
    let lower = f.h_minus - delta;
    let validity = upper * lower;
    let denom = upper + lower;
    if validity < 0.0 || denom == 0.0 {
        return None;
    }
    let prob0 = lower / denom;
    if !(0.0..=1.0).contains(&prob0) {
        return None;
    }
    let a0 = libm::sqrt(prob0);
    let boundary = validity.abs() <= boundary_tol;
    let (kind, xi) = match phase {
        Some(xi) => (EquilibriumKind::SymmetricCoherent, xi),
        None => (EquilibriumKind::SymmetricPhaseScrambled, 0.0),
    };
    let s = StrategyVector::new(a0, xi).ok()?;
    Some(EquilibriumRecord::evaluate(kind, eval, s, s, phase, boundary))
}

/// All equilibria at `gamma` with the default boundary tolerance.
pub fn equilibria_at(a: &PayoffMatrix, gamma: &CorrelationParams) -> EquilibriumReport {
    equilibria_at_with_tol(a, gamma, DEFAULT_BOUNDARY_TOL)
}

pub fn equilibria_at_with_tol(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    boundary_tol: f64,
) -> EquilibriumReport {
    let eval = PayoffEvaluator::new(a, gamma);
    let mut records = classify_edges(a, gamma, boundary_tol);
    if let Some(interior) = symmetric_interior_with(a, gamma, &eval, boundary_tol) {
        // At a0* = 0 or 1 the interior solution is an edge already listed.
        let p = interior.alpha.probability0();
        if p > 1e-12 && p < 1.0 - 1e-12 {
            records.push(interior);
        }
    }
    EquilibriumReport { gamma: *gamma, functions: *eval.functions(), records }
}

/// Interior equilibria with unequal phases, sampled along the phase difference.
///
/// In the coherent regime the phase conditions of both players reduce to the
/// single curve `G+ cos(xi + chi) + G- cos(xi - chi) = 0`; each point fixes
/// the interference weight seen by each player, and the amplitudes are the
/// fixed point of the closed-form amplitude best responses. `samples` values
/// of `xi - chi` are taken uniformly on `[0, 2pi)`; each solution is also
/// returned with both phases shifted by `pi`, which leaves payoffs unchanged.
pub fn interior_family(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    samples: usize,
) -> Vec<EquilibriumRecord> {
    let eval = PayoffEvaluator::new(a, gamma);
    let f = *eval.functions();
    let mut out = Vec::new();
    if negligible(f.g_plus, a) || f.g_minus.abs() > f.g_plus.abs() {
        return out;
    }
    let weight_floor = INTERFERENCE_ZERO * a.max_abs_entry().max(1.0);
    for k in 0..samples {
        let v = 2.0 * PI * k as f64 / samples as f64;
        let cos_u = (-f.g_minus * libm::cos(v) / f.g_plus).clamp(-1.0, 1.0);
        let sin_u = -f.g_plus.signum() * libm::sqrt(1.0 - cos_u * cos_u);
        let weight_a = -(f.g_plus * sin_u + f.g_minus * libm::sin(v));
        let weight_b = -(f.g_plus * sin_u - f.g_minus * libm::sin(v));
        if weight_a <= weight_floor || weight_b <= weight_floor {
            continue;
        }
        let u = libm::atan2(sin_u, cos_u);
        let (xi, chi) = ((u + v) / 2.0, (u - v) / 2.0);
        for (angle_a, angle_b) in amplitude_fixed_points(&f, weight_a, weight_b) {
            for shift in [0.0, PI] {
                let (Ok(alpha), Ok(beta)) = (
                    StrategyVector::new(libm::cos(angle_a / 2.0), xi + shift),
                    StrategyVector::new(libm::cos(angle_b / 2.0), chi + shift),
                ) else {
                    continue;
                };
                out.push(EquilibriumRecord::evaluate(
                    EquilibriumKind::InteriorFamily,
                    &eval,
                    alpha,
                    beta,
                    None,
                    false,
                ));
            }
        }
    }
    out
}

/// Amplitude best response in the angle `phi` (`a0 = cos(phi/2)`), given the
/// opponent's angle and this player's interference weight.
fn amplitude_response(f: &GameFunctions, opponent: f64, weight: f64) -> f64 {
    let y = (1.0 + libm::cos(opponent)) / 2.0;
    let spread = libm::sin(opponent) / 2.0;
    let slope = (y * f.h_plus - (1.0 - y) * f.h_minus) / 2.0;
    libm::atan2(spread * weight, slope)
}

fn amplitude_fixed_points(f: &GameFunctions, weight_a: f64, weight_b: f64) -> Vec<(f64, f64)> {
    const SCAN: usize = 256;
    const EDGE: f64 = 1e-9;
    let residual = |phi_a: f64| {
        let phi_b = amplitude_response(f, phi_a, weight_b);
        amplitude_response(f, phi_b, weight_a) - phi_a
    };
    let mut roots = Vec::new();
    let step = (PI - 2.0 * EDGE) / SCAN as f64;
    let mut lo = EDGE;
    let mut r_lo = residual(lo);
    for k in 1..=SCAN {
        let hi = EDGE + step * k as f64;
        let r_hi = residual(hi);
        if r_lo == 0.0 || r_lo * r_hi < 0.0 {
            let (mut l, mut h, mut rl) = (lo, hi, r_lo);
            for _ in 0..80 {
                let m = 0.5 * (l + h);
                let rm = residual(m);
                if rl * rm <= 0.0 {
                    h = m;
                } else {
                    l = m;
                    rl = rm;
                }
            }
            let phi_a = 0.5 * (l + h);
            let phi_b = amplitude_response(f, phi_a, weight_b);
            let interior = |p: f64| p > EDGE && p < PI - EDGE;
            if residual(phi_a).abs() < 1e-9 && interior(phi_a) && interior(phi_b) {
                roots.push((phi_a, phi_b));
            }
        }
        lo = hi;
        r_lo = r_hi;
    }
    roots
}

/// Optimal correlation for the `|1,0>` edge equilibrium.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalEdge {
    /// `(A11 - A01) / (A10 - A01)`
    pub lambda: f64,
    /// `(2 arcsin sqrt(lambda), 0)`
    pub gamma: CorrelationParams,
    /// `(pi - 2 arcsin sqrt(lambda), pi)`, where `|0,1>` attains the same payoff.
    pub partner: CorrelationParams,
    /// `A01 + A10 - A11`
    pub payoff: f64,
}

pub fn optimal_edge_gamma(a: &PayoffMatrix) -> Result<OptimalEdge, GameError> {
    let [_, a01, a10, a11] = a.as_array();
    let lambda = unit_ratio("lambda", a11 - a01, a10 - a01)?;
    let g1 = 2.0 * libm::asin(libm::sqrt(lambda));
    Ok(OptimalEdge {
        lambda,
        gamma: CorrelationParams::new(g1, 0.0)?,
        partner: CorrelationParams::new(PI - g1, PI)?,
        payoff: a01 + a10 - a11,
    })
}

/// Extent of the `gamma2 = 0` ridge where the symmetric equilibrium pays `A00`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlateauBounds {
    /// `(A10 - A00) / (A10 - A01)`
    pub eta: f64,
    /// `2 arcsin sqrt(eta)`; the ridge runs over `gamma1` in `[gamma1_lo, pi]`.
    pub gamma1_lo: f64,
}

pub fn mixed_plateau_bounds(a: &PayoffMatrix) -> Result<PlateauBounds, GameError> {
    let [a00, a01, a10, _] = a.as_array();
    let eta = unit_ratio("eta", a10 - a00, a10 - a01)?;
    Ok(PlateauBounds { eta, gamma1_lo: 2.0 * libm::asin(libm::sqrt(eta)) })
}

fn unit_ratio(quantity: &'static str, num: f64, den: f64) -> Result<f64, GameError> {
    if den == 0.0 {
        return Err(GameError::Domain { quantity, value: f64::INFINITY });
    }
    let value = num / den;
    if !(0.0..=1.0).contains(&value) {
        return Err(GameError::Domain { quantity, value });
    }
    Ok(value)
}

/// One axis of a `gamma` grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
    /// Include `end` as the last point (`[start, end]`) or not (`[start, end)`).
    pub closed: bool,
}

impl Axis {
    pub fn closed(start: f64, end: f64, steps: usize) -> Self {
        Axis { start, end, steps, closed: true }
    }

    pub fn half_open(start: f64, end: f64, steps: usize) -> Self {
        Axis { start, end, steps, closed: false }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.steps < 2 {
            return Err(GameError::InvalidGrid("each axis needs at least 2 points"));
        }
        if !self.start.is_finite() || !self.end.is_finite() || self.end <= self.start {
            return Err(GameError::InvalidGrid("axis range must be finite and increasing"));
        }
        Ok(())
    }

    pub fn point(&self, k: usize) -> f64 {
        let intervals = if self.closed { self.steps - 1 } else { self.steps };
        if self.closed && k + 1 == self.steps {
            return self.end;
        }
        self.start + (self.end - self.start) * k as f64 / intervals as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.steps).map(|k| self.point(k)).collect()
    }
}

/// A rectangular grid over `(gamma1, gamma2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub gamma1: Axis,
    pub gamma2: Axis,
}

impl GridSpec {
    /// `[0, pi]^2`, endpoints included.
    pub fn half_square(steps1: usize, steps2: usize) -> Self {
        GridSpec { gamma1: Axis::closed(0.0, PI, steps1), gamma2: Axis::closed(0.0, PI, steps2) }
    }

    /// `[0, 2pi)^2`.
    pub fn full_torus(steps1: usize, steps2: usize) -> Self {
        GridSpec {
            gamma1: Axis::half_open(0.0, 2.0 * PI, steps1),
            gamma2: Axis::half_open(0.0, 2.0 * PI, steps2),
        }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        self.gamma1.validate()?;
        self.gamma2.validate()
    }

    pub fn len(&self) -> usize {
        self.gamma1.steps * self.gamma2.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points, `gamma1`-major.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let g2 = self.gamma2.points();
        self.gamma1
            .points()
            .into_iter()
            .flat_map(|x| g2.iter().map(move |&y| (x, y)))
            .collect()
    }
}

/// Which records a surface keeps per grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selection {
    /// The record with the largest payoff for player A.
    MaxForA,
    /// As `MaxForA`, restricted to symmetric equilibria (the mixed-strategy surface).
    SymmetricMaxForA,
    /// Every record.
    AllRecords,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceRow {
    pub gamma1: f64,
    pub gamma2: f64,
    pub kind: EquilibriumKind,
    pub a0_star: f64,
    pub payoff_a: f64,
    pub payoff_b: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SurfaceTable {
    pub rows: Vec<SurfaceRow>,
}

impl SurfaceTable {
    pub fn max_payoff_a(&self) -> Option<&SurfaceRow> {
        self.rows
            .iter()
            .max_by(|x, y| x.payoff_a.partial_cmp(&y.payoff_a).unwrap_or(Ordering::Equal))
    }
}

/// Ordering used for `MaxForA`: larger payoff first, then lower kind.
fn better_for_a(candidate: &EquilibriumRecord, incumbent: &EquilibriumRecord) -> bool {
    match candidate.payoff_a.partial_cmp(&incumbent.payoff_a) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Equal) => candidate.kind < incumbent.kind,
        _ => false,
    }
}

/// Surface rows for a single grid point.
pub fn surface_point(
    a: &PayoffMatrix,
    gamma1: f64,
    gamma2: f64,
    selection: Selection,
) -> Result<Vec<SurfaceRow>, GameError> {
    let gamma = CorrelationParams::new(gamma1, gamma2)?;
    let report = equilibria_at(a, &gamma);
    let f = report.functions;
    let row = |r: &EquilibriumRecord| SurfaceRow {
        gamma1,
        gamma2,
        kind: r.kind,
        a0_star: r.alpha.a0(),
        payoff_a: r.payoff_a,
        payoff_b: r.payoff_b,
        h_plus: f.h_plus,
        h_minus: f.h_minus,
        delta: f.delta,
    };
    let pick = |symmetric_only: bool| {
        report
            .records
            .iter()
            .filter(|r| !symmetric_only || r.kind.is_symmetric())
            .fold(None::<&EquilibriumRecord>, |best, r| match best {
                Some(b) if !better_for_a(r, b) => Some(b),
                _ => Some(r),
            })
            .map(row)
    };
    Ok(match selection {
        Selection::AllRecords => report.records.iter().map(row).collect(),
        Selection::MaxForA => pick(false).into_iter().collect(),
        Selection::SymmetricMaxForA => pick(true).into_iter().collect(),
    })
}

/// Equilibrium payoff surface over a `gamma` grid, `gamma1`-major.
pub fn payoff_surface(
    a: &PayoffMatrix,
    grid: &GridSpec,
    selection: Selection,
) -> Result<SurfaceTable, GameError> {
    grid.validate()?;
    let mut rows = Vec::with_capacity(grid.len());
    for (g1, g2) in grid.points() {
        rows.extend(surface_point(a, g1, g2, selection)?);
    }
    Ok(SurfaceTable { rows })
}
