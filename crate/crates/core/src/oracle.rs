//! Brute-force checks that do not rely on the closed-form payoff.
//!
//! Deviation payoffs are expectations of the correlated payoff operators on
//! product states, scanned over a finite strategy grid.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::equilibria::EquilibriumRecord;
use crate::error::GameError;
use crate::operator::{quadratic_form, reduce_angle, CorrelationParams, JointState, Operator4, StrategyVector};
use crate::payoff::{correlated_payoff_operator, game_functions, PayoffMatrix, Player};

/// Default deviation tolerance for [`verify_nash`].
pub const DEFAULT_TOL: f64 = 1e-6;

/// Largest strategy grid accepted by [`discrete_equilibria`].
pub const MAX_DISCRETE_GRID: usize = 10_000;

/// Opponent phases used to average over a phase-scrambled strategy.
const SCRAMBLE_PHASES: usize = 8;

/// Index of a strategy in a [`StrategyGrid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub amp: usize,
    pub phase: usize,
}

/// Strategies `a0 = k/(n_amp - 1)` crossed with phases `2 pi m / n_phase`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyGrid {
    n_amp: usize,
    n_phase: usize,
}

impl StrategyGrid {
    pub fn new(n_amp: usize, n_phase: usize) -> Result<Self, GameError> {
        if n_amp < 2 {
            return Err(GameError::InvalidGrid("n_amp must be at least 2"));
        }
        if n_phase < 1 {
            return Err(GameError::InvalidGrid("n_phase must be at least 1"));
        }
        Ok(StrategyGrid { n_amp, n_phase })
    }

    pub fn n_amp(&self) -> usize {
        self.n_amp
    }

    pub fn n_phase(&self) -> usize {
        self.n_phase
    }

    pub fn len(&self) -> usize {
        self.n_amp * self.n_phase
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amp_step(&self) -> f64 {
        1.0 / (self.n_amp - 1) as f64
    }

    pub fn phase_step(&self) -> f64 {
        TAU / self.n_phase as f64
    }

    pub fn amplitude(&self, k: usize) -> f64 {
        if k + 1 == self.n_amp {
            1.0
        } else {
            k as f64 * self.amp_step()
        }
    }

    pub fn phase(&self, m: usize) -> f64 {
        m as f64 * self.phase_step()
    }

    pub fn strategy(&self, p: GridPoint) -> StrategyVector {
        StrategyVector::new(self.amplitude(p.amp), self.phase(p.phase))
            .unwrap_or(StrategyVector::KET0)
    }

    /// All grid points, amplitude-major.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.n_amp).flat_map(move |amp| (0..self.n_phase).map(move |phase| GridPoint { amp, phase }))
    }

    /// The phase of `|0>` or of `|1>` alone is a global phase.
    pub fn phase_degenerate(&self, p: GridPoint) -> bool {
        p.amp == 0 || p.amp + 1 == self.n_amp
    }

    /// Largest spacing in the angle `theta = arccos a0` or in phase.
    pub fn max_spacing(&self) -> f64 {
        // arccos is steepest next to a0 = 1
        let theta = libm::acos(self.amplitude(self.n_amp - 2));
        if self.n_phase > 1 {
            theta.max(self.phase_step())
        } else {
            theta
        }
    }

    /// Whether `s` lies within one grid step of `target`. Phases are not
    /// compared when either amplitude is 0 or 1, or when `ignore_phase` is set.
    pub fn within_one_step(&self, s: &StrategyVector, target: &StrategyVector, ignore_phase: bool) -> bool {
        const SLACK: f64 = 1e-9;
        if (s.a0() - target.a0()).abs() > self.amp_step() + SLACK {
            return false;
        }
        let degenerate = |x: &StrategyVector| x.a0() < SLACK || x.a0() > 1.0 - SLACK;
        if ignore_phase || self.n_phase == 1 || degenerate(s) || degenerate(target) {
            return true;
        }
        circular_distance(s.phase(), target.phase()) <= self.phase_step() + SLACK
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn circular_distance(x: f64, y: f64) -> f64 {
    let d = reduce_angle(x - y);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

fn pure_payoff(op: &Operator4, alpha: &StrategyVector, beta: &StrategyVector) -> f64 {
    quadratic_form(op, JointState::product(alpha, beta).amplitudes()).re()
}

/// A candidate strategy for one player.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Play {
    Pure(StrategyVector),
    /// Amplitude `a0` with a uniformly random phase.
    PhaseScrambled(f64),
}

impl Play {
    fn samples(&self) -> Vec<StrategyVector> {
        match *self {
            Play::Pure(s) => vec![s],
            Play::PhaseScrambled(a0) => (0..SCRAMBLE_PHASES)
                .filter_map(|m| StrategyVector::new(a0, TAU * m as f64 / SCRAMBLE_PHASES as f64).ok())
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviationReport {
    /// Best grid payoff gain over the candidate for player A (never negative).
    pub max_gain_a: f64,
    pub max_gain_b: f64,
    pub best_deviation_a: StrategyVector,
    pub best_deviation_b: StrategyVector,
    pub tol: f64,
    /// Discretisation allowance `c h^2` added to `tol`.
    pub allowance: f64,
    /// `c` in the allowance: half the spread of the payoff entries.
    pub curvature: f64,
    /// `h` in the allowance: the widest grid spacing in `arccos a0` or phase.
    pub spacing: f64,
    pub is_nash: bool,
}

/// Checks that neither player gains more than `tol` plus the discretisation
/// allowance by a unilateral deviation to any grid strategy.
pub fn verify_nash(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    alpha: &StrategyVector,
    beta: &StrategyVector,
    grid: &StrategyGrid,
    tol: f64,
) -> Result<DeviationReport, GameError> {
    verify_play(a, gamma, &Play::Pure(*alpha), &Play::Pure(*beta), grid, tol)
}

/// [`verify_nash`] for candidates that may randomise their phase.
pub fn verify_play(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    alpha: &Play,
    beta: &Play,
    grid: &StrategyGrid,
    tol: f64,
) -> Result<DeviationReport, GameError> {
    if grid.len() < 4 {
        return Err(GameError::InvalidGrid("verification grid needs at least 4 strategies"));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(GameError::Domain { quantity: "tol", value: tol });
    }
    let op_a = correlated_payoff_operator(a, gamma, Player::A);
    let op_b = correlated_payoff_operator(a, gamma, Player::B);
    let alphas = alpha.samples();
    let betas = beta.samples();

    // Candidate payoffs, averaged over any phase randomisation.
    let mean = |op: &Operator4, xs: &[StrategyVector], ys: &[StrategyVector]| {
        let mut total = 0.0;
        for x in xs {
            for y in ys {
                total += pure_payoff(op, x, y);
            }
        }
        total / (xs.len() * ys.len()) as f64
    };
    let base_a = mean(&op_a, &alphas, &betas);
    let base_b = mean(&op_b, &alphas, &betas);

    let (mut gain_a, mut best_a) = (0.0, alphas[0]);
    let (mut gain_b, mut best_b) = (0.0, betas[0]);
    for p in grid.points() {
        let s = grid.strategy(p);
        let ga = mean(&op_a, &[s], &betas) - base_a;
        if ga > gain_a {
            gain_a = ga;
            best_a = s;
        }
        let gb = mean(&op_b, &alphas, &[s]) - base_b;
        if gb > gain_b {
            gain_b = gb;
            best_b = s;
        }
    }
    let curvature = 0.5 * a.span();
    let spacing = grid.max_spacing();
    let allowance = curvature * spacing * spacing;
    let bound = tol + allowance;
    Ok(DeviationReport {
        max_gain_a: gain_a,
        max_gain_b: gain_b,
        best_deviation_a: best_a,
        best_deviation_b: best_b,
        tol,
        allowance,
        curvature,
        spacing,
        is_nash: gain_a <= bound && gain_b <= bound,
    })
}

/// Verifies an analytic record; phase-scrambled records are checked as
/// phase-randomised strategies.
pub fn verify_record(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    record: &EquilibriumRecord,
    grid: &StrategyGrid,
    tol: f64,
) -> Result<DeviationReport, GameError> {
    if record.phase_scrambled() {
        verify_play(
            a,
            gamma,
            &Play::PhaseScrambled(record.alpha.a0()),
            &Play::PhaseScrambled(record.beta.a0()),
            grid,
            tol,
        )
    } else {
        verify_nash(a, gamma, &record.alpha, &record.beta, grid, tol)
    }
}

/// A pair of grid strategies, `alpha` for player A.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPair {
    pub alpha: GridPoint,
    pub beta: GridPoint,
}

/// Pure equilibria of the game restricted to grid strategies, as grid indices.
pub fn discrete_equilibrium_pairs(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    grid: &StrategyGrid,
    tol: f64,
) -> Result<Vec<GridPair>, GameError> {
    let n = grid.len();
    if n > MAX_DISCRETE_GRID {
        return Err(GameError::GridTooLarge { size: n, limit: MAX_DISCRETE_GRID });
    }
    let points: Vec<GridPoint> = grid.points().collect();
    let strategies: Vec<StrategyVector> = points.iter().map(|&p| grid.strategy(p)).collect();
    let op_a = correlated_payoff_operator(a, gamma, Player::A);
    let op_b = correlated_payoff_operator(a, gamma, Player::B);

    // pay_a[i * n + j]: payoff to A when A plays i and B plays j.
    let mut pay_a = vec![0.0; n * n];
    let mut pay_b = vec![0.0; n * n];
    for (i, x) in strategies.iter().enumerate() {
        for (j, y) in strategies.iter().enumerate() {
            pay_a[i * n + j] = pure_payoff(&op_a, x, y);
            pay_b[i * n + j] = pure_payoff(&op_b, x, y);
        }
    }
    // Best reply values: A against each column, B against each row.
    let mut best_a = vec![f64::NEG_INFINITY; n];
    let mut best_b = vec![f64::NEG_INFINITY; n];
    for i in 0..n {
        for j in 0..n {
            best_a[j] = best_a[j].max(pay_a[i * n + j]);
            best_b[i] = best_b[i].max(pay_b[i * n + j]);
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if pay_a[i * n + j] >= best_a[j] - tol && pay_b[i * n + j] >= best_b[i] - tol {
                out.push(GridPair { alpha: points[i], beta: points[j] });
            }
        }
    }
    Ok(out)
}

/// Pure equilibria of the game restricted to grid strategies.
pub fn discrete_equilibria(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    grid: &StrategyGrid,
    tol: f64,
) -> Result<Vec<(StrategyVector, StrategyVector)>, GameError> {
    Ok(discrete_equilibrium_pairs(a, gamma, grid, tol)?
        .into_iter()
        .map(|p| (grid.strategy(p.alpha), grid.strategy(p.beta)))
        .collect())
}

fn adjacent_points(grid: &StrategyGrid, p: GridPoint, q: GridPoint) -> bool {
    if p.amp.abs_diff(q.amp) > 1 {
        return false;
    }
    if grid.phase_degenerate(p) || grid.phase_degenerate(q) {
        return true;
    }
    let d = p.phase.abs_diff(q.phase);
    d <= 1 || d + 1 == grid.n_phase
}

/// Groups pairs into clusters of grid-adjacent cells (both players adjacent).
pub fn cluster_pairs(grid: &StrategyGrid, pairs: &[GridPair]) -> Vec<Vec<GridPair>> {
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..pairs.len() {
        for j in (i + 1)..pairs.len() {
            if adjacent_points(grid, pairs[i].alpha, pairs[j].alpha)
                && adjacent_points(grid, pairs[i].beta, pairs[j].beta)
            {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut clusters: Vec<(usize, Vec<GridPair>)> = Vec::new();
    for (i, pair) in pairs.iter().enumerate() {
        let r = root(&mut parent, i);
        match clusters.iter_mut().find(|(k, _)| *k == r) {
            Some((_, members)) => members.push(*pair),
            None => clusters.push((r, vec![*pair])),
        }
    }
    clusters.into_iter().map(|(_, members)| members).collect()
}

/// One state of a phase best-response trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseState {
    pub xi: f64,
    pub chi: f64,
    /// Player who moved into this state; `None` for the initial state.
    pub mover: Option<Player>,
    /// Interference payoff of player A at this state.
    pub interference_a: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTrajectory {
    pub states: Vec<PhaseState>,
}

impl PhaseTrajectory {
    pub fn last(&self) -> &PhaseState {
        &self.states[self.states.len() - 1]
    }

    /// Mean of A's interference payoff over the states reached by moves.
    pub fn mean_interference(&self) -> f64 {
        let moved = &self.states[1..];
        moved.iter().map(|s| s.interference_a).sum::<f64>() / moved.len() as f64
    }

    /// Largest phase change (circular) in the last `window` moves.
    pub fn tail_movement(&self, window: usize) -> f64 {
        let n = self.states.len();
        let start = n.saturating_sub(window + 1);
        self.states[start..]
            .windows(2)
            .map(|w| circular_distance(w[0].xi, w[1].xi).max(circular_distance(w[0].chi, w[1].chi)))
            .fold(0.0, f64::max)
    }

    /// First move after which no phase changes by more than `eps`, if any.
    pub fn settled_after(&self, eps: f64) -> Option<usize> {
        let n = self.states.len();
        let mut settled = None;
        for k in (1..n).rev() {
            let (p, q) = (&self.states[k - 1], &self.states[k]);
            if circular_distance(p.xi, q.xi) > eps || circular_distance(p.chi, q.chi) > eps {
                break;
            }
            settled = Some(k - 1);
        }
        settled
    }
}

/// Phase that maximises `-(p sin x + q cos x)`, keeping `current` when it is
/// already optimal.
fn phase_response(p: f64, q: f64, current: f64) -> f64 {
    if p == 0.0 && q == 0.0 {
        return current;
    }
    let value = |x: f64| -(p * libm::sin(x) + q * libm::cos(x));
    let best = reduce_angle(libm::atan2(-p, -q));
    if value(current) >= value(best) {
        current
    } else {
        best
    }
}

/// Alternating exact best responses in phase with amplitudes held fixed.
///
/// A moves first; each of the `steps` moves is one player's best response
/// to the other's current phase, which maximises the mover's interference
/// payoff.
pub fn phase_dynamics(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    amp_a: f64,
    amp_b: f64,
    steps: usize,
    init: (f64, f64),
) -> Result<PhaseTrajectory, GameError> {
    for amp in [amp_a, amp_b] {
        if !(amp > 0.0 && amp < 1.0) {
            return Err(GameError::AmplitudeOutOfRange(amp));
        }
    }
    if steps == 0 {
        return Err(GameError::InvalidGrid("phase dynamics needs at least one step"));
    }
    if !init.0.is_finite() || !init.1.is_finite() {
        return Err(GameError::NonFinite("initial phase"));
    }
    let f = game_functions(a, gamma);
    let weight = amp_a * libm::sqrt(1.0 - amp_a * amp_a) * amp_b * libm::sqrt(1.0 - amp_b * amp_b);
    let interference = |xi: f64, chi: f64| {
        -weight * (f.g_plus * libm::sin(xi + chi) + f.g_minus * libm::sin(xi - chi))
    };
    let (sum, diff) = (f.g_plus + f.g_minus, f.g_plus - f.g_minus);
    let (mut xi, mut chi) = (reduce_angle(init.0), reduce_angle(init.1));
    let mut states = Vec::with_capacity(steps + 1);
    states.push(PhaseState { xi, chi, mover: None, interference_a: interference(xi, chi) });
    for k in 0..steps {
        let mover = if k % 2 == 0 {
            xi = phase_response(sum * libm::cos(chi), diff * libm::sin(chi), xi);
            Player::A
        } else {
            chi = phase_response(sum * libm::cos(xi), diff * libm::sin(xi), chi);
            Player::B
        };
        states.push(PhaseState { xi, chi, mover: Some(mover), interference_a: interference(xi, chi) });
    }
    Ok(PhaseTrajectory { states })
}
