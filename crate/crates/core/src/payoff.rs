//! Classical payoff tables, correlated payoff operators and the closed-form
//! payoff split into a pseudo-classical part and an interference part.

use crate::complex::Complex;
use crate::error::GameError;
use crate::operator::{
    basis_index, build_conversion, build_correlation, build_swap, build_swap_conversion,
    CorrelationParams, Operator4, StrategyVector,
};

/// Which player's payoff is requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    A,
    B,
}

/// Player A's classical 2x2 payoff table `A_ij`; player B receives `A_ji`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PayoffMatrix {
    entries: [[f64; 2]; 2],
}

impl PayoffMatrix {
    pub fn new(a00: f64, a01: f64, a10: f64, a11: f64) -> Result<Self, GameError> {
        if [a00, a01, a10, a11].iter().any(|x| !x.is_finite()) {
            return Err(GameError::NonFinite("payoff entry"));
        }
        Ok(PayoffMatrix { entries: [[a00, a01], [a10, a11]] })
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    /// Entries in basis order `(A00, A01, A10, A11)`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.entries[0][0], self.entries[0][1], self.entries[1][0], self.entries[1][1]]
    }

    /// `A01 < A11 < A00 < A10`.
    pub fn is_prisoners_dilemma(&self) -> bool {
        let [a00, a01, a10, a11] = self.as_array();
        a01 < a11 && a11 < a00 && a00 < a10
    }

    /// `tau(A) = A00 - A01 - A10 + A11`.
    pub fn tau(&self) -> f64 {
        let [a00, a01, a10, a11] = self.as_array();
        a00 - a01 - a10 + a11
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.as_array().iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// `max A_ij - min A_ij`.
    pub fn span(&self) -> f64 {
        let a = self.as_array();
        let hi = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = a.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    /// The uncorrelated payoff operator of player A, `diag(A00, A01, A10, A11)`.
    pub fn diagonal_operator(&self) -> Operator4 {
        Operator4::from_real_diagonal(self.as_array())
    }
}

/// `J^dagger(gamma) X J(gamma)` where `X` is `diag(A)` for player A and `S diag(A) S` for B.
pub fn correlated_payoff_operator(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    player: Player,
) -> Operator4 {
    let base = match player {
        Player::A => a.diagonal_operator(),
        Player::B => {
            let s = build_swap();
            s * a.diagonal_operator() * s
        }
    };
    let j = build_correlation(gamma);
    j.adjoint() * base * j
}

/// The split of player A's correlated payoff operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decomposition {
    /// `cos^2(g1/2) A + (cos^2(g2/2) - cos^2(g1/2)) SAS + sin^2(g2/2) CAC`.
    pub pseudo_classical: Operator4,
    /// `(i/2) sin g1 [A, S] + (i/2) sin g2 [A, T]`.
    pub interference: Operator4,
}

impl Decomposition {
    pub fn total(&self) -> Operator4 {
        self.pseudo_classical + self.interference
    }
}

pub fn pseudo_classical_operator(a: &PayoffMatrix, gamma: &CorrelationParams) -> Operator4 {
    let d = a.diagonal_operator();
    let s = build_swap();
    let c = build_conversion();
    let c1 = cos_half_sq(gamma.gamma1());
    let c2 = cos_half_sq(gamma.gamma2());
    let s2 = 1.0 - c2;
    d * c1 + (s * d * s) * (c2 - c1) + (c * d * c) * s2
}

pub fn interference_operator(a: &PayoffMatrix, gamma: &CorrelationParams) -> Operator4 {
    let d = a.diagonal_operator();
    let half_i = Complex::raw(0.0, 0.5);
    let w1 = half_i.scale(libm::sin(gamma.gamma1()));
    let w2 = half_i.scale(libm::sin(gamma.gamma2()));
    d.commutator(&build_swap()) * w1 + d.commutator(&build_swap_conversion()) * w2
}

pub fn decompose(a: &PayoffMatrix, gamma: &CorrelationParams) -> Decomposition {
    Decomposition {
        pseudo_classical: pseudo_classical_operator(a, gamma),
        interference: interference_operator(a, gamma),
    }
}

fn cos_half_sq(g: f64) -> f64 {
    let c = libm::cos(g / 2.0);
    c * c
}

/// Scalar functions of `(A, gamma)` that govern the equilibrium structure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GameFunctions {
    pub tau: f64,
    /// `(A00 - A11) sin g2`
    pub g_plus: f64,
    /// `(A01 - A10) sin g1`
    pub g_minus: f64,
    /// `(A00 - A11) cos g2`
    pub gp_plus: f64,
    /// `(A01 - A10) cos g1`
    pub gp_minus: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    /// `sqrt(G+^2 - G-^2)`, or 0 when `|G-| > |G+|`.
    pub delta: f64,
}

impl GameFunctions {
    /// True when `|G-| > |G+|`: no stable phase choice exists.
    pub fn phase_scrambled(&self) -> bool {
        self.g_minus.abs() > self.g_plus.abs()
    }
}

pub fn game_functions(a: &PayoffMatrix, gamma: &CorrelationParams) -> GameFunctions {
    let [a00, a01, a10, a11] = a.as_array();
    let (g1, g2) = (gamma.gamma1(), gamma.gamma2());
    let tau = a.tau();
    let g_plus = (a00 - a11) * libm::sin(g2);
    let g_minus = (a01 - a10) * libm::sin(g1);
    let gp_plus = (a00 - a11) * libm::cos(g2);
    let gp_minus = (a01 - a10) * libm::cos(g1);
    let disc = g_plus * g_plus - g_minus * g_minus;
    GameFunctions {
        tau,
        g_plus,
        g_minus,
        gp_plus,
        gp_minus,
        h_plus: tau + (gp_plus + gp_minus),
        h_minus: tau - (gp_plus + gp_minus),
        delta: if disc >= 0.0 { libm::sqrt(disc) } else { 0.0 },
    }
}

/// Player A's payoff split into its two contributions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PayoffSplit {
    pub pseudo_classical: f64,
    pub interference: f64,
}

impl PayoffSplit {
    pub fn total(&self) -> f64 {
        self.pseudo_classical + self.interference
    }
}

/// Diagonal `A^pc_ij(gamma)` in basis order.
pub fn pseudo_classical_diagonal(a: &PayoffMatrix, gamma: &CorrelationParams) -> [f64; 4] {
    pseudo_classical_operator(a, gamma).real_diagonal()
}

pub fn payoff_components(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    alpha: &StrategyVector,
    beta: &StrategyVector,
) -> PayoffSplit {
    let pc = pseudo_classical_diagonal(a, gamma);
    let f = game_functions(a, gamma);
    split_with(&pc, &f, alpha, beta)
}

/// Closed-form evaluation given precomputed diagonal and game functions.
pub(crate) fn split_with(
    pc: &[f64; 4],
    f: &GameFunctions,
    alpha: &StrategyVector,
    beta: &StrategyVector,
) -> PayoffSplit {
    let x = [alpha.a0() * alpha.a0(), alpha.a1() * alpha.a1()];
    let y = [beta.a0() * beta.a0(), beta.a1() * beta.a1()];
    let mut pseudo_classical = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            pseudo_classical += x[i] * y[j] * pc[basis_index(i, j)];
        }
    }
    let weight = alpha.a0() * alpha.a1() * beta.a0() * beta.a1();
    let (xi, chi) = (alpha.phase(), beta.phase());
    let interference =
        -weight * (f.g_plus * libm::sin(xi + chi) + f.g_minus * libm::sin(xi - chi));
    PayoffSplit { pseudo_classical, interference }
}

/// `Pi_X(alpha, beta; gamma)`; player B's payoff uses `Pi_B(alpha, beta) = Pi_A(beta, alpha)`.
pub fn payoff(
    a: &PayoffMatrix,
    gamma: &CorrelationParams,
    alpha: &StrategyVector,
    beta: &StrategyVector,
    player: Player,
) -> f64 {
    match player {
        Player::A => payoff_components(a, gamma, alpha, beta).total(),
        Player::B => payoff_components(a, gamma, beta, alpha).total(),
    }
}

/// Caches the `gamma`-dependent pieces for repeated payoff evaluation.
#[derive(Clone, Copy, Debug)]
pub struct PayoffEvaluator {
    pc: [f64; 4],
    functions: GameFunctions,
}

impl PayoffEvaluator {
    pub fn new(a: &PayoffMatrix, gamma: &CorrelationParams) -> Self {
        PayoffEvaluator {
            pc: pseudo_classical_diagonal(a, gamma),
            functions: game_functions(a, gamma),
        }
    }

    pub fn functions(&self) -> &GameFunctions {
        &self.functions
    }

    pub fn pseudo_classical_diagonal(&self) -> &[f64; 4] {
        &self.pc
    }

    pub fn split(&self, alpha: &StrategyVector, beta: &StrategyVector) -> PayoffSplit {
        split_with(&self.pc, &self.functions, alpha, beta)
    }

    pub fn payoff(&self, alpha: &StrategyVector, beta: &StrategyVector, player: Player) -> f64 {
        match player {
            Player::A => self.split(alpha, beta).total(),
            Player::B => self.split(beta, alpha).total(),
        }
    }
}
