//! Entanglement of joint strategy states and the average payoff operator
//! under uniformly random correlation.

use core::f64::consts::TAU;

use crate::complex::Complex;
use crate::error::GameError;
use crate::operator::{build_conversion, CorrelationParams, JointState, Operator4};
use crate::payoff::{correlated_payoff_operator, PayoffMatrix, Player};

/// Eigenvalues smaller than this contribute nothing to the entropy.
const EIGEN_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn ln_scale(self) -> f64 {
        match self {
            LogBase::Natural => 1.0,
            LogBase::Two => core::f64::consts::LOG2_E,
        }
    }
}

/// A 2x2 density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix2 {
    m: [[Complex; 2]; 2],
}

impl DensityMatrix2 {
    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.m[row][col]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re() + self.m[1][1].re()
    }

    /// Largest deviation from `rho = rho^dag`.
    pub fn self_adjoint_deviation(&self) -> f64 {
        let d0 = self.m[0][0].im().abs();
        let d1 = self.m[1][1].im().abs();
        let off = (self.m[0][1] - self.m[1][0].conj()).abs();
        d0.max(d1).max(off)
    }

    /// Eigenvalues in ascending order, from the trace and determinant.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (p, q) = (self.m[0][0].re(), self.m[1][1].re());
        let half_trace = 0.5 * (p + q);
        let radius = libm::hypot(0.5 * (p - q), self.m[0][1].abs());
        [half_trace - radius, half_trace + radius]
    }

    /// Von Neumann entropy `-sum l log l`.
    pub fn entropy(&self, base: LogBase) -> f64 {
        let s: f64 = self.eigenvalues().iter().map(|&l| xlogx(l)).sum();
        (-s * base.ln_scale()).max(0.0)
    }
}

fn xlogx(x: f64) -> f64 {
    if x < EIGEN_FLOOR {
        0.0
    } else {
        x * libm::log(x)
    }
}

/// Partial trace of a pure joint state over the other subsystem.
pub fn reduced_density(state: &JointState, subsystem: Subsystem) -> DensityMatrix2 {
    let psi = |i: usize, j: usize| state.amp(i, j);
    let mut m = [[Complex::ZERO; 2]; 2];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            for k in 0..2 {
                *cell += match subsystem {
                    Subsystem::A => psi(r, k) * psi(c, k).conj(),
                    Subsystem::B => psi(k, r) * psi(k, c).conj(),
                };
            }
        }
    }
    DensityMatrix2 { m }
}

/// Entropy of player A's reduced state.
pub fn entanglement_entropy(state: &JointState, base: LogBase) -> f64 {
    reduced_density(state, Subsystem::A).entropy(base)
}

/// Binary entropy `-l log l - (1 - l) log(1 - l)`.
pub fn entropy_of_lambda(lambda: f64, base: LogBase) -> Result<f64, GameError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(GameError::Domain { quantity: "lambda", value: lambda });
    }
    Ok((-(xlogx(lambda) + xlogx(1.0 - lambda)) * base.ln_scale()).max(0.0))
}

/// Average of player A's correlated payoff operator over `gamma` uniform on
/// the torus, by the periodic trapezoid rule with `n_quad` nodes per axis.
pub fn moderated_operator(a: &PayoffMatrix, n_quad: usize) -> Result<Operator4, GameError> {
    if n_quad < 8 {
        return Err(GameError::InvalidGrid("n_quad must be at least 8"));
    }
    let h = TAU / n_quad as f64;
    let mut sum = Operator4::zero();
    for i in 0..n_quad {
        for j in 0..n_quad {
            let gamma = CorrelationParams::new(h * i as f64, h * j as f64)?;
            sum = sum + correlated_payoff_operator(a, &gamma, Player::A);
        }
    }
    Ok(sum * (1.0 / (n_quad * n_quad) as f64))
}

/// `A/2 + CAC/2`, the exact average of the correlated payoff operator.
pub fn moderation_closed_form(a: &PayoffMatrix) -> Operator4 {
    let c = build_conversion();
    let d = a.diagonal_operator();
    (d + c * d * c) * 0.5
}

/// Payoff table of the moderated game: each outcome pays the average of
/// itself and its conversion image.
pub fn moderated_payoffs(a: &PayoffMatrix) -> Result<PayoffMatrix, GameError> {
    let [a00, a01, a10, a11] = a.as_array();
    let (same, cross) = (0.5 * (a00 + a11), 0.5 * (a01 + a10));
    PayoffMatrix::new(same, cross, cross, same)
}
