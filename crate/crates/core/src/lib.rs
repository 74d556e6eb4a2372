//! Two-player quantum games with correlated strategies.
//!
//! Players A and B each hold a qubit strategy `a0|0> + a1 e^{i xi}|1>`. The
//! joint product state is passed through the correlation unitary `J(gamma)`
//! and payoffs are expectations of `J^dag A J` (player B sees the swapped
//! operator). The crate provides the operator algebra, the closed-form
//! payoff split into pseudo-classical and interference parts, equilibrium
//! classification, a discretised Nash oracle, and entanglement and
//! moderation analysis.

#![no_std]

extern crate alloc;

mod error;

pub mod analysis;
pub mod complex;
pub mod equilibria;
pub mod operator;
pub mod oracle;
pub mod payoff;

pub use complex::Complex;
pub use equilibria::{
    classify_edges, equilibria_at, interior_family, mixed_plateau_bounds, optimal_edge_gamma,
    payoff_surface, phase_equilibrium, symmetric_interior, EquilibriumKind, EquilibriumRecord,
    EquilibriumReport, GridSpec, Selection, SurfaceRow, SurfaceTable,
};
pub use error::GameError;
pub use operator::{
    build_conversion, build_correlation, build_swap, build_swap_conversion, expectation,
    joint_state, CorrelationParams, JointState, Operator4, StrategyVector,
};
pub use payoff::{
    correlated_payoff_operator, decompose, game_functions, payoff, payoff_components,
    GameFunctions, PayoffMatrix, Player,
};
