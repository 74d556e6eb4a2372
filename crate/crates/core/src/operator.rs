//! Linear algebra on the joint two-player Hilbert space `C^2 (x) C^2`.
//!
//! Basis order is fixed to `|00>, |01>, |10>, |11>` everywhere; the first
//! label is player A's strategy and the second is player B's.

use core::f64::consts::TAU;
use core::ops::{Add, Mul, Sub};

use crate::complex::Complex;
use crate::error::GameError;

/// Self-adjointness tolerance used by [`expectation`].
pub const SELF_ADJOINT_TOL: f64 = 1e-10;
/// Unitarity tolerance for correlation operators.
pub const UNITARY_TOL: f64 = 1e-12;
/// Normalisation slack accepted by state constructors.
pub const NORM_TOL: f64 = 1e-12;

/// Index of the product basis state `|i, j>`.
#[inline]
pub const fn basis_index(i: usize, j: usize) -> usize {
    2 * i + j
}

/// Reduces an angle to `[0, 2pi)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let mut r = libm::fmod(theta, TAU);
    if r < 0.0 {
        r += TAU;
    }
    if r >= TAU {
        r = 0.0;
    }
    r
}

/// One player's pure strategy `(a0, a1 e^{i phase})`.
///
/// The global phase is fixed so that the first amplitude is real and
/// non-negative. When `a0 == 0` the stored phase is the phase of the second
/// amplitude, which is physically irrelevant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyVector {
    a0: f64,
    a1: f64,
    phase: f64,
}

impl StrategyVector {
    /// The basis strategy `|0>`.
    pub const KET0: StrategyVector = StrategyVector { a0: 1.0, a1: 0.0, phase: 0.0 };
    /// The basis strategy `|1>`.
    pub const KET1: StrategyVector = StrategyVector { a0: 0.0, a1: 1.0, phase: 0.0 };

    /// Strategy with first amplitude `a0` and relative phase `phase`.
    pub fn new(a0: f64, phase: f64) -> Result<Self, GameError> {
        if !a0.is_finite() || !phase.is_finite() {
            return Err(GameError::NonFinite("strategy parameter"));
        }
        if !(0.0..=1.0 + NORM_TOL).contains(&a0) {
            return Err(GameError::AmplitudeOutOfRange(a0));
        }
        let a0 = a0.min(1.0);
        Ok(StrategyVector {
            a0,
            a1: libm::sqrt((1.0 - a0 * a0).max(0.0)),
            phase: reduce_angle(phase),
        })
    }

    /// Pure basis strategy `|bit>`.
    pub fn basis(bit: usize) -> Self {
        match bit {
            0 => Self::KET0,
            1 => Self::KET1,
            _ => panic!("two-strategy game has no basis strategy {bit}"),
        }
    }

    /// Canonicalises an arbitrary normalized pair of amplitudes.
    pub fn from_amplitudes(c0: Complex, c1: Complex) -> Result<Self, GameError> {
        let norm_sqr = c0.norm_sqr() + c1.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(GameError::NotNormalized { norm_sqr });
        }
        let norm = libm::sqrt(norm_sqr);
        let a0 = c0.abs() / norm;
        let a1 = c1.abs() / norm;
        let phase = if a0 == 0.0 {
            c1.arg()
        } else if a1 == 0.0 {
            0.0
        } else {
            c1.arg() - c0.arg()
        };
        Ok(StrategyVector { a0, a1, phase: reduce_angle(phase) })
    }

    #[inline]
    pub fn a0(&self) -> f64 {
        self.a0
    }

    #[inline]
    pub fn a1(&self) -> f64 {
        self.a1
    }

    /// Relative phase in `[0, 2pi)`.
    #[inline]
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Probability of playing the classical strategy `|0>`.
    #[inline]
    pub fn probability0(&self) -> f64 {
        self.a0 * self.a0
    }

    /// `(alpha_0, alpha_1)` as complex amplitudes.
    pub fn amplitudes(&self) -> [Complex; 2] {
        [Complex::raw(self.a0, 0.0), Complex::cis(self.phase).scale(self.a1)]
    }

    /// Same amplitudes, different phase.
    pub fn with_phase(&self, phase: f64) -> Self {
        StrategyVector { phase: reduce_angle(phase), ..*self }
    }
}

/// The coordinator's correlation parameters `(gamma1, gamma2)`, stored in `[0, 2pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CorrelationParams {
    gamma1: f64,
    gamma2: f64,
}

impl CorrelationParams {
    /// No correlation: `J = I`.
    pub const ZERO: CorrelationParams = CorrelationParams { gamma1: 0.0, gamma2: 0.0 };

    pub fn new(gamma1: f64, gamma2: f64) -> Result<Self, GameError> {
        if !gamma1.is_finite() || !gamma2.is_finite() {
            return Err(GameError::NonFinite("correlation angle"));
        }
        Ok(CorrelationParams {
            gamma1: reduce_angle(gamma1),
            gamma2: reduce_angle(gamma2),
        })
    }

    #[inline]
    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    #[inline]
    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }
}

/// A normalized vector of the joint strategy space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointState {
    amps: [Complex; 4],
}

impl JointState {
    pub fn new(amps: [Complex; 4]) -> Result<Self, GameError> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(GameError::NotNormalized { norm_sqr });
        }
        Ok(JointState { amps })
    }

    pub(crate) fn from_raw(amps: [Complex; 4]) -> Self {
        JointState { amps }
    }

    /// Product basis state `|i, j>`.
    pub fn basis(i: usize, j: usize) -> Self {
        let mut amps = [Complex::ZERO; 4];
        amps[basis_index(i, j)] = Complex::ONE;
        JointState { amps }
    }

    /// Uncorrelated product `|alpha>_A |beta>_B`.
    pub fn product(alpha: &StrategyVector, beta: &StrategyVector) -> Self {
        let a = alpha.amplitudes();
        let b = beta.amplitudes();
        let mut amps = [Complex::ZERO; 4];
        for i in 0..2 {
            for j in 0..2 {
                amps[basis_index(i, j)] = a[i] * b[j];
            }
        }
        JointState { amps }
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex; 4] {
        &self.amps
    }

    #[inline]
    pub fn amp(&self, i: usize, j: usize) -> Complex {
        self.amps[basis_index(i, j)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &JointState) -> Complex {
        let mut acc = Complex::ZERO;
        for (a, b) in self.amps.iter().zip(other.amps.iter()) {
            acc += a.conj() * *b;
        }
        acc
    }
}

/// A 4x4 complex matrix in the product basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator4 {
    m: [[Complex; 4]; 4],
}

impl Operator4 {
    pub fn from_entries(m: [[Complex; 4]; 4]) -> Self {
        Operator4 { m }
    }

    pub fn zero() -> Self {
        Operator4 { m: [[Complex::ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        Self::from_real_diagonal([1.0; 4])
    }

    pub fn from_real_diagonal(d: [f64; 4]) -> Self {
        let mut op = Self::zero();
        for (k, v) in d.into_iter().enumerate() {
            op.m[k][k] = Complex::raw(v, 0.0);
        }
        op
    }

    /// Permutation matrix sending `|i,j>` to `|map(i,j)>`.
    fn permutation(map: impl Fn(usize, usize) -> (usize, usize)) -> Self {
        let mut op = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                let (ti, tj) = map(i, j);
                op.m[basis_index(ti, tj)][basis_index(i, j)] = Complex::ONE;
            }
        }
        op
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> Complex {
        self.m[row][col]
    }

    #[inline]
    pub fn entries(&self) -> &[[Complex; 4]; 4] {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.m[c][r] = self.m[r][c].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex; 4]) -> [Complex; 4] {
        let mut out = [Complex::ZERO; 4];
        for (r, row) in self.m.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                out[r] += *x * v[c];
            }
        }
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Operator4) -> Self {
        *self * *other - *other * *self
    }

    pub fn scale(&self, k: Complex) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * k;
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..4).fold(Complex::ZERO, |acc, k| acc + self.m[k][k])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator4) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).abs());
            }
        }
        worst
    }

    pub fn self_adjoint_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.self_adjoint_deviation() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..4).all(|r| (0..4).all(|c| r == c || self.m[r][c].abs() <= tol))
    }

    /// Real parts of the diagonal.
    pub fn real_diagonal(&self) -> [f64; 4] {
        [self.m[0][0].re(), self.m[1][1].re(), self.m[2][2].re(), self.m[3][3].re()]
    }
}

impl Mul for Operator4 {
    type Output = Operator4;
    fn mul(self, rhs: Operator4) -> Operator4 {
        let mut out = Operator4::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = Complex::ZERO;
                for k in 0..4 {
                    acc += self.m[r][k] * rhs.m[k][c];
                }
                out.m[r][c] = acc;
            }
        }
        out
    }
}

impl Mul<f64> for Operator4 {
    type Output = Operator4;
    fn mul(self, k: f64) -> Operator4 {
        self.scale(Complex::raw(k, 0.0))
    }
}

impl Mul<Complex> for Operator4 {
    type Output = Operator4;
    fn mul(self, k: Complex) -> Operator4 {
        self.scale(k)
    }
}

impl Add for Operator4 {
    type Output = Operator4;
    fn add(mut self, rhs: Operator4) -> Operator4 {
        for r in 0..4 {
            for c in 0..4 {
                self.m[r][c] += rhs.m[r][c];
            }
        }
        self
    }
}

impl Sub for Operator4 {
    type Output = Operator4;
    fn sub(mut self, rhs: Operator4) -> Operator4 {
        for r in 0..4 {
            for c in 0..4 {
                self.m[r][c] = self.m[r][c] - rhs.m[r][c];
            }
        }
        self
    }
}

/// Swap `S|i,j> = |j,i>`.
pub fn build_swap() -> Operator4 {
    Operator4::permutation(|i, j| (j, i))
}

/// Simultaneous renaming `C|i,j> = |1-i, 1-j>`.
pub fn build_conversion() -> Operator4 {
    Operator4::permutation(|i, j| (1 - i, 1 - j))
}

/// Swap combined with renaming, `T|i,j> = |1-j, 1-i>`; equals `SC`.
pub fn build_swap_conversion() -> Operator4 {
    Operator4::permutation(|i, j| (1 - j, 1 - i))
}

/// Correlation unitary `J(gamma) = exp(i gamma1 S/2) exp(i gamma2 T/2)`.
///
/// Both generators square to the identity, so each factor is
/// `cos(g/2) I + i sin(g/2) G`.
pub fn build_correlation(gamma: &CorrelationParams) -> Operator4 {
    let id = Operator4::identity();
    let half1 = gamma.gamma1() / 2.0;
    let half2 = gamma.gamma2() / 2.0;
    let f1 = id * libm::cos(half1) + build_swap() * Complex::raw(0.0, libm::sin(half1));
    let f2 = id * libm::cos(half2) + build_swap_conversion() * Complex::raw(0.0, libm::sin(half2));
    f1 * f2
}

/// Correlated joint strategy `J(gamma) |alpha>|beta>`.
pub fn joint_state(
    alpha: &StrategyVector,
    beta: &StrategyVector,
    gamma: &CorrelationParams,
) -> JointState {
    let product = JointState::product(alpha, beta);
    JointState::from_raw(build_correlation(gamma).apply(product.amplitudes()))
}

/// `<state| op |state>` for a self-adjoint `op`.
pub fn expectation(op: &Operator4, state: &JointState) -> Result<f64, GameError> {
    let deviation = op.self_adjoint_deviation();
    if deviation > SELF_ADJOINT_TOL {
        return Err(GameError::NotSelfAdjoint { deviation });
    }
    Ok(quadratic_form(op, state.amplitudes()).re())
}

/// `<v| op |v>` without any checks.
pub(crate) fn quadratic_form(op: &Operator4, v: &[Complex; 4]) -> Complex {
    let w = op.apply(v);
    let mut acc = Complex::ZERO;
    for (a, b) in v.iter().zip(w.iter()) {
        acc += a.conj() * *b;
    }
    acc
}
