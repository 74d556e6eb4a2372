//! Reference computations shared by the integration tests. They use only
//! the public matrix type and avoid the closed forms under test.

#![allow(dead_code)]

use qgame_core::{Complex, CorrelationParams, Operator4, PayoffMatrix, StrategyVector};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im).unwrap()
}

fn mat(rows: [[(f64, f64); 4]; 4]) -> Operator4 {
    Operator4::from_entries(rows.map(|r| r.map(|(re, im)| c(re, im))))
}

/// Permutation matrix sending basis index `k` to `image[k]`.
pub fn permutation(image: [usize; 4]) -> Operator4 {
    let mut rows = [[(0.0, 0.0); 4]; 4];
    for (k, &to) in image.iter().enumerate() {
        rows[to][k] = (1.0, 0.0);
    }
    mat(rows)
}

/// Swap |i,j> -> |j,i> in the 00, 01, 10, 11 basis.
pub fn swap() -> Operator4 {
    permutation([0, 2, 1, 3])
}

/// |i,j> -> |1-j,1-i>.
pub fn swap_conversion() -> Operator4 {
    permutation([3, 1, 2, 0])
}

/// |i,j> -> |1-i,1-j>.
pub fn conversion() -> Operator4 {
    permutation([3, 2, 1, 0])
}

/// Matrix exponential by scaling and squaring a truncated Taylor series.
pub fn expm(m: &Operator4) -> Operator4 {
    let norm = (0..4)
        .map(|r| (0..4).map(|k| m.entry(r, k).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = *m * scale;
    let mut term = Operator4::identity();
    let mut sum = Operator4::identity();
    for k in 1..30 {
        term = (term * x) * (1.0 / k as f64);
        sum = sum + term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// exp(i g1 S / 2) exp(i g2 T / 2).
pub fn correlation_by_expm(g1: f64, g2: f64) -> Operator4 {
    let i = c(0.0, 1.0);
    expm(&(swap() * i * (g1 / 2.0))) * expm(&(swap_conversion() * i * (g2 / 2.0)))
}

/// J^dag diag(A) J, built from the exponential.
pub fn payoff_operator_by_expm(a: &PayoffMatrix, g1: f64, g2: f64) -> Operator4 {
    let j = correlation_by_expm(g1, g2);
    j.adjoint() * a.diagonal_operator() * j
}

/// Kronecker product amplitudes of two single-qubit strategies.
pub fn product_amplitudes(alpha: &StrategyVector, beta: &StrategyVector) -> [Complex; 4] {
    let (x, y) = (alpha.amplitudes(), beta.amplitudes());
    [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]]
}

/// <v| M |v> for a vector that need not be normalised.
pub fn sandwich(m: &Operator4, v: &[Complex; 4]) -> f64 {
    let mv = m.apply(v);
    v.iter().zip(mv.iter()).map(|(a, b)| (a.conj() * *b).re()).sum()
}

pub fn random_matrix(rng: &mut impl Rng) -> PayoffMatrix {
    PayoffMatrix::new(
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
    )
    .unwrap()
}

pub fn random_gamma(rng: &mut impl Rng) -> CorrelationParams {
    CorrelationParams::new(
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
    .unwrap()
}

pub fn random_strategy(rng: &mut impl Rng) -> StrategyVector {
    StrategyVector::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..std::f64::consts::TAU)).unwrap()
}

pub fn pd() -> PayoffMatrix {
    PayoffMatrix::new(3.0, 0.0, 5.0, 1.0).unwrap()
}

pub fn pd_low() -> PayoffMatrix {
    PayoffMatrix::new(3.0, 0.0, 5.0, 0.2).unwrap()
}
