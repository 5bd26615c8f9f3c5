//! Seeded random states and unitaries.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{BipartiteIndex, ComplexMatrix};
use crate::states::{BipartiteState, PureState};

/// The generator used wherever the library consumes a seed.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream number `k` derived from a base seed.
pub fn derived_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state on `m ⊗ n`.
pub fn haar_pure_state<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<PureState> {
    let amps: Vec<Complex64> = (0..m * n).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(m, n, amps)
}

/// Induced-measure random density matrix `G G† / tr(G G†)` with `G` a
/// `dim × rank` complex Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(idx: BipartiteIndex, rank: usize, rng: &mut R) -> Result<BipartiteState> {
    let dim = idx.dim();
    let g = ComplexMatrix::from_fn(dim, rank.max(1), |_, _| complex_gaussian(rng));
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    BipartiteState::new(idx, w.scale(1.0 / tr))
}

/// `rows × cols` matrix with orthonormal columns (`rows >= cols`), Haar distributed.
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(rows >= cols);
    let g = DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(rows, cols, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    random_isometry(d, d, rng)
}
