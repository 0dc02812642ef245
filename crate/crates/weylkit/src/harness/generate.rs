//! Deterministic input generators and the stable per-cell seed scheme.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::spaces::WeightField;
use crate::weyl::{inverse_weyl, CMatrix, KernelOperator, PhaseSpaceFunction};

/// splitmix64 round; the standard finalizer with full 64-bit avalanche.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// FNV-1a over a byte string.
fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Stable 64-bit cell seed: the master seed is xor-combined with the
/// FNV-1a hash of the suite id, then each grid coordinate and the trial
/// index are folded in through splitmix64 rounds. Independent of execution
/// order, so parallel sweeps reproduce serial ones bit for bit.
pub fn derive_seed(master: u64, suite_id: &str, coords: &[usize], trial: usize) -> u64 {
    let mut h = splitmix64(master ^ fnv1a64(suite_id.as_bytes()));
    for &c in coords {
        h = splitmix64(h ^ (c as u64));
    }
    splitmix64(h ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15))
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Families of random phase-space functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    /// i.i.d. standard complex normals on every atom.
    Gaussian,
    /// `ceil(N/4)` unit atoms at distinct positions.
    Sparse,
    /// Inverse transform of a random rank-one operator.
    RankOne,
    /// All entries 1.
    Constant,
}

/// Deterministic function generator; equal seeds give equal grids.
pub fn generate_function(
    group: &FiniteAbelianGroup,
    kind: FunctionKind,
    seed: u64,
) -> PhaseSpaceFunction {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        FunctionKind::Gaussian => {
            let values = CMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng));
            PhaseSpaceFunction::new(group.clone(), values).expect("gaussian grid is finite")
        }
        FunctionKind::Sparse => {
            let k = n.div_ceil(4);
            let picks = rand::seq::index::sample(&mut rng, n * n, k);
            let mut values = CMatrix::zeros(n, n);
            for idx in picks.iter() {
                values[(idx / n, idx % n)] = Complex64::new(1.0, 0.0);
            }
            PhaseSpaceFunction::new(group.clone(), values).expect("sparse grid is finite")
        }
        FunctionKind::RankOne => {
            let u = random_unit_vector(n, &mut rng);
            let v = random_unit_vector(n, &mut rng);
            let matrix = CMatrix::from_fn(n, n, |i, j| u[i] * v[j].conj());
            let t = KernelOperator::new(group.clone(), matrix).expect("outer product is finite");
            inverse_weyl(&t)
        }
        FunctionKind::Constant => PhaseSpaceFunction::constant(group.clone(), Complex64::new(1.0, 0.0)),
    }
}

fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    let mut v = DVector::from_fn(n, |_, _| complex_gaussian(rng));
    let norm = v.norm();
    if norm > 0.0 {
        v /= Complex64::new(norm, 0.0);
    } else {
        v[0] = Complex64::new(1.0, 0.0);
    }
    v
}

/// Singular-value profiles for generated operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorDecay {
    /// `S_n = n^{-1/r}`.
    Power(f64),
    /// All singular values 1.
    Flat,
    /// Plain i.i.d. complex Gaussian matrix.
    RandomGaussian,
}

/// Builds `U diag(spectrum) V^*` with Haar-random unitaries, or a raw
/// Gaussian matrix; deterministic in the seed.
pub fn generate_operator(
    group: &FiniteAbelianGroup,
    decay: OperatorDecay,
    seed: u64,
) -> Result<KernelOperator> {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrix = match decay {
        OperatorDecay::Power(r) => {
            if !(r > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "power decay exponent r = {r} must be positive"
                )));
            }
            let spectrum: Vec<f64> = (1..=n).map(|k| (k as f64).powf(-1.0 / r)).collect();
            shaped_matrix(n, &spectrum, &mut rng)
        }
        OperatorDecay::Flat => {
            let spectrum = vec![1.0; n];
            shaped_matrix(n, &spectrum, &mut rng)
        }
        OperatorDecay::RandomGaussian => CMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut rng)),
    };
    KernelOperator::new(group.clone(), matrix)
}

fn shaped_matrix(n: usize, spectrum: &[f64], rng: &mut ChaCha8Rng) -> CMatrix {
    let u = haar_unitary(n, rng);
    let v = haar_unitary(n, rng);
    let mut scaled = u;
    for (j, &s) in spectrum.iter().enumerate() {
        let sc = Complex64::new(s, 0.0);
        for i in 0..n {
            scaled[(i, j)] *= sc;
        }
    }
    scaled * v.adjoint()
}

/// Haar-distributed unitary: QR of a complex Gaussian with the R-diagonal
/// phases absorbed into Q.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let a = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = a.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// The weight `1 / (1 + atom index)` on `G x dual(G)`.
pub fn reciprocal_index_weight(group: &FiniteAbelianGroup) -> WeightField {
    let n = group.order();
    WeightField::from_fn(group.clone(), |x, k| 1.0 / (1.0 + (x * n + k) as f64))
        .expect("weights are positive")
}

/// The weight `1 + atom index` on `G x dual(G)`.
pub fn linear_index_weight(group: &FiniteAbelianGroup) -> WeightField {
    let n = group.order();
    WeightField::from_fn(group.clone(), |x, k| 1.0 + (x * n + k) as f64)
        .expect("weights are positive")
}

/// The harmonic sequence `phi(n) = 1/n`, the canonical weak-l1 weight
/// (its weak norm is exactly 1).
pub fn harmonic_sequence(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 1.0 / k as f64).collect()
}
