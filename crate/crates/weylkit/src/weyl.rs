//! The Schrodinger representation of `G x dual(G)` on `l2(G)`, the Weyl
//! transform sending phase-space functions to kernel operators, and its
//! inverse.
//!
//! Measure convention used throughout: counting measure on `G`, mass `1/N`
//! per character on the dual, hence mass `1/N` per point of `G x dual(G)`
//! and total mass `N`. Under this convention the transform is a unitary
//! map from `L2(G x dual(G))` onto the Hilbert-Schmidt operators, with
//! kernel
//!
//! ```text
//! K(y, z) = (1/N) sum_k f(z - y, k) chi_k(y)
//! ```
//!
//! and the inverse is the trace pairing `f(x, chi) = tr(rho(x, chi)^* T)`.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Character, FiniteAbelianGroup, GroupElement};
use crate::operators::SingularSpectrum;

/// Complex dense matrix used for kernels and phase-space grids.
pub type CMatrix = DMatrix<Complex64>;

/// A complex-valued function on `G x dual(G)`, stored as an `N x N` grid
/// indexed `(element index, character index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceFunction {
    group: FiniteAbelianGroup,
    values: CMatrix,
}

impl PhaseSpaceFunction {
    pub fn new(group: FiniteAbelianGroup, values: CMatrix) -> Result<Self> {
        let n = group.order();
        if values.nrows() != n || values.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "phase-space grid is {}x{}, expected {n}x{n}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(
                "phase-space grid contains NaN or infinite entries".into(),
            ));
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(
        group: FiniteAbelianGroup,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let n = group.order();
        let values = CMatrix::from_fn(n, n, |x, k| f(x, k));
        Self::new(group, values)
    }

    pub fn zeros(group: FiniteAbelianGroup) -> Self {
        let n = group.order();
        Self {
            values: CMatrix::zeros(n, n),
            group,
        }
    }

    pub fn constant(group: FiniteAbelianGroup, value: Complex64) -> Self {
        let n = group.order();
        Self {
            values: CMatrix::from_element(n, n, value),
            group,
        }
    }

    /// `N * indicator{(x_idx, k_idx)}`: the unit-mass atom under the `1/N`
    /// measure, whose transform is exactly `rho(x, chi_k)`.
    pub fn scaled_atom(group: FiniteAbelianGroup, x_idx: usize, k_idx: usize) -> Self {
        let n = group.order();
        let mut values = CMatrix::zeros(n, n);
        values[(x_idx, k_idx)] = Complex64::new(n as f64, 0.0);
        Self { group, values }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn values(&self) -> &CMatrix {
        &self.values
    }

    pub fn value(&self, x_idx: usize, k_idx: usize) -> Complex64 {
        self.values[(x_idx, k_idx)]
    }

    /// Entry magnitudes flattened in atom order (`x * N + k`).
    pub fn magnitudes(&self) -> Vec<f64> {
        let n = self.group.order();
        let mut out = Vec::with_capacity(n * n);
        for x in 0..n {
            for k in 0..n {
                out.push(self.values[(x, k)].norm());
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            group: self.group.clone(),
            values: &self.values * c,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            values: &self.values + &other.values,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            values: &self.values - &other.values,
        })
    }

    /// Pointwise product `self * other`.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            values: self.values.component_mul(&other.values),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            group: self.group.clone(),
            values: self.values.map(|z| z.conj()),
        }
    }

    /// `L2(G x dual(G))` inner product `<self, other> = (1/N) sum f conj(g)`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_same_group(&self.group, &other.group)?;
        let n = self.group.order() as f64;
        let mut acc = Complex64::default();
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            acc += a * b.conj();
        }
        Ok(acc / n)
    }
}

/// A linear operator on `l2(G)` stored as a dense kernel matrix acting by
/// `(T phi)(y) = sum_z K(y, z) phi(z)`, with lazily cached singular values.
#[derive(Debug)]
pub struct KernelOperator {
    group: FiniteAbelianGroup,
    matrix: CMatrix,
    pub(crate) spectrum_cache: OnceLock<SingularSpectrum>,
}

impl Clone for KernelOperator {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(s) = self.spectrum_cache.get() {
            let _ = cache.set(s.clone());
        }
        Self {
            group: self.group.clone(),
            matrix: self.matrix.clone(),
            spectrum_cache: cache,
        }
    }
}

impl PartialEq for KernelOperator {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.matrix == other.matrix
    }
}

impl KernelOperator {
    pub fn new(group: FiniteAbelianGroup, matrix: CMatrix) -> Result<Self> {
        let n = group.order();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidInput(format!(
                "kernel matrix is {}x{}, expected {n}x{n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput(
                "kernel matrix contains NaN or infinite entries".into(),
            ));
        }
        Ok(Self {
            group,
            matrix,
            spectrum_cache: OnceLock::new(),
        })
    }

    pub fn zeros(group: FiniteAbelianGroup) -> Self {
        let n = group.order();
        Self {
            matrix: CMatrix::zeros(n, n),
            group,
            spectrum_cache: OnceLock::new(),
        }
    }

    pub fn identity(group: FiniteAbelianGroup) -> Self {
        let n = group.order();
        Self {
            matrix: CMatrix::identity(n, n),
            group,
            spectrum_cache: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, y: usize, z: usize) -> Complex64 {
        self.matrix[(y, z)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            group: self.group.clone(),
            matrix: self.matrix.adjoint(),
            spectrum_cache: OnceLock::new(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            group: self.group.clone(),
            matrix: &self.matrix * c,
            spectrum_cache: OnceLock::new(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            matrix: &self.matrix + &other.matrix,
            spectrum_cache: OnceLock::new(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            matrix: &self.matrix - &other.matrix,
            spectrum_cache: OnceLock::new(),
        })
    }

    /// Operator composition `self . other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same_group(&self.group, &other.group)?;
        Ok(Self {
            group: self.group.clone(),
            matrix: &self.matrix * &other.matrix,
            spectrum_cache: OnceLock::new(),
        })
    }

    /// Hilbert-Schmidt inner product `tr(other^* self)`.
    pub fn hs_inner(&self, other: &Self) -> Result<Complex64> {
        check_same_group(&self.group, &other.group)?;
        let mut acc = Complex64::default();
        for (a, b) in self.matrix.iter().zip(other.matrix.iter()) {
            acc += a * b.conj();
        }
        Ok(acc)
    }
}

pub(crate) fn check_same_group(a: &FiniteAbelianGroup, b: &FiniteAbelianGroup) -> Result<()> {
    if a != b {
        return Err(Error::InvalidInput(format!(
            "group mismatch: {a} vs {b}"
        )));
    }
    Ok(())
}

/// Which evaluation path the Weyl transform takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformMode {
    /// Literal sum of `f(x,k) rho(x,chi_k)` over all phase-space points.
    Reference,
    /// Character-table matrix product, one DFT-type sum per kernel row.
    Fast,
}

/// The unitary `rho(x, chi)` acting by `(rho phi)(y) = chi(y) phi(x + y)`,
/// i.e. matrix entries `M[y, z] = chi(y) [z = x + y]`.
pub fn schrodinger_rep(
    group: &FiniteAbelianGroup,
    x: &GroupElement,
    chi: &Character,
) -> Result<KernelOperator> {
    let x_idx = group.index(x)?;
    let k_idx = group.character_index(chi)?;
    Ok(schrodinger_rep_indices(group, x_idx, k_idx))
}

/// Index-level variant of [`schrodinger_rep`].
pub fn schrodinger_rep_indices(
    group: &FiniteAbelianGroup,
    x_idx: usize,
    k_idx: usize,
) -> KernelOperator {
    let n = group.order();
    let mut matrix = CMatrix::zeros(n, n);
    for y in 0..n {
        let z = group.add_indices(x_idx, y);
        matrix[(y, z)] = group.character_eval_indices(k_idx, y);
    }
    KernelOperator {
        group: group.clone(),
        matrix,
        spectrum_cache: OnceLock::new(),
    }
}

/// Character table `X[k, y] = chi_k(y)`; the DFT matrix of the group.
pub fn character_table(group: &FiniteAbelianGroup) -> CMatrix {
    let n = group.order();
    CMatrix::from_fn(n, n, |k, y| group.character_eval_indices(k, y))
}

/// The Weyl transform `W(f) = (1/N) sum_{x,k} f(x,k) rho(x, chi_k)`.
pub fn weyl_transform(f: &PhaseSpaceFunction, mode: TransformMode) -> KernelOperator {
    match mode {
        TransformMode::Reference => weyl_transform_reference(f),
        TransformMode::Fast => weyl_transform_fast(f),
    }
}

fn weyl_transform_reference(f: &PhaseSpaceFunction) -> KernelOperator {
    let group = f.group();
    let n = group.order();
    let scale = 1.0 / n as f64;
    let mut acc = CMatrix::zeros(n, n);
    for x in 0..n {
        for k in 0..n {
            let coeff = f.value(x, k) * scale;
            let rho = schrodinger_rep_indices(group, x, k);
            acc += rho.matrix() * coeff;
        }
    }
    KernelOperator {
        group: group.clone(),
        matrix: acc,
        spectrum_cache: OnceLock::new(),
    }
}

fn weyl_transform_fast(f: &PhaseSpaceFunction) -> KernelOperator {
    let group = f.group();
    let n = group.order();
    // One length-N DFT-type sum per (x, y): F[x, y] = (1/N) sum_k f(x,k) chi_k(y),
    // batched as a single matrix product against the character table.
    let table = character_table(group);
    let dft = f.values() * table / Complex64::new(n as f64, 0.0);
    // Scatter: K(y, x + y) = F[x, y].
    let mut matrix = CMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let z = group.add_indices(x, y);
            matrix[(y, z)] = dft[(x, y)];
        }
    }
    KernelOperator {
        group: group.clone(),
        matrix,
        spectrum_cache: OnceLock::new(),
    }
}

/// Inverse transform via the trace pairing `f(x, chi) = tr(rho(x, chi)^* T)`,
/// evaluated as `f(x, k) = sum_y conj(chi_k(y)) K(y, x + y)`.
pub fn inverse_weyl(t: &KernelOperator) -> PhaseSpaceFunction {
    let group = t.group();
    let n = group.order();
    // Gather the shifted diagonals G[x, y] = K(y, x + y), then one
    // conjugate-DFT sum per (x, k) as a matrix product.
    let mut shifted = CMatrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let z = group.add_indices(x, y);
            shifted[(x, y)] = t.entry(y, z);
        }
    }
    let table = character_table(group);
    let values = shifted * table.adjoint();
    PhaseSpaceFunction {
        group: group.clone(),
        values,
    }
}
