//! One-sided Jacobi SVD for dense complex matrices.
//!
//! Columns are orthogonalized pairwise by unitary plane rotations until
//! every Gram off-diagonal vanishes; the column norms are then the
//! singular values, and the accumulated rotations form the right factor.
//! Slower than a bidiagonalization SVD, but accurate to machine precision
//! on the near-degenerate phase-permutation matrices that the norm
//! ascents converge to, where the bidiagonal backend has been observed to
//! return singular values violating the Frobenius identity by percents.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weyl::CMatrix;

/// Relative Gram-offdiagonal threshold below which a pair counts as
/// orthogonal.
const TOL: f64 = 1e-15;
/// Hard cap on full sweeps; cyclic Jacobi converges in a handful.
const MAX_SWEEPS: usize = 128;

/// Full decomposition `A = U diag(values) V^H` with `values` descending.
/// Columns of `U` where the singular value underflows are zero.
pub struct JacobiSvd {
    pub u: CMatrix,
    pub values: Vec<f64>,
    pub v: CMatrix,
}

struct Rotation {
    c: f64,
    s: Complex64,
}

fn plane_rotation(a: f64, b: f64, g: Complex64) -> Rotation {
    let gnorm = g.norm();
    let phi = g / gnorm;
    let tau = (b - a) / (2.0 * gnorm);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    Rotation {
        c,
        s: phi * (t * c),
    }
}

fn apply_to_columns(m: &mut CMatrix, p: usize, q: usize, rot: &Rotation) {
    let rows = m.nrows();
    let s_conj = rot.s.conj();
    for i in 0..rows {
        let cp = m[(i, p)];
        let cq = m[(i, q)];
        m[(i, p)] = cp * rot.c - cq * s_conj;
        m[(i, q)] = cp * rot.s + cq * rot.c;
    }
}

fn orthogonalize(w: &mut CMatrix, mut v: Option<&mut CMatrix>) -> Result<()> {
    let n = w.ncols();
    let rows = w.nrows();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut a = 0.0f64;
                let mut b = 0.0f64;
                let mut g = Complex64::default();
                for i in 0..rows {
                    let cp = w[(i, p)];
                    let cq = w[(i, q)];
                    a += cp.norm_sqr();
                    b += cq.norm_sqr();
                    g += cp.conj() * cq;
                }
                if a == 0.0 || b == 0.0 || g.norm_sqr() <= TOL * TOL * a * b {
                    continue;
                }
                let rot = plane_rotation(a, b, g);
                apply_to_columns(w, p, q, &rot);
                if let Some(v) = v.as_deref_mut() {
                    apply_to_columns(v, p, q, &rot);
                }
                rotated = true;
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::Numerical(
        "Jacobi SVD failed to orthogonalize within the sweep cap".into(),
    ))
}

/// Descending singular values only.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let mut w = a.clone();
    orthogonalize(&mut w, None)?;
    let mut values: Vec<f64> = (0..w.ncols()).map(|j| w.column(j).norm()).collect();
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(values)
}

/// Full decomposition, singular triples sorted by descending value.
pub fn decompose(a: &CMatrix) -> Result<JacobiSvd> {
    let n = a.ncols();
    let mut w = a.clone();
    let mut v = CMatrix::identity(n, n);
    orthogonalize(&mut w, Some(&mut v))?;

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let mut u = CMatrix::zeros(w.nrows(), n);
    let mut v_sorted = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    let cutoff = norms.iter().cloned().fold(0.0, f64::max) * f64::EPSILON * n as f64;
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        values.push(sigma);
        if sigma > cutoff && sigma > 0.0 {
            let scale = Complex64::new(1.0 / sigma, 0.0);
            for i in 0..w.nrows() {
                u[(i, dst)] = w[(i, src)] * scale;
            }
        }
        for i in 0..n {
            v_sorted[(i, dst)] = v[(i, src)];
        }
    }
    Ok(JacobiSvd {
        u,
        values,
        v: v_sorted,
    })
}
