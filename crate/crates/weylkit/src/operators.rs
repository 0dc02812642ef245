//! Singular-value analytics on kernel operators: Schatten and
//! Schatten-Lorentz quasinorms, left and symbol multipliers, the
//! singular-value threshold split, and lower-bound estimation of
//! `Lp -> Lq` and `Bp -> Bq` operator norms by alternating power
//! iteration with random restarts.

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::weyl::{
    check_same_group, inverse_weyl, weyl_transform, CMatrix, KernelOperator, PhaseSpaceFunction,
    TransformMode,
};

/// Descending, zero-clamped singular values of a kernel operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// Sorts descending and clamps tiny negatives from the backend to 0.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        for v in &mut values {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `S_1`, the operator norm.
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// 1-indexed `S_n`.
    pub fn nth(&self, n: usize) -> f64 {
        self.values.get(n - 1).copied().unwrap_or(0.0)
    }
}

fn svd_values(matrix: &CMatrix) -> Result<Vec<f64>> {
    crate::svd::singular_values(matrix)
}

impl KernelOperator {
    /// Descending singular values, computed lazily and cached. The cache
    /// is only populated when the spectrum reproduces the Frobenius mass
    /// (guards against a misconverged decomposition).
    pub fn singular_values(&self) -> Result<&SingularSpectrum> {
        if let Some(s) = self.spectrum_cache.get() {
            return Ok(s);
        }
        let spectrum = SingularSpectrum::from_unsorted(svd_values(self.matrix())?);
        let fro = self.frobenius_norm();
        let mass: f64 = spectrum.values().iter().map(|s| s * s).sum::<f64>().sqrt();
        if (fro - mass).abs() > 1e-10 * fro.max(1e-300) {
            return Err(Error::Numerical(format!(
                "spectrum mass {mass} disagrees with Frobenius norm {fro}"
            )));
        }
        let _ = self.spectrum_cache.set(spectrum);
        Ok(self.spectrum_cache.get().expect("cache was just set"))
    }

    /// `B_{p,q}` quasinorm of the singular-value sequence; `q = p` is the
    /// Schatten norm, `(p, q) = (inf, inf)` the operator norm.
    pub fn schatten_lorentz_norm(&self, p: f64, q: f64) -> Result<f64> {
        let spectrum = self.singular_values()?;
        schatten_lorentz_of_sequence(spectrum.values(), p, q)
    }
}

/// Evaluates the sequence-form `l^{p,q}` quantity on a descending list:
/// `( sum_n (n^{1/p - 1/q} s_n)^q )^{1/q}` for finite `q`, and
/// `sup_n n^{1/p} s_n` at `q = inf` (1-indexed `n`).
pub fn schatten_lorentz_of_sequence(values: &[f64], p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidExponent(format!("schatten p = {p} must be positive")));
    }
    if !(q > 0.0) {
        return Err(Error::InvalidExponent(format!("schatten q = {q} must be positive")));
    }
    let inv_p = if p.is_infinite() { 0.0 } else { 1.0 / p };
    if q.is_infinite() {
        let mut best = 0.0f64;
        for (i, &s) in values.iter().enumerate() {
            best = best.max(((i + 1) as f64).powf(inv_p) * s);
        }
        Ok(best)
    } else {
        let e = inv_p - 1.0 / q;
        let mut acc = 0.0f64;
        for (i, &s) in values.iter().enumerate() {
            if s > 0.0 {
                acc += (((i + 1) as f64).powf(e) * s).powf(q);
            }
        }
        Ok(acc.powf(1.0 / q))
    }
}

/// Symbol of a multiplier: an operator acting on the transform side, or a
/// scalar field acting pointwise on the inverse-transform side.
#[derive(Debug, Clone)]
pub enum MultiplierSymbol {
    Operator(KernelOperator),
    Scalar(PhaseSpaceFunction),
}

impl MultiplierSymbol {
    pub fn group(&self) -> &FiniteAbelianGroup {
        match self {
            MultiplierSymbol::Operator(m) => m.group(),
            MultiplierSymbol::Scalar(g) => g.group(),
        }
    }
}

/// Left multiplier `C_M`: transform, multiply by `M` on the left, invert.
pub fn apply_left_multiplier(
    m: &KernelOperator,
    f: &PhaseSpaceFunction,
) -> Result<PhaseSpaceFunction> {
    check_same_group(m.group(), f.group())?;
    let t = weyl_transform(f, TransformMode::Fast);
    let mt = m.compose(&t)?;
    Ok(inverse_weyl(&mt))
}

/// Symbol multiplier: invert, multiply pointwise by `g`, transform back.
pub fn apply_symbol_multiplier(
    g: &PhaseSpaceFunction,
    t: &KernelOperator,
) -> Result<KernelOperator> {
    check_same_group(g.group(), t.group())?;
    let f = inverse_weyl(t);
    let gf = g.pointwise_mul(&f)?;
    Ok(weyl_transform(&gf, TransformMode::Fast))
}

/// Splits `T` into the part carried by singular triples with `S_n > cut`
/// and the remainder; the parts sum to `T` exactly.
pub fn sv_threshold_split(
    t: &KernelOperator,
    cut: f64,
) -> Result<(KernelOperator, KernelOperator)> {
    if !(cut > 0.0) {
        return Err(Error::InvalidInput(format!("threshold cut = {cut} must be positive")));
    }
    let n = t.group().order();
    let svd = crate::svd::decompose(t.matrix())?;
    let mut big = CMatrix::zeros(n, n);
    for i in 0..svd.values.len() {
        let s = svd.values[i];
        if s > cut {
            let sc = Complex64::new(s, 0.0);
            for y in 0..n {
                let uy = svd.u[(y, i)] * sc;
                for z in 0..n {
                    big[(y, z)] += uy * svd.v[(z, i)].conj();
                }
            }
        }
    }
    let t0 = KernelOperator::new(t.group().clone(), big)?;
    let t1 = t.sub(&t0)?;
    Ok((t0, t1))
}

// ---------------------------------------------------------------------------
// Lp -> Lq operator-norm estimation on phase space
// ---------------------------------------------------------------------------

/// A linear map on phase-space functions together with its adjoint with
/// respect to the `L2(G x dual(G))` pairing.
pub trait PhaseSpaceMap: Sync {
    fn group(&self) -> &FiniteAbelianGroup;
    fn apply(&self, f: &PhaseSpaceFunction) -> PhaseSpaceFunction;
    fn apply_adjoint(&self, f: &PhaseSpaceFunction) -> PhaseSpaceFunction;
}

/// `C_M` as a [`PhaseSpaceMap`]; the adjoint is `C_{M^*}`.
pub struct LeftMultiplier<'a> {
    m: &'a KernelOperator,
    m_adj: KernelOperator,
}

impl<'a> LeftMultiplier<'a> {
    pub fn new(m: &'a KernelOperator) -> Self {
        Self {
            m_adj: m.adjoint(),
            m,
        }
    }
}

impl PhaseSpaceMap for LeftMultiplier<'_> {
    fn group(&self) -> &FiniteAbelianGroup {
        self.m.group()
    }

    fn apply(&self, f: &PhaseSpaceFunction) -> PhaseSpaceFunction {
        apply_left_multiplier(self.m, f).expect("map and argument share a group")
    }

    fn apply_adjoint(&self, f: &PhaseSpaceFunction) -> PhaseSpaceFunction {
        apply_left_multiplier(&self.m_adj, f).expect("map and argument share a group")
    }
}

fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        z / r
    }
}

fn grid_lp_norm(values: &CMatrix, p: f64, mass: f64) -> f64 {
    if p.is_infinite() {
        values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    } else {
        let acc: f64 = values
            .iter()
            .map(|z| {
                let r = z.norm();
                if r == 0.0 {
                    0.0
                } else {
                    r.powf(p) * mass
                }
            })
            .sum();
        acc.powf(1.0 / p)
    }
}

/// Position of the largest modulus in atom order (rows outer, columns
/// inner), ties broken toward the lowest atom index.
fn argmax_atom(values: &CMatrix) -> (usize, usize) {
    let (nr, nc) = (values.nrows(), values.ncols());
    let mut best = (0usize, 0usize);
    let mut best_val = -1.0f64;
    for x in 0..nr {
        for k in 0..nc {
            let r = values[(x, k)].norm();
            if r > best_val {
                best_val = r;
                best = (x, k);
            }
        }
    }
    best
}

/// Holder-extremal dual element: `u` with unit `L^{q'}` norm maximizing
/// `Re <y, u>` under the mass-weighted pairing.
fn lq_dual_gradient(y: &CMatrix, q: f64, mass: f64) -> CMatrix {
    if q.is_infinite() {
        let (x, k) = argmax_atom(y);
        let mut u = CMatrix::zeros(y.nrows(), y.ncols());
        u[(x, k)] = unit_phase(y[(x, k)]) / mass;
        u
    } else if q == 1.0 {
        y.map(unit_phase)
    } else {
        let norm = grid_lp_norm(y, q, mass);
        if norm == 0.0 {
            return CMatrix::zeros(y.nrows(), y.ncols());
        }
        let scale = norm.powf(q - 1.0);
        y.map(|z| {
            let r = z.norm();
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                unit_phase(z) * (r.powf(q - 1.0) / scale)
            }
        })
    }
}

/// Next iterate: unit `L^p` vector maximizing `Re <z, x>`.
fn lp_primal_step(z: &CMatrix, p: f64, mass: f64) -> CMatrix {
    if p == 1.0 {
        let (x, k) = argmax_atom(z);
        let mut out = CMatrix::zeros(z.nrows(), z.ncols());
        out[(x, k)] = unit_phase(z[(x, k)]) / mass;
        if out[(x, k)].norm() == 0.0 {
            out[(x, k)] = Complex64::new(1.0 / mass, 0.0);
        }
        out
    } else if p.is_infinite() {
        z.map(|v| {
            let ph = unit_phase(v);
            if ph.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                ph
            }
        })
    } else {
        let pc = conjugate_exponent(p);
        let norm = grid_lp_norm(z, pc, mass);
        if norm == 0.0 {
            return CMatrix::zeros(z.nrows(), z.ncols());
        }
        let scale = norm.powf(pc - 1.0);
        z.map(|v| {
            let r = v.norm();
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                unit_phase(v) * (r.powf(pc - 1.0) / scale)
            }
        })
    }
}

/// Conjugate exponent `p'` with `1/p + 1/p' = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

const ASCENT_REL_TOL: f64 = 1e-13;
const ASCENT_PATIENCE: usize = 6;

/// Lower bound on `|| map ||_{Lp -> Lq}` by alternating power iteration:
/// apply the map, take the dual-norm gradient, apply the adjoint, renorm
/// in `Lp`. Deterministic in `seed`, nondecreasing in `restarts`.
pub fn opnorm_lp_lq_estimate(
    map: &dyn PhaseSpaceMap,
    p: f64,
    q: f64,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<f64> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::InvalidExponent(format!(
            "operator-norm exponents ({p}, {q}) must lie in [1, inf]"
        )));
    }
    if restarts == 0 || iters == 0 {
        return Err(Error::InvalidInput("restarts and iters must be >= 1".into()));
    }
    let group = map.group().clone();
    let n = group.order();
    let mass = 1.0 / n as f64;
    let mut best = 0.0f64;
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let start = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = grid_lp_norm(&start, p, mass);
        if norm == 0.0 {
            continue;
        }
        let mut x = start / Complex64::new(norm, 0.0);
        let mut last = 0.0f64;
        let mut stall = 0usize;
        for _ in 0..iters {
            let xf = PhaseSpaceFunction::new(group.clone(), x.clone())
                .expect("iterate stays finite");
            let y = map.apply(&xf);
            let val = grid_lp_norm(y.values(), q, mass);
            if val > best {
                best = val;
            }
            if val == 0.0 {
                break;
            }
            if (val - last).abs() <= ASCENT_REL_TOL * val {
                stall += 1;
                if stall >= ASCENT_PATIENCE {
                    break;
                }
            } else {
                stall = 0;
            }
            last = val;
            let u = lq_dual_gradient(y.values(), q, mass);
            let uf = PhaseSpaceFunction::new(group.clone(), u).expect("dual stays finite");
            let z = map.apply_adjoint(&uf);
            x = lp_primal_step(z.values(), p, mass);
            if x.iter().all(|v| v.norm() == 0.0) {
                break;
            }
        }
    }
    Ok(best)
}

/// Materializes a phase-space map as the `N^2 x N^2` matrix acting on
/// vectorized grids (atom order `x * N + k`). The spectral norm of this
/// matrix is the exact `L2 -> L2` norm of the map.
pub fn materialize_phase_map(map: &dyn PhaseSpaceMap) -> CMatrix {
    let n = map.group().order();
    let dim = n * n;
    let mut big = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let (x, k) = (j / n, j % n);
        let mut grid = CMatrix::zeros(n, n);
        grid[(x, k)] = Complex64::new(1.0, 0.0);
        let atom = PhaseSpaceFunction::new(map.group().clone(), grid).expect("unit atom");
        let img = map.apply(&atom);
        for xx in 0..n {
            for kk in 0..n {
                big[(xx * n + kk, j)] = img.value(xx, kk);
            }
        }
    }
    big
}

// ---------------------------------------------------------------------------
// Bp -> Bq operator-norm estimation on the operator side
// ---------------------------------------------------------------------------

/// A linear map on kernel operators with its Hilbert-Schmidt adjoint.
pub trait OperatorMap: Sync {
    fn group(&self) -> &FiniteAbelianGroup;
    fn apply(&self, t: &KernelOperator) -> KernelOperator;
    fn apply_adjoint(&self, t: &KernelOperator) -> KernelOperator;
}

/// The symbol multiplier as an [`OperatorMap`]; adjoint multiplies by the
/// conjugate symbol.
pub struct SymbolMultiplier<'a> {
    g: &'a PhaseSpaceFunction,
    g_conj: PhaseSpaceFunction,
}

impl<'a> SymbolMultiplier<'a> {
    pub fn new(g: &'a PhaseSpaceFunction) -> Self {
        Self { g_conj: g.conj(), g }
    }
}

impl OperatorMap for SymbolMultiplier<'_> {
    fn group(&self) -> &FiniteAbelianGroup {
        self.g.group()
    }

    fn apply(&self, t: &KernelOperator) -> KernelOperator {
        apply_symbol_multiplier(self.g, t).expect("map and argument share a group")
    }

    fn apply_adjoint(&self, t: &KernelOperator) -> KernelOperator {
        apply_symbol_multiplier(&self.g_conj, t).expect("map and argument share a group")
    }
}

fn full_svd(m: &CMatrix) -> Result<crate::svd::JacobiSvd> {
    crate::svd::decompose(m)
}

fn assemble(u: &CMatrix, diag: &[f64], v: &CMatrix) -> CMatrix {
    let n = u.nrows();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..diag.len() {
        if diag[i] == 0.0 {
            continue;
        }
        let sc = Complex64::new(diag[i], 0.0);
        for y in 0..n {
            let uy = u[(y, i)] * sc;
            for z in 0..n {
                out[(y, z)] += uy * v[(z, i)].conj();
            }
        }
    }
    out
}

/// Dual element in `B_{q'}` with unit norm pairing to `||Y||_{B_q}`.
fn schatten_dual_gradient(y: &KernelOperator, q: f64) -> Result<KernelOperator> {
    if q == 2.0 {
        // Hilbert-Schmidt gradient is linear; no decomposition needed.
        let norm = y.frobenius_norm();
        if norm == 0.0 {
            return Ok(KernelOperator::zeros(y.group().clone()));
        }
        return Ok(y.scale(Complex64::new(1.0 / norm, 0.0)));
    }
    let svd = full_svd(y.matrix())?;
    let diag: Vec<f64> = if q.is_infinite() {
        let mut d = vec![0.0; svd.values.len()];
        if !d.is_empty() {
            d[0] = 1.0;
        }
        d
    } else if q == 1.0 {
        vec![1.0; svd.values.len()]
    } else {
        let norm = schatten_lorentz_of_sequence(&svd.values, q, q)?;
        if norm == 0.0 {
            vec![0.0; svd.values.len()]
        } else {
            let scale = norm.powf(q - 1.0);
            svd.values.iter().map(|&s| s.powf(q - 1.0) / scale).collect()
        }
    };
    KernelOperator::new(y.group().clone(), assemble(&svd.u, &diag, &svd.v))
}

/// Unit `B_p` element maximizing `Re tr(T^* Z)`.
fn schatten_primal_step(z: &KernelOperator, p: f64) -> Result<KernelOperator> {
    if p == 2.0 {
        let norm = z.frobenius_norm();
        if norm == 0.0 {
            return Ok(KernelOperator::zeros(z.group().clone()));
        }
        return Ok(z.scale(Complex64::new(1.0 / norm, 0.0)));
    }
    let svd = full_svd(z.matrix())?;
    let diag: Vec<f64> = if p == 1.0 {
        let mut d = vec![0.0; svd.values.len()];
        if !d.is_empty() {
            d[0] = 1.0;
        }
        d
    } else if p.is_infinite() {
        vec![1.0; svd.values.len()]
    } else {
        let pc = conjugate_exponent(p);
        let norm = schatten_lorentz_of_sequence(&svd.values, pc, pc)?;
        if norm == 0.0 {
            vec![0.0; svd.values.len()]
        } else {
            let scale = norm.powf(pc - 1.0);
            svd.values.iter().map(|&s| s.powf(pc - 1.0) / scale).collect()
        }
    };
    KernelOperator::new(z.group().clone(), assemble(&svd.u, &diag, &svd.v))
}

/// Lower bound on `|| map ||_{Bp -> Bq}` by the Schatten-side alternating
/// ascent, seeded with `warm_starts` (normalized in `B_p`) followed by
/// random Gaussian restarts.
pub fn schatten_opnorm_estimate(
    map: &dyn OperatorMap,
    p: f64,
    q: f64,
    restarts: usize,
    iters: usize,
    seed: u64,
    warm_starts: &[KernelOperator],
) -> Result<f64> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::InvalidExponent(format!(
            "operator-norm exponents ({p}, {q}) must lie in [1, inf]"
        )));
    }
    if restarts == 0 || iters == 0 {
        return Err(Error::InvalidInput("restarts and iters must be >= 1".into()));
    }
    let group = map.group().clone();
    let n = group.order();
    let mut best = 0.0f64;
    let mut starts: Vec<KernelOperator> = Vec::with_capacity(restarts + warm_starts.len());
    for w in warm_starts {
        check_same_group(&group, w.group())?;
        starts.push(w.clone());
    }
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let m = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        starts.push(KernelOperator::new(group.clone(), m).expect("finite gaussian"));
    }
    for start in starts {
        let norm = start.schatten_lorentz_norm(p, p)?;
        if norm == 0.0 {
            continue;
        }
        let mut t = start.scale(Complex64::new(1.0 / norm, 0.0));
        let mut last = 0.0f64;
        let mut stall = 0usize;
        for _ in 0..iters {
            let y = map.apply(&t);
            let val = y.schatten_lorentz_norm(q, q)?;
            if val > best {
                best = val;
            }
            if val == 0.0 {
                break;
            }
            if (val - last).abs() <= ASCENT_REL_TOL * val {
                stall += 1;
                if stall >= ASCENT_PATIENCE {
                    break;
                }
            } else {
                stall = 0;
            }
            last = val;
            let u = schatten_dual_gradient(&y, q)?;
            let z = map.apply_adjoint(&u);
            t = schatten_primal_step(&z, p)?;
            if t.frobenius_norm() == 0.0 {
                break;
            }
        }
    }
    Ok(best)
}
