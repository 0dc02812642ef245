//! Function-space machinery on atomic measure spaces: weighted `Lp` norms,
//! distribution functions, decreasing rearrangements, and Lorentz `L^{p,q}`
//! quasinorms evaluated in closed form over the steps of `f*`.
//!
//! Two atomic spaces cover everything here: `G x dual(G)` with mass `1/N`
//! per point, and sequence spaces over `{1..N}` with unit masses.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::weyl::PhaseSpaceFunction;

/// A purely atomic measure space, one positive mass per point.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasureSpace {
    masses: Vec<f64>,
    total: f64,
}

impl AtomicMeasureSpace {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidInput("measure space needs at least one atom".into()));
        }
        if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidInput("atom masses must be positive and finite".into()));
        }
        let total = masses.iter().sum();
        Ok(Self { masses, total })
    }

    /// `n` atoms of equal mass.
    pub fn uniform(n: usize, mass: f64) -> Result<Self> {
        Self::new(vec![mass; n])
    }

    /// Counting measure on `{1..n}`.
    pub fn counting(n: usize) -> Result<Self> {
        Self::uniform(n, 1.0)
    }

    /// The `N^2` atoms of `G x dual(G)`, each of mass `1/N`.
    pub fn phase_space(group: &FiniteAbelianGroup) -> Self {
        let n = group.order();
        Self {
            masses: vec![1.0 / n as f64; n * n],
            total: n as f64,
        }
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }
}

/// The decreasing rearrangement `f*` as a step function: strictly
/// descending levels, one positive width (measure) per step, widths
/// summing to the total mass of the source space.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangementProfile {
    levels: Vec<f64>,
    widths: Vec<f64>,
}

impl RearrangementProfile {
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn total_width(&self) -> f64 {
        self.widths.iter().sum()
    }

    /// Evaluates `f*(t) = inf { s > 0 : d_f(s) <= t }`.
    pub fn eval(&self, t: f64) -> f64 {
        let mut cum = 0.0;
        for (level, width) in self.levels.iter().zip(&self.widths) {
            cum += width;
            if t < cum {
                return *level;
            }
        }
        0.0
    }
}

/// `d_f(s)`: total mass of atoms where `|f| > s`.
pub fn distribution_function(space: &AtomicMeasureSpace, values: &[f64], s: f64) -> f64 {
    debug_assert_eq!(space.len(), values.len());
    values
        .iter()
        .zip(space.masses())
        .filter(|(v, _)| v.abs() > s)
        .map(|(_, m)| m)
        .sum()
}

/// Sorts `|f|` descending (stable, ties by original index), carries atom
/// masses as step widths, and merges equal levels.
pub fn decreasing_rearrangement(
    space: &AtomicMeasureSpace,
    values: &[f64],
) -> RearrangementProfile {
    debug_assert_eq!(space.len(), values.len());
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .abs()
            .partial_cmp(&values[a].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut levels: Vec<f64> = Vec::new();
    let mut widths: Vec<f64> = Vec::new();
    for idx in order {
        let level = values[idx].abs();
        let mass = space.masses()[idx];
        match levels.last() {
            Some(&prev) if prev == level => *widths.last_mut().unwrap() += mass,
            _ => {
                levels.push(level);
                widths.push(mass);
            }
        }
    }
    RearrangementProfile { levels, widths }
}

/// Lorentz `L^{p,q}` quasinorm of `|f|` on an atomic space.
///
/// For `q < infinity` the defining integral is evaluated exactly over the
/// steps of `f*`: a step at `level` spanning `(t0, t1)` contributes
/// `level^q (p/q) (t1^{q/p} - t0^{q/p})`. For `q = infinity` the supremum
/// of `t^{1/p} f*(t)` over each constancy interval is its value in the
/// limit at the right endpoint, so the exact supremum is the maximum of
/// `t1^{1/p} level` over steps.
pub fn lorentz_norm(space: &AtomicMeasureSpace, values: &[f64], p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::InvalidExponent(format!("lorentz p = {p} must be positive")));
    }
    if !(q > 0.0) {
        return Err(Error::InvalidExponent(format!("lorentz q = {q} must be positive")));
    }
    let profile = decreasing_rearrangement(space, values);
    Ok(lorentz_norm_of_profile(&profile, p, q))
}

/// Closed-form evaluation on an existing rearrangement profile.
pub fn lorentz_norm_of_profile(profile: &RearrangementProfile, p: f64, q: f64) -> f64 {
    if q.is_infinite() {
        let mut best = 0.0f64;
        let mut right = 0.0f64;
        for (level, width) in profile.levels().iter().zip(profile.widths()) {
            right += width;
            best = best.max(right.powf(1.0 / p) * level);
        }
        best
    } else {
        let mut acc = 0.0f64;
        let mut left = 0.0f64;
        let e = q / p;
        for (level, width) in profile.levels().iter().zip(profile.widths()) {
            let right = left + width;
            if *level > 0.0 {
                acc += level.powf(q) * (right.powf(e) - left.powf(e)) / e;
            }
            left = right;
        }
        acc.powf(1.0 / q)
    }
}

/// `l^{p,q}` quasinorm of a finite sequence under counting measure.
pub fn sequence_lorentz_norm(values: &[f64], p: f64, q: f64) -> Result<f64> {
    let space = AtomicMeasureSpace::counting(values.len())?;
    lorentz_norm(&space, values, p, q)
}

/// A strictly positive weight on `G x dual(G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    group: FiniteAbelianGroup,
    values: DMatrix<f64>,
}

impl WeightField {
    pub fn new(group: FiniteAbelianGroup, values: DMatrix<f64>) -> Result<Self> {
        let n = group.order();
        if values.nrows() != n || values.ncols() != n {
            return Err(Error::InvalidWeight(format!(
                "weight grid is {}x{}, expected {n}x{n}",
                values.nrows(),
                values.ncols()
            )));
        }
        if values.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidWeight(
                "weights must be strictly positive and finite".into(),
            ));
        }
        Ok(Self { group, values })
    }

    pub fn from_fn(
        group: FiniteAbelianGroup,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let n = group.order();
        let values = DMatrix::from_fn(n, n, |x, k| f(x, k));
        Self::new(group, values)
    }

    pub fn constant(group: FiniteAbelianGroup, w: f64) -> Result<Self> {
        let n = group.order();
        Self::new(group.clone(), DMatrix::from_element(n, n, w))
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn value(&self, x_idx: usize, k_idx: usize) -> f64 {
        self.values[(x_idx, k_idx)]
    }

    /// Values flattened in atom order (`x * N + k`).
    pub fn magnitudes(&self) -> Vec<f64> {
        let n = self.group.order();
        let mut out = Vec::with_capacity(n * n);
        for x in 0..n {
            for k in 0..n {
                out.push(self.values[(x, k)]);
            }
        }
        out
    }

    /// `M_psi = sup_s s * mass{ psi > s }`, the weak-L1 quasinorm of the
    /// weight under the `1/N` atom measure.
    pub fn weak_l1(&self) -> f64 {
        let space = AtomicMeasureSpace::phase_space(&self.group);
        lorentz_norm(&space, &self.magnitudes(), 1.0, f64::INFINITY)
            .expect("exponents (1, inf) are valid")
    }
}

/// Weighted `Lp` norm of a phase-space function under the `1/N` measure:
/// `( sum |f(x,k)|^p w(x,k)^e / N )^{1/p}`; `p = infinity` returns the max
/// modulus and ignores the weight.
pub fn lp_norm(
    f: &PhaseSpaceFunction,
    p: f64,
    weight: Option<(&WeightField, f64)>,
) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(format!("lp exponent p = {p} must be >= 1")));
    }
    if let Some((w, _)) = weight {
        crate::weyl::check_same_group(f.group(), w.group())?;
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let n = f.group().order();
    let mass = 1.0 / n as f64;
    let mut acc = 0.0f64;
    for x in 0..n {
        for k in 0..n {
            let v = f.value(x, k).norm();
            if v == 0.0 {
                continue;
            }
            let w = match weight {
                Some((field, e)) if e != 0.0 => field.value(x, k).powf(e),
                _ => 1.0,
            };
            acc += v.powf(p) * w * mass;
        }
    }
    Ok(acc.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng as _, SeedableRng as _};
    use rand_chacha::ChaCha8Rng;

    fn brute_force_weak_sup(values: &[f64], masses: &[f64]) -> f64 {
        // dense grid of candidate s values plus the exact breakpoints
        let mut candidates: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        let vmax = candidates.iter().cloned().fold(0.0, f64::max);
        for i in 0..2000 {
            candidates.push(vmax * i as f64 / 1999.0);
        }
        let mut best = 0.0f64;
        for s in candidates {
            if s <= 0.0 {
                continue;
            }
            // left limit: use s - tiny to catch the supremum at jumps
            for probe in [s, s * (1.0 - 1e-12)] {
                let d: f64 = values
                    .iter()
                    .zip(masses)
                    .filter(|(v, _)| v.abs() > probe)
                    .map(|(_, m)| m)
                    .sum();
                best = best.max(probe * d);
            }
        }
        best
    }

    #[test]
    fn lp_norm_closed_forms() {
        let g = FiniteAbelianGroup::new(&[6]).unwrap();
        let ones = PhaseSpaceFunction::constant(g.clone(), Complex64::new(1.0, 0.0));
        for p in [1.0, 1.5, 2.0, 3.0] {
            let v = lp_norm(&ones, p, None).unwrap();
            assert!((v - 6f64.powf(1.0 / p)).abs() < 1e-12);
        }
        assert!((lp_norm(&ones, f64::INFINITY, None).unwrap() - 1.0).abs() < 1e-14);

        // single scaled atom has unit L1 mass
        let atom = PhaseSpaceFunction::scaled_atom(g.clone(), 2, 3);
        assert!((lp_norm(&atom, 1.0, None).unwrap() - 1.0).abs() < 1e-12);

        // unit weight with any exponent changes nothing
        let w = WeightField::constant(g.clone(), 1.0).unwrap();
        let f = PhaseSpaceFunction::from_fn(g.clone(), |x, k| {
            Complex64::new((x + 1) as f64, k as f64)
        })
        .unwrap();
        let a = lp_norm(&f, 2.0, Some((&w, 0.0))).unwrap();
        let b = lp_norm(&f, 2.0, Some((&w, 3.7))).unwrap();
        let c = lp_norm(&f, 2.0, None).unwrap();
        assert!((a - b).abs() < 1e-12 && (a - c).abs() < 1e-12);

        assert!(matches!(
            lp_norm(&f, 0.5, None),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn distribution_function_basics() {
        let space = AtomicMeasureSpace::counting(3).unwrap();
        let values = [3.0, 2.0, 1.0];
        assert_eq!(distribution_function(&space, &values, 1.5), 2.0);
        assert_eq!(distribution_function(&space, &values, 0.0), 3.0);
        assert_eq!(distribution_function(&space, &values, 3.0), 0.0);

        // constant function: total mass below c, zero at or above
        let space = AtomicMeasureSpace::uniform(5, 0.25).unwrap();
        let values = [2.0; 5];
        assert_eq!(distribution_function(&space, &values, 1.9), 1.25);
        assert_eq!(distribution_function(&space, &values, 2.0), 0.0);
    }

    #[test]
    fn rearrangement_sorts_and_merges() {
        let space = AtomicMeasureSpace::counting(3).unwrap();
        let prof = decreasing_rearrangement(&space, &[1.0, 3.0, 2.0]);
        assert_eq!(prof.levels(), &[3.0, 2.0, 1.0]);
        assert_eq!(prof.widths(), &[1.0, 1.0, 1.0]);

        // indicator of a set of measure m: one step of level 1 and width m
        let space = AtomicMeasureSpace::uniform(4, 0.5).unwrap();
        let prof = decreasing_rearrangement(&space, &[1.0, 0.0, 1.0, 0.0]);
        assert_eq!(prof.levels(), &[1.0, 0.0]);
        assert_eq!(prof.widths(), &[1.0, 1.0]);

        // profile evaluation reproduces inf { s : d_f(s) <= t }
        let space = AtomicMeasureSpace::counting(4).unwrap();
        let values = [2.0, 2.0, 1.0, 0.5];
        let prof = decreasing_rearrangement(&space, &values);
        for t in [0.0, 0.5, 1.0, 1.9, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0] {
            let direct = prof.eval(t);
            // brute force the infimum over a fine grid of s
            let mut inf = f64::INFINITY;
            for i in 0..4000 {
                let s = 2.5 * i as f64 / 3999.0;
                if distribution_function(&space, &values, s) <= t {
                    inf = inf.min(s);
                    break;
                }
            }
            if inf.is_infinite() {
                inf = 2.5;
            }
            assert!(
                (direct - inf).abs() < 1e-3,
                "profile eval {direct} vs brute {inf} at t={t}"
            );
        }
    }

    #[test]
    fn lorentz_pp_equals_lp_and_atoms() {
        let g = FiniteAbelianGroup::new(&[4]).unwrap();
        let space = AtomicMeasureSpace::phase_space(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = PhaseSpaceFunction::from_fn(g.clone(), |_, _| {
                Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            })
            .unwrap();
            for p in [1.0, 1.5, 2.0, 3.0] {
                let a = lorentz_norm(&space, &f.magnitudes(), p, p).unwrap();
                let b = lp_norm(&f, p, None).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.max(1.0), "L^{{p,p}} != L^p at p={p}");
            }
        }

        // indicator of measure m at (p, inf): m^{1/p}
        let space = AtomicMeasureSpace::uniform(6, 0.5).unwrap();
        let ind = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        for p in [1.0, 2.0, 2.5] {
            let v = lorentz_norm(&space, &ind, p, f64::INFINITY).unwrap();
            assert!((v - 1.5f64.powf(1.0 / p)).abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_sequence_weak_norm_is_one() {
        // phi(n) = 1/n on {1..N}: sup_t t * phi*(t) = 1 exactly, every N
        for n in 1..=64usize {
            let phi: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
            let v = sequence_lorentz_norm(&phi, 1.0, f64::INFINITY).unwrap();
            assert_eq!(v, 1.0, "weak-l1 of harmonic sequence, N={n}");
            // brute-force oracle over breakpoints s = 1/k and a grid
            let masses = vec![1.0; n];
            let brute = brute_force_weak_sup(&phi, &masses);
            assert!((v - brute).abs() < 1e-9);
        }
    }

    #[test]
    fn weak_norm_equals_breakpoint_max_on_random_sequences() {
        // sup_s s #{ phi > s } = max_n n phi*(n); cross-check the
        // breakpoint implementation against a brute-force grid supremum
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let n = rng.gen_range(1..=64);
            let phi: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let masses = vec![1.0; n];
            let fast = sequence_lorentz_norm(&phi, 1.0, f64::INFINITY).unwrap();
            let brute = brute_force_weak_sup(&phi, &masses);
            assert!(
                (fast - brute).abs() <= 1e-9 * fast.max(1.0),
                "breakpoint {fast} vs grid {brute}"
            );
            // also the sorted-sequence form max_n n * phi*(n)
            let mut sorted = phi.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let seq_max = sorted
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v)
                .fold(0.0, f64::max);
            assert!((fast - seq_max).abs() <= 1e-12 * fast.max(1.0));
        }
    }

    #[test]
    fn weight_field_validation_and_weak_l1() {
        let g = FiniteAbelianGroup::new(&[3]).unwrap();
        assert!(WeightField::constant(g.clone(), 0.0).is_err());
        assert!(WeightField::constant(g.clone(), -1.0).is_err());

        // constant weight c on a space of total mass N: M_psi = c * N
        let w = WeightField::constant(g.clone(), 2.5).unwrap();
        assert!((w.weak_l1() - 2.5 * 3.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn distribution_is_nonincreasing(values in prop::collection::vec(0.0f64..10.0, 1..40)) {
            let space = AtomicMeasureSpace::counting(values.len()).unwrap();
            let mut last = f64::INFINITY;
            for i in 0..100 {
                let s = 10.0 * i as f64 / 99.0;
                let d = distribution_function(&space, &values, s);
                prop_assert!(d <= last + 1e-12);
                last = d;
            }
        }

        #[test]
        fn equimeasurability(values in prop::collection::vec(-5.0f64..5.0, 1..40)) {
            // integral of (f*)^p equals the Lp integral, exactly by construction
            let space = AtomicMeasureSpace::counting(values.len()).unwrap();
            let prof = decreasing_rearrangement(&space, &values);
            for p in [1.0, 1.5, 2.0, 3.0] {
                let direct: f64 = values.iter().map(|v| v.abs().powf(p)).sum();
                let steps: f64 = prof
                    .levels()
                    .iter()
                    .zip(prof.widths())
                    .map(|(l, w)| l.powf(p) * w)
                    .sum();
                prop_assert!((direct - steps).abs() <= 1e-12 * direct.max(1.0));
            }
            prop_assert!((prof.total_width() - space.total_mass()).abs() < 1e-12);
        }

        #[test]
        fn weak_below_strong_for_small_q(values in prop::collection::vec(0.0f64..10.0, 1..40), pq in (1.0f64..4.0, 0.2f64..1.0)) {
            // || f ||_{p, inf} <= || f ||_{p, q} whenever q <= p
            let (p, frac) = pq;
            let q = p * frac;
            let space = AtomicMeasureSpace::counting(values.len()).unwrap();
            let weak = lorentz_norm(&space, &values, p, f64::INFINITY).unwrap();
            let strong = lorentz_norm(&space, &values, p, q).unwrap();
            prop_assert!(weak <= strong + 1e-12 * strong.max(1.0));
        }
    }
}
