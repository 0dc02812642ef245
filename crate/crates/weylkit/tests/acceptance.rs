//! Acceptance suite: one test per criterion, each printing a pass line
//! with its measured figures (visible under `cargo test -- --nocapture`).
//!
//! The sweep-based criteria share one evaluation of the default sweep;
//! its per-cell maxima are frozen in `tests/data/sweep_baselines.json`
//! and later runs must not exceed them. Regenerate the baselines with
//! `REGEN_BASELINES=1 cargo test --test acceptance baseline`.

use std::collections::BTreeMap;
use std::sync::LazyLock;
use std::time::Instant;

use rayon::prelude::*;

use weylkit::harness::{
    bench_transform, derive_seed, evaluate_reports, generate_function, generate_operator,
    harmonic_sequence, run_sweep, FunctionKind, OperatorDecay, RatioReport, Suite, SweepConfig,
};
use weylkit::inequalities::{hy_ratio, hyp_ratio, paley_ratio};
use weylkit::operators::{
    conjugate_exponent, materialize_phase_map, opnorm_lp_lq_estimate, LeftMultiplier,
};
use weylkit::spaces::{
    decreasing_rearrangement, lorentz_norm, lp_norm, sequence_lorentz_norm, AtomicMeasureSpace,
};
use weylkit::weyl::{inverse_weyl, schrodinger_rep_indices, weyl_transform, TransformMode};
use weylkit::FiniteAbelianGroup;

static DEFAULT_SWEEP: LazyLock<Vec<RatioReport>> = LazyLock::new(|| {
    let cfg = SweepConfig::default_sweep();
    run_sweep(&cfg).expect("default sweep must run")
});

fn cyclic_groups(lo: usize, hi: usize) -> Vec<FiniteAbelianGroup> {
    (lo..=hi)
        .map(|n| FiniteAbelianGroup::new(&[n]).unwrap())
        .collect()
}

fn product_groups(specs: &[&str]) -> Vec<FiniteAbelianGroup> {
    specs.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn criterion_01_plancherel_isometry() {
    let started = Instant::now();
    let mut groups = cyclic_groups(2, 64);
    groups.extend(product_groups(&[
        "2x2", "2x3", "3x3", "2x2x2", "2x3x4", "4x4", "2x2x2x2", "8x8",
    ]));
    let worst = groups
        .par_iter()
        .map(|g| {
            let mut worst = 0.0f64;
            for trial in 0..100u64 {
                let seed = derive_seed(1, "plancherel", &[g.order()], trial as usize);
                let f = generate_function(g, FunctionKind::Gaussian, seed);
                let t = weyl_transform(&f, TransformMode::Fast);
                let b2 = t.schatten_lorentz_norm(2.0, 2.0).unwrap();
                let l2 = lp_norm(&f, 2.0, None).unwrap();
                worst = worst.max((b2 - l2).abs() / l2);
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    let elapsed = started.elapsed().as_secs_f64();
    assert!(worst <= 1e-10, "worst Plancherel deviation {worst}");
    assert!(elapsed < 30.0, "criterion 1 took {elapsed:.1}s, budget 30s");
    println!(
        "[PASS] criterion 1: Plancherel isometry over {} groups, worst relative deviation {worst:.2e}, {elapsed:.1}s",
        71
    );
}

#[test]
fn criterion_02_inversion_round_trip() {
    let mut groups = cyclic_groups(2, 64);
    groups.extend(product_groups(&[
        "2x2", "2x3", "3x3", "2x2x2", "2x3x4", "4x4", "2x2x2x2", "8x8",
    ]));
    let worst = groups
        .par_iter()
        .map(|g| {
            let mut worst = 0.0f64;
            for trial in 0..100u64 {
                let seed = derive_seed(2, "roundtrip", &[g.order()], trial as usize);
                let f = generate_function(g, FunctionKind::Gaussian, seed);
                let back = inverse_weyl(&weyl_transform(&f, TransformMode::Fast));
                let dev = (back.values() - f.values()).camax() / f.max_abs();
                worst = worst.max(dev);
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1e-10, "worst round-trip deviation {worst}");
    println!("[PASS] criterion 2: inversion round trip, worst relative deviation {worst:.2e}");
}

#[test]
fn criterion_03_projective_cocycle() {
    use rand::{Rng, SeedableRng};
    let mut worst = 0.0f64;
    for spec in ["12", "2x3x4"] {
        let g: FiniteAbelianGroup = spec.parse().unwrap();
        let n = g.order();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (x, k) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (xp, kp) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let lhs = schrodinger_rep_indices(&g, x, k)
                .compose(&schrodinger_rep_indices(&g, xp, kp))
                .unwrap();
            let phase = g.character_eval_indices(kp, x);
            let rhs = schrodinger_rep_indices(&g, g.add_indices(x, xp), g.add_indices(k, kp))
                .scale(phase);
            worst = worst.max((lhs.matrix() - rhs.matrix()).camax());
        }
    }
    assert!(worst <= 1e-12, "worst cocycle deviation {worst}");
    println!("[PASS] criterion 3: projective cocycle identity, worst deviation {worst:.2e}");
}

#[test]
fn criterion_04_hausdorff_young_constant_one() {
    let mut groups = cyclic_groups(2, 32);
    groups.extend(product_groups(&["2x2", "2x3", "2x2x2", "2x2x3", "4x4", "2x16"]));
    let ps = [1.0, 1.1, 1.25, 1.5, 1.75, 2.0];
    let worst = groups
        .par_iter()
        .map(|g| {
            let mut worst = 0.0f64;
            for (ip, &p) in ps.iter().enumerate() {
                for trial in 0..100 {
                    let seed = derive_seed(4, "hy-acceptance", &[g.order(), ip], trial);
                    let f = generate_function(g, FunctionKind::Gaussian, seed);
                    let r = hy_ratio(&f, p, TransformMode::Fast).unwrap();
                    worst = worst.max(r.ratio);
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1.0 + 1e-8, "largest transform-bound ratio {worst}");
    println!(
        "[PASS] criterion 4: transform bound with constant 1, largest ratio {worst:.12} over {} groups x {} exponents x 100 trials",
        37,
        ps.len()
    );
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

#[test]
fn criterion_05_exact_degenerations_across_default_sweep() {
    let reports = &*DEFAULT_SWEEP;
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    for r in reports.iter() {
        let p2 = r.params.get("p").map(|&p| near(p, 2.0)).unwrap_or(false);
        let q2 = r.params.get("q").map(|&q| near(q, 2.0)).unwrap_or(true);
        let degenerate = match r.suite {
            Suite::Paley | Suite::PaleyInv | Suite::HardyLittlewood => p2,
            Suite::Hormander | Suite::HormanderInv => p2 && q2,
            _ => false,
        };
        if degenerate && !r.params.contains_key("skipped") {
            checked += 1;
            worst = worst.max((r.ratio - 1.0).abs());
        }
    }
    assert!(checked > 0, "no degenerate cells found in the default sweep");
    assert!(worst <= 1e-8, "worst exact-case deviation {worst} over {checked} cells");
    println!(
        "[PASS] criterion 5: exact degenerations equal 1 within 1e-8 ({checked} cells, worst deviation {worst:.2e})"
    );
}

#[test]
fn criterion_06_endpoint_collapses() {
    let groups = product_groups(&["6", "8", "2x2x2"]);
    let mut worst = 0.0f64;
    let mut cells = 0usize;
    for g in &groups {
        let phi = harmonic_sequence(g.order());
        for (ip, p) in [1.1, 1.5, 1.9].into_iter().enumerate() {
            let pc = conjugate_exponent(p);
            for trial in 0..25 {
                let seed = derive_seed(6, "collapse", &[g.order(), ip], trial);
                let f = generate_function(g, FunctionKind::Gaussian, seed);
                let at_p = hyp_ratio(&f, &phi, p, p, TransformMode::Fast).unwrap();
                let paley = paley_ratio(&f, &phi, p, TransformMode::Fast).unwrap();
                let at_pc = hyp_ratio(&f, &phi, p, pc, TransformMode::Fast).unwrap();
                let hy = hy_ratio(&f, p, TransformMode::Fast).unwrap();
                worst = worst.max((at_p.ratio - paley.ratio).abs() / paley.ratio);
                worst = worst.max((at_pc.ratio - hy.ratio).abs() / hy.ratio);
                cells += 1;
            }
        }
    }
    assert!(worst <= 1e-12, "worst endpoint-collapse deviation {worst}");
    println!(
        "[PASS] criterion 6: interpolation endpoints collapse within 1e-12 ({cells} cells, worst {worst:.2e})"
    );
}

fn baseline_key(r: &RatioReport) -> String {
    let mut parts = vec![r.suite.id().to_string(), r.group.clone()];
    for key in ["p", "q", "b", "beta"] {
        if let Some(v) = r.params.get(key) {
            parts.push(format!("{key}={v:.6}"));
        }
    }
    parts.join("|")
}

fn cell_maxima(reports: &[RatioReport]) -> BTreeMap<String, f64> {
    let mut maxima: BTreeMap<String, f64> = BTreeMap::new();
    for r in reports.iter().filter(|r| !r.params.contains_key("skipped")) {
        let key = baseline_key(r);
        let entry = maxima.entry(key).or_insert(0.0);
        *entry = entry.max(r.ratio);
    }
    maxima
}

const BASELINE_PATH: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/tests/data/sweep_baselines.json"
);

#[test]
fn criterion_07_tracked_bounds_and_regression_baselines() {
    let reports = &*DEFAULT_SWEEP;

    // bound checks (and exact cases) via the shared evaluator
    let checks = evaluate_reports(reports, 1e-8);
    for c in &checks {
        assert!(c.passed, "{}: {}", c.label, c.detail);
    }

    // regression baselines: per-cell maxima must not creep upward
    let maxima = cell_maxima(reports);
    if std::env::var("REGEN_BASELINES").is_ok() {
        let body = serde_json::to_string_pretty(&maxima).unwrap();
        std::fs::write(BASELINE_PATH, body).unwrap();
        println!("[PASS] criterion 7: regenerated {} baselines", maxima.len());
        return;
    }
    let body = std::fs::read_to_string(BASELINE_PATH)
        .expect("baseline file missing; run with REGEN_BASELINES=1 once");
    let baselines: BTreeMap<String, f64> = serde_json::from_str(&body).unwrap();
    assert_eq!(
        baselines.len(),
        maxima.len(),
        "baseline coverage changed: {} stored vs {} computed",
        baselines.len(),
        maxima.len()
    );
    let mut worst_excess = f64::NEG_INFINITY;
    for (key, max) in &maxima {
        let stored = baselines
            .get(key)
            .unwrap_or_else(|| panic!("no baseline for cell {key}"));
        worst_excess = worst_excess.max(max - stored);
        assert!(
            max <= &(stored + 1e-9),
            "cell {key}: ratio {max} exceeds baseline {stored}"
        );
    }
    println!(
        "[PASS] criterion 7: tracked bounds hold and {} cell maxima within 1e-9 of baselines (worst excess {worst_excess:.2e})",
        maxima.len()
    );
}

#[test]
fn criterion_08_multiplier_norm_oracle() {
    let orders = [2usize, 3, 4, 5, 6, 7, 8];
    let worst = (0..20usize)
        .into_par_iter()
        .map(|i| {
            let g = FiniteAbelianGroup::new(&[orders[i % orders.len()]]).unwrap();
            let seed = derive_seed(8, "oracle", &[g.order()], i);
            let m = generate_operator(&g, OperatorDecay::RandomGaussian, seed).unwrap();
            let map = LeftMultiplier::new(&m);
            let est = opnorm_lp_lq_estimate(&map, 2.0, 2.0, 4, 1500, seed ^ 0xabcd).unwrap();
            let big = materialize_phase_map(&map);
            let exact = weylkit::svd::singular_values(&big).unwrap()[0];
            // the materialized norm must also agree with the closed form
            let s1 = m.singular_values().unwrap().largest();
            assert!((exact - s1).abs() <= 1e-10 * s1, "materialization drifted from S_1(M)");
            (est - exact).abs() / exact
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst <= 1e-8, "worst estimator deviation {worst}");
    println!(
        "[PASS] criterion 8: 2->2 estimates match materialized spectral norms within 1e-8 (20 operators, worst {worst:.2e})"
    );
}

#[test]
fn criterion_09_norm_oracles() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);

    // L^{p,p} = L^p on random phase-space functions
    let mut worst_pp = 0.0f64;
    for trial in 0..100u64 {
        let g = FiniteAbelianGroup::new(&[2 + (trial as usize % 7)]).unwrap();
        let f = generate_function(&g, FunctionKind::Gaussian, 900 + trial);
        let space = AtomicMeasureSpace::phase_space(&g);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let a = lorentz_norm(&space, &f.magnitudes(), p, p).unwrap();
            let b = lp_norm(&f, p, None).unwrap();
            worst_pp = worst_pp.max((a - b).abs() / b);
        }
    }
    assert!(worst_pp <= 1e-12, "L^(p,p) vs L^p deviation {worst_pp}");

    // harmonic weak norm is exactly 1 for every truncation length
    for n in 1..=64usize {
        let v = sequence_lorentz_norm(&harmonic_sequence(n), 1.0, f64::INFINITY).unwrap();
        assert_eq!(v, 1.0, "harmonic weak norm at N={n}");
    }

    // equimeasurability of the rearrangement
    let mut worst_eq = 0.0f64;
    for _ in 0..100 {
        let len = rng.gen_range(1..=50);
        let values: Vec<f64> = (0..len).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        let masses: Vec<f64> = (0..len).map(|_| rng.gen::<f64>() + 0.1).collect();
        let space = AtomicMeasureSpace::new(masses.clone()).unwrap();
        let prof = decreasing_rearrangement(&space, &values);
        for p in [1.0, 2.0, 2.5] {
            let direct: f64 = values
                .iter()
                .zip(&masses)
                .map(|(v, m)| v.abs().powf(p) * m)
                .sum();
            let steps: f64 = prof
                .levels()
                .iter()
                .zip(prof.widths())
                .map(|(l, w)| l.powf(p) * w)
                .sum();
            worst_eq = worst_eq.max((direct - steps).abs() / direct.max(1e-300));
        }
    }
    assert!(worst_eq <= 1e-12, "equimeasurability deviation {worst_eq}");
    println!(
        "[PASS] criterion 9: norm oracles (L^(p,p)=L^p worst {worst_pp:.2e}; harmonic weak norm exact; equimeasurability worst {worst_eq:.2e})"
    );
}

#[test]
fn criterion_10_fast_path_performance() {
    let rows = bench_transform(&[64], 3, 10).unwrap();
    let row = &rows[0];
    assert!(
        row.max_rel_diff <= 1e-12,
        "path disagreement {} at order 64",
        row.max_rel_diff
    );
    assert!(
        row.speedup >= 5.0,
        "fast path speedup {:.1}x below 5x at order 64",
        row.speedup
    );
    println!(
        "[PASS] criterion 10: fast path agrees within 1e-12 and runs {:.1}x faster at order 64 ({:.3} ms vs {:.3} ms)",
        row.speedup, row.fast_ms, row.reference_ms
    );
}

#[test]
fn criterion_11_singular_value_inequalities() {
    let worst = (0..500usize)
        .into_par_iter()
        .map(|i| {
            let order = 2 + (i % 15); // sizes 2..=16
            let g = FiniteAbelianGroup::new(&[order]).unwrap();
            let a = generate_operator(&g, OperatorDecay::RandomGaussian, derive_seed(11, "a", &[order], i)).unwrap();
            let b = generate_operator(&g, OperatorDecay::RandomGaussian, derive_seed(11, "b", &[order], i)).unwrap();
            let sum = a.add(&b).unwrap();
            let prod = a.compose(&b).unwrap();
            let sa = a.singular_values().unwrap();
            let sb = b.singular_values().unwrap();
            let ss = sum.singular_values().unwrap();
            let sp = prod.singular_values().unwrap();
            let mut excess = f64::NEG_INFINITY;
            for n in 0..order {
                for m in 0..order {
                    if n + m + 1 <= order {
                        excess = excess
                            .max(ss.nth(n + m + 1) - (sa.nth(n + 1) + sb.nth(m + 1)));
                        excess = excess
                            .max(sp.nth(n + m + 1) - sa.nth(n + 1) * sb.nth(m + 1));
                    }
                }
            }
            excess
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    assert!(worst <= 1e-10, "fan inequality excess {worst}");
    println!(
        "[PASS] criterion 11: additive and multiplicative singular-value inequalities hold on 500 pairs (worst excess {worst:.2e})"
    );
}
