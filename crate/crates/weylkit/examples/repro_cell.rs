use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use weylkit::harness::*;
use weylkit::operators::*;
use weylkit::weyl::*;
use weylkit::FiniteAbelianGroup;

fn main() {
    let g: FiniteAbelianGroup = "2x2x2".parse().unwrap();
    let n = g.order();
    let seed = derive_seed(42, "hormander_inv", &[3, 4, 0, 0, 0], 76);
    let est_seed = seed ^ 0x5eed_5eed_5eed_5eed;
    let sym = generate_function(&g, FunctionKind::Gaussian, seed);

    let mut rng = ChaCha8Rng::seed_from_u64(est_seed);
    let m = DMatrix::<Complex64>::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let start = KernelOperator::new(g.clone(), m).unwrap();
    let norm = start.schatten_lorentz_norm(2.0, 2.0).unwrap();
    let mut t = start.scale(Complex64::new(1.0 / norm, 0.0));
    for it in 0..=371 {
        let y = apply_symbol_multiplier(&sym, &t).unwrap();
        let fro = y.frobenius_norm();
        let svd_vals = y.matrix().clone().try_svd(false, false, f64::EPSILON, 100_000).unwrap();
        let via_svd: f64 = svd_vals.singular_values.iter().map(|s| s * s).sum::<f64>().sqrt();
        if it >= 360 {
            println!("iter {it}: fro = {fro:.15}   sqrt(sum s^2) = {via_svd:.15}   diff {:.2e}", (fro - via_svd).abs());
        }
        let u = y.scale(Complex64::new(1.0 / fro, 0.0));
        let z = apply_symbol_multiplier(&sym.conj(), &u).unwrap();
        t = z.scale(Complex64::new(1.0 / z.frobenius_norm(), 0.0));
    }
}
