use std::time::Instant;
use weylkit::harness::*;
use weylkit::inequalities::*;
use weylkit::FiniteAbelianGroup;

fn main() {
    let g = FiniteAbelianGroup::new(&[16]).unwrap();
    for (p, q) in [(2.0, 2.0), (1.5, 3.0), (1.1, 4.0)] {
        let m = generate_operator(&g, OperatorDecay::RandomGaussian, 7).unwrap();
        let t0 = Instant::now();
        let r = hormander_check(&m, p, q, 3, 99).unwrap();
        println!("hormander p={p} q={q}: {:?} ratio {:.6}", t0.elapsed(), r.ratio);
        let sym = generate_function(&g, FunctionKind::Gaussian, 7);
        let t0 = Instant::now();
        let r = hormander_inverse_check(&sym, p, q, 2, 99).unwrap();
        println!("horm_inv  p={p} q={q}: {:?} ratio {:.6}", t0.elapsed(), r.ratio);
    }
}
