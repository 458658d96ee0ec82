//! Coefficient profiles alpha, beta, gamma, delta of a preset cost, including z = 0.

use spaceform_mtw::{CostFunction, Curvature, ProfileEngine};

fn main() {
    let cost = CostFunction::resolve("neg-cosh", 2.0).expect("preset");
    let engine = ProfileEngine::new(&cost, Curvature::Negative).expect("engine");
    println!("-cosh on K = -1; expected alpha = gamma = -(1+z^2)^(-3/2), beta = delta = -(1+z^2)^(-1/2)");
    println!("{:>8} {:>12} {:>12} {:>12} {:>12} {:>12}", "z", "alpha", "beta", "gamma", "delta", "expected b");
    for i in 0..=8 {
        let z = cost.lprime_limit() * i as f64 / 8.0;
        let p = engine.profile(z).expect("in range");
        let expected = -1.0 / (1.0 + z * z).sqrt();
        println!("{z:8.4} {:12.8} {:12.8} {:12.8} {:12.8} {:12.8}", p.alpha, p.beta, p.gamma, p.delta, expected);
    }
    println!("series branch used for z <= {:.4}", engine.series_radius());
}
