//! The perturbation criterion and the quartic family z^2/2 - eps z^4.

use spaceform_mtw::costlib::Expr;
use spaceform_mtw::{perturbation_check, CostFunction, Curvature, ProfileEngine};

fn main() {
    let f = Expr::parse("-4*z^2").expect("expression");
    for (k, b) in [(-1.0, 0.5), (-1.0, 2.0), (-9.0, 1.0)] {
        let out = perturbation_check(&f, k, b, 4096).expect("valid bounds");
        println!("f = {f}, k = {k}, b = {b}: holds = {}", out.holds);
    }

    let eps = 1e-3;
    let cost = CostFunction::resolve(&format!("quartic({eps})"), 1.0).expect("preset");
    let engine = ProfileEngine::new(&cost, Curvature::Zero).expect("engine");
    println!("\nquartic(eps = {eps}): coefficients / eps should be close to -8");
    for z in [0.1, 0.5, cost.lprime_limit()] {
        let p = engine.profile(z).expect("in range");
        println!("  z = {z:.4}: {:+.4} {:+.4} {:+.4} {:+.4}", p.alpha / eps, p.beta / eps, p.gamma / eps, p.delta / eps);
    }
}
