//! The three model spaces: exponential and log maps, transport, and the cost exponential.

use rand::rngs::StdRng;
use rand::SeedableRng;
use spaceform_mtw::{CostFunction, Curvature, SpaceForm};

fn main() {
    let mut rng = StdRng::seed_from_u64(1);
    let cost = CostFunction::resolve("neg-cosh", 2.0).expect("preset");
    for k in Curvature::ALL {
        let space = SpaceForm::new(k, 3).expect("dimension >= 2");
        let x = space.random_point(&mut rng, 0.4);
        let v = space.random_tangent_with_norm(&mut rng, &x, 1.2);
        let y = space.exp_map(&v).expect("inside injectivity radius");
        let back = space.log_map(&x, &y).expect("off the cut locus");
        let moved = space.parallel_transport(&v, &y).expect("off the cut locus");
        println!(
            "K = {k:+}: d(x, exp v) = {:.15}, |log - v| = {:.1e}, |P v| = {:.15}",
            space.distance(&x, &y).expect("distance"),
            (back.components() - v.components()).norm(),
            space.norm(&moved),
        );

        if k == Curvature::Negative {
            let target = space.random_point(&mut rng, 0.4);
            let grad = space.cost_gradient(&cost, &x, &target).expect("gradient");
            let hit = space.cost_exp(&cost, &grad).expect("c-exp");
            println!("        c-exp(-d_x c(x, y)) misses y by {:.1e}", (hit.coords() - target.coords()).norm());
        }
    }
}
