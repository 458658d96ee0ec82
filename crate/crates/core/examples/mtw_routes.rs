//! MTW(u, v, w) by the closed formula, the Jacobi route and the definitional stencil.

use rand::rngs::StdRng;
use rand::SeedableRng;
use spaceform_mtw::oracle::{mtw_definitional, StencilConfig};
use spaceform_mtw::{CostFunction, Curvature, MtwInput, ProfileEngine, SpaceForm};

fn main() {
    let mut rng = StdRng::seed_from_u64(2);
    for (name, k, d) in [
        ("neg-log1p-cosh", Curvature::Negative, 2.0),
        ("quartic", Curvature::Zero, 1.0),
        ("neg-log1p-cos", Curvature::Positive, 2.5),
    ] {
        let cost = CostFunction::resolve(name, d).expect("preset");
        let engine = ProfileEngine::new(&cost, k).expect("engine");
        let space = SpaceForm::new(k, 3).expect("space");
        let x = space.random_point(&mut rng, 0.5);
        let u = space.random_tangent(&mut rng, &x);
        let w = space.random_tangent(&mut rng, &x);
        let v = space.random_tangent_with_norm(&mut rng, &x, 0.5 * cost.lprime_limit());
        let input = MtwInput::new(&space, u, v, w).expect("valid input");
        let closed = engine.mtw_closed(&space, &input).expect("closed");
        let jacobi = engine.mtw_via_jacobi(&space, &input).expect("jacobi");
        let oracle = mtw_definitional(&cost, &space, &input, &StencilConfig::default()).expect("oracle");
        println!("{name:16} closed {closed:+.12}  jacobi {jacobi:+.12}  oracle {oracle:+.8}");
    }
}
