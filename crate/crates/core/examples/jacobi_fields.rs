//! Integrating the Jacobi equation from the closed-form Jacobi map: J(1) should vanish.

use spaceform_mtw::oracle::jacobi_residual;
use spaceform_mtw::{Curvature, SpaceForm};

fn main() {
    for k in Curvature::ALL {
        let space = SpaceForm::new(k, 3).expect("space");
        let u = space.frame_vector(&[0.4, 1.0, -0.3]).expect("u");
        let v = space.frame_vector(&[2.0, 0.0, 1.0]).expect("v");
        print!("K = {k:+}:");
        for steps in [10, 20, 40, 80] {
            let r = jacobi_residual(&space, &u, &v, steps).expect("residual");
            print!("  {steps:3} steps {r:.2e}");
        }
        println!();
    }
}
