//! Parsing cost profiles, admissibility, and the inverse of l'.

use spaceform_mtw::costlib::{presets, CostFunction, Expr};

fn main() {
    for text in ["-cosh(z)", "z^2/2 - 0.001*z^4", "-log(1 + cosh(z))", "2*z^-2 + sqrt(1+z^2)"] {
        let e = Expr::parse(text).expect("valid expression");
        println!("{text:24} parses as {e}");
    }

    println!();
    for text in ["z^3", "z^2/2 - z^4", "log(z)"] {
        match CostFunction::parse(text, 1.0) {
            Ok(c) => println!("{text:12} admissible, l'' {:?}", c.lpp_sign()),
            Err(e) => println!("{text:12} rejected: {e}"),
        }
    }

    println!("\nh = (l')^-1 for each preset at y = 0.5 (closed form vs Newton):");
    for p in presets::catalog() {
        let d = if p.name == "neg-log1p-cos" { 2.5 } else { 2.0 };
        let cost = CostFunction::from_preset(&p, d).expect("preset is admissible");
        let y = 0.5 * cost.lprime_limit();
        let closed = cost.inverse_lprime(y).expect("in range");
        let newton = cost.newton_inverse(y).expect("converges");
        println!("  {:16} y = {y:.6}  h = {closed:+.15}  newton = {newton:+.15}", p.name);
    }
}
