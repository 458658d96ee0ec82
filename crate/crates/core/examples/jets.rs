//! Truncated Taylor arithmetic: derivatives, composition and series reversion.

use spaceform_mtw::jets::Jet;
use spaceform_mtw::oracle::fd_derivative_check;

fn main() {
    let z = Jet::<7>::variable(0.7);
    let (s, c) = z.sinh_cosh();
    let product = s * c;
    let double = (z.scale(2.0)).sinh().scale(0.5);
    println!("sinh(z) cosh(z) at 0.7 vs sinh(2z)/2:");
    for k in 0..7 {
        println!("  order {k}: {:+.15e}  {:+.15e}", product.coeff(k), double.coeff(k));
    }

    let cosh = Jet::<5>::variable(1.0).cosh();
    println!("\nderivatives of cosh at 1, jet vs finite differences:");
    for k in 1..=4 {
        let fd = fd_derivative_check(f64::cosh, 1.0, k).expect("finite stencil");
        println!("  d^{k}: {:+.12}  {:+.12}", cosh.derivative(k), fd);
    }

    // sinh reverted at 0 is asinh
    let inverse = Jet::<7>::variable(0.0).sinh().revert().expect("invertible");
    let asinh = Jet::<7>::variable(0.0).asinh();
    println!("\nrevert(sinh) vs asinh at 0: {:?}\n                            {:?}", inverse.coeffs(), asinh.coeffs());
}
