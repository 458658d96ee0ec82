//! The preset catalog: every example cost with a closed-form inverse of `l'`.

use super::expr::Expr;

/// Closed forms for `h = (l')⁻¹` on `y ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticInverse {
    /// `l' = z`
    Identity,
    /// `l' = -sinh z`
    NegAsinh,
    /// `l' = -tanh(z/2)`
    NegTwoAtanh,
    /// `l' = tanh z`
    Atanh,
    /// `l' = -tanh z`
    NegAtanh,
    /// `l' = tan(z/2)`
    TwoAtan,
    /// `l' = z - 4 eps z^3`, the branch through the origin
    QuarticRoot { eps: f64 },
}

impl AnalyticInverse {
    pub fn apply(self, y: f64) -> f64 {
        match self {
            AnalyticInverse::Identity => y,
            AnalyticInverse::NegAsinh => -y.asinh(),
            AnalyticInverse::NegTwoAtanh => -2.0 * y.atanh(),
            AnalyticInverse::Atanh => y.atanh(),
            AnalyticInverse::NegAtanh => -y.atanh(),
            AnalyticInverse::TwoAtan => 2.0 * y.atan(),
            AnalyticInverse::QuarticRoot { eps } => quartic_root(eps, y),
        }
    }
}

/// Root of `4 eps x^3 - x + y = 0` continuing `x = y` from the origin.
fn quartic_root(eps: f64, y: f64) -> f64 {
    if eps == 0.0 {
        return y;
    }
    // depressed cubic x^3 + p x + q = 0
    let p = -1.0 / (4.0 * eps);
    let q = y / (4.0 * eps);
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = ((3.0 * q) / (p * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    // k = 1 is the middle root, the one that passes through x = 0 at y = 0
    let mut x = m * (theta - 2.0 * std::f64::consts::PI / 3.0).cos();
    // one Newton polish against cancellation in the cosine
    let f = 4.0 * eps * x * x * x - x + y;
    let fp = 12.0 * eps * x * x - 1.0;
    if fp != 0.0 {
        x -= f / fp;
    }
    x
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub text: String,
    pub inverse: AnalyticInverse,
    /// Curvatures at which the cost is one of the worked examples.
    pub curvatures: &'static [i8],
    pub expected: &'static str,
}

impl Preset {
    pub fn expression(&self) -> Expr {
        Expr::parse(&self.text).expect("preset expressions parse")
    }
}

pub const DEFAULT_QUARTIC_EPS: f64 = 1e-3;

pub fn catalog() -> Vec<Preset> {
    let fixed = [
        ("sq", "z^2/2", AnalyticInverse::Identity, &[0i8][..], "A3w-only at K=0 (all coefficients vanish)"),
        ("neg-cosh", "-cosh(z)", AnalyticInverse::NegAsinh, &[-1][..], "A3s at K=-1"),
        ("neg-log1p-cosh", "-log(1+cosh(z))", AnalyticInverse::NegTwoAtanh, &[-1][..], "A3s at K=-1"),
        ("log-cosh", "log(cosh(z))", AnalyticInverse::Atanh, &[-1][..], "A3w-only at K=-1"),
        ("neg-log-cosh", "-log(cosh(z))", AnalyticInverse::NegAtanh, &[-1][..], "A3w-only at K=-1"),
        ("neg-log1p-cos", "-log(1+cos(z))", AnalyticInverse::TwoAtan, &[1][..], "A3s at K=+1"),
    ];
    let mut out: Vec<Preset> = fixed
        .into_iter()
        .map(|(name, text, inverse, curvatures, expected)| Preset {
            name,
            text: text.to_string(),
            inverse,
            curvatures,
            expected,
        })
        .collect();
    out.push(quartic(DEFAULT_QUARTIC_EPS));
    out
}

/// `z^2/2 - eps z^4`, the perturbation family of the flat quadratic cost.
pub fn quartic(eps: f64) -> Preset {
    Preset {
        name: "quartic",
        text: format!("z^2/2 - {eps}*z^4"),
        inverse: AnalyticInverse::QuarticRoot { eps },
        curvatures: &[0],
        expected: "A3s at K=0 for small eps on |x-y| <= b (perturbation of z^2/2)",
    }
}

/// Resolves `name`, `quartic`, or `quartic(<eps>)`.
pub fn lookup(name: &str) -> Option<Preset> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("quartic") {
        let rest = rest.trim();
        if rest.is_empty() {
            return Some(quartic(DEFAULT_QUARTIC_EPS));
        }
        let eps: f64 = rest.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()?;
        return (eps.is_finite() && eps >= 0.0).then(|| quartic(eps));
    }
    catalog().into_iter().find(|p| p.name == name)
}
