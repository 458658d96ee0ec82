//! The profile function `l` of a radial cost `c = l ∘ d`.

pub mod expr;
pub mod presets;

use std::fmt;

use thiserror::Error;

use crate::jets::{Jet, JetError};
use crate::Curvature;

pub use expr::{BinOp, Expr, ParseError};
pub use presets::{AnalyticInverse, Preset};

/// Grid used when a cost is constructed without an explicit validation grid.
pub const DEFAULT_VALIDATION_GRID: usize = 512;
const MIN_VALIDATION_GRID: usize = 64;
const ODD_COEFF_TOL: f64 = 1e-10;
const EVEN_SAMPLE_TOL: f64 = 1e-12;
const LPP_ZERO_TOL: f64 = 1e-12;
const NEWTON_CAP: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityKind {
    NotEven,
    LppSignChange,
    LppZero,
}

impl AdmissibilityKind {
    pub fn name(self) -> &'static str {
        match self {
            AdmissibilityKind::NotEven => "not-even",
            AdmissibilityKind::LppSignChange => "lpp-sign-change",
            AdmissibilityKind::LppZero => "lpp-zero",
        }
    }
}

impl fmt::Display for AdmissibilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} at z = {witness}")]
pub struct AdmissibilityError {
    pub kind: AdmissibilityKind,
    pub witness: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("inadmissible cost: {0}")]
    Admissibility(#[from] AdmissibilityError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("diameter must be positive and finite, got {0}")]
    Diameter(f64),
    #[error("diameter {0} reaches the cut locus of the unit sphere (needs D < pi)")]
    SphereDiameter(f64),
    #[error("validation grid must have at least {MIN_VALIDATION_GRID} points, got {0}")]
    Grid(usize),
    #[error("|y| = {y} exceeds |l'(D)| = {limit}")]
    OutOfRange { y: f64, limit: f64 },
    #[error("inverse of l' did not converge for y = {0}")]
    ConvergenceFailure(f64),
}

/// Sign of `l''` on `[0, D]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

/// An admissible even profile `l` restricted to `[-D, D]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    label: String,
    expression: Expr,
    diameter: f64,
    lpp_sign: Sign,
    analytic_inverse: Option<AnalyticInverse>,
    lprime_at_diameter: f64,
}

impl CostFunction {
    /// Validates `expression` on `[0, diameter]` and builds the cost.
    pub fn new(expression: Expr, diameter: f64) -> Result<Self, CostError> {
        let label = expression.to_string();
        Self::build(label, expression, diameter, None, DEFAULT_VALIDATION_GRID)
    }

    pub fn parse(text: &str, diameter: f64) -> Result<Self, CostError> {
        let expression = Expr::parse(text)?;
        Self::build(text.trim().to_string(), expression, diameter, None, DEFAULT_VALIDATION_GRID)
    }

    pub fn from_preset(preset: &Preset, diameter: f64) -> Result<Self, CostError> {
        Self::build(
            preset.name.to_string(),
            preset.expression(),
            diameter,
            Some(preset.inverse),
            DEFAULT_VALIDATION_GRID,
        )
    }

    /// A preset name (including `quartic(<eps>)`) or else a free expression.
    pub fn resolve(spec: &str, diameter: f64) -> Result<Self, CostError> {
        match presets::lookup(spec) {
            Some(p) => Self::from_preset(&p, diameter),
            None => Self::parse(spec, diameter),
        }
    }

    fn build(
        label: String,
        expression: Expr,
        diameter: f64,
        analytic_inverse: Option<AnalyticInverse>,
        grid: usize,
    ) -> Result<Self, CostError> {
        if !(diameter > 0.0 && diameter.is_finite()) {
            return Err(CostError::Diameter(diameter));
        }
        let lpp_sign = validate_admissibility(&expression, diameter, grid)?;
        let lprime_at_diameter = expression.eval_jet::<2>(diameter)?.derivative(1);
        Ok(Self {
            label,
            expression,
            diameter,
            lpp_sign,
            analytic_inverse,
            lprime_at_diameter,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn expression(&self) -> &Expr {
        &self.expression
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn lpp_sign(&self) -> Sign {
        self.lpp_sign
    }

    pub fn analytic_inverse(&self) -> Option<AnalyticInverse> {
        self.analytic_inverse
    }

    /// `|l'(D)|`, the right end of the scan interval.
    pub fn lprime_limit(&self) -> f64 {
        self.lprime_at_diameter.abs()
    }

    /// Re-runs admissibility validation on a grid of `grid_size` points.
    pub fn validate(&self, grid_size: usize) -> Result<Sign, CostError> {
        validate_admissibility(&self.expression, self.diameter, grid_size)
    }

    /// On the unit sphere every admissible diameter must stay below the cut locus.
    pub fn check_curvature(&self, k: Curvature) -> Result<(), CostError> {
        if k == Curvature::Positive && self.diameter >= std::f64::consts::PI {
            return Err(CostError::SphereDiameter(self.diameter));
        }
        Ok(())
    }

    pub fn eval(&self, z: f64) -> Result<f64, JetError> {
        self.expression.eval(z)
    }

    /// Order-6 jet of `l` at `z0`.
    pub fn jet(&self, z0: f64) -> Result<Jet, JetError> {
        self.expression.eval_jet(z0)
    }

    pub fn jet_n<const N: usize>(&self, z0: f64) -> Result<Jet<N>, JetError> {
        self.expression.eval_jet(z0)
    }

    pub fn lprime(&self, z: f64) -> Result<f64, JetError> {
        Ok(self.expression.eval_jet::<2>(z)?.derivative(1))
    }

    /// `h(y) = (l')⁻¹(y)`, computed on `|y|` and then sign-flipped so `h` is odd.
    pub fn inverse_lprime(&self, y: f64) -> Result<f64, CostError> {
        let t = y.abs();
        let limit = self.lprime_limit();
        if !(t <= limit * (1.0 + 1e-12)) {
            return Err(CostError::OutOfRange { y, limit });
        }
        let t = t.min(limit);
        let x = match self.analytic_inverse {
            Some(inv) => inv.apply(t),
            None => self.newton_inverse(t)?,
        };
        Ok(if y.is_sign_negative() { -x } else { x })
    }

    /// Bisection-safeguarded Newton for `l'(x) = y` on `[-D, D]`, solved for
    /// `|y|` and extended to negative `y` by oddness.
    pub fn newton_inverse(&self, y: f64) -> Result<f64, CostError> {
        if y.is_sign_negative() {
            return self.newton_inverse(-y).map(|x| -x);
        }
        let t = y;
        if t == 0.0 {
            return Ok(0.0);
        }
        // g(x) = s l'(x) - t is increasing on [0, D]; the root u gives h(t) = s u
        // because l' is odd
        let s = self.lpp_sign.as_f64();
        let g = |x: f64| -> Result<(f64, f64), CostError> {
            let j = self.expression.eval_jet::<3>(x)?;
            Ok((s * j.derivative(1) - t, s * j.derivative(2)))
        };
        let (mut lo, mut hi) = (0.0, self.diameter);
        let mut x = (t / g(0.0)?.1.abs()).clamp(lo, hi);
        let scale = t.max(1.0);
        for _ in 0..NEWTON_CAP {
            let (r, d) = g(x)?;
            if r.abs() <= 1e-15 * scale {
                return Ok(s * x);
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let step = x - r / d.abs();
            x = if step > lo && step < hi && d != 0.0 { step } else { 0.5 * (lo + hi) };
            if hi - lo <= 4.0 * f64::EPSILON * hi.max(1.0) {
                return Ok(s * x);
            }
        }
        let (r, _) = g(x)?;
        if r.abs() <= 1e-12 * scale {
            Ok(s * x)
        } else {
            Err(CostError::ConvergenceFailure(t))
        }
    }
}

/// Checks that `l` is even and that `l''` keeps a strict sign on `[0, D]`.
/// Returns that sign.
pub fn validate_admissibility(expr: &Expr, diameter: f64, grid_size: usize) -> Result<Sign, CostError> {
    if !(diameter > 0.0 && diameter.is_finite()) {
        return Err(CostError::Diameter(diameter));
    }
    if grid_size < MIN_VALIDATION_GRID {
        return Err(CostError::Grid(grid_size));
    }
    let not_even = |witness| CostError::Admissibility(AdmissibilityError { kind: AdmissibilityKind::NotEven, witness });

    let at_zero: Jet = expr.eval_jet(0.0)?;
    if [1, 3, 5].iter().any(|&k| at_zero.coeff(k).abs() > ODD_COEFF_TOL) {
        return Err(not_even(0.0));
    }

    let mut sign: Option<Sign> = None;
    for i in 0..grid_size {
        let z = diameter * i as f64 / (grid_size - 1) as f64;
        let plus = expr.eval_jet::<3>(z)?;
        let minus = expr.eval(-z).map_err(|_| not_even(z))?;
        if (plus.value() - minus).abs() > EVEN_SAMPLE_TOL * plus.value().abs().max(1.0) {
            return Err(not_even(z));
        }
        let lpp = plus.derivative(2);
        if lpp.abs() <= LPP_ZERO_TOL || !lpp.is_finite() {
            return Err(AdmissibilityError { kind: AdmissibilityKind::LppZero, witness: z }.into());
        }
        let here = if lpp > 0.0 { Sign::Positive } else { Sign::Negative };
        match sign {
            None => sign = Some(here),
            Some(s) if s != here => {
                return Err(AdmissibilityError { kind: AdmissibilityKind::LppSignChange, witness: z }.into())
            }
            Some(_) => {}
        }
    }
    Ok(sign.expect("grid is non-empty"))
}

/// Order-6 jet of `l` at `z0`.
pub fn eval_cost_jet(cost: &CostFunction, z0: f64) -> Result<Jet, JetError> {
    cost.jet(z0)
}
