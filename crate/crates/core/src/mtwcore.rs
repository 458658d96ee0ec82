//! Closed-form MTW curvature of `c = l ∘ d` on a space form.
//!
//! With `h = (l')⁻¹` the two radial profiles are
//!
//! ```text
//! A(z) = 1 / h'(z)          B(z) = z coth h(z)   (K = -1)
//!                                  z / h(z)      (K =  0)
//!                                  z cot h(z)    (K = +1)
//! ```
//!
//! and every quantity below is a combination of `A`, `B` and their first two
//! derivatives. Away from `z = 0` they come from order-6 jets at `z`. Near
//! `z = 0` the divisions by `z` and `z²` cancel catastrophically, so a wide
//! series is expanded once at the origin, the divisions become exact shifts,
//! and the resulting even series is evaluated at `z`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::costlib::{CostError, CostFunction};
use crate::geometry::{same_base, Curvature, GeometryError, SpaceForm, TangentVector};
use crate::jets::{Jet, JetError};

/// Width of the series expanded at `z = 0`.
const SERIES_WIDTH: usize = 24;
/// Highest order of the reduced series that is exact at that width.
const SERIES_EXACT: usize = SERIES_WIDTH - 5;
const SERIES_MAX_RADIUS: f64 = 0.2;
const SERIES_TAIL_TOL: f64 = 1e-15;
/// Below this argument `x coth x` and `x cot x` are summed from their Maclaurin series.
const PHI_SERIES_RADIUS: f64 = 0.5;
const POLE_TOL: f64 = 1e-9;
const LIMIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MtwError {
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("h({z}) = {h} is within {POLE_TOL:e} of a pole of cot/coth")]
    Pole { z: f64, h: f64 },
    #[error("{quantity} does not vanish at z = 0 (found {value:e}); the cost is not admissible")]
    Limit { quantity: &'static str, value: f64 },
    #[error("v must be nonzero")]
    ZeroVector,
    #[error("z = {z} outside the scan interval [0, {limit}]")]
    OutOfRange { z: f64, limit: f64 },
    #[error("space form curvature {got} does not match the profile curvature {expected}")]
    CurvatureMismatch { expected: Curvature, got: Curvature },
}

/// `A, B` and their first two derivatives at one `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbValues {
    pub a: f64,
    pub a_prime: f64,
    pub a_dprime: f64,
    pub b: f64,
    pub b_prime: f64,
    pub b_dprime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientProfile {
    pub z: f64,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "A_prime")]
    pub a_prime: f64,
    #[serde(rename = "A_dprime")]
    pub a_dprime: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "B_prime")]
    pub b_prime: f64,
    #[serde(rename = "B_dprime")]
    pub b_dprime: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

/// The division-free building blocks: `A''`, `B''`, `A'/z`, `B'/z`, `(A-B)/z²`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Reduced {
    a_dprime: f64,
    b_dprime: f64,
    a1_over_z: f64,
    b1_over_z: f64,
    diff_over_z2: f64,
}

impl Reduced {
    fn alpha(&self) -> f64 {
        self.a_dprime + 6.0 * self.diff_over_z2 - 4.0 * (self.a1_over_z - self.b1_over_z)
    }

    fn beta(&self) -> f64 {
        self.a1_over_z - 2.0 * self.diff_over_z2
    }
}

struct SeriesAtZero {
    a: Jet<SERIES_WIDTH>,
    b: Jet<SERIES_WIDTH>,
    a_dprime: Jet<SERIES_WIDTH>,
    b_dprime: Jet<SERIES_WIDTH>,
    a1_over_z: Jet<SERIES_WIDTH>,
    b1_over_z: Jet<SERIES_WIDTH>,
    diff_over_z2: Jet<SERIES_WIDTH>,
}

impl SeriesAtZero {
    fn reduced_at(&self, z: f64) -> Reduced {
        let ev = |j: &Jet<SERIES_WIDTH>| j.eval(z);
        Reduced {
            a_dprime: ev(&self.a_dprime),
            b_dprime: ev(&self.b_dprime),
            a1_over_z: ev(&self.a1_over_z),
            b1_over_z: ev(&self.b1_over_z),
            diff_over_z2: ev(&self.diff_over_z2),
        }
    }

    fn reduced(&self) -> [&Jet<SERIES_WIDTH>; 5] {
        [&self.a_dprime, &self.b_dprime, &self.a1_over_z, &self.b1_over_z, &self.diff_over_z2]
    }
}

/// Zeroes coefficients past `exact` so that truncation garbage never leaks into evaluation.
fn truncate<const N: usize>(j: Jet<N>, exact: usize) -> Jet<N> {
    let mut c = *j.coeffs();
    c.iter_mut().skip(exact + 1).for_each(|x| *x = 0.0);
    Jet::new(j.base(), c)
}

/// Maclaurin coefficients of `x coth x` (sign +1) or `x cot x` (sign -1) in powers of `x²`.
fn phi_series(k: Curvature) -> [f64; 13] {
    const BERNOULLI_EVEN: [f64; 13] = [
        1.0,
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
        854513.0 / 138.0,
        -236364091.0 / 2730.0,
    ];
    let mut out = [0.0; 13];
    for (n, c) in out.iter_mut().enumerate() {
        let two_n = 2 * n as i32;
        let mut v = 2f64.powi(two_n) * BERNOULLI_EVEN[n] / crate::jets::factorial(2 * n);
        if k == Curvature::Positive && n % 2 == 1 {
            v = -v;
        }
        *c = v;
    }
    out
}

/// Jet of `φ_K(x)`: `x coth x`, `1`, or `x cot x`.
pub(crate) fn phi_jet<const N: usize>(k: Curvature, x: &Jet<N>, z: f64) -> Result<Jet<N>, MtwError> {
    let x0 = x.value();
    match k {
        Curvature::Zero => Ok(Jet::constant(x.base(), 1.0)),
        _ if x0.abs() < PHI_SERIES_RADIUS => {
            let sq = *x * *x;
            let coeffs = phi_series(k);
            let mut acc = Jet::constant(x.base(), 0.0);
            for &c in coeffs.iter().rev() {
                acc = (acc * sq).offset(c);
            }
            Ok(acc)
        }
        Curvature::Negative => {
            let (s, c) = x.sinh_cosh();
            Ok((*x * c).checked_div(&s)?)
        }
        Curvature::Positive => {
            let nearest_pole = (x0 / std::f64::consts::PI).round() * std::f64::consts::PI;
            if (x0 - nearest_pole).abs() < POLE_TOL {
                return Err(MtwError::Pole { z, h: x0 });
            }
            let (s, c) = x.sin_cos();
            Ok((*x * c).checked_div(&s)?)
        }
    }
}

/// Jet of `coth x` (K = -1) or `cot x` (K = +1) away from `x = 0`.
fn cot_jet<const N: usize>(k: Curvature, x: &Jet<N>, z: f64) -> Result<Jet<N>, MtwError> {
    let x0 = x.value();
    let (s, c) = match k {
        Curvature::Positive => {
            let nearest_pole = (x0 / std::f64::consts::PI).round() * std::f64::consts::PI;
            if (x0 - nearest_pole).abs() < POLE_TOL {
                return Err(MtwError::Pole { z, h: x0 });
            }
            x.sin_cos()
        }
        _ => x.sinh_cosh(),
    };
    Ok(c.checked_div(&s)?)
}

/// Scalar `φ_K(x)`, continuous through `x = 0`.
pub(crate) fn phi(k: Curvature, x: f64) -> Result<f64, MtwError> {
    phi_jet::<1>(k, &Jet::constant(x, x), x).map(|j| j.value())
}

/// Evaluates coefficient profiles of one cost on one space form.
///
/// Construction expands the series at `z = 0`; afterwards each call costs one
/// order-6 jet evaluation (or a polynomial evaluation near the origin).
pub struct ProfileEngine<'a> {
    cost: &'a CostFunction,
    curvature: Curvature,
    series: SeriesAtZero,
    series_radius: f64,
}

impl<'a> ProfileEngine<'a> {
    pub fn new(cost: &'a CostFunction, curvature: Curvature) -> Result<Self, MtwError> {
        cost.check_curvature(curvature)?;
        let series = Self::expand_at_zero(cost, curvature)?;
        let series_radius = Self::radius_for(&series);
        Ok(Self { cost, curvature, series, series_radius })
    }

    pub fn cost(&self) -> &CostFunction {
        self.cost
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    /// Arguments at or below this radius are served from the series at the origin.
    pub fn series_radius(&self) -> f64 {
        self.series_radius
    }

    fn expand_at_zero(cost: &CostFunction, k: Curvature) -> Result<SeriesAtZero, MtwError> {
        const W: usize = SERIES_WIDTH;
        let l: Jet<W> = cost.jet_n(0.0)?;
        let lp = truncate(l.differentiate(), W - 2);
        let h = truncate(lp.revert()?, W - 2);
        let hp = h.differentiate();
        let a = truncate(hp.recip()?, W - 3);

        // z / h via the exact shift h / z, then B = (z / h) φ(h)
        let h_over_z = h.shift_down(1, 0.0).map_err(|_| MtwError::Limit { quantity: "h(0)", value: h.value() })?;
        let z_over_h = h_over_z.recip()?;
        let b = truncate(z_over_h * phi_jet(k, &h, 0.0)?, W - 3);

        let limit_tol = LIMIT_TOL * a.value().abs().max(1.0);
        let a1 = a.differentiate();
        let b1 = b.differentiate();
        let shift = |j: Jet<W>, m: usize, quantity: &'static str| {
            j.shift_down(m, limit_tol).map_err(|e| match e {
                JetError::NonVanishing { value, .. } => MtwError::Limit { quantity, value },
                other => other.into(),
            })
        };
        Ok(SeriesAtZero {
            a,
            b,
            a_dprime: truncate(a1.differentiate(), SERIES_EXACT),
            b_dprime: truncate(b1.differentiate(), SERIES_EXACT),
            a1_over_z: truncate(shift(a1, 1, "A'")?, SERIES_EXACT),
            b1_over_z: truncate(shift(b1, 1, "B'")?, SERIES_EXACT),
            diff_over_z2: truncate(shift(a - b, 2, "A - B")?, SERIES_EXACT),
        })
    }

    /// Largest radius (capped) at which the last exact even term of every
    /// reduced series stays below the tail tolerance.
    fn radius_for(series: &SeriesAtZero) -> f64 {
        let last = SERIES_EXACT - SERIES_EXACT % 2;
        series.reduced().iter().fold(SERIES_MAX_RADIUS, |r, j| {
            let tail = j.coeff(last).abs();
            if tail == 0.0 {
                return r;
            }
            let scale = j.value().abs().max(1.0);
            r.min((SERIES_TAIL_TOL * scale / tail).powf(1.0 / last as f64))
        })
    }

    fn check_z(&self, z: f64) -> Result<(), MtwError> {
        let limit = self.cost.lprime_limit();
        if !(z >= 0.0 && z <= limit * (1.0 + 1e-12)) {
            return Err(MtwError::OutOfRange { z, limit });
        }
        Ok(())
    }

    fn uses_series(&self, z: f64) -> bool {
        z <= self.series_radius
    }

    /// Order-6 jets of `A` and `B` at `z`.
    pub fn ab_jets(&self, z: f64) -> Result<(Jet, Jet), MtwError> {
        self.check_z(z)?;
        if self.uses_series(z) {
            let a = self.series.a.recenter(z).resize();
            let b = self.series.b.recenter(z).resize();
            return Ok((a, b));
        }
        let h0 = self.cost.inverse_lprime(z)?;
        let l: Jet = self.cost.jet(h0)?;
        let mut h = l.differentiate().revert()?;
        // rebase exactly at z; l'(h0) may differ from z in the last ulp
        h = Jet::new(z, *h.coeffs());
        let a = h.differentiate().recip()?;
        let zj = Jet::variable(z);
        let b = match self.curvature {
            Curvature::Zero => zj.checked_div(&h)?,
            k if h.value().abs() >= PHI_SERIES_RADIUS => zj * cot_jet(k, &h, z)?,
            k => zj.checked_div(&h)? * phi_jet(k, &h, z)?,
        };
        Ok((a, b))
    }

    pub fn ab(&self, z: f64) -> Result<AbValues, MtwError> {
        let (a, b) = self.ab_jets(z)?;
        Ok(AbValues {
            a: a.value(),
            a_prime: a.derivative(1),
            a_dprime: a.derivative(2),
            b: b.value(),
            b_prime: b.derivative(1),
            b_dprime: b.derivative(2),
        })
    }

    fn reduced(&self, z: f64, ab: &AbValues) -> Reduced {
        if self.uses_series(z) {
            return self.series.reduced_at(z);
        }
        Reduced {
            a_dprime: ab.a_dprime,
            b_dprime: ab.b_dprime,
            a1_over_z: ab.a_prime / z,
            b1_over_z: ab.b_prime / z,
            diff_over_z2: (ab.a - ab.b) / (z * z),
        }
    }

    pub fn profile(&self, z: f64) -> Result<CoefficientProfile, MtwError> {
        let ab = self.ab(z)?;
        let r = self.reduced(z, &ab);
        Ok(CoefficientProfile {
            z,
            a: ab.a,
            a_prime: ab.a_prime,
            a_dprime: ab.a_dprime,
            b: ab.b,
            b_prime: ab.b_prime,
            b_dprime: ab.b_dprime,
            alpha: r.alpha(),
            beta: r.beta(),
            gamma: r.b_dprime,
            delta: r.b1_over_z,
        })
    }

    fn check_space(&self, space: &SpaceForm) -> Result<(), MtwError> {
        if space.curvature() != self.curvature {
            return Err(MtwError::CurvatureMismatch { expected: self.curvature, got: space.curvature() });
        }
        Ok(())
    }

    /// MTW(u, v, w) from the closed formula in `A'', B'', A'/|v|, B'/|v|, (A-B)/|v|²`.
    pub fn mtw_closed(&self, space: &SpaceForm, input: &MtwInput) -> Result<f64, MtwError> {
        self.check_space(space)?;
        let z = space.norm(&input.v);
        let ab = self.ab(z)?;
        let r = self.reduced(z, &ab);

        let (u0, u1) = decompose(space, &input.u, &input.v)?;
        let (w0, w1) = decompose(space, &input.w, &input.v)?;
        let sq = |x: &TangentVector| space.inner(x, x);
        let (u0s, u1s, w0s, w1s) = (sq(&u0), sq(&u1), sq(&w0), sq(&w1));
        let x = space.inner(&u0, &w0) * space.inner(&u1, &w1);
        let y = space.inner(&u1, &w1);

        let bracket = r.a_dprime * u0s * w0s
            + r.b_dprime * u1s * w0s
            + r.a1_over_z * (u0s * w1s + 4.0 * x)
            + r.b1_over_z * (u1s * w1s - 4.0 * x)
            + 2.0 * r.diff_over_z2 * (y * y - u0s * w1s - 2.0 * x);
        Ok(-1.5 * bracket)
    }

    /// MTW(u, v, w) as `-3/2 d²/ds²` of `A(|v+sw|)|u₀(s)|² + B(|v+sw|)|u₁(s)|²`,
    /// with the `s`-derivative carried by a second-order jet.
    pub fn mtw_via_jacobi(&self, space: &SpaceForm, input: &MtwInput) -> Result<f64, MtwError> {
        self.check_space(space)?;
        let (u, v, w) = (&input.u, &input.v, &input.w);
        let z = space.norm(v);
        let (a, b) = self.ab_jets(z)?;
        let a: Jet<3> = a.resize();
        let b: Jet<3> = b.resize();

        let vv = space.inner(v, v);
        let vw = space.inner(v, w);
        let ww = space.inner(w, w);
        let uv = space.inner(u, v);
        let uw = space.inner(u, w);
        let uu = space.inner(u, u);

        // |v + s w|² and <u, v + s w> as polynomials in s
        let len_sq = Jet::<3>::new(0.0, [vv, 2.0 * vw, ww]);
        let r = Jet::new(0.0, *len_sq.sqrt()?.coeffs());
        let along = Jet::<3>::new(0.0, [uv, uw, 0.0]);
        let u0_sq = (along * along).checked_div(&len_sq)?;
        let u1_sq = (-u0_sq).offset(uu);

        let a_s = a.compose(&r);
        let b_s = b.compose(&r);
        let f = a_s * u0_sq + b_s * u1_sq;
        Ok(-1.5 * f.derivative(2))
    }
}

/// Splits `u` into its component along `v` and the orthogonal remainder.
pub fn decompose(space: &SpaceForm, u: &TangentVector, v: &TangentVector) -> Result<(TangentVector, TangentVector), MtwError> {
    if !same_base(u.base(), v.base()) {
        return Err(GeometryError::BaseMismatch.into());
    }
    let vv = space.inner(v, v);
    if vv == 0.0 {
        return Err(MtwError::ZeroVector);
    }
    let u0 = v.scaled(space.inner(u, v) / vv);
    let u1 = u.add_scaled(-1.0, &u0);
    Ok((u0, u1))
}

/// `𝒥(u, exp v) = -u₀ - φ_K(|v|) u₁`, the initial velocity of the Jacobi
/// field with `J(0) = u`, `J(1) = 0` along `τ ↦ exp(τ v)`.
pub fn jacobi_map_closed(space: &SpaceForm, u: &TangentVector, v: &TangentVector) -> Result<TangentVector, MtwError> {
    let (u0, u1) = decompose(space, u, v)?;
    let len = space.norm(v);
    let factor = phi(space.curvature(), len)?;
    Ok(u0.scaled(-1.0).add_scaled(-factor, &u1))
}

/// The arguments of MTW(u, v, w), all tangent at one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct MtwInput {
    pub u: TangentVector,
    pub v: TangentVector,
    pub w: TangentVector,
}

impl MtwInput {
    pub fn new(space: &SpaceForm, u: TangentVector, v: TangentVector, w: TangentVector) -> Result<Self, MtwError> {
        if !same_base(u.base(), v.base()) || !same_base(v.base(), w.base()) {
            return Err(GeometryError::BaseMismatch.into());
        }
        if space.norm(&v) == 0.0 {
            return Err(MtwError::ZeroVector);
        }
        Ok(Self { u, v, w })
    }
}

/// `(A, A', A'', B, B', B'')` at `z`.
pub fn compute_ab(cost: &CostFunction, k: Curvature, z: f64) -> Result<AbValues, MtwError> {
    ProfileEngine::new(cost, k)?.ab(z)
}

pub fn coefficients(cost: &CostFunction, k: Curvature, z: f64) -> Result<CoefficientProfile, MtwError> {
    ProfileEngine::new(cost, k)?.profile(z)
}

pub fn mtw_closed(cost: &CostFunction, space: &SpaceForm, input: &MtwInput) -> Result<f64, MtwError> {
    ProfileEngine::new(cost, space.curvature())?.mtw_closed(space, input)
}

pub fn mtw_via_jacobi(cost: &CostFunction, space: &SpaceForm, input: &MtwInput) -> Result<f64, MtwError> {
    ProfileEngine::new(cost, space.curvature())?.mtw_via_jacobi(space, input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn engine_for(name: &str, k: Curvature) -> (CostFunction, Curvature) {
        (CostFunction::resolve(name, 3.0).unwrap(), k)
    }

    fn sample_z(limit: f64) -> Vec<f64> {
        vec![0.0, 1e-7, 1e-3, 0.05, 0.12, 0.19, 0.21, 0.4, 0.8 * limit, limit]
    }

    fn assert_profile(name: &str, k: Curvature, expect: impl Fn(f64) -> [f64; 4]) {
        let (cost, k) = engine_for(name, k);
        let engine = ProfileEngine::new(&cost, k).unwrap();
        for z in sample_z(cost.lprime_limit()) {
            let p = engine.profile(z).unwrap();
            let want = expect(z);
            let got = [p.alpha, p.beta, p.gamma, p.delta];
            for (g, w) in got.iter().zip(want) {
                assert!((g - w).abs() < 1e-10 * w.abs().max(1.0), "{name} at z={z}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn neg_cosh_profile() {
        assert_profile("neg-cosh", Curvature::Negative, |z| {
            let s = (1.0 + z * z).sqrt();
            [-1.0 / (s * s * s), -1.0 / s, -1.0 / (s * s * s), -1.0 / s]
        });
    }

    #[test]
    fn constant_profiles() {
        assert_profile("neg-log1p-cosh", Curvature::Negative, |_| [-1.0; 4]);
        assert_profile("neg-log1p-cos", Curvature::Positive, |_| [-1.0; 4]);
        assert_profile("log-cosh", Curvature::Negative, |_| [0.0; 4]);
        assert_profile("neg-log-cosh", Curvature::Negative, |_| [0.0; 4]);
        assert_profile("sq", Curvature::Zero, |_| [0.0; 4]);
    }

    #[test]
    fn ab_values_for_neg_cosh() {
        let (cost, k) = engine_for("neg-cosh", Curvature::Negative);
        let engine = ProfileEngine::new(&cost, k).unwrap();
        for z in [0.0, 0.1, 0.7, 2.0] {
            let ab = engine.ab(z).unwrap();
            let s = (1.0 + z * z).sqrt();
            for (got, want) in [(ab.a, -s), (ab.b, -s), (ab.a_prime, -z / s), (ab.b_dprime, -1.0 / (s * s * s))] {
                assert!((got - want).abs() < 1e-11, "z={z}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn series_and_direct_branches_agree_at_the_switch() {
        let cost = CostFunction::resolve("quartic(0.01)", 2.0).unwrap();
        let engine = ProfileEngine::new(&cost, Curvature::Zero).unwrap();
        let r = engine.series_radius();
        assert!(r > 0.05 && r <= SERIES_MAX_RADIUS, "radius {r}");
        let lo = engine.profile(r).unwrap();
        let hi = engine.profile(r * (1.0 + 1e-9)).unwrap();
        for (a, b) in [(lo.alpha, hi.alpha), (lo.beta, hi.beta), (lo.gamma, hi.gamma), (lo.delta, hi.delta)] {
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn out_of_range_z_is_rejected() {
        let (cost, k) = engine_for("log-cosh", Curvature::Negative);
        let engine = ProfileEngine::new(&cost, k).unwrap();
        assert!(matches!(engine.profile(1.5), Err(MtwError::OutOfRange { .. })));
        assert!(matches!(engine.profile(-0.1), Err(MtwError::OutOfRange { .. })));
    }

    #[test]
    fn closed_and_jacobi_routes_agree() {
        let mut rng = StdRng::seed_from_u64(7);
        for (name, k) in [
            ("neg-cosh", Curvature::Negative),
            ("quartic(0.01)", Curvature::Zero),
            ("neg-log1p-cos", Curvature::Positive),
        ] {
            let cost = CostFunction::resolve(name, 2.0).unwrap();
            let engine = ProfileEngine::new(&cost, k).unwrap();
            for dim in [2, 3] {
                let space = SpaceForm::new(k, dim).unwrap();
                for _ in 0..20 {
                    let x = space.random_point(&mut rng, 1.0);
                    let u = space.random_tangent(&mut rng, &x);
                    let w = space.random_tangent(&mut rng, &x);
                    let len = 0.8 * cost.lprime_limit().min(2.0);
                    let v = space.random_tangent_with_norm(&mut rng, &x, len);
                    let input = MtwInput::new(&space, u, v, w).unwrap();
                    let a = engine.mtw_closed(&space, &input).unwrap();
                    let b = engine.mtw_via_jacobi(&space, &input).unwrap();
                    assert!((a - b).abs() < 1e-9 * a.abs().max(1.0), "{name} dim {dim}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn jacobi_map_matches_flat_case() {
        let space = SpaceForm::new(Curvature::Zero, 3).unwrap();
        let x = space.origin();
        let u = space.tangent(&x, vec![1.0, 2.0, 3.0]).unwrap();
        let v = space.tangent(&x, vec![0.5, 0.0, 0.0]).unwrap();
        let j = jacobi_map_closed(&space, &u, &v).unwrap();
        assert_eq!(j.components().as_slice(), &[-1.0, -2.0, -3.0]);
    }

    #[test]
    fn phi_is_continuous_through_series_switch() {
        for k in [Curvature::Negative, Curvature::Positive] {
            let a = phi(k, PHI_SERIES_RADIUS - 1e-16).unwrap();
            let b = phi(k, PHI_SERIES_RADIUS).unwrap();
            assert!((a - b).abs() < 1e-14, "{k}: {a} vs {b}");
        }
        assert!(matches!(phi(Curvature::Positive, std::f64::consts::PI), Err(MtwError::Pole { .. })));
    }

    #[test]
    fn non_admissible_limit_is_reported() {
        // l' vanishing to second order at 0 cannot be inverted
        let cost = CostFunction::parse("z^4", 1.0);
        assert!(cost.is_err() || ProfileEngine::new(&cost.unwrap(), Curvature::Zero).is_err());
    }
}
