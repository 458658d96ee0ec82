//! Derivative-free cross-checks.
//!
//! [`mtw_definitional`] differentiates the cost itself on the explicit model,
//! so it shares no algebra with the analytic routes in [`crate::mtwcore`].
//! [`jacobi_residual`] integrates the Jacobi equation numerically and measures
//! how far the closed-form Jacobi map misses the boundary condition `J(1) = 0`.

use nalgebra::DVector;
use thiserror::Error;

use crate::costlib::CostFunction;
use crate::geometry::{GeometryError, SpaceForm, TangentVector};
use crate::mtwcore::{jacobi_map_closed, MtwError, MtwInput};

pub const DEFAULT_STEP: f64 = 1e-2;
const MIN_STEP: f64 = 1e-4;
const MAX_STEP: f64 = 1e-1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mtw(#[from] MtwError),
    #[error("stencil steps must lie in [{MIN_STEP:e}, {MAX_STEP:e}], got {0}")]
    InvalidStep(f64),
    #[error("finite-difference order must be 1..=4, got {0}")]
    InvalidOrder(usize),
    #[error("non-finite function value at stencil offset ({t}, {s})")]
    StencilDegenerate { t: f64, s: f64 },
    #[error("RK4 needs at least one step")]
    NoSteps,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilConfig {
    pub step_t: f64,
    pub step_s: f64,
    pub richardson: bool,
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self { step_t: DEFAULT_STEP, step_s: DEFAULT_STEP, richardson: true }
    }
}

impl StencilConfig {
    pub fn new(step_t: f64, step_s: f64, richardson: bool) -> Result<Self, OracleError> {
        for step in [step_t, step_s] {
            if !(MIN_STEP..=MAX_STEP).contains(&step) {
                return Err(OracleError::InvalidStep(step));
            }
        }
        Ok(Self { step_t, step_s, richardson })
    }
}

/// `-3/2 ∂²_s ∂²_t l(d(exp_x(t u), c-exp_x(v + s w)))` at `t = s = 0`, by a
/// 3×3 product of second central differences.
///
/// The stencil runs along the unit directions of `u` and `w`; the result is
/// rescaled by `|u|²|w|²`, so the steps are absolute lengths on the model.
pub fn mtw_definitional(
    cost: &CostFunction,
    space: &SpaceForm,
    input: &MtwInput,
    cfg: &StencilConfig,
) -> Result<f64, OracleError> {
    StencilConfig::new(cfg.step_t, cfg.step_s, cfg.richardson)?;
    let nu = space.norm(&input.u);
    let nw = space.norm(&input.w);
    if nu == 0.0 || nw == 0.0 {
        return Ok(0.0);
    }
    // the stencil is evaluated at the canonical base point, where ambient
    // coordinates are smallest and the fourth difference loses the fewest digits
    let iso = space.isometry_to_origin(input.v.base());
    let u_hat = iso.apply_tangent(&input.u.scaled(1.0 / nu));
    let w_hat = iso.apply_tangent(&input.w.scaled(1.0 / nw));
    let v = iso.apply_tangent(&input.v);

    let f = |t: f64, s: f64| -> Result<f64, OracleError> {
        let xt = space.exp_map(&u_hat.scaled(t))?;
        let y = space.cost_exp(cost, &v.add_scaled(s, &w_hat))?;
        let value = space.cost(cost, &xt, &y)?;
        if !value.is_finite() {
            return Err(OracleError::StencilDegenerate { t, s });
        }
        Ok(value)
    };

    let mixed = |ht: f64, hs: f64| -> Result<f64, OracleError> {
        const W: [f64; 3] = [1.0, -2.0, 1.0];
        let mut acc = 0.0;
        for (i, wi) in W.iter().enumerate() {
            for (j, wj) in W.iter().enumerate() {
                let t = (i as f64 - 1.0) * ht;
                let s = (j as f64 - 1.0) * hs;
                acc += wi * wj * f(t, s)?;
            }
        }
        Ok(acc / (ht * ht * hs * hs))
    };

    let coarse = mixed(cfg.step_t, cfg.step_s)?;
    let d = if cfg.richardson {
        let fine = mixed(cfg.step_t / 2.0, cfg.step_s / 2.0)?;
        (4.0 * fine - coarse) / 3.0
    } else {
        coarse
    };
    Ok(-1.5 * nu * nu * nw * nw * d)
}

/// Integrates `D²J + R(γ', J)γ' = 0` along `τ ↦ exp(τ v)`, `τ ∈ [0, 1]`, from
/// `J(0) = u`, `DJ(0) = du` with classical RK4 in a parallel frame, and
/// returns `J(1)`.
pub fn jacobi_field_endpoint(
    space: &SpaceForm,
    u: &TangentVector,
    du: &TangentVector,
    v: &TangentVector,
    steps: usize,
) -> Result<TangentVector, OracleError> {
    if steps == 0 {
        return Err(OracleError::NoSteps);
    }
    let n = space.dim();
    let x = v.base().clone();
    let frame = space.orthonormal_frame(&x, space.norm(v).gt(&0.0).then_some(v));
    let coords = |t: &TangentVector, basis: &[TangentVector]| {
        DVector::from_iterator(n, basis.iter().map(|e| space.inner(t, e)))
    };

    // frame and velocity transported to γ(τ)
    let along = |tau: f64| -> Result<(Vec<TangentVector>, TangentVector), OracleError> {
        if tau == 0.0 {
            return Ok((frame.clone(), v.clone()));
        }
        let p = space.exp_map(&v.scaled(tau))?;
        let basis = frame.iter().map(|e| space.parallel_transport(e, &p)).collect::<Result<Vec<_>, _>>()?;
        let vel = space.parallel_transport(v, &p)?;
        Ok((basis, vel))
    };

    // state y = (c, c') with J = Σ cᵢ Eᵢ
    let accel = |tau: f64, c: &DVector<f64>| -> Result<DVector<f64>, OracleError> {
        let (basis, vel) = along(tau)?;
        let mut j = basis[0].zero_like();
        for (ci, e) in c.iter().zip(&basis) {
            j = j.add_scaled(*ci, e);
        }
        let r = space.curvature_action(&vel, &j)?;
        Ok(-coords(&r, &basis))
    };

    let mut c = coords(u, &frame);
    let mut dc = coords(du, &frame);
    let h = 1.0 / steps as f64;
    for k in 0..steps {
        let tau = k as f64 * h;
        let k1c = dc.clone();
        let k1d = accel(tau, &c)?;
        let k2c = &dc + &k1d * (h / 2.0);
        let k2d = accel(tau + h / 2.0, &(&c + &k1c * (h / 2.0)))?;
        let k3c = &dc + &k2d * (h / 2.0);
        let k3d = accel(tau + h / 2.0, &(&c + &k2c * (h / 2.0)))?;
        let k4c = &dc + &k3d * h;
        let k4d = accel(tau + h, &(&c + &k3c * h))?;
        c += (&k1c + &k2c * 2.0 + &k3c * 2.0 + &k4c) * (h / 6.0);
        dc += (&k1d + &k2d * 2.0 + &k3d * 2.0 + &k4d) * (h / 6.0);
    }

    let (basis, _) = along(1.0)?;
    let mut end = basis[0].zero_like();
    for (ci, e) in c.iter().zip(&basis) {
        end = end.add_scaled(*ci, e);
    }
    Ok(end)
}

/// `|J(1)|` for the Jacobi field started with the closed-form Jacobi map;
/// zero up to integration error when the map is right.
pub fn jacobi_residual(space: &SpaceForm, u: &TangentVector, v: &TangentVector, steps: usize) -> Result<f64, OracleError> {
    let du = jacobi_map_closed(space, u, v)?;
    let end = jacobi_field_endpoint(space, u, &du, v, steps)?;
    Ok(space.norm(&end))
}

/// Central difference of order 1..=4 with step `step`, optionally refined
/// once by Richardson extrapolation.
pub fn fd_derivative(f: impl Fn(f64) -> f64, z: f64, order: usize, step: f64, richardson: bool) -> Result<f64, OracleError> {
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(OracleError::StencilDegenerate { t: x, s: 0.0 })
        }
    };
    let central = |h: f64| -> Result<f64, OracleError> {
        let p1 = eval(z + h)?;
        let m1 = eval(z - h)?;
        Ok(match order {
            1 => (p1 - m1) / (2.0 * h),
            2 => (p1 - 2.0 * eval(z)? + m1) / (h * h),
            3 => (eval(z + 2.0 * h)? - 2.0 * p1 + 2.0 * m1 - eval(z - 2.0 * h)?) / (2.0 * h * h * h),
            4 => (eval(z + 2.0 * h)? - 4.0 * p1 + 6.0 * eval(z)? - 4.0 * m1 + eval(z - 2.0 * h)?) / (h * h * h * h),
            _ => return Err(OracleError::InvalidOrder(order)),
        })
    };
    if !(1..=4).contains(&order) {
        return Err(OracleError::InvalidOrder(order));
    }
    let coarse = central(step)?;
    if !richardson {
        return Ok(coarse);
    }
    let fine = central(step / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// [`fd_derivative`] at the default step with Richardson refinement.
pub fn fd_derivative_check(f: impl Fn(f64) -> f64, z: f64, order: usize) -> Result<f64, OracleError> {
    fd_derivative(f, z, order, DEFAULT_STEP, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Curvature;
    use crate::mtwcore::ProfileEngine;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn fd_examples() {
        assert!((fd_derivative_check(f64::cosh, 0.0, 2).unwrap() - 1.0).abs() < 1e-8);
        let quartic = fd_derivative_check(|z| z.powi(4), 0.5, 4).unwrap();
        assert!((quartic - 24.0).abs() < 1e-6, "{quartic}");
        let cost = CostFunction::resolve("neg-log1p-cos", 2.5).unwrap();
        let fd = fd_derivative_check(|z| cost.lprime(z).unwrap(), 0.5, 1).unwrap();
        let jet = cost.jet(0.5).unwrap().derivative(2);
        assert!((fd - jet).abs() < 1e-6);
        assert!(matches!(fd_derivative_check(f64::cosh, 0.0, 5), Err(OracleError::InvalidOrder(5))));
    }

    #[test]
    fn stencil_steps_are_bounded() {
        assert!(StencilConfig::new(1e-5, 1e-2, true).is_err());
        assert!(StencilConfig::new(1e-2, 0.2, true).is_err());
        assert!(StencilConfig::new(1e-2, 1e-2, false).is_ok());
    }

    #[test]
    fn zero_w_gives_zero() {
        let cost = CostFunction::resolve("neg-cosh", 2.0).unwrap();
        let space = SpaceForm::new(Curvature::Negative, 3).unwrap();
        let f = |c: &[f64]| space.frame_vector(c).unwrap();
        let input = MtwInput::new(&space, f(&[1.0, 0.0, 0.0]), f(&[0.0, 0.5, 0.0]), f(&[0.0, 0.0, 0.0])).unwrap();
        assert_eq!(mtw_definitional(&cost, &space, &input, &StencilConfig::default()).unwrap(), 0.0);
    }

    #[test]
    fn flat_quadratic_is_zero_to_rounding() {
        // fourth differences amplify the rounding of F by Σ|weights| / h⁴
        let cost = CostFunction::resolve("sq", 5.0).unwrap();
        let space = SpaceForm::new(Curvature::Zero, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let x = space.random_point(&mut rng, 1.0);
            let u = space.random_tangent(&mut rng, &x);
            let w = space.random_tangent(&mut rng, &x);
            let v = space.random_tangent(&mut rng, &x);
            let scale = space.norm(&u).powi(2) * space.norm(&w).powi(2) * (space.norm(&v) + 0.02).powi(2);
            let h = DEFAULT_STEP / 2.0;
            let bound = 1.5 * 16.0 * 4.0 / 3.0 * f64::EPSILON * scale / h.powi(4);
            let input = MtwInput::new(&space, u, v, w).unwrap();
            let m = mtw_definitional(&cost, &space, &input, &StencilConfig::default()).unwrap();
            assert!(m.abs() < bound, "{m} vs {bound}");
        }
    }

    #[test]
    fn oracle_is_even_in_u_and_w() {
        let cost = CostFunction::resolve("neg-log1p-cosh", 2.0).unwrap();
        let space = SpaceForm::new(Curvature::Negative, 3).unwrap();
        let mut rng = StdRng::seed_from_u64(9);
        let x = space.random_point(&mut rng, 0.5);
        let u = space.random_tangent(&mut rng, &x);
        let w = space.random_tangent(&mut rng, &x);
        let v = space.random_tangent_with_norm(&mut rng, &x, 0.6);
        let cfg = StencilConfig::default();
        let base = mtw_definitional(&cost, &space, &MtwInput::new(&space, u.clone(), v.clone(), w.clone()).unwrap(), &cfg).unwrap();
        let neg_u = mtw_definitional(&cost, &space, &MtwInput::new(&space, u.scaled(-1.0), v.clone(), w.clone()).unwrap(), &cfg).unwrap();
        let neg_w = mtw_definitional(&cost, &space, &MtwInput::new(&space, u, v, w.scaled(-1.0)).unwrap(), &cfg).unwrap();
        assert!((base - neg_u).abs() < 1e-4 * base.abs().max(1.0));
        assert!((base - neg_w).abs() < 1e-4 * base.abs().max(1.0));
    }

    #[test]
    fn neg_cosh_matches_closed_form() {
        let cost = CostFunction::resolve("neg-cosh", 2.0).unwrap();
        let space = SpaceForm::new(Curvature::Negative, 3).unwrap();
        let engine = ProfileEngine::new(&cost, Curvature::Negative).unwrap();
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let x = space.random_point(&mut rng, 0.5);
            let u = space.random_tangent(&mut rng, &x);
            let w = space.random_tangent(&mut rng, &x);
            let v = space.random_tangent_with_norm(&mut rng, &x, 1.0);
            let input = MtwInput::new(&space, u, v, w).unwrap();
            let oracle = mtw_definitional(&cost, &space, &input, &StencilConfig::default()).unwrap();
            let closed = engine.mtw_closed(&space, &input).unwrap();
            assert!((oracle - closed).abs() <= 5e-3 * closed.abs().max(1.0), "{oracle} vs {closed}");
        }
    }

    #[test]
    fn jacobi_residuals() {
        let mut rng = StdRng::seed_from_u64(3);
        let flat = SpaceForm::new(Curvature::Zero, 3).unwrap();
        let x = flat.origin();
        let u = flat.random_tangent(&mut rng, &x);
        let v = flat.random_tangent(&mut rng, &x);
        assert!(jacobi_residual(&flat, &u, &v, 10).unwrap() < 1e-12);

        let hyp = SpaceForm::new(Curvature::Negative, 3).unwrap();
        let x = hyp.origin();
        let u = hyp.tangent(&x, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let v = hyp.tangent(&x, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(jacobi_residual(&hyp, &u, &v, 1000).unwrap() < 1e-9);

        let sphere = SpaceForm::new(Curvature::Positive, 3).unwrap();
        let x = sphere.random_point(&mut rng, 1.0);
        let u = sphere.random_tangent(&mut rng, &x);
        let v = sphere.random_tangent_with_norm(&mut rng, &x, 3.0);
        let r = jacobi_residual(&sphere, &u, &v, 1000).unwrap();
        assert!(r < 1e-8, "{r}");
    }

    #[test]
    fn rk4_error_shrinks_with_steps() {
        let hyp = SpaceForm::new(Curvature::Negative, 2).unwrap();
        let x = hyp.origin();
        let u = hyp.tangent(&x, vec![0.3, 1.0, 0.0]).unwrap();
        let v = hyp.tangent(&x, vec![1.5, 0.0, 0.0]).unwrap();
        let coarse = jacobi_residual(&hyp, &u, &v, 10).unwrap();
        let fine = jacobi_residual(&hyp, &u, &v, 20).unwrap();
        assert!(coarse / fine > 10.0, "{coarse} / {fine}");
    }
}
