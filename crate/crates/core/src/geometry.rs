//! Explicit models of the simply connected space forms.
//!
//! | K  | model | ambient form |
//! |----|-------|--------------|
//! | -1 | upper sheet of `⟨p,p⟩ = -1` in `R^{n,1}` | Minkowski, last coordinate timelike |
//! |  0 | `R^n` | Euclidean |
//! | +1 | unit sphere in `R^{n+1}` | Euclidean |
//!
//! Points and tangent vectors are stored as ambient coordinate vectors. The
//! canonical base point is the apex `(0,…,0,1)` of the hyperboloid, the north
//! pole `(0,…,0,1)` of the sphere, or the origin of `R^n`; at each of them the
//! first `n` ambient axes form an orthonormal tangent frame.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::costlib::{CostError, CostFunction};

const MODEL_TOL: f64 = 1e-9;
const CLAMP_SLACK: f64 = 1e-12;
const ZERO_TANGENT: f64 = 1e-9;
const CUT_LOCUS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Curvature {
    Negative,
    Zero,
    Positive,
}

impl Curvature {
    pub const ALL: [Curvature; 3] = [Curvature::Negative, Curvature::Zero, Curvature::Positive];

    pub fn value(self) -> f64 {
        i8::from(self) as f64
    }
}

impl From<Curvature> for i8 {
    fn from(k: Curvature) -> i8 {
        match k {
            Curvature::Negative => -1,
            Curvature::Zero => 0,
            Curvature::Positive => 1,
        }
    }
}

impl TryFrom<i8> for Curvature {
    type Error = GeometryError;
    fn try_from(k: i8) -> Result<Self, Self::Error> {
        match k {
            -1 => Ok(Curvature::Negative),
            0 => Ok(Curvature::Zero),
            1 => Ok(Curvature::Positive),
            other => Err(GeometryError::UnsupportedCurvature(other as i64)),
        }
    }
}

impl fmt::Display for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", i8::from(*self))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("curvature must be -1, 0 or 1, got {0}")]
    UnsupportedCurvature(i64),
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("expected {expected} ambient coordinates, got {got}")]
    AmbientLength { expected: usize, got: usize },
    #[error("tangent length {0} reaches the injectivity radius pi of the unit sphere")]
    InjectivityRadius(f64),
    #[error("points are conjugate along the geodesic (distance {0} at the cut locus)")]
    CutLocus(f64),
    #[error("point is off the model by {0:e}")]
    OffModel(f64),
    #[error("vectors are based at different points")]
    BaseMismatch,
    #[error(transparent)]
    Cost(#[from] CostError),
}

/// An isometry of one model, acting on ambient coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Isometry {
    /// `p ↦ p + offset` on `R^n`; tangent vectors are unchanged.
    Translation(DVector<f64>),
    /// Reflection `p ↦ p - 2⟨p,n⟩/⟨n,n⟩ n` in the ambient form of the model.
    Reflection { normal: DVector<f64>, minkowski: bool },
    Identity,
}

impl Isometry {
    fn reflect(&self, p: &DVector<f64>) -> DVector<f64> {
        match self {
            Isometry::Reflection { normal, minkowski } => {
                let form = |a: &DVector<f64>, b: &DVector<f64>| {
                    let d = a.dot(b);
                    if *minkowski {
                        let last = a.len() - 1;
                        d - 2.0 * a[last] * b[last]
                    } else {
                        d
                    }
                };
                p - normal * (2.0 * form(p, normal) / form(normal, normal))
            }
            _ => p.clone(),
        }
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        let coords = match self {
            Isometry::Translation(offset) => &p.coords + offset,
            _ => self.reflect(&p.coords),
        };
        Point { coords }
    }

    pub fn apply_tangent(&self, v: &TangentVector) -> TangentVector {
        TangentVector { base: self.apply_point(&v.base), components: self.reflect(&v.components) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: DVector<f64>,
}

impl Point {
    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Point,
    components: DVector<f64>,
}

impl TangentVector {
    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn components(&self) -> &DVector<f64> {
        &self.components
    }

    pub fn scaled(&self, factor: f64) -> TangentVector {
        TangentVector { base: self.base.clone(), components: &self.components * factor }
    }

    /// `self + factor * other`; both vectors must share a base point.
    pub fn add_scaled(&self, factor: f64, other: &TangentVector) -> TangentVector {
        debug_assert!(same_base(&self.base, &other.base));
        TangentVector { base: self.base.clone(), components: &self.components + &other.components * factor }
    }

    pub fn zero_like(&self) -> TangentVector {
        self.scaled(0.0)
    }
}

pub(crate) fn same_base(a: &Point, b: &Point) -> bool {
    a.coords.len() == b.coords.len()
        && a.coords.iter().zip(b.coords.iter()).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(1.0))
}

/// A simply connected space form of curvature `K ∈ {-1, 0, 1}` and dimension `n ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpaceForm {
    curvature: Curvature,
    dim: usize,
}

impl SpaceForm {
    pub fn new(curvature: Curvature, dim: usize) -> Result<Self, GeometryError> {
        if dim < 2 {
            return Err(GeometryError::Dimension(dim));
        }
        Ok(Self { curvature, dim })
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        match self.curvature {
            Curvature::Zero => self.dim,
            _ => self.dim + 1,
        }
    }

    /// The ambient bilinear form; Minkowski with a timelike last axis for `K = -1`.
    pub fn ambient_inner(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        let dot = a.dot(b);
        match self.curvature {
            Curvature::Negative => {
                let last = self.dim;
                dot - 2.0 * a[last] * b[last]
            }
            _ => dot,
        }
    }

    pub fn inner(&self, a: &TangentVector, b: &TangentVector) -> f64 {
        self.ambient_inner(&a.components, &b.components)
    }

    pub fn norm(&self, v: &TangentVector) -> f64 {
        self.inner(v, v).max(0.0).sqrt()
    }

    pub fn origin(&self) -> Point {
        let mut coords = DVector::zeros(self.ambient_dim());
        if self.curvature != Curvature::Zero {
            coords[self.dim] = 1.0;
        }
        Point { coords }
    }

    pub fn point(&self, coords: Vec<f64>) -> Result<Point, GeometryError> {
        self.check_len(coords.len())?;
        let p = Point { coords: DVector::from_vec(coords) };
        let err = self.model_error(&p);
        if err > MODEL_TOL {
            return Err(GeometryError::OffModel(err));
        }
        Ok(p)
    }

    pub fn tangent(&self, base: &Point, components: Vec<f64>) -> Result<TangentVector, GeometryError> {
        self.check_len(components.len())?;
        let v = TangentVector { base: base.clone(), components: DVector::from_vec(components) };
        let err = self.tangency_error(&v);
        if err > MODEL_TOL {
            return Err(GeometryError::OffModel(err));
        }
        Ok(v)
    }

    /// An isometry carrying `p` to the canonical base point.
    pub fn isometry_to_origin(&self, p: &Point) -> Isometry {
        let origin = self.origin();
        let normal = &p.coords - &origin.coords;
        match self.curvature {
            Curvature::Zero => Isometry::Translation(-&p.coords),
            _ if normal.norm() < 1e-15 => Isometry::Identity,
            k => Isometry::Reflection { normal, minkowski: k == Curvature::Negative },
        }
    }

    /// Tangent vector at the canonical base point from its `n` frame coordinates.
    pub fn frame_vector(&self, frame_coords: &[f64]) -> Result<TangentVector, GeometryError> {
        if frame_coords.len() != self.dim {
            return Err(GeometryError::AmbientLength { expected: self.dim, got: frame_coords.len() });
        }
        let mut components = DVector::zeros(self.ambient_dim());
        components.rows_mut(0, self.dim).copy_from_slice(frame_coords);
        Ok(TangentVector { base: self.origin(), components })
    }

    fn check_len(&self, got: usize) -> Result<(), GeometryError> {
        if got != self.ambient_dim() {
            return Err(GeometryError::AmbientLength { expected: self.ambient_dim(), got });
        }
        Ok(())
    }

    /// Violation of the model constraint (unit sphere, unit upper hyperboloid).
    pub fn model_error(&self, p: &Point) -> f64 {
        match self.curvature {
            Curvature::Zero => 0.0,
            Curvature::Positive => (p.coords.norm_squared() - 1.0).abs(),
            Curvature::Negative => {
                let q = self.ambient_inner(&p.coords, &p.coords);
                let sheet = if p.coords[self.dim] > 0.0 { 0.0 } else { f64::INFINITY };
                (q + 1.0).abs() / p.coords[self.dim].abs().max(1.0).powi(2) + sheet
            }
        }
    }

    pub fn tangency_error(&self, v: &TangentVector) -> f64 {
        match self.curvature {
            Curvature::Zero => 0.0,
            _ => {
                let scale = v.components.norm().max(1.0) * v.base.coords.norm().max(1.0);
                self.ambient_inner(&v.base.coords, &v.components).abs() / scale
            }
        }
    }

    pub fn project_point(&self, raw: DVector<f64>) -> Point {
        match self.curvature {
            Curvature::Zero => Point { coords: raw },
            Curvature::Positive => {
                let n = raw.norm();
                Point { coords: raw / n }
            }
            Curvature::Negative => {
                let mut coords = raw;
                let spatial = coords.rows(0, self.dim).norm_squared();
                coords[self.dim] = (1.0 + spatial).sqrt();
                Point { coords }
            }
        }
    }

    pub fn project_tangent(&self, base: &Point, raw: DVector<f64>) -> TangentVector {
        let components = match self.curvature {
            Curvature::Zero => raw,
            _ => {
                let pp = self.ambient_inner(&base.coords, &base.coords);
                let c = self.ambient_inner(&raw, &base.coords) / pp;
                raw - &base.coords * c
            }
        };
        TangentVector { base: base.clone(), components }
    }

    /// Gaussian ambient draw projected onto the model; `spread` scales the spatial part.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, spread: f64) -> Point {
        let raw = DVector::from_fn(self.ambient_dim(), |_, _| spread * rng.sample::<f64, _>(StandardNormal));
        self.project_point(raw)
    }

    pub fn random_tangent<R: Rng + ?Sized>(&self, rng: &mut R, base: &Point) -> TangentVector {
        let raw = DVector::from_fn(self.ambient_dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        self.project_tangent(base, raw)
    }

    /// Random tangent vector of exactly the given length.
    pub fn random_tangent_with_norm<R: Rng + ?Sized>(&self, rng: &mut R, base: &Point, length: f64) -> TangentVector {
        loop {
            let v = self.random_tangent(rng, base);
            let n = self.norm(&v);
            if n > 1e-6 {
                return v.scaled(length / n);
            }
        }
    }

    /// Orthonormal basis of the tangent space at `base`; if `first` is given and
    /// nonzero, the basis starts with its direction.
    pub fn orthonormal_frame(&self, base: &Point, first: Option<&TangentVector>) -> Vec<TangentVector> {
        let mut frame: Vec<TangentVector> = Vec::with_capacity(self.dim);
        let push = |candidate: TangentVector, frame: &mut Vec<TangentVector>| {
            let mut c = candidate;
            for _ in 0..2 {
                for e in frame.iter() {
                    let proj = self.inner(&c, e);
                    c = c.add_scaled(-proj, e);
                }
            }
            let n = self.norm(&c);
            if n > 1e-8 {
                frame.push(c.scaled(1.0 / n));
            }
        };
        if let Some(f) = first {
            push(f.clone(), &mut frame);
        }
        for axis in 0..self.ambient_dim() {
            if frame.len() == self.dim {
                break;
            }
            let mut raw = DVector::zeros(self.ambient_dim());
            raw[axis] = 1.0;
            push(self.project_tangent(base, raw), &mut frame);
        }
        frame
    }

    pub fn exp_map(&self, v: &TangentVector) -> Result<Point, GeometryError> {
        let t = self.norm(v);
        if self.curvature == Curvature::Positive && t >= PI {
            return Err(GeometryError::InjectivityRadius(t));
        }
        Ok(self.exp_unchecked(v, t))
    }

    fn exp_unchecked(&self, v: &TangentVector, t: f64) -> Point {
        let p = &v.base.coords;
        if t < ZERO_TANGENT {
            // second-order expansion keeps the round trip with log_map exact for tiny vectors
            let coords = match self.curvature {
                Curvature::Zero => p + &v.components,
                _ => p * (1.0 - self.curvature.value() * 0.5 * t * t) + &v.components,
            };
            return Point { coords };
        }
        let coords = match self.curvature {
            Curvature::Zero => p + &v.components,
            Curvature::Positive => p * t.cos() + &v.components * (t.sin() / t),
            Curvature::Negative => p * t.cosh() + &v.components * (t.sinh() / t),
        };
        Point { coords }
    }

    /// Geodesic distance from ambient coordinates via the chord length.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64, GeometryError> {
        let diff = &y.coords - &x.coords;
        match self.curvature {
            Curvature::Zero => Ok(diff.norm()),
            Curvature::Positive => {
                let half_chord = 0.5 * diff.norm();
                Ok(2.0 * clamp_unit(half_chord)?.asin())
            }
            Curvature::Negative => {
                let chord_sq = self.ambient_inner(&diff, &diff);
                if chord_sq < -CLAMP_SLACK * x.coords.norm_squared().max(1.0) {
                    return Err(GeometryError::OffModel(-chord_sq));
                }
                Ok(2.0 * (0.5 * chord_sq.max(0.0).sqrt()).asinh())
            }
        }
    }

    /// Initial velocity of the minimizing geodesic from `x` to `y`.
    pub fn log_map(&self, x: &Point, y: &Point) -> Result<TangentVector, GeometryError> {
        let d = self.distance(x, y)?;
        if self.curvature == Curvature::Positive && d > PI - CUT_LOCUS_TOL {
            return Err(GeometryError::CutLocus(d));
        }
        let components = match self.curvature {
            Curvature::Zero => &y.coords - &x.coords,
            _ => {
                // component of y - x tangent at x, rescaled to length d
                let diff = &y.coords - &x.coords;
                let raw = self.project_tangent(x, diff).components;
                let n = self.ambient_inner(&raw, &raw).max(0.0).sqrt();
                if n == 0.0 || d == 0.0 {
                    DVector::zeros(self.ambient_dim())
                } else {
                    raw * (d / n)
                }
            }
        };
        Ok(TangentVector { base: x.clone(), components })
    }

    /// Parallel transport of `v` along the minimizing geodesic from its base to `to`.
    pub fn parallel_transport(&self, v: &TangentVector, to: &Point) -> Result<TangentVector, GeometryError> {
        let x = &v.base.coords;
        let y = &to.coords;
        let components = match self.curvature {
            Curvature::Zero => v.components.clone(),
            Curvature::Positive => {
                let denom = 1.0 + x.dot(y);
                if denom < CUT_LOCUS_TOL {
                    return Err(GeometryError::CutLocus(PI));
                }
                let c = v.components.dot(y) / denom;
                &v.components - (x + y) * c
            }
            Curvature::Negative => {
                let denom = 1.0 - self.ambient_inner(x, y);
                let c = self.ambient_inner(&v.components, y) / denom;
                &v.components + (x + y) * c
            }
        };
        Ok(TangentVector { base: to.clone(), components })
    }

    /// `R(a, b) a = K (|a|² b - ⟨a, b⟩ a)`.
    pub fn curvature_action(&self, a: &TangentVector, b: &TangentVector) -> Result<TangentVector, GeometryError> {
        if !same_base(&a.base, &b.base) {
            return Err(GeometryError::BaseMismatch);
        }
        let k = self.curvature.value();
        let aa = self.inner(a, a);
        let ab = self.inner(a, b);
        Ok(TangentVector {
            base: a.base.clone(),
            components: (&b.components * aa - &a.components * ab) * k,
        })
    }

    /// `c-exp_x(v) = exp_x(h(|v|) v / |v|)` for the radial cost `l ∘ d`.
    pub fn cost_exp(&self, cost: &CostFunction, v: &TangentVector) -> Result<Point, GeometryError> {
        let t = self.norm(v);
        let h = cost.inverse_lprime(t)?;
        if t < ZERO_TANGENT {
            return Ok(v.base.clone());
        }
        self.exp_map(&v.scaled(h / t))
    }

    /// `-∂ₓ c(x, y) = l'(d) log_x(y) / d`, the dual vector that `cost_exp` inverts.
    pub fn cost_gradient(&self, cost: &CostFunction, x: &Point, y: &Point) -> Result<TangentVector, GeometryError> {
        let u = self.log_map(x, y)?;
        let d = self.norm(&u);
        if d == 0.0 {
            return Ok(u);
        }
        let lp = cost.lprime(d).map_err(CostError::from)?;
        Ok(u.scaled(lp / d))
    }

    pub fn cost(&self, cost: &CostFunction, x: &Point, y: &Point) -> Result<f64, GeometryError> {
        let d = self.distance(x, y)?;
        Ok(cost.eval(d).map_err(CostError::from)?)
    }
}

fn clamp_unit(s: f64) -> Result<f64, GeometryError> {
    if s > 1.0 + CLAMP_SLACK {
        return Err(GeometryError::OffModel(s - 1.0));
    }
    Ok(s.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn isometry_to_origin_preserves_structure() {
        let mut rng = StdRng::seed_from_u64(21);
        for k in Curvature::ALL {
            let sp = space(k, 3);
            let x = sp.random_point(&mut rng, 1.0);
            let y = sp.random_point(&mut rng, 0.7);
            let v = sp.random_tangent(&mut rng, &x);
            let w = sp.random_tangent(&mut rng, &x);
            let iso = sp.isometry_to_origin(&x);
            let (x2, y2) = (iso.apply_point(&x), iso.apply_point(&y));
            let (v2, w2) = (iso.apply_tangent(&v), iso.apply_tangent(&w));
            assert!((&x2.coords - &sp.origin().coords).norm() < 1e-12, "{k}");
            assert!(sp.model_error(&y2) < 1e-12 && sp.tangency_error(&v2) < 1e-12);
            let d = sp.distance(&x, &y).unwrap();
            assert!((sp.distance(&x2, &y2).unwrap() - d).abs() < 1e-12);
            assert!((sp.inner(&v2, &w2) - sp.inner(&v, &w)).abs() < 1e-12);
            let e = sp.exp_map(&v).unwrap();
            let e2 = sp.exp_map(&v2).unwrap();
            assert!((&iso.apply_point(&e).coords - &e2.coords).norm() < 1e-10);
        }
    }

    fn space(k: Curvature, n: usize) -> SpaceForm {
        SpaceForm::new(k, n).unwrap()
    }

    #[test]
    fn exp_of_zero_is_base() {
        let m = space(Curvature::Zero, 3);
        let x = m.point(vec![1.0, 2.0, 3.0]).unwrap();
        let v = m.tangent(&x, vec![0.0; 3]).unwrap();
        assert_eq!(m.exp_map(&v).unwrap(), x);
    }

    #[test]
    fn quarter_great_circle() {
        let m = space(Curvature::Positive, 2);
        let v = m.frame_vector(&[PI / 2.0, 0.0]).unwrap();
        let y = m.exp_map(&v).unwrap();
        assert!(y.as_slice()[2].abs() < 1e-15);
        assert!((m.distance(&m.origin(), &y).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn hyperboloid_unit_step() {
        let m = space(Curvature::Negative, 3);
        let v = m.frame_vector(&[1.0, 0.0, 0.0]).unwrap();
        let y = m.exp_map(&v).unwrap();
        assert!((y.as_slice()[3] - 1f64.cosh()).abs() < 1e-15);
        assert!((y.as_slice()[3] - 1.5431).abs() < 1e-4);
    }

    #[test]
    fn injectivity_radius() {
        let m = space(Curvature::Positive, 2);
        let v = m.frame_vector(&[PI, 0.0]).unwrap();
        assert!(matches!(m.exp_map(&v), Err(GeometryError::InjectivityRadius(_))));
    }

    #[test]
    fn distance_examples() {
        let m = space(Curvature::Negative, 2);
        let o = m.origin();
        assert_eq!(m.distance(&o, &o).unwrap(), 0.0);
        let log = m.log_map(&o, &o).unwrap();
        assert_eq!(m.norm(&log), 0.0);
        let y = m.exp_map(&m.frame_vector(&[2.0, 0.0]).unwrap()).unwrap();
        assert!((m.distance(&o, &y).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn antipodes_are_cut_points() {
        let m = space(Curvature::Positive, 2);
        let n = m.origin();
        let s = m.point(vec![0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(m.log_map(&n, &s), Err(GeometryError::CutLocus(_))));
        let v = m.frame_vector(&[1.0, 0.0]).unwrap();
        assert!(matches!(m.parallel_transport(&v, &s), Err(GeometryError::CutLocus(_))));
    }

    #[test]
    fn transport_of_velocity_is_velocity() {
        for k in Curvature::ALL {
            let m = space(k, 3);
            let v = m.frame_vector(&[0.3, -0.8, 0.5]).unwrap();
            let y = m.exp_map(&v).unwrap();
            let moved = m.parallel_transport(&v, &y).unwrap();
            // velocity at the endpoint is minus the log back to the start
            let back = m.log_map(&y, &m.origin()).unwrap();
            let diff = moved.add_scaled(1.0, &back);
            assert!(m.norm(&diff) < 1e-12, "K={k}");
        }
    }

    #[test]
    fn flat_transport_is_identity() {
        let m = space(Curvature::Zero, 2);
        let v = m.frame_vector(&[1.0, 2.0]).unwrap();
        let y = m.point(vec![5.0, -1.0]).unwrap();
        assert_eq!(m.parallel_transport(&v, &y).unwrap().components(), v.components());
    }

    #[test]
    fn transport_round_trip() {
        let mut rng = StdRng::seed_from_u64(7);
        for k in Curvature::ALL {
            let m = space(k, 4);
            for _ in 0..50 {
                let x = m.random_point(&mut rng, 0.7);
                let y = m.exp_map(&m.random_tangent_with_norm(&mut rng, &x, 1.3)).unwrap();
                let v = m.random_tangent(&mut rng, &x);
                let there = m.parallel_transport(&v, &y).unwrap();
                assert!(m.tangency_error(&there) < 1e-12);
                assert!((m.norm(&there) - m.norm(&v)).abs() < 1e-10);
                let back = m.parallel_transport(&there, &x).unwrap();
                assert!(m.norm(&back.add_scaled(-1.0, &v)) < 1e-10);
            }
        }
    }

    #[test]
    fn curvature_action_examples() {
        let flat = space(Curvature::Zero, 3);
        let a = flat.frame_vector(&[1.0, 2.0, 0.0]).unwrap();
        let b = flat.frame_vector(&[0.0, 1.0, 5.0]).unwrap();
        assert_eq!(flat.norm(&flat.curvature_action(&a, &b).unwrap()), 0.0);

        let hyp = space(Curvature::Negative, 3);
        let a = hyp.frame_vector(&[1.0, 0.0, 0.0]).unwrap();
        let b = hyp.frame_vector(&[0.0, 0.4, -2.0]).unwrap();
        let r = hyp.curvature_action(&a, &b).unwrap();
        assert!(hyp.norm(&r.add_scaled(1.0, &b)) < 1e-15);

        let sph = space(Curvature::Positive, 3);
        let a = sph.frame_vector(&[0.2, 0.7, 1.0]).unwrap();
        assert!(sph.norm(&sph.curvature_action(&a, &a).unwrap()) < 1e-15);
    }

    #[test]
    fn base_mismatch() {
        let m = space(Curvature::Zero, 2);
        let a = m.frame_vector(&[1.0, 0.0]).unwrap();
        let y = m.point(vec![1.0, 1.0]).unwrap();
        let b = m.tangent(&y, vec![0.0, 1.0]).unwrap();
        assert_eq!(m.curvature_action(&a, &b), Err(GeometryError::BaseMismatch));
    }

    #[test]
    fn rejects_off_model_input() {
        let m = space(Curvature::Positive, 2);
        assert!(matches!(m.point(vec![1.0, 1.0, 0.0]), Err(GeometryError::OffModel(_))));
        assert!(matches!(m.point(vec![1.0, 0.0]), Err(GeometryError::AmbientLength { .. })));
        let h = space(Curvature::Negative, 2);
        assert!(h.point(vec![0.0, 0.0, -1.0]).is_err());
        assert!(h.tangent(&h.origin(), vec![0.0, 0.0, 1.0]).is_err());
        assert_eq!(SpaceForm::new(Curvature::Zero, 1), Err(GeometryError::Dimension(1)));
        assert!(Curvature::try_from(2).is_err());
    }
}
