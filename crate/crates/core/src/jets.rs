//! Truncated Taylor arithmetic.
//!
//! A [`Jet`] stores the Taylor-normalized coefficients `f^(k)(z0) / k!` of a
//! scalar function at a basepoint `z0`. Every operation is exact through the
//! truncation order: no finite differences, no symbolic algebra.
//!
//! The default width is seven coefficients (order 6). Wider jets are used
//! internally when a series has to be expanded around a removable
//! singularity and then evaluated away from it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Number of coefficients of the default jet (orders `0..=6`).
pub const WIDTH: usize = 7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet with zero constant term")]
    DegenerateJet,
    #[error("{func} is undefined at {value}")]
    Domain { func: &'static str, value: f64 },
    #[error("expected the first {order} coefficients to vanish, found {value:e} at order {at}")]
    NonVanishing { order: usize, at: usize, value: f64 },
}

#[derive(Clone, Copy, PartialEq)]
pub struct Jet<const N: usize = WIDTH> {
    base: f64,
    coeffs: [f64; N],
}

impl<const N: usize> fmt::Debug for Jet<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet@{}{:?}", self.base, self.coeffs)
    }
}

impl<const N: usize> Jet<N> {
    pub fn new(base: f64, coeffs: [f64; N]) -> Self {
        Self { base, coeffs }
    }

    pub fn constant(base: f64, value: f64) -> Self {
        let mut coeffs = [0.0; N];
        coeffs[0] = value;
        Self { base, coeffs }
    }

    /// The identity function `z ↦ z` expanded at `base`.
    pub fn variable(base: f64) -> Self {
        let mut coeffs = [0.0; N];
        coeffs[0] = base;
        if N > 1 {
            coeffs[1] = 1.0;
        }
        Self { base, coeffs }
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn coeffs(&self) -> &[f64; N] {
        &self.coeffs
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    /// `k`-th derivative at the basepoint, i.e. `coeff(k) * k!`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k] * factorial(k)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|c| c * factor)
    }

    pub fn offset(&self, shift: f64) -> Self {
        let mut out = *self;
        out.coeffs[0] += shift;
        out
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut coeffs = self.coeffs;
        coeffs.iter_mut().for_each(|c| *c = f(*c));
        Self { base: self.base, coeffs }
    }

    /// Jet of the derivative. The top coefficient is unknown and set to zero,
    /// so the result is exact through order `N - 2`.
    pub fn differentiate(&self) -> Self {
        let mut coeffs = [0.0; N];
        for k in 0..N - 1 {
            coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Self { base: self.base, coeffs }
    }

    /// Antiderivative with constant term `c0`; drops the top coefficient of `self`.
    fn integrate(&self, c0: f64) -> Self {
        let mut coeffs = [0.0; N];
        coeffs[0] = c0;
        for k in 1..N {
            coeffs[k] = self.coeffs[k - 1] / k as f64;
        }
        Self { base: self.base, coeffs }
    }

    /// Divides by `(z - base)^m`, assuming the first `m` coefficients vanish
    /// to within `tol`. Exact through order `N - 1 - m`; the vacated top
    /// coefficients are set to zero.
    pub fn shift_down(&self, m: usize, tol: f64) -> Result<Self, JetError> {
        for (at, &c) in self.coeffs.iter().take(m).enumerate() {
            if c.abs() > tol {
                return Err(JetError::NonVanishing { order: m, at, value: c });
            }
        }
        let mut coeffs = [0.0; N];
        coeffs[..N - m].copy_from_slice(&self.coeffs[m..]);
        Ok(Self { base: self.base, coeffs })
    }

    /// Evaluates the truncated series at `base + dz`.
    pub fn eval(&self, dz: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * dz + c)
    }

    /// Re-expands the truncated polynomial around `base + dz`.
    pub fn recenter(&self, dz: f64) -> Self {
        let mut coeffs = self.coeffs;
        // repeated synthetic division (Taylor shift)
        for i in 0..N {
            for k in (i..N - 1).rev() {
                coeffs[k] += dz * coeffs[k + 1];
            }
        }
        Self { base: self.base + dz, coeffs }
    }

    /// Truncates or zero-pads to a different width.
    pub fn resize<const M: usize>(&self) -> Jet<M> {
        let mut coeffs = [0.0; M];
        let n = N.min(M);
        coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        Jet { base: self.base, coeffs }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, JetError> {
        let b0 = rhs.coeffs[0];
        if b0 == 0.0 {
            return Err(JetError::DegenerateJet);
        }
        let mut q = [0.0; N];
        for k in 0..N {
            let mut acc = self.coeffs[k];
            for j in 0..k {
                acc -= q[j] * rhs.coeffs[k - j];
            }
            q[k] = acc / b0;
        }
        Ok(Self { base: self.base, coeffs: q })
    }

    pub fn recip(&self) -> Result<Self, JetError> {
        Self::constant(self.base, 1.0).checked_div(self)
    }

    /// Integer power by repeated squaring; negative exponents need a nonzero constant term.
    pub fn powi(&self, n: i32) -> Result<Self, JetError> {
        let mut result = Self::constant(self.base, 1.0);
        let mut square = *self;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result * square;
            }
            square = square * square;
            e >>= 1;
        }
        if n < 0 {
            result.recip()
        } else {
            Ok(result)
        }
    }

    pub fn exp(&self) -> Self {
        let mut e = [0.0; N];
        e[0] = self.coeffs[0].exp();
        for k in 1..N {
            let s: f64 = (1..=k).map(|j| j as f64 * self.coeffs[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Self { base: self.base, coeffs: e }
    }

    pub fn ln(&self) -> Result<Self, JetError> {
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return Err(JetError::Domain { func: "log", value: a0 });
        }
        let mut l = [0.0; N];
        l[0] = a0.ln();
        for k in 1..N {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * self.coeffs[k - j]).sum();
            l[k] = (self.coeffs[k] - s / k as f64) / a0;
        }
        Ok(Self { base: self.base, coeffs: l })
    }

    pub fn sqrt(&self) -> Result<Self, JetError> {
        let a0 = self.coeffs[0];
        if !(a0 > 0.0) {
            return Err(JetError::Domain { func: "sqrt", value: a0 });
        }
        let mut r = [0.0; N];
        r[0] = a0.sqrt();
        for k in 1..N {
            let s: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (self.coeffs[k] - s) / (2.0 * r[0]);
        }
        Ok(Self { base: self.base, coeffs: r })
    }

    /// `(sin, cos)` of the jet, from the coupled recurrence `s' = c a'`, `c' = -s a'`.
    pub fn sin_cos(&self) -> (Self, Self) {
        self.trig_pair(-1.0, self.coeffs[0].sin(), self.coeffs[0].cos())
    }

    /// `(sinh, cosh)` of the jet.
    pub fn sinh_cosh(&self) -> (Self, Self) {
        self.trig_pair(1.0, self.coeffs[0].sinh(), self.coeffs[0].cosh())
    }

    fn trig_pair(&self, sign: f64, s0: f64, c0: f64) -> (Self, Self) {
        let mut s = [0.0; N];
        let mut c = [0.0; N];
        s[0] = s0;
        c[0] = c0;
        for k in 1..N {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let ja = j as f64 * self.coeffs[j];
                ds += ja * c[k - j];
                dc += ja * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = sign * dc / k as f64;
        }
        (Self { base: self.base, coeffs: s }, Self { base: self.base, coeffs: c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    pub fn tan(&self) -> Result<Self, JetError> {
        let (s, c) = self.sin_cos();
        if c.coeffs[0].abs() < 1e-300 {
            return Err(JetError::Domain { func: "tan", value: self.coeffs[0] });
        }
        s.checked_div(&c)
    }

    /// Builds `g(a)` from `g'(a) = rate(a)` as `∫ rate(a) a' dz`.
    fn from_rate(&self, g0: f64, rate: Self) -> Self {
        (rate * self.differentiate()).integrate(g0)
    }

    pub fn atan(&self) -> Self {
        let one_plus_sq = (*self * *self).offset(1.0);
        let rate = one_plus_sq.recip().expect("1 + a^2 is positive");
        self.from_rate(self.coeffs[0].atan(), rate)
    }

    pub fn asinh(&self) -> Self {
        let root = (*self * *self).offset(1.0).sqrt().expect("1 + a^2 is positive");
        let rate = root.recip().expect("sqrt(1 + a^2) is positive");
        self.from_rate(self.coeffs[0].asinh(), rate)
    }

    pub fn atanh(&self) -> Result<Self, JetError> {
        let a0 = self.coeffs[0];
        if !(a0.abs() < 1.0) {
            return Err(JetError::Domain { func: "atanh", value: a0 });
        }
        let rate = (-(*self * *self)).offset(1.0).recip()?;
        Ok(self.from_rate(a0.atanh(), rate))
    }

    /// Substitutes `inner` into the truncated series `self`; `inner` must be
    /// expanded so that its constant term equals `self.base()`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut delta = *inner;
        delta.coeffs[0] -= self.base;
        let mut acc = Self::constant(inner.base, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = (acc * delta).offset(c);
        }
        acc
    }

    /// Jet of the inverse function. If `self` expands `f` at `x0`, the result
    /// expands `f⁻¹` at `f(x0)` and has constant term `x0`.
    pub fn revert(&self) -> Result<Self, JetError> {
        let p1 = self.coeffs.get(1).copied().unwrap_or(0.0);
        if p1 == 0.0 {
            return Err(JetError::DegenerateJet);
        }
        // Solve sum_{j>=1} p_j d^j = e for d(e) = sum c_k e^k order by order.
        let mut d = [0.0; N];
        if N > 1 {
            d[1] = 1.0 / p1;
        }
        for k in 2..N {
            let dj = Self { base: 0.0, coeffs: d };
            let mut power = dj;
            let mut residual = 0.0;
            for j in 2..=k {
                power = power * dj;
                residual += self.coeffs[j] * power.coeffs[k];
            }
            d[k] = -residual / p1;
        }
        d[0] = self.base;
        Ok(Self { base: self.coeffs[0], coeffs: d })
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        debug_assert_basepoints(self.base, rhs.base);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        debug_assert_basepoints(self.base, rhs.base);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_basepoints(self.base, rhs.base);
        let mut c = [0.0; N];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.coeffs[..N - i].iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self { base: self.base, coeffs: c }
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c)
    }
}

#[inline]
fn debug_assert_basepoints(a: f64, b: f64) {
    debug_assert!(
        a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0),
        "jet basepoints differ: {a} vs {b}"
    );
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Elementary functions admitted in cost expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Cosh,
    Sinh,
    Cos,
    Sin,
    Tan,
    Log,
    Exp,
    Sqrt,
    Atan,
    Asinh,
    Atanh,
}

impl Elementary {
    pub const ALL: [Elementary; 11] = [
        Elementary::Cosh,
        Elementary::Sinh,
        Elementary::Cos,
        Elementary::Sin,
        Elementary::Tan,
        Elementary::Log,
        Elementary::Exp,
        Elementary::Sqrt,
        Elementary::Atan,
        Elementary::Asinh,
        Elementary::Atanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Cosh => "cosh",
            Elementary::Sinh => "sinh",
            Elementary::Cos => "cos",
            Elementary::Sin => "sin",
            Elementary::Tan => "tan",
            Elementary::Log => "log",
            Elementary::Exp => "exp",
            Elementary::Sqrt => "sqrt",
            Elementary::Atan => "atan",
            Elementary::Asinh => "asinh",
            Elementary::Atanh => "atanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Plain scalar evaluation, with the same domain rules as [`Elementary::apply`].
    pub fn eval(self, x: f64) -> Result<f64, JetError> {
        self.apply(&Jet::<1>::constant(x, x)).map(|j| j.value())
    }

    pub fn apply<const N: usize>(self, a: &Jet<N>) -> Result<Jet<N>, JetError> {
        Ok(match self {
            Elementary::Cosh => a.cosh(),
            Elementary::Sinh => a.sinh(),
            Elementary::Cos => a.cos(),
            Elementary::Sin => a.sin(),
            Elementary::Tan => a.tan()?,
            Elementary::Log => a.ln()?,
            Elementary::Exp => a.exp(),
            Elementary::Sqrt => a.sqrt()?,
            Elementary::Atan => a.atan(),
            Elementary::Asinh => a.asinh(),
            Elementary::Atanh => a.atanh()?,
        })
    }
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn square_of_variable() {
        let z = Jet::<7>::variable(2.0);
        assert_eq!((z * z).coeffs(), &[4.0, 4.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn self_quotient_is_one() {
        let a = Jet::<7>::variable(0.3).cosh();
        let q = a.checked_div(&a).unwrap();
        assert!(close(q.value(), 1.0, 1e-15));
        assert!(q.coeffs()[1..].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn division_by_zero_constant_term() {
        let z = Jet::<7>::variable(0.0);
        assert_eq!(z.recip(), Err(JetError::DegenerateJet));
    }

    #[test]
    fn double_angle() {
        let z = Jet::<7>::variable(0.7);
        let lhs = z.sinh() * z.cosh();
        let rhs = z.scale(2.0).sinh().scale(0.5);
        for k in 0..7 {
            assert!(close(lhs.coeff(k), rhs.coeff(k), 1e-12), "order {k}");
        }
    }

    #[test]
    fn sinh_maclaurin() {
        let s = Jet::<7>::variable(0.0).sinh();
        let want = [0.0, 1.0, 0.0, 1.0 / 6.0, 0.0, 1.0 / 120.0, 0.0];
        for k in 0..7 {
            assert!(close(s.coeff(k), want[k], 1e-15));
        }
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = Jet::<7>::constant(1.0, 1.0).ln().unwrap();
        assert!(l.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn domain_errors_carry_value() {
        let z = Jet::<7>::variable(-0.5);
        assert_eq!(z.ln(), Err(JetError::Domain { func: "log", value: -0.5 }));
        assert!(matches!(z.offset(-1.0).sqrt(), Err(JetError::Domain { func: "sqrt", .. })));
        assert!(matches!(z.offset(2.0).atanh(), Err(JetError::Domain { func: "atanh", .. })));
    }

    #[test]
    fn revert_inverts_sinh() {
        // asinh at sinh(0.4) from the sinh jet at 0.4
        let s = Jet::<7>::variable(0.4).sinh();
        let inv = s.revert().unwrap();
        let direct = Jet::<7>::variable(0.4f64.sinh()).asinh();
        assert!(close(inv.base(), direct.base(), 1e-15));
        for k in 0..7 {
            assert!(close(inv.coeff(k), direct.coeff(k), 1e-12), "order {k}");
        }
    }

    #[test]
    fn recenter_matches_direct_expansion_for_polynomials() {
        let z = Jet::<7>::variable(0.0);
        let p = (z * z * z).offset(1.0) - z.scale(2.0);
        let moved = p.recenter(1.5);
        let direct = {
            let z = Jet::<7>::variable(1.5);
            (z * z * z).offset(1.0) - z.scale(2.0)
        };
        for k in 0..7 {
            assert!(close(moved.coeff(k), direct.coeff(k), 1e-14));
        }
    }

    #[test]
    fn shift_down_rejects_nonvanishing() {
        let z = Jet::<7>::variable(0.0).offset(1e-3);
        assert!(z.shift_down(1, 1e-10).is_err());
        let z2 = Jet::<7>::variable(0.0) * Jet::<7>::variable(0.0).cosh();
        let q = z2.shift_down(1, 1e-10).unwrap();
        assert_eq!(q.value(), 1.0);
    }

    #[test]
    fn powi_negative() {
        let z = Jet::<7>::variable(2.0);
        let p = z.powi(-2).unwrap();
        // d/dz z^-2 = -2 z^-3 = -0.25
        assert!(close(p.value(), 0.25, 1e-15));
        assert!(close(p.derivative(1), -0.25, 1e-15));
        assert!(Jet::<7>::variable(0.0).powi(-1).is_err());
    }
}
