//! Numerical checks of the Ma–Trudinger–Wang condition for radial costs
//! `c(x, y) = l(d(x, y))` on the space forms of curvature `-1`, `0` and `+1`.
//!
//! The layers, bottom up:
//!
//! - [`jets`]: truncated Taylor arithmetic.
//! - [`costlib`]: cost profiles `l`, admissibility, and the inverse of `l'`.
//! - [`geometry`]: exponential and logarithm maps, transport, curvature.
//! - [`mtwcore`]: the profiles `A`, `B`, the coefficients `α, β, γ, δ`, and MTW itself.
//! - [`oracle`]: derivative-free cross-checks.
//! - [`checker`]: grid scans, verdicts, and the perturbation criterion.
//! - [`cli`]: the `mtw` command line.

pub mod checker;
pub mod cli;
pub mod costlib;
pub mod geometry;
pub mod jets;
pub mod mtwcore;
pub mod oracle;

pub use checker::{perturbation_check, scan_conditions, scan_profile, ScanConfig, Status, Verdict};
pub use costlib::{CostError, CostFunction};
pub use geometry::{Curvature, GeometryError, Point, SpaceForm, TangentVector};
pub use jets::{Jet, JetError};
pub use mtwcore::{CoefficientProfile, MtwError, MtwInput, ProfileEngine};
