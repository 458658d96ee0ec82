//! A3w / A3s verdicts from the coefficient inequalities.
//!
//! In dimension two the conditions are `β ≤ 0`, `γ ≤ 0` and
//! `α + δ ≤ 2√(βγ)`; from dimension three on, `δ ≤ 0` is added. A scan samples
//! them on a uniform grid over `[0, |l'(D)|]`; it is evidence, not a proof.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::costlib::{CostError, CostFunction, Expr};
use crate::geometry::Curvature;
use crate::jets::JetError;
use crate::mtwcore::{CoefficientProfile, MtwError, ProfileEngine};

pub const DEFAULT_GRID: usize = 4096;
pub const MIN_GRID: usize = 256;
pub const DEFAULT_STRICT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Mtw(#[from] MtwError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("scan grid must have at least {MIN_GRID} points, got {0}")]
    Grid(usize),
    #[error("dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("strict margin must be non-negative and finite, got {0}")]
    Margin(f64),
    #[error("perturbation bound k must be negative, got {0}")]
    PerturbationBound(f64),
    #[error("perturbation interval end b must be positive, got {0}")]
    PerturbationInterval(f64),
    #[error("perturbation grid must have at least one point")]
    PerturbationGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "A3s")]
    A3s,
    #[serde(rename = "A3w-only")]
    A3wOnly,
    #[serde(rename = "fails")]
    Fails,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::A3s => "A3s",
            Status::A3wOnly => "A3w-only",
            Status::Fails => "fails",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    Beta,
    Gamma,
    Delta,
    Combo,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Beta => "beta <= 0",
            Condition::Gamma => "gamma <= 0",
            Condition::Delta => "delta <= 0",
            Condition::Combo => "alpha + delta <= 2 sqrt(beta gamma)",
        })
    }
}

/// Slacks at one `z`. A slack is the margin by which its inequality holds;
/// negative means violated. `slack_delta` is `None` in dimension two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointClassification {
    pub z: f64,
    pub slack_beta: f64,
    pub slack_gamma: f64,
    pub slack_delta: Option<f64>,
    /// `2√(βγ) − (α + δ)`, with the root taken on the clamped negated values.
    pub slack_combo: f64,
}

impl PointClassification {
    pub fn slacks(&self) -> impl Iterator<Item = (Condition, f64)> + '_ {
        [
            Some((Condition::Beta, self.slack_beta)),
            Some((Condition::Gamma, self.slack_gamma)),
            self.slack_delta.map(|s| (Condition::Delta, s)),
            Some((Condition::Combo, self.slack_combo)),
        ]
        .into_iter()
        .flatten()
    }

    /// The binding condition and its slack.
    pub fn min_slack(&self) -> (Condition, f64) {
        self.slacks()
            .fold((Condition::Beta, f64::INFINITY), |acc, s| if s.1 < acc.1 { s } else { acc })
    }

    pub fn weak(&self, margin: f64) -> bool {
        self.slacks().all(|(_, s)| s >= -margin)
    }

    pub fn strict(&self, margin: f64) -> bool {
        self.slacks().all(|(_, s)| s > margin)
    }
}

pub fn classify_point(alpha: f64, beta: f64, gamma: f64, delta: f64, dim: usize) -> PointClassification {
    classify_at(0.0, alpha, beta, gamma, delta, dim)
}

fn classify_at(z: f64, alpha: f64, beta: f64, gamma: f64, delta: f64, dim: usize) -> PointClassification {
    let root = (-beta).max(0.0).sqrt() * (-gamma).max(0.0).sqrt();
    // `+ 0.0` turns a negated zero into +0
    PointClassification {
        z,
        slack_beta: -beta + 0.0,
        slack_gamma: -gamma + 0.0,
        slack_delta: (dim >= 3).then_some(-delta + 0.0),
        slack_combo: 2.0 * root - (alpha + delta) + 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub dim: usize,
    pub grid_points: usize,
    pub strict_margin: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { dim: 3, grid_points: DEFAULT_GRID, strict_margin: DEFAULT_STRICT_MARGIN }
    }
}

impl ScanConfig {
    pub fn new(dim: usize, grid_points: usize, strict_margin: f64) -> Result<Self, CheckError> {
        let cfg = Self { dim, grid_points, strict_margin };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), CheckError> {
        if self.dim < 2 {
            return Err(CheckError::Dimension(self.dim));
        }
        if self.grid_points < MIN_GRID {
            return Err(CheckError::Grid(self.grid_points));
        }
        if !(self.strict_margin >= 0.0 && self.strict_margin.is_finite()) {
            return Err(CheckError::Margin(self.strict_margin));
        }
        Ok(())
    }
}

/// Smallest slack of one condition over the grid and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlackMin {
    pub value: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinSlacks {
    pub beta: SlackMin,
    pub gamma: SlackMin,
    pub delta: Option<SlackMin>,
    pub combo: SlackMin,
}

impl MinSlacks {
    fn overall(&self) -> (Condition, SlackMin) {
        [
            Some((Condition::Beta, self.beta)),
            Some((Condition::Gamma, self.gamma)),
            self.delta.map(|d| (Condition::Delta, d)),
            Some((Condition::Combo, self.combo)),
        ]
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(Condition, SlackMin)>, s| match acc {
            Some(a) if a.1.value <= s.1.value => Some(a),
            _ => Some(s),
        })
        .expect("at least three conditions")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Where the binding condition is tightest, or first violated.
    pub witness: Option<f64>,
    pub binding: Condition,
    pub min_slacks: MinSlacks,
    pub grid_points: usize,
    /// Right end `|l'(D)|` of the scan interval.
    pub interval_end: f64,
}

/// One grid point of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub profile: CoefficientProfile,
    pub classification: PointClassification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scan {
    pub verdict: Verdict,
    pub rows: Vec<ScanRow>,
}

/// Coefficients at every grid point and the aggregated verdict.
pub fn scan_profile(cost: &CostFunction, k: Curvature, cfg: &ScanConfig) -> Result<Scan, CheckError> {
    cfg.check()?;
    cost.validate(cfg.grid_points)?;
    let engine = ProfileEngine::new(cost, k)?;
    let end = cost.lprime_limit();
    let last = (cfg.grid_points - 1) as f64;

    let mut rows = Vec::with_capacity(cfg.grid_points);
    let mut first_failure = None;
    for i in 0..cfg.grid_points {
        let z = if i == cfg.grid_points - 1 { end } else { end * i as f64 / last };
        let p = engine.profile(z)?;
        let c = classify_at(z, p.alpha, p.beta, p.gamma, p.delta, cfg.dim);
        if first_failure.is_none() && !c.weak(cfg.strict_margin) {
            first_failure = Some(z);
        }
        rows.push(ScanRow { profile: p, classification: c });
    }

    let min_of = |pick: &dyn Fn(&PointClassification) -> Option<f64>| -> Option<SlackMin> {
        rows.iter()
            .filter_map(|r| pick(&r.classification).map(|value| SlackMin { value, z: r.classification.z }))
            .fold(None, |acc: Option<SlackMin>, s| match acc {
                Some(a) if a.value <= s.value => Some(a),
                _ => Some(s),
            })
    };
    let min_slacks = MinSlacks {
        beta: min_of(&|c| Some(c.slack_beta)).expect("non-empty grid"),
        gamma: min_of(&|c| Some(c.slack_gamma)).expect("non-empty grid"),
        delta: min_of(&|c| c.slack_delta),
        combo: min_of(&|c| Some(c.slack_combo)).expect("non-empty grid"),
    };
    let (binding, tightest) = min_slacks.overall();
    let status = if first_failure.is_some() {
        Status::Fails
    } else if rows.iter().all(|r| r.classification.strict(cfg.strict_margin)) {
        Status::A3s
    } else {
        Status::A3wOnly
    };
    let witness = match status {
        Status::Fails => first_failure,
        _ => Some(tightest.z),
    };
    Ok(Scan {
        verdict: Verdict { status, witness, binding, min_slacks, grid_points: cfg.grid_points, interval_end: end },
        rows,
    })
}

pub fn scan_conditions(cost: &CostFunction, k: Curvature, cfg: &ScanConfig) -> Result<Verdict, CheckError> {
    scan_profile(cost, k, cfg).map(|s| s.verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationCondition {
    /// `f''(z) < k`
    SecondDerivative,
    /// `(z² f'''(z) − z f''(z) + 2 f'(z)) / z < k`
    Combination,
}

impl fmt::Display for PerturbationCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PerturbationCondition::SecondDerivative => "f''",
            PerturbationCondition::Combination => "(z^2 f''' - z f'' + 2 f')/z",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationWitness {
    pub z: f64,
    pub condition: PerturbationCondition,
    pub lhs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationOutcome {
    pub holds: bool,
    pub witness: Option<PerturbationWitness>,
    /// Largest value of each left-hand side over the grid.
    pub max_second_derivative: f64,
    pub max_combination: f64,
}

/// Checks `f'' < k` and `(z² f''' − z f'' + 2 f')/z < k` at `z = b i / N`, `i = 1..=N`.
pub fn perturbation_check(f: &Expr, k: f64, b: f64, grid_points: usize) -> Result<PerturbationOutcome, CheckError> {
    if !(k < 0.0 && k.is_finite()) {
        return Err(CheckError::PerturbationBound(k));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(CheckError::PerturbationInterval(b));
    }
    if grid_points == 0 {
        return Err(CheckError::PerturbationGrid);
    }
    let mut witness = None;
    let mut max_second = f64::NEG_INFINITY;
    let mut max_combo = f64::NEG_INFINITY;
    for i in 1..=grid_points {
        let z = b * i as f64 / grid_points as f64;
        let j = f.eval_jet::<4>(z)?;
        let (f1, f2, f3) = (j.derivative(1), j.derivative(2), j.derivative(3));
        let combo = (z * z * f3 - z * f2 + 2.0 * f1) / z;
        max_second = max_second.max(f2);
        max_combo = max_combo.max(combo);
        if witness.is_none() {
            if !(f2 < k) {
                witness = Some(PerturbationWitness { z, condition: PerturbationCondition::SecondDerivative, lhs: f2 });
            } else if !(combo < k) {
                witness = Some(PerturbationWitness { z, condition: PerturbationCondition::Combination, lhs: combo });
            }
        }
    }
    Ok(PerturbationOutcome {
        holds: witness.is_none(),
        witness,
        max_second_derivative: max_second,
        max_combination: max_combo,
    })
}
