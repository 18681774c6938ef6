//! Executable forms of the likelihood constraint and its two supporting
//! bounds.
//!
//! * [`constraint_lhs`]: `Σ D_i / P(y_i | x_i, h)`. Absorbing an expert for
//!   which this is at most 2 cannot lower the training log-likelihood,
//!   because `D_i ∝ 1 − P(y_i | x_i, ensemble)` and Jensen's inequality
//!   applies to the log of the update.
//! * [`piecewise_bound_rhs`]: a bound on that sum for continuous experts
//!   that is linear in each `p_i`, obtained by replacing `1/x` with its
//!   chord on each half of the probability range.
//!
//! Tolerances: [`SLACK_TOLERANCE`] for inequalities, [`IDENTITY_TOLERANCE`]
//! for algebraic identities.

use serde::{Deserialize, Serialize};

use crate::boosters::compute_epsilon_c;
use crate::error::{Error, Result};
use crate::poe::{log_odds, EnsembleState};
use crate::weights::WeightDistribution;

pub const SLACK_TOLERANCE: f64 = 1e-9;
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// `lhs ≤ rhs`, with `satisfied ⇔ slack ≥ −1e-9`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
}

impl BoundReport {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        BoundReport {
            lhs,
            rhs,
            satisfied: slack >= -SLACK_TOLERANCE,
            slack,
        }
    }
}

fn check_lengths(w: &WeightDistribution, v: &[f64]) -> Result<()> {
    if w.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: v.len(),
        });
    }
    Ok(())
}

/// `Σ_i D_i / expert_true[i]`.
pub fn constraint_lhs(w: &WeightDistribution, expert_true: &[f64]) -> Result<f64> {
    check_lengths(w, expert_true)?;
    Ok(w.iter().zip(expert_true).map(|(d, p)| d / p).sum())
}

/// `Σ_i ln P(y_i | x_i, ensemble)`.
pub fn ensemble_loglik(state: &EnsembleState) -> f64 {
    state.loglik()
}

/// Outcome of [`jensen_monotonicity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    /// The constraint `Σ D_i / P(y_i | x_i, h) ≤ 2`.
    pub bound: BoundReport,
    /// Log-likelihood after absorbing the expert minus before.
    pub loglik_delta: f64,
    /// False only if the constraint holds yet the log-likelihood dropped by
    /// more than the slack tolerance.
    pub consistent: bool,
}

/// Checks the constraint for one expert and measures the log-likelihood
/// change of absorbing it. `w` must be the complement weights of
/// `state_before`.
pub fn jensen_monotonicity_check(
    state_before: &EnsembleState,
    w: &WeightDistribution,
    expert_true: &[f64],
) -> Result<MonotonicityReport> {
    check_lengths(w, expert_true)?;
    let expected = state_before.complement_weights();
    if expected.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: expected.len(),
            actual: w.len(),
        });
    }
    if let Some(i) = (0..w.len()).find(|&i| (w.get(i) - expected.get(i)).abs() > SLACK_TOLERANCE) {
        return Err(Error::Precondition(format!(
            "weight {i} is {} but the state's complement weight is {}",
            w.get(i),
            expected.get(i)
        )));
    }
    let bound = BoundReport::new(constraint_lhs(w, expert_true)?, 2.0);
    let mut after = state_before.clone();
    let lo: Vec<f64> = expert_true.iter().map(|&p| log_odds(p)).collect();
    after.absorb_log_odds(&lo)?;
    let loglik_delta = after.loglik() - state_before.loglik();
    Ok(MonotonicityReport {
        bound,
        loglik_delta,
        consistent: !bound.satisfied || loglik_delta >= -SLACK_TOLERANCE,
    })
}

fn check_p_e(p_e: f64) -> Result<()> {
    if p_e > 0.0 && p_e <= 0.5 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "p_e",
            value: p_e,
            domain: "(0, 0.5]",
        })
    }
}

/// Linear upper bound on `Σ_i D_i / ((1 − P_e) p_i + P_e (1 − p_i))`, with
/// `p_i = P(Z = y_i | x_i, h)`:
///
/// `Σ_{p_i ≤ ½} D_i [2(2 − 1/P_e) p_i + 1/P_e]
///  + Σ_{p_i > ½} D_i [2(1/(1 − P_e) − 2) p_i + 4 − 1/(1 − P_e)]`.
pub fn piecewise_bound_rhs(p_e: f64, w: &WeightDistribution, p_z_true: &[f64]) -> Result<f64> {
    check_p_e(p_e)?;
    check_lengths(w, p_z_true)?;
    let a = 1.0 / p_e;
    let b = 1.0 / (1.0 - p_e);
    Ok(w
        .iter()
        .zip(p_z_true)
        .map(|(d, &p)| {
            if p <= 0.5 {
                d * (2.0 * (2.0 - a) * p + a)
            } else {
                d * (2.0 * (b - 2.0) * p + 4.0 - b)
            }
        })
        .sum())
}

/// The exact sum against [`piecewise_bound_rhs`].
pub fn check_bound(p_e: f64, w: &WeightDistribution, p_z_true: &[f64]) -> Result<BoundReport> {
    let rhs = piecewise_bound_rhs(p_e, w, p_z_true)?;
    let lhs = w
        .iter()
        .zip(p_z_true)
        .map(|(d, &p)| d / ((1.0 - p_e) * p + p_e * (1.0 - p)))
        .sum();
    Ok(BoundReport::new(lhs, rhs))
}

/// Outcome of [`epsilon_c_root_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootCheck {
    pub epsilon_c: f64,
    /// The bound at `ε^c`, present when `0 < ε^c < ½`.
    pub rhs_at_epsilon_c: Option<f64>,
    pub rhs_at_half: f64,
    pub satisfied: bool,
}

/// Verifies that the bound equals 2 at `P_e = ½` (within 1e-12) and, when
/// `0 < ε^c < ½`, at `P_e = ε^c` (within 1e-9).
pub fn epsilon_c_root_check(w: &WeightDistribution, p_z_true: &[f64]) -> Result<RootCheck> {
    check_lengths(w, p_z_true)?;
    let e = compute_epsilon_c(w, p_z_true);
    let rhs_at_half = piecewise_bound_rhs(0.5, w, p_z_true)?;
    let mut satisfied = (rhs_at_half - 2.0).abs() <= IDENTITY_TOLERANCE;
    let rhs_at_epsilon_c = if e > 0.0 && e < 0.5 {
        let r = piecewise_bound_rhs(e, w, p_z_true)?;
        satisfied &= (r - 2.0).abs() <= SLACK_TOLERANCE;
        Some(r)
    } else {
        None
    };
    Ok(RootCheck {
        epsilon_c: e,
        rhs_at_epsilon_c,
        rhs_at_half,
        satisfied,
    })
}
