//! Amplify-and-forward secrecy rate and capacity.
//!
//! With Gaussian input and squared relay gain `x = |omega|^2`, the
//! destination and eavesdropper see
//!
//! ```text
//! I_d(x) = log2((1 + alpha mu x) / (1 + alpha x))
//! I_e(x) = log2((1 + beta  mu x) / (1 + beta  x))
//! ```
//!
//! and the secrecy capacity is `max_{0 <= x <= P_r/mu} (I_d - I_e) / 2`,
//! clamped at zero. The maximizer is `P_r/mu` below the knee
//! `P_r = sqrt(mu / (alpha beta))` and `1/sqrt(alpha beta mu)` above it, so
//! a strong relay stops spending power once extra gain only amplifies noise.

use std::f64::consts::LN_2;

use crate::channel_model::{DerivedParams, PowerBudget, Strategy};
use crate::error::{Error, Result};

/// Outcome of a capacity computation for one channel realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyResult {
    /// Bits per channel use, half-duplex factor included, never negative.
    pub capacity: f64,
    /// Optimal squared relay gain `|omega|^2`.
    pub x_hat: f64,
    /// Relay transmit power actually spent, `E|x_r|^2`.
    pub consumed_power: f64,
    pub strategy: Strategy,
}

fn log2_ratio(gain: f64, mu: f64, x: f64) -> f64 {
    ((gain * mu * x).ln_1p() - (gain * x).ln_1p()) / LN_2
}

pub fn mutual_info_destination(params: &DerivedParams, x: f64) -> f64 {
    log2_ratio(params.alpha, params.mu, x)
}

pub fn mutual_info_eavesdropper(params: &DerivedParams, x: f64) -> f64 {
    log2_ratio(params.beta, params.mu, x)
}

/// Knee of the capacity curve, `sqrt(mu / (alpha beta))`. Infinite when
/// the eavesdropper link is dead.
pub fn af_saturation_power(params: &DerivedParams) -> f64 {
    (params.mu / (params.alpha * params.beta)).sqrt()
}

pub fn af_optimal_gain(params: &DerivedParams, pb: &PowerBudget) -> f64 {
    if params.is_degenerate() {
        return 0.0;
    }
    let ab = params.alpha * params.beta;
    if ab * pb.p_r * pb.p_r <= params.mu {
        pb.p_r / params.mu
    } else {
        1.0 / (ab * params.mu).sqrt()
    }
}

/// Closed-form AF secrecy capacity and the gain that achieves it.
pub fn af_secrecy_capacity(params: &DerivedParams, pb: &PowerBudget) -> SecrecyResult {
    let x_hat = af_optimal_gain(params, pb);
    let capacity = if params.is_degenerate() {
        0.0
    } else {
        let DerivedParams { alpha, beta, mu } = *params;
        let ab = alpha * beta;
        let gain = (alpha - beta) * (mu - 1.0);
        // log2 of the ratio written as log2(1 + excess); numerator minus
        // denominator is exactly `gain * P_r` (or `gain` at saturation).
        let excess = if ab * pb.p_r * pb.p_r <= mu {
            let p = pb.p_r;
            gain * p / ((ab * p + alpha + beta * mu) * p + mu)
        } else {
            gain / (2.0 * (ab * mu).sqrt() + alpha + beta * mu)
        };
        0.5 * excess.ln_1p() / LN_2
    };
    SecrecyResult {
        capacity,
        x_hat,
        consumed_power: (params.mu * x_hat).min(pb.p_r),
        strategy: Strategy::AmplifyForward,
    }
}

/// Secrecy rate at a fixed feasible gain, before the `{.}^+` clamp.
pub fn af_achievable_rate_at(params: &DerivedParams, pb: &PowerBudget, x: f64) -> Result<f64> {
    let x_max = pb.p_r / params.mu;
    if !(0.0..=x_max).contains(&x) {
        return Err(Error::Domain(format!("gain x = {x} outside [0, {x_max}]")));
    }
    Ok(0.5 * (mutual_info_destination(params, x) - mutual_info_eavesdropper(params, x)))
}
