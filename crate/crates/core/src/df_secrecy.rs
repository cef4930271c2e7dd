//! Decode-and-forward secrecy capacity.
//!
//! The relay decodes, so the end-to-end rate is limited by the smaller of
//! the two cuts: the first-hop capacity `log2(mu)` and the second-hop
//! secrecy capacity `log2((1 + alpha P_r)/(1 + beta P_r))`. When the second
//! hop is the stronger cut, the relay backs its power off until both cuts
//! meet.

use std::f64::consts::LN_2;

use crate::af_secrecy::SecrecyResult;
use crate::channel_model::{DerivedParams, PowerBudget, Strategy};

pub fn source_relay_capacity(params: &DerivedParams) -> f64 {
    params.mu.log2()
}

/// Second-hop secrecy rate at squared gain `x`, without the clamp.
pub fn second_hop_rate(params: &DerivedParams, x: f64) -> f64 {
    ((params.alpha * x).ln_1p() - (params.beta * x).ln_1p()) / LN_2
}

pub fn second_hop_secrecy_capacity(params: &DerivedParams, pb: &PowerBudget) -> f64 {
    second_hop_rate(params, pb.p_r).max(0.0)
}

/// True when the second hop at full power beats the first hop, so the
/// relay only needs part of its budget.
fn power_limited_by_first_hop(params: &DerivedParams, pb: &PowerBudget) -> bool {
    let ratio = (1.0 + params.alpha * pb.p_r) / (1.0 + params.beta * pb.p_r);
    ratio > params.mu
}

pub fn df_optimal_gain(params: &DerivedParams, pb: &PowerBudget) -> f64 {
    if params.alpha <= params.beta {
        0.0
    } else if power_limited_by_first_hop(params, pb) {
        // ratio > mu forces alpha - beta mu > 0.
        let spare = params.alpha - params.beta * params.mu;
        debug_assert!(spare > 0.0);
        ((params.mu - 1.0) / spare).min(pb.p_r)
    } else {
        pb.p_r
    }
}

pub fn df_secrecy_capacity(params: &DerivedParams, pb: &PowerBudget) -> SecrecyResult {
    let x_hat = df_optimal_gain(params, pb);
    let capacity = if params.alpha <= params.beta {
        0.0
    } else if power_limited_by_first_hop(params, pb) {
        0.5 * source_relay_capacity(params)
    } else {
        0.5 * second_hop_rate(params, pb.p_r)
    };
    SecrecyResult {
        capacity,
        x_hat,
        consumed_power: x_hat,
        strategy: Strategy::DecodeForward,
    }
}
