//! Channel realizations, power budgets and the derived scalars
//! `alpha = |h_d|^2`, `beta = |h_e|^2`, `mu = 1 + P_s |h_r|^2`.
//!
//! Noise at every node is unit-power circularly symmetric complex Gaussian,
//! so these three reals fully describe one realization of the two-hop link.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relaying strategy at the intermediate node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    AmplifyForward,
    DecodeForward,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::AmplifyForward => "AF",
            Strategy::DecodeForward => "DF",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "af" => Ok(Strategy::AmplifyForward),
            "df" => Ok(Strategy::DecodeForward),
            other => Err(Error::InvalidInput(format!("unknown strategy '{other}'"))),
        }
    }
}

/// Complex fading gains of the three links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRealization {
    /// Source to relay.
    pub h_r: Complex64,
    /// Relay to destination.
    pub h_d: Complex64,
    /// Relay to eavesdropper.
    pub h_e: Complex64,
}

impl ChannelRealization {
    pub fn new(h_r: Complex64, h_d: Complex64, h_e: Complex64) -> Result<Self> {
        let ch = Self { h_r, h_d, h_e };
        ch.validate()?;
        Ok(ch)
    }

    /// Real-valued gains; convenient for worked examples.
    pub fn real(h_r: f64, h_d: f64, h_e: f64) -> Result<Self> {
        Self::new(
            Complex64::new(h_r, 0.0),
            Complex64::new(h_d, 0.0),
            Complex64::new(h_e, 0.0),
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (name, h) in [("h_r", self.h_r), ("h_d", self.h_d), ("h_e", self.h_e)] {
            if !h.re.is_finite() || !h.im.is_finite() {
                return Err(Error::InvalidInput(format!("{name} = {h} is not finite")));
            }
        }
        Ok(())
    }
}

/// Source transmit power and relay peak power, both in linear watts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBudget {
    pub p_s: f64,
    pub p_r: f64,
}

impl PowerBudget {
    pub fn new(p_s: f64, p_r: f64) -> Result<Self> {
        let pb = Self { p_s, p_r };
        pb.validate()?;
        Ok(pb)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p_s", self.p_s), ("p_r", self.p_r)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} must be finite and nonnegative"
                )));
            }
        }
        Ok(())
    }
}

/// The three reals every capacity expression depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// `|h_d|^2`
    pub alpha: f64,
    /// `|h_e|^2`
    pub beta: f64,
    /// `1 + P_s |h_r|^2`
    pub mu: f64,
}

impl DerivedParams {
    /// Builds parameters directly, checking `alpha, beta >= 0` and `mu >= 1`.
    pub fn new(alpha: f64, beta: f64, mu: f64) -> Result<Self> {
        let p = Self { alpha, beta, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha.is_finite()
            && self.beta.is_finite()
            && self.mu.is_finite()
            && self.alpha >= 0.0
            && self.beta >= 0.0
            && self.mu >= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "need finite alpha >= 0, beta >= 0, mu >= 1; got ({}, {}, {})",
                self.alpha, self.beta, self.mu
            )))
        }
    }

    /// The destination link is no stronger than the eavesdropper link, or the
    /// first hop carries nothing. Secrecy capacity is zero for either strategy.
    pub fn is_degenerate(&self) -> bool {
        self.alpha <= self.beta || self.mu == 1.0
    }
}

pub fn derive_params(ch: &ChannelRealization, pb: &PowerBudget) -> Result<DerivedParams> {
    ch.validate()?;
    pb.validate()?;
    Ok(DerivedParams {
        alpha: ch.h_d.norm_sqr(),
        beta: ch.h_e.norm_sqr(),
        mu: 1.0 + pb.p_s * ch.h_r.norm_sqr(),
    })
}

/// Upper limit `X` on the squared relay gain `|omega|^2` imposed by the peak
/// power constraint: `P_r / mu` for AF (the relay re-radiates its noisy
/// input of power `mu`), `P_r` for DF (unit-power re-encoded symbols).
pub fn gain_domain(strategy: Strategy, params: &DerivedParams, pb: &PowerBudget) -> f64 {
    match strategy {
        Strategy::AmplifyForward => pb.p_r / params.mu,
        Strategy::DecodeForward => pb.p_r,
    }
}

pub fn db_to_linear(p_db: f64) -> f64 {
    10f64.powf(p_db / 10.0)
}

pub fn linear_to_db(p: f64) -> f64 {
    10.0 * p.log10()
}
