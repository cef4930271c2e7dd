//! Genie-aided converse for AF relaying.
//!
//! Handing the eavesdropper's observation to the destination gives the
//! upper bound `C_s <= max_x I(x_s; y_d | y_e) / 2`. The bound holds for any
//! correlation `phi = E[z_e z_d^*]` between the two receiver noises, since
//! secrecy capacity depends only on the marginal channels. With Gaussian
//! input the conditional mutual information is
//!
//! ```text
//! log2(pi e lambda_lmmse) - h(h_d omega z_r + z_d | h_e omega z_r + z_e)
//! ```
//!
//! where `lambda_lmmse` is the error variance of estimating `y_d` from `y_e`.
//! Choosing `phi = h_e / h_d` (or `conj(h_d) / conj(h_e)` when the
//! eavesdropper is stronger) makes the bound coincide with the achievable rate.

use std::f64::consts::{E, LN_2, PI};

use num_complex::Complex64;

use crate::af_secrecy::af_secrecy_capacity;
use crate::channel_model::{ChannelRealization, DerivedParams, PowerBudget, Strategy, gain_domain};
use crate::error::{Error, Result};
use crate::search::{self, DEFAULT_GRID_POINTS, Maximum};

/// Cross-correlation of the destination and eavesdropper noises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseCorrelation {
    pub phi: Complex64,
}

impl NoiseCorrelation {
    /// Rejects `|phi| > 1`, which would make the noise covariance indefinite.
    pub fn new(phi: Complex64) -> Result<Self> {
        let c = Self { phi };
        c.check()?;
        Ok(c)
    }

    pub fn uncorrelated() -> Self {
        Self { phi: Complex64::new(0.0, 0.0) }
    }

    fn check(&self) -> Result<()> {
        let mag = self.phi.norm();
        if !mag.is_finite() {
            return Err(Error::InvalidInput(format!("phi = {} is not finite", self.phi)));
        }
        if mag > 1.0 {
            return Err(Error::PsdViolation(mag));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEvaluation {
    /// Bits per channel use.
    pub bound_value: f64,
    pub x_arg: f64,
    pub phi_used: NoiseCorrelation,
}

/// `|phi|^2 + 2 Re{s h_d conj(h_e) phi}`, the correlation terms removed from
/// the joint noise determinant at scale `s`.
fn correlation_terms(ch: &ChannelRealization, s: f64, phi: Complex64) -> f64 {
    phi.norm_sqr() + 2.0 * s * (ch.h_d * ch.h_e.conj() * phi).re
}

fn joint_determinant(ch: &ChannelRealization, params: &DerivedParams, s: f64, phi: Complex64) -> f64 {
    1.0 + (params.alpha + params.beta) * s - correlation_terms(ch, s, phi)
}

/// Covariance of the effective noises `(h_d omega z_r + z_d, h_e omega z_r + z_e)`
/// at squared gain `x`, as `[[K11, K12], [K21, K22]]`.
pub fn noise_covariance(ch: &ChannelRealization, x: f64, phi: &NoiseCorrelation) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    [
        [one * (1.0 + x * ch.h_d.norm_sqr()), ch.h_d * ch.h_e.conj() * x + phi.phi.conj()],
        [ch.h_d.conj() * ch.h_e * x + phi.phi, one * (1.0 + x * ch.h_e.norm_sqr())],
    ]
}

/// `|K_z| = 1 + (alpha + beta) x - |phi|^2 - 2 Re{x h_d conj(h_e) phi}`.
pub fn noise_determinant(ch: &ChannelRealization, params: &DerivedParams, x: f64, phi: &NoiseCorrelation) -> Result<f64> {
    phi.check()?;
    Ok(joint_determinant(ch, params, x, phi.phi))
}

/// Error variance of the linear MMSE estimate of `y_d` from `y_e`.
pub fn lmmse_error_variance(
    ch: &ChannelRealization,
    params: &DerivedParams,
    x: f64,
    phi: &NoiseCorrelation,
) -> Result<f64> {
    phi.check()?;
    let s = params.mu * x;
    let num = joint_determinant(ch, params, s, phi.phi);
    Ok((num / (1.0 + params.beta * s)).max(0.0))
}

/// `h(h_d omega z_r + z_d | h_e omega z_r + z_e)` in bits, using
/// `log2(pi e sigma^2)` for a circular complex Gaussian of variance `sigma^2`.
pub fn conditional_noise_entropy(
    ch: &ChannelRealization,
    params: &DerivedParams,
    x: f64,
    phi: &NoiseCorrelation,
) -> Result<f64> {
    let det = noise_determinant(ch, params, x, phi)?;
    if det <= 0.0 {
        return Err(Error::Degenerate(format!("noise covariance determinant {det} at x = {x}")));
    }
    Ok((PI * E * det / (1.0 + params.beta * x)).log2())
}

/// Noise correlation that makes the genie bound tight.
///
/// `alpha <= beta`: `phi = conj(h_d)/conj(h_e)` with `|phi|^2 = alpha/beta`.
/// `alpha > beta`: `phi = h_e / h_d` with `|phi|^2 = beta/alpha`.
pub fn select_phi(ch: &ChannelRealization, params: &DerivedParams) -> NoiseCorrelation {
    let phi = if params.alpha <= params.beta {
        if params.beta == 0.0 {
            return NoiseCorrelation::uncorrelated();
        }
        ch.h_d.conj() / ch.h_e.conj()
    } else {
        ch.h_e / ch.h_d
    };
    // Rounding can push |phi| a hair past 1 when alpha == beta.
    let mag = phi.norm();
    let phi = if mag > 1.0 { phi / mag } else { phi };
    NoiseCorrelation { phi }
}

/// Half the conditional mutual information `I(x_s; y_d | y_e)` at gain `x`.
pub fn bound_objective(
    ch: &ChannelRealization,
    params: &DerivedParams,
    x: f64,
    phi: &NoiseCorrelation,
) -> Result<f64> {
    phi.check()?;
    let num = joint_determinant(ch, params, params.mu * x, phi.phi);
    let den = joint_determinant(ch, params, x, phi.phi);
    if num <= 0.0 || den <= 0.0 {
        return Err(Error::Degenerate(format!(
            "conditional variance vanishes at x = {x} (|phi| = {})",
            phi.phi.norm()
        )));
    }
    let scale = (1.0 + params.beta * x) / (1.0 + params.beta * params.mu * x);
    Ok(0.5 * (scale * num / den).ln() / LN_2)
}

pub fn genie_upper_bound(ch: &ChannelRealization, params: &DerivedParams, pb: &PowerBudget) -> Result<BoundEvaluation> {
    genie_upper_bound_with(ch, params, pb, DEFAULT_GRID_POINTS)
}

/// Maximizes [`bound_objective`] over `[0, P_r/mu]` with the grid oracle.
///
/// `alpha == beta` (including both links dead) selects `|phi| = 1`, where the
/// conditional densities collapse; the bound there is its limit, 0.
pub fn genie_upper_bound_with(
    ch: &ChannelRealization,
    params: &DerivedParams,
    pb: &PowerBudget,
    n_points: usize,
) -> Result<BoundEvaluation> {
    ch.validate()?;
    params.validate()?;
    pb.validate()?;
    let phi = select_phi(ch, params);
    if params.alpha == params.beta {
        return Ok(BoundEvaluation { bound_value: 0.0, x_arg: 0.0, phi_used: phi });
    }
    let x_max = gain_domain(Strategy::AmplifyForward, params, pb);
    let objective = |x: f64| bound_objective(ch, params, x, &phi).unwrap_or(f64::NEG_INFINITY);
    let Maximum { x, value } = search::grid_maximize(objective, x_max, n_points);
    Ok(BoundEvaluation { bound_value: value, x_arg: x, phi_used: phi })
}

/// Gap between the converse and the closed-form capacity; zero when tight.
pub fn tightness_gap(ch: &ChannelRealization, params: &DerivedParams, pb: &PowerBudget) -> Result<f64> {
    let bound = genie_upper_bound(ch, params, pb)?;
    Ok(bound.bound_value - af_secrecy_capacity(params, pb).capacity)
}

/// `|(1 + alpha mu x)/(1 + alpha x) - (1 - beta/alpha + (alpha-beta) mu x)/(1 - beta/alpha + (alpha-beta) x)|`.
///
/// The identity is what collapses the bound objective onto the achievable ratio.
pub fn ratio_identity_residual(params: &DerivedParams, x: f64) -> Result<f64> {
    let DerivedParams { alpha, beta, mu } = *params;
    if alpha == 0.0 {
        return Err(Error::Domain("identity needs alpha > 0".into()));
    }
    if alpha == beta {
        return Err(Error::Domain("identity needs alpha != beta".into()));
    }
    let lhs = (1.0 + alpha * mu * x) / (1.0 + alpha * x);
    let offset = 1.0 - beta / alpha;
    let gap = alpha - beta;
    let rhs = (offset + gap * mu * x) / (offset + gap * x);
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_channel(h_d: f64, h_e: f64) -> ChannelRealization {
        ChannelRealization::real(1.0, h_d, h_e).unwrap()
    }

    fn phi(re: f64) -> NoiseCorrelation {
        NoiseCorrelation::new(Complex64::new(re, 0.0)).unwrap()
    }

    #[test]
    fn lmmse_examples() {
        let ch = real_channel(2.0, 1.0);
        let p = DerivedParams::new(4.0, 1.0, 2.0).unwrap();
        let v0 = lmmse_error_variance(&ch, &p, 0.0, &phi(0.5)).unwrap();
        assert!((v0 - 0.75).abs() < 1e-15);
        let v = lmmse_error_variance(&ch, &p, 0.3, &NoiseCorrelation::uncorrelated()).unwrap();
        assert!((v - (1.0 + 5.0 * 0.6) / 1.6).abs() < 1e-15);
        let v = lmmse_error_variance(&ch, &p, 0.25, &phi(0.5)).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let ch = real_channel(2.0, 1.0);
        let p = DerivedParams::new(4.0, 1.0, 2.0).unwrap();
        let h0 = conditional_noise_entropy(&ch, &p, 0.0, &phi(0.5)).unwrap();
        assert!((h0 - (PI * E * 0.75).log2()).abs() < 1e-14);
        let h = conditional_noise_entropy(&ch, &p, 0.0, &NoiseCorrelation::uncorrelated()).unwrap();
        assert!((h - (PI * E).log2()).abs() < 1e-14);

        // Determinant straight from the 2x2 covariance entries.
        let k = noise_covariance(&ch, 0.25, &phi(0.5));
        let det = (k[0][0] * k[1][1] - k[0][1] * k[1][0]).re;
        assert!((det - 1.5).abs() < 1e-15);
        let h = conditional_noise_entropy(&ch, &p, 0.25, &phi(0.5)).unwrap();
        assert!((h - (PI * E * 1.2).log2()).abs() < 1e-14);
        assert!((h - (PI * E * det / 1.25).log2()).abs() < 1e-14);
    }

    #[test]
    fn psd_gate() {
        assert!(matches!(
            NoiseCorrelation::new(Complex64::new(0.8, 0.7)),
            Err(Error::PsdViolation(_))
        ));
        let ch = real_channel(2.0, 1.0);
        let p = DerivedParams::new(4.0, 1.0, 2.0).unwrap();
        let bad = NoiseCorrelation { phi: Complex64::new(1.5, 0.0) };
        assert!(matches!(lmmse_error_variance(&ch, &p, 0.1, &bad), Err(Error::PsdViolation(_))));
        assert!(matches!(conditional_noise_entropy(&ch, &p, 0.1, &bad), Err(Error::PsdViolation(_))));
        assert!(matches!(bound_objective(&ch, &p, 0.1, &bad), Err(Error::PsdViolation(_))));
    }

    #[test]
    fn singular_noise_is_degenerate() {
        let ch = real_channel(1.0, 1.0);
        let p = DerivedParams::new(1.0, 1.0, 2.0).unwrap();
        assert!(matches!(conditional_noise_entropy(&ch, &p, 0.0, &phi(1.0)), Err(Error::Degenerate(_))));
        assert!(matches!(bound_objective(&ch, &p, 0.0, &phi(1.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn phi_selection() {
        let s = select_phi(&real_channel(1.0, 2.0), &DerivedParams::new(1.0, 4.0, 2.0).unwrap());
        assert!((s.phi - Complex64::new(0.5, 0.0)).norm() < 1e-16);
        let s = select_phi(&real_channel(2.0, 1.0), &DerivedParams::new(4.0, 1.0, 2.0).unwrap());
        assert!((s.phi - Complex64::new(0.5, 0.0)).norm() < 1e-16);
        let s = select_phi(&real_channel(2.0, 0.0), &DerivedParams::new(4.0, 0.0, 2.0).unwrap());
        assert_eq!(s.phi, Complex64::new(0.0, 0.0));
        let s = select_phi(&real_channel(0.0, 0.0), &DerivedParams::new(0.0, 0.0, 2.0).unwrap());
        assert_eq!(s.phi, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn bound_objective_examples() {
        let ch = real_channel(2.0, 1.0);
        let p = DerivedParams::new(4.0, 1.0, 2.0).unwrap();
        assert_eq!(bound_objective(&ch, &p, 0.0, &phi(0.3)).unwrap(), 0.0);
        let chosen = select_phi(&ch, &p);
        let v = bound_objective(&ch, &p, 0.25, &chosen).unwrap();
        assert!((v - 0.5 * 1.25f64.log2()).abs() < 1e-15);

        let weak = real_channel(1.0, 2.0);
        let pw = DerivedParams::new(1.0, 4.0, 2.0).unwrap();
        let chosen = select_phi(&weak, &pw);
        for x in [0.0, 0.1, 1.0, 7.0] {
            assert!(bound_objective(&weak, &pw, x, &chosen).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn genie_examples() {
        let pb = |p_r| PowerBudget::new(1.0, p_r).unwrap();
        let weak = real_channel(1.0, 2.0);
        let pw = DerivedParams::new(1.0, 4.0, 2.0).unwrap();
        assert!(genie_upper_bound(&weak, &pw, &pb(3.0)).unwrap().bound_value.abs() < 1e-15);

        let ch = real_channel(2.0, 1.0);
        let p = DerivedParams::new(4.0, 1.0, 2.0).unwrap();
        let b = genie_upper_bound(&ch, &p, &pb(0.5)).unwrap();
        assert!((b.bound_value - 0.160_964_047_443_681_17).abs() < 1e-12);
        let b = genie_upper_bound(&ch, &p, &pb(10.0)).unwrap();
        assert!((b.bound_value - 0.165_198_492_276_212_05).abs() < 1e-12);
        assert!((b.x_arg - 1.0 / 8f64.sqrt()).abs() < 1e-6);
        assert!(tightness_gap(&ch, &p, &pb(10.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn equal_links_bound_is_zero() {
        let ch = ChannelRealization::new(
            Complex64::new(1.0, 0.0),
            Complex64::new(0.6, 0.8),
            Complex64::new(-0.8, 0.6),
        )
        .unwrap();
        let p = DerivedParams::new(1.0, 1.0, 3.0).unwrap();
        let b = genie_upper_bound_with(&ch, &p, &PowerBudget::new(2.0, 2.0).unwrap(), 100).unwrap();
        assert_eq!(b.bound_value, 0.0);
    }

    #[test]
    fn ratio_identity_examples() {
        let p = DerivedParams::new(4.0, 1.0, 2.0).unwrap();
        assert_eq!(ratio_identity_residual(&p, 0.0).unwrap(), 0.0);
        assert!(ratio_identity_residual(&p, 0.7).unwrap() <= 1e-12);
        let flat = DerivedParams::new(4.0, 1.0, 1.0).unwrap();
        for x in [0.3, 2.0, 9.5] {
            assert_eq!(ratio_identity_residual(&flat, x).unwrap(), 0.0);
        }
        let zero = DerivedParams::new(0.0, 0.0, 2.0).unwrap();
        assert!(matches!(ratio_identity_residual(&zero, 1.0), Err(Error::Domain(_))));
    }
}
