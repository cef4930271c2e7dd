//! Monte Carlo averages of secrecy capacity and relay power over
//! independent Rayleigh fading on the three links.
//!
//! # Random stream layout
//!
//! Sample `i` of a run with seed `s` draws from its own ChaCha8 stream:
//! `ChaCha8Rng::seed_from_u64(s)` followed by `set_stream(i)`. Each sample
//! consumes six standard normals in the order `h_r.re, h_r.im, h_d.re,
//! h_d.im, h_e.re, h_e.im`, each scaled by `sqrt(variance / 2)`. A sample
//! therefore depends only on `(seed, i)`, not on how many samples precede
//! it or which thread evaluates it.
//!
//! Every power grid point and both strategies reuse the same realizations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use num_complex::Complex64;

use crate::af_secrecy::{SecrecyResult, af_secrecy_capacity};
use crate::channel_model::{ChannelRealization, DerivedParams, PowerBudget, Strategy, db_to_linear, derive_params};
use crate::df_secrecy::df_secrecy_capacity;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub var_hr: f64,
    pub var_hd: f64,
    pub var_he: f64,
    /// Source power in dBW.
    pub p_s_dbw: f64,
    /// Relay peak powers in watts, strictly increasing.
    pub p_r_grid: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
}

impl Default for EnsembleConfig {
    /// Unit-variance links, 10 dBW source, relay budget 0..20 W in 41 points, 10^5 samples.
    fn default() -> Self {
        Self {
            var_hr: 1.0,
            var_hd: 1.0,
            var_he: 1.0,
            p_s_dbw: 10.0,
            p_r_grid: linear_grid(0.0, 20.0, 41),
            n_samples: 100_000,
            seed: 0,
            strategies: vec![Strategy::AmplifyForward, Strategy::DecodeForward],
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("var_hr", self.var_hr), ("var_hd", self.var_hd), ("var_he", self.var_he)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        if !self.p_s_dbw.is_finite() {
            return Err(Error::Config("p_s_dbw must be finite".into()));
        }
        if self.p_r_grid.is_empty() {
            return Err(Error::Config("relay power grid is empty".into()));
        }
        if self.p_r_grid.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Config("relay powers must be finite and nonnegative".into()));
        }
        if self.p_r_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("relay power grid must be strictly increasing".into()));
        }
        if self.n_samples == 0 {
            return Err(Error::Config("n_samples must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::Config("no strategy selected".into()));
        }
        Ok(())
    }

    pub fn p_s_watts(&self) -> f64 {
        db_to_linear(self.p_s_dbw)
    }
}

/// One point of an ergodic curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub strategy: Strategy,
    pub p_r: f64,
    pub mean_capacity: f64,
    pub stderr_capacity: f64,
    pub mean_consumed_power: f64,
    pub stderr_consumed_power: f64,
    pub n_samples: usize,
    pub seed: u64,
}

/// Mean relay power drawn at one budget.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsumedPowerPoint {
    pub strategy: Strategy,
    pub p_r: f64,
    pub mean_consumed_power: f64,
    pub stderr_consumed_power: f64,
}

/// Generator for sample `index` of a run seeded with `seed`.
pub fn sample_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_gaussian<R: rand::Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (0.5 * variance).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(scale * re, scale * im)
}

/// Draws one realization; each gain is circularly symmetric complex
/// Gaussian with the configured variance, so its magnitude is Rayleigh.
pub fn sample_channel<R: rand::Rng>(cfg: &EnsembleConfig, rng: &mut R) -> ChannelRealization {
    let h_r = complex_gaussian(rng, cfg.var_hr);
    let h_d = complex_gaussian(rng, cfg.var_hd);
    let h_e = complex_gaussian(rng, cfg.var_he);
    ChannelRealization { h_r, h_d, h_e }
}

/// Pairwise summation. Every step is a monotone float addition, so
/// elementwise-ordered inputs give ordered sums.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        values.iter().fold(0.0, |acc, v| acc + v)
    } else {
        let (a, b) = values.split_at(values.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Sample mean and standard error `stddev / sqrt(n)`.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mean = pairwise_sum(values) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn draw_params(cfg: &EnsembleConfig) -> Result<Vec<DerivedParams>> {
    // The relay budget does not enter the derived parameters.
    let pb = PowerBudget::new(cfg.p_s_watts(), 0.0)?;
    (0..cfg.n_samples as u64)
        .map(|i| {
            let ch = sample_channel(cfg, &mut sample_stream(cfg.seed, i));
            derive_params(&ch, &pb)
        })
        .collect()
}

fn capacity_for(strategy: Strategy, params: &DerivedParams, pb: &PowerBudget) -> SecrecyResult {
    match strategy {
        Strategy::AmplifyForward => af_secrecy_capacity(params, pb),
        Strategy::DecodeForward => df_secrecy_capacity(params, pb),
    }
}

/// Mean secrecy capacity and mean consumed relay power for every
/// `(strategy, P_r)` pair, strategy-major with `P_r` ascending.
pub fn ergodic_sweep(cfg: &EnsembleConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    let ensemble = draw_params(cfg)?;
    let p_s = cfg.p_s_watts();
    let mut records = Vec::with_capacity(cfg.strategies.len() * cfg.p_r_grid.len());
    let mut caps = vec![0.0; ensemble.len()];
    let mut powers = vec![0.0; ensemble.len()];
    for &strategy in &cfg.strategies {
        for &p_r in &cfg.p_r_grid {
            let pb = PowerBudget { p_s, p_r };
            for (i, params) in ensemble.iter().enumerate() {
                let r = capacity_for(strategy, params, &pb);
                caps[i] = r.capacity;
                powers[i] = r.consumed_power;
            }
            let (mean_capacity, stderr_capacity) = mean_and_stderr(&caps);
            let (mean_consumed_power, stderr_consumed_power) = mean_and_stderr(&powers);
            records.push(SweepRecord {
                strategy,
                p_r,
                mean_capacity,
                stderr_capacity,
                mean_consumed_power,
                stderr_consumed_power,
                n_samples: cfg.n_samples,
                seed: cfg.seed,
            });
        }
    }
    Ok(records)
}

pub fn consumed_power_sweep(cfg: &EnsembleConfig) -> Result<Vec<ConsumedPowerPoint>> {
    Ok(ergodic_sweep(cfg)?
        .into_iter()
        .map(|r| ConsumedPowerPoint {
            strategy: r.strategy,
            p_r: r.p_r,
            mean_consumed_power: r.mean_consumed_power,
            stderr_consumed_power: r.stderr_consumed_power,
        })
        .collect())
}
