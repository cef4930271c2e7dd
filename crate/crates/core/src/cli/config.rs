//! Monte Carlo settings and their flat `key = value` file format.
//!
//! ```text
//! # Rayleigh ensemble
//! var_hr = 1
//! var_he = 1
//! var_hd = 1, 2, 4, 8
//! p_s_dbw = 10
//! p_r_min = 0
//! p_r_max = 20
//! p_r_points = 41
//! n_samples = 100000
//! seed = 1
//! strategies = af, df
//! db = false
//! ```

use std::str::FromStr;

use crate::channel_model::Strategy;
use crate::error::{Error, Result};
use crate::fading_sim::{EnsembleConfig, linear_grid};
use crate::db_to_linear;

use super::DEFAULT_SEED;

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSettings {
    pub var_hr: f64,
    pub var_he: f64,
    /// One ensemble is run per relay-destination variance.
    pub var_hd: Vec<f64>,
    pub p_s_dbw: f64,
    pub pr_min: f64,
    pub pr_max: f64,
    pub pr_points: usize,
    /// Grid bounds are dBW and points are spaced uniformly in dB.
    pub db: bool,
    pub n_samples: usize,
    pub seed: Option<u64>,
    pub strategies: Vec<Strategy>,
}

impl Default for MonteCarloSettings {
    fn default() -> Self {
        Self {
            var_hr: 1.0,
            var_he: 1.0,
            var_hd: vec![1.0, 2.0, 4.0, 8.0],
            p_s_dbw: 10.0,
            pr_min: 0.0,
            pr_max: 20.0,
            pr_points: 41,
            db: false,
            n_samples: 100_000,
            seed: None,
            strategies: vec![Strategy::AmplifyForward, Strategy::DecodeForward],
        }
    }
}

impl MonteCarloSettings {
    pub fn p_r_grid(&self) -> Vec<f64> {
        let grid = linear_grid(self.pr_min, self.pr_max, self.pr_points);
        if self.db { grid.into_iter().map(db_to_linear).collect() } else { grid }
    }

    /// One validated ensemble per `var_hd` entry, all sharing the seed.
    pub fn ensembles(&self) -> Result<Vec<EnsembleConfig>> {
        if self.var_hd.is_empty() {
            return Err(Error::Config("var_hd list is empty".into()));
        }
        let seed = self.seed.unwrap_or(DEFAULT_SEED);
        self.var_hd
            .iter()
            .map(|&var_hd| {
                let cfg = EnsembleConfig {
                    var_hr: self.var_hr,
                    var_hd,
                    var_he: self.var_he,
                    p_s_dbw: self.p_s_dbw,
                    p_r_grid: self.p_r_grid(),
                    n_samples: self.n_samples,
                    seed,
                    strategies: self.strategies.clone(),
                };
                cfg.validate()?;
                Ok(cfg)
            })
            .collect()
    }
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Config(format!("bad value for {key}: '{raw}'")))
}

fn list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    raw.split(',').map(|s| value(key, s.trim())).collect()
}

pub fn parse_config(text: &str) -> Result<MonteCarloSettings> {
    let mut s = MonteCarloSettings::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, raw) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (key, raw) = (key.trim(), raw.trim());
        match key {
            "var_hr" => s.var_hr = value(key, raw)?,
            "var_he" => s.var_he = value(key, raw)?,
            "var_hd" => s.var_hd = list(key, raw)?,
            "p_s_dbw" => s.p_s_dbw = value(key, raw)?,
            "p_r_min" => s.pr_min = value(key, raw)?,
            "p_r_max" => s.pr_max = value(key, raw)?,
            "p_r_points" => s.pr_points = value(key, raw)?,
            "n_samples" => s.n_samples = value(key, raw)?,
            "seed" => s.seed = Some(value(key, raw)?),
            "strategies" => s.strategies = list(key, raw)?,
            "db" => s.db = value(key, raw)?,
            other => return Err(Error::Config(format!("line {}: unknown key '{other}'", lineno + 1))),
        }
    }
    Ok(s)
}
