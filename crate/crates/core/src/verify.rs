//! Randomized cross-checks between independent computation routes.
//!
//! Each suite draws channel/budget cases from a seeded generator and
//! records the worst residual of every check against its tolerance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::af_secrecy::{af_achievable_rate_at, af_secrecy_capacity};
use crate::channel_model::{ChannelRealization, DerivedParams, PowerBudget, derive_params};
use crate::converse_bound::{NoiseCorrelation, ratio_identity_residual, bound_objective, genie_upper_bound_with};
use crate::df_secrecy::{df_secrecy_capacity, second_hop_rate, source_relay_capacity};
use crate::error::Result;
use crate::fractional_solver::{BISECTION_TOLERANCE, RatioQuadraticProblem};
use crate::search::DEFAULT_GRID_POINTS;

pub const DEFAULT_DRAWS: usize = 1000;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub draws: usize,
    pub seed: u64,
    pub grid_points: usize,
    /// Perturbs the closed-form capacity so the oracle suite must fail.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { draws: DEFAULT_DRAWS, seed: 1, grid_points: DEFAULT_GRID_POINTS, inject_fault: false }
    }
}

/// Worst observed value of one check; passes when `worst <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl Metric {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, worst: 0.0, tolerance }
    }

    fn observe(&mut self, residual: f64) {
        // NaN counts as an infinite residual.
        let r = if residual.is_nan() { f64::INFINITY } else { residual };
        if r > self.worst {
            self.worst = r;
        }
    }

    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub metrics: Vec<Metric>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.metrics.iter().all(Metric::passed)
    }
}

/// One random test case.
#[derive(Debug, Clone, Copy)]
pub struct Case {
    pub channel: ChannelRealization,
    pub params: DerivedParams,
    pub budget: PowerBudget,
}

/// `alpha, beta` exponential (unit-variance Rayleigh links with random
/// phase), `mu` uniform on `[1, 20]`, `P_r` uniform on `[0, 50]`.
pub fn random_case<R: Rng>(rng: &mut R) -> Result<Case> {
    let gain = |rng: &mut R| {
        let mag = (-(1.0 - rng.random::<f64>()).ln()).sqrt();
        Complex64::from_polar(mag, rng.random::<f64>() * std::f64::consts::TAU)
    };
    let h_d = gain(rng);
    let h_e = gain(rng);
    let mu = 1.0 + 19.0 * rng.random::<f64>();
    let p_r = 50.0 * rng.random::<f64>();
    let channel = ChannelRealization::new(Complex64::new(1.0, 0.0), h_d, h_e)?;
    let budget = PowerBudget::new(mu - 1.0, p_r)?;
    let params = derive_params(&channel, &budget)?;
    Ok(Case { channel, params, budget })
}

/// The draw set shared by every per-case suite.
fn cases(cfg: &VerifyConfig) -> Result<Vec<Case>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.draws).map(|_| random_case(&mut rng)).collect()
}

pub fn solver_vs_oracle(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut cap = Metric::new("capacity_vs_grid_oracle", 1e-6);
    let mut arg = Metric::new("argmax_vs_grid_oracle", 1e-6);
    let draws = cases(cfg)?;
    for c in &draws {
        let prob = RatioQuadraticProblem::for_af(&c.params, &c.budget);
        let (x_star, f_star) = prob.grid_oracle(cfg.grid_points);
        let mut r = af_secrecy_capacity(&c.params, &c.budget);
        if cfg.inject_fault {
            r.capacity += 1e-3;
        }
        cap.observe((r.capacity - 0.5 * f_star.log2()).abs());
        arg.observe((r.x_hat - x_star).abs() / prob.x_max.max(1.0));
    }
    Ok(SuiteReport { name: "solver_vs_oracle", cases: draws.len(), metrics: vec![cap, arg] })
}

pub fn solver_consistency(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut bracket = Metric::new("lambda_outside_bracket", 0.0);
    let mut pi = Metric::new("abs_pi_at_root", 1e-9);
    let mut ratio = Metric::new("abs_f_minus_lambda", 1e-9);
    let mut agree = Metric::new("closed_form_vs_bisection", 1e-9);
    let mut cont = Metric::new("branch_continuity", 1e-9);
    let draws = cases(cfg)?;
    let mut checked = 0;
    for c in &draws {
        let prob = RatioQuadraticProblem::for_af(&c.params, &c.budget);
        if prob.is_degenerate() || prob.x_max == 0.0 {
            continue;
        }
        checked += 1;
        let closed = prob.lambda_hat_closed_form()?;
        let bis = prob.lambda_hat_bisection(BISECTION_TOLERANCE)?;
        for s in [closed, bis] {
            let inside = s.lambda_hat >= 1.0 && s.lambda_hat < prob.lambda_upper();
            bracket.observe(if inside { 0.0 } else { 1.0 });
            pi.observe(prob.pi_of_lambda(s.lambda_hat)?.abs());
            ratio.observe((prob.eval_f(s.x_hat) - s.lambda_hat).abs());
        }
        agree.observe((closed.lambda_hat - bis.lambda_hat).abs());
        let quad = prob.alpha * prob.beta * prob.mu;
        if quad > 0.0 {
            let knee = RatioQuadraticProblem { x_max: 1.0 / quad.sqrt(), ..prob };
            cont.observe((knee.lambda_endpoint() - knee.lambda_interior()).abs());
        }
    }
    Ok(SuiteReport {
        name: "solver_consistency",
        cases: checked,
        metrics: vec![bracket, pi, ratio, agree, cont],
    })
}

pub fn converse_tightness(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut tight = Metric::new("genie_minus_capacity", 1e-9);
    let mut zero = Metric::new("genie_when_eavesdropper_stronger", 1e-12);
    let mut dominance = Metric::new("achievable_minus_bound_random_phi", 1e-9);
    let draws = cases(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(3));
    for c in &draws {
        let bound = genie_upper_bound_with(&c.channel, &c.params, &c.budget, cfg.grid_points)?;
        let capacity = af_secrecy_capacity(&c.params, &c.budget).capacity;
        tight.observe((bound.bound_value - capacity).abs());
        if c.params.alpha <= c.params.beta {
            zero.observe(bound.bound_value.abs());
        }
        let x_max = c.budget.p_r / c.params.mu;
        for _ in 0..100 {
            let x = x_max * rng.random::<f64>();
            let phi = NoiseCorrelation::new(Complex64::from_polar(
                rng.random::<f64>(),
                rng.random::<f64>() * std::f64::consts::TAU,
            ))?;
            let achievable = af_achievable_rate_at(&c.params, &c.budget, x)?;
            dominance.observe(achievable - bound.bound_value);
            dominance.observe(achievable - bound_objective(&c.channel, &c.params, x, &phi)?);
        }
    }
    Ok(SuiteReport { name: "converse_tightness", cases: draws.len(), metrics: vec![tight, zero, dominance] })
}

pub fn identity_check(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut rel = Metric::new("identity_relative_residual", 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(4));
    let n = cfg.draws * 10;
    for _ in 0..n {
        let alpha = 1e-3 + 10.0 * rng.random::<f64>();
        let beta = alpha * rng.random::<f64>();
        if beta >= alpha || beta <= 0.0 {
            continue;
        }
        let mu = 1.0 + 19.0 * rng.random::<f64>();
        let x = 10.0 * rng.random::<f64>();
        let p = DerivedParams::new(alpha, beta, mu)?;
        let lhs = (1.0 + alpha * mu * x) / (1.0 + alpha * x);
        rel.observe(ratio_identity_residual(&p, x)? / lhs);
    }
    Ok(SuiteReport { name: "identity_check", cases: n, metrics: vec![rel] })
}

pub fn df_properties(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut min_cut = Metric::new("min_cut_decomposition", 1e-12);
    let mut saving = Metric::new("power_saving_equality", 1e-12);
    let mut feasible = Metric::new("consumed_over_budget", 0.0);
    let mut dominance = Metric::new("af_minus_df", 0.0);
    let draws = cases(cfg)?;
    for c in &draws {
        let df = df_secrecy_capacity(&c.params, &c.budget);
        let af = af_secrecy_capacity(&c.params, &c.budget);
        let first = source_relay_capacity(&c.params);
        let second = second_hop_rate(&c.params, c.budget.p_r).max(0.0);
        min_cut.observe((df.capacity - 0.5 * first.min(second)).abs());
        let ratio = (1.0 + c.params.alpha * c.budget.p_r) / (1.0 + c.params.beta * c.budget.p_r);
        if c.params.alpha > c.params.beta && ratio > c.params.mu {
            saving.observe((second_hop_rate(&c.params, df.x_hat) - first).abs());
        }
        feasible.observe((df.consumed_power - c.budget.p_r).max(0.0));
        feasible.observe((af.consumed_power - c.budget.p_r).max(0.0));
        dominance.observe((af.capacity - df.capacity).max(0.0));
    }
    Ok(SuiteReport { name: "df_properties", cases: draws.len(), metrics: vec![min_cut, saving, feasible, dominance] })
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        solver_vs_oracle(cfg)?,
        solver_consistency(cfg)?,
        converse_tightness(cfg)?,
        identity_check(cfg)?,
        df_properties(cfg)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyConfig {
        VerifyConfig { draws: 20, seed: 7, grid_points: 20_000, inject_fault: false }
    }

    #[test]
    fn quick_run_passes() {
        for s in run_all(&quick()).unwrap() {
            assert!(s.passed(), "{s:?}");
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let cfg = VerifyConfig { inject_fault: true, ..quick() };
        assert!(!solver_vs_oracle(&cfg).unwrap().passed());
    }

    #[test]
    fn draws_follow_seed() {
        let a = cases(&quick()).unwrap();
        let b = cases(&quick()).unwrap();
        assert_eq!(a.len(), 20);
        assert!(a.iter().zip(&b).all(|(x, y)| x.params == y.params && x.budget == y.budget));
    }

    #[test]
    fn nan_residual_fails() {
        let mut m = Metric::new("m", 1.0);
        m.observe(f64::NAN);
        assert!(!m.passed());
    }
}
