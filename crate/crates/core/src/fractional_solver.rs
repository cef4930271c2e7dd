//! Maximization of the AF secrecy ratio
//!
//! ```text
//!          a x^2 + (alpha mu + beta) x + 1
//! f(x) = -----------------------------------,   a = alpha beta mu,   0 <= x <= X
//!          a x^2 + (alpha + beta mu) x + 1
//! ```
//!
//! by the parametric (Dinkelbach-type) method: `lambda_hat` is the unique
//! root of `pi(lambda) = max_x [num(x) - lambda den(x)]`, and the optimal
//! ratio equals that root. The root always lies in
//! `[1, (alpha mu + beta) / (alpha + beta mu))` when `alpha > beta` and `mu > 1`.
//!
//! Two solver paths are provided, a closed form and a bisection on `pi`,
//! plus a brute-force grid oracle that knows nothing about `lambda`.

use crate::channel_model::{DerivedParams, PowerBudget, Strategy, gain_domain};
use crate::error::{Error, Result};
use crate::search::{self, Maximum};

/// Default bisection tolerance on `lambda`.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

/// Relative gap below which `alpha == beta mu` is treated as exact.
const SINGULAR_GAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioQuadraticProblem {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    /// Upper end `X` of the feasible interval for `x = |omega|^2`.
    pub x_max: f64,
}

/// Which piece of `pi(lambda)` holds the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Root of the linear piece; the optimum sits at `x = X`.
    Endpoint,
    /// Root of the vertex piece; the optimum is the interior point `1/sqrt(alpha beta mu)`.
    Interior,
    /// `alpha <= beta` or `mu == 1`; the ratio never exceeds 1.
    Degenerate,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::Endpoint => "endpoint",
            Branch::Interior => "interior",
            Branch::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSolution {
    pub lambda_hat: f64,
    pub x_hat: f64,
    pub branch: Branch,
}

impl RatioQuadraticProblem {
    pub fn new(alpha: f64, beta: f64, mu: f64, x_max: f64) -> Result<Self> {
        DerivedParams::new(alpha, beta, mu)?;
        if !x_max.is_finite() || x_max < 0.0 {
            return Err(Error::InvalidInput(format!("x_max = {x_max} must be finite and nonnegative")));
        }
        Ok(Self { alpha, beta, mu, x_max })
    }

    /// The AF problem for one channel realization: `X = P_r / mu`.
    pub fn for_af(params: &DerivedParams, pb: &PowerBudget) -> Self {
        Self {
            alpha: params.alpha,
            beta: params.beta,
            mu: params.mu,
            x_max: gain_domain(Strategy::AmplifyForward, params, pb),
        }
    }

    fn quad(&self) -> f64 {
        self.alpha * self.beta * self.mu
    }

    fn num_lin(&self) -> f64 {
        self.alpha * self.mu + self.beta
    }

    fn den_lin(&self) -> f64 {
        self.alpha + self.beta * self.mu
    }

    pub fn numerator(&self, x: f64) -> f64 {
        (self.quad() * x + self.num_lin()) * x + 1.0
    }

    pub fn denominator(&self, x: f64) -> f64 {
        (self.quad() * x + self.den_lin()) * x + 1.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha <= self.beta || self.mu == 1.0
    }

    /// `f(x)`. The denominator is at least 1 on `x >= 0`.
    pub fn eval_f(&self, x: f64) -> f64 {
        self.numerator(x) / self.denominator(x)
    }

    /// `f(x) - 1 = (alpha - beta)(mu - 1) x / den(x)`, free of the
    /// cancellation that `eval_f(x) - 1` suffers when the ratio is near 1.
    pub fn eval_excess(&self, x: f64) -> f64 {
        (self.alpha - self.beta) * (self.mu - 1.0) * x / self.denominator(x)
    }

    /// `F(x, lambda) = num(x) - lambda den(x)`, expanded by powers of `x`.
    #[allow(non_snake_case)]
    pub fn eval_F(&self, x: f64, lambda: f64) -> f64 {
        self.quad() * (1.0 - lambda) * x * x
            + (self.num_lin() - lambda * self.den_lin()) * x
            + (1.0 - lambda)
    }

    /// Open upper end of the bracket holding `lambda_hat`.
    pub fn lambda_upper(&self) -> f64 {
        self.num_lin() / self.den_lin()
    }

    /// Value of `lambda` at which the maximizer of `F(., lambda)` leaves the
    /// endpoint `X` and moves into the interior.
    pub fn branch_threshold(&self) -> f64 {
        let t = 2.0 * self.quad() * self.x_max;
        (t + self.num_lin()) / (t + self.den_lin())
    }

    fn check_bracket(&self, lambda: f64) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::Domain(format!(
                "lambda machinery needs alpha > beta and mu > 1; got alpha = {}, beta = {}, mu = {}",
                self.alpha, self.beta, self.mu
            )));
        }
        let upper = self.lambda_upper();
        if !(1.0..=upper).contains(&lambda) {
            return Err(Error::Domain(format!("lambda = {lambda} outside [1, {upper}]")));
        }
        Ok(())
    }

    fn interior_point(&self, lambda: f64) -> f64 {
        (lambda * self.den_lin() - self.num_lin()) / (2.0 * self.quad() * (1.0 - lambda))
    }

    /// Maximizer of `F(., lambda)` over `[0, X]`.
    pub fn x_of_lambda(&self, lambda: f64) -> Result<f64> {
        self.check_bracket(lambda)?;
        if lambda <= self.branch_threshold() {
            Ok(self.x_max)
        } else {
            Ok(self.interior_point(lambda).clamp(0.0, self.x_max))
        }
    }

    /// `pi(lambda) = max_{0 <= x <= X} F(x, lambda)`, strictly decreasing in `lambda`.
    pub fn pi_of_lambda(&self, lambda: f64) -> Result<f64> {
        self.check_bracket(lambda)?;
        if lambda <= self.branch_threshold() {
            Ok(self.numerator(self.x_max) - lambda * self.denominator(self.x_max))
        } else {
            let slope = lambda * self.den_lin() - self.num_lin();
            Ok(slope * slope / (4.0 * self.quad() * (lambda - 1.0)) - lambda + 1.0)
        }
    }

    /// Root of the endpoint piece: `f(X)` itself.
    pub fn lambda_endpoint(&self) -> f64 {
        self.eval_f(self.x_max)
    }

    /// Discriminant of the quadratic whose smaller root is the interior
    /// solution, in factored form `16 a (mu-1)^2 (alpha-beta)^2`.
    ///
    /// Equal to `(8a - 2(alpha+beta mu)(alpha mu+beta))^2 - 4(alpha-beta mu)^2(alpha mu-beta)^2`;
    /// the factored form avoids cancellation when the two squares nearly agree.
    pub fn discriminant(&self) -> f64 {
        let d = (self.mu - 1.0) * (self.alpha - self.beta);
        16.0 * self.quad() * d * d
    }

    /// Smaller root of `(alpha-beta mu)^2 l^2 - b l + (alpha mu-beta)^2 = 0` with
    /// `b = 2(alpha+beta mu)(alpha mu+beta) - 8 alpha beta mu`.
    ///
    /// Evaluated as `2c / (b + sqrt(disc))`, the conjugate of
    /// `(b - sqrt(disc)) / 2(alpha-beta mu)^2`, which stays finite at `alpha = beta mu`.
    /// `b` is summed as `2(mu (alpha-beta)^2 + alpha beta (mu-1)^2)`.
    pub fn lambda_interior(&self) -> f64 {
        let gap = self.alpha - self.beta;
        let m1 = self.mu - 1.0;
        let b = 2.0 * (self.mu * gap * gap + self.alpha * self.beta * m1 * m1);
        let c = self.alpha * self.mu - self.beta;
        2.0 * c * c / (b + self.discriminant().sqrt())
    }

    /// `alpha beta mu X^2 <= 1`, i.e. `X <= 1/sqrt(alpha beta mu)`.
    fn endpoint_regime(&self) -> bool {
        self.quad() * self.x_max * self.x_max <= 1.0
    }

    fn degenerate_solution() -> LambdaSolution {
        LambdaSolution { lambda_hat: 1.0, x_hat: 0.0, branch: Branch::Degenerate }
    }

    /// Closed-form `lambda_hat` and maximizer.
    pub fn lambda_hat_closed_form(&self) -> Result<LambdaSolution> {
        if self.is_degenerate() {
            return Ok(Self::degenerate_solution());
        }
        if self.endpoint_regime() {
            return Ok(LambdaSolution {
                lambda_hat: self.lambda_endpoint(),
                x_hat: self.x_max,
                branch: Branch::Endpoint,
            });
        }
        let gap = (self.alpha - self.beta * self.mu).abs();
        if gap < SINGULAR_GAP * self.alpha.max(self.beta * self.mu) {
            return self.lambda_hat_bisection(BISECTION_TOLERANCE);
        }
        Ok(LambdaSolution {
            lambda_hat: self.lambda_interior(),
            x_hat: 1.0 / self.quad().sqrt(),
            branch: Branch::Interior,
        })
    }

    /// Bisection on `pi` over `[1, (alpha mu + beta)/(alpha + beta mu)]`.
    pub fn lambda_hat_bisection(&self, tol: f64) -> Result<LambdaSolution> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
        }
        if self.is_degenerate() {
            return Ok(Self::degenerate_solution());
        }
        let mut lo = 1.0;
        let mut hi = self.lambda_upper();
        let pi_lo = self.pi_of_lambda(lo)?;
        let pi_hi = self.pi_of_lambda(hi)?;
        if pi_lo < 0.0 || pi_hi > 0.0 {
            return Err(Error::Bracket { lo: pi_lo, hi: pi_hi });
        }
        let lambda_hat = if pi_lo == 0.0 {
            lo
        } else {
            for _ in 0..200 {
                if hi - lo <= tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.pi_of_lambda(mid)? > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        let branch = if lambda_hat <= self.branch_threshold() {
            Branch::Endpoint
        } else {
            Branch::Interior
        };
        Ok(LambdaSolution { lambda_hat, x_hat: self.x_of_lambda(lambda_hat)?, branch })
    }

    /// Grid scan plus golden-section refinement of `f` over `[0, X]`.
    ///
    /// The scan runs on `f - 1` in its cancellation-free form so that the
    /// maximizer is resolved even when the ratio barely exceeds 1.
    pub fn grid_oracle(&self, n_points: usize) -> (f64, f64) {
        let Maximum { x, value } = search::grid_maximize(|x| self.eval_excess(x), self.x_max, n_points);
        (x, 1.0 + value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, proptest};
    use proptest::strategy::Strategy as PropStrategy;

    // Frozen from a 40-digit evaluation of the ratio and its quadratic root.
    const LAMBDA_INTERIOR_4_1_2: f64 = 1.257_359_312_880_715;
    const X_INTERIOR_4_1_2: f64 = 0.353_553_390_593_273_8;

    fn prob(alpha: f64, beta: f64, mu: f64, x_max: f64) -> RatioQuadraticProblem {
        RatioQuadraticProblem::new(alpha, beta, mu, x_max).unwrap()
    }

    /// Dense brute-force argmax, independent of both solver paths and of `search`.
    fn brute_argmax<F: Fn(f64) -> f64>(f: F, hi: f64, n: usize) -> (f64, f64) {
        (0..=n)
            .map(|i| hi * i as f64 / n as f64)
            .fold((0.0, f64::NEG_INFINITY), |(bx, bv), x| {
                let v = f(x);
                if v > bv { (x, v) } else { (bx, bv) }
            })
    }

    #[test]
    fn f_examples() {
        let p = prob(4.0, 1.0, 2.0, 1.0);
        assert_eq!(p.eval_f(0.0), 1.0);
        assert!((p.eval_f(0.25) - 1.25).abs() < 1e-15);
        let flat = prob(3.0, 3.0, 5.0, 1.0);
        for x in [0.0, 0.1, 2.0, 17.0] {
            assert!((flat.eval_f(x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn big_f_examples() {
        let p = prob(4.0, 1.0, 2.0, 0.25);
        assert_eq!(p.eval_F(0.0, 1.0), 0.0);
        for x in [0.1, 0.7, 3.0] {
            assert!((p.eval_F(x, 1.0) - 3.0 * x).abs() < 1e-14);
        }
        assert!(p.eval_F(0.25, 1.25).abs() < 1e-15);
    }

    #[test]
    fn x_of_lambda_examples() {
        let p = prob(4.0, 1.0, 2.0, 1.0);
        assert_eq!(p.x_of_lambda(1.0).unwrap(), 1.0);
        assert!((p.branch_threshold() - 25.0 / 22.0).abs() < 1e-15);
        let x = p.x_of_lambda(1.4).unwrap();
        assert!((x - 0.09375).abs() < 1e-15);
        let (bx, _) = brute_argmax(|x| p.eval_F(x, 1.4), 1.0, 100_000);
        assert!((bx - 0.09375).abs() <= 1e-5);

        let t = p.branch_threshold();
        assert!((p.interior_point(t) - p.x_max).abs() < 1e-12);
    }

    #[test]
    fn x_of_lambda_rejects_outside_bracket() {
        let p = prob(4.0, 1.0, 2.0, 1.0);
        assert!(matches!(p.x_of_lambda(0.9), Err(Error::Domain(_))));
        assert!(matches!(p.x_of_lambda(1.6), Err(Error::Domain(_))));
        assert!(prob(1.0, 1.0, 2.0, 1.0).x_of_lambda(1.0).is_err());
    }

    #[test]
    fn pi_examples() {
        let p = prob(4.0, 1.0, 2.0, 1.0);
        assert!((p.pi_of_lambda(1.0).unwrap() - 3.0).abs() < 1e-14);
        assert!((p.pi_of_lambda(1.5).unwrap() + 0.5).abs() < 1e-14);
        let q = prob(4.0, 1.0, 2.0, 0.25);
        assert!(q.pi_of_lambda(1.25).unwrap().abs() < 1e-14);
    }

    #[test]
    fn discriminant_matches_expanded_form() {
        let p = prob(4.0, 1.0, 2.0, 1.0);
        assert!((p.discriminant() - 1152.0).abs() < 1e-9);
        for &(a, b, m) in &[(3.1, 0.2, 7.5), (9.0, 2.0, 1.3), (0.4, 0.1, 19.0)] {
            let p = prob(a, b, m, 1.0);
            let expanded = (8.0 * a * b * m - 2.0 * (a + b * m) * (a * m + b)).powi(2)
                - 4.0 * (a - b * m).powi(2) * (a * m - b).powi(2);
            assert!((p.discriminant() - expanded).abs() <= 1e-10 * expanded.abs().max(1.0));
        }
    }

    #[test]
    fn interior_root_matches_textbook_quadratic_formula() {
        let p = prob(4.0, 1.0, 2.0, 1.0);
        let b = 2.0 * 6.0 * 9.0 - 64.0;
        let textbook = (b - p.discriminant().sqrt()) / (2.0 * 4.0);
        assert!((p.lambda_interior() - textbook).abs() < 1e-13);
    }

    #[test]
    fn closed_form_endpoint_example() {
        let s = prob(4.0, 1.0, 2.0, 0.25).lambda_hat_closed_form().unwrap();
        assert_eq!(s.branch, Branch::Endpoint);
        assert!((s.lambda_hat - 1.25).abs() < 1e-15);
        assert_eq!(s.x_hat, 0.25);
    }

    #[test]
    fn closed_form_interior_example() {
        let s = prob(4.0, 1.0, 2.0, 1.0).lambda_hat_closed_form().unwrap();
        assert_eq!(s.branch, Branch::Interior);
        assert!((s.lambda_hat - LAMBDA_INTERIOR_4_1_2).abs() < 1e-14);
        assert!((s.x_hat - X_INTERIOR_4_1_2).abs() < 1e-15);
    }

    #[test]
    fn branches_meet_at_boundary() {
        let p = prob(4.0, 1.0, 2.0, 1.0 / 8f64.sqrt());
        assert!((p.lambda_endpoint() - p.lambda_interior()).abs() <= 1e-9);
        assert!((p.lambda_endpoint() - LAMBDA_INTERIOR_4_1_2).abs() <= 1e-9);
    }

    #[test]
    fn bisection_examples() {
        let s = prob(4.0, 1.0, 2.0, 0.25).lambda_hat_bisection(1e-12).unwrap();
        assert!((s.lambda_hat - 1.25).abs() < 1e-12);
        assert!((s.x_hat - 0.25).abs() < 1e-12);
        let s = prob(4.0, 1.0, 2.0, 1.0).lambda_hat_bisection(1e-12).unwrap();
        assert!((s.lambda_hat - LAMBDA_INTERIOR_4_1_2).abs() < 1e-12);
        assert_eq!(s.branch, Branch::Interior);
        assert!((s.x_hat - X_INTERIOR_4_1_2).abs() < 1e-5);
    }

    #[test]
    fn bisection_near_unit_mu() {
        let p = prob(2.0, 1.0, 1.0 + 1e-9, 3.0);
        let s = p.lambda_hat_bisection(1e-12).unwrap();
        assert!((s.lambda_hat - 1.0).abs() < 1e-9);
        assert!((p.eval_f(s.x_hat) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bisection_rejects_nonpositive_tolerance() {
        assert!(prob(4.0, 1.0, 2.0, 1.0).lambda_hat_bisection(0.0).is_err());
    }

    #[test]
    fn degenerate_cases_skip_lambda() {
        for p in [prob(1.0, 2.0, 3.0, 1.0), prob(2.0, 2.0, 3.0, 1.0), prob(5.0, 1.0, 1.0, 1.0)] {
            let s = p.lambda_hat_closed_form().unwrap();
            assert_eq!(s, LambdaSolution { lambda_hat: 1.0, x_hat: 0.0, branch: Branch::Degenerate });
            assert_eq!(p.lambda_hat_bisection(1e-12).unwrap(), s);
        }
    }

    #[test]
    fn singular_gap_falls_back_to_bisection() {
        // alpha == beta mu exactly; the interior regime applies since a X^2 = 8 > 1.
        let p = prob(2.0, 1.0, 2.0, 2.0);
        let s = p.lambda_hat_closed_form().unwrap();
        let exact = p.eval_f(1.0 / 4f64.sqrt());
        assert!((s.lambda_hat - exact).abs() < 1e-11);
        assert!((p.lambda_interior() - exact).abs() < 1e-14);
    }

    #[test]
    fn oracle_examples() {
        let (x, f) = prob(4.0, 1.0, 2.0, 0.25).grid_oracle(1_000_000);
        assert_eq!(x, 0.25);
        assert!((f - 1.25).abs() < 1e-15);
        assert_eq!(prob(1.0, 3.0, 4.0, 2.0).grid_oracle(1000), (0.0, 1.0));
        assert_eq!(prob(4.0, 1.0, 2.0, 0.0).grid_oracle(1000), (0.0, 1.0));
        let (x, f) = prob(4.0, 1.0, 2.0, 1.0).grid_oracle(1_000_000);
        assert!((x - X_INTERIOR_4_1_2).abs() < 1e-6);
        assert!((f - LAMBDA_INTERIOR_4_1_2).abs() < 1e-12);
    }

    fn nondegenerate() -> impl PropStrategy<Value = RatioQuadraticProblem> {
        (0.01f64..10.0, 0.0f64..1.0, 1.001f64..20.0, 0.001f64..50.0)
            .prop_map(|(a, frac, mu, x)| prob(a, a * frac * 0.999, mu, x))
    }

    proptest! {
        #[test]
        fn solvers_agree_and_stay_in_bracket(p in nondegenerate()) {
            let c = p.lambda_hat_closed_form().unwrap();
            let b = p.lambda_hat_bisection(BISECTION_TOLERANCE).unwrap();
            prop_assert!(c.lambda_hat >= 1.0 && c.lambda_hat < p.lambda_upper());
            prop_assert!(b.lambda_hat >= 1.0 && b.lambda_hat < p.lambda_upper());
            prop_assert!((c.lambda_hat - b.lambda_hat).abs() <= 1e-9);
            for s in [c, b] {
                prop_assert!(p.pi_of_lambda(s.lambda_hat).unwrap().abs() <= 1e-9);
                prop_assert!((p.eval_f(s.x_hat) - s.lambda_hat).abs() <= 1e-9);
            }
        }

        #[test]
        fn pi_sign_structure_and_monotone(p in nondegenerate(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
            let up = p.lambda_upper();
            let expected_start = (p.alpha - p.beta) * (p.mu - 1.0);
            prop_assert!(p.pi_of_lambda(1.0).unwrap() > 0.0);
            prop_assert!((p.pi_of_lambda(1.0).unwrap() - (expected_start * p.x_max)).abs()
                <= 1e-9 * expected_start.max(1.0) * p.x_max.max(1.0));
            let end = p.pi_of_lambda(up).unwrap();
            prop_assert!(end < 0.0);
            let (la, lb) = (1.0 + u.min(v) * (up - 1.0), 1.0 + u.max(v) * (up - 1.0));
            if lb - la > 1e-9 * up {
                prop_assert!(p.pi_of_lambda(la).unwrap() > p.pi_of_lambda(lb).unwrap());
            }
        }

        #[test]
        fn x_of_lambda_is_feasible(p in nondegenerate(), u in 0.0f64..=1.0) {
            let lambda = 1.0 + u * (p.lambda_upper() - 1.0);
            let x = p.x_of_lambda(lambda).unwrap();
            prop_assert!((0.0..=p.x_max).contains(&x));
        }
    }
}
