//! Brute-force scalar maximization: a uniform grid scan followed by
//! golden-section refinement around the best grid cell.
//!
//! This is the independent oracle used to check the closed-form and
//! parametric solvers, and the inner maximizer of the genie-aided bound.

/// Default number of grid points.
pub const DEFAULT_GRID_POINTS: usize = 1_000_000;

/// Width at which golden-section refinement stops.
pub const GOLDEN_TOLERANCE: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Maximizes `f` over `[0, x_max]`.
///
/// Ties on the grid go to the smallest `x`. The golden-section candidate
/// only replaces the grid point when it is strictly better, so flat or
/// endpoint maxima are reported at the grid point.
pub fn grid_maximize<F>(f: F, x_max: f64, n_points: usize) -> Maximum
where
    F: Fn(f64) -> f64,
{
    assert!(n_points >= 2, "grid needs at least two points");
    assert!(x_max >= 0.0 && x_max.is_finite(), "x_max must be finite and nonnegative");

    if x_max == 0.0 {
        return Maximum { x: 0.0, value: f(0.0) };
    }

    let last = (n_points - 1) as f64;
    let at = |i: usize| if i == n_points - 1 { x_max } else { x_max * (i as f64 / last) };

    let mut best_i = 0;
    let mut best = f(0.0);
    for i in 1..n_points {
        let v = f(at(i));
        if v > best {
            best = v;
            best_i = i;
        }
    }

    let lo = at(best_i.saturating_sub(1));
    let hi = at((best_i + 1).min(n_points - 1));
    let refined = golden_section_max(&f, lo, hi, GOLDEN_TOLERANCE * x_max.max(1.0));

    if refined.value > best {
        refined
    } else {
        Maximum { x: at(best_i), value: best }
    }
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`.
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    // 200 iterations shrink any finite bracket below double resolution.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    [(c, fc), (d, fd), (mid, fm)]
        .into_iter()
        .fold(Maximum { x: mid, value: fm }, |acc, (x, v)| {
            if v > acc.value || (v == acc.value && x < acc.x) {
                Maximum { x, value: v }
            } else {
                acc
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_parabola_peak() {
        let m = grid_maximize(|x| -(x - 0.3).powi(2), 1.0, 1001);
        assert!((m.x - 0.3).abs() < 1e-7);
        assert!(m.value.abs() < 1e-14);
    }

    #[test]
    fn increasing_function_peaks_at_right_end() {
        let m = grid_maximize(|x| x, 2.5, 10);
        assert_eq!(m.x, 2.5);
        assert_eq!(m.value, 2.5);
    }

    #[test]
    fn decreasing_function_peaks_at_zero() {
        let m = grid_maximize(|x| -x, 4.0, 100);
        assert_eq!(m, Maximum { x: 0.0, value: 0.0 });
    }

    #[test]
    fn flat_function_ties_to_smallest_x() {
        let m = grid_maximize(|_| 1.0, 3.0, 1000);
        assert_eq!(m, Maximum { x: 0.0, value: 1.0 });
    }

    #[test]
    fn singleton_domain() {
        let m = grid_maximize(|x| 5.0 - x, 0.0, 10);
        assert_eq!(m, Maximum { x: 0.0, value: 5.0 });
    }

    #[test]
    fn golden_section_narrows_to_tolerance() {
        let m = golden_section_max(|x: f64| (x * 2.0).sin(), 0.0, 1.5, 1e-12);
        assert!((m.x - std::f64::consts::FRAC_PI_4).abs() < 1e-7);
    }
}
