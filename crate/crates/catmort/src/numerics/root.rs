//! Bracketed root finding for monotone functions.

use super::Interval;
use crate::error::{Error, Result};

/// Tolerances for [`solve_monotone_root`].
#[derive(Clone, Copy, Debug)]
pub struct RootConfig {
    pub abs_tol: f64,
    pub max_iter: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            abs_tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl RootConfig {
    pub fn new(abs_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_iter == 0 {
            return Err(Error::domain(format!(
                "root config requires abs_tol > 0 and max_iter >= 1, got {abs_tol}, {max_iter}"
            )));
        }
        Ok(RootConfig { abs_tol, max_iter })
    }
}

/// Solve f(x) = target for a nondecreasing f on the bracket.
///
/// Bisection with a secant-accelerated candidate step; the bracket is kept
/// valid throughout, so kinks (piecewise-linear trigger sums) cannot derail
/// the iteration. Deterministic.
pub fn solve_monotone_root<F>(f: F, bracket: Interval, target: f64, cfg: RootConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut g_lo = f(lo) - target;
    let mut g_hi = f(hi) - target;

    if g_lo > cfg.abs_tol || g_hi < -cfg.abs_tol {
        return Err(Error::Bracket {
            target,
            f_lo: g_lo + target,
            f_hi: g_hi + target,
        });
    }
    if g_lo.abs() <= cfg.abs_tol && g_lo >= 0.0 {
        return Ok(lo);
    }
    if g_hi.abs() <= cfg.abs_tol && g_hi <= 0.0 {
        return Ok(hi);
    }

    let mut x = 0.5 * (lo + hi);
    for iter in 0..cfg.max_iter {
        // secant candidate from the current bracket endpoints
        let secant = if (g_hi - g_lo).abs() > 0.0 {
            lo - g_lo * (hi - lo) / (g_hi - g_lo)
        } else {
            f64::NAN
        };
        let mid = 0.5 * (lo + hi);
        // alternate towards bisection if the secant stalls near an endpoint
        x = if secant.is_finite() && secant > lo && secant < hi && iter % 2 == 0 {
            secant
        } else {
            mid
        };
        let g = f(x) - target;
        if g.abs() <= cfg.abs_tol {
            return Ok(x);
        }
        if g > 0.0 {
            hi = x;
            g_hi = g;
        } else {
            lo = x;
            g_lo = g;
        }
        if hi - lo <= cfg.abs_tol {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::Convergence {
        iterations: cfg.max_iter,
        residual: f(x) - target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(f: impl Fn(f64) -> f64, lo: f64, hi: f64, target: f64) -> f64 {
        solve_monotone_root(
            f,
            Interval::new(lo, hi).unwrap(),
            target,
            RootConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn identity_function() {
        let x = solve(|x| x, 0.0, 1.0, 0.7);
        assert!((x - 0.7).abs() < 1e-12);
    }

    #[test]
    fn trigger_sum_kink() {
        // 3(x - 1.3)^+ = 0.2  =>  x = 1.3 + 0.2/3
        let x = solve(|x| 3.0 * (x - 1.3f64).max(0.0), 0.0, 3.0, 0.2);
        assert!((x - (1.3 + 0.2 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn kinked_matches_bisection_oracle() {
        let f = |x: f64| (x - 0.31).max(0.0) + 2.5 * (x - 0.87).max(0.0) + 0.3 * x;
        let target = 1.234;
        // brute-force bisection oracle at 1e-14
        let (mut lo, mut hi) = (0.0, 5.0);
        while hi - lo > 1e-14 {
            let m = 0.5 * (lo + hi);
            if f(m) < target {
                lo = m;
            } else {
                hi = m;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let x = solve(f, 0.0, 5.0, target);
        assert!((x - oracle).abs() < 1e-11, "{x} vs {oracle}");
    }

    #[test]
    fn affine_reparameterization_invariance() {
        // solving on [a,b] and on the affinely mapped bracket gives the same root
        let f = |x: f64| x * x * x + x;
        let target = 5.0;
        let x1 = solve(f, 0.0, 3.0, target);
        let g = |y: f64| f(3.0 * (y - 10.0)); // y in [10, 11] maps to x in [0, 3]
        let y = solve(g, 10.0, 11.0, target);
        assert!((3.0 * (y - 10.0) - x1).abs() < 1e-9);
    }

    #[test]
    fn bracket_error_reported() {
        let err = solve_monotone_root(
            |x| x,
            Interval::new(0.0, 1.0).unwrap(),
            2.0,
            RootConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }
}
