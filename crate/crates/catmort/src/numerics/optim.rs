//! Scalar optimization: coarse grid scan followed by golden-section
//! refinement of the best grid cell.

use super::Interval;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizeMode {
    Maximize,
    Minimize,
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Grid + golden-section search. The returned value is never worse than the
/// best evaluated grid point; the target function does not need to be
/// unimodal (the grid guards against stray local optima).
pub fn optimize_scalar<F>(
    f: F,
    interval: Interval,
    mode: OptimizeMode,
    grid_n: usize,
) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if grid_n < 2 {
        return Err(Error::domain(format!(
            "optimize_scalar requires grid_n >= 2, got {grid_n}"
        )));
    }
    let sign = match mode {
        OptimizeMode::Maximize => 1.0,
        OptimizeMode::Minimize => -1.0,
    };
    let g = |x: f64| sign * f(x);

    let step = interval.width() / (grid_n - 1) as f64;
    let mut best_i = 0;
    let mut best_x = interval.lo;
    let mut best_v = g(interval.lo);
    for i in 1..grid_n {
        let x = if i == grid_n - 1 {
            interval.hi
        } else {
            interval.lo + step * i as f64
        };
        let v = g(x);
        if v > best_v {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }

    // golden-section on the cell around the best grid point
    let mut a = if best_i == 0 { interval.lo } else { best_x - step };
    let mut b = if best_i == grid_n - 1 {
        interval.hi
    } else {
        best_x + step
    };
    a = a.max(interval.lo);
    b = b.min(interval.hi);

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..200 {
        if b - a <= 1e-10 * interval.width().max(1.0) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best_v {
            best_v = v;
            best_x = x;
        }
    }
    Ok((best_x, sign * best_v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_max() {
        let (t, v) = optimize_scalar(
            |t| -(t - 1.0) * (t - 1.0),
            Interval::new(0.0, 3.0).unwrap(),
            OptimizeMode::Maximize,
            64,
        )
        .unwrap();
        assert!((t - 1.0).abs() < 1e-8);
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn constant_function() {
        let (_, v) = optimize_scalar(
            |_| 2.5,
            Interval::new(0.0, 1.0).unwrap(),
            OptimizeMode::Maximize,
            8,
        )
        .unwrap();
        assert_eq!(v, 2.5);
    }

    #[test]
    fn sine_max_at_half_pi() {
        let (t, v) = optimize_scalar(
            |t: f64| t.sin(),
            Interval::new(0.0, 3.0).unwrap(),
            OptimizeMode::Maximize,
            64,
        )
        .unwrap();
        assert!((t - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn never_below_grid_points() {
        let f = |t: f64| (7.3 * t).sin() + 0.3 * t;
        let grid_n = 64;
        let iv = Interval::new(0.0, 5.0).unwrap();
        let (_, v) = optimize_scalar(f, iv, OptimizeMode::Maximize, grid_n).unwrap();
        for i in 0..grid_n {
            let x = iv.lo + iv.width() * i as f64 / (grid_n - 1) as f64;
            assert!(v >= f(x) - 1e-12);
        }
    }

    #[test]
    fn minimize_mode() {
        let (t, v) = optimize_scalar(
            |t| (t - 2.0) * (t - 2.0),
            Interval::new(0.0, 3.0).unwrap(),
            OptimizeMode::Minimize,
            32,
        )
        .unwrap();
        assert!((t - 2.0).abs() < 1e-8);
        assert!(v.abs() < 1e-16);
        // with a flat offset the argmin is only resolvable to sqrt(eps)
        let (t, v) = optimize_scalar(
            |t| (t - 2.0) * (t - 2.0) + 1.0,
            Interval::new(0.0, 3.0).unwrap(),
            OptimizeMode::Minimize,
            32,
        )
        .unwrap();
        assert!((t - 2.0).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
    }
}
