//! Shared numerical kernels: normal and incomplete-gamma special functions,
//! bracketed monotone root finding, adaptive Gauss-Kronrod quadrature and
//! scalar optimization.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! any number of threads.

mod gamma;
mod normal;
mod optim;
mod quad;
mod root;

pub use gamma::{gamma_quantile, ln_gamma, reg_lower_gamma, reg_upper_gamma};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile, std_normal_sf};
pub use optim::{optimize_scalar, OptimizeMode};
pub use quad::{integrate, integrate_with_budget};
pub use root::{solve_monotone_root, RootConfig};

use crate::error::{Error, Result};

/// A finite open search interval `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain(format!(
                "interval requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}
