//! Log-gamma marginals: (ln q − μ)/σ ~ Gamma(p, rate a) per monitoring date.
//!
//! `a` is a rate parameter (mean p/a); the scale reading degenerates the
//! index to a near-constant and is not offered.

use super::{ConditioningTimes, MortalityModel};
use crate::error::{Error, Result};
use crate::numerics::{
    gamma_quantile, integrate_with_budget, ln_gamma, reg_lower_gamma, reg_upper_gamma, Interval,
};

/// Per-date parameter row.
#[derive(Clone, Copy, Debug)]
pub struct LgRow {
    pub p: f64,
    pub a: f64,
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug)]
pub struct LogGammaModel {
    pub rate: f64,
    pub base_level: f64,
    pub level: f64,
    rows: Vec<LgRow>,
    dates: Vec<f64>,
    label: String,
}

impl LogGammaModel {
    pub fn new(
        rate: f64,
        base_level: f64,
        rows: Vec<LgRow>,
        dates: Vec<f64>,
        label: &str,
    ) -> Result<Self> {
        if rows.len() != dates.len() {
            return Err(Error::Config(format!(
                "one parameter row per monitoring date required: {} rows, {} dates",
                rows.len(),
                dates.len()
            )));
        }
        if rows.iter().any(|r| !(r.p > 0.0 && r.a > 0.0 && r.sigma > 0.0)) {
            return Err(Error::Config("rows require p, a, sigma > 0".into()));
        }
        Ok(LogGammaModel {
            rate,
            base_level,
            level: base_level,
            rows,
            dates,
            label: label.to_string(),
        })
    }

    pub fn rows(&self) -> &[LgRow] {
        &self.rows
    }

    /// Rescale the index distribution: q scales by level/base, i.e. μ shifts
    /// by ln(level/base).
    pub fn with_level(&self, level: f64) -> Self {
        let shift = (level / self.base_level).ln();
        let rows = self
            .rows
            .iter()
            .map(|r| LgRow {
                mu: r.mu + shift,
                ..*r
            })
            .collect();
        LogGammaModel {
            rows,
            level,
            ..self.clone()
        }
    }

    pub fn with_rate(&self, rate: f64) -> Self {
        let mut m = self.clone();
        m.rate = rate;
        m
    }

    /// Gamma-variable threshold for {q > K}: x* = max((ln K − μ)/σ, 0).
    fn threshold(&self, i: usize, strike: f64) -> f64 {
        let r = &self.rows[i];
        if strike <= (r.mu).exp() {
            0.0
        } else {
            (strike.ln() - r.mu) / r.sigma
        }
    }

    /// Upper truncation for gamma-weighted integrands with effective rate
    /// `rate_eff`: mean plus a deep tail margin.
    fn x_hi(p: f64, rate_eff: f64) -> f64 {
        (p + 16.0 * p.sqrt() + 40.0) / rate_eff
    }

    /// Closed-form E[(q − K)⁺] via regularized incomplete gammas
    /// (requires a > σ). The quadrature route must agree with this to 1e-6.
    pub fn exceedance_closed_form(&self, strike: f64, i: usize) -> Result<f64> {
        self.power_exceedance_closed_form(i, 1.0, strike)
    }

    /// Closed-form E[(q^c − m)⁺] (requires a > cσ).
    pub fn power_exceedance_closed_form(&self, i: usize, c: f64, m: f64) -> Result<f64> {
        let r = &self.rows[i];
        let eff = r.a - c * r.sigma;
        if eff <= 0.0 {
            return Err(Error::domain(format!(
                "log-gamma closed form needs a > c*sigma, got a={}, c*sigma={}",
                r.a,
                c * r.sigma
            )));
        }
        let xs = if m <= (c * r.mu).exp() {
            0.0
        } else {
            (m.ln() / c - r.mu) / r.sigma
        };
        let growth = (c * r.mu).exp() * (r.a / eff).powf(r.p);
        Ok(growth * reg_upper_gamma(eff * xs, r.p)? - m * reg_upper_gamma(r.a * xs, r.p)?)
    }

    fn gamma_log_pdf(p: f64, a: f64, x: f64) -> f64 {
        p * a.ln() + (p - 1.0) * x.ln() - a * x - ln_gamma(p)
    }
}

impl MortalityModel for LogGammaModel {
    fn label(&self) -> &str {
        &self.label
    }
    fn dates(&self) -> &[f64] {
        &self.dates
    }
    fn rate(&self) -> f64 {
        self.rate
    }

    fn marginal_cdf(&self, i: usize, x: f64) -> f64 {
        let r = &self.rows[i];
        if x <= r.mu.exp() {
            return 0.0;
        }
        reg_lower_gamma(r.a * (x.ln() - r.mu) / r.sigma, r.p).unwrap_or(0.0)
    }

    fn marginal_quantile(&self, i: usize, u: f64) -> Result<f64> {
        let r = &self.rows[i];
        Ok((r.mu + r.sigma * gamma_quantile(u, r.p, r.a)?).exp())
    }

    fn marginal_density(&self, i: usize, x: f64) -> f64 {
        let r = &self.rows[i];
        if x <= r.mu.exp() {
            return 0.0;
        }
        let y = (x.ln() - r.mu) / r.sigma;
        Self::gamma_log_pdf(r.p, r.a, y).exp() / (r.sigma * x)
    }

    fn mean(&self, i: usize) -> f64 {
        let r = &self.rows[i];
        if r.a <= r.sigma {
            return f64::INFINITY;
        }
        r.mu.exp() * (r.a / (r.a - r.sigma)).powf(r.p)
    }

    fn exceedance(&self, strike: f64, i: usize) -> Result<f64> {
        self.power_exceedance(i, 1.0, strike)
    }

    fn power_exceedance(&self, i: usize, c: f64, m: f64) -> Result<f64> {
        let r = &self.rows[i];
        let eff = r.a - c * r.sigma;
        if eff <= 0.0 {
            return Err(Error::domain(format!(
                "log-gamma power exceedance diverges: a={} <= c*sigma={}",
                r.a,
                c * r.sigma
            )));
        }
        let xs = if m <= 0.0 {
            0.0
        } else {
            self.threshold(i, m.powf(1.0 / c))
        };
        let hi = Self::x_hi(r.p, eff);
        if xs >= hi {
            return Ok(0.0);
        }
        // quantile-space quadrature after substituting the gamma variable
        let f = |x: f64| {
            ((c * (r.mu + r.sigma * x)).exp() - m) * Self::gamma_log_pdf(r.p, r.a, x).exp()
        };
        let v = integrate_with_budget(f, Interval::new(xs, hi)?, 1e-9, 20_000)
            .map_err(|e| e.in_context(format!("log-gamma exceedance at date {i}")))?;
        Ok(v.max(0.0))
    }

    fn conditioning_times(&self) -> ConditioningTimes {
        ConditioningTimes::DatesOnly
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{preset, Model};

    fn model() -> LogGammaModel {
        match preset("cheng-lg", 0.0).unwrap().model {
            Model::LogGamma(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn quantile_small_u_approaches_support_floor() {
        let m = model();
        let r = m.rows()[0];
        let q = m.marginal_quantile(0, 1e-10).unwrap();
        assert!(q > r.mu.exp());
        assert!(q < r.mu.exp() * 1.5);
    }

    #[test]
    fn degenerate_sigma_limit() {
        let rows = vec![LgRow {
            p: 2.0,
            a: 1.0,
            mu: -5.0,
            sigma: 1e-14,
        }];
        let m = LogGammaModel::new(0.0, 0.0088, rows, vec![1.0], "lg-degenerate").unwrap();
        for &u in &[0.05, 0.5, 0.95] {
            assert!((m.marginal_quantile(0, u).unwrap() - (-5.0f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn cdf_quantile_roundtrip() {
        let m = model();
        for i in 0..3 {
            for k in 1..40 {
                let u = k as f64 / 40.0;
                let x = m.marginal_quantile(i, u).unwrap();
                assert!((m.marginal_cdf(i, x) - u).abs() < 1e-9, "i={i} u={u}");
            }
        }
    }

    #[test]
    fn call_zero_strike_is_discounted_mean() {
        let m = model();
        let v = m.european_call(0.0, 0).unwrap();
        assert!((v - m.mean(0)).abs() < 1e-8 * m.mean(0));
    }

    #[test]
    fn call_far_strike_vanishes() {
        let m = model();
        let far = m.marginal_quantile(2, 1.0 - 1e-12).unwrap() * 1.01;
        assert!(m.european_call(far, 2).unwrap() < 1e-12);
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        let m = model();
        for i in 0..3 {
            for &mult in &[0.0, 0.9, 1.0, 1.1, 1.3] {
                let k = mult * 0.0088;
                let quad = m.exceedance(k, i).unwrap();
                let cf = m.exceedance_closed_form(k, i).unwrap();
                let denom = cf.abs().max(1e-12);
                assert!(
                    (quad - cf).abs() / denom < 1e-6,
                    "i={i} k={k}: quad {quad} vs cf {cf}"
                );
            }
        }
    }

    #[test]
    fn power_exceedance_agrees_with_closed_form() {
        let m = model();
        for &c in &[0.5, 2.0 / 3.0] {
            let base = m.mean(2);
            for &mult in &[0.8, 1.0, 1.05] {
                let target = (mult * base).powf(c);
                let quad = m.power_exceedance(2, c, target).unwrap();
                let cf = m.power_exceedance_closed_form(2, c, target).unwrap();
                assert!(
                    (quad - cf).abs() / cf.abs().max(1e-12) < 1e-6,
                    "c={c} mult={mult}: {quad} vs {cf}"
                );
            }
        }
    }

    #[test]
    fn level_shift_scales_quantiles() {
        let m = model();
        let scaled = m.with_level(0.0176);
        for &u in &[0.2, 0.5, 0.9] {
            let a = m.marginal_quantile(1, u).unwrap();
            let b = scaled.marginal_quantile(1, u).unwrap();
            assert!((b / a - 2.0).abs() < 1e-12);
        }
    }
}
