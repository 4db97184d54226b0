//! Four-parameter transformed-normal marginals: asinh((q − α)/β) ~ N(μ, σ²)
//! per monitoring date.

use super::{ConditioningTimes, MortalityModel};
use crate::error::{Error, Result};
use crate::numerics::{
    integrate, std_normal_cdf, std_normal_pdf, std_normal_quantile, Interval,
};

/// Per-date parameter row.
#[derive(Clone, Copy, Debug)]
pub struct SuRow {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug)]
pub struct JohnsonSuModel {
    pub rate: f64,
    /// Level the fitted rows correspond to; `with_level` rescales from here.
    pub base_level: f64,
    pub level: f64,
    rows: Vec<SuRow>,
    dates: Vec<f64>,
    label: String,
}

const Z_MAX: f64 = 8.0;

impl JohnsonSuModel {
    pub fn new(
        rate: f64,
        base_level: f64,
        rows: Vec<SuRow>,
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
        if rows.iter().any(|r| !(r.beta > 0.0 && r.sigma > 0.0)) {
            return Err(Error::Config("rows require beta > 0 and sigma > 0".into()));
        }
        Ok(JohnsonSuModel {
            rate,
            base_level,
            level: base_level,
            rows,
            dates,
            label: label.to_string(),
        })
    }

    pub fn rows(&self) -> &[SuRow] {
        &self.rows
    }

    /// Rescale the index distribution to a new level: q scales linearly, so
    /// α and β pick up the factor level/base.
    pub fn with_level(&self, level: f64) -> Self {
        let f = level / self.base_level;
        let rows = self
            .rows
            .iter()
            .map(|r| SuRow {
                alpha: r.alpha * f,
                beta: r.beta * f,
                ..*r
            })
            .collect();
        JohnsonSuModel {
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

    /// Closed-form E[(q_i − K)⁺]; the independent counterpart of the
    /// quadrature route used by [`MortalityModel::exceedance`].
    pub fn exceedance_closed_form(&self, strike: f64, i: usize) -> f64 {
        su_exceedance_closed_form(&self.rows[i], strike)
    }

    fn quantile_z(&self, i: usize, z: f64) -> f64 {
        let r = &self.rows[i];
        r.alpha + r.beta * (r.mu + r.sigma * z).sinh()
    }

    fn z_of(&self, i: usize, x: f64) -> f64 {
        let r = &self.rows[i];
        (((x - r.alpha) / r.beta).asinh() - r.mu) / r.sigma
    }
}

impl MortalityModel for JohnsonSuModel {
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
        std_normal_cdf(self.z_of(i, x))
    }

    fn marginal_quantile(&self, i: usize, u: f64) -> Result<f64> {
        Ok(self.quantile_z(i, std_normal_quantile(u)?))
    }

    fn marginal_density(&self, i: usize, x: f64) -> f64 {
        let r = &self.rows[i];
        let dx = x - r.alpha;
        std_normal_pdf(self.z_of(i, x)) / (r.sigma * (r.beta * r.beta + dx * dx).sqrt())
    }

    fn mean(&self, i: usize) -> f64 {
        let r = &self.rows[i];
        r.alpha + r.beta * (0.5 * r.sigma * r.sigma).exp() * r.mu.sinh()
    }

    fn exceedance(&self, strike: f64, i: usize) -> Result<f64> {
        // quantile-space quadrature along u = Φ(z); the upper truncation
        // sits 8 standard deviations beyond the e^{σz} tilt of the tail
        let z_hi = Z_MAX + self.rows[i].sigma;
        let z_lo = self.z_of(i, strike).max(-z_hi);
        if z_lo >= z_hi {
            return Ok(0.0);
        }
        let f = |z: f64| (self.quantile_z(i, z) - strike) * std_normal_pdf(z);
        let v = integrate(f, Interval::new(z_lo, z_hi)?, 1e-9)
            .map_err(|e| e.in_context(format!("Su exceedance at date {i}")))?;
        Ok(v.max(0.0))
    }

    fn power_exceedance(&self, i: usize, c: f64, m: f64) -> Result<f64> {
        let threshold = m.powf(1.0 / c);
        let z_hi = Z_MAX + c * self.rows[i].sigma;
        let z_lo = self.z_of(i, threshold).max(-z_hi);
        if z_lo >= z_hi {
            return Ok(0.0);
        }
        let f = |z: f64| {
            let q = self.quantile_z(i, z).max(0.0);
            (q.powf(c) - m) * std_normal_pdf(z)
        };
        let v = integrate(f, Interval::new(z_lo, z_hi)?, 1e-9)
            .map_err(|e| e.in_context(format!("Su power exceedance at date {i}")))?;
        Ok(v.max(0.0))
    }

    fn conditioning_times(&self) -> ConditioningTimes {
        ConditioningTimes::DatesOnly
    }
}

fn su_exceedance_closed_form(row: &SuRow, strike: f64) -> f64 {
    let c = (((strike - row.alpha) / row.beta).asinh() - row.mu) / row.sigma;
    let sf = |x: f64| 1.0 - std_normal_cdf(x);
    let half_var = 0.5 * row.sigma * row.sigma;
    (row.alpha - strike) * sf(c)
        + 0.5
            * row.beta
            * ((row.mu + half_var).exp() * sf(c - row.sigma)
                - (-row.mu + half_var).exp() * sf(c + row.sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::preset;
    use crate::models::Model;

    fn model() -> JohnsonSuModel {
        match preset("tsai-su", 0.0).unwrap().model {
            Model::JohnsonSu(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn median_is_alpha_plus_beta_sinh_mu() {
        let m = model();
        let r = m.rows()[0];
        let med = m.marginal_quantile(0, 0.5).unwrap();
        assert!((med - (r.alpha + r.beta * r.mu.sinh())).abs() < 1e-15);
    }

    #[test]
    fn degenerate_beta_limit() {
        let rows = vec![SuRow {
            alpha: 0.008,
            beta: 1e-14,
            mu: 0.5,
            sigma: 0.6,
        }];
        let m = JohnsonSuModel::new(0.0, 0.008, rows, vec![1.0], "su-degenerate").unwrap();
        for &u in &[0.1, 0.5, 0.9] {
            assert!((m.marginal_quantile(0, u).unwrap() - 0.008).abs() < 1e-12);
        }
    }

    #[test]
    fn cdf_quantile_roundtrip() {
        let m = model();
        for i in 0..3 {
            for k in 1..40 {
                let u = k as f64 / 40.0;
                let x = m.marginal_quantile(i, u).unwrap();
                assert!((m.marginal_cdf(i, x) - u).abs() < 1e-10, "i={i} u={u}");
            }
        }
    }

    #[test]
    fn quantile_strictly_increasing() {
        let m = model();
        for i in 0..3 {
            let mut prev = f64::NEG_INFINITY;
            for k in 1..100 {
                let q = m.marginal_quantile(i, k as f64 / 100.0).unwrap();
                assert!(q > prev);
                prev = q;
            }
        }
    }

    #[test]
    fn call_far_strike_vanishes() {
        let m = model();
        let far = m.marginal_quantile(2, 1.0 - 1e-12).unwrap() * 1.001;
        assert!(m.european_call(far, 2).unwrap() < 1e-12);
    }

    #[test]
    fn call_zero_strike_is_discounted_mean() {
        let m = model();
        let v = m.european_call(0.0, 1).unwrap();
        assert!((v - m.mean(1)).abs() < 1e-9 * m.mean(1));
    }

    #[test]
    fn exceedance_matches_closed_form() {
        let m = model();
        for i in 0..3 {
            for &mult in &[0.9, 1.0, 1.3, 1.3667, 1.5] {
                let k = mult * 0.008453;
                let quad = m.exceedance(k, i).unwrap();
                let cf = m.exceedance_closed_form(k, i).max(0.0);
                assert!(
                    (quad - cf).abs() <= 1e-9 * cf.abs().max(1e-12),
                    "i={i} mult={mult}: {quad} vs {cf}"
                );
            }
        }
    }

    #[test]
    fn level_scaling_scales_quantiles() {
        let m = model();
        let scaled = m.with_level(0.012);
        let f = 0.012 / m.base_level;
        for &u in &[0.1, 0.5, 0.95] {
            let a = m.marginal_quantile(1, u).unwrap();
            let b = scaled.marginal_quantile(1, u).unwrap();
            assert!((b - f * a).abs() < 1e-15);
        }
    }
}
