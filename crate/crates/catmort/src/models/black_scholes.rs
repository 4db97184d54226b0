//! Lognormal diffusion of the index: dq = r q dt + σ q dW under the pricing
//! measure, so the discounted index is a martingale and E[q_t] = spot·e^{rt}.

use super::{ConditioningTimes, MortalityModel};
use crate::error::{Error, Result};
use crate::numerics::{std_normal_cdf, std_normal_pdf, std_normal_quantile};

#[derive(Clone, Debug)]
pub struct BlackScholesModel {
    pub spot: f64,
    pub rate: f64,
    pub sigma: f64,
    dates: Vec<f64>,
    label: String,
}

impl BlackScholesModel {
    pub fn new(spot: f64, rate: f64, sigma: f64, dates: Vec<f64>, label: &str) -> Result<Self> {
        if !(spot > 0.0 && sigma > 0.0) {
            return Err(Error::Config(format!(
                "lognormal model requires spot > 0 and sigma > 0, got {spot}, {sigma}"
            )));
        }
        Ok(BlackScholesModel {
            spot,
            rate,
            sigma,
            dates,
            label: label.to_string(),
        })
    }

    pub fn with_spot(&self, spot: f64) -> Self {
        let mut m = self.clone();
        m.spot = spot;
        m
    }

    pub fn with_rate(&self, rate: f64) -> Self {
        let mut m = self.clone();
        m.rate = rate;
        m
    }

    fn log_params(&self, t: f64) -> (f64, f64) {
        (
            self.spot.ln() + (self.rate - 0.5 * self.sigma * self.sigma) * t,
            self.sigma * t.sqrt(),
        )
    }

    pub fn cdf_at(&self, t: f64, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (m, s) = self.log_params(t);
        std_normal_cdf((x.ln() - m) / s)
    }

    pub fn quantile_at_time(&self, t: f64, u: f64) -> Result<f64> {
        let (m, s) = self.log_params(t);
        Ok((m + s * std_normal_quantile(u)?).exp())
    }

    pub fn density_at(&self, t: f64, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let (m, s) = self.log_params(t);
        std_normal_pdf((x.ln() - m) / s) / (s * x)
    }

    /// Undiscounted E[(q_t − K)⁺] (the Black-Scholes call times e^{rt}).
    pub fn exceedance_at_time(&self, strike: f64, t: f64) -> f64 {
        let fwd = self.spot * (self.rate * t).exp();
        if strike <= 0.0 {
            return fwd - strike;
        }
        let s = self.sigma * t.sqrt();
        let d1 = ((self.spot / strike).ln() + (self.rate + 0.5 * self.sigma * self.sigma) * t) / s;
        let d2 = d1 - s;
        fwd * std_normal_cdf(d1) - strike * std_normal_cdf(d2)
    }

    /// Discounted Black-Scholes call price.
    pub fn call_at_time(&self, strike: f64, t: f64) -> f64 {
        (-self.rate * t).exp() * self.exceedance_at_time(strike, t)
    }

    /// E[(q_t^c − m)⁺] for 0 < c ≤ 1; q_t^c is again lognormal.
    pub fn power_exceedance_at_time(&self, t: f64, c: f64, m: f64) -> f64 {
        let (lm, ls) = self.log_params(t);
        let (pm, ps) = (c * lm, c * ls);
        if m <= 0.0 {
            return (pm + 0.5 * ps * ps).exp() - m;
        }
        let d2 = (pm - m.ln()) / ps;
        (pm + 0.5 * ps * ps).exp() * std_normal_cdf(d2 + ps) - m * std_normal_cdf(d2)
    }

    /// Conditional expectation E[q_{t_i} | q_t]: geometric interpolation with
    /// the variance correction before t, martingale growth after t.
    pub fn conditional_mean(&self, t_i: f64, t: f64, q_t: f64) -> f64 {
        if t_i < t {
            let c = t_i / t;
            self.spot
                * (q_t / self.spot).powf(c)
                * (self.sigma * self.sigma * t_i * (t - t_i) / (2.0 * t)).exp()
        } else {
            q_t * (self.rate * (t_i - t)).exp()
        }
    }

    /// Conditional quantile of q_{t_i} given the Brownian driver W_t = w.
    pub fn conditional_quantile_given_w(&self, t_i: f64, t: f64, w: f64, x: f64) -> Result<f64> {
        let z = std_normal_quantile(x)?;
        let drift = (self.rate - 0.5 * self.sigma * self.sigma) * t_i;
        let exponent = if t_i < t {
            drift + self.sigma * (t_i / t) * w + self.sigma * ((t_i / t) * (t - t_i)).sqrt() * z
        } else {
            drift + self.sigma * w + self.sigma * (t_i - t).sqrt() * z
        };
        Ok(self.spot * exponent.exp())
    }
}

impl MortalityModel for BlackScholesModel {
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
        self.cdf_at(self.dates[i], x)
    }
    fn marginal_quantile(&self, i: usize, u: f64) -> Result<f64> {
        self.quantile_at_time(self.dates[i], u)
    }
    fn marginal_density(&self, i: usize, x: f64) -> f64 {
        self.density_at(self.dates[i], x)
    }
    fn mean(&self, i: usize) -> f64 {
        self.spot * (self.rate * self.dates[i]).exp()
    }
    fn exceedance(&self, strike: f64, i: usize) -> Result<f64> {
        Ok(self.exceedance_at_time(strike, self.dates[i]))
    }
    fn power_exceedance(&self, i: usize, c: f64, m: f64) -> Result<f64> {
        Ok(self.power_exceedance_at_time(self.dates[i], c, m))
    }
    fn conditioning_times(&self) -> ConditioningTimes {
        ConditioningTimes::Continuous {
            max: *self.dates.last().unwrap(),
        }
    }
    fn quantile_at(&self, t: f64, u: f64) -> Result<f64> {
        self.quantile_at_time(t, u)
    }
    fn exceedance_at(&self, strike: f64, t: f64) -> Result<f64> {
        Ok(self.exceedance_at_time(strike, t))
    }
    fn power_exceedance_at(&self, t: f64, c: f64, m: f64) -> Result<f64> {
        Ok(self.power_exceedance_at_time(t, c, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, Interval};

    fn model() -> BlackScholesModel {
        BlackScholesModel::new(0.008453, 0.0, 0.0388, vec![1.0, 2.0, 3.0], "bs-test").unwrap()
    }

    #[test]
    fn quantile_median_is_drifted_spot() {
        let m = model().with_rate(0.02);
        let t = 2.0;
        let med = m.quantile_at_time(t, 0.5).unwrap();
        let expect = m.spot * ((m.rate - m.sigma * m.sigma / 2.0) * t).exp();
        assert!((med - expect).abs() < 1e-15);
    }

    #[test]
    fn quantile_degenerate_small_sigma() {
        let m = BlackScholesModel::new(0.008453, 0.01, 1e-12, vec![1.0], "tiny").unwrap();
        for &u in &[0.05, 0.5, 0.95] {
            let q = m.quantile_at_time(1.0, u).unwrap();
            assert!((q - m.spot * (0.01f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn quantile_cdf_roundtrip() {
        let m = model().with_rate(0.035);
        for i in 1..40 {
            let u = i as f64 / 40.0;
            let x = m.quantile_at_time(2.0, u).unwrap();
            assert!((m.cdf_at(2.0, x) - u).abs() < 1e-10);
        }
    }

    #[test]
    fn call_at_zero_strike_is_spot() {
        let m = model().with_rate(0.03);
        assert!((m.call_at_time(0.0, 2.0) - m.spot).abs() < 1e-15);
    }

    #[test]
    fn call_deep_itm() {
        let m = model().with_rate(0.01);
        let k = m.spot * 1e-3;
        let v = m.call_at_time(k, 1.0);
        assert!((v - (m.spot - k * (-0.01f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn call_matches_lognormal_quadrature() {
        let m = model();
        let k = 1.3 * m.spot;
        let t = 1.0;
        // integrate the payoff against the lognormal density in z-space,
        // starting at the exercise threshold so the panel cannot miss the
        // payoff's support
        let (lm, ls) = (m.spot.ln() - 0.5 * m.sigma * m.sigma, m.sigma);
        let z_star = (k.ln() - lm) / ls;
        let f = |z: f64| {
            let q = (lm + ls * z).exp();
            (q - k).max(0.0) * crate::numerics::std_normal_pdf(z)
        };
        let oracle = integrate(f, Interval::new(z_star, 11.0).unwrap(), 1e-11).unwrap();
        let v = m.call_at_time(k, t);
        assert!((v - oracle).abs() < 1e-7 * oracle.max(1e-30), "{v} vs {oracle}");
    }

    #[test]
    fn martingale_property() {
        let m = model().with_rate(0.035);
        for i in 0..3 {
            let disc = (-m.rate * m.dates[i]).exp();
            assert!((disc * m.mean(i) - m.spot).abs() < 4.0 * f64::EPSILON * m.spot);
        }
    }

    #[test]
    fn conditional_mean_branches_agree_at_t() {
        let m = model().with_rate(0.02);
        let q_t = 0.009;
        let a = m.conditional_mean(2.0, 2.0, q_t); // t_i >= t branch
        let b = m.conditional_mean(2.0 - 1e-12, 2.0, q_t); // bridge branch
        assert!((a - q_t).abs() < 1e-18);
        assert!((a - b).abs() < 1e-12 * q_t);
    }

    #[test]
    fn conditional_mean_martingale_consistency() {
        let m = model().with_rate(0.02);
        let q_t = m.spot * (m.rate * 2.0f64).exp();
        let v = m.conditional_mean(3.0, 2.0, q_t);
        assert!((v - m.spot * (m.rate * 3.0f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn conditional_quantile_continuity_and_median() {
        let m = model().with_rate(0.01);
        let w = 0.4;
        // at t_i = t the law degenerates: independent of x
        let a = m.conditional_quantile_given_w(2.0, 2.0, w, 0.25).unwrap();
        let b = m.conditional_quantile_given_w(2.0, 2.0, w, 0.75).unwrap();
        assert!((a - b).abs() < 1e-18);
        // x = 0.5 removes the quantile term
        let med = m.conditional_quantile_given_w(1.0, 2.0, w, 0.5).unwrap();
        let expect = m.spot
            * ((m.rate - m.sigma * m.sigma / 2.0) * 1.0 + m.sigma * 0.5 * w).exp();
        assert!((med - expect).abs() < 1e-15);
    }

    #[test]
    fn power_exceedance_reduces_to_plain() {
        let m = model().with_rate(0.015);
        let k = 1.32 * m.spot;
        let a = m.power_exceedance_at_time(2.0, 1.0, k);
        let b = m.exceedance_at_time(k, 2.0);
        assert!((a - b).abs() < 1e-15);
    }
}
