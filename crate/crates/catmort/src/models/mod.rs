//! Marginal (and, for the lognormal diffusion, conditional) laws of the
//! mortality index, with European call pricing on the index — the inputs
//! every bound consumes.

mod black_scholes;
mod config;
mod johnson_su;
mod log_gamma;
mod presets;

pub use black_scholes::BlackScholesModel;
pub use config::load_model_config;
pub use johnson_su::{JohnsonSuModel, SuRow};
pub use log_gamma::{LgRow, LogGammaModel};
pub use presets::{preset, preset_names, PresetSpec};

use crate::error::{Error, Result};

/// Which conditioning times t admit a law of q_t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConditioningTimes {
    /// Any t in (0, max]; the model has a continuous-time law.
    Continuous { max: f64 },
    /// Only the monitoring dates (the marginals are fitted per date).
    DatesOnly,
}

/// Marginal law surface of the mortality index under a pricing measure.
///
/// `exceedance` is the undiscounted E[(q_i − K)⁺]; the European call is its
/// e^{−r t_i}-discounted value, so e^{−r t}·mean(t) equals the spot under
/// the martingale convention of the lognormal model.
pub trait MortalityModel: Send + Sync {
    fn label(&self) -> &str;
    fn dates(&self) -> &[f64];
    fn rate(&self) -> f64;

    fn marginal_cdf(&self, i: usize, x: f64) -> f64;
    fn marginal_quantile(&self, i: usize, u: f64) -> Result<f64>;
    fn marginal_density(&self, i: usize, x: f64) -> f64;
    fn mean(&self, i: usize) -> f64;

    /// E[(q_i − K)⁺], undiscounted.
    fn exceedance(&self, strike: f64, i: usize) -> Result<f64>;

    /// E[(q_i^c − m)⁺] for 0 < c ≤ 1, undiscounted.
    fn power_exceedance(&self, i: usize, c: f64, m: f64) -> Result<f64>;

    /// Discounted European call e^{−r t_i} E[(q_i − K)⁺].
    fn european_call(&self, strike: f64, i: usize) -> Result<f64> {
        Ok((-self.rate() * self.dates()[i]).exp() * self.exceedance(strike, i)?)
    }

    fn conditioning_times(&self) -> ConditioningTimes;

    /// Index of the monitoring date equal to t, for date-grid models.
    fn date_index_of(&self, t: f64) -> Result<usize> {
        self.dates()
            .iter()
            .position(|&d| (d - t).abs() <= 1e-9)
            .ok_or_else(|| {
                Error::Config(format!(
                    "t = {t} is not an admissible conditioning time for {} (monitoring dates only)",
                    self.label()
                ))
            })
    }

    /// Quantile of q_t. Defaults to the date-grid lookup; continuous-time
    /// models override.
    fn quantile_at(&self, t: f64, u: f64) -> Result<f64> {
        let i = self.date_index_of(t)?;
        self.marginal_quantile(i, u)
    }

    /// E[(q_t − K)⁺]. Defaults to the date-grid lookup.
    fn exceedance_at(&self, strike: f64, t: f64) -> Result<f64> {
        let i = self.date_index_of(t)?;
        self.exceedance(strike, i)
    }

    /// E[(q_t^c − m)⁺]. Defaults to the date-grid lookup.
    fn power_exceedance_at(&self, t: f64, c: f64, m: f64) -> Result<f64> {
        let i = self.date_index_of(t)?;
        self.power_exceedance(i, c, m)
    }
}

/// The three shipped model families behind one concrete type, so suites and
/// the CLI can dispatch on the kind where a bound needs more than the
/// common marginal surface.
#[derive(Clone, Debug)]
pub enum Model {
    BlackScholes(BlackScholesModel),
    JohnsonSu(JohnsonSuModel),
    LogGamma(LogGammaModel),
}

impl Model {
    pub fn as_mortality_model(&self) -> &dyn MortalityModel {
        match self {
            Model::BlackScholes(m) => m,
            Model::JohnsonSu(m) => m,
            Model::LogGamma(m) => m,
        }
    }

    /// Re-level the model: the index distribution is scaled so its level
    /// moves from the preset base to `level`, leaving the contract fixed.
    pub fn with_level(&self, level: f64) -> Result<Model> {
        if !(level > 0.0) {
            return Err(Error::Config(format!("level must be positive, got {level}")));
        }
        Ok(match self {
            Model::BlackScholes(m) => Model::BlackScholes(m.with_spot(level)),
            Model::JohnsonSu(m) => Model::JohnsonSu(m.with_level(level)),
            Model::LogGamma(m) => Model::LogGamma(m.with_level(level)),
        })
    }

    pub fn with_rate(&self, rate: f64) -> Model {
        match self {
            Model::BlackScholes(m) => Model::BlackScholes(m.with_rate(rate)),
            Model::JohnsonSu(m) => Model::JohnsonSu(m.with_rate(rate)),
            Model::LogGamma(m) => Model::LogGamma(m.with_rate(rate)),
        }
    }

    pub fn level(&self) -> f64 {
        match self {
            Model::BlackScholes(m) => m.spot,
            Model::JohnsonSu(m) => m.level,
            Model::LogGamma(m) => m.level,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Model::BlackScholes(_) => "black_scholes",
            Model::JohnsonSu(_) => "johnson_su",
            Model::LogGamma(_) => "log_gamma",
        }
    }
}

impl MortalityModel for Model {
    fn label(&self) -> &str {
        self.as_mortality_model().label()
    }
    fn dates(&self) -> &[f64] {
        self.as_mortality_model().dates()
    }
    fn rate(&self) -> f64 {
        self.as_mortality_model().rate()
    }
    fn marginal_cdf(&self, i: usize, x: f64) -> f64 {
        self.as_mortality_model().marginal_cdf(i, x)
    }
    fn marginal_quantile(&self, i: usize, u: f64) -> Result<f64> {
        self.as_mortality_model().marginal_quantile(i, u)
    }
    fn marginal_density(&self, i: usize, x: f64) -> f64 {
        self.as_mortality_model().marginal_density(i, x)
    }
    fn mean(&self, i: usize) -> f64 {
        self.as_mortality_model().mean(i)
    }
    fn exceedance(&self, strike: f64, i: usize) -> Result<f64> {
        self.as_mortality_model().exceedance(strike, i)
    }
    fn power_exceedance(&self, i: usize, c: f64, m: f64) -> Result<f64> {
        self.as_mortality_model().power_exceedance(i, c, m)
    }
    fn conditioning_times(&self) -> ConditioningTimes {
        self.as_mortality_model().conditioning_times()
    }
    fn quantile_at(&self, t: f64, u: f64) -> Result<f64> {
        self.as_mortality_model().quantile_at(t, u)
    }
    fn exceedance_at(&self, strike: f64, t: f64) -> Result<f64> {
        self.as_mortality_model().exceedance_at(strike, t)
    }
    fn power_exceedance_at(&self, t: f64, c: f64, m: f64) -> Result<f64> {
        self.as_mortality_model().power_exceedance_at(t, c, m)
    }
}
