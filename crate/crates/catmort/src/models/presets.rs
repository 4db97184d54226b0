//! Named model presets shipped with the engine, with matching contract terms.

use super::{BlackScholesModel, JohnsonSuModel, LgRow, LogGammaModel, Model, SuRow};
use crate::contract::BondTerms;
use crate::error::{Error, Result};

/// A model preset together with the contract it is quoted against.
#[derive(Clone, Debug)]
pub struct PresetSpec {
    pub model: Model,
    pub terms: BondTerms,
}

pub fn preset_names() -> &'static [&'static str] {
    &["lin2007", "tsai-su", "cheng-lg"]
}

/// Look up a named preset at the given risk-free rate.
///
/// * `lin2007` — lognormal diffusion, level 0.008453, σ = 0.0388.
/// * `tsai-su` — per-year Johnson-Su marginals at level 0.008453.
/// * `cheng-lg` — per-year log-gamma marginals at level 0.0088.
pub fn preset(name: &str, rate: f64) -> Result<PresetSpec> {
    let dates = vec![1.0, 2.0, 3.0];
    match name {
        "lin2007" => {
            let q0 = 0.008453;
            Ok(PresetSpec {
                model: Model::BlackScholes(BlackScholesModel::new(
                    q0,
                    rate,
                    0.0388,
                    dates,
                    "lin2007",
                )?),
                terms: BondTerms::swiss_re_2003(q0, rate),
            })
        }
        "tsai-su" => {
            let q0 = 0.008453;
            let rows = vec![
                SuRow {
                    alpha: 0.008399,
                    beta: 0.000298,
                    mu: 0.70780,
                    sigma: 0.67281,
                },
                SuRow {
                    alpha: 0.008169,
                    beta: 0.000613,
                    mu: 0.58728,
                    sigma: 0.50654,
                },
                SuRow {
                    alpha: 0.007905,
                    beta: 0.000904,
                    mu: 0.58743,
                    sigma: 0.42218,
                },
            ];
            Ok(PresetSpec {
                model: Model::JohnsonSu(JohnsonSuModel::new(rate, q0, rows, dates, "tsai-su")?),
                terms: BondTerms::swiss_re_2003(q0, rate),
            })
        }
        "cheng-lg" => {
            let q0 = 0.0088;
            let rows = vec![
                LgRow {
                    p: 61.6326,
                    a: 0.0103,
                    mu: -5.2452,
                    sigma: 7.4e-5,
                },
                LgRow {
                    p: 64.2902,
                    a: 0.0098,
                    mu: -5.4600,
                    sigma: 9.5e-5,
                },
                LgRow {
                    p: 71.8574,
                    a: 0.0080,
                    mu: -5.7238,
                    sigma: 9.4e-5,
                },
            ];
            Ok(PresetSpec {
                model: Model::LogGamma(LogGammaModel::new(rate, q0, rows, dates, "cheng-lg")?),
                terms: BondTerms::swiss_re_2003(q0, rate),
            })
        }
        other => Err(Error::Config(format!(
            "unknown preset '{other}'; available: {}",
            preset_names().join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::MortalityModel;

    #[test]
    fn presets_resolve() {
        for name in preset_names() {
            let p = preset(name, 0.02).unwrap();
            assert_eq!(p.model.rate(), 0.02);
            assert_eq!(p.model.dates(), &[1.0, 2.0, 3.0]);
        }
        assert!(preset("nope", 0.0).is_err());
    }

    #[test]
    fn terms_match_contract_structure() {
        let p = preset("lin2007", 0.035).unwrap();
        assert_eq!(p.terms.k1, 1.3);
        assert_eq!(p.terms.k2, 1.5);
        assert!((p.terms.tranche_scale() - 5.0).abs() < 1e-12);
        assert_eq!(p.terms.maturity(), 3.0);
    }
}
