//! Flat key-value model configuration files.
//!
//! ```text
//! model = black_scholes        # or johnson_su, log_gamma
//! q0 = 0.008453                # model level (and default contract base)
//! r = 0.035
//! sigma = 0.0388               # black_scholes: scalar; fitted models: list
//! dates = 1, 2, 3
//! # optional contract overrides
//! terms_q0 = 0.008453
//! k1 = 1.3
//! k2 = 1.5
//! principal = 1.0
//! # fitted models use per-date lists:
//! # alpha = ..., beta = ..., mu = ..., sigma = ...   (johnson_su)
//! # p = ..., a = ..., mu = ..., sigma = ...          (log_gamma)
//! ```

use super::{BlackScholesModel, JohnsonSuModel, LgRow, LogGammaModel, Model, SuRow};
use crate::contract::BondTerms;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("config line {}: expected key = value", lineno + 1))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn get_f64(map: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    let raw = map
        .get(key)
        .ok_or_else(|| Error::Config(format!("missing key '{key}'")))?;
    raw.parse()
        .map_err(|_| Error::Config(format!("bad number for '{key}': '{raw}'")))
}

fn get_f64_or(map: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match map.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|_| Error::Config(format!("bad number for '{key}': '{raw}'"))),
    }
}

fn get_list(map: &BTreeMap<String, String>, key: &str) -> Result<Vec<f64>> {
    let raw = map
        .get(key)
        .ok_or_else(|| Error::Config(format!("missing key '{key}'")))?;
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number '{s}' in list '{key}'")))
        })
        .collect()
}

/// Parse a model + terms description from flat key-value text.
pub fn load_model_config(text: &str) -> Result<(Model, BondTerms)> {
    let map = parse_kv(text)?;
    let kind = map
        .get("model")
        .ok_or_else(|| Error::Config("missing key 'model'".into()))?
        .as_str();
    let rate = get_f64_or(&map, "r", 0.0)?;
    let dates = match map.get("dates") {
        Some(_) => get_list(&map, "dates")?,
        None => vec![1.0, 2.0, 3.0],
    };
    let level = get_f64(&map, "q0")?;
    let terms_q0 = get_f64_or(&map, "terms_q0", level)?;
    let k1 = get_f64_or(&map, "k1", 1.3)?;
    let k2 = get_f64_or(&map, "k2", 1.5)?;
    let principal = get_f64_or(&map, "principal", 1.0)?;
    let terms = BondTerms::new(terms_q0, k1, k2, dates.clone(), principal, rate)?;

    let model = match kind {
        "black_scholes" => Model::BlackScholes(BlackScholesModel::new(
            level,
            rate,
            get_f64(&map, "sigma")?,
            dates,
            "config-bs",
        )?),
        "johnson_su" => {
            let alpha = get_list(&map, "alpha")?;
            let beta = get_list(&map, "beta")?;
            let mu = get_list(&map, "mu")?;
            let sigma = get_list(&map, "sigma")?;
            if [alpha.len(), beta.len(), mu.len()].iter().any(|&l| l != sigma.len())
                || sigma.len() != dates.len()
            {
                return Err(Error::Config(
                    "johnson_su lists must all match the number of dates".into(),
                ));
            }
            let rows = (0..dates.len())
                .map(|i| SuRow {
                    alpha: alpha[i],
                    beta: beta[i],
                    mu: mu[i],
                    sigma: sigma[i],
                })
                .collect();
            Model::JohnsonSu(JohnsonSuModel::new(rate, level, rows, dates, "config-su")?)
        }
        "log_gamma" => {
            let p = get_list(&map, "p")?;
            let a = get_list(&map, "a")?;
            let mu = get_list(&map, "mu")?;
            let sigma = get_list(&map, "sigma")?;
            if [p.len(), a.len(), mu.len()].iter().any(|&l| l != sigma.len())
                || sigma.len() != dates.len()
            {
                return Err(Error::Config(
                    "log_gamma lists must all match the number of dates".into(),
                ));
            }
            let rows = (0..dates.len())
                .map(|i| LgRow {
                    p: p[i],
                    a: a[i],
                    mu: mu[i],
                    sigma: sigma[i],
                })
                .collect();
            Model::LogGamma(LogGammaModel::new(rate, level, rows, dates, "config-lg")?)
        }
        other => {
            return Err(Error::Config(format!(
                "unknown model kind '{other}' (black_scholes, johnson_su, log_gamma)"
            )))
        }
    };
    Ok((model, terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::MortalityModel;

    #[test]
    fn bs_config_parses() {
        let text = "model = black_scholes\nq0 = 0.008453\nr = 0.02\nsigma = 0.0388\n";
        let (model, terms) = load_model_config(text).unwrap();
        assert_eq!(model.kind_name(), "black_scholes");
        assert_eq!(model.rate(), 0.02);
        assert_eq!(terms.q0, 0.008453);
    }

    #[test]
    fn su_config_parses() {
        let text = "model = johnson_su\nq0 = 0.008453\nr = 0\ndates = 1,2,3\n\
                    alpha = 0.008399, 0.008169, 0.007905\nbeta = 0.000298, 0.000613, 0.000904\n\
                    mu = 0.70780, 0.58728, 0.58743\nsigma = 0.67281, 0.50654, 0.42218\n";
        let (model, _) = load_model_config(text).unwrap();
        assert_eq!(model.kind_name(), "johnson_su");
    }

    #[test]
    fn errors_are_config_errors() {
        assert!(load_model_config("q0 = 1\n").is_err());
        assert!(load_model_config("model = black_scholes\nq0 = x\nsigma = 0.1\n").is_err());
        assert!(load_model_config("model = weird\nq0 = 1\n").is_err());
    }
}
