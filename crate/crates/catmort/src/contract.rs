//! Cash-flow mechanics of principal-at-risk mortality bonds: index
//! construction, tranche loss, principal payoff and its Asian-option form,
//! the coupon leg, and the put-call parity constant linking the bond to its
//! call counterpart.

use crate::error::{Error, Result};
use crate::models::MortalityModel;
use serde::Serialize;
use std::collections::BTreeMap;

/// Contract descriptor.
///
/// `q0` is the contract's reference index level (the level the trigger and
/// exhaustion multiples are struck against, and the strike of the Asian-put
/// reformulation). The model's own starting level is carried by the model,
/// so "what if mortality starts elsewhere" sweeps leave the contract fixed.
#[derive(Clone, Debug, Serialize)]
pub struct BondTerms {
    pub q0: f64,
    pub k1: f64,
    pub k2: f64,
    pub dates: Vec<f64>,
    pub principal: f64,
    pub rate: f64,
}

impl BondTerms {
    pub fn new(q0: f64, k1: f64, k2: f64, dates: Vec<f64>, principal: f64, rate: f64) -> Result<Self> {
        if !(q0 > 0.0) {
            return Err(Error::Config(format!("q0 must be positive, got {q0}")));
        }
        if !(1.0 < k1 && k1 < k2) {
            return Err(Error::Config(format!(
                "trigger multipliers must satisfy 1 < k1 < k2, got k1={k1}, k2={k2}"
            )));
        }
        if dates.is_empty() {
            return Err(Error::Config("at least one monitoring date required".into()));
        }
        let mut prev = 0.0;
        for &t in &dates {
            if !(t > prev) {
                return Err(Error::Config(format!(
                    "monitoring dates must be strictly increasing and positive, got {dates:?}"
                )));
            }
            prev = t;
        }
        if !(principal > 0.0) {
            return Err(Error::Config(format!("principal must be positive, got {principal}")));
        }
        Ok(BondTerms {
            q0,
            k1,
            k2,
            dates,
            principal,
            rate,
        })
    }

    /// Swiss Re 2003 structure: triggers (1.3, 1.5), yearly monitoring over
    /// three years, unit principal.
    pub fn swiss_re_2003(q0: f64, rate: f64) -> Self {
        BondTerms::new(q0, 1.3, 1.5, vec![1.0, 2.0, 3.0], 1.0, rate).unwrap()
    }

    pub fn maturity(&self) -> f64 {
        *self.dates.last().unwrap()
    }

    pub fn n_dates(&self) -> usize {
        self.dates.len()
    }

    /// Tranche scale 1/(k2 - k1); equals 5 for the (1.3, 1.5) structure.
    pub fn tranche_scale(&self) -> f64 {
        1.0 / (self.k2 - self.k1)
    }

    /// Payoff normalization D = C / q0.
    pub fn d_factor(&self) -> f64 {
        self.principal / self.q0
    }
}

/// Per-year principal loss fraction.
pub fn loss_ratio(q: f64, terms: &BondTerms) -> f64 {
    let lo = terms.k1 * terms.q0;
    let hi = terms.k2 * terms.q0;
    if q <= lo {
        0.0
    } else if q <= hi {
        (q - lo) / (hi - lo)
    } else {
        1.0
    }
}

/// Tranche spread S_i = (q - k1 q0)^+ / (k2 - k1); the 5(q - 1.3 q0)^+ leg
/// for the Swiss Re multipliers. Nonnegative and convex in q.
pub fn asian_spread(q: f64, terms: &BondTerms) -> f64 {
    terms.tranche_scale() * (q - terms.k1 * terms.q0).max(0.0)
}

/// Principal returned at maturity, loss-ratio form: C (1 - Σ L_i)^+.
pub fn principal_payoff(path: &[f64], terms: &BondTerms) -> Result<f64> {
    if path.len() != terms.n_dates() {
        return Err(Error::Data(format!(
            "path length {} does not match {} monitoring dates",
            path.len(),
            terms.n_dates()
        )));
    }
    let total: f64 = path.iter().map(|&q| loss_ratio(q, terms)).sum();
    Ok(terms.principal * (1.0 - total).max(0.0))
}

/// Principal returned at maturity, Asian-put form: D (q0 - Σ S_i)^+.
/// Agrees with [`principal_payoff`] on every path.
pub fn principal_payoff_asian(path: &[f64], terms: &BondTerms) -> Result<f64> {
    if path.len() != terms.n_dates() {
        return Err(Error::Data(format!(
            "path length {} does not match {} monitoring dates",
            path.len(),
            terms.n_dates()
        )));
    }
    let spread: f64 = path.iter().map(|&q| asian_spread(q, terms)).sum();
    Ok(terms.d_factor() * (terms.q0 - spread).max(0.0))
}

/// Call-counterpart payoff D (Σ S_i - q0)^+ on one path.
pub fn call_counterpart_payoff(path: &[f64], terms: &BondTerms) -> Result<f64> {
    if path.len() != terms.n_dates() {
        return Err(Error::Data(format!(
            "path length {} does not match {} monitoring dates",
            path.len(),
            terms.n_dates()
        )));
    }
    let spread: f64 = path.iter().map(|&q| asian_spread(q, terms)).sum();
    Ok(terms.d_factor() * (spread - terms.q0).max(0.0))
}

/// Quarterly coupon leg: LIBOR plus a fixed spread, principal share in
/// the final flow.
#[derive(Clone, Debug)]
pub struct CouponLeg {
    pub spread: f64,
    pub libor: Vec<f64>,
    pub frequency: u32,
}

impl CouponLeg {
    pub fn new(spread: f64, libor: Vec<f64>, frequency: u32) -> Result<Self> {
        if frequency == 0 {
            return Err(Error::Config("coupon frequency must be positive".into()));
        }
        if libor.iter().any(|&x| x < 0.0) || spread < 0.0 {
            return Err(Error::Config("coupon rates must be nonnegative".into()));
        }
        Ok(CouponLeg {
            spread,
            libor,
            frequency,
        })
    }
}

/// Discounted coupon cash flows with nominal per-period compounding,
/// the final flow carrying `expected_principal_fraction` of the principal.
pub fn coupon_leg_value(
    leg: &CouponLeg,
    terms: &BondTerms,
    expected_principal_fraction: f64,
) -> Result<f64> {
    let m = (terms.maturity() * leg.frequency as f64).round() as usize;
    if leg.libor.len() != m {
        return Err(Error::Config(format!(
            "expected {m} per-quarter rates for a {}-year bond at frequency {}, got {}",
            terms.maturity(),
            leg.frequency,
            leg.libor.len()
        )));
    }
    if !(0.0..=1.0).contains(&expected_principal_fraction) {
        return Err(Error::Config(format!(
            "expected principal fraction must lie in [0,1], got {expected_principal_fraction}"
        )));
    }
    let per = 1.0 + terms.rate / leg.frequency as f64;
    let mut value = 0.0;
    for (idx, li) in leg.libor.iter().enumerate() {
        let mut flow = (leg.spread + li) / leg.frequency as f64 * terms.principal;
        if idx + 1 == m {
            flow += expected_principal_fraction * terms.principal;
        }
        value += flow / per.powi(idx as i32 + 1);
    }
    Ok(value)
}

/// Put-call parity constant G = D e^{-rT} (scale · Σ e^{r t_i} C(k1 q0, t_i) - q0).
///
/// One constant per (model, terms) pair; every bound in a suite shares it.
pub fn parity_adjustment_g(model: &dyn MortalityModel, terms: &BondTerms) -> Result<f64> {
    let r = terms.rate;
    let t_mat = terms.maturity();
    let mut acc = 0.0;
    for i in 0..terms.n_dates() {
        let call = model
            .european_call(terms.k1 * terms.q0, i)
            .map_err(|e| e.in_context(format!("parity call at date {i}")))?;
        acc += (r * terms.dates[i]).exp() * call;
    }
    Ok(terms.d_factor() * (-r * t_mat).exp() * (terms.tranche_scale() * acc - terms.q0))
}

/// Transform a call-side bound into a bond-side bound: (value - G)^+.
pub fn call_to_put_bound(call_side_value: f64, g: f64) -> f64 {
    (call_side_value - g).max(0.0)
}

// ---------------------------------------------------------------------------
// Mortality index construction
// ---------------------------------------------------------------------------

/// Scale convention of raw mortality rates fed to the index builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateScale {
    PerUnit,
    Per100k,
}

/// Country / age-band / gender weight table for the composite index.
#[derive(Clone, Debug)]
pub struct IndexWeights {
    pub country_weights: Vec<(String, f64)>,
    pub age_weights: Vec<(String, f64)>,
    pub gender_male: f64,
    pub gender_female: f64,
    pub scale: RateScale,
}

impl IndexWeights {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("index weights: {what}")));
        if self.country_weights.is_empty() || self.age_weights.is_empty() {
            return bad("country and age weight lists must be non-empty");
        }
        if self
            .country_weights
            .iter()
            .chain(self.age_weights.iter())
            .any(|(_, w)| *w < 0.0)
            || self.gender_male < 0.0
            || self.gender_female < 0.0
        {
            return bad("weights must be nonnegative");
        }
        let cs: f64 = self.country_weights.iter().map(|(_, w)| w).sum();
        let as_: f64 = self.age_weights.iter().map(|(_, w)| w).sum();
        if (cs - 1.0).abs() > 1e-9 {
            return bad(&format!("country weights sum to {cs}, expected 1"));
        }
        if (as_ - 1.0).abs() > 1e-9 {
            return bad(&format!("age weights sum to {as_}, expected 1"));
        }
        if (self.gender_male + self.gender_female - 1.0).abs() > 1e-9 {
            return bad("gender weights must sum to 1");
        }
        Ok(())
    }

    /// The 2003 Swiss Re composition: US 70%, UK 15%, France 7.5%, Italy 5%,
    /// Switzerland 2.5%; male 65%, female 35%; a single aggregate age band
    /// (the per-band composition was not published).
    pub fn swiss_re_2003() -> Self {
        IndexWeights {
            country_weights: vec![
                ("US".into(), 0.70),
                ("UK".into(), 0.15),
                ("France".into(), 0.075),
                ("Italy".into(), 0.05),
                ("Switzerland".into(), 0.025),
            ],
            age_weights: vec![("all".into(), 1.0)],
            gender_male: 0.65,
            gender_female: 0.35,
            scale: RateScale::PerUnit,
        }
    }
}

/// Raw rate table keyed by (country, age_band, gender), gender in
/// {"male", "female"}.
pub type RateTable = BTreeMap<(String, String, String), f64>;

/// Composite index level: Σ_j C_j Σ_k A_k (G^m q^m + G^f q^f), returned on
/// the per-unit scale regardless of the input convention.
pub fn build_index(rates: &RateTable, weights: &IndexWeights) -> Result<f64> {
    weights.validate()?;
    let factor = match weights.scale {
        RateScale::PerUnit => 1.0,
        RateScale::Per100k => 1e-5,
    };
    let mut index = 0.0;
    for (country, cw) in &weights.country_weights {
        let mut per_country = 0.0;
        for (age, aw) in &weights.age_weights {
            let male = rates
                .get(&(country.clone(), age.clone(), "male".to_string()))
                .ok_or_else(|| Error::Data(format!("missing rate cell ({country}, {age}, male)")))?;
            let female = rates
                .get(&(country.clone(), age.clone(), "female".to_string()))
                .ok_or_else(|| {
                    Error::Data(format!("missing rate cell ({country}, {age}, female)"))
                })?;
            per_country += aw * (weights.gender_male * male + weights.gender_female * female);
        }
        index += cw * per_country;
    }
    Ok(index * factor)
}

/// Parse a rate CSV with the exact header `country,age_band,gender,rate`.
pub fn parse_rates_csv(text: &str) -> Result<RateTable> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Data("empty rates file".into()))?;
    let cols: Vec<&str> = header.split(',').map(|s| s.trim()).collect();
    if cols != ["country", "age_band", "gender", "rate"] {
        return Err(Error::Data(format!(
            "rates CSV header must be 'country,age_band,gender,rate', got '{header}'"
        )));
    }
    let mut table = RateTable::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(|s| s.trim()).collect();
        if fields.len() != 4 {
            return Err(Error::Data(format!(
                "rates CSV line {}: expected 4 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let gender = fields[2].to_ascii_lowercase();
        if gender != "male" && gender != "female" {
            return Err(Error::Data(format!(
                "rates CSV line {}: gender must be male or female, got '{}'",
                lineno + 2,
                fields[2]
            )));
        }
        let rate: f64 = fields[3].parse().map_err(|_| {
            Error::Data(format!(
                "rates CSV line {}: bad rate '{}'",
                lineno + 2,
                fields[3]
            ))
        })?;
        table.insert((fields[0].to_string(), fields[1].to_string(), gender), rate);
    }
    Ok(table)
}

/// Parse a flat key-value weights config:
///
/// ```text
/// scale = per_unit
/// country.US = 0.70
/// age.all = 1.0
/// gender.male = 0.65
/// gender.female = 0.35
/// ```
pub fn parse_weights_config(text: &str) -> Result<IndexWeights> {
    let mut countries = Vec::new();
    let mut ages = Vec::new();
    let mut male = None;
    let mut female = None;
    let mut scale = RateScale::PerUnit;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("weights config line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        let parse_w = || -> Result<f64> {
            value.parse().map_err(|_| {
                Error::Config(format!(
                    "weights config line {}: bad number '{value}'",
                    lineno + 1
                ))
            })
        };
        if key == "scale" {
            scale = match value {
                "per_unit" => RateScale::PerUnit,
                "per_100k" => RateScale::Per100k,
                other => {
                    return Err(Error::Config(format!(
                        "weights config line {}: scale must be per_unit or per_100k, got '{other}'",
                        lineno + 1
                    )))
                }
            };
        } else if let Some(name) = key.strip_prefix("country.") {
            countries.push((name.to_string(), parse_w()?));
        } else if let Some(name) = key.strip_prefix("age.") {
            ages.push((name.to_string(), parse_w()?));
        } else if key == "gender.male" {
            male = Some(parse_w()?);
        } else if key == "gender.female" {
            female = Some(parse_w()?);
        } else {
            return Err(Error::Config(format!(
                "weights config line {}: unknown key '{key}'",
                lineno + 1
            )));
        }
    }
    let weights = IndexWeights {
        country_weights: countries,
        age_weights: ages,
        gender_male: male.ok_or_else(|| Error::Config("missing gender.male".into()))?,
        gender_female: female.ok_or_else(|| Error::Config("missing gender.female".into()))?,
        scale,
    };
    weights.validate()?;
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms() -> BondTerms {
        BondTerms::swiss_re_2003(0.008453, 0.0)
    }

    #[test]
    fn loss_ratio_branches() {
        let t = terms();
        assert_eq!(loss_ratio(1.2 * t.q0, &t), 0.0);
        assert!((loss_ratio(1.4 * t.q0, &t) - 0.5).abs() < 1e-14);
        assert_eq!(loss_ratio(1.6 * t.q0, &t), 1.0);
    }

    #[test]
    fn payoff_no_loss() {
        let t = terms();
        let path = vec![t.q0, 1.1 * t.q0, 1.29 * t.q0];
        assert_eq!(principal_payoff(&path, &t).unwrap(), t.principal);
    }

    #[test]
    fn payoff_midpoint_year() {
        let t = terms();
        let path = vec![1.4 * t.q0, t.q0, t.q0];
        assert!((principal_payoff(&path, &t).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn payoff_wipeout_floor() {
        let t = terms();
        let path = vec![1.5 * t.q0, 1.4 * t.q0, 1.31 * t.q0];
        assert_eq!(principal_payoff(&path, &t).unwrap(), 0.0);
    }

    #[test]
    fn payoff_length_mismatch() {
        let t = terms();
        assert!(principal_payoff(&[t.q0], &t).is_err());
    }

    #[test]
    fn asian_spread_values() {
        let t = terms();
        assert_eq!(asian_spread(t.q0, &t), 0.0);
        assert!((asian_spread(1.5 * t.q0, &t) - t.q0).abs() < 1e-17);
        assert!((asian_spread(1.34 * t.q0, &t) - 0.2 * t.q0).abs() < 1e-12 * t.q0);
    }

    #[test]
    fn coupon_leg_zero_rates() {
        let t = terms();
        let leg = CouponLeg::new(0.0, vec![0.0; 12], 4).unwrap();
        assert_eq!(coupon_leg_value(&leg, &t, 1.0).unwrap(), t.principal);
    }

    #[test]
    fn coupon_leg_hand_sum() {
        let t = terms();
        let leg = CouponLeg::new(0.0135, vec![0.0; 12], 4).unwrap();
        let v = coupon_leg_value(&leg, &t, 1.0).unwrap();
        assert!((v - (12.0 * 0.0135 / 4.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn coupon_leg_homogeneous_in_principal() {
        let mut t2 = terms();
        t2.principal = 2.0;
        let leg = CouponLeg::new(0.0135, vec![0.02; 12], 4).unwrap();
        let v1 = coupon_leg_value(&leg, &terms(), 0.7).unwrap();
        let v2 = coupon_leg_value(&leg, &t2, 0.7).unwrap();
        assert!((v2 - 2.0 * v1).abs() < 1e-12);
    }

    #[test]
    fn coupon_leg_wrong_count() {
        let t = terms();
        let leg = CouponLeg::new(0.0135, vec![0.0; 11], 4).unwrap();
        assert!(coupon_leg_value(&leg, &t, 1.0).is_err());
    }

    #[test]
    fn call_to_put_clamps() {
        assert_eq!(call_to_put_bound(0.0, -1.0), 1.0);
        assert_eq!(call_to_put_bound(0.5, 0.5), 0.0);
        assert_eq!(call_to_put_bound(0.5, 1.0), 0.0);
    }

    #[test]
    fn index_constant_field() {
        let w = IndexWeights {
            country_weights: vec![("X".into(), 1.0)],
            age_weights: vec![("a".into(), 1.0)],
            gender_male: 0.65,
            gender_female: 0.35,
            scale: RateScale::PerUnit,
        };
        let mut rates = RateTable::new();
        rates.insert(("X".into(), "a".into(), "male".into()), 100.0);
        rates.insert(("X".into(), "a".into(), "female".into()), 100.0);
        assert!((build_index(&rates, &w).unwrap() - 100.0).abs() < 1e-12);
    }

    #[test]
    fn index_linear_in_rates() {
        let w = IndexWeights::swiss_re_2003();
        let mut rates = RateTable::new();
        for (c, _) in &w.country_weights {
            rates.insert((c.clone(), "all".into(), "male".into()), 0.008);
            rates.insert((c.clone(), "all".into(), "female".into()), 0.006);
        }
        let v1 = build_index(&rates, &w).unwrap();
        for val in rates.values_mut() {
            *val *= 2.0;
        }
        let v2 = build_index(&rates, &w).unwrap();
        assert!((v2 - 2.0 * v1).abs() < 1e-15);
    }

    #[test]
    fn index_hand_expansion() {
        // two countries (0.7, 0.3), one age band, genders (0.65, 0.35),
        // rates m/f = (10,20) and (30,40):
        // 0.7*(0.65*10 + 0.35*20) + 0.3*(0.65*30 + 0.35*40) = 9.45 + 10.05
        let w = IndexWeights {
            country_weights: vec![("A".into(), 0.7), ("B".into(), 0.3)],
            age_weights: vec![("all".into(), 1.0)],
            gender_male: 0.65,
            gender_female: 0.35,
            scale: RateScale::PerUnit,
        };
        let mut rates = RateTable::new();
        rates.insert(("A".into(), "all".into(), "male".into()), 10.0);
        rates.insert(("A".into(), "all".into(), "female".into()), 20.0);
        rates.insert(("B".into(), "all".into(), "male".into()), 30.0);
        rates.insert(("B".into(), "all".into(), "female".into()), 40.0);
        let v = build_index(&rates, &w).unwrap();
        assert!((v - 19.50).abs() < 1e-12);
    }

    #[test]
    fn index_missing_cell_named() {
        let w = IndexWeights::swiss_re_2003();
        let rates = RateTable::new();
        let err = build_index(&rates, &w).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("US") && msg.contains("male"), "{msg}");
    }

    #[test]
    fn weights_sum_checks() {
        assert!(IndexWeights::swiss_re_2003().validate().is_ok());
        let mut w = IndexWeights::swiss_re_2003();
        w.country_weights[0].1 = 0.5;
        assert!(w.validate().is_err());
    }

    #[test]
    fn rates_csv_roundtrip_and_errors() {
        let good = "country,age_band,gender,rate\nUS,all,male,0.009\nUS,all,female,0.007\n";
        let table = parse_rates_csv(good).unwrap();
        assert_eq!(table.len(), 2);
        assert!(parse_rates_csv("country,age,gender,rate\n").is_err());
        assert!(parse_rates_csv("country,age_band,gender,rate\nUS,all,other,1\n").is_err());
    }

    #[test]
    fn per_100k_scaling() {
        let mut w = IndexWeights::swiss_re_2003();
        w.scale = RateScale::Per100k;
        let mut rates = RateTable::new();
        for (c, _) in &w.country_weights {
            rates.insert((c.clone(), "all".into(), "male".into()), 845.3);
            rates.insert((c.clone(), "all".into(), "female".into()), 845.3);
        }
        let v = build_index(&rates, &w).unwrap();
        assert!((v - 0.008453).abs() < 1e-12);
    }
}
