//! Lower and upper price bounds for the call counterpart of a
//! principal-at-risk mortality bond, each mapped through put-call parity to
//! a bond-side bound.
//!
//! All bounds are quoted on the call side first: `P₁ = D e^{-rT} E[(S - q₀)⁺]`
//! with `S` the sum of per-date tranche spreads. The bond-side value is
//! `(call_side - G)⁺` for the shared parity constant G.

mod lg_closed_form;

pub use lg_closed_form::{lg_cross_check, LgCrossCheck};

use crate::contract::{call_to_put_bound, BondTerms};
use crate::error::{Error, Result};
use crate::models::{BlackScholesModel, ConditioningTimes, Model, MortalityModel};
use crate::numerics::{
    integrate_with_budget, optimize_scalar, solve_monotone_root, std_normal_cdf, std_normal_pdf,
    Interval, OptimizeMode, RootConfig,
};
use serde::Serialize;

/// Which bound a [`BoundResult`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    TrivialLower,
    Lower1,
    LowerT2,
    LowerTBs,
    LowerTLg,
    Upper1,
    UpperT1Bs,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::TrivialLower => "trivial_lower",
            BoundKind::Lower1 => "lower_1",
            BoundKind::LowerT2 => "lower_t2",
            BoundKind::LowerTBs => "lower_t_bs",
            BoundKind::LowerTLg => "lower_t_lg",
            BoundKind::Upper1 => "upper_1",
            BoundKind::UpperT1Bs => "upper_t_bs",
        }
    }

    fn order(&self) -> u8 {
        match self {
            BoundKind::TrivialLower => 0,
            BoundKind::Lower1 => 1,
            BoundKind::LowerT2 => 2,
            BoundKind::LowerTBs => 3,
            BoundKind::LowerTLg => 4,
            BoundKind::UpperT1Bs => 5,
            BoundKind::Upper1 => 6,
        }
    }
}

/// One bound value, call side and parity-transformed bond side.
#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub call_side: f64,
    pub put_side: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_x: Option<f64>,
    pub model_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundResult {
    fn new(kind: BoundKind, call_side: f64, g: f64, model_id: &str) -> Self {
        BoundResult {
            kind,
            call_side,
            put_side: call_to_put_bound(call_side, g),
            t_star: None,
            root_x: None,
            model_id: model_id.to_string(),
            note: None,
        }
    }
}

/// Handling of the spread atom at zero in the comonotonic constructions.
///
/// `Literal` solves the quantile-sum equations exactly as the strike
/// transform writes them, ignoring that the per-date spread has positive
/// mass at zero. `Generalized` uses the generalized inverse: allocations are
/// floored at zero and the matching strikes at the trigger. Only the
/// generalized variant is a true stop-loss bound in every regime; the
/// literal variant is what the reference tables contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AtomPolicy {
    Literal,
    Generalized,
}

/// Options shared by a suite run.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Grid size for the conditioning-time searches.
    pub t_grid: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { t_grid: 64 }
    }
}

const ROOT_CFG: RootConfig = RootConfig {
    abs_tol: 1e-13,
    max_iter: 300,
};

/// Expand `hi` until `f(hi) >= target`, then solve on [0, hi].
fn solve_trigger_sum<F: Fn(f64) -> f64>(f: F, target: f64) -> Result<f64> {
    let mut hi = 4.0;
    while f(hi) < target {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Bracket {
                target,
                f_lo: 0.0,
                f_hi: f(1e9),
            });
        }
    }
    solve_monotone_root(f, Interval::new(0.0, hi)?, target, ROOT_CFG)
}

/// Trivial model-free lower bound: only the martingale drift of the index
/// can push spreads above zero.
pub fn trivial_lower(terms: &BondTerms, g: f64, model_id: &str) -> BoundResult {
    let r = terms.rate;
    let sum: f64 = terms
        .dates
        .iter()
        .map(|&t| terms.tranche_scale() * ((r * t).exp() - terms.k1).max(0.0))
        .sum();
    let call = terms.principal * (-r * terms.maturity()).exp() * (sum - 1.0).max(0.0);
    BoundResult::new(BoundKind::TrivialLower, call, g, model_id)
}

/// Lower bound from conditioning on the first monitoring date.
///
/// Root: Σᵢ (e^{r(tᵢ-t₁)} x - k₁)⁺ = k₂ - k₁; the bound is a strip of
/// European calls at maturity t₁ struck at q₀·max(x, k₁e^{-r(tᵢ-t₁)}).
pub fn lower_lb1(model: &dyn MortalityModel, terms: &BondTerms, g: f64) -> Result<BoundResult> {
    let r = terms.rate;
    let t1 = terms.dates[0];
    let target = terms.k2 - terms.k1;
    let growth: Vec<f64> = terms.dates.iter().map(|&t| (r * (t - t1)).exp()).collect();
    let x = solve_trigger_sum(
        |x| growth.iter().map(|&e| (e * x - terms.k1).max(0.0)).sum(),
        target,
    )
    .map_err(|e| e.in_context("lower_lb1 root"))?;

    // value = scale * D * e^{-rT} Σ_i e^{r(t_i - t1)} E[(q_1 - K_i)^+]
    let t_mat = terms.maturity();
    let mut acc = 0.0;
    for &e in &growth {
        let strike = terms.q0 * x.max(terms.k1 / e);
        acc += e * model
            .exceedance(strike, 0)
            .map_err(|err| err.in_context("lower_lb1 call leg"))?;
    }
    let call = terms.tranche_scale() * terms.d_factor() * (-r * t_mat).exp() * acc;
    let mut res = BoundResult::new(BoundKind::Lower1, call, g, model.label());
    res.root_x = Some(x);
    Ok(res)
}

/// Index of the first monitoring date at or after t.
fn j_split(dates: &[f64], t: f64) -> usize {
    dates
        .iter()
        .position(|&d| d >= t - 1e-12)
        .unwrap_or(dates.len())
}

/// Model-independent conditional lower bound at conditioning time t.
///
/// Dates before t enter through a geometric interpolation of the index
/// anchored at the contract base; dates at or after t through the
/// martingale forward. The interpolation leg is integrated in quantile
/// space against the law of q_t.
pub fn lower_lbt2(
    model: &dyn MortalityModel,
    terms: &BondTerms,
    t: f64,
    g: f64,
) -> Result<BoundResult> {
    check_conditioning_time(model, terms, t)?;
    let r = terms.rate;
    let j = j_split(&terms.dates, t);
    let target = terms.k2 - terms.k1;

    let lhs = |x: f64| -> f64 {
        let mut s = 0.0;
        for (i, &ti) in terms.dates.iter().enumerate() {
            if i < j {
                s += (x.powf(ti / t) - terms.k1).max(0.0);
            } else {
                s += (x * (r * (ti - t)).exp() - terms.k1).max(0.0);
            }
        }
        s
    };
    let x = solve_trigger_sum(lhs, target).map_err(|e| e.in_context("lower_lbt2 root"))?;

    let mut acc = 0.0;
    for (i, &ti) in terms.dates.iter().enumerate() {
        if i < j {
            let c = ti / t;
            let m = terms.q0.powf(c) * x.powf(c).max(terms.k1);
            let pe = model
                .power_exceedance_at(t, c, m)
                .map_err(|e| e.in_context(format!("lower_lbt2 interpolation leg {i}")))?;
            acc += terms.q0.powf(1.0 - c) * pe;
        } else {
            let growth = (r * (ti - t)).exp();
            let strike = terms.q0 * x.max(terms.k1 / growth);
            let ex = model
                .exceedance_at(strike, t)
                .map_err(|e| e.in_context(format!("lower_lbt2 forward leg {i}")))?;
            acc += growth * ex;
        }
    }
    let call =
        terms.tranche_scale() * terms.d_factor() * (-r * terms.maturity()).exp() * acc;
    let mut res = BoundResult::new(BoundKind::LowerT2, call, g, model.label());
    res.t_star = Some(t);
    res.root_x = Some(x);
    Ok(res)
}

fn check_conditioning_time(
    model: &dyn MortalityModel,
    terms: &BondTerms,
    t: f64,
) -> Result<()> {
    match model.conditioning_times() {
        ConditioningTimes::Continuous { max } => {
            if !(t > 0.0 && t <= max + 1e-12) {
                return Err(Error::Config(format!(
                    "conditioning time {t} outside (0, {max}]"
                )));
            }
        }
        ConditioningTimes::DatesOnly => {
            model.date_index_of(t)?;
        }
    }
    let _ = terms;
    Ok(())
}

/// Maximize [`lower_lbt2`] over the admissible conditioning times.
pub fn lower_lbt2_max(
    model: &dyn MortalityModel,
    terms: &BondTerms,
    g: f64,
    t_grid: usize,
) -> Result<BoundResult> {
    maximize_over_times(model, terms, t_grid, |t| {
        lower_lbt2(model, terms, t, g)
    })
}

/// Maximize [`lower_lbt2`] over the monitoring dates only, also for models
/// with a continuous conditioning set. This is the convention of the
/// reference tables' conditional-lower-bound columns on level sweeps.
pub fn lower_lbt2_dates_max(
    model: &dyn MortalityModel,
    terms: &BondTerms,
    g: f64,
) -> Result<BoundResult> {
    let mut best: Option<BoundResult> = None;
    for &t in model.dates() {
        let cand = lower_lbt2(model, terms, t, g)?;
        if best.as_ref().map_or(true, |b| cand.call_side > b.call_side) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| Error::Config("no monitoring dates".into()))
}

/// BS-refined conditional lower bound: the interpolation legs use the exact
/// lognormal conditional expectation (variance-corrected bridge), so it
/// dominates the model-independent version at the same t.
pub fn lower_lbt_bs(
    bs: &BlackScholesModel,
    terms: &BondTerms,
    t: f64,
    g: f64,
) -> Result<BoundResult> {
    if !(t > 0.0 && t <= terms.maturity() + 1e-12) {
        return Err(Error::Config(format!(
            "conditioning time {t} outside (0, {}]",
            terms.maturity()
        )));
    }
    let r = terms.rate;
    let sigma = bs.sigma;
    let j = j_split(&terms.dates, t);
    let rho = bs.spot / terms.q0; // model level in units of the contract base

    // bridge variance-correction factors g_i = e^{sigma^2 t_i (t - t_i)/(2t)}
    let bridge_g: Vec<f64> = terms
        .dates
        .iter()
        .map(|&ti| (sigma * sigma * ti * (t - ti) / (2.0 * t)).exp())
        .collect();

    // root in y = q_t / spot
    let lhs = |y: f64| -> f64 {
        let mut s = 0.0;
        for (i, &ti) in terms.dates.iter().enumerate() {
            if i < j {
                s += (rho * bridge_g[i] * y.powf(ti / t) - terms.k1).max(0.0);
            } else {
                s += (rho * y * (r * (ti - t)).exp() - terms.k1).max(0.0);
            }
        }
        s
    };
    let y = solve_trigger_sum(lhs, terms.k2 - terms.k1)
        .map_err(|e| e.in_context("lower_lbt_bs root"))?;

    // lognormal parameters of y = q_t/spot
    let m_log = (r - 0.5 * sigma * sigma) * t;
    let s_log = sigma * t.sqrt();

    let mut acc = 0.0;
    for (i, &ti) in terms.dates.iter().enumerate() {
        if i < j {
            let c = ti / t;
            // E[(y^c - M)^+] with M = max(y*^c, k1/(rho g_i))
            let m_thresh = y.powf(c).max(terms.k1 / (rho * bridge_g[i]));
            let (pm, ps) = (c * m_log, c * s_log);
            let d2 = (pm - m_thresh.ln()) / ps;
            let e1 = (pm + 0.5 * ps * ps).exp() * std_normal_cdf(d2 + ps)
                - m_thresh * std_normal_cdf(d2);
            acc += bs.spot * bridge_g[i] * e1;
        } else {
            let growth = (r * (ti - t)).exp();
            let strike = bs.spot * y.max(terms.k1 / (rho * growth));
            acc += growth * bs.exceedance_at_time(strike, t);
        }
    }
    let call =
        terms.tranche_scale() * terms.d_factor() * (-r * terms.maturity()).exp() * acc;
    let mut res = BoundResult::new(BoundKind::LowerTBs, call, g, bs.label());
    res.t_star = Some(t);
    res.root_x = Some(y * rho);
    Ok(res)
}

/// Maximize [`lower_lbt_bs`] over t in (0, T].
pub fn lower_lbt_bs_max(
    bs: &BlackScholesModel,
    terms: &BondTerms,
    g: f64,
    t_grid: usize,
) -> Result<BoundResult> {
    maximize_over_times(bs, terms, t_grid, |t| lower_lbt_bs(bs, terms, t, g))
}

/// Log-gamma conditional lower bound at a monitoring date: the
/// quadrature-based model-independent bound, relabeled for the suite.
/// The incomplete-gamma closed forms are cross-checked by
/// [`lg_cross_check`].
pub fn lower_lbt_lg(
    lg: &crate::models::LogGammaModel,
    terms: &BondTerms,
    t: f64,
    g: f64,
) -> Result<BoundResult> {
    let mut res = lower_lbt2(lg, terms, t, g)?;
    res.kind = BoundKind::LowerTLg;
    Ok(res)
}

/// Shared scaffolding for the t-searches: a grid over (0, T] augmented with
/// the exact monitoring dates, with golden-section refinement around the
/// best grid cell via [`optimize_scalar`].
fn maximize_over_times<F>(
    model: &dyn MortalityModel,
    terms: &BondTerms,
    t_grid: usize,
    eval: F,
) -> Result<BoundResult>
where
    F: Fn(f64) -> Result<BoundResult>,
{
    match model.conditioning_times() {
        ConditioningTimes::DatesOnly => {
            let mut best: Option<BoundResult> = None;
            for &t in model.dates() {
                let cand = eval(t)?;
                if best.as_ref().map_or(true, |b| cand.call_side > b.call_side) {
                    best = Some(cand);
                }
            }
            best.ok_or_else(|| Error::Config("no admissible conditioning times".into()))
        }
        ConditioningTimes::Continuous { max } => {
            let lo = 1e-4 * max;
            let iv = Interval::new(lo, max)?;
            let f = |t: f64| eval(t).map(|b| b.call_side).unwrap_or(f64::NEG_INFINITY);
            let (mut t_star, mut best_v) =
                optimize_scalar(f, iv, OptimizeMode::Maximize, t_grid.max(2))?;
            for &d in terms.dates.iter().filter(|&&d| d <= max + 1e-12) {
                let v = f(d);
                if v > best_v {
                    best_v = v;
                    t_star = d;
                }
            }
            eval(t_star)
        }
    }
}

/// Comonotonic upper bound from the marginal quantile sum.
///
/// `Literal` solves Σᵢ F⁻¹_{qᵢ}(x) = q₀(k₂-k₁+n·k₁) with unclamped strikes;
/// `Generalized` solves Σᵢ (F⁻¹_{qᵢ}(x) - k₁q₀)⁺ = (k₂-k₁) q₀ and clamps
/// strikes at the trigger (the exact comonotonic stop-loss).
pub fn upper_ub1(
    model: &dyn MortalityModel,
    terms: &BondTerms,
    g: f64,
    policy: AtomPolicy,
) -> Result<BoundResult> {
    let n = terms.n_dates();
    let q0 = terms.q0;
    let trigger = terms.k1 * q0;
    let target = match policy {
        AtomPolicy::Literal => q0 * (terms.k2 - terms.k1 + n as f64 * terms.k1),
        AtomPolicy::Generalized => q0 * (terms.k2 - terms.k1),
    };
    let z_cap = 8.2;
    let sum_at = |z: f64| -> f64 {
        let u = std_normal_cdf(z);
        (0..n)
            .map(|i| {
                let q = model.marginal_quantile(i, u).unwrap_or(f64::NAN);
                match policy {
                    AtomPolicy::Literal => q,
                    AtomPolicy::Generalized => (q - trigger).max(0.0),
                }
            })
            .sum()
    };

    let mut note = None;
    let z = if sum_at(z_cap) < target {
        note = Some("degenerate comonotonic case: quantile sum below target at u -> 1".into());
        z_cap
    } else if sum_at(-z_cap) >= target {
        note = Some("degenerate comonotonic case: quantile sum above target at u -> 0".into());
        -z_cap
    } else {
        solve_monotone_root(sum_at, Interval::new(-z_cap, z_cap)?, target, ROOT_CFG)
            .map_err(|e| e.in_context("upper_ub1 root"))?
    };
    let x = std_normal_cdf(z);

    let r = terms.rate;
    let mut acc = 0.0;
    for i in 0..n {
        let q = model.marginal_quantile(i, x)?;
        let strike = match policy {
            AtomPolicy::Literal => q,
            AtomPolicy::Generalized => q.max(trigger),
        };
        acc += model
            .exceedance(strike, i)
            .map_err(|e| e.in_context(format!("upper_ub1 call leg {i}")))?;
    }
    let call = terms.tranche_scale() * terms.d_factor() * (-r * terms.maturity()).exp() * acc;
    let mut res = BoundResult::new(BoundKind::Upper1, call, g, model.label());
    res.root_x = Some(x);
    res.note = note;
    Ok(res)
}

/// Conditional comonotonic upper bound for the lognormal model at
/// conditioning time t: condition on the Brownian driver W_t, solve the
/// per-node quantile-sum equation, price the legs in closed form, integrate
/// over the Gaussian weight of W_t.
pub fn upper_ubt_bs(
    bs: &BlackScholesModel,
    terms: &BondTerms,
    t: f64,
    g: f64,
    policy: AtomPolicy,
) -> Result<BoundResult> {
    if !(t > 0.0 && t <= terms.maturity() + 1e-12) {
        return Err(Error::Config(format!(
            "conditioning time {t} outside (0, {}]",
            terms.maturity()
        )));
    }
    let r = terms.rate;
    let sigma = bs.sigma;
    let n = terms.n_dates();
    let kappa = terms.q0 / bs.spot; // contract base in units of the model level
    let j = j_split(&terms.dates, t);

    // per-leg conditional-law coefficients: ln(q_i/spot) | W_t = w is
    // N(drift_i + sigma*wcoef_i*w, sigma^2 v_i)
    let mut drift = [0.0f64; 16];
    let mut wcoef = [0.0f64; 16];
    let mut sd = [0.0f64; 16];
    assert!(n <= 16, "more than 16 monitoring dates not supported");
    for (i, &ti) in terms.dates.iter().enumerate() {
        drift[i] = (r - 0.5 * sigma * sigma) * ti;
        if i < j {
            wcoef[i] = ti / t;
            sd[i] = sigma * (ti * (t - ti) / t).sqrt();
        } else {
            wcoef[i] = 1.0;
            sd[i] = sigma * (ti - t).sqrt();
        }
    }
    let trigger = kappa * terms.k1;
    let target = match policy {
        AtomPolicy::Literal => kappa * (terms.k2 - terms.k1 + n as f64 * terms.k1),
        AtomPolicy::Generalized => kappa * (terms.k2 - terms.k1),
    };

    let integrand = |y: f64| -> Result<f64> {
        let w = y * t.sqrt();
        let mut a = [0.0f64; 16];
        for i in 0..n {
            a[i] = drift[i] + sigma * wcoef[i] * w;
        }
        let h = |z: f64| -> f64 {
            (0..n)
                .map(|i| {
                    let q = (a[i] + sd[i] * z).exp();
                    match policy {
                        AtomPolicy::Literal => q,
                        AtomPolicy::Generalized => (q - trigger).max(0.0),
                    }
                })
                .sum()
        };
        // solve h(z) = target on an expanding bracket; below the reachable
        // range the allocation degenerates to the x -> 0 limit
        let mut lo = -64.0;
        let mut hi = 64.0;
        let mut bracketed_below = true;
        while h(lo) >= target {
            lo *= 2.0;
            if lo < -1e7 {
                bracketed_below = false;
                break;
            }
        }
        let z_opt: Option<f64> = if !bracketed_below {
            None
        } else {
            while h(hi) < target {
                hi *= 2.0;
                if hi > 1e7 {
                    return Err(Error::Convergence {
                        iterations: 0,
                        residual: target - h(1e7),
                    }
                    .in_context(format!("upper_ubt_bs root at node w={w}")));
                }
            }
            Some(
                solve_monotone_root(h, Interval::new(lo, hi)?, target, ROOT_CFG)
                    .map_err(|e| e.in_context(format!("upper_ubt_bs root at node w={w}")))?,
            )
        };

        let mut sum = 0.0;
        for i in 0..n {
            let k_i = match z_opt {
                Some(z) => {
                    let q = (a[i] + sd[i] * z).exp();
                    match policy {
                        AtomPolicy::Literal => q,
                        AtomPolicy::Generalized => q.max(trigger),
                    }
                }
                None => match policy {
                    AtomPolicy::Literal => 0.0,
                    AtomPolicy::Generalized => trigger,
                },
            };
            sum += if sd[i] == 0.0 {
                (a[i].exp() - k_i).max(0.0)
            } else if k_i <= 0.0 {
                (a[i] + 0.5 * sd[i] * sd[i]).exp()
            } else {
                let zk = (k_i.ln() - a[i]) / sd[i];
                (a[i] + 0.5 * sd[i] * sd[i]).exp() * std_normal_cdf(sd[i] - zk)
                    - k_i * std_normal_cdf(-zk)
            };
        }
        Ok(sum * std_normal_pdf(y))
    };

    // adaptive integration over the standardized Gaussian weight
    let failure: std::cell::RefCell<Option<Error>> = std::cell::RefCell::new(None);
    let value = integrate_with_budget(
        |y| match integrand(y) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        Interval::new(-8.0, 8.0)?,
        1e-9,
        20_000,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let integral = match value {
        Ok(v) => v,
        Err(Error::Accuracy { estimate, .. }) => estimate,
        Err(e) => return Err(e.in_context("upper_ubt_bs w-integral")),
    };

    let call = terms.tranche_scale()
        * terms.d_factor()
        * bs.spot
        * (-r * terms.maturity()).exp()
        * integral;
    let mut res = BoundResult::new(BoundKind::UpperT1Bs, call, g, bs.label());
    res.t_star = Some(t);
    Ok(res)
}

/// Minimize [`upper_ubt_bs`] over t in (0, T].
pub fn upper_ubt_bs_min(
    bs: &BlackScholesModel,
    terms: &BondTerms,
    g: f64,
    policy: AtomPolicy,
    t_grid: usize,
) -> Result<BoundResult> {
    let max = terms.maturity();
    let iv = Interval::new(1e-4 * max, max)?;
    let f = |t: f64| {
        upper_ubt_bs(bs, terms, t, g, policy)
            .map(|b| b.call_side)
            .unwrap_or(f64::INFINITY)
    };
    let (mut t_star, mut best) = optimize_scalar(f, iv, OptimizeMode::Minimize, t_grid.max(2))?;
    for &d in &terms.dates {
        let v = f(d);
        if v < best {
            best = v;
            t_star = d;
        }
    }
    upper_ubt_bs(bs, terms, t_star, g, policy)
}

/// Every bound applicable to the model kind, sharing one parity constant G,
/// sorted lower-to-upper on the call side.
///
/// Upper bounds in the suite: `upper_1` uses the literal strike transform
/// (the reference-table convention), `upper_t_bs` the generalized one
/// (guaranteed valid). Both policies remain available through the
/// individual operations.
pub fn bound_suite(model: &Model, terms: &BondTerms, cfg: SuiteConfig) -> Result<Vec<BoundResult>> {
    let g = crate::contract::parity_adjustment_g(model.as_mortality_model(), terms)?;
    let label = model.label();
    let mut out = vec![trivial_lower(terms, g, label)];
    out.push(lower_lb1(model.as_mortality_model(), terms, g)?);
    match model {
        Model::BlackScholes(bs) => {
            out.push(lower_lbt_bs_max(bs, terms, g, cfg.t_grid)?);
            out.push(upper_ubt_bs_min(bs, terms, g, AtomPolicy::Generalized, cfg.t_grid)?);
        }
        Model::JohnsonSu(su) => {
            out.push(lower_lbt2_max(su, terms, g, cfg.t_grid)?);
        }
        Model::LogGamma(lg) => {
            out.push(lower_lbt_lg_max(lg, terms, g, cfg.t_grid)?);
        }
    }
    out.push(upper_ub1(
        model.as_mortality_model(),
        terms,
        g,
        AtomPolicy::Literal,
    )?);
    out.sort_by(|a, b| {
        a.call_side
            .partial_cmp(&b.call_side)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.kind.order().cmp(&b.kind.order()))
    });
    Ok(out)
}

/// Maximize [`lower_lbt_lg`] over the monitoring dates.
pub fn lower_lbt_lg_max(
    lg: &crate::models::LogGammaModel,
    terms: &BondTerms,
    g: f64,
    t_grid: usize,
) -> Result<BoundResult> {
    let _ = t_grid;
    let mut best: Option<BoundResult> = None;
    for &t in lg.dates() {
        let cand = lower_lbt_lg(lg, terms, t, g)?;
        if best.as_ref().map_or(true, |b| cand.call_side > b.call_side) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| Error::Config("no admissible conditioning times".into()))
}

/// The parity constant, re-exported next to the bounds that consume it.
pub fn parity_constant(model: &dyn MortalityModel, terms: &BondTerms) -> Result<f64> {
    crate::contract::parity_adjustment_g(model, terms)
}
