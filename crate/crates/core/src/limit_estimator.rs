//! Empirical asymptotics: `E_n` and `D_n` series over schedules of `n`,
//! extrapolation of `lim E_n`, the constant `C`, the growth exponent and a
//! convergence-rate report.
//!
//! All fits are plain least squares with equally weighted points.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::k_asymptote;
use crate::error::{Error, Result};
use crate::func_catalog::{to_c, FunctionSpec};
use crate::lemma_checks::check_logconcavity;
use crate::product_engine::{eval_d, eval_e, term_count, ProductParams};

/// `(n, value)` pairs in schedule order.
pub type Series = Vec<(u64, f64)>;

/// A strictly increasing list of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    n_values: Vec<u64>,
}

impl Schedule {
    pub fn new(n_values: Vec<u64>) -> Result<Self> {
        if n_values.is_empty() {
            return Err(Error::InvalidParams("schedule is empty".into()));
        }
        if n_values[0] == 0 || n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("schedule must be strictly increasing positive integers".into()));
        }
        Ok(Self { n_values })
    }

    /// `round(n0 * ratio^i)` for `i = 0..count`.
    pub fn geometric(n0: u64, ratio: f64, count: usize) -> Result<Self> {
        if !(ratio > 1.0) && count > 1 {
            return Err(Error::InvalidParams(format!("ratio must exceed 1, got {ratio}")));
        }
        Self::new((0..count).map(|i| (n0 as f64 * ratio.powi(i as i32)).round() as u64).collect())
    }

    /// `n0, n0 + 1, ..., n1`.
    pub fn consecutive(n0: u64, n1: u64) -> Result<Self> {
        Self::new((n0..=n1).collect())
    }

    /// `1000 * 2^i`, `i = 0..=10`.
    pub fn default_geometric() -> Self {
        Self::geometric(1000, 2.0, 11).expect("valid default schedule")
    }

    pub fn n_values(&self) -> &[u64] {
        &self.n_values
    }

    /// Every scheduled `n` must give a non-empty product.
    pub fn validate_for(&self, template: &ProductParams) -> Result<()> {
        for &n in &self.n_values {
            if term_count(&template.with_n(n)?) < 0 {
                return Err(Error::InvalidParams(format!("n = {n} gives an empty product")));
            }
        }
        Ok(())
    }
}

/// `E_n` along the schedule (`d = 1`, `big_h` a C-function).
pub fn sequence_e(template: &ProductParams, schedule: &Schedule, big_h: &FunctionSpec) -> Result<Series> {
    schedule.n_values().par_iter().map(|&n| Ok((n, eval_e(&template.with_n(n)?, big_h)?.value()))).collect()
}

/// `log D_n` along the schedule.
pub fn sequence_log_d(template: &ProductParams, schedule: &Schedule, h: &FunctionSpec) -> Result<Series> {
    schedule.n_values().par_iter().map(|&n| Ok((n, eval_d(&template.with_n(n)?, h)?.log_value))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// `L + beta / ln n`
    InvLog,
    /// `L + beta / n`
    InvN,
    /// `L + beta * n^-p`, `p` fitted
    Power,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::InvLog, Model::InvN, Model::Power];

    fn basis(self, n: f64, p: f64) -> f64 {
        match self {
            Model::InvLog => 1.0 / n.ln(),
            Model::InvN => 1.0 / n,
            Model::Power => n.powf(-p),
        }
    }

    /// Free parameters of the decay term.
    pub fn decay_parameters(self) -> usize {
        match self {
            Model::Power => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::InvLog => "inv_log",
            Model::InvN => "inv_n",
            Model::Power => "power",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitParams {
    pub level: f64,
    pub coefficient: f64,
    pub power: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// Extrapolated `lim E_n`.
    pub e_infinity: f64,
    /// `e_infinity` times the `K_n` asymptote constant. Plain extrapolation
    /// leaves the scale at one.
    pub c_constant: f64,
    pub model: Model,
    pub fit_params: FitParams,
    pub residual_norm: f64,
    pub n_points: usize,
    /// `e_infinity` clamped to `(0, 1]` for reporting when `a > b`.
    pub e_infinity_reported: f64,
    pub warnings: Vec<String>,
}

// Power exponents searched by the profile fit.
const POWER_MIN: f64 = 0.02;
const POWER_MAX: f64 = 4.0;
const POWER_GRID: usize = 200;

struct LinearFit {
    level: f64,
    coefficient: f64,
    residual_sq: f64,
}

fn linear_fit(xs: &[f64], ys: &[f64], intercept: bool) -> Result<LinearFit> {
    let n = xs.len() as f64;
    let (x_mean, y_mean) =
        if intercept { (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n) } else { (0.0, 0.0) };
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let scale = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(sxx > (1e-12 * scale).powi(2) * n) || !sxx.is_finite() {
        return Err(Error::Fit("degenerate design matrix".into()));
    }
    let coefficient = sxy / sxx;
    let level = y_mean - coefficient * x_mean;
    let residual_sq = xs.iter().zip(ys).map(|(x, y)| (y - level - coefficient * x).powi(2)).sum();
    Ok(LinearFit { level, coefficient, residual_sq })
}

struct ModelFit {
    params: FitParams,
    residual_sq: f64,
}

fn fit_model(ns: &[f64], ys: &[f64], model: Model, intercept: bool) -> Result<ModelFit> {
    let fit_at = |p: f64| -> Result<LinearFit> {
        let xs: Vec<f64> = ns.iter().map(|&n| model.basis(n, p)).collect();
        linear_fit(&xs, ys, intercept)
    };
    if model != Model::Power {
        let f = fit_at(0.0)?;
        return Ok(ModelFit {
            params: FitParams { level: f.level, coefficient: f.coefficient, power: None },
            residual_sq: f.residual_sq,
        });
    }
    // Profile over p: log-spaced scan, then golden-section refinement.
    let ratio = (POWER_MAX / POWER_MIN).ln();
    let grid: Vec<f64> =
        (0..POWER_GRID).map(|i| POWER_MIN * (ratio * i as f64 / (POWER_GRID - 1) as f64).exp()).collect();
    let cost = |p: f64| fit_at(p).map(|f| f.residual_sq).unwrap_or(f64::INFINITY);
    let costs: Vec<f64> = grid.iter().map(|&p| cost(p)).collect();
    let best = (0..grid.len()).min_by(|&i, &j| costs[i].total_cmp(&costs[j])).expect("non-empty grid");
    if !costs[best].is_finite() {
        return Err(Error::Fit("degenerate design matrix".into()));
    }
    let (mut lo, mut hi) = (grid[best.saturating_sub(1)], grid[(best + 1).min(grid.len() - 1)]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - phi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + phi * (hi - lo);
            f2 = cost(x2);
        }
    }
    let mut p = 0.5 * (lo + hi);
    if costs[best] < cost(p) {
        p = grid[best];
    }
    let f = fit_at(p)?;
    Ok(ModelFit {
        params: FitParams { level: f.level, coefficient: f.coefficient, power: Some(p) },
        residual_sq: f.residual_sq,
    })
}

fn unzip(series: &[(u64, f64)]) -> (Vec<f64>, Vec<f64>) {
    series.iter().map(|&(n, v)| (n as f64, v)).unzip()
}

/// Least-squares fit of `value ≈ L + beta * phi(n)` for the chosen model;
/// `L` is the extrapolated limit.
pub fn extrapolate(series: &[(u64, f64)], model: Model) -> Result<LimitEstimate> {
    if series.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {}", series.len())));
    }
    if series.iter().any(|&(n, v)| !(v > 0.0 && v.is_finite()) || n < 2) {
        return Err(Error::Fit("values must be positive and n >= 2".into()));
    }
    let (ns, ys) = unzip(series);
    let fit = fit_model(&ns, &ys, model, true)?;
    let level = fit.params.level;
    Ok(LimitEstimate {
        e_infinity: level,
        c_constant: level,
        model,
        fit_params: fit.params,
        residual_norm: fit.residual_sq.sqrt(),
        n_points: series.len(),
        e_infinity_reported: level,
        warnings: Vec::new(),
    })
}

/// Estimate `C` in `D_n ~ C n^((a-b)/c)` for an S-function `h`.
///
/// The argument scale `d` is absorbed into `h`, then `E_n` for `H = h/x` is
/// extrapolated with the `1/ln n` and `1/n` models and the smaller residual
/// wins.
pub fn estimate_c(template: &ProductParams, h: &FunctionSpec, schedule: &Schedule) -> Result<LimitEstimate> {
    if !h.kind().is_s_like() {
        return Err(Error::KindMismatch { name: h.name().to_owned(), expected: "S", found: h.kind().to_string() });
    }
    let big_h = to_c(&h.rescaled(template.d())?)?;
    estimate_limit(&template.normalized(), &big_h, schedule)
}

/// Same as [`estimate_c`] for a C-function given directly (`d = 1`).
pub fn estimate_limit(template: &ProductParams, big_h: &FunctionSpec, schedule: &Schedule) -> Result<LimitEstimate> {
    estimate_limit_with_series(template, big_h, schedule).map(|(est, _)| est)
}

/// [`estimate_limit`] that also returns the `E_n` series it fitted.
pub fn estimate_limit_with_series(
    template: &ProductParams,
    big_h: &FunctionSpec,
    schedule: &Schedule,
) -> Result<(LimitEstimate, Series)> {
    let (a, b, c, eps) = (template.a(), template.b(), template.c(), template.eps());
    if a == b {
        return Err(Error::Precondition("a and b must differ".into()));
    }
    let concavity = check_logconcavity(big_h, eps, 1000);
    if !concavity.passed {
        return Err(Error::HypothesisViolation(format!(
            "`{}` is not positive and concave on [0, {eps}]",
            big_h.name()
        )));
    }
    schedule.validate_for(template)?;
    let series = sequence_e(template, schedule, big_h)?;
    let mut est = extrapolate_best(&series)?;
    est.c_constant = est.e_infinity * k_asymptote(a, b, c, eps)?.constant;
    if a > b {
        let l = est.e_infinity;
        if l >= 1.0 || l <= 0.0 {
            est.warnings.push(format!("extrapolated limit {l} lies outside (0, 1); reported value clamped"));
            est.e_infinity_reported = l.clamp(f64::MIN_POSITIVE, 1.0);
        }
    }
    Ok((est, series))
}

/// The `1/ln n` or `1/n` extrapolation, whichever has the smaller residual.
pub fn extrapolate_best(series: &[(u64, f64)]) -> Result<LimitEstimate> {
    let by_log = extrapolate(series, Model::InvLog)?;
    let by_n = extrapolate(series, Model::InvN)?;
    Ok(if by_n.residual_norm < by_log.residual_norm { by_n } else { by_log })
}

/// Least-squares slope of `log D_n` against `ln n`.
pub fn fit_growth_exponent(series: &[(u64, f64)]) -> Result<f64> {
    if series.len() < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {}", series.len())));
    }
    let lo = series.iter().map(|p| p.0).min().unwrap_or(1).max(1) as f64;
    let hi = series.iter().map(|p| p.0).max().unwrap_or(1) as f64;
    if hi / lo < 100.0 {
        return Err(Error::Fit(format!("n must span two decades, got [{lo}, {hi}]")));
    }
    let xs: Vec<f64> = series.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = series.iter().map(|p| p.1).collect();
    Ok(linear_fit(&xs, &ys, true)?.coefficient)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub model: Model,
    pub coefficient: f64,
    pub power: Option<f64>,
    pub residual_sum: f64,
    pub residual_norm: f64,
    /// `|E_n - e_inf| - fitted` per point, in series order.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelLimit {
    pub model: Model,
    pub e_infinity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Agreement {
    pub first: Model,
    pub second: Model,
    pub relative_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub e_infinity: f64,
    pub n_values: Vec<u64>,
    /// The distances `|E_n - e_infinity|` are all negligible.
    pub zero_variation: bool,
    pub weighting: &'static str,
    /// One decay fit `|E_n - e_inf| ≈ beta * phi(n)` per model.
    pub fits: Vec<DecayFit>,
    /// Best first; residuals within 1e-6 of the data norm count as ties and
    /// go to the model with fewer parameters.
    pub ranking: Vec<Model>,
    pub limits: Vec<ModelLimit>,
    pub agreement: Vec<Agreement>,
}

const TIE_TOLERANCE: f64 = 1e-6;
const ZERO_VARIATION: f64 = 1e-15;

fn rank(fits: &[DecayFit], scale: f64) -> Vec<Model> {
    let mut remaining: Vec<&DecayFit> = fits.iter().collect();
    let mut ranking = Vec::with_capacity(fits.len());
    while !remaining.is_empty() {
        let best = remaining.iter().map(|f| f.residual_norm).fold(f64::INFINITY, f64::min);
        let tol = TIE_TOLERANCE * scale;
        let (idx, _) = remaining
            .iter()
            .enumerate()
            .filter(|(_, f)| f.residual_norm <= best + tol)
            .min_by_key(|(_, f)| f.model.decay_parameters())
            .expect("at least one candidate");
        ranking.push(remaining.remove(idx).model);
    }
    ranking
}

/// Fits `|E_n - e_infinity|` with each decay model and ranks them. The
/// ranking is reported, not judged.
pub fn fit_convergence_rate(series: &[(u64, f64)], e_infinity: f64) -> Result<ConvergenceReport> {
    if series.len() < 6 {
        return Err(Error::Fit(format!("need at least 6 points, got {}", series.len())));
    }
    let (ns, values) = unzip(series);
    let dist: Vec<f64> = values.iter().map(|v| (v - e_infinity).abs()).collect();
    let norm = dist.iter().map(|d| d * d).sum::<f64>().sqrt();
    let zero_variation = dist.iter().all(|&d| d <= ZERO_VARIATION * e_infinity.abs().max(1.0));

    let mut fits = Vec::with_capacity(3);
    for model in Model::ALL {
        let params = if zero_variation {
            FitParams { level: 0.0, coefficient: 0.0, power: (model == Model::Power).then_some(1.0) }
        } else {
            fit_model(&ns, &dist, model, false)?.params
        };
        let residuals: Vec<f64> = ns
            .iter()
            .zip(&dist)
            .map(|(&n, &y)| y - params.coefficient * model.basis(n, params.power.unwrap_or(0.0)))
            .collect();
        let residual_sum: f64 = residuals.iter().map(|r| r * r).sum();
        fits.push(DecayFit {
            model,
            coefficient: params.coefficient,
            power: params.power,
            residual_sum,
            residual_norm: residual_sum.sqrt(),
            residuals,
        });
    }
    let ranking = rank(&fits, norm);

    let mut limits = Vec::with_capacity(3);
    for model in Model::ALL {
        let e = match extrapolate(series, model) {
            Ok(est) => est.e_infinity,
            Err(_) if zero_variation => e_infinity,
            Err(e) => return Err(e),
        };
        limits.push(ModelLimit { model, e_infinity: e });
    }
    let mut agreement = Vec::with_capacity(3);
    for i in 0..limits.len() {
        for j in i + 1..limits.len() {
            let (x, y) = (limits[i].e_infinity, limits[j].e_infinity);
            agreement.push(Agreement {
                first: limits[i].model,
                second: limits[j].model,
                relative_difference: (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE),
            });
        }
    }
    Ok(ConvergenceReport {
        e_infinity,
        n_values: series.iter().map(|p| p.0).collect(),
        zero_variation,
        weighting: "equal",
        fits,
        ranking,
        limits,
        agreement,
    })
}
