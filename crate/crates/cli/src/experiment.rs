//! Turns an [`ExperimentConfig`] into validated parameters and functions.

use asymprod::func_catalog::{find_epsilon, to_c, DEFAULT_SCAN_RESOLUTION};
use asymprod::limit_estimator::Schedule;
use asymprod::{FunctionSpec, ProductParams};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::expr::resolve_function;

/// The function under study and its normalized C-side counterpart.
pub struct Functions {
    /// As given: an S- or C-function with argument scale `d` still applied
    /// by the products.
    pub h: FunctionSpec,
    /// `x ↦ h(d x) / x` for S-like `h`, `x ↦ h(d x)` for C-like `h`.
    pub big_h: FunctionSpec,
}

impl Functions {
    pub fn load(cfg: &ExperimentConfig) -> Result<Self, CliError> {
        let h = resolve_function(cfg.function()?)?;
        let scaled = h.rescaled(cfg.d)?;
        let big_h = if h.kind().is_s_like() {
            to_c(&scaled)?
        } else if h.kind().is_c_like() {
            scaled
        } else {
            return Err(CliError::Config(format!("`{}` is neither an S- nor a C-function", h.name())));
        };
        Ok(Self { h, big_h })
    }

    pub fn is_s_like(&self) -> bool {
        self.h.kind().is_s_like()
    }
}

pub struct Experiment {
    pub cfg: ExperimentConfig,
    pub functions: Functions,
    /// `(a, b, c, d, eps, n0)`.
    pub template: ProductParams,
    pub eps_auto: bool,
}

/// The cutoff: as configured, or the largest admissible one for the
/// normalized function, mapped back through `d`.
pub fn resolve_eps(cfg: &ExperimentConfig, functions: Option<&Functions>) -> Result<(f64, bool), CliError> {
    if let Some(eps) = cfg.eps {
        return Ok((eps, false));
    }
    let (_, _, c) = cfg.shifts()?;
    let functions = functions.ok_or_else(|| CliError::Config("`eps` is required without a function".into()))?;
    Ok((find_epsilon(&functions.big_h, c, DEFAULT_SCAN_RESOLUTION)? * cfg.d, true))
}

pub fn build_params(cfg: &ExperimentConfig, eps: f64) -> Result<ProductParams, CliError> {
    let (a, b, c) = cfg.shifts()?;
    let p = if cfg.compat_override {
        ProductParams::with_compat_override(a, b, c, cfg.d, eps, cfg.n0.max(1))?
    } else {
        ProductParams::new(a, b, c, cfg.d, eps, cfg.n0.max(1))?
    };
    Ok(p)
}

impl Experiment {
    pub fn load(cfg: ExperimentConfig) -> Result<Self, CliError> {
        let functions = Functions::load(&cfg)?;
        let (eps, eps_auto) = resolve_eps(&cfg, Some(&functions))?;
        let template = build_params(&cfg, eps)?;
        Ok(Self { cfg, functions, template, eps_auto })
    }

    /// The configured schedule, checked to give a non-empty product at
    /// every `n`.
    pub fn schedule(&self) -> Result<Schedule, CliError> {
        let schedule = Schedule::geometric(self.cfg.n0, self.cfg.ratio, self.cfg.count)?;
        schedule.validate_for(&self.template)?;
        Ok(schedule)
    }

    /// Parameters with `d` absorbed: pair with `functions.big_h`.
    pub fn normalized(&self) -> ProductParams {
        self.template.normalized()
    }
}
