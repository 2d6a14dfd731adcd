//! One function per subcommand. Each writes its primary output to `out`
//! (or to `--out` where noted) and returns the process exit status.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use asymprod::asymptotics::{c_upper_bound, k_asymptote};
use asymprod::func_catalog::{catalog, find_epsilon, DEFAULT_SCAN_RESOLUTION};
use asymprod::lemma_checks::{
    check_e_monotone, check_logconcavity, check_lower_bound_at, check_term_monotonicity, check_upper_bound,
    compute_bound_witness, e_series_consecutive, CheckReport, DEFAULT_CONCAVITY_GRID, DEFAULT_WITNESS_GRID,
};
use asymprod::limit_estimator::{
    estimate_limit_with_series, extrapolate_best, fit_convergence_rate, ConvergenceReport, LimitEstimate, Model, Series,
};
use asymprod::product_engine::{eval_d, eval_e, eval_k, term_count};

use crate::config::{ExperimentConfig, Format, Suite};
use crate::error::{CliError, EXIT_CHECK_FAILED, EXIT_OK};
use crate::experiment::{build_params, resolve_eps, Experiment, Functions};
use crate::output::{fmt_float, with_file, write_csv, write_json};

/// Column names of `eval` output, in order.
pub const EVAL_COLUMNS: [&str; 7] = ["n", "m", "log_D", "D", "log_K", "K", "E"];
/// Column names of the series written by `estimate`.
pub const SERIES_COLUMNS: [&str; 4] = ["n", "m", "log_E", "E"];
/// Column names of the residual table written by `convergence`.
pub const RESIDUAL_COLUMNS: [&str; 6] = ["n", "E", "distance", "inv_log", "inv_n", "power"];

/// Sends output to `--out` when given, otherwise to `out`.
fn emit(
    out: &mut dyn Write,
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match path {
        Some(p) => with_file(p, write),
        None => write(out),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub n: u64,
    pub m: i64,
    #[serde(rename = "log_D")]
    pub log_d: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "log_K")]
    pub log_k: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "E")]
    pub e: f64,
}

pub fn eval_rows(exp: &Experiment) -> Result<Vec<EvalRow>, CliError> {
    let schedule = exp.schedule()?;
    let normalized = exp.normalized();
    schedule
        .n_values()
        .par_iter()
        .map(|&n| {
            let p = exp.template.with_n(n)?;
            let dv = eval_d(&p, &exp.functions.h)?;
            let kv = eval_k(&p);
            // S-side: E is its own product of H quotients; C-side: D / K.
            let e = if exp.functions.is_s_like() {
                eval_e(&normalized.with_n(n)?, &exp.functions.big_h)?.value()
            } else {
                (dv.log_value - kv.log_value).exp()
            };
            Ok(EvalRow { n, m: dv.m, log_d: dv.log_value, d: dv.value(), log_k: kv.log_value, k: kv.value(), e })
        })
        .collect()
}

pub fn cmd_eval(cfg: ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let exp = Experiment::load(cfg)?;
    let rows = eval_rows(&exp)?;
    emit(out, exp.cfg.out.as_deref(), |w| match exp.cfg.format {
        Format::Json => write_json(w, &rows),
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.m.to_string(),
                        fmt_float(r.log_d),
                        fmt_float(r.d),
                        fmt_float(r.log_k),
                        fmt_float(r.k),
                        fmt_float(r.e),
                    ]
                })
                .collect();
            write_csv(w, &EVAL_COLUMNS, &table)
        }
    })?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoteSummary {
    pub exponent: f64,
    pub constant: f64,
    /// Only defined for `a > b`.
    pub upper_bound: Option<f64>,
    /// `eps / d`, the cutoff the constants refer to.
    pub effective_eps: f64,
}

pub fn asymptote_summary(cfg: &ExperimentConfig) -> Result<AsymptoteSummary, CliError> {
    let (a, b, c) = cfg.shifts()?;
    let functions = if cfg.eps.is_none() { Some(Functions::load(cfg)?) } else { None };
    let (eps, _) = resolve_eps(cfg, functions.as_ref())?;
    build_params(cfg, eps)?;
    let effective_eps = eps / cfg.d;
    let asym = k_asymptote(a, b, c, effective_eps)?;
    let upper_bound = if a > b { Some(c_upper_bound(a, b, c, effective_eps)?) } else { None };
    Ok(AsymptoteSummary { exponent: asym.exponent, constant: asym.constant, upper_bound, effective_eps })
}

pub fn cmd_asymptote(cfg: ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let s = asymptote_summary(&cfg)?;
    emit(out, cfg.out.as_deref(), |w| match cfg.format {
        Format::Json => write_json(w, &s),
        Format::Csv => write_csv(
            w,
            &["exponent", "constant", "upper_bound", "effective_eps"],
            &[vec![
                fmt_float(s.exponent),
                fmt_float(s.constant),
                s.upper_bound.map(fmt_float).unwrap_or_default(),
                fmt_float(s.effective_eps),
            ]],
        ),
    })?;
    Ok(EXIT_OK)
}

/// Estimate of `lim E_n` and the series behind it. S-like inputs give the
/// constant `C` of `D_n`; C-like inputs give the limit of their own product.
pub fn run_estimate(exp: &Experiment) -> Result<(LimitEstimate, Series), CliError> {
    let schedule = exp.schedule()?;
    Ok(estimate_limit_with_series(&exp.normalized(), &exp.functions.big_h, &schedule)?)
}

fn write_series(w: &mut dyn Write, exp: &Experiment, series: &Series) -> Result<(), CliError> {
    let normalized = exp.normalized();
    let mut rows = Vec::with_capacity(series.len());
    for &(n, e) in series {
        let m = term_count(&normalized.with_n(n)?);
        rows.push(vec![n.to_string(), m.to_string(), fmt_float(e.ln()), fmt_float(e)]);
    }
    write_csv(w, &SERIES_COLUMNS, &rows)
}

pub fn cmd_estimate(cfg: ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let exp = Experiment::load(cfg)?;
    let (est, series) = run_estimate(&exp)?;
    write_json(out, &est)?;
    if let Some(path) = exp.cfg.out.as_deref() {
        with_file(path, |w| write_series(w, &exp, &series))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct SkippedCheck {
    pub check: String,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub suite: Suite,
    pub function: String,
    pub eps: f64,
    pub eps_auto: bool,
    pub passed: bool,
    pub reports: Vec<CheckReport>,
    /// Checks that could not run; each counts as a failure.
    pub skipped: Vec<SkippedCheck>,
}

/// Windows used by the `monotone` suite: term-wise over `[n0, n0 + 10]`,
/// sequence-wise over consecutive `[5 n0, 5 n0 + 50]`.
pub fn monotone_windows(n0: u64) -> ((u64, u64), (u64, u64)) {
    ((n0, n0 + 10), (5 * n0, 5 * n0 + 50))
}

pub fn run_checks(exp: &Experiment) -> Result<CheckSummary, CliError> {
    let suite = exp.cfg.suite;
    let p = exp.normalized();
    let big_h = &exp.functions.big_h;
    let (a, b, c, eps) = (p.a(), p.b(), p.c(), p.eps());
    let mut reports = Vec::new();
    let mut skipped = Vec::new();

    let concavity = check_logconcavity(big_h, eps, DEFAULT_CONCAVITY_GRID);
    let concave = concavity.passed;
    if suite.includes(Suite::Logconcavity) {
        reports.push(concavity);
    }
    if suite.includes(Suite::LowerBound) {
        let witness = compute_bound_witness(big_h, a - b, b, eps, c, DEFAULT_WITNESS_GRID)?;
        let schedule = exp.schedule()?;
        reports.push(check_lower_bound_at(&p, big_h, &witness, schedule.n_values())?);
    }
    if suite.includes(Suite::Monotone) {
        let ((t0, t1), (e0, e1)) = monotone_windows(exp.cfg.n0);
        reports.push(check_term_monotonicity(&p, big_h, t0..=t1)?);
        reports.push(check_e_monotone(&e_series_consecutive(&p, big_h, e0, e1)?));
    }
    if suite.includes(Suite::UpperBound) {
        if concave {
            let (est, _) = run_estimate(exp)?;
            reports.push(check_upper_bound(&est, a, b, c, eps)?);
        } else {
            skipped.push(SkippedCheck {
                check: "upper_bound".into(),
                reason: "the limit estimate needs H > 0 and H'' <= 0 on [0, eps]".into(),
            });
        }
    }
    let passed = skipped.is_empty() && reports.iter().all(|r| r.passed);
    Ok(CheckSummary {
        suite,
        function: exp.functions.h.name().to_owned(),
        eps: exp.template.eps(),
        eps_auto: exp.eps_auto,
        passed,
        reports,
        skipped,
    })
}

pub fn cmd_check(cfg: ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let exp = Experiment::load(cfg)?;
    let summary = run_checks(&exp)?;
    write_json(out, &summary)?;
    if let Some(path) = exp.cfg.out.as_deref() {
        with_file(path, |w| write_json(w, &summary))?;
    }
    Ok(if summary.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Reads `n,E` rows; a non-numeric first line is taken as a header.
pub fn read_series_file(path: &Path) -> Result<Series, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read series {}: {e}", path.display())))?;
    let mut series = Series::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bad = || CliError::Config(format!("{}:{}: expected `n,E`", path.display(), i + 1));
        let (n, e) = line.split_once(',').ok_or_else(bad)?;
        match (n.trim().parse::<u64>(), e.trim().parse::<f64>()) {
            (Ok(n), Ok(e)) => series.push((n, e)),
            _ if i == 0 => continue,
            _ => return Err(bad()),
        }
    }
    Ok(series)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceOutput {
    pub source: String,
    pub limit_model: Model,
    #[serde(flatten)]
    pub report: ConvergenceReport,
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<(ConvergenceOutput, Series), CliError> {
    let (est, series, source) = match &cfg.series_file {
        Some(path) => {
            let series = read_series_file(path)?;
            (extrapolate_best(&series)?, series, path.display().to_string())
        }
        None => {
            let exp = Experiment::load(cfg.clone())?;
            let (est, series) = run_estimate(&exp)?;
            (est, series, exp.functions.h.name().to_owned())
        }
    };
    let report = fit_convergence_rate(&series, est.e_infinity)?;
    Ok((ConvergenceOutput { source, limit_model: est.model, report }, series))
}

fn residual_path(cfg: &ExperimentConfig) -> Option<PathBuf> {
    cfg.residuals.clone().or_else(|| cfg.out.as_ref().map(|p| p.with_extension("residuals.csv")))
}

pub fn cmd_convergence(cfg: ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let (result, series) = run_convergence(&cfg)?;
    write_json(out, &result)?;
    if let Some(path) = cfg.out.as_deref() {
        with_file(path, |w| write_json(w, &result))?;
    }
    if let Some(path) = residual_path(&cfg) {
        let fits = &result.report.fits;
        let rows: Vec<Vec<String>> = series
            .iter()
            .enumerate()
            .map(|(i, &(n, e))| {
                let mut row = vec![n.to_string(), fmt_float(e), fmt_float((e - result.report.e_infinity).abs())];
                row.extend(fits.iter().map(|f| fmt_float(f.residuals[i])));
                row
            })
            .collect();
        with_file(&path, |w| write_csv(w, &RESIDUAL_COLUMNS, &rows))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: String,
    pub alpha: Option<f64>,
    pub lambda: Option<f64>,
    pub k: Option<u32>,
    pub closed_form_epsilon: Option<f64>,
    /// Cutoff for `c d = 4` found by scanning.
    pub auto_epsilon: Option<f64>,
    pub note: Option<String>,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    catalog()
        .into_iter()
        .map(|f| {
            let t = f.taylor();
            let big_h = if f.kind().is_s_like() { asymprod::func_catalog::to_c(&f).ok() } else { Some(f.clone()) };
            let auto_epsilon = big_h
                .filter(|h| h.kind().is_c_like() && f.note().is_none())
                .and_then(|h| find_epsilon(&h, 4.0, DEFAULT_SCAN_RESOLUTION).ok());
            CatalogEntry {
                name: f.name().to_owned(),
                kind: f.kind().to_string(),
                alpha: t.map(|t| t.alpha),
                lambda: t.map(|t| t.lambda),
                k: t.map(|t| t.k),
                closed_form_epsilon: f.closed_form_epsilon(),
                auto_epsilon,
                note: f.note().map(str::to_owned),
            }
        })
        .collect()
}

pub fn cmd_catalog(cfg: ExperimentConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let entries = catalog_entries();
    let opt = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
    emit(out, cfg.out.as_deref(), |w| match cfg.format {
        Format::Json => write_json(w, &entries),
        Format::Csv => {
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    vec![
                        e.name.clone(),
                        e.kind.clone(),
                        opt(e.alpha),
                        opt(e.lambda),
                        e.k.map(|k| k.to_string()).unwrap_or_default(),
                        opt(e.closed_form_epsilon),
                        opt(e.auto_epsilon),
                        e.note.clone().unwrap_or_default().replace(',', ";"),
                    ]
                })
                .collect();
            write_csv(
                w,
                &["name", "kind", "alpha", "lambda", "k", "closed_form_epsilon", "auto_epsilon", "note"],
                &rows,
            )
        }
    })?;
    Ok(EXIT_OK)
}
