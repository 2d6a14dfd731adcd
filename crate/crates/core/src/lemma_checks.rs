//! Numerical checks of the inequalities behind the existence of `lim E_n`:
//! the per-term lower bound with its witness constant, term-wise and
//! sequence-wise monotonicity, the positivity/concavity hypothesis on `H`
//! and the upper bound on `C`.
//!
//! Every check returns a [`CheckReport`]; failures are data, not errors.
//! Errors are reserved for unmet preconditions.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::c_upper_bound;
use crate::error::{Error, Result};
use crate::func_catalog::FunctionSpec;
use crate::limit_estimator::{sequence_e, LimitEstimate, Schedule, Series};
use crate::product_engine::{term_count, ProductParams};

/// Absolute slack for non-strict per-term inequalities.
pub const TERM_SLACK: f64 = 1e-12;
/// Relative slack for `E_{n+1} <= E_n`.
pub const SEQUENCE_SLACK: f64 = 1e-12;
/// Curvature tolerance for `H'' <= 0`.
pub const CURVATURE_TOL: f64 = 1e-10;
/// Relative slack for the upper bound on `C`.
pub const UPPER_BOUND_SLACK: f64 = 1e-9;
pub const DEFAULT_WITNESS_GRID: usize = 512;
pub const DEFAULT_CONCAVITY_GRID: usize = 1000;
// Smallest x of the witness grid, relative to eps/alpha.
const WITNESS_X_MIN: f64 = 1e-6;

/// Empirical maximum of `g(x, y) = (1 - H((y + delta) x) / H(y x)) / x` over
/// `x > 0`, `y >= alpha`, `y x <= eps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundWitness {
    /// Grid maximum of `g`, clamped at zero.
    pub a_delta: f64,
    /// `a_delta * eps / c`, the constant in `ratio >= 1 - A/m`.
    pub a_final: f64,
    pub delta: f64,
    pub alpha: f64,
    pub eps: f64,
    pub c: f64,
    pub grid_spec: String,
    pub max_location: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Violation {
    pub n: u64,
    /// Term index, grid index or series index, depending on the check.
    pub j: i64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub n_range: Option<(u64, u64)>,
    pub j_range: Option<(i64, i64)>,
    pub first_violation: Option<Violation>,
    /// Smallest slack `rhs + tolerance - lhs` (or the mirror image for lower
    /// bounds) over all checked points; negative exactly when a point fails.
    pub margin: Option<f64>,
    pub checked: u64,
    /// `n` below the threshold where the inequality is claimed.
    pub skipped_n: Vec<u64>,
}

impl CheckReport {
    fn new(check: &str) -> Self {
        Self {
            check: check.to_owned(),
            passed: true,
            n_range: None,
            j_range: None,
            first_violation: None,
            margin: None,
            checked: 0,
            skipped_n: Vec::new(),
        }
    }

    fn record(&mut self, n: u64, j: i64, lhs: f64, rhs: f64, slack: f64) {
        self.checked += 1;
        self.margin = Some(self.margin.map_or(slack, |m| m.min(slack)));
        if !(slack >= 0.0) && self.first_violation.is_none() {
            self.first_violation = Some(Violation { n, j, lhs, rhs });
        }
        self.passed = self.first_violation.is_none();
    }

    fn widen(range: &mut Option<(i64, i64)>, lo: i64, hi: i64) {
        *range = Some(range.map_or((lo, hi), |(a, b)| (a.min(lo), b.max(hi))));
    }

    /// Concatenates reports of the same check over disjoint `n`.
    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        self.passed &= other.passed;
        self.first_violation = self.first_violation.or(other.first_violation);
        self.margin = match (self.margin, other.margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.checked += other.checked;
        self.skipped_n.extend(other.skipped_n);
        if let Some((lo, hi)) = other.n_range {
            self.n_range = Some(self.n_range.map_or((lo, hi), |(a, b)| (a.min(lo), b.max(hi))));
        }
        if let Some((lo, hi)) = other.j_range {
            Self::widen(&mut self.j_range, lo, hi);
        }
        self
    }
}

fn positive(h: &FunctionSpec, x: f64) -> Result<f64> {
    let v = h.eval(x);
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::HypothesisViolation(format!("`{}` is not positive at x = {x} (value {v})", h.name())))
    }
}

/// Maximizes `g` on a `grid x grid` mesh: logarithmic in `x` over
/// `[1e-6 eps/alpha, eps/alpha]`, uniform in `y` over `[alpha, eps/x]`, plus
/// the `x -> 0` edge where `g` tends to zero.
///
/// The resulting constant is `a_delta * eps / c`: since `m/n <= eps/c`,
/// `1 - a_delta/n >= 1 - (a_delta eps / c)/m` for every `n` with `m >= 1`.
pub fn compute_bound_witness(
    big_h: &FunctionSpec,
    delta: f64,
    alpha: f64,
    eps: f64,
    c: f64,
    grid: usize,
) -> Result<BoundWitness> {
    if !big_h.kind().is_c_like() {
        return Err(Error::KindMismatch {
            name: big_h.name().to_owned(),
            expected: "C",
            found: big_h.kind().to_string(),
        });
    }
    for (name, v) in [("alpha", alpha), ("eps", eps), ("c", c)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
        }
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParams(format!("delta must be nonnegative, got {delta}")));
    }
    if grid < 2 {
        return Err(Error::InvalidParams("grid needs at least 2 points per axis".into()));
    }
    let x_max = eps / alpha;
    let x_min = x_max * WITNESS_X_MIN;
    let log_span = (x_max / x_min).ln();
    let rows: Vec<(f64, (f64, f64))> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = x_min * (log_span * i as f64 / (grid - 1) as f64).exp();
            let y_max = (eps / x).max(alpha);
            let mut best = (0.0, (0.0, alpha));
            for k in 0..grid {
                let y = alpha + (y_max - alpha) * k as f64 / (grid - 1) as f64;
                let ratio = positive(big_h, (y + delta) * x)? / positive(big_h, y * x)?;
                let g = (1.0 - ratio) / x;
                if g > best.0 {
                    best = (g, (x, y));
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;
    // x = 0 edge: g vanishes there, so the running maximum starts at zero.
    let (a_delta, max_location) =
        rows.into_iter().fold((0.0, (0.0, alpha)), |acc, row| if row.0 > acc.0 { row } else { acc });
    Ok(BoundWitness {
        a_delta,
        a_final: a_delta * eps / c,
        delta,
        alpha,
        eps,
        c,
        grid_spec: format!(
            "x: {grid} log-spaced in [{x_min:e}, {x_max:e}] plus x=0; y: {grid} uniform in [{alpha}, eps/x]"
        ),
        max_location,
    })
}

/// `(1 - A/m)^(m+1)`, the lower bound the per-term estimate gives for `E_n`.
/// Zero when `A >= m`.
pub fn lower_bound_product(a_final: f64, m: u64) -> f64 {
    if m == 0 || a_final >= m as f64 {
        return 0.0;
    }
    ((m + 1) as f64 * (-a_final / m as f64).ln_1p()).exp()
}

fn require_unit_scale(p: &ProductParams) -> Result<()> {
    if p.d() != 1.0 {
        return Err(Error::Precondition(format!("checks need d = 1, got d = {}", p.d())));
    }
    Ok(())
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0)
}

fn quotient(big_h: &FunctionSpec, a: f64, b: f64, c: f64, j: f64, n: f64) -> f64 {
    big_h.eval((c * j + a) / n) / big_h.eval((c * j + b) / n)
}

/// `H((cj+a)/n) / H((cj+b)/n) >= 1 - A/m` for every `j` in `[0, m]`.
///
/// `n` with `m < 1` or `m/n < eps/(2c)` are outside the claimed range and
/// are listed in `skipped_n`.
pub fn check_lower_bound(p: &ProductParams, big_h: &FunctionSpec, witness: &BoundWitness) -> Result<CheckReport> {
    require_unit_scale(p)?;
    let (a, b, c, eps, n) = (p.a(), p.b(), p.c(), p.eps(), p.n());
    if a < b {
        return Err(Error::Precondition("the lower bound is stated for a >= b".into()));
    }
    if !close(witness.delta, a - b) || !close(witness.alpha, b) || !close(witness.eps, eps) || !close(witness.c, c) {
        return Err(Error::Precondition("witness was computed for different parameters".into()));
    }
    let mut report = CheckReport::new("lower_bound");
    report.n_range = Some((n, n));
    let m = term_count(p);
    if m < 1 || (m as f64) / (n as f64) < eps / (2.0 * c) {
        report.skipped_n.push(n);
        return Ok(report);
    }
    report.j_range = Some((0, m));
    let rhs = 1.0 - witness.a_final / m as f64;
    let nf = n as f64;
    let lhs: Vec<f64> = (0..=m).into_par_iter().map(|j| quotient(big_h, a, b, c, j as f64, nf)).collect();
    for (j, l) in lhs.into_iter().enumerate() {
        report.record(n, j as i64, l, rhs, l - rhs + TERM_SLACK);
    }
    Ok(report)
}

/// [`check_lower_bound`] at each `n` in turn.
pub fn check_lower_bound_at(
    template: &ProductParams,
    big_h: &FunctionSpec,
    witness: &BoundWitness,
    ns: &[u64],
) -> Result<CheckReport> {
    let mut report = CheckReport::new("lower_bound");
    for &n in ns {
        report = report.merge(check_lower_bound(&template.with_n(n)?, big_h, witness)?);
    }
    Ok(report)
}

/// `H((cj+a)/n) / H((cj+b)/n) >= H((c(j+1)+a)/(n+1)) / H((c(j+1)+b)/(n+1))`
/// for all `j` in `[0, m(n)]` and `n` in `n_range`. `n` with
/// `(n - m) c - a <= 0` are below the claimed range and skipped.
pub fn check_term_monotonicity(
    p: &ProductParams,
    big_h: &FunctionSpec,
    n_range: RangeInclusive<u64>,
) -> Result<CheckReport> {
    require_unit_scale(p)?;
    let (a, b, c) = (p.a(), p.b(), p.c());
    if a < b {
        return Err(Error::Precondition("term monotonicity is stated for a >= b".into()));
    }
    let ns: Vec<u64> = n_range.clone().collect();
    if ns.is_empty() || ns[0] == 0 {
        return Err(Error::InvalidParams("n range must be non-empty and positive".into()));
    }
    struct PerN {
        n: u64,
        m: i64,
        in_scope: bool,
        terms: Vec<(f64, f64)>,
    }
    let per_n: Vec<PerN> = ns
        .par_iter()
        .map(|&n| {
            let m = term_count(&p.with_n(n)?);
            let in_scope = m >= 0 && (n as f64 - m as f64) * c - a > 0.0;
            let (nf, next) = (n as f64, (n + 1) as f64);
            let terms = if in_scope {
                (0..=m)
                    .map(|j| {
                        let j = j as f64;
                        (quotient(big_h, a, b, c, j, nf), quotient(big_h, a, b, c, j + 1.0, next))
                    })
                    .collect()
            } else {
                Vec::new()
            };
            Ok(PerN { n, m, in_scope, terms })
        })
        .collect::<Result<_>>()?;

    let mut report = CheckReport::new("term_monotonicity");
    report.n_range = Some((*n_range.start(), *n_range.end()));
    for row in per_n {
        if !row.in_scope {
            report.skipped_n.push(row.n);
            continue;
        }
        CheckReport::widen(&mut report.j_range, 0, row.m);
        for (j, (lhs, rhs)) in row.terms.into_iter().enumerate() {
            report.record(row.n, j as i64, lhs, rhs, lhs - rhs + TERM_SLACK);
        }
    }
    Ok(report)
}

/// `E_{i} <= E_{i-1} (1 + 1e-12)` along the series. Violations carry the
/// series index in `j`.
pub fn check_e_monotone(series: &[(u64, f64)]) -> CheckReport {
    let mut report = CheckReport::new("e_monotone");
    if let (Some(first), Some(last)) = (series.first(), series.last()) {
        report.n_range = Some((first.0, last.0));
        report.j_range = Some((0, series.len() as i64 - 1));
    }
    for (i, w) in series.windows(2).enumerate() {
        let (lhs, rhs) = (w[1].1, w[0].1);
        report.record(w[1].0, i as i64 + 1, lhs, rhs, rhs * (1.0 + SEQUENCE_SLACK) - lhs);
    }
    report
}

/// `E_n` for consecutive `n` in `[n0, n1]`.
pub fn e_series_consecutive(template: &ProductParams, big_h: &FunctionSpec, n0: u64, n1: u64) -> Result<Series> {
    sequence_e(template, &Schedule::consecutive(n0, n1)?, big_h)
}

/// `H > 0` and `H'' <= 1e-10` at `grid` equally spaced points of `[0, eps]`.
/// The margin is the smaller of `H` and `1e-10 - H''`; violations carry the
/// grid index in `j`.
pub fn check_logconcavity(big_h: &FunctionSpec, eps: f64, grid: usize) -> CheckReport {
    let mut report = CheckReport::new("logconcavity");
    let grid = grid.max(2);
    report.j_range = Some((0, grid as i64 - 1));
    let values: Vec<(f64, f64)> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = eps * i as f64 / (grid - 1) as f64;
            (big_h.eval(x), big_h.d2(x))
        })
        .collect();
    for (i, (v, curv)) in values.into_iter().enumerate() {
        let positivity = if v.is_finite() { v } else { f64::NEG_INFINITY };
        let concavity = if curv.is_finite() { CURVATURE_TOL - curv } else { f64::NEG_INFINITY };
        let (lhs, rhs) = if positivity <= concavity { (v, 0.0) } else { (curv, CURVATURE_TOL) };
        report.record(0, i as i64, lhs, rhs, positivity.min(concavity));
    }
    report
}

/// `est.c_constant <= c_upper_bound(a, b, c, eps) (1 + 1e-9)`. Pass the
/// effective cutoff `eps/d` when `d != 1`.
pub fn check_upper_bound(est: &LimitEstimate, a: f64, b: f64, c: f64, eps: f64) -> Result<CheckReport> {
    let bound = c_upper_bound(a, b, c, eps)?;
    let rhs = bound * (1.0 + UPPER_BOUND_SLACK);
    let mut report = CheckReport::new("upper_bound");
    report.record(0, 0, est.c_constant, bound, rhs - est.c_constant);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func_catalog::{lookup, s_functions, to_c};
    use crate::limit_estimator::{estimate_c, FitParams, Model};
    use crate::product_engine::eval_e;
    use std::f64::consts::FRAC_PI_2;

    fn sinc_normalized() -> FunctionSpec {
        to_c(&lookup("sin").unwrap().rescaled(FRAC_PI_2).unwrap()).unwrap()
    }

    fn motivating(n: u64) -> ProductParams {
        ProductParams::new(5.0, 3.0, 4.0, 1.0, 1.0, n).unwrap()
    }

    #[test]
    fn witness_trivial_cases() {
        let sinc = sinc_normalized();
        let w = compute_bound_witness(&sinc, 0.0, 3.0, 1.0, 4.0, 64).unwrap();
        assert_eq!(w.a_delta, 0.0);
        let w = compute_bound_witness(&lookup("one").unwrap(), 2.0, 3.0, 1.0, 4.0, 64).unwrap();
        assert_eq!((w.a_delta, w.a_final), (0.0, 0.0));
        assert!(compute_bound_witness(&lookup("sin").unwrap(), 2.0, 3.0, 1.0, 4.0, 64).is_err());
    }

    #[test]
    fn witness_for_sinc_is_refinement_stable() {
        let sinc = sinc_normalized();
        let coarse = compute_bound_witness(&sinc, 2.0, 3.0, 1.0, 4.0, 256).unwrap();
        let fine = compute_bound_witness(&sinc, 2.0, 3.0, 1.0, 4.0, 512).unwrap();
        assert!(coarse.a_delta > 0.0 && coarse.a_delta.is_finite());
        assert!((fine.a_delta / coarse.a_delta - 1.0).abs() < 0.01);
        assert_eq!(fine.a_final, fine.a_delta / 4.0);
        // the witness inequality at its own arg max
        let (x, y) = fine.max_location;
        let ratio = sinc.eval((y + 2.0) * x) / sinc.eval(y * x);
        assert!(ratio >= 1.0 - fine.a_delta * x - 1e-15);
    }

    #[test]
    fn witness_rejects_non_positive_h() {
        let sinc = to_c(&lookup("sin").unwrap()).unwrap();
        assert!(matches!(compute_bound_witness(&sinc, 2.0, 3.0, 4.0, 4.0, 32), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn lower_bound_passes_for_sinc() {
        let sinc = sinc_normalized();
        let w = compute_bound_witness(&sinc, 2.0, 3.0, 1.0, 4.0, DEFAULT_WITNESS_GRID).unwrap();
        let r = check_lower_bound(&motivating(10_000), &sinc, &w).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.margin.unwrap() >= 0.0);
        assert_eq!(r.checked, term_count(&motivating(10_000)) as u64 + 1);
        assert!(r.first_violation.is_none());
    }

    #[test]
    fn halved_witness_constant_fails() {
        let sinc = sinc_normalized();
        let mut w = compute_bound_witness(&sinc, 2.0, 3.0, 1.0, 4.0, DEFAULT_WITNESS_GRID).unwrap();
        w.a_final /= 2.0;
        let r = check_lower_bound(&motivating(10_000), &sinc, &w).unwrap();
        assert!(!r.passed);
        let v = r.first_violation.unwrap();
        assert!(v.lhs < v.rhs);
        assert!(r.margin.unwrap() < 0.0);
    }

    #[test]
    fn lower_bound_equal_shifts() {
        let sinc = sinc_normalized();
        let p = ProductParams::new(3.0, 3.0, 4.0, 1.0, 1.0, 1000).unwrap();
        let w = compute_bound_witness(&sinc, 0.0, 3.0, 1.0, 4.0, 32).unwrap();
        let r = check_lower_bound(&p, &sinc, &w).unwrap();
        assert!(r.passed);
        assert_eq!(r.margin, Some(TERM_SLACK));
    }

    #[test]
    fn lower_bound_skips_small_n_and_checks_witness() {
        let sinc = sinc_normalized();
        let w = compute_bound_witness(&sinc, 2.0, 3.0, 1.0, 4.0, 32).unwrap();
        let r = check_lower_bound(&motivating(10), &sinc, &w).unwrap();
        assert_eq!(r.skipped_n, vec![10]);
        assert_eq!(r.checked, 0);
        let other = compute_bound_witness(&sinc, 1.0, 3.0, 1.0, 4.0, 32).unwrap();
        assert!(matches!(check_lower_bound(&motivating(1000), &sinc, &other), Err(Error::Precondition(_))));
        let scaled = ProductParams::new(5.0, 3.0, 4.0, FRAC_PI_2, FRAC_PI_2, 1000).unwrap();
        assert!(check_lower_bound(&scaled, &sinc, &w).is_err());
    }

    #[test]
    fn term_monotonicity_examples() {
        let sinc = sinc_normalized();
        let r = check_term_monotonicity(&motivating(1), &sinc, 1000..=1010).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.margin.unwrap() > 0.0);
        assert_eq!(r.n_range, Some((1000, 1010)));

        let one = lookup("one").unwrap();
        let r = check_term_monotonicity(&motivating(1), &one, 1000..=1010).unwrap();
        assert!(r.passed);
        assert_eq!(r.margin, Some(TERM_SLACK));

        let flat = ProductParams::new(3.0, 3.0, 4.0, 1.0, 1.0, 1).unwrap();
        assert!(check_term_monotonicity(&flat, &sinc, 1000..=1002).unwrap().passed);
        assert!(check_term_monotonicity(&motivating(1).swapped(), &sinc, 1000..=1002).is_err());
    }

    #[test]
    fn e_monotone_examples() {
        let ones: Series = (5000..=5050).map(|n| (n, 1.0)).collect();
        assert!(check_e_monotone(&ones).passed);

        let reversed = vec![(10, 0.5), (11, 0.6), (12, 0.7)];
        let r = check_e_monotone(&reversed);
        assert!(!r.passed);
        assert_eq!(r.first_violation.unwrap().j, 1);
        assert_eq!(r.first_violation.unwrap().n, 11);
    }

    #[test]
    fn e_monotone_when_stride_matches_cutoff() {
        // eps = c d makes m grow by exactly one per step
        let h = to_c(&lookup("sin").unwrap().rescaled(0.5).unwrap()).unwrap();
        let p = ProductParams::new(5.0, 3.0, 1.5, 1.0, 1.5, 1).unwrap();
        assert!(check_logconcavity(&h, 1.5, 1000).passed);
        let series = e_series_consecutive(&p, &h, 5000, 5050).unwrap();
        let r = check_e_monotone(&series);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn e_sequence_saw_tooth_when_cutoff_below_stride() {
        let sinc = sinc_normalized();
        let series = e_series_consecutive(&motivating(1), &sinc, 5000, 5004).unwrap();
        let r = check_e_monotone(&series);
        assert!(!r.passed);
        let v = r.first_violation.unwrap();
        assert!(v.lhs > v.rhs);
        assert_eq!(eval_e(&motivating(v.n), &sinc).unwrap().value(), v.lhs);
    }

    #[test]
    fn logconcavity_examples() {
        assert!(check_logconcavity(&to_c(&lookup("sin").unwrap()).unwrap(), FRAC_PI_2, 1000).passed);
        let gauss = lookup("exp_neg_pow2").unwrap();
        let eps = 0.5f64.sqrt();
        assert!(check_logconcavity(&gauss, eps, 1000).passed);
        let r = check_logconcavity(&gauss, 1.1 * eps, 1000);
        assert!(!r.passed);
        assert!(r.first_violation.unwrap().lhs > CURVATURE_TOL);
        assert!(check_logconcavity(&lookup("one").unwrap(), 1e5, 1000).passed);
        assert!(!check_logconcavity(&to_c(&lookup("sin").unwrap()).unwrap(), 4.0, 1000).passed);
    }

    fn estimate_with(c_constant: f64) -> LimitEstimate {
        LimitEstimate {
            e_infinity: 1.0,
            c_constant,
            model: Model::InvN,
            fit_params: FitParams { level: 1.0, coefficient: 0.0, power: None },
            residual_norm: 0.0,
            n_points: 11,
            e_infinity_reported: 1.0,
            warnings: Vec::new(),
        }
    }

    #[test]
    fn upper_bound_examples() {
        let bound = c_upper_bound(5.0, 3.0, 4.0, 1.0).unwrap();
        assert!(check_upper_bound(&estimate_with(bound), 5.0, 3.0, 4.0, 1.0).unwrap().passed);
        assert!(!check_upper_bound(&estimate_with(bound * 1.01), 5.0, 3.0, 4.0, 1.0).unwrap().passed);
        assert!(matches!(check_upper_bound(&estimate_with(bound), 3.0, 5.0, 4.0, 1.0), Err(Error::Precondition(_))));

        let sin = lookup("sin").unwrap();
        let p = ProductParams::new(5.0, 3.0, 4.0, FRAC_PI_2, FRAC_PI_2, 1).unwrap();
        let est = estimate_c(&p, &sin, &Schedule::default_geometric()).unwrap();
        let r = check_upper_bound(&est, 5.0, 3.0, 4.0, 1.0).unwrap();
        assert!(r.passed && r.margin.unwrap() > 0.1 * bound);
    }

    #[test]
    fn lower_bound_product_limit() {
        let a = 0.25;
        assert_eq!(lower_bound_product(a, 0), 0.0);
        assert_eq!(lower_bound_product(3.0, 2), 0.0);
        let target = 0.778_800_783_071_404_9; // e^{-1/4}
        let mut prev = f64::INFINITY;
        for m in [10u64, 100, 1000, 10_000, 100_000, 1_000_000] {
            let dist = (lower_bound_product(a, m) - target).abs();
            assert!(dist < prev);
            prev = dist;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn lower_bound_product_sits_below_e() {
        let sinc = sinc_normalized();
        let w = compute_bound_witness(&sinc, 2.0, 3.0, 1.0, 4.0, DEFAULT_WITNESS_GRID).unwrap();
        for n in [1000u64, 4000, 16_000] {
            let p = motivating(n);
            let m = term_count(&p) as u64;
            assert!(lower_bound_product(w.a_final, m) <= eval_e(&p, &sinc).unwrap().value());
        }
    }

    #[test]
    fn catalog_logconcavity_and_witness() {
        for h in s_functions() {
            let big_h = to_c(&h).unwrap();
            let eps = crate::func_catalog::find_epsilon(&big_h, 4.0, 4096).unwrap();
            assert!(check_logconcavity(&big_h, eps, 1000).passed, "{}", h.name());
            let w = compute_bound_witness(&big_h, 2.0, 3.0, eps, 4.0, 128).unwrap();
            assert!(w.a_delta >= 0.0 && w.a_final <= w.a_delta * eps / 4.0 + 1e-15);
        }
    }
}
