use serde::Serialize;

use super::spec::FunctionSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    S,
    C,
    Neither,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::S => "S",
            Classification::C => "C",
            Classification::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionFailure {
    pub condition: &'static str,
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub class: Classification,
    pub probe_radius: f64,
    pub tol: f64,
    /// Sub-conditions of the S test that failed.
    pub s_failures: Vec<ConditionFailure>,
    /// Sub-conditions of the C test that failed.
    pub c_failures: Vec<ConditionFailure>,
}

// Points of the geometric grid probe_radius * 2^-i.
const GEOMETRIC_STEPS: i32 = 30;
const FINITENESS_POINTS: usize = 257;
// Finite-difference derivatives cannot resolve `tol` below these levels.
const FALLBACK_TOL_D1: f64 = 1e-7;
const FALLBACK_TOL_D2: f64 = 1e-6;

/// Decides numerically whether `f` satisfies the S conditions
/// (`f(0) = f''(0) = 0`, `f'(0) > 0`, `f'' <= 0` near 0⁺), the C conditions
/// (`f(0) > 0`, `f'(0) = 0`, `f'' <= 0` near 0⁺), or neither.
///
/// "Near 0⁺" is the geometric grid `probe_radius * 2^-i`, `i = 0..=30`.
pub fn classify(f: &FunctionSpec, probe_radius: f64, tol: f64) -> Result<ClassifyReport> {
    if !(probe_radius > 0.0 && probe_radius <= f.domain_radius()) {
        return Err(Error::Precondition(format!("probe radius {probe_radius} must lie in (0, {}]", f.domain_radius())));
    }
    for i in 0..FINITENESS_POINTS {
        let x = probe_radius * i as f64 / (FINITENESS_POINTS - 1) as f64;
        let v = f.eval(x);
        if !v.is_finite() {
            return Err(Error::EvaluationDomain { name: f.name().to_owned(), x, value: v });
        }
    }

    let tol_d1 = if f.has_closed_d1() { tol } else { tol.max(FALLBACK_TOL_D1) };
    let tol_d2 = if f.has_closed_d2() { tol } else { tol.max(FALLBACK_TOL_D2) };

    let f0 = f.eval(0.0);
    let d1_0 = f.d1(0.0);
    let d2_0 = f.d2(0.0);
    for (x, v) in [(0.0, d1_0), (0.0, d2_0)] {
        if !v.is_finite() {
            return Err(Error::EvaluationDomain { name: f.name().to_owned(), x, value: v });
        }
    }

    let mut concavity = Vec::new();
    for i in 0..=GEOMETRIC_STEPS {
        let x = probe_radius * 0.5f64.powi(i);
        let v = f.d2(x);
        if !v.is_finite() {
            return Err(Error::EvaluationDomain { name: f.name().to_owned(), x, value: v });
        }
        if v > tol_d2 {
            concavity.push(ConditionFailure { condition: "f''(x) <= 0 near 0+", x, value: v });
        }
    }

    let mut s_failures = Vec::new();
    if f0.abs() > tol {
        s_failures.push(ConditionFailure { condition: "f(0) = 0", x: 0.0, value: f0 });
    }
    if d1_0 <= tol_d1 {
        s_failures.push(ConditionFailure { condition: "f'(0) > 0", x: 0.0, value: d1_0 });
    }
    if d2_0.abs() > tol_d2 {
        s_failures.push(ConditionFailure { condition: "f''(0) = 0", x: 0.0, value: d2_0 });
    }
    s_failures.extend(concavity.iter().cloned());

    let mut c_failures = Vec::new();
    if f0 <= tol {
        c_failures.push(ConditionFailure { condition: "f(0) > 0", x: 0.0, value: f0 });
    }
    if d1_0.abs() > tol_d1 {
        c_failures.push(ConditionFailure { condition: "f'(0) = 0", x: 0.0, value: d1_0 });
    }
    c_failures.extend(concavity);

    let class = if s_failures.is_empty() {
        Classification::S
    } else if c_failures.is_empty() {
        Classification::C
    } else {
        Classification::Neither
    };
    Ok(ClassifyReport { class, probe_radius, tol, s_failures, c_failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func_catalog::{c_functions, catalog, lookup, s_functions, FunctionKind};

    fn class_of(name: &str) -> Classification {
        classify(&lookup(name).unwrap(), 0.1, 1e-9).unwrap().class
    }

    #[test]
    fn named_examples() {
        assert_eq!(class_of("sin"), Classification::S);
        assert_eq!(class_of("cos"), Classification::C);
        assert_eq!(class_of("identity"), Classification::S);
    }

    #[test]
    fn cubic_perturbation_is_neither() {
        let f = FunctionSpec::new("x+x^3", FunctionKind::S, |x| x + x * x * x)
            .with_derivatives(|x| 1.0 + 3.0 * x * x, |x| 6.0 * x);
        let report = classify(&f, 0.1, 1e-9).unwrap();
        assert_eq!(report.class, Classification::Neither);
        // 6x exceeds the tolerance at every grid point above ~1.7e-10.
        assert!(report.s_failures.iter().all(|c| c.condition == "f''(x) <= 0 near 0+"));
        assert!(report.s_failures.iter().all(|c| (c.value - 6.0 * c.x).abs() < 1e-12));
        assert!(report.c_failures.iter().any(|c| c.condition == "f(0) > 0"));
    }

    #[test]
    fn whole_catalog_classifies_as_declared() {
        for f in s_functions() {
            assert_eq!(classify(&f, 0.1, 1e-9).unwrap().class, Classification::S, "{}", f.name());
        }
        for f in c_functions() {
            assert_eq!(classify(&f, 0.1, 1e-9).unwrap().class, Classification::C, "{}", f.name());
        }
    }

    #[test]
    fn listed_inverse_cotangent_is_rejected() {
        let f = catalog().into_iter().find(|f| f.name() == "arccot").unwrap();
        assert!(f.note().is_some());
        let report = classify(&f, 0.1, 1e-9).unwrap();
        assert_eq!(report.class, Classification::Neither);
        let slope = report.c_failures.iter().find(|c| c.condition == "f'(0) = 0").unwrap();
        assert_eq!(slope.value, -1.0);
    }

    #[test]
    fn non_finite_values_are_domain_errors() {
        let f = FunctionSpec::new("log", FunctionKind::C, f64::ln);
        assert!(matches!(classify(&f, 0.1, 1e-9), Err(Error::EvaluationDomain { .. })));
    }

    #[test]
    fn probe_radius_beyond_domain_is_rejected() {
        let f = lookup("sin").unwrap().with_domain_radius(0.05);
        assert!(matches!(classify(&f, 0.1, 1e-9), Err(Error::Precondition(_))));
    }
}
