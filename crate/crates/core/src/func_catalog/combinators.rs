//! Moving between S- and C-functions, and the closure operations: C-functions
//! form a semiring under pointwise sum and product, S-functions are a module
//! over it, and the derivative of an S-function is a C-function.

use std::sync::Arc;

use super::catalog::lookup;
use super::classify::{classify, Classification};
use super::spec::{FunctionKind, FunctionSpec, RealFn, TaylorSignature};
use super::{ADMISSION_PROBE_RADIUS, ADMISSION_TOL};
use crate::error::{Error, Result};
use crate::numerics::{derivative1, integrate_unit};

// Below this argument H = h(x)/x is differentiated through its integral
// representation instead of the quotient rule, which cancels badly near 0.
const SMALL_ARGUMENT: f64 = 0.05;

fn mismatch(f: &FunctionSpec, expected: &'static str) -> Error {
    Error::KindMismatch { name: f.name().to_owned(), expected, found: f.kind().to_string() }
}

/// `H(x) = h(x) / x`, with the removable singularity filled by `H(0) = h'(0)`.
///
/// The identity maps to the constant one; a signature `(alpha, lambda, k)`
/// maps to `(alpha, lambda, k - 1)`.
pub fn to_c(h: &FunctionSpec) -> Result<FunctionSpec> {
    match h.kind() {
        FunctionKind::Identity => {
            return Ok(lookup("one").expect("constant one is in the catalog").with_domain_radius(h.domain_radius()))
        }
        FunctionKind::S => {}
        _ => return Err(mismatch(h, "S")),
    }
    let f = h.eval_fn();
    let hd1 = h.d1_fn();
    let hd2 = h.d2_fn();

    let eval = {
        let (f, hd1) = (Arc::clone(&f), Arc::clone(&hd1));
        move |x: f64| if x == 0.0 { hd1(0.0) } else { f(x) / x }
    };
    // H'(x) = ∫_0^1 t h''(t x) dt
    let d1_small: RealFn = {
        let hd2 = Arc::clone(&hd2);
        Arc::new(move |x: f64| integrate_unit(|t| t * hd2(t * x)))
    };
    let d1: RealFn = {
        let (f, hd1, d1_small) = (Arc::clone(&f), Arc::clone(&hd1), Arc::clone(&d1_small));
        Arc::new(move |x: f64| if x.abs() < SMALL_ARGUMENT { d1_small(x) } else { (x * hd1(x) - f(x)) / (x * x) })
    };
    let d2: RealFn = {
        let (f, hd1, hd2) = (Arc::clone(&f), Arc::clone(&hd1), Arc::clone(&hd2));
        Arc::new(move |x: f64| {
            if x.abs() < SMALL_ARGUMENT {
                derivative1(&*d1_small, x)
            } else {
                (x * x * hd2(x) - 2.0 * x * hd1(x) + 2.0 * f(x)) / (x * x * x)
            }
        })
    };

    let taylor = h.taylor().map(|t| TaylorSignature::new(t.alpha, t.lambda, t.k - 1));
    let mut out = FunctionSpec::new(format!("{}/x", h.name()), FunctionKind::C, eval)
        .with_raw_derivatives(Some(d1), Some(d2))
        .with_optional_taylor(taylor)
        .with_domain_radius(h.domain_radius());
    if let Some(eps) = h.closed_form_epsilon() {
        out = out.with_closed_form_epsilon(eps);
    }
    Ok(out)
}

// Leading behaviour alpha * (1 - lambda * x^k); `k: None` means no correction
// term at all (the constant one, or the identity divided by x).
#[derive(Debug, Clone, Copy)]
struct Series {
    alpha: f64,
    lambda: f64,
    k: Option<u32>,
}

impl Series {
    fn of_c(f: &FunctionSpec) -> Option<Series> {
        match f.kind() {
            FunctionKind::ConstantOne => Some(Series { alpha: 1.0, lambda: 0.0, k: None }),
            _ => f.taylor().map(|t| Series { alpha: t.alpha, lambda: t.lambda, k: Some(t.k) }),
        }
    }

    // Series of s(x)/x.
    fn of_s(s: &FunctionSpec) -> Option<Series> {
        match s.kind() {
            FunctionKind::Identity => Some(Series { alpha: 1.0, lambda: 0.0, k: None }),
            _ => s.taylor().map(|t| Series { alpha: t.alpha, lambda: t.lambda, k: Some(t.k - 1) }),
        }
    }

    fn lead(k1: Option<u32>, k2: Option<u32>) -> Option<u32> {
        match (k1, k2) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn at(&self, k: Option<u32>) -> f64 {
        if self.k.is_some() && self.k == k {
            self.lambda
        } else {
            0.0
        }
    }

    fn add(self, other: Series) -> Series {
        let k = Self::lead(self.k, other.k);
        let alpha = self.alpha + other.alpha;
        let lambda = (self.alpha * self.at(k) + other.alpha * other.at(k)) / alpha;
        Series { alpha, lambda, k }
    }

    fn mul(self, other: Series) -> Series {
        let k = Self::lead(self.k, other.k);
        Series { alpha: self.alpha * other.alpha, lambda: self.at(k) + other.at(k), k }
    }

    fn c_signature(self) -> Option<TaylorSignature> {
        self.k.map(|k| TaylorSignature::new(self.alpha, self.lambda, k))
    }

    fn s_signature(self) -> Option<TaylorSignature> {
        self.k.map(|k| TaylorSignature::new(self.alpha, self.lambda, k + 1))
    }
}

fn admit(spec: FunctionSpec, op: &'static str, expected: Classification) -> Result<FunctionSpec> {
    let probe = ADMISSION_PROBE_RADIUS.min(spec.domain_radius());
    let report = classify(&spec, probe, ADMISSION_TOL)?;
    if report.class != expected {
        return Err(Error::ClosureViolation { op, name: spec.name().to_owned(), found: report.class.to_string() });
    }
    Ok(spec)
}

fn both<F>(f: Option<RealFn>, g: Option<RealFn>, combine: F) -> Option<RealFn>
where
    F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    let (f, g) = (f?, g?);
    Some(Arc::new(move |x| combine(f(x), g(x))))
}

/// Derivatives of a pointwise product, closed when both factors have them.
fn product_derivatives(f: &FunctionSpec, g: &FunctionSpec) -> (Option<RealFn>, Option<RealFn>) {
    let d1 = match (f.closed_d1(), g.closed_d1()) {
        (Some(f1), Some(g1)) => {
            let (fe, ge) = (f.eval_fn(), g.eval_fn());
            Some(Arc::new(move |x: f64| f1(x) * ge(x) + fe(x) * g1(x)) as RealFn)
        }
        _ => None,
    };
    let d2 = match (f.closed_d1(), g.closed_d1(), f.closed_d2(), g.closed_d2()) {
        (Some(f1), Some(g1), Some(f2), Some(g2)) => {
            let (fe, ge) = (f.eval_fn(), g.eval_fn());
            Some(Arc::new(move |x: f64| f2(x) * ge(x) + 2.0 * f1(x) * g1(x) + fe(x) * g2(x)) as RealFn)
        }
        _ => None,
    };
    (d1, d2)
}

/// Pointwise sum of two C-functions.
pub fn combine_add(f: &FunctionSpec, g: &FunctionSpec) -> Result<FunctionSpec> {
    for x in [f, g] {
        if !x.kind().is_c_like() {
            return Err(mismatch(x, "C"));
        }
    }
    let (fe, ge) = (f.eval_fn(), g.eval_fn());
    let taylor = match (Series::of_c(f), Series::of_c(g)) {
        (Some(s), Some(t)) => s.add(t).c_signature(),
        _ => None,
    };
    let spec = FunctionSpec::new(format!("add({},{})", f.name(), g.name()), FunctionKind::C, move |x| fe(x) + ge(x))
        .with_raw_derivatives(
            both(f.closed_d1(), g.closed_d1(), |a, b| a + b),
            both(f.closed_d2(), g.closed_d2(), |a, b| a + b),
        )
        .with_optional_taylor(taylor)
        .with_domain_radius(f.domain_radius().min(g.domain_radius()));
    admit(spec, "combine_add", Classification::C)
}

/// Pointwise product of two C-functions.
pub fn combine_mul(f: &FunctionSpec, g: &FunctionSpec) -> Result<FunctionSpec> {
    for x in [f, g] {
        if !x.kind().is_c_like() {
            return Err(mismatch(x, "C"));
        }
    }
    let (fe, ge) = (f.eval_fn(), g.eval_fn());
    let (d1, d2) = product_derivatives(f, g);
    let taylor = match (Series::of_c(f), Series::of_c(g)) {
        (Some(s), Some(t)) => s.mul(t).c_signature(),
        _ => None,
    };
    let spec = FunctionSpec::new(format!("mul({},{})", f.name(), g.name()), FunctionKind::C, move |x| fe(x) * ge(x))
        .with_raw_derivatives(d1, d2)
        .with_optional_taylor(taylor)
        .with_domain_radius(f.domain_radius().min(g.domain_radius()));
    admit(spec, "combine_mul", Classification::C)
}

/// `f * s` for a C-function `f` and an S-function `s`; the result is an
/// S-function.
pub fn scale_module(f: &FunctionSpec, s: &FunctionSpec) -> Result<FunctionSpec> {
    if !f.kind().is_c_like() {
        return Err(mismatch(f, "C"));
    }
    if !s.kind().is_s_like() {
        return Err(mismatch(s, "S"));
    }
    let (fe, se) = (f.eval_fn(), s.eval_fn());
    let (d1, d2) = product_derivatives(f, s);
    let taylor = match (Series::of_c(f), Series::of_s(s)) {
        (Some(a), Some(b)) => a.mul(b).s_signature(),
        _ => None,
    };
    let spec = FunctionSpec::new(format!("scale({},{})", f.name(), s.name()), FunctionKind::S, move |x| fe(x) * se(x))
        .with_raw_derivatives(d1, d2)
        .with_optional_taylor(taylor)
        .with_domain_radius(f.domain_radius().min(s.domain_radius()));
    admit(spec, "scale_module", Classification::S)
}

/// `s'` for an S-function with a closed-form first derivative.
pub fn derivative_of_s(s: &FunctionSpec) -> Result<FunctionSpec> {
    if !s.kind().is_s_like() {
        return Err(mismatch(s, "S"));
    }
    let Some(eval) = s.closed_d1() else {
        return Err(Error::Precondition(format!("`{}` has no closed-form first derivative", s.name())));
    };
    let taylor = match s.kind() {
        FunctionKind::S => s.taylor().map(|t| TaylorSignature::new(t.alpha, t.k as f64 * t.lambda, t.k - 1)),
        _ => None,
    };
    let spec = FunctionSpec::new(format!("deriv({})", s.name()), FunctionKind::C, move |x| eval(x))
        .with_raw_derivatives(s.closed_d2(), None)
        .with_optional_taylor(taylor)
        .with_domain_radius(s.domain_radius());
    admit(spec, "derivative_of_s", Classification::C)
}
