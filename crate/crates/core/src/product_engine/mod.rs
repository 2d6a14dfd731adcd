//! The term bound `m(n)` and the finite products
//!
//! ```text
//! D_n = prod_{j=0}^{m} h((c j + a) d / n) / h((c j + b) d / n)
//! K_n = prod_{j=0}^{m} (c j + a) / (c j + b)
//! E_n = prod_{j=0}^{m} H((c j + a) / n) / H((c j + b) / n)     (d = 1)
//! ```
//!
//! All products are accumulated as compensated sums of logarithms.

mod exact;

use serde::Serialize;

pub use exact::{eval_k_exact, k_product_exact, ratio_to_f64, rational_from_f64, DEFAULT_EXACT_CAP};

use crate::error::{Error, Result};
use crate::func_catalog::{FunctionKind, FunctionSpec};
use crate::numerics::NeumaierSum;

// Relative slack when deciding `eps == c*d`.
const COMPAT_EQ_TOL: f64 = 1e-12;
// Guard added before flooring in `term_count`.
const FLOOR_GUARD: f64 = 1e-12;

/// `(a, b, c, d, eps, n)`: shifts `a`, `b`, stride `c`, argument scale `d`,
/// cutoff `eps` and the index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    eps: f64,
    n: u64,
    compat_override: bool,
}

/// Whether `eps` satisfies `eps <= c*d`, with equality only when `c*d > 1`.
pub fn is_compatible(eps: f64, cd: f64) -> bool {
    if (eps - cd).abs() <= COMPAT_EQ_TOL * cd {
        cd > 1.0
    } else {
        eps < cd
    }
}

impl ProductParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, eps: f64, n: u64) -> Result<Self> {
        Self::build(a, b, c, d, eps, n, false)
    }

    /// Same as [`ProductParams::new`] but skips the compatibility condition,
    /// which only matters for the term-wise monotonicity argument.
    pub fn with_compat_override(a: f64, b: f64, c: f64, d: f64, eps: f64, n: u64) -> Result<Self> {
        Self::build(a, b, c, d, eps, n, true)
    }

    fn build(a: f64, b: f64, c: f64, d: f64, eps: f64, n: u64, compat_override: bool) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d), ("eps", eps)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be a positive real, got {v}")));
            }
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be a positive integer".into()));
        }
        if !compat_override && !is_compatible(eps, c * d) {
            return Err(Error::InvalidParams(format!(
                "eps = {eps} is not compatible with c*d = {}: need eps <= c*d, and c*d > 1 when equal",
                c * d
            )));
        }
        Ok(Self { a, b, c, d, eps, n, compat_override })
    }

    pub fn with_n(&self, n: u64) -> Result<Self> {
        Self::build(self.a, self.b, self.c, self.d, self.eps, n, self.compat_override)
    }

    /// Same parameters with `a` and `b` exchanged.
    pub fn swapped(&self) -> Self {
        Self { a: self.b, b: self.a, ..*self }
    }

    /// The equivalent parameters with `d` absorbed into the function:
    /// `(a, b, c, 1, eps / d, n)`. Pair with [`FunctionSpec::rescaled`].
    pub fn normalized(&self) -> Self {
        Self { d: 1.0, eps: self.eps / self.d, ..*self }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn compat_override(&self) -> bool {
        self.compat_override
    }
}

/// Logarithm of a positive product together with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductValue {
    pub log_value: f64,
    /// Largest index `j`; -1 for the empty product.
    pub m: i64,
    pub terms: u64,
    /// Total magnitude of the compensation applied while summing the logs.
    pub comp_error_bound: f64,
}

impl ProductValue {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    fn empty() -> Self {
        Self { log_value: 0.0, m: -1, terms: 0, comp_error_bound: 0.0 }
    }
}

/// `m(n) = floor(n eps / (c d) - max(a, b) / c)`, clamped below at -1.
///
/// A relative guard of 1e-12 is added before flooring so that values such
/// as `eps = pi/2` land on the intended integer.
pub fn term_count(p: &ProductParams) -> i64 {
    let v = p.n as f64 * p.eps / (p.c * p.d) - p.a.max(p.b) / p.c;
    let m = (v + FLOOR_GUARD * v.abs().max(1.0)).floor();
    if m < -1.0 {
        -1
    } else {
        m as i64
    }
}

fn accumulate(m: i64, mut term: impl FnMut(f64) -> Result<f64>) -> Result<ProductValue> {
    if m < 0 {
        return Ok(ProductValue::empty());
    }
    let mut sum = NeumaierSum::new();
    for j in 0..=m {
        sum.add(term(j as f64)?);
    }
    Ok(ProductValue { log_value: sum.value(), m, terms: m as u64 + 1, comp_error_bound: sum.compensation() })
}

/// `K_n(a, b, c, eps)`.
pub fn eval_k(p: &ProductParams) -> ProductValue {
    let (a, b, c) = (p.a, p.b, p.c);
    accumulate(term_count(p), |j| Ok((c * j + a).ln() - (c * j + b).ln())).expect("K terms are infallible")
}

fn positive_log(h: &FunctionSpec, x: f64) -> Result<f64> {
    let v = h.eval(x);
    if v > 0.0 && v.is_finite() {
        Ok(v.ln())
    } else {
        Err(Error::PositivityViolation { name: h.name().to_owned(), x, value: v })
    }
}

/// `D_n(a, b, c, d, eps; h)`. Also serves C-functions, for which it is
/// `D_n(a, b, c, d, eps; H)`.
pub fn eval_d(p: &ProductParams, h: &FunctionSpec) -> Result<ProductValue> {
    // x/x: the scale d/n cancels in every quotient.
    if h.kind() == FunctionKind::Identity {
        return Ok(eval_k(p));
    }
    let (a, b, c) = (p.a, p.b, p.c);
    let scale = p.d / p.n as f64;
    accumulate(term_count(p), |j| Ok(positive_log(h, (c * j + a) * scale)? - positive_log(h, (c * j + b) * scale)?))
}

/// `E_n = D_n / K_n`, computed directly as the product of `H` quotients.
/// Requires `d = 1` (absorb other scales with [`ProductParams::normalized`]).
pub fn eval_e(p: &ProductParams, big_h: &FunctionSpec) -> Result<ProductValue> {
    if p.d != 1.0 {
        return Err(Error::Precondition(format!("E_n needs d = 1, got d = {}", p.d)));
    }
    if !big_h.kind().is_c_like() {
        return Err(Error::KindMismatch {
            name: big_h.name().to_owned(),
            expected: "C",
            found: big_h.kind().to_string(),
        });
    }
    eval_d(p, big_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func_catalog::{catalog, lookup, to_c};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn motivating(n: u64) -> ProductParams {
        ProductParams::new(5.0, 3.0, 4.0, FRAC_PI_2, FRAC_PI_2, n).unwrap()
    }

    #[test]
    fn term_count_examples() {
        // 8 (pi/2) / (2 pi) - 5/4 = 0.75
        assert_eq!(term_count(&motivating(8)), 0);
        // 1 - 5/4 = -0.25
        assert_eq!(term_count(&motivating(4)), -1);
        assert_eq!(term_count(&motivating(1)), -1);
        assert_eq!(term_count(&motivating(9)), 1);
    }

    #[test]
    fn compatibility_equality_needs_cd_above_one() {
        assert!(matches!(ProductParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 10), Err(Error::InvalidParams(_))));
        assert!(ProductParams::new(1.0, 1.0, 2.0, 1.0, 2.0, 10).is_ok());
        assert!(ProductParams::new(1.0, 1.0, 2.0, 1.0, 2.5, 10).is_err());
        assert!(ProductParams::with_compat_override(1.0, 1.0, 1.0, 1.0, 1.0, 10).is_ok());
        assert!(ProductParams::new(-1.0, 1.0, 2.0, 1.0, 1.0, 10).is_err());
        assert!(ProductParams::new(1.0, 1.0, 2.0, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn k_examples() {
        assert_relative_eq!(eval_k(&motivating(8)).value(), 5.0 / 3.0, max_relative = 1e-15);
        // n = 12: 12/4 - 5/4 = 1.75, so m = 1
        assert_eq!(eval_k(&motivating(12)).m, 1);
        assert_relative_eq!(eval_k(&motivating(12)).value(), 15.0 / 7.0, max_relative = 1e-15);
        let flat = ProductParams::new(2.0, 2.0, 4.0, 1.0, 1.0, 1000).unwrap();
        assert_eq!(eval_k(&flat).value(), 1.0);
        let empty = eval_k(&motivating(4));
        assert_eq!((empty.log_value, empty.m, empty.terms), (0.0, -1, 0));
    }

    #[test]
    fn d_examples() {
        let sin = lookup("sin").unwrap();
        let d8 = eval_d(&motivating(8), &sin).unwrap();
        assert_eq!(d8.m, 0);
        let oracle = (5.0 * FRAC_PI_2 / 8.0).sin() / (3.0 * FRAC_PI_2 / 8.0).sin();
        assert_relative_eq!(d8.value(), oracle, max_relative = 1e-15);
        assert!((d8.value() - 1.496606).abs() < 5e-7);

        let identity = lookup("identity").unwrap();
        for n in [8, 100, 12345] {
            assert_eq!(eval_d(&motivating(n), &identity).unwrap(), eval_k(&motivating(n)));
        }
        let flat = ProductParams::new(3.0, 3.0, 4.0, FRAC_PI_2, FRAC_PI_2, 500).unwrap();
        assert_eq!(eval_d(&flat, &sin).unwrap().log_value, 0.0);
    }

    #[test]
    fn e_examples() {
        let one = lookup("one").unwrap();
        let p = ProductParams::new(5.0, 3.0, 4.0, 1.0, 1.0, 777).unwrap();
        assert_eq!(eval_e(&p, &one).unwrap().value(), 1.0);

        let sin = lookup("sin").unwrap();
        let sinc = to_c(&sin).unwrap();
        let p = ProductParams::new(5.0, 3.0, 4.0, 1.0, FRAC_PI_2, 5000).unwrap();
        let e = eval_e(&p, &sinc).unwrap().value();
        let via_dk = (eval_d(&p, &sin).unwrap().log_value - eval_k(&p).log_value).exp();
        assert_relative_eq!(e, via_dk, max_relative = 1e-12);

        let flat = ProductParams::new(3.0, 3.0, 4.0, 1.0, 1.0, 50).unwrap();
        assert_eq!(eval_e(&flat, &sinc).unwrap().value(), 1.0);
        assert!(matches!(eval_e(&motivating(50), &sinc), Err(Error::Precondition(_))));
        assert!(matches!(eval_e(&p, &sin), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn non_positive_values_are_hypothesis_failures() {
        // cos turns negative past pi/2, so eps = 3 drags in negative factors
        let p = ProductParams::new(5.0, 3.0, 4.0, 1.0, 3.0, 100).unwrap();
        let err = eval_d(&p, &lookup("cos").unwrap()).unwrap_err();
        assert!(matches!(err, Error::PositivityViolation { .. }));
    }

    #[test]
    fn factors_below_one_for_decreasing_h() {
        let sinc = to_c(&lookup("sin").unwrap()).unwrap();
        let p = ProductParams::new(5.0, 3.0, 4.0, 1.0, FRAC_PI_2, 2000).unwrap();
        for j in 0..=term_count(&p) {
            let j = j as f64;
            assert!(sinc.eval((4.0 * j + 5.0) / 2000.0) < sinc.eval((4.0 * j + 3.0) / 2000.0));
        }
        assert!(eval_e(&p, &sinc).unwrap().value() < 1.0);
    }

    #[test]
    fn identity_specialization_bound() {
        let identity = lookup("identity").unwrap();
        let p = ProductParams::new(2.5, 1.25, 0.75, 1.3, 0.9, 40_000).unwrap();
        // generic path with the identity written out as a plain S-function
        let plain = FunctionSpec::new("x", FunctionKind::S, |x| x);
        let generic = eval_d(&p, &plain).unwrap();
        let k = eval_k(&p);
        assert!((generic.log_value - k.log_value).abs() <= 1e-13 * (k.m + 1) as f64);
        assert_eq!(eval_d(&p, &identity).unwrap(), k);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inversion_cancels(
            a in 0.5f64..8.0, b in 0.5f64..8.0, c in 0.5f64..8.0, n in 50u64..5000, idx in 0usize..14,
        ) {
            let f = &catalog()[idx];
            prop_assume!(f.note().is_none());
            let eps = 0.5f64.min(c);
            let p = ProductParams::new(a, b, c, 1.0, eps, n).unwrap();
            let fwd = eval_d(&p, f).unwrap();
            let back = eval_d(&p.swapped(), f).unwrap();
            prop_assert_eq!(fwd.m, back.m);
            prop_assert!((fwd.log_value + back.log_value).abs() <= 1e-12 * (fwd.m + 1).max(1) as f64);
        }

        #[test]
        fn term_bound_is_maximal(
            a in 0.1f64..10.0, b in 0.1f64..10.0, c in 0.1f64..10.0, d in 0.1f64..3.0,
            frac in 0.05f64..1.0, n in 1u64..100_000,
        ) {
            let eps = frac * c * d;
            let p = ProductParams::new(a, b, c, d, eps, n).unwrap();
            let m = term_count(&p) as f64;
            let top = a.max(b);
            let last = (c * m + top) * d / n as f64;
            if m >= 0.0 {
                prop_assert!(last <= eps * (1.0 + 1e-11));
            }
            prop_assert!((c * (m + 1.0) + top) * d / n as f64 > eps * (1.0 - 1e-11));
        }
    }
}
