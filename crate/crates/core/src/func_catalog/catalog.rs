use std::f64::consts::{FRAC_2_SQRT_PI, FRAC_PI_2};

use super::spec::{FunctionKind, FunctionSpec, TaylorSignature};

/// Every fixed catalog entry, S side first. `exp_neg_pow<k>` accepts any
/// `k >= 2` through [`lookup`]; the catalog lists k = 2, 3, 4.
pub const CATALOG_NAMES: &[&str] = &[
    "sin",
    "arctan",
    "tanh",
    "asinh",
    "erf",
    "identity",
    "cos",
    "sech",
    "exp_neg_pow2",
    "exp_neg_pow3",
    "exp_neg_pow4",
    "inv_one_plus_sq",
    "one",
    "arccot",
];

const WIDE_DOMAIN: f64 = 1e6;

fn sin() -> FunctionSpec {
    FunctionSpec::new("sin", FunctionKind::S, f64::sin)
        .with_derivatives(f64::cos, |x| -x.sin())
        .with_taylor(TaylorSignature::new(1.0, 1.0 / 6.0, 3))
        // sin(x)/x stays positive and concave on [0, pi/2].
        .with_closed_form_epsilon(FRAC_PI_2)
}

fn arctan() -> FunctionSpec {
    FunctionSpec::new("arctan", FunctionKind::S, f64::atan)
        .with_derivatives(|x| 1.0 / (1.0 + x * x), |x| -2.0 * x / (1.0 + x * x).powi(2))
        .with_taylor(TaylorSignature::new(1.0, 1.0 / 3.0, 3))
}

fn tanh() -> FunctionSpec {
    FunctionSpec::new("tanh", FunctionKind::S, f64::tanh)
        .with_derivatives(
            |x| {
                let s = 1.0 / x.cosh();
                s * s
            },
            |x| {
                let s = 1.0 / x.cosh();
                -2.0 * x.tanh() * s * s
            },
        )
        .with_taylor(TaylorSignature::new(1.0, 1.0 / 3.0, 3))
}

fn asinh() -> FunctionSpec {
    FunctionSpec::new("asinh", FunctionKind::S, f64::asinh)
        .with_derivatives(|x| 1.0 / (1.0 + x * x).sqrt(), |x| -x / (1.0 + x * x).powf(1.5))
        .with_taylor(TaylorSignature::new(1.0, 1.0 / 6.0, 3))
}

fn erf() -> FunctionSpec {
    FunctionSpec::new("erf", FunctionKind::S, libm::erf)
        .with_derivatives(|x| FRAC_2_SQRT_PI * (-x * x).exp(), |x| -2.0 * x * FRAC_2_SQRT_PI * (-x * x).exp())
        .with_taylor(TaylorSignature::new(FRAC_2_SQRT_PI, 1.0 / 3.0, 3))
}

fn identity() -> FunctionSpec {
    FunctionSpec::new("identity", FunctionKind::Identity, |x| x)
        .with_derivatives(|_| 1.0, |_| 0.0)
        .with_domain_radius(WIDE_DOMAIN)
}

fn cos() -> FunctionSpec {
    FunctionSpec::new("cos", FunctionKind::C, f64::cos)
        .with_derivatives(|x| -x.sin(), |x| -x.cos())
        .with_taylor(TaylorSignature::new(1.0, 0.5, 2))
}

fn sech() -> FunctionSpec {
    FunctionSpec::new("sech", FunctionKind::C, |x| 1.0 / x.cosh())
        .with_derivatives(
            |x| -x.tanh() / x.cosh(),
            |x| {
                let (s, t) = (1.0 / x.cosh(), x.tanh());
                s * (t * t - s * s)
            },
        )
        .with_taylor(TaylorSignature::new(1.0, 0.5, 2))
}

/// `e^{-x^k}`, a C-function for every `k >= 2`, positive and concave on
/// `[0, ((k-1)/k)^(1/k)]`.
pub(crate) fn exp_neg_pow(k: u32) -> FunctionSpec {
    let kf = k as f64;
    let ki = k as i32;
    FunctionSpec::new(format!("exp_neg_pow{k}"), FunctionKind::C, move |x| (-x.powi(ki)).exp())
        .with_derivatives(
            move |x| -kf * x.powi(ki - 1) * (-x.powi(ki)).exp(),
            move |x| (kf * kf * x.powi(2 * ki - 2) - kf * (kf - 1.0) * x.powi(ki - 2)) * (-x.powi(ki)).exp(),
        )
        .with_taylor(TaylorSignature::new(1.0, 1.0, k))
        .with_closed_form_epsilon(((kf - 1.0) / kf).powf(1.0 / kf))
}

fn inv_one_plus_sq() -> FunctionSpec {
    FunctionSpec::new("inv_one_plus_sq", FunctionKind::C, |x| 1.0 / (1.0 + x * x))
        .with_derivatives(|x| -2.0 * x / (1.0 + x * x).powi(2), |x| (6.0 * x * x - 2.0) / (1.0 + x * x).powi(3))
        .with_taylor(TaylorSignature::new(1.0, 1.0, 2))
}

fn one() -> FunctionSpec {
    FunctionSpec::new("one", FunctionKind::ConstantOne, |_| 1.0)
        .with_derivatives(|_| 0.0, |_| 0.0)
        .with_domain_radius(WIDE_DOMAIN)
}

/// Inverse cotangent with values in `(0, pi/2]` on `x >= 0`. Commonly listed
/// with the C-functions, but `H'(0) = -1`, so classification rejects it.
fn arccot() -> FunctionSpec {
    FunctionSpec::new("arccot", FunctionKind::C, |x| FRAC_PI_2 - x.atan())
        .with_derivatives(|x| -1.0 / (1.0 + x * x), |x| 2.0 * x / (1.0 + x * x).powi(2))
        .with_note("listed among C-functions in the literature, but H'(0) = -1 != 0")
}

pub fn lookup(name: &str) -> Option<FunctionSpec> {
    let spec = match name {
        "sin" => sin(),
        "arctan" => arctan(),
        "tanh" => tanh(),
        "asinh" => asinh(),
        "erf" => erf(),
        "identity" => identity(),
        "cos" => cos(),
        "sech" => sech(),
        "inv_one_plus_sq" => inv_one_plus_sq(),
        "one" => one(),
        "arccot" => arccot(),
        other => {
            let k: u32 = other.strip_prefix("exp_neg_pow")?.parse().ok()?;
            if k < 2 {
                return None;
            }
            exp_neg_pow(k)
        }
    };
    Some(spec)
}

pub fn catalog() -> Vec<FunctionSpec> {
    CATALOG_NAMES.iter().filter_map(|n| lookup(n)).collect()
}

/// The proper S-functions (identity excluded).
pub fn s_functions() -> Vec<FunctionSpec> {
    catalog().into_iter().filter(|f| f.kind() == FunctionKind::S).collect()
}

/// The C side of the catalog that satisfies the C conditions (constant one
/// included, `arccot` excluded).
pub fn c_functions() -> Vec<FunctionSpec> {
    catalog().into_iter().filter(|f| f.kind().is_c_like() && f.note().is_none()).collect()
}
