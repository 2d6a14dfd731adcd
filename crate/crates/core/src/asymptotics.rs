//! Closed-form side: log-Gamma, the `K_n` Gamma identity and asymptote,
//! the upper bound for the constant `C`, and the `e^{-x^k}` limit.

use serde::Serialize;

use crate::error::{Error, Result};

/// `K_n ~ constant * n^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptote {
    pub constant: f64,
    pub exponent: f64,
    /// Natural log of `constant`; the constant is formed from it.
    pub log_constant: f64,
}

const LANCZOS_G: f64 = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128.
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;

fn lanczos_sum(x: f64) -> f64 {
    let mut sum = 0.0;
    for i in (1..LANCZOS.len()).rev() {
        sum += LANCZOS[i] / (x + i as f64);
    }
    sum + LANCZOS[0]
}

// ln Γ(x) for x >= 0.5.
fn log_gamma_lanczos(x: f64) -> f64 {
    let t = x + LANCZOS_G + 0.5;
    (x + 0.5) * t.ln() - t + HALF_LN_2PI + (lanczos_sum(x) / x).ln()
}

/// Natural log of the Gamma function for `x > 0`.
///
/// Lanczos approximation (g = 607/128, 15 terms) with the reflection formula
/// below 1/2.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {x}")));
    }
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        Ok((pi / (pi * x).sin()).ln() - log_gamma_lanczos(1.0 - x))
    } else {
        Ok(log_gamma_lanczos(x))
    }
}

/// `ln Γ(z + s1) - ln Γ(z + s2)` for `z + s1, z + s2 >= 0.5`.
///
/// The two large logarithms are never formed separately, so the difference
/// keeps its relative accuracy when `z` is large.
fn log_gamma_shift_ratio(z: f64, s1: f64, s2: f64) -> f64 {
    let (x, y) = (z + s1, z + s2);
    let diff = s1 - s2;
    let tx = x + LANCZOS_G + 0.5;
    let ty = y + LANCZOS_G + 0.5;
    // (x + 1/2) ln tx - (y + 1/2) ln ty - (tx - ty)
    let main = diff * tx.ln() + (y + 0.5) * (diff / ty).ln_1p() - diff;
    let tail = (lanczos_sum(x) * y / (lanczos_sum(y) * x)).ln();
    main + tail
}

fn check_positive(pairs: &[(&str, f64)]) -> Result<()> {
    for &(name, v) in pairs {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(())
}

/// `prod_{j=0}^{m} (c j + a)/(c j + b)` through the Gamma identity
/// `Γ(b/c)/Γ(a/c) · Γ(m+1+a/c)/Γ(m+1+b/c)`.
pub fn k_gamma_identity(a: f64, b: f64, c: f64, m: u64) -> Result<f64> {
    check_positive(&[("a", a), ("b", b), ("c", c)])?;
    let (sa, sb) = (a / c, b / c);
    let head = log_gamma(sb)? - log_gamma(sa)?;
    let tail = log_gamma_shift_ratio(m as f64 + 1.0, sa, sb);
    Ok((head + tail).exp())
}

/// `K_n ~ Γ(b/c)/Γ(a/c) · (eps/c)^((a-b)/c) · n^((a-b)/c)` (for `d = 1`;
/// pass `eps / d` otherwise).
pub fn k_asymptote(a: f64, b: f64, c: f64, eps: f64) -> Result<Asymptote> {
    check_positive(&[("a", a), ("b", b), ("c", c), ("eps", eps)])?;
    let exponent = growth_exponent(a, b, c);
    let log_constant = log_gamma(b / c)? - log_gamma(a / c)? + exponent * (eps / c).ln();
    Ok(Asymptote { constant: log_constant.exp(), exponent, log_constant })
}

/// Upper bound for the constant `C` in `D_n ~ C n^((a-b)/c)` when `a > b`:
/// the `K_n` asymptote constant, since every factor of `E_n` is below one.
pub fn c_upper_bound(a: f64, b: f64, c: f64, eps: f64) -> Result<f64> {
    if !(a > b) {
        return Err(Error::Precondition(format!("the upper bound needs a > b, got a = {a}, b = {b}")));
    }
    Ok(k_asymptote(a, b, c, eps)?.constant)
}

/// `lim D_n(a, b, c, d, ((k-1)/k)^(1/k); e^{-x^k}) = e^{-(k-1)/k · (a-b)/c}`.
pub fn exp_power_limit(a: f64, b: f64, c: f64, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(format!("k must be at least 2, got {k}")));
    }
    check_positive(&[("a", a), ("b", b), ("c", c)])?;
    let kf = k as f64;
    Ok((-(kf - 1.0) / kf * (a - b) / c).exp())
}

/// `(a - b) / c`, the power of `n` in `D_n ~ C n^((a-b)/c)`.
pub fn growth_exponent(a: f64, b: f64, c: f64) -> f64 {
    debug_assert!(c > 0.0);
    (a - b) / c
}
