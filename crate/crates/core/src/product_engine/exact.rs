//! Exact rational evaluation of `K_n`, used as the oracle for the floating
//! point path and for the Gamma-function identity.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{term_count, ProductParams};
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_CAP: u64 = 100_000;

// Largest denominator accepted when recovering a rational from an f64.
const MAX_RECOVERED_DENOMINATOR: i64 = 1_000_000;

/// The rational with the smallest denominator (at most 10^6) whose nearest
/// f64 is exactly `x`, if there is one.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    if !x.is_finite() || x <= 0.0 {
        return None;
    }
    // Continued-fraction convergents of x.
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > MAX_RECOVERED_DENOMINATOR {
            return None;
        }
        if p2 as f64 / q2 as f64 == x {
            return Some(BigRational::new(p2.into(), q2.into()));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

fn product_tree(factors: &[BigUint]) -> BigUint {
    match factors.len() {
        0 => BigUint::one(),
        1 => factors[0].clone(),
        len => {
            let (lo, hi) = factors.split_at(len / 2);
            product_tree(lo) * product_tree(hi)
        }
    }
}

fn to_positive_parts(x: &BigRational, name: &str) -> Result<(BigUint, BigUint)> {
    if !x.is_positive() {
        return Err(Error::InvalidParams(format!("{name} must be positive, got {x}")));
    }
    Ok((x.numer().magnitude().clone(), x.denom().magnitude().clone()))
}

/// `prod_{j=0}^{m} (c j + a) / (c j + b)` as a reduced fraction.
///
/// Numerator and denominator are built as integer product trees and reduced
/// once at the end.
pub fn k_product_exact(a: &BigRational, b: &BigRational, c: &BigRational, m: i64, cap: u64) -> Result<BigRational> {
    let (pa, qa) = to_positive_parts(a, "a")?;
    let (pb, qb) = to_positive_parts(b, "b")?;
    let (pc, qc) = to_positive_parts(c, "c")?;
    if m < 0 {
        return Ok(BigRational::one());
    }
    let terms = m as u64 + 1;
    if m as u64 > cap {
        return Err(Error::ResourceLimit { m: m as u64, cap });
    }
    // (c j + a) / (c j + b) = (pc qa j + pa qc) qb / ((pc qb j + pb qc) qa)
    let (step_a, base_a) = (&pc * &qa, &pa * &qc);
    let (step_b, base_b) = (&pc * &qb, &pb * &qc);
    let numer: Vec<BigUint> = (0..terms).map(|j| &step_a * j + &base_a).collect();
    let denom: Vec<BigUint> = (0..terms).map(|j| &step_b * j + &base_b).collect();
    let exp = u32::try_from(terms).map_err(|_| Error::ResourceLimit { m: m as u64, cap })?;
    let numer = product_tree(&numer) * qb.pow(exp);
    let denom = product_tree(&denom) * qa.pow(exp);
    let g = numer.gcd(&denom);
    Ok(BigRational::new_raw(BigInt::from_biguint(Sign::Plus, numer / &g), BigInt::from_biguint(Sign::Plus, denom / &g)))
}

/// Exact `K_n` for parameters whose `a`, `b`, `c` are rationals (recovered
/// from their f64 values with denominators up to 10^6).
pub fn eval_k_exact(p: &ProductParams, cap: u64) -> Result<BigRational> {
    let recover = |v: f64, name: &str| {
        rational_from_f64(v).ok_or_else(|| Error::Unsupported(format!("{name} = {v} is not a recognisable rational")))
    };
    let (a, b, c) = (recover(p.a(), "a")?, recover(p.b(), "b")?, recover(p.c(), "c")?);
    k_product_exact(&a, &b, &c, term_count(p), cap)
}

/// Correctly scaled f64 value of a positive rational of any size.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let (n, d) = (x.numer().magnitude(), x.denom().magnitude());
    // Bring the quotient into [2^63, 2^65) before dividing.
    let shift = 64 + d.bits() as i64 - n.bits() as i64;
    let q = if shift >= 0 { (n << shift as u64) / d } else { n / (d << (-shift) as u64) };
    let mantissa = q.to_f64().expect("quotient has about 64 bits");
    let value = mantissa * 2f64.powi(-shift as i32);
    if x.is_negative() {
        -value
    } else {
        value
    }
}
