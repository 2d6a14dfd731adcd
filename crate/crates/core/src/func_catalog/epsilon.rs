use super::spec::FunctionSpec;
use crate::error::{Error, Result};

pub const DEFAULT_SCAN_RESOLUTION: usize = 4096;

const VERIFY_POINTS: usize = 1000;
const VERIFY_CURVATURE_TOL: f64 = 1e-10;
// Relative gap below c*d when equality is not allowed (c*d <= 1).
const STRICT_CAP_GAP: f64 = 1e-9;

/// Largest admissible `eps` under the compatibility condition: `eps <= c*d`,
/// with equality only when `c*d > 1`.
pub fn compatibility_cap(cd: f64) -> f64 {
    if cd > 1.0 {
        cd
    } else {
        cd * (1.0 - STRICT_CAP_GAP)
    }
}

fn positive_and_concave(h: &FunctionSpec, x: f64, curvature_tol: f64) -> bool {
    let (v, d2) = (h.eval(x), h.d2(x));
    v > 0.0 && v.is_finite() && d2 <= curvature_tol
}

fn verifies(h: &FunctionSpec, eps: f64) -> bool {
    (0..VERIFY_POINTS).all(|i| {
        let x = eps * i as f64 / (VERIFY_POINTS - 1) as f64;
        positive_and_concave(h, x, VERIFY_CURVATURE_TOL)
    })
}

/// Largest `eps` such that `H > 0` and `H'' <= 0` on `[0, eps]`, capped by
/// the domain radius and the compatibility condition for `cd = c*d`.
///
/// A closed-form epsilon carried by the function is returned unchanged when it
/// fits under the cap and passes a 1000-point check. Otherwise `[0, cap]` is
/// scanned at `scan` points and the first failure is bracketed by bisection.
pub fn find_epsilon(h: &FunctionSpec, cd: f64, scan: usize) -> Result<f64> {
    if !h.kind().is_c_like() {
        return Err(Error::KindMismatch { name: h.name().to_owned(), expected: "C", found: h.kind().to_string() });
    }
    if !(cd > 0.0 && cd.is_finite()) {
        return Err(Error::InvalidParams(format!("c*d must be positive, got {cd}")));
    }
    let upper = h.domain_radius().min(compatibility_cap(cd));

    if let Some(eps) = h.closed_form_epsilon() {
        if eps > 0.0 && eps <= upper && verifies(h, eps) {
            return Ok(eps);
        }
    }

    let no_eps = || Error::NoValidEpsilon { name: h.name().to_owned(), resolution: scan };
    let curvature_tol = if h.has_closed_d2() { 0.0 } else { 1e-6 };
    if scan < 2 || !positive_and_concave(h, 0.0, curvature_tol) {
        return Err(no_eps());
    }
    let grid = |i: usize| upper * i as f64 / (scan - 1) as f64;
    let first_bad = (1..scan).find(|&i| !positive_and_concave(h, grid(i), curvature_tol));
    let Some(bad) = first_bad else { return Ok(upper) };

    let (mut lo, mut hi) = (grid(bad - 1), grid(bad));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if positive_and_concave(h, mid, curvature_tol) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo > 0.0 {
        Ok(lo)
    } else {
        Err(no_eps())
    }
}
