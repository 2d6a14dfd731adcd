//! Small numerical building blocks shared by the other modules.

use std::sync::OnceLock;

/// Kahan-Babuska-Neumaier compensated summation.
///
/// Besides the sum it tracks the total magnitude of the compensation terms,
/// which bounds how much the naive sum would have drifted.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    comp_abs: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        let c = if self.sum.abs() >= x.abs() { (self.sum - t) + x } else { (x - t) + self.sum };
        self.comp += c;
        self.comp_abs += c.abs();
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// Accumulated magnitude of the compensation terms.
    pub fn compensation(&self) -> f64 {
        self.comp_abs
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of a sequence.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}

// Unit roundoff of f64.
const U: f64 = f64::EPSILON;

fn step(x: f64, power: f64) -> f64 {
    U.powf(power) * x.abs().max(1.0)
}

/// First derivative by finite differences.
///
/// Central differences with step `u^(1/3) * max(|x|, 1)`; when the stencil
/// would cross below zero a second-order forward stencil is used instead,
/// so functions only defined on `[0, R]` are never evaluated at negative
/// arguments.
pub fn derivative1(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = step(x, 1.0 / 3.0);
    if x >= 0.0 && x < h {
        (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h)
    } else {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }
}

/// Second derivative by finite differences, same stencil policy as
/// [`derivative1`] with step `u^(1/4) * max(|x|, 1)`.
pub fn derivative2(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = step(x, 0.25);
    if x >= 0.0 && x < h {
        (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2.0 * h) - f(x + 3.0 * h)) / (h * h)
    } else {
        (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    }
}

const GAUSS_LEGENDRE_POINTS: usize = 20;

/// Nodes and weights of the Gauss-Legendre rule on `[0, 1]`.
pub fn gauss_legendre_unit() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_LEGENDRE_POINTS;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            // Newton iteration on P_n from the Chebyshev-like initial guess.
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            rule.push(((1.0 - z) / 2.0, w / 2.0));
        }
        rule
    })
}

/// `∫_0^1 f(t) dt` with the fixed Gauss-Legendre rule.
pub fn integrate_unit(f: impl Fn(f64) -> f64) -> f64 {
    compensated_sum(gauss_legendre_unit().iter().map(|&(t, w)| w * f(t)))
}
