//! S-functions, C-functions and the operations that move between them.
//!
//! An S-function `h` is analytic at 0 with `h(0) = h''(0) = 0`, `h'(0) > 0`
//! and `h'' <= 0` just to the right of 0 (`sin` is the prototype). A
//! C-function `H` has `H(0) > 0`, `H'(0) = 0` and `H'' <= 0` near 0⁺ (`cos`).
//! `h` is an S-function exactly when `h(x) / x` is a C-function.

mod catalog;
mod classify;
mod combinators;
mod epsilon;
mod spec;

pub use catalog::{c_functions, catalog, lookup, s_functions, CATALOG_NAMES};
pub use classify::{classify, Classification, ClassifyReport, ConditionFailure};
pub use combinators::{combine_add, combine_mul, derivative_of_s, scale_module, to_c};
pub use epsilon::{compatibility_cap, find_epsilon, DEFAULT_SCAN_RESOLUTION};
pub use spec::{FunctionKind, FunctionSpec, RealFn, TaylorSignature};

/// Probe radius used when admitting combinator results.
pub const ADMISSION_PROBE_RADIUS: f64 = 0.1;
/// Tolerance used when admitting combinator results.
pub const ADMISSION_TOL: f64 = 1e-9;
