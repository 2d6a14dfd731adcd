//! Finite products of S-function quotients and their asymptotics.
//!
//! For positive reals `a, b, c, d`, a cutoff `eps` and an S-function `h`
//! (something that behaves like `sin` near the origin) the product
//!
//! ```text
//! D_n = prod_{j=0}^{m} h((c j + a) d / n) / h((c j + b) d / n)
//! ```
//!
//! grows like `C * n^((a - b) / c)`. This crate evaluates `D_n`, its
//! "cancelled" counterpart `K_n` and their quotient `E_n`, computes the
//! Gamma-function asymptote of `K_n`, extrapolates `lim E_n` to estimate `C`,
//! and checks the supporting inequalities numerically on parameter grids.
//!
//! Modules:
//! - [`func_catalog`]: S- and C-function specs, classifiers and combinators.
//! - [`product_engine`]: the term bound `m(n)` and the products `D_n`, `K_n`, `E_n`.
//! - [`asymptotics`]: log-Gamma, the `K_n` asymptote and closed-form limits.
//! - [`limit_estimator`]: series generation, extrapolation and rate fitting.
//! - [`lemma_checks`]: per-term and sequence-level inequality checks.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep every digit they were computed with.
#![allow(clippy::excessive_precision)]

pub mod asymptotics;
mod error;
pub mod func_catalog;
pub mod lemma_checks;
pub mod limit_estimator;
pub mod numerics;
pub mod product_engine;

pub use error::{Error, Result};
pub use func_catalog::{FunctionKind, FunctionSpec, TaylorSignature};
pub use product_engine::{ProductParams, ProductValue};
