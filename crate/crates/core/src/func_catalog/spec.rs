use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{derivative1, derivative2};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionKind {
    S,
    C,
    Identity,
    ConstantOne,
}

impl FunctionKind {
    /// S-functions and the identity (the S side of the catalog).
    pub fn is_s_like(self) -> bool {
        matches!(self, FunctionKind::S | FunctionKind::Identity)
    }

    /// C-functions and the constant one (the C side of the catalog).
    pub fn is_c_like(self) -> bool {
        matches!(self, FunctionKind::C | FunctionKind::ConstantOne)
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionKind::S => "S",
            FunctionKind::C => "C",
            FunctionKind::Identity => "identity",
            FunctionKind::ConstantOne => "constant-one",
        })
    }
}

/// Leading behaviour at the origin.
///
/// For an S-function `h(x) = alpha * (x - lambda * x^k) + O(x^(k+1))` with
/// `k >= 3`; for a C-function `H(x) = alpha * (1 - lambda * x^k) + O(x^(k+1))`
/// with `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorSignature {
    pub alpha: f64,
    pub lambda: f64,
    pub k: u32,
}

impl TaylorSignature {
    pub fn new(alpha: f64, lambda: f64, k: u32) -> Self {
        Self { alpha, lambda, k }
    }

    pub fn validate_for(&self, kind: FunctionKind) -> Result<()> {
        let min_k = match kind {
            FunctionKind::S => 3,
            FunctionKind::C => 2,
            other => return Err(Error::Precondition(format!("{other} functions carry no Taylor signature"))),
        };
        if !(self.alpha > 0.0 && self.lambda > 0.0) || self.k < min_k {
            return Err(Error::Precondition(format!(
                "invalid {kind} signature (alpha = {}, lambda = {}, k = {})",
                self.alpha, self.lambda, self.k
            )));
        }
        Ok(())
    }

    /// `alpha * (x - lambda * x^k)`.
    pub fn truncation_s(&self, x: f64) -> f64 {
        self.alpha * (x - self.lambda * x.powi(self.k as i32))
    }

    /// `alpha * (1 - lambda * x^k)`.
    pub fn truncation_c(&self, x: f64) -> f64 {
        self.alpha * (1.0 - self.lambda * x.powi(self.k as i32))
    }
}

/// A real function together with what the rest of the crate needs to know
/// about it. Immutable once built; cloning shares the closures.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    kind: FunctionKind,
    eval: RealFn,
    d1: Option<RealFn>,
    d2: Option<RealFn>,
    taylor: Option<TaylorSignature>,
    closed_form_epsilon: Option<f64>,
    domain_radius: f64,
    note: Option<String>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("closed_d1", &self.d1.is_some())
            .field("closed_d2", &self.d2.is_some())
            .field("taylor", &self.taylor)
            .field("closed_form_epsilon", &self.closed_form_epsilon)
            .field("domain_radius", &self.domain_radius)
            .finish()
    }
}

pub const DEFAULT_DOMAIN_RADIUS: f64 = 10.0;

impl FunctionSpec {
    pub fn new(name: impl Into<String>, kind: FunctionKind, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            kind,
            eval: Arc::new(eval),
            d1: None,
            d2: None,
            taylor: None,
            closed_form_epsilon: None,
            domain_radius: DEFAULT_DOMAIN_RADIUS,
            note: None,
        }
    }

    pub fn with_d1(mut self, d1: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Arc::new(d1));
        self
    }

    pub fn with_d2(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d2 = Some(Arc::new(d2));
        self
    }

    pub fn with_derivatives(
        self,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.with_d1(d1).with_d2(d2)
    }

    pub(crate) fn with_raw_derivatives(mut self, d1: Option<RealFn>, d2: Option<RealFn>) -> Self {
        self.d1 = d1;
        self.d2 = d2;
        self
    }

    pub fn with_taylor(mut self, taylor: TaylorSignature) -> Self {
        self.taylor = Some(taylor);
        self
    }

    pub(crate) fn with_optional_taylor(mut self, taylor: Option<TaylorSignature>) -> Self {
        self.taylor = taylor;
        self
    }

    pub fn with_closed_form_epsilon(mut self, eps: f64) -> Self {
        self.closed_form_epsilon = Some(eps);
        self
    }

    pub fn with_domain_radius(mut self, radius: f64) -> Self {
        self.domain_radius = radius;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn taylor(&self) -> Option<TaylorSignature> {
        self.taylor
    }

    pub fn closed_form_epsilon(&self) -> Option<f64> {
        self.closed_form_epsilon
    }

    pub fn domain_radius(&self) -> f64 {
        self.domain_radius
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn has_closed_d1(&self) -> bool {
        self.d1.is_some()
    }

    pub fn has_closed_d2(&self) -> bool {
        self.d2.is_some()
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn d1(&self, x: f64) -> f64 {
        match &self.d1 {
            Some(d1) => d1(x),
            None => derivative1(&*self.eval, x),
        }
    }

    /// Second derivative. Without a closed form it differentiates the closed
    /// first derivative when there is one, and the function itself otherwise.
    pub fn d2(&self, x: f64) -> f64 {
        match (&self.d2, &self.d1) {
            (Some(d2), _) => d2(x),
            (None, Some(d1)) => derivative1(&**d1, x),
            (None, None) => derivative2(&*self.eval, x),
        }
    }

    pub fn eval_fn(&self) -> RealFn {
        Arc::clone(&self.eval)
    }

    /// First derivative as a shareable closure (closed form or fallback).
    pub fn d1_fn(&self) -> RealFn {
        match &self.d1 {
            Some(d1) => Arc::clone(d1),
            None => {
                let spec = self.clone();
                Arc::new(move |x| spec.d1(x))
            }
        }
    }

    pub fn d2_fn(&self) -> RealFn {
        match &self.d2 {
            Some(d2) => Arc::clone(d2),
            None => {
                let spec = self.clone();
                Arc::new(move |x| spec.d2(x))
            }
        }
    }

    pub(crate) fn closed_d1(&self) -> Option<RealFn> {
        self.d1.clone()
    }

    pub(crate) fn closed_d2(&self) -> Option<RealFn> {
        self.d2.clone()
    }

    /// `x ↦ f(scale * x)`.
    ///
    /// Used to absorb the argument scale `d` into the function so that
    /// `D_n(a, b, c, d, eps; h) = D_n(a, b, c, 1, eps / d; h(d·))`.
    pub fn rescaled(&self, scale: f64) -> Result<FunctionSpec> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParams(format!("scale must be positive, got {scale}")));
        }
        if scale == 1.0 {
            return Ok(self.clone());
        }
        let f = self.eval_fn();
        let d1 = self.closed_d1().map(|g| -> RealFn { Arc::new(move |x| scale * g(scale * x)) });
        let d2 = self.closed_d2().map(|g| -> RealFn { Arc::new(move |x| scale * scale * g(scale * x)) });
        let taylor = self.taylor.map(|t| match self.kind {
            FunctionKind::S => TaylorSignature::new(t.alpha * scale, t.lambda * scale.powi(t.k as i32 - 1), t.k),
            _ => TaylorSignature::new(t.alpha, t.lambda * scale.powi(t.k as i32), t.k),
        });
        // A scaled identity is linear but no longer the identity.
        let kind = match self.kind {
            FunctionKind::Identity => FunctionKind::S,
            k => k,
        };
        let mut out = FunctionSpec::new(format!("{}[{}x]", self.name, scale), kind, move |x| f(scale * x))
            .with_raw_derivatives(d1, d2)
            .with_optional_taylor(taylor)
            .with_domain_radius(self.domain_radius / scale);
        if let Some(eps) = self.closed_form_epsilon {
            out = out.with_closed_form_epsilon(eps / scale);
        }
        if let Some(note) = &self.note {
            out = out.with_note(note.clone());
        }
        Ok(out)
    }
}
