//! Drift terms `a(t, x)` for the quasilinear equation.

use std::fmt;
use std::sync::Arc;

use crate::scalar::Real;

pub type DriftFn<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

/// A named drift `a(t, x)` with optional `da/dx`.
///
/// Callers are responsible for `a` being globally Lipschitz in `x` with
/// linear growth; nothing here checks it.
#[derive(Clone)]
pub struct DriftFunction<T> {
    name: String,
    eval: DriftFn<T>,
    x_derivative: Option<DriftFn<T>>,
    holder_exponent: Option<T>,
}

impl<T> fmt::Debug for DriftFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DriftFunction")
            .field("name", &self.name)
            .field("has_x_derivative", &self.x_derivative.is_some())
            .finish()
    }
}

impl<T: Real> DriftFunction<T> {
    pub fn new(name: impl Into<String>, eval: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        Self { name: name.into(), eval: Arc::new(eval), x_derivative: None, holder_exponent: None }
    }

    pub fn with_x_derivative(mut self, d: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        self.x_derivative = Some(Arc::new(d));
        self
    }

    /// Hölder exponent in time for non-autonomous drifts; reporting only.
    pub fn with_holder_exponent(mut self, zeta: T) -> Self {
        self.holder_exponent = Some(zeta);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, t: T, x: T) -> T {
        (self.eval)(t, x)
    }

    #[inline]
    pub fn x_derivative(&self, t: T, x: T) -> Option<T> {
        self.x_derivative.as_ref().map(|d| d(t, x))
    }

    pub fn has_x_derivative(&self) -> bool {
        self.x_derivative.is_some()
    }

    /// Declared Hölder exponent; autonomous drifts count as 1.
    pub fn holder_exponent(&self) -> T {
        self.holder_exponent.unwrap_or_else(T::one)
    }

    /// `alpha * x + a(t, x)`: the linear term folded into the drift.
    pub fn with_linear_term(&self, alpha: T) -> Self {
        let inner = Arc::clone(&self.eval);
        let mut out = Self {
            name: format!("{}+linear", self.name),
            eval: Arc::new(move |t, x| alpha * x + inner(t, x)),
            x_derivative: None,
            holder_exponent: self.holder_exponent,
        };
        if let Some(d) = &self.x_derivative {
            let d = Arc::clone(d);
            out.x_derivative = Some(Arc::new(move |t, x| alpha + d(t, x)));
        }
        out
    }

    /// `a = 0`: the SDE reduces to geometric fBm.
    pub fn zero() -> Self {
        Self::new("zero", |_, _| T::zero()).with_x_derivative(|_, _| T::zero())
    }

    /// `a(x) = x`.
    pub fn linear() -> Self {
        Self::new("linear", |_, x| x).with_x_derivative(|_, _| T::one())
    }

    /// `a(x) = 4x / (1 + x^2)`, the main test problem.
    pub fn quasi_rational() -> Self {
        Self::new("quasi_rational", |_, x: T| {
            let four = T::lit(4.0);
            four * x / (T::one() + x * x)
        })
        .with_x_derivative(|_, x: T| {
            let q = T::one() + x * x;
            T::lit(4.0) * (T::one() - x * x) / (q * q)
        })
    }

    /// `a(x) = cos x`.
    pub fn cosine() -> Self {
        Self::new("cosine", |_, x: T| x.cos()).with_x_derivative(|_, x: T| -x.sin())
    }

    /// `a(x) = 25 log(1 + x^2)`.
    pub fn log_square() -> Self {
        Self::new("log_square", |_, x: T| T::lit(25.0) * (x * x).ln_1p())
            .with_x_derivative(|_, x: T| T::lit(50.0) * x / (T::one() + x * x))
    }

    /// Looks up one of the built-in drifts by name.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "zero" => Self::zero(),
            "linear" => Self::linear(),
            "quasi_rational" => Self::quasi_rational(),
            "cosine" => Self::cosine(),
            "log_square" => Self::log_square(),
            _ => return None,
        })
    }
}

pub const BUILTIN_DRIFTS: [&str; 5] = ["zero", "linear", "quasi_rational", "cosine", "log_square"];
