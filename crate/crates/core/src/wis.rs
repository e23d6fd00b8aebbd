//! Closed-form Wick-Itô-Skorohod quantities shared by the solvers.
//!
//! For `dX = (alpha X + a(t, X)) dt + beta X dB^H` the linear part is solved
//! exactly by geometric fBm. The remaining ODE for `Z~ = J~ X` is driven by the
//! translated integrating factor
//!
//! ```text
//! J~^t(s) = exp(-alpha s + beta^2/2 (t^{2H} - (t - s)^{2H}) - beta B^H(s)),  0 <= s <= t
//! ```
//!
//! whose value at the anchor has the reciprocal
//! `exp(alpha t - beta^2/2 t^{2H} + beta B^H(t))`.

use crate::drift::DriftFunction;
use crate::error::{Error, Result};
use crate::fbm::{FbmPath, HurstParameter};
use crate::scalar::{pow_2h, Real};

/// Largest exponent magnitude accepted before reporting overflow.
pub const EXPONENT_BOUND: f64 = 700.0;

/// `exp(arg)`, failing loudly instead of returning `inf` or `0`.
#[inline]
pub fn exp_checked<T: Real>(arg: T) -> Result<T> {
    let v = arg.exp();
    if arg.abs() > T::lit(EXPONENT_BOUND) || !v.is_finite() || v == T::zero() {
        return Err(Error::NumericOverflow { argument: arg.as_f64(), bound: EXPONENT_BOUND });
    }
    Ok(v)
}

/// Parameters of `dX = (alpha X + a(t, X)) dt + beta X dB^H`, `X(0) = x0` on `[0, T]`.
#[derive(Debug, Clone)]
pub struct SdeProblem<T> {
    pub alpha: T,
    pub beta: T,
    pub x0: T,
    pub t_final: T,
    pub hurst: HurstParameter<T>,
    pub drift: DriftFunction<T>,
}

impl<T: Real> SdeProblem<T> {
    pub fn new(alpha: T, beta: T, x0: T, t_final: T, hurst: HurstParameter<T>, drift: DriftFunction<T>) -> Result<Self> {
        if !(t_final > T::zero()) || !t_final.is_finite() {
            return Err(Error::Argument(format!("final time must be positive, got {t_final}")));
        }
        if !(alpha.is_finite() && beta.is_finite() && x0.is_finite()) {
            return Err(Error::Argument("alpha, beta and x0 must be finite".into()));
        }
        Ok(Self { alpha, beta, x0, t_final, hurst, drift })
    }

    /// Same problem on `[0, t_final]`.
    pub fn with_t_final(&self, t_final: T) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.x0, t_final, self.hurst, self.drift.clone())
    }

    pub fn with_drift(&self, drift: DriftFunction<T>) -> Self {
        Self { drift, ..self.clone() }
    }

    /// Checks that `path` was sampled for this problem.
    pub fn check_path(&self, path: &FbmPath<T>) -> Result<()> {
        if path.hurst() != self.hurst {
            return Err(Error::Argument(format!(
                "path has H={}, problem has H={}",
                path.hurst().value(),
                self.hurst.value()
            )));
        }
        if path.grid().t_final() != self.t_final {
            return Err(Error::Argument(format!(
                "path ends at {}, problem at {}",
                path.grid().t_final(),
                self.t_final
            )));
        }
        Ok(())
    }
}

/// `J~^t(s)` for a fixed anchor `t`, with `t^{2H}` computed once.
#[derive(Debug, Clone, Copy)]
pub(crate) struct IntegratingFactor<T> {
    alpha: T,
    beta: T,
    half_beta_sq: T,
    two_h: T,
    anchor: T,
    anchor_2h: T,
}

impl<T: Real> IntegratingFactor<T> {
    pub(crate) fn new(alpha: T, beta: T, hurst: HurstParameter<T>, anchor: T) -> Self {
        let two_h = hurst.two_h();
        Self { alpha, beta, half_beta_sq: T::lit(0.5) * beta * beta, two_h, anchor, anchor_2h: pow_2h(anchor, two_h) }
    }

    #[inline]
    pub(crate) fn at(&self, s: T, b_at_s: T) -> Result<T> {
        let lag = pow_2h(self.anchor - s, self.two_h);
        exp_checked(-self.alpha * s + self.half_beta_sq * (self.anchor_2h - lag) - self.beta * b_at_s)
    }
}

fn check_time<T: Real>(what: &str, t: T, t_final: T) -> Result<()> {
    if t < T::zero() || t > t_final || t.is_nan() {
        return Err(Error::Domain(format!("{what} = {t} outside [0, {t_final}]")));
    }
    Ok(())
}

/// Closed-form geometric fBm `x0 exp(alpha t - beta^2/2 t^{2H} + beta B^H(t))`
/// at every node of `path`. The drift of `problem` is ignored.
pub fn gfbm_exact<T: Real>(problem: &SdeProblem<T>, path: &FbmPath<T>) -> Result<Vec<T>> {
    problem.check_path(path)?;
    let grid = path.grid();
    path.values()
        .iter()
        .enumerate()
        .map(|(i, &b)| Ok(problem.x0 * tilde_j_inverse_at_anchor(problem, grid.time(i), b)?))
        .collect()
}

/// `J~^{anchor_t}(s)` given `B^H(s) = b_at_s`. Requires `0 <= s <= anchor_t <= T`.
pub fn tilde_j<T: Real>(problem: &SdeProblem<T>, anchor_t: T, s: T, b_at_s: T) -> Result<T> {
    check_time("anchor", anchor_t, problem.t_final)?;
    check_time("s", s, problem.t_final)?;
    if s > anchor_t {
        return Err(Error::Argument(format!("s = {s} lies after the anchor {anchor_t}")));
    }
    IntegratingFactor::new(problem.alpha, problem.beta, problem.hurst, anchor_t).at(s, b_at_s)
}

/// `1 / J~^t(t) = exp(alpha t - beta^2/2 t^{2H} + beta B^H(t))`.
pub fn tilde_j_inverse_at_anchor<T: Real>(problem: &SdeProblem<T>, t: T, b_at_t: T) -> Result<T> {
    check_time("t", t, problem.t_final)?;
    let t_2h = pow_2h(t, problem.hurst.two_h());
    exp_checked(problem.alpha * t - T::lit(0.5) * problem.beta * problem.beta * t_2h + problem.beta * b_at_t)
}

/// Ordinary-exponential form of the Wick exponential of `beta B^H(t)`:
/// `exp(beta B^H(t) - beta^2/2 t^{2H})`. Has unit mean.
pub fn wick_exp_gaussian<T: Real>(beta: T, h: HurstParameter<T>, t: T, b_at_t: T) -> Result<T> {
    if t < T::zero() {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    exp_checked(beta * b_at_t - T::lit(0.5) * beta * beta * pow_2h(t, h.two_h()))
}
