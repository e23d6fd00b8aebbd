//! Time stepping for the transformed equation `dZ~/ds = J~(s) a(s, Z~/J~)`.
//!
//! Every scheme advances `Z~` from `x0` on the grid and reconstructs
//! `X(T) = Z~_n / J~_n` at the anchor. Only the `Z~` update differs:
//!
//! | scheme       | update                                                    |
//! |--------------|-----------------------------------------------------------|
//! | `Gbmem`      | `z + dt j a(t, z/j)`                                      |
//! | `MishuraEm`  | as `Gbmem`, with `alpha x` moved into the drift           |
//! | `ExpFreeze`  | `z exp(dt a(t, x) / x)`, `x = z/j`                        |
//! | `Rosenbrock` | `z exp(dt A) + dt (j a(t, x) - A z)`, `A = da/dx(t, x)`   |

use std::fmt;
use std::str::FromStr;

use crate::drift::DriftFunction;
use crate::error::{Error, Result};
use crate::fbm::{FbmPath, TimeGrid};
use crate::scalar::Real;
use crate::wis::{exp_checked, IntegratingFactor, SdeProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverKind {
    Gbmem,
    MishuraEm,
    ExpFreeze,
    Rosenbrock,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [Self::Gbmem, Self::MishuraEm, Self::ExpFreeze, Self::Rosenbrock];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gbmem => "GBMEM",
            Self::MishuraEm => "MishuraEM",
            Self::ExpFreeze => "ExpFreeze",
            Self::Rosenbrock => "Rosenbrock",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "gbmem" => Ok(Self::Gbmem),
            "mishuraem" | "mishura" => Ok(Self::MishuraEm),
            "expfreeze" => Ok(Self::ExpFreeze),
            "rosenbrock" => Ok(Self::Rosenbrock),
            _ => Err(Error::Configuration(format!("unknown solver '{s}'"))),
        }
    }
}

/// Output of one endpoint solve; `x_at_t == z_final / j_final`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointResult<T> {
    pub x_at_t: T,
    pub z_final: T,
    pub j_final: T,
}

/// Approximations at every node, `values[0] = x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathResult<T> {
    pub values: Vec<T>,
}

/// Explicit Euler step for `Z~`.
#[inline]
pub fn step_gbmem<T: Real>(z: T, j_i: T, t_i: T, dt: T, drift: &DriftFunction<T>) -> T {
    let x = z / j_i;
    let a = drift.eval(t_i, x);
    z + dt * j_i * a
}

/// Freezes `g = a/x` over the step. Falls back to the Euler step where
/// `|z / j| < 1e-12` and `g` is undefined.
#[inline]
pub fn step_expfreeze<T: Real>(z: T, j_i: T, t_i: T, dt: T, drift: &DriftFunction<T>) -> Result<T> {
    let x = z / j_i;
    if x.abs() < T::lit(1e-12) {
        return Ok(step_gbmem(z, j_i, t_i, dt, drift));
    }
    let g = drift.eval(t_i, x) / x;
    Ok(z * exp_checked(dt * g)?)
}

/// Lie-Trotter split with the drift Jacobian as the linear part.
#[inline]
pub fn step_rosenbrock<T: Real>(z: T, j_i: T, t_i: T, dt: T, drift: &DriftFunction<T>) -> Result<T> {
    let x = z / j_i;
    let jac = drift.x_derivative(t_i, x).ok_or_else(|| missing_derivative(drift))?;
    let a = drift.eval(t_i, x);
    Ok(z * exp_checked(dt * jac)? + dt * (j_i * a - jac * z))
}

fn missing_derivative<T: Real>(drift: &DriftFunction<T>) -> Error {
    Error::Configuration(format!("Rosenbrock needs da/dx but drift '{}' has none", drift.name()))
}

/// Scheme-specific data resolved once per solve.
struct Scheme<T: Real> {
    kind: SolverKind,
    alpha: T,
    drift: DriftFunction<T>,
}

impl<T: Real> Scheme<T> {
    fn new(problem: &SdeProblem<T>, kind: SolverKind) -> Result<Self> {
        match kind {
            SolverKind::MishuraEm if problem.alpha != T::zero() => Ok(Self {
                kind,
                alpha: T::zero(),
                drift: problem.drift.with_linear_term(problem.alpha),
            }),
            SolverKind::Rosenbrock if !problem.drift.has_x_derivative() => Err(missing_derivative(&problem.drift)),
            _ => Ok(Self { kind, alpha: problem.alpha, drift: problem.drift.clone() }),
        }
    }

    #[inline]
    fn step(&self, z: T, j: T, t: T, dt: T) -> Result<T> {
        match self.kind {
            SolverKind::Gbmem | SolverKind::MishuraEm => Ok(step_gbmem(z, j, t, dt, &self.drift)),
            SolverKind::ExpFreeze => step_expfreeze(z, j, t, dt, &self.drift),
            SolverKind::Rosenbrock => step_rosenbrock(z, j, t, dt, &self.drift),
        }
    }

    /// Runs the recurrence on `grid` anchored at its final time, reading
    /// `B^H(t_i)` from `b[i]`.
    fn run(&self, problem: &SdeProblem<T>, grid: &TimeGrid<T>, b: &[T]) -> Result<EndpointResult<T>> {
        let n = grid.n_steps();
        debug_assert_eq!(b.len(), n + 1);
        let anchor = grid.t_final();
        let dt = grid.dt();
        let factor = IntegratingFactor::new(self.alpha, problem.beta, problem.hurst, anchor);
        let mut z = problem.x0;
        for (i, &b_i) in b[..n].iter().enumerate() {
            let t_i = grid.time(i);
            let j_i = factor.at(t_i, b_i)?;
            z = self.step(z, j_i, t_i, dt)?;
        }
        let j_final = factor.at(anchor, b[n])?;
        Ok(EndpointResult { x_at_t: z / j_final, z_final: z, j_final })
    }
}

/// Approximates `X(T)` on the grid of `path`.
pub fn solve_endpoint<T: Real>(problem: &SdeProblem<T>, kind: SolverKind, path: &FbmPath<T>) -> Result<EndpointResult<T>> {
    problem.check_path(path)?;
    Scheme::new(problem, kind)?.run(problem, path.grid(), path.values())
}

/// Approximates `X(t_k)` at every node by rerunning the endpoint scheme
/// anchored at each `t_k`. Costs `O(n^2)` drift evaluations.
pub fn solve_path<T: Real>(problem: &SdeProblem<T>, kind: SolverKind, path: &FbmPath<T>) -> Result<PathResult<T>> {
    problem.check_path(path)?;
    let scheme = Scheme::new(problem, kind)?;
    let grid = path.grid();
    let b = path.values();
    let mut values = Vec::with_capacity(grid.n_steps() + 1);
    values.push(problem.x0);
    for k in 1..=grid.n_steps() {
        let sub = grid.truncate(k)?;
        values.push(scheme.run(problem, &sub, &b[..=k])?.x_at_t);
    }
    Ok(PathResult { values })
}
