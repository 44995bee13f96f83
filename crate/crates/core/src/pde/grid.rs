use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform periodic grid, node `j` at `j * dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    pub n: usize,
    pub length: T,
    pub dx: T,
}

impl<T: Scalar> Grid<T> {
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 16 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("need at least 16 cells, got {n}"),
            });
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::NonPositive {
                quantity: "domain length",
                value: length.as_f64(),
            });
        }
        Ok(Self {
            n,
            length,
            dx: length / T::from_usize_lossy(n),
        })
    }

    pub fn x(&self, j: usize) -> T {
        T::from_usize_lossy(j) * self.dx
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(T) -> T) -> Vec<T> {
        (0..self.n).map(|j| f(self.x(j))).collect()
    }

    /// Periodic trapezoidal sum `dx * sum(f)`.
    pub fn integrate(&self, f: &[T]) -> T {
        self.dx * f.iter().copied().sum::<T>()
    }

    /// Discrete `L^2` norm.
    pub fn l2(&self, f: &[T]) -> T {
        (self.dx * f.iter().map(|&a| a * a).sum::<T>()).sqrt()
    }

    pub fn check_len(&self, f: &[T]) -> Result<()> {
        if f.len() == self.n {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: self.n,
                found: f.len(),
            })
        }
    }
}

/// Depth and velocity on a periodic grid at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldPair<T> {
    pub grid: Grid<T>,
    pub h: Vec<T>,
    pub u: Vec<T>,
    pub t: T,
}

impl<T: Scalar> FieldPair<T> {
    pub fn new(grid: Grid<T>, h: Vec<T>, u: Vec<T>, t: T) -> Result<Self> {
        grid.check_len(&h)?;
        grid.check_len(&u)?;
        Ok(Self { grid, h, u, t })
    }

    pub fn constant(grid: Grid<T>, h0: T, u0: T) -> Self {
        Self {
            grid,
            h: vec![h0; grid.n],
            u: vec![u0; grid.n],
            t: T::zero(),
        }
    }

    pub fn mass(&self) -> T {
        self.grid.integrate(&self.h)
    }

    pub fn momentum(&self) -> T {
        self.grid.dx * self.h.iter().zip(&self.u).map(|(&h, &u)| h * u).sum::<T>()
    }

    pub fn min_depth(&self) -> T {
        self.h.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_depth(&self) -> T {
        self.h.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn max_speed(&self) -> T {
        self.u.iter().map(|u| u.abs()).fold(T::zero(), T::max)
    }

    /// Reflection `x -> L - x` with `u -> -u`; node `j` maps to node `n - j`.
    pub fn reflected(&self) -> Self {
        let n = self.grid.n;
        let idx = |j: usize| (n - j) % n;
        Self {
            grid: self.grid,
            h: (0..n).map(|j| self.h[idx(j)]).collect(),
            u: (0..n).map(|j| -self.u[idx(j)]).collect(),
            t: self.t,
        }
    }
}

/// Parameters of a method-of-lines run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig<T> {
    pub delta: T,
    pub eps: T,
    /// Fixed step; when `None` it is chosen from the stability bound at the
    /// start of every output interval.
    pub dt: Option<T>,
    pub t_end: T,
    pub cavitation_floor: T,
    pub cfl: T,
    /// Largest admissible `max |u|` before the run is declared unstable.
    pub blowup_velocity: T,
}

impl<T: Scalar> SimConfig<T> {
    pub fn new(delta: T, eps: T, t_end: T) -> Result<Self> {
        let cfg = Self {
            delta,
            eps,
            dt: None,
            t_end,
            cavitation_floor: T::lit(1e-6),
            cfl: T::lit(0.25),
            blowup_velocity: T::lit(1e3),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_dt(mut self, dt: T) -> Result<Self> {
        self.dt = Some(dt);
        self.validate()?;
        Ok(self)
    }

    /// `delta = 0` is accepted and yields the shallow-water subsystem.
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, reason: String| Err(Error::InvalidParameter { name, reason });
        if !(self.delta >= T::zero()) || !self.delta.is_finite() {
            return bad("delta", format!("must be non-negative, got {}", self.delta));
        }
        if !(self.eps >= T::zero() && self.eps < T::one()) {
            return bad("eps", format!("must lie in [0, 1), got {}", self.eps));
        }
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return bad("t_end", format!("must be non-negative, got {}", self.t_end));
        }
        if let Some(dt) = self.dt {
            if !(dt > T::zero()) || !dt.is_finite() {
                return bad("dt", format!("must be positive, got {dt}"));
            }
        }
        if !(self.cavitation_floor > T::zero()) {
            return bad("cavitation_floor", "must be positive".into());
        }
        if !(self.cfl > T::zero()) {
            return bad("cfl", "must be positive".into());
        }
        if !(self.blowup_velocity > T::zero()) {
            return bad("blowup_velocity", "must be positive".into());
        }
        Ok(())
    }

    /// Largest stable step for `state`: the advective bound
    /// `cfl dx / (max|u| + sqrt(max h))`, further capped by the explicit
    /// diffusion limit `2 delta h_min^2 / (3 eps)` when both are positive.
    pub fn stable_dt(&self, state: &FieldPair<T>) -> T {
        let speed = state.max_speed() + state.max_depth().max(T::zero()).sqrt();
        let mut dt = self.cfl * state.grid.dx / speed;
        if self.eps > T::zero() {
            let hmin = state.min_depth();
            let diffusive = if self.delta > T::zero() {
                T::lit(2.0) * self.delta * hmin * hmin / (T::lit(3.0) * self.eps)
            } else {
                T::lit(0.5) * state.grid.dx * state.grid.dx / self.eps
            };
            dt = dt.min(diffusive);
        }
        dt
    }
}
