//! Semi-discretization and time stepping.

use serde::{Deserialize, Serialize};

use super::banded::solve_cyclic_tridiagonal;
use super::grid::{FieldPair, Grid, SimConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Second-order central first derivative on a periodic grid.
pub fn d1<T: Scalar>(f: &[T], dx: T) -> Vec<T> {
    let n = f.len();
    let inv = T::one() / (T::lit(2.0) * dx);
    (0..n)
        .map(|j| (f[(j + 1) % n] - f[(j + n - 1) % n]) * inv)
        .collect()
}

/// Second-order central second derivative on a periodic grid.
pub fn d2<T: Scalar>(f: &[T], dx: T) -> Vec<T> {
    let n = f.len();
    let inv = T::one() / (dx * dx);
    (0..n)
        .map(|j| (f[(j + 1) % n] - T::lit(2.0) * f[j] + f[(j + n - 1) % n]) * inv)
        .collect()
}

fn check_floor<T: Scalar>(h: &[T], floor: T, time: T) -> Result<()> {
    let min = h.iter().copied().fold(T::infinity(), T::min);
    if min >= floor {
        Ok(())
    } else {
        Err(Error::Cavitation {
            time: time.as_f64(),
            min_depth: min.as_f64(),
            floor: floor.as_f64(),
        })
    }
}

/// Solves `w - (delta / (3 h)) (h^3 w_x)_x = rhs` on the periodic grid.
///
/// `h^3` is averaged to the half nodes so the operator is conservative and the
/// matrix strictly diagonally dominant. A cavitation error is raised (with an
/// unknown time, reported as NaN) if `min h < floor`.
pub fn elliptic_solve<T: Scalar>(
    grid: &Grid<T>,
    h: &[T],
    rhs: &[T],
    delta: T,
    floor: T,
) -> Result<Vec<T>> {
    grid.check_len(h)?;
    grid.check_len(rhs)?;
    check_floor(h, floor, T::nan())?;
    if delta == T::zero() {
        return Ok(rhs.to_vec());
    }
    let n = grid.n;
    let h3: Vec<T> = h.iter().map(|&a| a * a * a).collect();
    let half = T::lit(0.5);
    let hp: Vec<T> = (0..n).map(|j| half * (h3[j] + h3[(j + 1) % n])).collect();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for j in 0..n {
        let k = delta / (T::lit(3.0) * h[j] * grid.dx * grid.dx);
        let hm = hp[(j + n - 1) % n];
        a.push(-k * hm);
        b.push(T::one() + k * (hp[j] + hm));
        c.push(-k * hp[j]);
    }
    solve_cyclic_tridiagonal(&a, &b, &c, rhs)
}

/// Applies the discrete elliptic operator, the inverse of [`elliptic_solve`].
pub fn elliptic_apply<T: Scalar>(grid: &Grid<T>, h: &[T], w: &[T], delta: T) -> Vec<T> {
    let n = grid.n;
    let h3: Vec<T> = h.iter().map(|&a| a * a * a).collect();
    let half = T::lit(0.5);
    (0..n)
        .map(|j| {
            let (jm, jp) = ((j + n - 1) % n, (j + 1) % n);
            let hp = half * (h3[j] + h3[jp]);
            let hm = half * (h3[jm] + h3[j]);
            let flux = hp * (w[jp] - w[j]) - hm * (w[j] - w[jm]);
            w[j] - delta / (T::lit(3.0) * h[j]) * flux / (grid.dx * grid.dx)
        })
        .collect()
}

/// Time derivatives `(h_t, u_t)` of the semi-discrete system.
pub fn rhs_eval<T: Scalar>(state: &FieldPair<T>, config: &SimConfig<T>) -> Result<(Vec<T>, Vec<T>)> {
    let grid = &state.grid;
    grid.check_len(&state.h)?;
    grid.check_len(&state.u)?;
    check_floor(&state.h, config.cavitation_floor, state.t)?;
    let (h, u, dx) = (&state.h, &state.u, grid.dx);
    let n = grid.n;

    let q: Vec<T> = h.iter().zip(u).map(|(&a, &b)| a * b).collect();
    let h_t: Vec<T> = d1(&q, dx).into_iter().map(|a| -a).collect();

    let hx = d1(h, dx);
    let ux = d1(u, dx);
    let mut forcing: Vec<T> = (0..n).map(|j| -hx[j] - u[j] * ux[j]).collect();
    if config.delta > T::zero() {
        let uxx = d2(u, dx);
        let g: Vec<T> = (0..n)
            .map(|j| h[j] * h[j] * h[j] * (u[j] * uxx[j] - ux[j] * ux[j]))
            .collect();
        let gx = d1(&g, dx);
        let third = config.delta / T::lit(3.0);
        for j in 0..n {
            forcing[j] = forcing[j] + third * gx[j] / h[j];
        }
    }
    if config.eps > T::zero() {
        let qxx = d2(&q, dx);
        for j in 0..n {
            forcing[j] = forcing[j] + config.eps * qxx[j] / h[j];
        }
    }
    let u_t = elliptic_solve(grid, h, &forcing, config.delta, config.cavitation_floor)
        .map_err(|e| with_time(e, state.t))?;
    Ok((h_t, u_t))
}

fn with_time<T: Scalar>(e: Error, t: T) -> Error {
    match e {
        Error::Cavitation {
            min_depth, floor, ..
        } => Error::Cavitation {
            time: t.as_f64(),
            min_depth,
            floor,
        },
        other => other,
    }
}

fn axpy<T: Scalar>(state: &FieldPair<T>, dt: T, k: &(Vec<T>, Vec<T>)) -> FieldPair<T> {
    FieldPair {
        grid: state.grid,
        h: state.h.iter().zip(&k.0).map(|(&a, &b)| a + dt * b).collect(),
        u: state.u.iter().zip(&k.1).map(|(&a, &b)| a + dt * b).collect(),
        t: state.t + dt,
    }
}

/// One classical Runge-Kutta step of size `dt`.
pub fn step_with<T: Scalar>(state: &FieldPair<T>, config: &SimConfig<T>, dt: T) -> Result<FieldPair<T>> {
    let half = dt / T::lit(2.0);
    let k1 = rhs_eval(state, config)?;
    let k2 = rhs_eval(&axpy(state, half, &k1), config)?;
    let k3 = rhs_eval(&axpy(state, half, &k2), config)?;
    let k4 = rhs_eval(&axpy(state, dt, &k3), config)?;
    let sixth = dt / T::lit(6.0);
    let two = T::lit(2.0);
    let combine = |y: &[T], a: &[T], b: &[T], c: &[T], d: &[T]| -> Vec<T> {
        (0..y.len())
            .map(|j| y[j] + sixth * (a[j] + two * b[j] + two * c[j] + d[j]))
            .collect()
    };
    let next = FieldPair {
        grid: state.grid,
        h: combine(&state.h, &k1.0, &k2.0, &k3.0, &k4.0),
        u: combine(&state.u, &k1.1, &k2.1, &k3.1, &k4.1),
        t: state.t + dt,
    };
    let vmax = next.max_speed();
    if !(vmax <= config.blowup_velocity) || next.h.iter().any(|h| !h.is_finite()) {
        return Err(Error::Instability {
            time: next.t.as_f64(),
            max_velocity: vmax.as_f64(),
        });
    }
    check_floor(&next.h, config.cavitation_floor, next.t)?;
    Ok(next)
}

/// One step with the configured or stability-limited `dt`.
pub fn step<T: Scalar>(state: &FieldPair<T>, config: &SimConfig<T>) -> Result<FieldPair<T>> {
    let dt = config.dt.unwrap_or_else(|| config.stable_dt(state));
    step_with(state, config, dt)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassRecord<T> {
    pub t: T,
    pub mass: T,
}

/// Snapshots of a run with its conserved-quantity log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub snapshots: Vec<FieldPair<T>>,
    pub mass_log: Vec<MassRecord<T>>,
    pub steps: usize,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last(&self) -> &FieldPair<T> {
        self.snapshots.last().expect("trajectory holds the initial state")
    }

    /// Snapshot closest to time `t`.
    pub fn at(&self, t: T) -> &FieldPair<T> {
        self.snapshots
            .iter()
            .min_by(|a, b| {
                (a.t - t)
                    .abs()
                    .partial_cmp(&(b.t - t).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("trajectory holds the initial state")
    }

    /// Largest relative mass deviation from the initial record.
    pub fn mass_drift(&self) -> T {
        let m0 = self.mass_log[0].mass;
        self.mass_log
            .iter()
            .map(|r| ((r.mass - m0) / m0).abs())
            .fold(T::zero(), T::max)
    }
}

/// Integrates from `init` to `config.t_end`, recording the initial state and
/// a snapshot at every time in `snapshot_times` (plus `t_end`).
///
/// Each output interval is split into equal steps. Without a fixed `dt` the
/// step is chosen from the stability bound at the start of the interval and
/// re-chosen if the bound later drops below two thirds of it; a bound a
/// thousand times below the initial one is reported as an instability.
pub fn simulate<T: Scalar>(
    init: &FieldPair<T>,
    config: &SimConfig<T>,
    snapshot_times: &[T],
) -> Result<Trajectory<T>> {
    config.validate()?;
    let mut times: Vec<T> = snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > init.t && t < config.t_end)
        .collect();
    times.push(config.t_end);
    times.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    times.dedup();

    let mut state = init.clone();
    let mut out = Trajectory {
        snapshots: vec![state.clone()],
        mass_log: vec![MassRecord {
            t: state.t,
            mass: state.mass(),
        }],
        steps: 0,
    };
    let sloppy = T::lit(1.5);
    // a thousandfold collapse of the stable step means the run has blown up
    let dt_floor = config.dt.unwrap_or_else(|| config.stable_dt(&state)) * T::lit(1e-3);
    for &target in &times {
        if target <= state.t {
            continue;
        }
        let t_start = state.t;
        let mut plan = plan_steps(target - t_start, config.dt.unwrap_or_else(|| config.stable_dt(&state)));
        let mut k = 0usize;
        let mut base = t_start;
        while k < plan.0 {
            if config.dt.is_none() && plan.1 > sloppy * config.stable_dt(&state) {
                let dt = config.stable_dt(&state);
                if !(dt >= dt_floor) {
                    return Err(Error::Instability {
                        time: state.t.as_f64(),
                        max_velocity: state.max_speed().as_f64(),
                    });
                }
                base = state.t;
                plan = plan_steps(target - base, dt);
                k = 0;
                continue;
            }
            state = step_with(&state, config, plan.1)?;
            k += 1;
            out.steps += 1;
            // pin the clock to the grid of the interval to avoid drift
            state.t = if k == plan.0 {
                target
            } else {
                base + T::from_usize_lossy(k) * plan.1
            };
        }
        out.mass_log.push(MassRecord {
            t: state.t,
            mass: state.mass(),
        });
        out.snapshots.push(state.clone());
    }
    Ok(out)
}

fn plan_steps<T: Scalar>(span: T, dt_max: T) -> (usize, T) {
    let n = (span / dt_max).ceil().to_usize().unwrap_or(1).max(1);
    (n, span / T::from_usize_lossy(n))
}
