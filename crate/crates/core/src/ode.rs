//! Dormand-Prince 5(4) embedded Runge-Kutta integrator with step-size control.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Right-hand side `dy/dt = f(t, y)` of an autonomous or non-autonomous system.
pub trait OdeSystem<T, const N: usize> {
    fn rhs(&self, t: T, y: &[T; N]) -> [T; N];
}

impl<T, const N: usize, F> OdeSystem<T, N> for F
where
    F: Fn(T, &[T; N]) -> [T; N],
{
    fn rhs(&self, t: T, y: &[T; N]) -> [T; N] {
        self(t, y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options<T> {
    pub atol: T,
    pub rtol: T,
    /// Initial trial step; chosen automatically when `None`.
    pub h_init: Option<T>,
    pub h_max: T,
    pub h_min: T,
}

impl<T: Scalar> Default for Dopri5Options<T> {
    fn default() -> Self {
        Self {
            atol: T::lit(1e-10),
            rtol: T::lit(1e-10),
            h_init: None,
            h_max: T::infinity(),
            h_min: T::lit(1e-14),
        }
    }
}

/// An accepted step as seen by the observer.
#[derive(Debug, Clone, Copy)]
pub struct AcceptedStep<T, const N: usize> {
    pub t: T,
    pub y: [T; N],
    pub dydt: [T; N],
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Stats {
    pub rhs_evals: usize,
    pub accepted: usize,
    pub rejected: usize,
}

struct Tableau<T> {
    c: [T; 7],
    a: [[T; 6]; 7],
    e: [T; 7],
}

impl<T: Scalar> Tableau<T> {
    fn new() -> Self {
        let l = T::lit;
        let z = T::zero();
        Self {
            c: [z, l(0.2), l(0.3), l(0.8), l(8.0 / 9.0), T::one(), T::one()],
            a: [
                [z; 6],
                [l(0.2), z, z, z, z, z],
                [l(3.0 / 40.0), l(9.0 / 40.0), z, z, z, z],
                [l(44.0 / 45.0), l(-56.0 / 15.0), l(32.0 / 9.0), z, z, z],
                [
                    l(19372.0 / 6561.0),
                    l(-25360.0 / 2187.0),
                    l(64448.0 / 6561.0),
                    l(-212.0 / 729.0),
                    z,
                    z,
                ],
                [
                    l(9017.0 / 3168.0),
                    l(-355.0 / 33.0),
                    l(46732.0 / 5247.0),
                    l(49.0 / 176.0),
                    l(-5103.0 / 18656.0),
                    z,
                ],
                [
                    l(35.0 / 384.0),
                    z,
                    l(500.0 / 1113.0),
                    l(125.0 / 192.0),
                    l(-2187.0 / 6784.0),
                    l(11.0 / 84.0),
                ],
            ],
            e: [
                l(71.0 / 57600.0),
                z,
                l(-71.0 / 16695.0),
                l(71.0 / 1920.0),
                l(-17253.0 / 339200.0),
                l(22.0 / 525.0),
                l(-1.0 / 40.0),
            ],
        }
    }
}

/// Integrates from `t0` towards `t_end`, handing every accepted step to `observer`.
///
/// The observer may stop the integration early with `ControlFlow::Break(Ok(()))`
/// or abort it with an error. Returns the last accepted point and statistics.
pub fn integrate<T, S, O, const N: usize>(
    system: &S,
    t0: T,
    y0: [T; N],
    t_end: T,
    opts: &Dopri5Options<T>,
    mut observer: O,
) -> Result<(AcceptedStep<T, N>, Stats)>
where
    T: Scalar,
    S: OdeSystem<T, N>,
    O: FnMut(&AcceptedStep<T, N>) -> ControlFlow<Result<()>>,
{
    let tab = Tableau::<T>::new();
    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k0 = system.rhs(t, &y);
    stats.rhs_evals += 1;

    let first = AcceptedStep { t, y, dydt: k0 };
    if let ControlFlow::Break(res) = observer(&first) {
        res?;
        return Ok((first, stats));
    }

    let span = t_end - t0;
    if span <= T::zero() {
        return Ok((first, stats));
    }
    let mut h = opts
        .h_init
        .unwrap_or_else(|| initial_step(&k0, &y, opts, span))
        .min(opts.h_max)
        .min(span);
    let mut last = first;

    let safety = T::lit(0.9);
    let fac_min = T::lit(0.2);
    let fac_max = T::lit(5.0);
    let inv_order = T::lit(0.2);

    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let mut k = [[T::zero(); N]; 7];
        k[0] = k0;
        for stage in 1..7 {
            let mut ys = y;
            for (i, yi) in ys.iter_mut().enumerate() {
                let mut acc = T::zero();
                for (j, kj) in k.iter().enumerate().take(stage) {
                    acc = acc + tab.a[stage][j] * kj[i];
                }
                *yi = *yi + h * acc;
            }
            k[stage] = system.rhs(t + tab.c[stage] * h, &ys);
        }
        stats.rhs_evals += 6;

        // stage 7 is evaluated at the fifth-order solution (FSAL)
        let mut y_new = y;
        for (i, yi) in y_new.iter_mut().enumerate() {
            let mut acc = T::zero();
            for j in 0..6 {
                acc = acc + tab.a[6][j] * k[j][i];
            }
            *yi = *yi + h * acc;
        }
        let mut err_sq = T::zero();
        for i in 0..N {
            let mut e = T::zero();
            for j in 0..7 {
                e = e + tab.e[j] * k[j][i];
            }
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            let r = h * e / scale;
            err_sq = err_sq + r * r;
        }
        let err = (err_sq / T::from_usize_lossy(N)).sqrt();
        if !err.is_finite() {
            h = h * fac_min;
            stats.rejected += 1;
            if h < opts.h_min {
                return Err(Error::StepSizeUnderflow { xi: t.as_f64() });
            }
            continue;
        }

        let factor = if err == T::zero() {
            fac_max
        } else {
            (safety * err.powf(-inv_order)).max(fac_min).min(fac_max)
        };

        if err <= T::one() {
            t = t + h;
            y = y_new;
            k0 = k[6];
            stats.accepted += 1;
            last = AcceptedStep { t, y, dydt: k0 };
            if let ControlFlow::Break(res) = observer(&last) {
                res?;
                break;
            }
            h = (h * factor).min(opts.h_max);
        } else {
            stats.rejected += 1;
            h = h * factor.min(T::one());
            if h < opts.h_min {
                return Err(Error::StepSizeUnderflow { xi: t.as_f64() });
            }
        }
    }
    Ok((last, stats))
}

fn initial_step<T: Scalar, const N: usize>(
    f0: &[T; N],
    y0: &[T; N],
    opts: &Dopri5Options<T>,
    span: T,
) -> T {
    let mut d0 = T::zero();
    let mut d1 = T::zero();
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y0[i].abs();
        d0 = d0 + (y0[i] / sc).powi(2);
        d1 = d1 + (f0[i] / sc).powi(2);
    }
    let h = if d0 < T::lit(1e-10) || d1 < T::lit(1e-10) {
        T::lit(1e-6)
    } else {
        T::lit(0.01) * (d0 / d1).sqrt()
    };
    h.min(span).max(opts.h_min)
}
