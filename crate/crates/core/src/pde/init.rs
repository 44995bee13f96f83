//! Initial data for the periodic solver.

use super::grid::{FieldPair, Grid};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::twsolve::Profile;

/// Smoothed dam break on the periodic domain:
/// `h = h_right + (h_left - h_right)/2 (tanh(k(x - L/4)) - tanh(k(x - 3L/4)))`, `u = 0`.
///
/// The raised column sits on `[L/4, 3L/4]`, symmetric about `L/2`, so the jump at
/// `3L/4` (deep water behind, shallow ahead) launches the right-moving front and
/// its mirror image the left-moving one.
pub fn dam_break_ic<T: Scalar>(grid: &Grid<T>, h_left: T, h_right: T, steepness: T) -> Result<FieldPair<T>> {
    validate_dam(h_left, h_right, steepness)?;
    let half = T::lit(0.5);
    let (q1, q3) = (grid.length / T::lit(4.0), T::lit(3.0) * grid.length / T::lit(4.0));
    let h = grid.sample(|x| {
        h_right + (h_left - h_right) * half * ((steepness * (x - q1)).tanh() - (steepness * (x - q3)).tanh())
    });
    FieldPair::new(*grid, h, vec![T::zero(); grid.n], T::zero())
}

fn validate_dam<T: Scalar>(h_left: T, h_right: T, steepness: T) -> Result<()> {
    if !(h_right > T::zero()) {
        return Err(Error::NonPositive {
            quantity: "h_right",
            value: h_right.as_f64(),
        });
    }
    if !(h_left >= h_right) {
        return Err(Error::InvalidParameter {
            name: "h_left",
            reason: format!("must not be below h_right = {h_right}, got {h_left}"),
        });
    }
    if !(steepness > T::zero()) {
        return Err(Error::NonPositive {
            quantity: "steepness",
            value: steepness.as_f64(),
        });
    }
    Ok(())
}

fn ln_cosh<T: Scalar>(y: T) -> T {
    let a = y.abs();
    a + (-(T::lit(2.0) * a)).exp().ln_1p() - T::LN_2()
}

/// Exact `int_0^L h dx` of [`dam_break_ic`].
pub fn dam_break_mass<T: Scalar>(length: T, h_left: T, h_right: T, steepness: T) -> T {
    let k = steepness;
    let inner = ln_cosh(T::lit(0.75) * k * length) - ln_cosh(T::lit(0.25) * k * length);
    h_right * length + (h_left - h_right) * inner / k
}

/// Traveling-wave profile placed with its front at `x_front`, moving right.
///
/// The profile joins `zeta_r` behind to `zeta_l` ahead; periodicity is restored
/// by adding a smooth up-step of width `join_width` centred at `x_join`, applied
/// to both depth and momentum so the join carries no spurious mass flux jump.
pub fn traveling_wave_ic<T: Scalar>(
    grid: &Grid<T>,
    profile: &Profile<T>,
    x_front: T,
    x_join: T,
    join_width: T,
) -> Result<FieldPair<T>> {
    if !(join_width > T::zero()) {
        return Err(Error::NonPositive {
            quantity: "join_width",
            value: join_width.as_f64(),
        });
    }
    let cl = &profile.params.closure;
    let (zl, zr) = (cl.left.zeta, cl.right.zeta);
    let (wl, wr) = (cl.left.w, cl.right.w);
    let half = T::lit(0.5);
    let mut h = Vec::with_capacity(grid.n);
    let mut u = Vec::with_capacity(grid.n);
    for j in 0..grid.n {
        let x = grid.x(j);
        let (zeta, w) = traveling_wave_at(profile, x - x_front);
        let blend = half * (T::one() + ((x - x_join) / join_width).tanh());
        let hj = zeta + (zr - zl) * blend;
        let qj = w + (wr - wl) * blend;
        h.push(hj);
        u.push(qj / hj);
    }
    FieldPair::new(*grid, h, u, T::zero())
}

/// Depth and momentum of the traveling wave at offset `x` from its front at `t = 0`.
pub fn traveling_wave_at<T: Scalar>(profile: &Profile<T>, x: T) -> (T, T) {
    let cl = &profile.params.closure;
    let xi = -x / cl.delta.sqrt();
    let zeta = profile.sample(xi).zeta();
    (zeta, cl.s * zeta + cl.k1)
}
