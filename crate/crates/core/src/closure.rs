//! Shock-state algebra for the shallow-water hyperbolic part.
//!
//! All states are labelled in the stretched traveling coordinate
//! `xi = -(x - s t) / sqrt(delta)`: `left` is the undisturbed state ahead of
//! the front (`xi -> -inf`) and `right` the state behind it (`xi -> +inf`).
//! In physical `x` the two labels are swapped; see [`ClosureData::x_space`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Depth and momentum on one side of a shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State<T> {
    pub zeta: T,
    pub w: T,
}

impl<T: Scalar> State<T> {
    pub fn new(zeta: T, w: T) -> Result<Self> {
        let state = Self { zeta, w };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > T::zero()) || !self.zeta.is_finite() {
            return Err(Error::NonPositive {
                quantity: "depth",
                value: self.zeta.as_f64(),
            });
        }
        if !self.w.is_finite() {
            return Err(Error::InvalidParameter {
                name: "momentum",
                reason: format!("not finite: {}", self.w),
            });
        }
        Ok(())
    }

    pub fn velocity(&self) -> T {
        self.w / self.zeta
    }

    /// Fast characteristic speed `w / zeta + sqrt(zeta)`.
    pub fn characteristic_speed(&self) -> T {
        self.velocity() + self.zeta.sqrt()
    }

    /// Image under the reflection `w -> -w` that maps front shocks to back shocks.
    pub fn mirrored(&self) -> Self {
        Self {
            zeta: self.zeta,
            w: -self.w,
        }
    }
}

/// Returns `(K1, K2)` for a wave of speed `s` leaving `left`.
pub fn k_constants<T: Scalar>(left: &State<T>, s: T) -> Result<(T, T)> {
    left.validate()?;
    let k1 = -s * left.zeta + left.w;
    let k2 = -s * left.w + left.zeta * left.zeta / T::lit(2.0) + left.w * left.w / left.zeta;
    Ok((k1, k2))
}

/// Smallest admissible speed for a front leaving `left`.
pub fn lax_speed_bound<T: Scalar>(left: &State<T>) -> T {
    left.characteristic_speed()
}

/// Closed-form downstream state, without checking admissibility.
///
/// For speeds at or below the Lax bound the formula still evaluates, but the
/// returned state no longer lies above `left`.
pub fn closed_form_right_state<T: Scalar>(left: &State<T>, s: T) -> Result<State<T>> {
    let (k1, _) = k_constants(left, s)?;
    let two = T::lit(2.0);
    let radicand = T::lit(8.0) * k1 * k1 + left.zeta.powi(3);
    let zeta = -left.zeta / two + (radicand / left.zeta).sqrt() / two;
    let w = (two * left.w - T::lit(3.0) * s * left.zeta) / two
        + s * radicand.sqrt() / (two * left.zeta.sqrt());
    Ok(State { zeta, w })
}

/// Downstream state connected to `left` by an admissible front of speed `s`.
pub fn right_state<T: Scalar>(left: &State<T>, s: T) -> Result<State<T>> {
    left.validate()?;
    let bound = lax_speed_bound(left);
    if !(s > bound) || !s.is_finite() {
        return Err(Error::InadmissibleSpeed {
            speed: s.as_f64(),
            bound: bound.as_f64(),
        });
    }
    closed_form_right_state(left, s)
}

/// Residuals `(r1, r2)` of the two Rankine-Hugoniot relations at speed `s`.
pub fn rh_residual<T: Scalar>(left: &State<T>, right: &State<T>, s: T) -> Result<(T, T)> {
    left.validate()?;
    right.validate()?;
    if left.zeta == right.zeta || left.w == right.w {
        return Err(Error::DegenerateJump);
    }
    let two = T::lit(2.0);
    let r1 = s - (left.w - right.w) / (left.zeta - right.zeta);
    let flux_jump = left.zeta * left.zeta / two - right.zeta * right.zeta / two
        + left.w * left.w / left.zeta
        - right.w * right.w / right.zeta;
    let r2 = s - flux_jump / (left.w - right.w);
    Ok((r1, r2))
}

/// Strict Lax ordering `lambda(left) < s < lambda(right)`.
pub fn lax_holds<T: Scalar>(left: &State<T>, right: &State<T>, s: T) -> bool {
    if !(left.zeta > T::zero()) || !(right.zeta > T::zero()) {
        return false;
    }
    left.characteristic_speed() < s && s < right.characteristic_speed()
}

pub fn lax_check<T: Scalar>(data: &ClosureData<T>) -> bool {
    lax_holds(&data.left, &data.right, data.s)
}

/// A closed shock: speed, both limit states, the integration constants and
/// the effective damping `c = s eps / sqrt(delta)` of the reduced ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureData<T> {
    pub s: T,
    pub left: State<T>,
    pub right: State<T>,
    pub k1: T,
    pub k2: T,
    pub eps: T,
    pub delta: T,
    pub c: T,
}

fn validate_dissipation<T: Scalar>(eps: T, delta: T) -> Result<()> {
    if !(eps >= T::zero() && eps < T::one()) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: format!("must lie in [0, 1), got {eps}"),
        });
    }
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(Error::NonPositive {
            quantity: "delta",
            value: delta.as_f64(),
        });
    }
    Ok(())
}

impl<T: Scalar> ClosureData<T> {
    /// Closes an admissible front of speed `s` ahead of which the state is `left`.
    pub fn new(left: State<T>, s: T, eps: T, delta: T) -> Result<Self> {
        validate_dissipation(eps, delta)?;
        let right = right_state(&left, s)?;
        Self::assemble(left, right, s, eps, delta)
    }

    /// Same as [`ClosureData::new`] but accepts speeds at or below the Lax bound.
    pub fn new_nonlax(left: State<T>, s: T, eps: T, delta: T) -> Result<Self> {
        validate_dissipation(eps, delta)?;
        let right = closed_form_right_state(&left, s)?;
        right.validate()?;
        Self::assemble(left, right, s, eps, delta)
    }

    /// Builds closure data from explicit states; no admissibility check.
    pub fn from_states(left: State<T>, right: State<T>, s: T, eps: T, delta: T) -> Result<Self> {
        validate_dissipation(eps, delta)?;
        right.validate()?;
        Self::assemble(left, right, s, eps, delta)
    }

    fn assemble(left: State<T>, right: State<T>, s: T, eps: T, delta: T) -> Result<Self> {
        let (k1, k2) = k_constants(&left, s)?;
        Ok(Self {
            s,
            left,
            right,
            k1,
            k2,
            eps,
            delta,
            c: s * eps / delta.sqrt(),
        })
    }

    /// `K2 - s K1` evaluated from the left state.
    pub fn energy_flux_left(&self) -> T {
        self.k1 * self.k1 / self.left.zeta + self.left.zeta * self.left.zeta / T::lit(2.0)
    }

    /// `K2 - s K1` evaluated from the right state.
    pub fn energy_flux_right(&self) -> T {
        self.k1 * self.k1 / self.right.zeta + self.right.zeta * self.right.zeta / T::lit(2.0)
    }

    /// Upper depth bound `(K1 / zeta_l)^2`; also the solitary-wave amplitude.
    pub fn zeta_bar(&self) -> T {
        let r = self.k1 / self.left.zeta;
        r * r
    }

    pub fn swapped(&self) -> Self {
        let mut out = *self;
        out.left = self.right;
        out.right = self.left;
        let (k1, k2) = k_constants(&out.left, out.s).expect("validated state");
        out.k1 = k1;
        out.k2 = k2;
        out
    }

    /// Reflection `(s, w) -> (-s, -w)` onto the back-shock family.
    pub fn mirrored(&self) -> Self {
        let mut out = *self;
        out.s = -self.s;
        out.left = self.left.mirrored();
        out.right = self.right.mirrored();
        let (k1, k2) = k_constants(&out.left, out.s).expect("validated state");
        out.k1 = k1;
        out.k2 = k2;
        out.c = -self.c;
        out
    }

    pub fn rh_residual(&self) -> Result<(T, T)> {
        rh_residual(&self.left, &self.right, self.s)
    }

    /// The same shock in physical-x labels: `(h_l, q_l)` behind, `(h_r, q_r)` ahead.
    pub fn x_space(&self) -> XSpaceStates<T> {
        XSpaceStates {
            behind: self.right,
            ahead: self.left,
        }
    }
}

/// Physical-space labelling of a front: `behind` is `(h_l, q_l)`, `ahead` is `(h_r, q_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XSpaceStates<T> {
    pub behind: State<T>,
    pub ahead: State<T>,
}
