//! Traveling-wave profiles by shooting from the upstream saddle.
//!
//! The orbit leaves `(z_l, 0)` along the unstable eigenvector and is integrated
//! forward in the stretched coordinate `xi` until it settles on `(z_r, 0)`.
//! Physical space is recovered with `x = s t - sqrt(delta) xi`.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::HermiteSegment;
use crate::ode::{self, Dopri5Options};
use crate::phaseplane::{self, f_factored, potential, PhaseParams, Regime};
use crate::scalar::Scalar;

/// A point `(z, v)` of the reduced system, `z = ln(zeta)` and `v = z'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint<T> {
    pub z: T,
    pub v: T,
}

impl<T: Scalar> PhasePoint<T> {
    pub fn zeta(&self) -> T {
        self.z.exp()
    }
}

/// `(z', v')` at `p`.
pub fn vector_field<T: Scalar>(p: &PhasePoint<T>, params: &PhaseParams<T>) -> (T, T) {
    let k = params.stiffness();
    let f = f_factored(p.z.exp(), params.zeta_l(), params.zeta_r());
    (p.v, -k * f - k * params.c() * p.v)
}

/// `v''` along the flow, used for Hermite refinement of inflection points.
fn vector_field_jerk<T: Scalar>(p: &PhasePoint<T>, dv: T, params: &PhaseParams<T>) -> T {
    let k = params.stiffness();
    let zeta = p.z.exp();
    let fp = phaseplane::f_prime(zeta, params).unwrap_or(T::nan());
    -k * fp * zeta * p.v - k * params.c() * dv
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileOptions<T> {
    /// Launch offset along the unstable eigenvector.
    pub eta: T,
    /// Convergence threshold on `|z - z_r| + |v|`.
    pub tol: T,
    pub xi_span: T,
    pub atol: T,
    pub rtol: T,
    /// Largest step; also bounds the sample spacing of the profile.
    pub max_step: T,
    /// Window over which convergence must persist for a node.
    pub node_window: T,
}

impl<T: Scalar> Default for ProfileOptions<T> {
    fn default() -> Self {
        Self {
            eta: T::lit(1e-6),
            tol: T::lit(1e-8),
            xi_span: T::lit(2000.0),
            atol: T::lit(1e-10),
            rtol: T::lit(1e-10),
            max_step: T::lit(0.05),
            node_window: T::lit(10.0),
        }
    }
}

/// Local extremum of the depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum<T> {
    pub xi: T,
    pub zeta: T,
}

/// Sampled traveling-wave orbit with its structural landmarks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Profile<T> {
    pub params: PhaseParams<T>,
    pub xi: Vec<T>,
    pub z: Vec<T>,
    pub zeta: Vec<T>,
    pub v: Vec<T>,
    /// `v'` at each sample, straight from the vector field.
    pub dv: Vec<T>,
    pub maxima: Vec<Extremum<T>>,
    pub minima: Vec<Extremum<T>>,
    pub inflection_xi: Option<T>,
    pub liapunov: Vec<T>,
    pub regime: Regime,
    pub converged: bool,
    /// Saddle eigenvalue used for the launch, kept for tail reconstruction.
    pub launch_rate: T,
}

impl<T: Scalar> Profile<T> {
    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn point(&self, k: usize) -> PhasePoint<T> {
        PhasePoint {
            z: self.z[k],
            v: self.v[k],
        }
    }

    /// Momentum `w = s zeta + K1` at every sample.
    pub fn momentum(&self) -> Vec<T> {
        let cl = &self.params.closure;
        self.zeta.iter().map(|&zeta| cl.s * zeta + cl.k1).collect()
    }

    /// Physical position of stretched coordinate `xi` at time `t`.
    pub fn x_of(&self, xi: T, t: T) -> T {
        let cl = &self.params.closure;
        cl.s * t - cl.delta.sqrt() * xi
    }

    pub fn xi_of(&self, x: T, t: T) -> T {
        let cl = &self.params.closure;
        (cl.s * t - x) / cl.delta.sqrt()
    }

    /// Phase point at arbitrary `xi`, by Hermite interpolation inside the
    /// sampled range, the linear saddle tail before it, and the last sample after it.
    pub fn sample(&self, xi: T) -> PhasePoint<T> {
        let n = self.xi.len();
        if n == 0 {
            return PhasePoint {
                z: self.params.zeta_l().ln(),
                v: T::zero(),
            };
        }
        if xi <= self.xi[0] {
            let zl = self.params.zeta_l().ln();
            let offset = (self.z[0] - zl) * (self.launch_rate * (xi - self.xi[0])).exp();
            return PhasePoint {
                z: zl + offset,
                v: self.launch_rate * offset,
            };
        }
        if xi >= self.xi[n - 1] {
            return self.point(n - 1);
        }
        let k = self.xi.partition_point(|&x| x <= xi).saturating_sub(1).min(n - 2);
        let z = HermiteSegment {
            x0: self.xi[k],
            x1: self.xi[k + 1],
            y0: self.z[k],
            y1: self.z[k + 1],
            m0: self.v[k],
            m1: self.v[k + 1],
        }
        .eval(xi);
        let v = HermiteSegment {
            x0: self.xi[k],
            x1: self.xi[k + 1],
            y0: self.v[k],
            y1: self.v[k + 1],
            m0: self.dv[k],
            m1: self.dv[k + 1],
        }
        .eval(xi);
        PhasePoint { z, v }
    }
}

/// Shoots the traveling wave for `params`.
pub fn integrate_profile<T: Scalar>(
    params: &PhaseParams<T>,
    opts: &ProfileOptions<T>,
) -> Result<Profile<T>> {
    if !(opts.eta >= T::zero()) {
        return Err(Error::InvalidParameter {
            name: "eta",
            reason: format!("launch offset must be non-negative, got {}", opts.eta),
        });
    }
    if !(opts.xi_span > T::zero()) || !(opts.tol > T::zero()) || !(opts.max_step > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "profile options",
            reason: "xi_span, tol and max_step must be positive".into(),
        });
    }

    let regime = phaseplane::classify(params);
    let launch_rate = phaseplane::eigenvalues_at(params.zeta_l(), params)?.minus.re;
    let at_r = phaseplane::eigenvalues_at(params.zeta_r(), params)?;
    let window = match regime {
        Regime::Oscillatory if at_r.minus.im != T::zero() => {
            T::lit(2.0) * T::PI() / at_r.minus.im.abs()
        }
        _ => opts.node_window,
    };

    let zl = params.zeta_l();
    let z_r = params.zeta_r().ln();
    let zbar = params.zeta_bar;
    let slack = T::lit(1e-9) * zbar;

    let system = |_xi: T, y: &[T; 2]| {
        let (dz, dv) = vector_field(&PhasePoint { z: y[0], v: y[1] }, params);
        [dz, dv]
    };
    let y0 = [zl.ln() + opts.eta, launch_rate * opts.eta];
    let ode_opts = Dopri5Options {
        atol: opts.atol,
        rtol: opts.rtol,
        h_init: None,
        h_max: opts.max_step,
        h_min: T::lit(1e-14),
    };

    let mut xi = Vec::new();
    let mut z = Vec::new();
    let mut v = Vec::new();
    let mut dv = Vec::new();
    let mut inside_since: Option<T> = None;
    let mut converged = false;

    ode::integrate(&system, T::zero(), y0, opts.xi_span, &ode_opts, |step| {
        let zeta = step.y[0].exp();
        if zeta < zl - slack || zeta > zbar + slack || !zeta.is_finite() {
            return ControlFlow::Break(Err(Error::IntegrationDiverged {
                xi: step.t.as_f64(),
                zeta: zeta.as_f64(),
                lower: zl.as_f64(),
                upper: zbar.as_f64(),
            }));
        }
        xi.push(step.t);
        z.push(step.y[0]);
        v.push(step.y[1]);
        dv.push(step.dydt[1]);

        let dist = (step.y[0] - z_r).abs() + step.y[1].abs();
        if dist < opts.tol {
            let since = *inside_since.get_or_insert(step.t);
            if step.t - since >= window {
                converged = true;
                return ControlFlow::Break(Ok(()));
            }
        } else {
            inside_since = None;
        }
        ControlFlow::Continue(())
    })?;

    let zeta: Vec<T> = z.iter().map(|&zz| zz.exp()).collect();
    let mut profile = Profile {
        params: *params,
        xi,
        z,
        zeta,
        v,
        dv,
        maxima: Vec::new(),
        minima: Vec::new(),
        inflection_xi: None,
        liapunov: Vec::new(),
        regime,
        converged,
        launch_rate,
    };
    let (maxima, minima) = extrema_sequence(&profile);
    profile.maxima = maxima;
    profile.minima = minima;
    profile.liapunov = liapunov_series(&profile);
    if regime == Regime::Regularized {
        profile.inflection_xi = check_inflection(&profile).ok().flatten();
    } else {
        profile.inflection_xi = leading_inflection(&profile);
    }
    Ok(profile)
}

/// Local maxima and minima of the depth, located at sign changes of `v` and
/// refined by Hermite interpolation of `v` (slope `v'`) and `z` (slope `v`).
pub fn extrema_sequence<T: Scalar>(profile: &Profile<T>) -> (Vec<Extremum<T>>, Vec<Extremum<T>>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for k in 0..profile.len().saturating_sub(1) {
        let (a, b) = (profile.v[k], profile.v[k + 1]);
        let is_max = a > T::zero() && b <= T::zero();
        let is_min = a < T::zero() && b >= T::zero();
        if !(is_max || is_min) {
            continue;
        }
        // a zero landing exactly on a sample is attributed to the earlier interval
        if b == T::zero() && k + 2 < profile.len() && profile.v[k + 2] == T::zero() {
            continue;
        }
        let seg_v = HermiteSegment {
            x0: profile.xi[k],
            x1: profile.xi[k + 1],
            y0: a,
            y1: b,
            m0: profile.dv[k],
            m1: profile.dv[k + 1],
        };
        let xi_star = seg_v.root();
        let z_star = HermiteSegment {
            x0: profile.xi[k],
            x1: profile.xi[k + 1],
            y0: profile.z[k],
            y1: profile.z[k + 1],
            m0: a,
            m1: b,
        }
        .eval(xi_star);
        let ext = Extremum {
            xi: xi_star,
            zeta: z_star.exp(),
        };
        if is_max {
            maxima.push(ext);
        } else {
            minima.push(ext);
        }
    }
    (maxima, minima)
}

fn sign_changes<T: Scalar>(values: &[T]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    for (k, &x) in values.iter().enumerate() {
        if x == T::zero() {
            continue;
        }
        let positive = x > T::zero();
        if let Some((_, prev)) = last {
            if prev != positive {
                out.push(k - 1);
            }
        }
        last = Some((k, positive));
    }
    out
}

fn refine_inflection<T: Scalar>(profile: &Profile<T>, k: usize) -> T {
    let k = k.min(profile.len() - 2);
    let jerk = |i: usize| vector_field_jerk(&profile.point(i), profile.dv[i], &profile.params);
    HermiteSegment {
        x0: profile.xi[k],
        x1: profile.xi[k + 1],
        y0: profile.dv[k],
        y1: profile.dv[k + 1],
        m0: jerk(k),
        m1: jerk(k + 1),
    }
    .root()
}

/// First sign change of `z''`, i.e. the inflection of the leading front.
fn leading_inflection<T: Scalar>(profile: &Profile<T>) -> Option<T> {
    sign_changes(&profile.dv)
        .first()
        .map(|&k| refine_inflection(profile, k))
}

/// Unique inflection point of a regularized profile.
///
/// Returns `Ok(None)` for a constant profile, and a structure violation unless
/// `z''` changes sign exactly once, from positive to negative.
pub fn check_inflection<T: Scalar>(profile: &Profile<T>) -> Result<Option<T>> {
    if profile.dv.iter().all(|&a| a == T::zero()) {
        return Ok(None);
    }
    if profile.regime != Regime::Regularized {
        return Err(Error::StructureViolation(
            "inflection uniqueness only holds for regularized profiles".into(),
        ));
    }
    let changes = sign_changes(&profile.dv);
    if changes.len() != 1 {
        return Err(Error::StructureViolation(format!(
            "expected one sign change of z'', found {}",
            changes.len()
        )));
    }
    let first_nonzero = profile
        .dv
        .iter()
        .find(|&&a| a != T::zero())
        .copied()
        .unwrap_or(T::zero());
    if first_nonzero < T::zero() {
        return Err(Error::StructureViolation(
            "z'' must be positive ahead of the inflection".into(),
        ));
    }
    Ok(Some(refine_inflection(profile, changes[0])))
}

/// Whether `p` lies in the triangle bounded by `v = 0`, `z = z_l` and
/// `v = m (z - z_r)` with `m` the slow eigenvalue at `z_r`.
pub fn in_trapping_region<T: Scalar>(p: &PhasePoint<T>, params: &PhaseParams<T>, tol: T) -> bool {
    let m = match phaseplane::eigenvalues_at(params.zeta_r(), params) {
        Ok(pair) => pair.minus.re,
        Err(_) => return false,
    };
    let z_l = params.zeta_l().ln();
    let z_r = params.zeta_r().ln();
    p.v >= -tol && p.z >= z_l - tol && p.v <= m * (p.z - z_r) + tol
}

/// Every sample of the profile inside the trapping triangle.
pub fn trapping_check<T: Scalar>(profile: &Profile<T>, params: &PhaseParams<T>, tol: T) -> bool {
    (0..profile.len()).all(|k| in_trapping_region(&profile.point(k), params, tol))
}

/// `V = v^2 / 2 + Phi(z)` at every sample.
pub fn liapunov_series<T: Scalar>(profile: &Profile<T>) -> Vec<T> {
    profile
        .z
        .iter()
        .zip(&profile.v)
        .map(|(&z, &v)| v * v / T::lit(2.0) + potential(z, &profile.params))
        .collect()
}

/// Analytic rate `dV/dxi = -(3c/K1^2) v^2`.
pub fn liapunov_rate<T: Scalar>(v: T, params: &PhaseParams<T>) -> T {
    -params.stiffness() * params.c() * v * v
}
