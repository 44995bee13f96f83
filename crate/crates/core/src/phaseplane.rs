//! Scalar functions and linear stability data of the reduced traveling-wave system
//!
//! ```text
//! z' = v,    v' = -(3 / K1^2) F(e^z) - (3 c / K1^2) v,    z = ln(zeta)
//! ```
//!
//! where `F(zeta) = (zeta - zeta_l)(zeta - zeta_r)(zeta + zeta_l + zeta_r) / (2 zeta^2)`.

use serde::{Deserialize, Serialize};

use crate::closure::ClosureData;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shape of the downstream equilibrium, and hence of the traveling wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Stable spiral: front followed by decaying undulations.
    Oscillatory,
    /// Stable node: monotone front.
    Regularized,
}

/// Closure data together with the derived phase-plane landmarks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseParams<T> {
    pub closure: ClosureData<T>,
    /// `(K1 / zeta_l)^2`
    pub zeta_bar: T,
    /// Inflection depth of the potential, root of `F'` in `(zeta_l, zeta_r)`.
    pub zeta_c: T,
    /// Critical squared damping `(4/3) K1^2 F'(zeta_r) zeta_r`.
    pub threshold_c2: T,
}

impl<T: Scalar> PhaseParams<T> {
    pub fn new(closure: ClosureData<T>) -> Result<Self> {
        let (zl, zr) = (closure.left.zeta, closure.right.zeta);
        let k1sq = closure.k1 * closure.k1;
        if !(zl < zr) || !(zl.powi(3) < k1sq) || !(k1sq < zr.powi(3)) {
            return Err(Error::InvalidParameter {
                name: "closure",
                reason: format!(
                    "not admissible: need zeta_l < zeta_r and zeta_l^3 < K1^2 < zeta_r^3 \
                     (zeta_l = {zl}, zeta_r = {zr}, K1^2 = {k1sq})"
                ),
            });
        }
        let zeta_c = inflection_zeta_c(&closure);
        let mut params = Self {
            closure,
            zeta_bar: closure.zeta_bar(),
            zeta_c,
            threshold_c2: T::zero(),
        };
        params.threshold_c2 =
            T::lit(4.0 / 3.0) * k1sq * f_prime(zr, &params)? * zr;
        Ok(params)
    }

    pub fn zeta_l(&self) -> T {
        self.closure.left.zeta
    }

    pub fn zeta_r(&self) -> T {
        self.closure.right.zeta
    }

    pub fn k1_sq(&self) -> T {
        self.closure.k1 * self.closure.k1
    }

    pub fn c(&self) -> T {
        self.closure.c
    }

    /// `3 / K1^2`, the stiffness scale of the reduced system.
    pub fn stiffness(&self) -> T {
        T::lit(3.0) / self.k1_sq()
    }

    /// Same landmarks with a different damping `c`.
    pub fn with_damping(&self, c: T) -> Self {
        let mut out = *self;
        out.closure.c = c;
        out
    }
}

fn check_depth<T: Scalar>(zeta: T) -> Result<()> {
    if zeta > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            quantity: "depth",
            value: zeta.as_f64(),
        })
    }
}

/// Factorised `F(zeta)`.
pub fn f_eval<T: Scalar>(zeta: T, params: &PhaseParams<T>) -> Result<T> {
    check_depth(zeta)?;
    Ok(f_factored(zeta, params.zeta_l(), params.zeta_r()))
}

#[inline]
pub(crate) fn f_factored<T: Scalar>(zeta: T, zl: T, zr: T) -> T {
    (zeta - zl) * (zeta - zr) * (zeta + zl + zr) / (T::lit(2.0) * zeta * zeta)
}

/// `F(zeta) = zeta/2 + (K1/zeta)^2 - (K2 - s K1)/zeta`, before factorisation.
pub fn f_unfactored<T: Scalar>(zeta: T, params: &PhaseParams<T>) -> Result<T> {
    check_depth(zeta)?;
    let cl = &params.closure;
    let ratio = cl.k1 / zeta;
    Ok(zeta / T::lit(2.0) + ratio * ratio - (cl.k2 - cl.s * cl.k1) / zeta)
}

fn cubic_coefficients<T: Scalar>(closure: &ClosureData<T>) -> (T, T) {
    let zl = closure.left.zeta;
    let k1sq = closure.k1 * closure.k1;
    ((T::lit(2.0) * k1sq + zl.powi(3)) / zl, T::lit(4.0) * k1sq)
}

pub fn f_prime<T: Scalar>(zeta: T, params: &PhaseParams<T>) -> Result<T> {
    check_depth(zeta)?;
    let (a, b) = cubic_coefficients(&params.closure);
    Ok((zeta.powi(3) + a * zeta - b) / (T::lit(2.0) * zeta.powi(3)))
}

pub fn f_second<T: Scalar>(zeta: T, params: &PhaseParams<T>) -> Result<T> {
    check_depth(zeta)?;
    let zl = params.zeta_l();
    let k1sq = params.k1_sq();
    Ok(-(T::lit(2.0) * k1sq * (zeta - T::lit(3.0) * zl) + zeta * zl.powi(3))
        / (zeta.powi(4) * zl))
}

/// Potential normalised to vanish at `z_l`; `Phi'(z) = (3/K1^2) F(e^z)`.
pub fn potential<T: Scalar>(z: T, params: &PhaseParams<T>) -> T {
    let zeta = z.exp();
    let zl = params.zeta_l();
    let k1sq = params.k1_sq();
    let d = zeta - zl;
    -(T::lit(3.0) / k1sq) * d * d * (k1sq - zeta * zl * zl) / (T::lit(2.0) * zeta * zeta * zl * zl)
}

/// Unique root of `P(zeta) = zeta^3 + a zeta - b` in `(zeta_l, zeta_r)`, with
/// `a = (2 K1^2 + zeta_l^3) / zeta_l` and `b = 4 K1^2`.
///
/// Newton steps are kept inside a shrinking bracket; falls back to bisection.
pub fn inflection_zeta_c<T: Scalar>(closure: &ClosureData<T>) -> T {
    let (a, b) = cubic_coefficients(closure);
    let p = |x: T| x * x * x + a * x - b;
    let (mut lo, mut hi) = (closure.left.zeta, closure.right.zeta);
    // P is strictly increasing; widen in case the closure sits on a boundary.
    while p(hi) < T::zero() {
        hi = hi + hi;
    }
    let mut x = (lo + hi) / T::lit(2.0);
    for _ in 0..200 {
        let px = p(x);
        if px == T::zero() {
            return x;
        }
        if px < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let dpx = T::lit(3.0) * x * x + a;
        let newton = x - px / dpx;
        x = if newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / T::lit(2.0)
        };
        if (hi - lo) <= T::epsilon() * hi * T::lit(4.0) || (px / dpx).abs() <= T::epsilon() * x {
            break;
        }
    }
    x
}

/// Cardano form of the same root; kept as a cross-check.
pub fn inflection_zeta_c_closed_form<T: Scalar>(closure: &ClosureData<T>) -> T {
    let (a, b) = cubic_coefficients(closure);
    let three = T::lit(3.0);
    let inner = (T::lit(9.0) * b + (three * (T::lit(4.0) * a.powi(3) + T::lit(27.0) * b * b)).sqrt())
        .cbrt();
    inner / T::lit(18.0).cbrt() - T::lit(2.0 / 3.0).cbrt() * a / inner
}

/// Complex number stored as a real pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Eigenvalue<T> {
    pub fn is_real(&self) -> bool {
        self.im == T::zero()
    }
}

/// The pair `(lambda_plus, lambda_minus)` of the linearisation at an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenPair<T> {
    pub plus: Eigenvalue<T>,
    pub minus: Eigenvalue<T>,
}

/// Roots of `lambda^2 + (3c/K1^2) lambda + (3/K1^2) F'(zeta*) zeta* = 0`.
///
/// `plus = -(p + sqrt(p^2 - 4q)) / 2`, `minus = -(p - sqrt(p^2 - 4q)) / 2`; at a
/// saddle `minus` is the positive (unstable) root. The `c = 0` case needs no
/// special branch in this form.
pub fn eigenvalues_at<T: Scalar>(zeta_star: T, params: &PhaseParams<T>) -> Result<EigenPair<T>> {
    let p = params.stiffness() * params.c();
    let q = params.stiffness() * f_prime(zeta_star, params)? * zeta_star;
    let two = T::lit(2.0);
    let disc = p * p - T::lit(4.0) * q;
    let pair = if disc >= T::zero() {
        let root = disc.sqrt();
        // the larger-magnitude root first, the other from the product q
        let (plus, minus) = if p > T::zero() {
            let plus = -(p + root) / two;
            (plus, q / plus)
        } else if p < T::zero() {
            let minus = (root - p) / two;
            (q / minus, minus)
        } else {
            (-root / two, root / two)
        };
        EigenPair {
            plus: Eigenvalue { re: plus, im: T::zero() },
            minus: Eigenvalue { re: minus, im: T::zero() },
        }
    } else {
        let im = (-disc).sqrt() / two;
        EigenPair {
            plus: Eigenvalue { re: -p / two, im: -im },
            minus: Eigenvalue { re: -p / two, im },
        }
    };
    Ok(pair)
}

pub fn classify<T: Scalar>(params: &PhaseParams<T>) -> Regime {
    classify_damping(params.c() * params.c(), params.threshold_c2)
}

/// Threshold comparison; equality counts as regularized.
pub fn classify_damping<T: Scalar>(c2: T, threshold_c2: T) -> Regime {
    if c2 < threshold_c2 {
        Regime::Oscillatory
    } else {
        Regime::Regularized
    }
}

/// Amplitude range `(zeta_r, (K1/zeta_l)^2)` of the traveling wave.
pub fn amplitude_bounds<T: Scalar>(params: &PhaseParams<T>) -> (T, T) {
    (params.zeta_r(), params.zeta_bar)
}
