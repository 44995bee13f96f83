//! Error functional and oscillation-region measurements.

use super::grid::FieldPair;
use super::solver::d1;
use crate::error::{Error, Result};
use crate::phaseplane::Regime;
use crate::scalar::Scalar;
use crate::twsolve::Profile;

/// `E = sqrt(|e_h|^2 + |e_u|^2 + |D e_u|^2)` with periodic trapezoidal sums.
pub fn error_norm<T: Scalar>(sol_eps: &FieldPair<T>, sol_zero: &FieldPair<T>) -> Result<T> {
    let grid = &sol_zero.grid;
    if sol_eps.grid.n != grid.n {
        return Err(Error::ShapeMismatch {
            expected: grid.n,
            found: sol_eps.grid.n,
        });
    }
    if sol_eps.grid.length != grid.length {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "domain lengths differ".into(),
        });
    }
    let tol = T::lit(1e-9) * T::one().max(sol_zero.t.abs());
    if (sol_eps.t - sol_zero.t).abs() > tol {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: format!("snapshots at different times {} and {}", sol_eps.t, sol_zero.t),
        });
    }
    grid.check_len(&sol_eps.h)?;
    grid.check_len(&sol_eps.u)?;
    let eh: Vec<T> = sol_eps.h.iter().zip(&sol_zero.h).map(|(&a, &b)| a - b).collect();
    let eu: Vec<T> = sol_eps.u.iter().zip(&sol_zero.u).map(|(&a, &b)| a - b).collect();
    let deu = d1(&eu, grid.dx);
    let sq = |v: &[T]| grid.dx * v.iter().map(|&a| a * a).sum::<T>();
    Ok((sq(&eh) + sq(&eu) + sq(&deu)).sqrt())
}

/// Depth series ordered from the front into the wake: `dist[k]` is the
/// physical distance behind some reference point.
struct Wake<T> {
    dist: Vec<T>,
    depth: Vec<T>,
}

/// Distance from the front (mid-depth crossing) to the first extremum whose
/// excess over `zeta_r` is below half the first overshoot. Extrema are
/// supplied as `(distance, depth)` in wake order.
fn width_from_extrema<T: Scalar>(front: T, extrema: &[(T, T)], zeta_r: T) -> Result<T> {
    let first = extrema
        .iter()
        .find(|e| e.1 > zeta_r)
        .ok_or(Error::NotApplicable("no overshoot behind the front"))?;
    let half = (first.1 - zeta_r) / T::lit(2.0);
    extrema
        .iter()
        .find(|e| e.0 > first.0 && (e.1 - zeta_r).abs() < half)
        .map(|e| e.0 - front)
        .ok_or(Error::NotApplicable("oscillations do not decay within the sampled range"))
}

fn first_crossing<T: Scalar>(wake: &Wake<T>, level: T) -> Option<T> {
    wake.depth.windows(2).enumerate().find_map(|(k, w)| {
        if (w[0] - level) * (w[1] - level) <= T::zero() && w[0] != w[1] {
            let r = (level - w[0]) / (w[1] - w[0]);
            Some(wake.dist[k] + r * (wake.dist[k + 1] - wake.dist[k]))
        } else {
            None
        }
    })
}

/// Physical-x width of the large-amplitude oscillation region of a profile.
pub fn oscillation_region_width<T: Scalar>(profile: &Profile<T>) -> Result<T> {
    if profile.regime == Regime::Regularized {
        return Err(Error::NotApplicable("regularized profile has no oscillations"));
    }
    let scale = profile.params.closure.delta.sqrt();
    let wake = Wake {
        dist: profile.xi.iter().map(|&xi| scale * xi).collect(),
        depth: profile.zeta.clone(),
    };
    let level = (profile.params.zeta_l() + profile.params.zeta_r()) / T::lit(2.0);
    let front = first_crossing(&wake, level).ok_or(Error::NotApplicable("front not reached"))?;
    let mut extrema: Vec<(T, T)> = profile
        .maxima
        .iter()
        .chain(&profile.minima)
        .map(|e| (scale * e.xi, e.zeta))
        .collect();
    extrema.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    width_from_extrema(front, &extrema, profile.params.zeta_r())
}

/// Oscillation width behind a right-moving front in a PDE snapshot.
///
/// Only nodes with `x` in `[x_lo, x_hi]` are examined; the front is the first
/// mid-depth crossing met when walking left from `x_hi`. Extrema are refined by
/// a three-point parabola.
pub fn snapshot_oscillation_width<T: Scalar>(
    field: &FieldPair<T>,
    x_lo: T,
    x_hi: T,
    zeta_l: T,
    zeta_r: T,
) -> Result<T> {
    let grid = &field.grid;
    let idx: Vec<usize> = (0..grid.n)
        .rev()
        .filter(|&j| grid.x(j) >= x_lo && grid.x(j) <= x_hi)
        .collect();
    if idx.len() < 3 {
        return Err(Error::NotApplicable("window holds fewer than three nodes"));
    }
    let wake = Wake {
        dist: idx.iter().map(|&j| x_hi - grid.x(j)).collect(),
        depth: idx.iter().map(|&j| field.h[j]).collect(),
    };
    let front = first_crossing(&wake, (zeta_l + zeta_r) / T::lit(2.0))
        .ok_or(Error::NotApplicable("front not inside the window"))?;
    let mut extrema = Vec::new();
    let dx = grid.dx;
    for k in 1..wake.depth.len() - 1 {
        let (a, b, c) = (wake.depth[k - 1], wake.depth[k], wake.depth[k + 1]);
        let is_max = b > a && b >= c;
        let is_min = b < a && b <= c;
        if !(is_max || is_min) || wake.dist[k] < front {
            continue;
        }
        let curv = a - T::lit(2.0) * b + c;
        let (off, val) = if curv != T::zero() {
            let off = (a - c) / (T::lit(2.0) * curv);
            (off * dx, b - (a - c) * off / T::lit(4.0))
        } else {
            (T::zero(), b)
        };
        extrema.push((wake.dist[k] + off, val));
    }
    width_from_extrema(front, &extrema, zeta_r)
}

/// Largest `|zeta - step|` over samples farther than `half_width` (physical x)
/// from the front, where `step` is `zeta_l` ahead and `zeta_r` behind.
pub fn step_deviation<T: Scalar>(profile: &Profile<T>, half_width: T) -> Result<T> {
    let scale = profile.params.closure.delta.sqrt();
    let (zl, zr) = (profile.params.zeta_l(), profile.params.zeta_r());
    let wake = Wake {
        dist: profile.xi.iter().map(|&xi| scale * xi).collect(),
        depth: profile.zeta.clone(),
    };
    let front = first_crossing(&wake, (zl + zr) / T::lit(2.0))
        .ok_or(Error::NotApplicable("front not reached"))?;
    let mut worst = T::zero();
    for (&d, &z) in wake.dist.iter().zip(&wake.depth) {
        if (d - front).abs() <= half_width {
            continue;
        }
        let step = if d < front { zl } else { zr };
        worst = worst.max((z - step).abs());
    }
    // the part of the upstream tail before the first sample
    let lead = wake.dist[0] - front;
    if -lead > half_width {
        worst = worst.max((wake.depth[0] - zl).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::grid::Grid;

    #[test]
    fn identical_solutions_have_zero_error() {
        let g = Grid::<f64>::new(32, 10.0).unwrap();
        let f = FieldPair::new(g, g.sample(|x| 1.0 + 0.1 * x.sin()), g.sample(f64::cos), 2.0).unwrap();
        assert_eq!(error_norm(&f, &f).unwrap(), 0.0);
    }

    #[test]
    fn error_norm_single_mode() {
        let g = Grid::new(256, 2.0 * std::f64::consts::PI).unwrap();
        let zero = FieldPair::constant(g, 1.0, 0.0);
        let mut other = zero.clone();
        other.u = g.sample(f64::sin);
        let e = error_norm(&other, &zero).unwrap();
        // |sin|^2 = pi, |cos|^2 = pi up to the O(dx^2) difference factor
        let expect = (std::f64::consts::PI * (1.0 + (g.dx.sin() / g.dx).powi(2))).sqrt();
        assert!((e - expect).abs() < 1e-12);
    }

    #[test]
    fn error_norm_rejects_mismatch() {
        let a = FieldPair::constant(Grid::new(32, 10.0).unwrap(), 1.0, 0.0);
        let b = FieldPair::constant(Grid::new(64, 10.0).unwrap(), 1.0, 0.0);
        assert!(matches!(error_norm(&a, &b), Err(Error::ShapeMismatch { .. })));
        let mut c = a.clone();
        c.t = 1.0;
        assert!(error_norm(&a, &c).is_err());
    }

    #[test]
    fn width_picks_first_decayed_extremum() {
        let ext = [(1.0, 3.0), (2.0, 1.4), (3.0, 2.8), (4.0, 1.6), (5.0, 2.4), (6.0, 1.7)];
        // excesses 1.0, 0.6, 0.8, 0.4: the fourth is the first below 0.5
        let w = width_from_extrema(0.5, &ext, 2.0).unwrap();
        assert_eq!(w, 3.5);
    }
}
