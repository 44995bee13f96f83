//! Direct solver for periodic tridiagonal systems.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `a[j] x[j-1] + b[j] x[j] + c[j] x[j+1] = r[j]` with indices taken mod `n`.
///
/// Thomas elimination on the open chain plus a Sherman-Morrison correction
/// for the two corner entries `a[0]` and `c[n-1]`.
pub fn solve_cyclic_tridiagonal<T: Scalar>(a: &[T], b: &[T], c: &[T], r: &[T]) -> Result<Vec<T>> {
    let n = b.len();
    for len in [a.len(), c.len(), r.len()] {
        if len != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: len,
            });
        }
    }
    if n < 3 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("cyclic system needs at least 3 unknowns, got {n}"),
        });
    }
    let alpha = c[n - 1];
    let beta = a[0];
    let gamma = -b[0];

    let mut bb = b.to_vec();
    bb[0] = b[0] - gamma;
    bb[n - 1] = b[n - 1] - alpha * beta / gamma;

    let mut u = vec![T::zero(); n];
    u[0] = gamma;
    u[n - 1] = alpha;

    let mut scratch = vec![T::zero(); n];
    let x = thomas(a, &bb, c, r, &mut scratch)?;
    let z = thomas(a, &bb, c, &u, &mut scratch)?;

    let denom = T::one() + z[0] + beta * z[n - 1] / gamma;
    if denom == T::zero() || !denom.is_finite() {
        return Err(Error::SingularSystem {
            pivot: denom.as_f64(),
        });
    }
    let fact = (x[0] + beta * x[n - 1] / gamma) / denom;
    Ok(x.iter().zip(&z).map(|(&xi, &zi)| xi - fact * zi).collect())
}

fn thomas<T: Scalar>(a: &[T], b: &[T], c: &[T], r: &[T], gam: &mut [T]) -> Result<Vec<T>> {
    let n = b.len();
    let mut x = vec![T::zero(); n];
    let mut bet = b[0];
    check_pivot(bet)?;
    x[0] = r[0] / bet;
    for j in 1..n {
        gam[j] = c[j - 1] / bet;
        bet = b[j] - a[j] * gam[j];
        check_pivot(bet)?;
        x[j] = (r[j] - a[j] * x[j - 1]) / bet;
    }
    for j in (0..n - 1).rev() {
        x[j] = x[j] - gam[j + 1] * x[j + 1];
    }
    Ok(x)
}

fn check_pivot<T: Scalar>(p: T) -> Result<()> {
    if p == T::zero() || !p.is_finite() {
        Err(Error::SingularSystem { pivot: p.as_f64() })
    } else {
        Ok(())
    }
}
