//! Reference computations shared by the integration tests.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use sgn_core::pde::{FieldPair, Grid};

/// Dense Fourier differentiation matrix on `[0, 2 pi)` with even `n`.
fn spectral_d1(n: usize) -> DMatrix<f64> {
    let dx = 2.0 * PI / n as f64;
    DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            0.0
        } else {
            let m = j as f64 - k as f64;
            let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * sign / (0.5 * m * dx).tan()
        }
    })
}

/// Reference right-hand side: the same equations, differentiated spectrally and
/// inverted with a dense LU factorisation.
pub fn spectral_rhs(h: &[f64], u: &[f64], delta: f64, eps: f64) -> (Vec<f64>, Vec<f64>) {
    let n = h.len();
    let d = spectral_d1(n);
    let hv = DVector::from_column_slice(h);
    let uv = DVector::from_column_slice(u);
    let q = hv.component_mul(&uv);
    let h_t = -(&d * &q);
    let ux = &d * &uv;
    let uxx = &d * &ux;
    let h3 = hv.map(|a| a * a * a);
    let inner = h3.component_mul(&(uv.component_mul(&uxx) - ux.component_mul(&ux)));
    let disp = (&d * inner).component_div(&hv) * (delta / 3.0);
    let visc = (&d * (&d * &q)).component_div(&hv) * eps;
    let forcing = -(&d * &hv) - uv.component_mul(&ux) + disp + visc;
    let op = DMatrix::identity(n, n)
        - DMatrix::from_diagonal(&hv.map(|a| delta / (3.0 * a))) * &d * DMatrix::from_diagonal(&h3) * &d;
    let u_t = op.lu().solve(&forcing).unwrap();
    (h_t.as_slice().to_vec(), u_t.as_slice().to_vec())
}

/// Smooth, non-symmetric periodic state on `[0, 2 pi)`.
pub fn smooth_state(g: &Grid<f64>) -> FieldPair<f64> {
    FieldPair::new(
        *g,
        g.sample(|x| 1.0 + 0.2 * x.sin() + 0.05 * (3.0 * x).cos()),
        g.sample(|x| 0.1 + 0.3 * (2.0 * x).cos() + 0.05 * x.sin()),
        0.0,
    )
    .unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
