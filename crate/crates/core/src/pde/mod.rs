//! Method-of-lines solver for the dissipative SGN system on a periodic domain
//!
//! ```text
//! h_t + (h u)_x = 0
//! u_t + h_x + u u_x - (delta / 3h) [h^3 (u_xt + u u_xx - u_x^2)]_x = eps (h u)_xx / h
//! ```
//!
//! Second-order central differences in space, classical RK4 in time; `u_t` comes
//! from a cyclic tridiagonal solve of the elliptic operator.

mod banded;
mod diagnostics;
mod grid;
mod init;
mod solver;

pub use banded::solve_cyclic_tridiagonal;
pub use diagnostics::{error_norm, oscillation_region_width, snapshot_oscillation_width, step_deviation};
pub use grid::{FieldPair, Grid, SimConfig};
pub use init::{dam_break_ic, dam_break_mass, traveling_wave_at, traveling_wave_ic};
pub use solver::{
    d1, d2, elliptic_apply, elliptic_solve, rhs_eval, simulate, step, step_with, MassRecord, Trajectory,
};
