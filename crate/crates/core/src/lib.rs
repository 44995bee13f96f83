//! Traveling waves and periodic dynamics of a dissipative Serre-Green-Naghdi system.
//!
//! * [`closure`]: jump conditions fixing the state behind a front.
//! * [`phaseplane`]: the reduced second-order ODE, its potential and equilibria.
//! * [`twsolve`]: shooting of the front profile from the upstream saddle.
//! * [`pde`]: finite-difference solver, dam-break data and diagnostics.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below fix `f64`.

pub mod closure;
pub mod error;
pub mod interp;
pub mod ode;
pub mod pde;
pub mod phaseplane;
pub mod scalar;
pub mod twsolve;

pub use closure::{ClosureData, State, XSpaceStates};
pub use error::{Error, Result};
pub use pde::{FieldPair, Grid, SimConfig, Trajectory};
pub use phaseplane::{PhaseParams, Regime};
pub use scalar::Scalar;
pub use twsolve::{PhasePoint, Profile, ProfileOptions};

pub type State64 = State<f64>;
pub type Closure64 = ClosureData<f64>;
pub type PhaseParams64 = PhaseParams<f64>;
pub type Profile64 = Profile<f64>;
pub type ProfileOptions64 = ProfileOptions<f64>;
pub type Grid64 = Grid<f64>;
pub type FieldPair64 = FieldPair<f64>;
pub type SimConfig64 = SimConfig<f64>;
pub type Trajectory64 = Trajectory<f64>;
