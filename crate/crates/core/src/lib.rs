//! Momentum-space electron diffraction off a standing Gaussian light wave,
//! computed in second-order time-dependent perturbation theory of the Dirac
//! equation on shifted Fourier grids.

pub mod beam;
pub mod cli;
pub mod config;
pub mod dirac;
pub mod driver;
pub mod error;
pub mod grid;
pub mod output;
pub mod perturb;
pub mod xi;

pub use beam::{build_vertex_fields, BeamParams, VertexFields};
pub use config::SimConfig;
pub use dirac::{EnergySign, Polarization, Spin};
pub use error::{ConfigError, DriverError, GridError};
pub use grid::{dft_forward, dft_inverse, ComplexField2D, Domain, GridSpec, MomentumOffset};
pub use perturb::{accumulate, AmplitudeGrid, EngineOutput, ExecMode, Scenario, XiMode};
pub use xi::{xi, xi_closed, xi_quadrature, XiInputs};
