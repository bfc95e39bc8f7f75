//! Independent oracles for the closed-form results.

pub mod eigen;
pub mod fd;
pub mod quantization;
pub mod residual;
pub mod suite;
pub mod symmetry;

pub use fd::{fd_dirac_spectrum, Boundary, GridSpec, NumericSpectrum};
pub use quantization::{quantization_residual, quantization_root, quantization_root_on, RootResult};
pub use residual::{
    coupled_residual, coupled_residual_with_energy, ode_residual, ode_residual_with_energy, s_grid, x_grid,
    CoupledReport, ResidualReport,
};
pub use symmetry::{symmetry_check, SymmetryKind};
pub use suite::{run_suite, Bound, CheckResult, Overrides, CHECK_NAMES};
