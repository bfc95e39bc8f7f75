//! Dirac bound states of the generalized Hulthén potential family,
//! `V(x) = −V0 e^{−αx}/(1 − q e^{−αx})`, solved by the Nikiforov–Uvarov
//! method, with independent numerical oracles.

pub mod error;
pub mod model;
pub mod nu;
pub mod special;
pub mod verify;

pub use num_complex::Complex64;

pub use error::{Error, Result};
pub use model::{
    alpha_window, bound_window, critical_coupling, energy_closed_form, hypergeometric_params, map_to_nu,
    potential_at, potential_linear_approx, potential_value, q0_state, quantization_residual_on, reality_condition, spinor_state,
    spinor_state_at, BoundState, BranchSign, EpsilonSheet, HypergeometricParams, PotentialSpec, SpinorEval,
    SpinorEvaluator, StateStatus, Variant,
};
pub use nu::{BranchPolicy, NUBranch, NUProblem, Poly2, WeightClass, WeightSpec};
pub use special::{Hyp1F1Args, JacobiParams};
pub use verify::{
    coupled_residual, fd_dirac_spectrum, ode_residual, quantization_residual, quantization_root, quantization_root_on,
    run_suite, symmetry_check, CheckResult, Overrides, RootResult,
    GridSpec, NumericSpectrum, ResidualReport, SymmetryKind,
};
