//! Lagrangian graphs `Gamma_df` over `R^m`: special Lagrangian and expander graph
//! equations, the inversion transform and asymptotic expander modes.

pub mod field;
pub mod harmonic;
pub mod modes;
pub mod residual;

pub use field::{FnField, Polynomial, ScalarField};
pub use harmonic::{harmonic_basis, harmonic_dimension, sphere_inner, sphere_moment};
pub use modes::{
    assemble_expansion, check_ak_log_derivative_bound, solve_ak, Expansion, ExpansionMode, ModeOde,
    RadialSolution,
};
pub use residual::{
    expander_graph_residual, inversion_transform, linearized_expander_residual, sl_graph_residual,
    Inversion, InversionDirection,
};
