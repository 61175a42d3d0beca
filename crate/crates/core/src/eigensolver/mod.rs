//! Bound states of the reduced radial equation on a uniform grid.
//!
//! The three-point operator is symmetric tridiagonal, so eigenvalues come
//! from Sturm counts and bisection, eigenvectors from inverse iteration.
//! Energies are refined by Richardson extrapolation over a ladder of grids
//! with halving spacing and cross-checked by Numerov shooting.

mod collapse;
mod grid;
mod numerov;
mod richardson;
mod states;
mod tridiag;

pub use collapse::{collapse_diagnostic, CollapseClass, CollapseReport, MIN_COLLAPSE_RUNGS};
pub use grid::{default_r_max, GridSpec, DEFAULT_INTERIOR_POINTS};
pub use numerov::{shoot_numerov, shoot_numerov_profile, NumerovProfile, NumerovShot, OriginSeries};
pub use richardson::{richardson_extrapolate, Richardson};
pub use states::{
    solve_states, solve_states_with, BoundState, SolveOptions, Spectrum, DEFAULT_NUMEROV_TOLERANCE,
    DEFAULT_RUNGS, MARGINAL_NUMEROV_TOLERANCE, MARGINAL_RUNGS,
};
pub use tridiag::{count_below, count_nodes, discretize, eigen_lowest, eigenfunction, TridiagonalOperator};
