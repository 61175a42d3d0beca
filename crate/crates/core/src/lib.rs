//! Hydrogen-like atoms in integer dimension `D`.
//!
//! The radial problem `-½u'' + K(l, D)/r² u + V(r) u = E u` is solved for two
//! potential families: the D-independent `-Z/r` ("newtonian") and the
//! potential of a point charge obtained from the D-dimensional Poisson
//! equation ("dimension-consistent"): linear at `D = 1`, logarithmic at
//! `D = 2`, and `∝ r^-(D-2)` for `D ≥ 3`.
//!
//! Modules, bottom up:
//!
//! - [`specfun`]: half-integer Γ, hypersphere areas, Airy zeros.
//! - [`potentials`]: [`PotentialModel`] and Gauss/Poisson checks.
//! - [`radial`]: [`RadialProblem`], centrifugal term, small-r stability.
//! - [`eigensolver`]: tridiagonal Sturm bisection, inverse iteration,
//!   Numerov shooting, Richardson extrapolation, collapse ladder.
//! - [`oracles`]: closed-form spectra and virial bookkeeping.
//! - [`large_d`]: classical effective-potential minima and the large-D scan.
//! - [`cli`]: the `dhydro` command-line front end.

pub mod cli;
pub mod eigensolver;
mod error;
pub mod large_d;
pub mod oracles;
pub mod potentials;
pub mod radial;
pub mod specfun;

pub use eigensolver::{
    collapse_diagnostic, count_below, discretize, eigen_lowest, eigenfunction,
    richardson_extrapolate, shoot_numerov, solve_states, BoundState, CollapseClass,
    CollapseReport, GridSpec, NumerovShot, Richardson, SolveOptions, Spectrum,
    TridiagonalOperator,
};
pub use error::{Error, Result};
pub use large_d::{classical_limit_scan, classical_minimum, ClassicalPoint, LargeDRow};
pub use oracles::{analytic_energy_airy_1d, analytic_energy_newtonian, virial_report, VirialReport};
pub use potentials::{Convention, Family, PotentialModel};
pub use radial::{centrifugal_coefficient, RadialProblem, StabilityClass, StabilityKind};
pub use specfun::{airy_ai, airy_negative_zero, gamma_half_integer, sphere_surface_area, HalfInteger};
