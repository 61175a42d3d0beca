//! Closed-form spectra and virial bookkeeping.
//!
//! Newtonian family: the bracket of the centrifugal term equals L(L+1) with
//! L = l + (D-3)/2, so the radial equation is the 3D Coulomb problem at
//! effective angular momentum L. Its levels are -Z²/(2n²) with
//! n = n_r + L + 1 = n_r + l + (D-1)/2.
//!
//! Dimension-consistent D = 1: V = k·x on the half line with u(0) = 0, whose
//! solutions are Ai(cx + a_n); E_n = |a_n| (k²/2)^{1/3}.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigensolver::BoundState;
use crate::potentials::Convention;
use crate::radial::RadialProblem;
use crate::specfun::airy_negative_zero;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub dimension: u32,
    pub angular_momentum: u32,
    pub radial_quantum_number: u32,
    pub charge: f64,
    pub energy: f64,
}

impl SpectrumRow {
    pub fn newtonian(dimension: u32, l: u32, n_r: u32, charge: f64) -> Result<Self> {
        let energy =
            analytic_energy_newtonian(i64::from(dimension), i64::from(l), i64::from(n_r), charge)?;
        Ok(Self { dimension, angular_momentum: l, radial_quantum_number: n_r, charge, energy })
    }
}

/// -Z² / (2 n_eff²), n_eff = n_r + l + (D-1)/2.
pub fn analytic_energy_newtonian(dimension: i64, l: i64, n_r: i64, charge: f64) -> Result<f64> {
    if dimension < 2 {
        return Err(Error::InvalidDimension(dimension));
    }
    if l < 0 {
        return Err(Error::NegativeAngularMomentum(l));
    }
    if n_r < 0 {
        return Err(Error::Config(format!("radial quantum number must be >= 0, got {n_r}")));
    }
    if !(charge > 0.0 && charge.is_finite()) {
        return Err(Error::InvalidCharge(charge));
    }
    // 2·n_eff is an integer
    let twice_n = (2 * n_r + 2 * l + dimension - 1) as f64;
    Ok(-2.0 * charge * charge / (twice_n * twice_n))
}

/// Slope k of V = k·x for the 1D dimension-consistent potential.
pub fn linear_slope(convention: Convention, charge: f64) -> f64 {
    match convention {
        Convention::Gaussian4Pi => 2.0 * PI * charge,
        Convention::SolidAngle => charge,
    }
}

/// n-th level (n ≥ 1) of -½u'' + k x u = E u with u(0) = 0.
pub fn analytic_energy_airy_1d(convention: Convention, charge: f64, n: usize) -> Result<f64> {
    if !(charge > 0.0 && charge.is_finite()) {
        return Err(Error::InvalidCharge(charge));
    }
    let a = airy_negative_zero(n)?;
    let k = linear_slope(convention, charge);
    Ok(-a * (0.5 * k * k).cbrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VirialReport {
    /// ⟨T⟩ including the centrifugal term, E - ⟨V⟩.
    pub kinetic: f64,
    pub potential_mean: f64,
    pub r_dv_dr_mean: f64,
    /// |2⟨T⟩ - ⟨r V'⟩| / max(|⟨T⟩|, 1e-12).
    pub residual: f64,
}

/// Virial bookkeeping for a state returned by `solve_states` on `problem`.
pub fn virial_report(state: &BoundState, problem: &RadialProblem) -> Result<VirialReport> {
    let grid = &state.grid;
    if state.wavefunction.len() != grid.interior_points() {
        return Err(Error::StateMismatch(format!(
            "{} wavefunction values on a {}-point grid",
            state.wavefunction.len(),
            grid.interior_points()
        )));
    }
    let potential = problem.potential();
    let h = grid.spacing();
    let mut v_mean = 0.0;
    let mut rdv_mean = 0.0;
    for (r, u) in grid.nodes().zip(&state.wavefunction) {
        let w = h * u * u;
        v_mean += w * -potential.phi(r);
        rdv_mean += w * -r * potential.dphi_dr(r);
    }
    if !(v_mean.is_finite() && rdv_mean.is_finite()) {
        return Err(Error::StateMismatch("non-finite expectation values".into()));
    }
    let kinetic = state.energy - v_mean;
    let residual = (2.0 * kinetic - rdv_mean).abs() / kinetic.abs().max(1e-12);
    Ok(VirialReport { kinetic, potential_mean: v_mean, r_dv_dr_mean: rdv_mean, residual })
}
