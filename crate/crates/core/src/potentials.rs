//! Point-charge potentials in D dimensions.
//!
//! The dimension-consistent potential solves `-∇²φ = Q δ^D(x)` with
//! Q = 4πZ ([`Convention::Gaussian4Pi`]) or Q = S_{D-1}Z
//! ([`Convention::SolidAngle`]):
//!
//! | D   | φ(r)                                  |
//! |-----|---------------------------------------|
//! | 1   | -(Q/2)·r                              |
//! | 2   | -(Q/2π)·ln(r/r0)                      |
//! | ≥ 3 | Q / ((D-2)·S_{D-1}·r^{D-2})           |
//!
//! The newtonian family keeps `φ = Z/r` in every dimension. The electron
//! sees `V = -φ`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::specfun::sphere_surface_area;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `-Z/r` in every dimension.
    Newtonian,
    /// Green's function of the D-dimensional Laplacian.
    DimensionConsistent,
}

/// Source normalization in the Poisson equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Source 4πZ; gives φ = -2Z ln(r/r0) in two dimensions.
    #[default]
    Gaussian4Pi,
    /// Source S_{D-1}·Z.
    SolidAngle,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Newtonian => "newtonian",
            Family::DimensionConsistent => "consistent",
        }
    }
}

impl Convention {
    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Gaussian4Pi => "gaussian-4pi",
            Convention::SolidAngle => "solid-angle",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "newtonian" => Ok(Family::Newtonian),
            "consistent" | "dimension-consistent" => Ok(Family::DimensionConsistent),
            other => Err(Error::Config(format!(
                "unknown family `{other}` (expected newtonian or consistent)"
            ))),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-4pi" => Ok(Convention::Gaussian4Pi),
            "solid-angle" => Ok(Convention::SolidAngle),
            other => Err(Error::Config(format!(
                "unknown convention `{other}` (expected gaussian-4pi or solid-angle)"
            ))),
        }
    }
}

/// How V behaves as r → 0, which decides the small-r stability analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OriginBehavior {
    /// Weaker than r^-2 (Coulomb, logarithmic, linear). `coulomb` is the
    /// coefficient Z' in V ≈ -Z'/r (zero when there is no 1/r term).
    SubInverseSquare { coulomb: f64 },
    /// V = c/r² exactly.
    InverseSquare { coefficient: f64 },
    /// Attractive and more singular than r^-2.
    Supersingular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    family: Family,
    convention: Convention,
    dimension: u32,
    charge: f64,
    cutoff: f64,
}

impl PotentialModel {
    pub fn new(
        family: Family,
        convention: Convention,
        dimension: u32,
        charge: f64,
        cutoff: f64,
    ) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidDimension(i64::from(dimension)));
        }
        if !(charge > 0.0 && charge.is_finite()) {
            return Err(Error::InvalidCharge(charge));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::InvalidCutoff(cutoff));
        }
        Ok(Self { family, convention, dimension, charge, cutoff })
    }

    pub fn newtonian(dimension: u32, charge: f64) -> Result<Self> {
        Self::new(Family::Newtonian, Convention::default(), dimension, charge, 1.0)
    }

    /// Dimension-consistent potential with the default cutoff r0 = 1 bohr.
    pub fn consistent(dimension: u32, charge: f64, convention: Convention) -> Result<Self> {
        Self::new(Family::DimensionConsistent, convention, dimension, charge, 1.0)
    }

    pub fn with_cutoff(self, cutoff: f64) -> Result<Self> {
        Self::new(self.family, self.convention, self.dimension, self.charge, cutoff)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    fn area(&self) -> f64 {
        sphere_surface_area(i64::from(self.dimension)).expect("dimension validated")
    }

    /// Source strength Q of the Poisson equation under this model's convention.
    pub fn source_strength(&self) -> f64 {
        match self.convention {
            Convention::Gaussian4Pi => 4.0 * PI * self.charge,
            Convention::SolidAngle => self.area() * self.charge,
        }
    }

    /// φ_D(r).
    pub fn electrostatic_potential(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(self.phi(r))
    }

    /// V(r) = -φ_D(r), the potential energy of the electron.
    pub fn potential_energy(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(-self.phi(r))
    }

    pub(crate) fn phi(&self, r: f64) -> f64 {
        let z = self.charge;
        match self.family {
            Family::Newtonian => z / r,
            Family::DimensionConsistent => {
                let q = self.source_strength();
                match self.dimension {
                    1 => -0.5 * q * r,
                    2 => -q / (2.0 * PI) * (r / self.cutoff).ln(),
                    3 if self.convention == Convention::Gaussian4Pi => z / r,
                    d => q / ((d - 2) as f64 * self.area() * r.powi(d as i32 - 2)),
                }
            }
        }
    }

    /// dφ/dr, analytic.
    pub(crate) fn dphi_dr(&self, r: f64) -> f64 {
        let z = self.charge;
        match self.family {
            Family::Newtonian => -z / (r * r),
            Family::DimensionConsistent => {
                let q = self.source_strength();
                match self.dimension {
                    1 => -0.5 * q,
                    2 => -q / (2.0 * PI * r),
                    d => -q / (self.area() * r.powi(d as i32 - 1)),
                }
            }
        }
    }

    /// d²φ/dr², analytic.
    pub(crate) fn d2phi_dr2(&self, r: f64) -> f64 {
        let z = self.charge;
        match self.family {
            Family::Newtonian => 2.0 * z / (r * r * r),
            Family::DimensionConsistent => {
                let q = self.source_strength();
                match self.dimension {
                    1 => 0.0,
                    2 => q / (2.0 * PI * r * r),
                    d => (d - 1) as f64 * q / (self.area() * r.powi(d as i32)),
                }
            }
        }
    }

    /// dV/dr.
    pub fn force_gradient(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(-self.dphi_dr(r))
    }

    /// Gauss-law flux `-S_{D-1} r^{D-1} dφ/dr` through the sphere of radius r.
    /// Equals [`Self::source_strength`] for every r.
    pub fn enclosed_flux(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        if self.family == Family::Newtonian && self.dimension != 3 {
            return Err(Error::NoPoissonSolution(self.dimension));
        }
        let d = self.dimension as i32;
        Ok(-self.area() * r.powi(d - 1) * self.dphi_dr(r))
    }

    /// max over `samples` of |φ'' + (D-1)/r φ'|, derivatives by central
    /// differences of width `step`.
    pub fn poisson_residual(&self, samples: &[f64], step: f64) -> Result<f64> {
        if self.family == Family::Newtonian && self.dimension != 3 {
            return Err(Error::NoPoissonSolution(self.dimension));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidStep(step));
        }
        let mut worst: f64 = 0.0;
        for &r in samples {
            if !(r > 2.0 * step) {
                return Err(Error::SampleTooClose { r, step });
            }
            let (minus, mid, plus) = (self.phi(r - step), self.phi(r), self.phi(r + step));
            let second = (plus - 2.0 * mid + minus) / (step * step);
            let first = (plus - minus) / (2.0 * step);
            let laplacian = second + (self.dimension as f64 - 1.0) / r * first;
            worst = worst.max(laplacian.abs());
        }
        Ok(worst)
    }

    /// Whether V has a finite limit V(∞) = 0, so that E ≥ 0 means unbound.
    pub fn has_dissociation_threshold(&self) -> bool {
        match self.family {
            Family::Newtonian => true,
            Family::DimensionConsistent => self.dimension >= 3,
        }
    }

    /// V grows without bound as r → ∞ (consistent family, D = 1, 2).
    pub fn is_confining(&self) -> bool {
        !self.has_dissociation_threshold()
    }

    pub fn origin_behavior(&self) -> OriginBehavior {
        match (self.family, self.dimension) {
            (Family::Newtonian, _) | (Family::DimensionConsistent, 3) => {
                OriginBehavior::SubInverseSquare { coulomb: self.coulomb_coefficient() }
            }
            (Family::DimensionConsistent, 1 | 2) => {
                OriginBehavior::SubInverseSquare { coulomb: 0.0 }
            }
            (Family::DimensionConsistent, 4) => OriginBehavior::InverseSquare {
                coefficient: -self.source_strength() / (2.0 * self.area()),
            },
            (Family::DimensionConsistent, _) => OriginBehavior::Supersingular,
        }
    }

    /// Z' in V ≈ -Z'/r; zero for potentials without a Coulomb term.
    fn coulomb_coefficient(&self) -> f64 {
        match (self.family, self.dimension) {
            (Family::Newtonian, _) => self.charge,
            (Family::DimensionConsistent, 3) => self.source_strength() / self.area(),
            _ => 0.0,
        }
    }

    /// Coefficient c_V of an exact c_V/r² term in V (D = 4 consistent), else 0.
    pub fn inverse_square_coefficient(&self) -> f64 {
        match self.origin_behavior() {
            OriginBehavior::InverseSquare { coefficient } => coefficient,
            _ => 0.0,
        }
    }

    /// (κ, V₀) with V = κ ln r + V₀ exactly (consistent D = 2), else (0, 0).
    pub(crate) fn origin_logarithm(&self) -> (f64, f64) {
        if self.family == Family::DimensionConsistent && self.dimension == 2 {
            let kappa = self.source_strength() / (2.0 * PI);
            (kappa, -kappa * self.cutoff.ln())
        } else {
            (0.0, 0.0)
        }
    }

    /// V(r) with the exact inverse-square part removed.
    pub(crate) fn potential_without_inverse_square(&self, r: f64) -> f64 {
        match self.origin_behavior() {
            OriginBehavior::InverseSquare { .. } => 0.0,
            _ => -self.phi(r),
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn consistent(d: u32, z: f64, c: Convention) -> PotentialModel {
        PotentialModel::consistent(d, z, c).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(PotentialModel::newtonian(0, 1.0).is_err());
        assert!(PotentialModel::newtonian(3, 0.0).is_err());
        assert!(PotentialModel::newtonian(3, f64::NAN).is_err());
        assert!(PotentialModel::newtonian(3, 1.0).unwrap().with_cutoff(-1.0).is_err());
    }

    #[test]
    fn potential_examples() {
        let m = consistent(2, 1.0, Convention::Gaussian4Pi);
        assert_eq!(m.electrostatic_potential(1.0).unwrap(), 0.0);
        assert_relative_eq!(m.electrostatic_potential(E).unwrap(), -2.0, max_relative = 1e-15);
        for c in [Convention::Gaussian4Pi, Convention::SolidAngle] {
            assert_relative_eq!(
                consistent(3, 1.0, c).electrostatic_potential(2.0).unwrap(),
                0.5,
                max_relative = 1e-15
            );
        }
        assert!(m.electrostatic_potential(0.0).is_err());
        assert!(m.potential_energy(-1.0).is_err());
    }

    #[test]
    fn potential_energy_examples() {
        let newt = PotentialModel::newtonian(5, 1.0).unwrap();
        assert_eq!(newt.potential_energy(2.0).unwrap(), -0.5);
        let linear = consistent(1, 1.0, Convention::SolidAngle);
        assert_relative_eq!(linear.potential_energy(2.0).unwrap(), 2.0, max_relative = 1e-15);
        let d5 = consistent(5, 1.0, Convention::SolidAngle);
        assert_relative_eq!(d5.potential_energy(1.0).unwrap(), -1.0 / 3.0, max_relative = 1e-14);
        let log = consistent(2, 1.5, Convention::Gaussian4Pi);
        assert_relative_eq!(
            log.potential_energy(3.0).unwrap(),
            2.0 * 1.5 * 3.0_f64.ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn newtonian_ignores_convention_and_cutoff() {
        let a = PotentialModel::new(Family::Newtonian, Convention::SolidAngle, 6, 2.0, 7.0).unwrap();
        let b = PotentialModel::newtonian(6, 2.0).unwrap();
        for r in [0.1, 1.0, 3.0] {
            assert_eq!(a.potential_energy(r).unwrap(), b.potential_energy(r).unwrap());
        }
        let one_d = PotentialModel::newtonian(1, 1.0).unwrap();
        assert_eq!(one_d.electrostatic_potential(4.0).unwrap(), 0.25);
    }

    #[test]
    fn flux_examples() {
        for c in [Convention::Gaussian4Pi, Convention::SolidAngle] {
            assert_relative_eq!(
                consistent(3, 1.0, c).enclosed_flux(7.0).unwrap(),
                4.0 * PI,
                max_relative = 1e-14
            );
        }
        assert_relative_eq!(
            consistent(2, 1.0, Convention::Gaussian4Pi).enclosed_flux(0.1).unwrap(),
            4.0 * PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            consistent(2, 1.0, Convention::SolidAngle).enclosed_flux(5.0).unwrap(),
            2.0 * PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            PotentialModel::newtonian(3, 1.0).unwrap().enclosed_flux(2.0).unwrap(),
            4.0 * PI,
            max_relative = 1e-14
        );
        assert_eq!(
            PotentialModel::newtonian(4, 1.0).unwrap().enclosed_flux(2.0),
            Err(Error::NoPoissonSolution(4))
        );
    }

    #[test]
    fn poisson_residual_examples() {
        let d3 = consistent(3, 1.0, Convention::Gaussian4Pi);
        assert!(d3.poisson_residual(&[1.0, 2.0, 5.0], 1e-4).unwrap() < 1e-6);
        let d2 = consistent(2, 1.0, Convention::Gaussian4Pi);
        assert!(d2.poisson_residual(&[0.5, 1.0, 3.0], 1e-4).unwrap() < 1e-6);
        let d6 = consistent(6, 2.0, Convention::SolidAngle);
        assert!(d6.poisson_residual(&[1.0, 4.0], 1e-4).unwrap() < 1e-5);
        assert!(matches!(
            d3.poisson_residual(&[1e-4], 1e-4),
            Err(Error::SampleTooClose { .. })
        ));
        assert!(PotentialModel::newtonian(2, 1.0).unwrap().poisson_residual(&[1.0], 1e-4).is_err());
    }

    #[test]
    fn inverse_square_part_at_d4() {
        let m = consistent(4, 1.0, Convention::SolidAngle);
        assert_relative_eq!(m.inverse_square_coefficient(), -0.5, max_relative = 1e-15);
        assert_relative_eq!(
            m.potential_energy(2.0).unwrap(),
            -0.5 / 4.0,
            max_relative = 1e-14
        );
        let g = consistent(4, 1.0, Convention::Gaussian4Pi);
        assert_relative_eq!(g.inverse_square_coefficient(), -1.0 / PI, max_relative = 1e-14);
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let models = [
            consistent(1, 1.3, Convention::Gaussian4Pi),
            consistent(2, 0.7, Convention::SolidAngle),
            consistent(5, 2.0, Convention::SolidAngle),
            PotentialModel::newtonian(7, 1.1).unwrap(),
        ];
        let step = 1e-5;
        for m in models {
            for r in [0.6, 1.0, 2.5] {
                let fd1 = (m.phi(r + step) - m.phi(r - step)) / (2.0 * step);
                let fd2 = (m.phi(r + step) - 2.0 * m.phi(r) + m.phi(r - step)) / (step * step);
                assert!((fd1 - m.dphi_dr(r)).abs() < 1e-7 * (1.0 + fd1.abs()));
                assert!((fd2 - m.d2phi_dr2(r)).abs() < 1e-4 * (1.0 + fd2.abs()));
            }
        }
    }
}
