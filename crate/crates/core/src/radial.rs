//! The reduced radial problem `-½u'' + [K/r² + V(r)] u = E u`.

use serde::{Deserialize, Serialize};

use crate::potentials::{OriginBehavior, PotentialModel};
use crate::{Error, Result};

/// Critical inverse-square strength: -½u'' + c/r² u is bounded below iff c ≥ -1/8.
pub const CRITICAL_INVERSE_SQUARE: f64 = -0.125;

const MARGINAL_TOLERANCE: f64 = 1e-12;

/// K(l, D) = [l + (D-3)/2][l + (D-1)/2] / 2, so that the radial Hamiltonian
/// carries K/r². Defined as 0 for D = 1, where there is no rotation.
pub fn centrifugal_coefficient(l: i64, dimension: i64) -> Result<f64> {
    if l < 0 {
        return Err(Error::NegativeAngularMomentum(l));
    }
    if dimension < 1 {
        return Err(Error::InvalidDimension(dimension));
    }
    if dimension == 1 {
        return Ok(0.0);
    }
    // both factors are half-integers; (2a)(2b)/8 is exact
    let a = 2 * l + dimension - 3;
    let b = 2 * l + dimension - 1;
    Ok((a * b) as f64 / 8.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityKind {
    Regular,
    Marginal,
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityClass {
    pub kind: StabilityKind,
    /// c in U_eff ≈ c/r² as r → 0; `None` when V diverges faster than r^-2.
    pub net_inverse_square_coefficient: Option<f64>,
    /// Pure inverse-square attraction (consistent D = 4) has no length scale
    /// and therefore no discrete spectrum even when it is stable.
    pub no_intrinsic_bound_states: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    dimension: u32,
    angular_momentum: u32,
    potential: PotentialModel,
}

impl RadialProblem {
    pub fn new(dimension: u32, angular_momentum: u32, potential: PotentialModel) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidDimension(i64::from(dimension)));
        }
        if potential.dimension() != dimension {
            return Err(Error::DimensionMismatch {
                problem: dimension,
                potential: potential.dimension(),
            });
        }
        if dimension == 1 && angular_momentum != 0 {
            return Err(Error::AngularMomentumInOneDimension(angular_momentum));
        }
        Ok(Self { dimension, angular_momentum, potential })
    }

    /// Takes the dimension from the potential.
    pub fn with_potential(potential: PotentialModel, angular_momentum: u32) -> Result<Self> {
        Self::new(potential.dimension(), angular_momentum, potential)
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn angular_momentum(&self) -> u32 {
        self.angular_momentum
    }

    pub fn potential(&self) -> &PotentialModel {
        &self.potential
    }

    pub fn centrifugal(&self) -> f64 {
        centrifugal_coefficient(i64::from(self.angular_momentum), i64::from(self.dimension))
            .expect("validated on construction")
    }

    /// U_eff(r) = K/r² + V(r).
    pub fn effective_potential(&self, r: f64) -> Result<f64> {
        let v = self.potential.potential_energy(r)?;
        Ok(self.centrifugal() / (r * r) + v)
    }

    pub(crate) fn effective_potential_unchecked(&self, r: f64) -> f64 {
        self.centrifugal() / (r * r) - self.potential.phi(r)
    }

    /// dU_eff/dr.
    pub(crate) fn effective_potential_slope(&self, r: f64) -> f64 {
        -2.0 * self.centrifugal() / (r * r * r) - self.potential.dphi_dr(r)
    }

    /// d²U_eff/dr².
    pub(crate) fn effective_potential_curvature(&self, r: f64) -> f64 {
        6.0 * self.centrifugal() / (r * r * r * r) - self.potential.d2phi_dr2(r)
    }

    /// Net coefficient c of the c/r² behavior of U_eff at the origin.
    pub fn net_inverse_square(&self) -> Option<f64> {
        match self.potential.origin_behavior() {
            OriginBehavior::Supersingular => None,
            OriginBehavior::InverseSquare { coefficient } => Some(self.centrifugal() + coefficient),
            OriginBehavior::SubInverseSquare { .. } => Some(self.centrifugal()),
        }
    }

    /// Small-r classification: does the spectrum have a floor?
    pub fn classify_stability(&self) -> StabilityClass {
        let behavior = self.potential.origin_behavior();
        let Some(c) = self.net_inverse_square() else {
            return StabilityClass {
                kind: StabilityKind::Supercritical,
                net_inverse_square_coefficient: None,
                no_intrinsic_bound_states: false,
            };
        };
        let pure_inverse_square = matches!(behavior, OriginBehavior::InverseSquare { .. });
        let kind = if (c - CRITICAL_INVERSE_SQUARE).abs() <= MARGINAL_TOLERANCE {
            StabilityKind::Marginal
        } else if c > CRITICAL_INVERSE_SQUARE {
            StabilityKind::Regular
        } else {
            StabilityKind::Supercritical
        };
        StabilityClass {
            kind,
            net_inverse_square_coefficient: Some(c),
            no_intrinsic_bound_states: pure_inverse_square && kind != StabilityKind::Supercritical,
        }
    }

    /// Exponent s of the regular solution u ~ r^s at the origin,
    /// s = ½ + √(¼ + 2c). `None` when the problem is supercritical.
    pub fn origin_exponent(&self) -> Option<f64> {
        let c = self.net_inverse_square()?;
        let disc = 0.25 + 2.0 * c;
        if disc < -MARGINAL_TOLERANCE {
            return None;
        }
        Some(0.5 + disc.max(0.0).sqrt())
    }

    /// Coefficient a₁ of the regular series u = r^s (1 + a₁ r + ...).
    pub(crate) fn origin_linear_coefficient(&self) -> f64 {
        match (self.potential.origin_behavior(), self.origin_exponent()) {
            (OriginBehavior::SubInverseSquare { coulomb }, Some(s)) => -coulomb / s,
            _ => 0.0,
        }
    }
}
